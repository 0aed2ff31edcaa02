"""FrameNet controlled-language toolkit: rule-learned frame parsing, entity
linking, a temporal frame-fact store and verbalization back to text."""

from .akr import TemporalStore, TimeValue, entity_profile, resolve_time
from .c60 import LearnerConfig, Rule, RuleSet, classify, laplace, learn_ruleset
from .corpus import (FrameAnnotation, FrameElement, Sentence, Token, extract_fe_window,
                     extract_window, load_corpus, write_corpus)
from .evaluation import f1, per_frame_report, score_frame_elements, score_targets
from .nel import Entity, EntityRef, Gazetteer, UnidentifiedString, link_mention, load_gazetteer
from .parser import ParserModel, parse_sentence, train_model
from .registry import FrameRegistry, default_registry, load_registry
from .verbalizer import render_profile, roundtrip_model, verbalize

__all__ = [
    "TemporalStore", "TimeValue", "entity_profile", "resolve_time",
    "LearnerConfig", "Rule", "RuleSet", "classify", "laplace", "learn_ruleset",
    "FrameAnnotation", "FrameElement", "Sentence", "Token", "extract_fe_window",
    "extract_window", "load_corpus", "write_corpus",
    "f1", "per_frame_report", "score_frame_elements", "score_targets",
    "Entity", "EntityRef", "Gazetteer", "UnidentifiedString", "link_mention", "load_gazetteer",
    "ParserModel", "parse_sentence", "train_model",
    "FrameRegistry", "default_registry", "load_registry",
    "render_profile", "roundtrip_model", "verbalize",
]

__version__ = "0.1.0"
