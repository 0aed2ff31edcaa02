# %% [markdown]
# # One sentence, end to end
#
# A sentence about a lecturing stint is featurized in
# `tests/fixtures/stint_employment.tsv` together with three sentences that
# use "stint" the same way and three that do not.  Training on that tiny
# corpus is enough to recover all three frame elements.

# %%
from pathlib import Path

from fncnl.c60 import format_pattern
from fncnl.corpus import load_corpus
from fncnl.parser import parse_sentence, train_model
from fncnl.registry import default_registry

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "stint_employment.tsv"
corpus = load_corpus(FIXTURE)
model, _ = train_model(corpus, default_registry())

# %% [markdown]
# The learned rules, target stage first.  Note how Position is carried by
# relative position to the target rather than by any particular word.

# %%
for rs in list(model.target_rulesets.values()) + list(model.fe_rulesets.values()):
    for rule in rs.rules:
        print(f"{rs.label:28} {format_pattern(rule.pattern)}  n={rule.n} m={rule.m}")

# %%
sentence = corpus[0]
print(sentence.text)
for ann in parse_sentence(sentence, model):
    print(ann.frame, "<-", sentence.span_text(ann.target))
    for el in ann.elements:
        print(f"  {el.fe:9} {sentence.span_text(el.span)}")
