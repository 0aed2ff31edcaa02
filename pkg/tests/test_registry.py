import json

import pytest

from fncnl.corpus import FrameAnnotation, FrameElement
from fncnl.errors import IntegrityError
from fncnl.registry import (DEFAULT_REGISTRY_PATH, default_registry, leadership_registry, load_registry,
                            parse_token_spec, registry_from_dict, sophies_world_registry, token_spec)

PAPER_FRAMES = (
    "Being born, People by age, Death, Personal relationship, Being named, Residence, "
    "Education teaching, People by vocation, People by origin, Being employed, Hiring, "
    "Employment end, Membership, Change of leadership, Giving, Intentionally create, "
    "Participation, Earnings and losses, Public procurement, Possession, Lending, Trial, "
    "Attack, Win prize, Statement, Product line")


def minimal(kind="event", anchors=(), terminator=None, elements=None):
    return {"frames": {"F": {
        "kind": kind,
        "elements": elements or [{"name": "Agent", "filler_kind": "entity(Person)"},
                                 {"name": "Time", "filler_kind": "string"}],
        "anchor_fes": list(anchors), "terminator": terminator,
        "templates": {"en": [{"slot": "Agent"}, {"target": "did|do|VBD|O|do.v.01"}]}}}}


def test_default_registry_has_the_26_frames():
    reg = default_registry()
    assert len(reg) == 26
    assert set(reg.frame_names()) == {n.strip().replace(" ", "_") for n in PAPER_FRAMES.split(",")}
    emp = reg["Being_employed"]
    assert emp.kind == "state" and set(emp.anchor_fes) == {"Employee", "Employer"}
    assert emp.terminator == "Employment_end"
    assert reg["Attack"].kind == "event" and reg["Attack"].anchor_fes == ()
    assert all("Time" in reg[f].element_names for f in reg)
    assert all(set(reg[f].templates) == {"en", "lv"} for f in reg)


def test_default_file_path_loads_same_registry():
    assert load_registry(DEFAULT_REGISTRY_PATH).frame_names() == default_registry().frame_names()


def test_state_without_anchors_rejected():
    with pytest.raises(IntegrityError, match="anchor"):
        registry_from_dict(minimal(kind="state"))


def test_missing_time_rejected():
    with pytest.raises(IntegrityError, match="Time"):
        registry_from_dict(minimal(elements=[{"name": "Agent", "filler_kind": "entity(Person)"}]))


def test_unknown_terminator_rejected():
    with pytest.raises(IntegrityError, match="terminator"):
        registry_from_dict(minimal(kind="state", anchors=["Agent"], terminator="Nope"))


def test_duplicate_frame_rejected(tmp_path):
    body = json.dumps(minimal()["frames"]["F"])
    path = tmp_path / "dup.json"
    path.write_text('{"frames": {"F": %s, "F": %s}}' % (body, body))
    with pytest.raises(IntegrityError, match="dup.json: duplicate key 'F'"):
        load_registry(path)
    with pytest.raises(IntegrityError, match="duplicate|already"):
        default_registry().extended(default_registry().restricted(["Attack"]))


def test_template_slot_must_name_an_fe():
    data = minimal()
    data["frames"]["F"]["templates"]["en"].append({"slot": "Ghost"})
    with pytest.raises(IntegrityError, match="Ghost"):
        registry_from_dict(data)


def test_story_frames_extend_the_registry():
    reg = sophies_world_registry()
    assert len(reg) == 30
    assert {"Self_motion", "Discussion", "Opinion", "Similarity"} <= set(reg.frame_names())
    assert reg["Similarity"].is_state


def test_leadership_extension():
    reg = leadership_registry()
    assert reg["Leadership"].anchor_fes == ("Role", "Governed")


def test_check_annotation():
    reg = default_registry()
    reg.check_annotation(FrameAnnotation("Attack", (0, 1), (FrameElement("Victim", (1, 2)),)))
    with pytest.raises(IntegrityError):
        reg.check_annotation(FrameAnnotation("Attack", (0, 1), (FrameElement("Employer", (1, 2)),)))
    with pytest.raises(IntegrityError):
        reg.check_annotation(FrameAnnotation("Revenge", (0, 1)))


def test_token_specs():
    t = parse_token_spec("amatā|amats|NN|O|employ.v.01")
    assert (t.surface, t.lemma, t.pos, t.ner, t.hypernym) == ("amatā", "amats", "NN", "O", "employ.v.01")
    assert token_spec(t) == "amatā|amats|NN|O|employ.v.01"
    bare = parse_token_spec("Was")
    assert (bare.lemma, bare.pos, bare.ner, bare.hypernym) == ("was", "X", "O", "#NONE#")


def test_to_dict_round_trip():
    reg = default_registry()
    again = registry_from_dict(reg.to_dict())
    assert again.to_dict() == reg.to_dict()
