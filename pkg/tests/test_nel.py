import pytest
from hypothesis import given
from hypothesis import strategies as st

from fncnl.akr import TemporalStore
from fncnl.errors import FormatError
from fncnl.nel import (Entity, EntityRef, Gazetteer, UnidentifiedString, link_mention, load_gazetteer,
                       normalize, write_gazetteer)
from fncnl.registry import default_registry


def test_fixture_gazetteer(fixtures):
    gaz = load_gazetteer(fixtures / "gazetteer.tsv")
    assert len(gaz) == 7
    for ent in gaz:
        assert ent.canonical in ent.aliases
        for alias in ent.aliases:
            assert ent.id in gaz.lookup(alias)


def test_two_entity_file(tmp_path):
    path = tmp_path / "g.tsv"
    path.write_text("e1\tPerson\tIeva Akuratere\tI. Akuratere\no1\tOrganization\tRīgas dome\tRīgas domē|RD\n")
    gaz = load_gazetteer(path)
    assert len(gaz) == 2
    for alias, eid in [("Ieva Akuratere", "e1"), ("I. Akuratere", "e1"), ("Rīgas domē", "o1"), ("RD", "o1")]:
        assert gaz.lookup(alias) == {eid}


def test_shared_alias_is_an_ambiguity_set(fixtures):
    gaz = load_gazetteer(fixtures / "gazetteer.tsv")
    assert gaz.lookup("J. Smith") == {"p1", "p2"}


def test_empty_file(tmp_path):
    path = tmp_path / "g.tsv"
    path.write_text("")
    gaz = load_gazetteer(path)
    assert len(gaz) == 0
    assert link_mention("Ieva Akuratere", "entity(Person)", gaz) == UnidentifiedString("Ieva Akuratere")


@pytest.mark.parametrize("text,message", [
    ("e1\tPerson\tA\t\ne1\tPerson\tB\t\n", "duplicate entity id"),
    ("e1\tPerson\t \t\n", "empty canonical"),
    ("e1\tPerson\n", "4 tab-separated"),
    ("e1\tPlace\tRiga\t\n", "kind"),
])
def test_bad_gazetteer(tmp_path, text, message):
    path = tmp_path / "g.tsv"
    path.write_text(text)
    with pytest.raises(FormatError, match=message):
        load_gazetteer(path)


def test_write_round_trip(tmp_path, fixtures):
    gaz = load_gazetteer(fixtures / "gazetteer.tsv")
    write_gazetteer(gaz, tmp_path / "g.tsv")
    again = load_gazetteer(tmp_path / "g.tsv")
    assert sorted((e.id, e.kind, e.canonical, e.aliases) for e in again) == \
        sorted((e.id, e.kind, e.canonical, e.aliases) for e in gaz)


def test_link_known_and_unknown(fixtures):
    gaz = load_gazetteer(fixtures / "gazetteer.tsv")
    assert link_mention("Ieva Akuratere", "entity(Person)", gaz) == EntityRef("e1")
    assert link_mention("  ieva   AKURATERE ", "entity(any)", gaz) == EntityRef("e1")
    assert link_mention("a soloist", "entity(Person)", gaz) == UnidentifiedString("a soloist")


def test_kind_restriction(fixtures):
    gaz = load_gazetteer(fixtures / "gazetteer.tsv")
    assert link_mention("UCL", "entity(Person)", gaz) == UnidentifiedString("UCL")
    assert link_mention("UCL", "entity(Organization)", gaz) == EntityRef("o2")
    assert link_mention("UCL", "string", gaz) == UnidentifiedString("UCL")


def _seeded_store(gaz, counts):
    store = TemporalStore(default_registry())
    for eid, k in counts.items():
        for j in range(k):
            store.record("Being_born", {"Child": EntityRef(eid), "Place": UnidentifiedString(f"town{j}")},
                         entities={eid: gaz[eid]})
    return store


def test_ambiguity_resolved_by_instance_count(fixtures):
    gaz = load_gazetteer(fixtures / "gazetteer.tsv")
    store = _seeded_store(gaz, {"p1": 7, "p2": 2})
    assert link_mention("J. Smith", "entity(Person)", gaz, store) == EntityRef("p1")


@pytest.mark.parametrize("counts", [{}, {"p1": 3, "p2": 3}])
def test_ambiguity_tie_stays_unidentified(fixtures, counts):
    gaz = load_gazetteer(fixtures / "gazetteer.tsv")
    store = _seeded_store(gaz, counts)
    assert link_mention("J. Smith", "entity(Person)", gaz, store) == UnidentifiedString("J. Smith")
    assert link_mention("J. Smith", "entity(Person)", gaz) == UnidentifiedString("J. Smith")


def test_casefold_is_configurable():
    gaz = Gazetteer([Entity("e1", "Person", "Ann Lee")], casefold=False)
    assert link_mention("ann lee", "entity(Person)", gaz) == UnidentifiedString("ann lee")
    assert link_mention("Ann  Lee", "entity(Person)", gaz) == EntityRef("e1")
    assert normalize(" A\t b ") == "a b"


GAZ = Gazetteer([Entity("a", "Person", "Sam", frozenset({"S"})), Entity("b", "Person", "Sue", frozenset({"S"})),
                 Entity("c", "Organization", "S Corp", frozenset({"S"}))])


@given(st.integers(0, 6), st.integers(0, 6), st.integers(1, 4),
       st.sampled_from(["entity(Person)", "entity(Organization)", "entity(any)", "string"]),
       st.sampled_from(["S", "s", "Sam", "S Corp", "nobody"]))
def test_linking_is_total_kind_safe_and_monotone(na, nb, extra, kind, text):
    counts = {"a": na, "b": nb}
    store = _seeded_store(GAZ, counts)
    before = link_mention(text, kind, GAZ, store)
    if isinstance(before, EntityRef):
        assert before.entity_id in GAZ
        ent = GAZ[before.entity_id]
        assert kind in ("entity(any)", f"entity({ent.kind})")
    else:
        assert before == UnidentifiedString(text)
    if before == EntityRef("a"):
        more = _seeded_store(GAZ, {"a": na + extra, "b": nb})
        assert link_mention(text, kind, GAZ, more) == EntityRef("a")
