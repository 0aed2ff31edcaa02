# %% [markdown]
# # Who held the office on a given day?
#
# State frames stay true until a newer fact with the same anchors replaces
# them.  Two leadership facts about the French presidency are enough to
# show it, the first dated only by its year.

# %%
import datetime

from fncnl.akr import TemporalStore, TimeValue
from fncnl.nel import Entity, EntityRef, UnidentifiedString
from fncnl.registry import leadership_registry
from fncnl.verbalizer import verbalize_text

registry = leadership_registry()
people = {"e4": Entity("e4", "Person", "Nicolas Sarkozy"), "e5": Entity("e5", "Person", "François Hollande")}
store = TemporalStore(registry)

office = {"Role": UnidentifiedString("president"), "Governed": UnidentifiedString("France")}
store.record("Leadership", {"Leader": EntityRef("e4"), **office, "Time": UnidentifiedString("2007")},
             TimeValue("approx", datetime.date(2007, 7, 1)), entities=people)
store.record("Leadership", {"Leader": EntityRef("e5"), **office},
             TimeValue("date", datetime.date(2012, 5, 15)), entities=people)

# %%
for inst in store.instances():
    print(inst.time, "|", verbalize_text(inst, "en", registry, people))

# %% [markdown]
# A year is read as 1 July, an approximation the store keeps marked as
# such.  Asking on three days shows the hand-over.

# %%
for day in ["2006-12-31", "2010-03-01", "2012-05-14", "2012-05-15", "2020-01-01"]:
    facts = store.facts_at(datetime.date.fromisoformat(day))
    names = [people[f.fillers["Leader"].entity_id].canonical for f in facts]
    print(day, names or "-")
