# %% [markdown]
# # An entity profile from repeated reports
#
# News archives repeat themselves.  The store folds identical reports into
# one instance and keeps the count, which is what ranks a profile.

# %%
from fncnl.akr import TemporalStore, entity_profile
from fncnl.nel import Entity, EntityRef, UnidentifiedString
from fncnl.registry import default_registry
from fncnl.verbalizer import render_profile

registry = default_registry()
ieva = {"e1": Entity("e1", "Person", "Ieva Akuratere")}
store = TemporalStore(registry)

reports = {"solista": 23, "puķu feja": 8, "mūziķe": 5, "deputāte": 4}
for position, times in reports.items():
    for _ in range(times):
        store.record("Being_employed", {"Employee": EntityRef("e1"), "Position": UnidentifiedString(position)},
                     entities=ieva)
store.record("Being_born", {"Child": EntityRef("e1"), "Place": UnidentifiedString("Rīga")}, entities=ieva)

print(len(store.log), "reports,", len(store), "distinct facts")

# %% [markdown]
# Rendered in Latvian, entities carry their id so a reader can follow the
# link; the bracketed number is how often the fact was seen.

# %%
print(render_profile(entity_profile(store, "e1"), "lv", registry, store.entities))
