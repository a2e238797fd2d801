# coding: utf-8

# # Dutch books
#
# A refutation becomes a game on independent copies of the events. Someone who holds
# the inconsistent beliefs values the game as favorable, yet it pays a constant on
# every joint outcome.

# In[1]:

from importlib import resources

from probenv.atomization import atomize
from probenv.certificates import parse_certificate
from probenv.dutchbook import believed_ledger, build_game, realized_values
from probenv.requirements import parse_spec

specs = resources.files("probenv") / "specs"
sys = atomize(parse_spec((specs / "two_event_conditional.penv").read_text()))
cert, _ = parse_certificate((specs / "two_event_conditional.cert").read_text())

g = build_game(cert, sys, mode="symmetrized")
r = realized_values(g)
print("copies", g.copies_used, "outcomes", r.outcomes, "values", r.values, r.flag)


# In[2]:

led = believed_ledger(g, sys, r)
print("believed", led.aggregate, "book", led.kind)
for e in led.entries[:3]:
    print(e.role, e.believed, e.label)
