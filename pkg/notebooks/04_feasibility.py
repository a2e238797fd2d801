# coding: utf-8

# # Deciding admissibility
#
# The solver returns one of three verdicts. Admissible comes with an exact witness,
# inadmissible with a checkable certificate, unknown with the reason it stopped.

# In[1]:

from importlib import resources

from probenv.feasibility import feasibility_interval, solve
from probenv.requirements import parse_objective, parse_spec


def shipped(name, **params):
    text = (resources.files("probenv") / "specs" / name).read_text()
    return parse_spec(text, {k: str(v) for k, v in params.items()})


for a in ("1/2", "106/200", "107/200", "11/20"):
    v = solve(shipped("five_events.penv", a=a))
    print(a, v.kind, v.trace[-1])


# The free weather example pins P(E3) to a single value.

# In[2]:

rs = shipped("appendix_c_free.penv")
print(feasibility_interval(rs, parse_objective(rs, "P(E3)")))
print(feasibility_interval(rs, parse_objective(rs, "P(E1 & E2 & E3)")))
