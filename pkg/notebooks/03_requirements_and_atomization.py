# coding: utf-8

# # From requirements to a polynomial system
#
# A spec lists events and requirements. Atomization rewrites every probability
# as a sum of atom probabilities y_a, giving polynomial rows over the y's.

# In[1]:

from probenv.atomization import atomize
from probenv.requirements import parse_spec

text = """
events A1 A2
independent A1, A2
P(A1 given A2) = 1/2
P(A1) != 1/2
"""
rs = parse_spec(text)
for c in rs.constraints:
    print(c)


# In[2]:

sys = atomize(rs)
print(sys.format())
print("digest", sys.digest())
