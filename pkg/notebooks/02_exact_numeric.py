# coding: utf-8

# # Exact numbers and Sturm chains
#
# All arithmetic is rational. Roots of univariate polynomials are counted with
# Sturm chains and located in rational intervals, never with floats.

# In[1]:

from fractions import Fraction as F

from probenv.numeric.interval import RatInterval
from probenv.numeric.sturm import count_roots, isolate_roots, refine_root, sturm_chain, uv_eval

a = F(1, 2)
p = [a, F(-1), F(0), F(0), F(0), F(1)]  # z^5 - z + 1/2, lowest degree first
for q in sturm_chain(p):
    print(q, "at 0:", uv_eval(q, 0), "at 1:", uv_eval(q, 1))


# Two roots in [0, 1]; each gets an isolating interval that can be tightened at will.

# In[2]:

unit = RatInterval(F(0), F(1))
print(count_roots(p, unit))
for iv in isolate_roots(p, unit):
    tight = refine_root(p, iv, F(1, 10**6))
    print(iv, "->", float(tight.lo), float(tight.hi))
