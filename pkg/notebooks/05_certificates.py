# coding: utf-8

# # Certificates
#
# A certificate is plain text. Checking it needs only polynomial expansion,
# so anyone can re-verify a refutation without trusting the solver.

# In[1]:

import dataclasses
from importlib import resources

from probenv.atomization import atomize
from probenv.certificates import parse_certificate, serialize, verify_certificate
from probenv.feasibility import solve
from probenv.requirements import parse_spec

rs = parse_spec((resources.files("probenv") / "specs" / "appendix_a.penv").read_text())
sys = atomize(rs)
cert = solve(rs).certificate
text = serialize(cert, sys.digest())
print(text)


# Round trip, then tamper with one coefficient.

# In[2]:

back, digest = parse_certificate(text)
print(verify_certificate(back, sys))
r, c = back.coefficients[0]
bad = dataclasses.replace(back, coefficients=((r, c + 1),) + back.coefficients[1:])
print(verify_certificate(bad, sys))
