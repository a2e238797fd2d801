# coding: utf-8

# # The command line
#
# Each stage has a subcommand. The exit code follows the verdict:
# 0 admissible, 1 inadmissible, 2 unknown, 3 usage or parse error.

# In[1]:

import io

from probenv.cli import run

for argv in (
    ["check", "appendix_a"],
    ["interval", "appendix_c_free", "P(E3)"],
    ["check", "five_events", "--set", "a=11/20", "--format", "structured"],
):
    out = io.StringIO()
    code = run(argv, out)
    print("$ probenv", " ".join(argv), "->", code)
    print(out.getvalue()[:400])
