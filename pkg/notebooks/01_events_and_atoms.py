# coding: utf-8

# # Events and atoms
#
# Every boolean combination of n events is a set of atoms. An atom is a bitmask:
# bit i says whether event i is true. An event set is itself a bitmask over the 2^n atoms.

# In[1]:

from probenv.events import And, Event, EventId, Not, Or, atom_label, atoms_of, format_expr

A = EventId(0, "A")
B = EventId(1, "B")
e = Or(And(Event(A), Not(Event(B))), Event(B))
print(format_expr(e))


# The expression above simplifies to A or B; its atom set says exactly that.

# In[2]:

s = atoms_of(e, 2)
print(bin(s.bits))
for a in range(4):
    print(a, atom_label(a, [A, B]), (s.bits >> a) & 1)
