# coding: utf-8

# # Nodes come and go
#
# Disjoint grouping re-partitions on every change, so every live node gets a
# new assignment.  Flexible grouping tells only the newcomer which group it
# joined; leaving costs nothing.

# In[1]:

from edgedsc import build_hamming
from edgedsc.netsim import parse_events, run_churn

code = build_hamming(5)
events = parse_events("joins:10,leaves:5", [1, 2, 3])
fg = run_churn("fg", events, code, 3)
dg = run_churn("dg", events, code, 3)
for ev, a, b in zip(events, fg.entries, dg.entries):
    print(ev, a.messages, b.messages)
print("total", fg.total_messages, dg.total_messages)
