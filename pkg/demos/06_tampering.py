# coding: utf-8

# # What a liar can and cannot do
#
# Under disjoint grouping every node is decoded against every other node and
# the most common answer wins.

# In[1]:

from edgedsc import build_dg, build_fg, build_hamming, compress_all, dg_decode, fg_decode
from edgedsc.gf2 import BitBlock
from edgedsc.netsim import inject_tamper, run_tamper_trials

code = build_hamming(4)
scheme = build_dg(code, 5)
msg = BitBlock(0b101100111000101, code.n)
payloads = compress_all(scheme, [msg] * 5)
bad = inject_tamper(payloads, 3, [2, 9])
report = dg_decode(scheme, bad)
for nid, nd in report.nodes.items():
    print(nid, nd.recovered == msg, nd.integrity_alert, sorted(nd.vote_tally.values()))


# In[2]:

stats = run_tamper_trials(scheme, 2000, seed=1)
print(stats.honest_rate, stats.trials_with_alert, stats.alert_mismatches)


# Two liars out of five can tie an honest node's vote 2-2.  Six nodes with two
# liars keep a strict honest majority again.

# In[3]:

print(run_tamper_trials(build_dg(code, 5), 2000, tampered=2, seed=1).honest_rate)
print(run_tamper_trials(build_dg(code, 6), 2000, tampered=2, seed=1).honest_rate)


# Flexible grouping in single mode trusts one partner per node.  Corrupt the
# first node of group 2 and all of group 1 goes with it; vote mode shrugs.

# In[4]:

fg = build_fg(code, 6, 0.5, 5)
payloads = compress_all(fg, [msg] * 6)
bad = inject_tamper(payloads, fg.group(2)[0], [1, 2])
for mode in ("single", "vote"):
    rep = fg_decode(fg, bad, mode)
    print(mode, [rep.recovered[i] == msg for i in fg.group(1)])
