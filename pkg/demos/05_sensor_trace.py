# coding: utf-8

# # A drifting sensor field
#
# Readings share a slowly wandering base; each node adds an offset inside a
# window.  Gray coding keeps neighbouring values one bit apart.

# In[1]:

from edgedsc import build_dg, build_fg, build_hamming
from edgedsc.netsim import CorrelationModel, generate_trace, run_simulation

code = build_hamming(3)
trace = generate_trace(CorrelationModel(code.n, window=1, drift=1, seed=7), 4, 1000)
print(trace.values[:5])


# In[2]:

for scheme in (build_dg(code, 4), build_fg(code, 4, 0.5, 2)):
    rep = run_simulation(scheme, trace)
    print(scheme.kind, rep.decode_success_rate, rep.empirical_css, rep.integrity_alerts)


# Widen the window past what the code corrects and decoding starts to slip.
# The vote flags the disagreement.

# In[3]:

for window in (1, 2, 3, 6):
    wide = generate_trace(CorrelationModel(code.n, window=window, seed=7), 4, 1000)
    rep = run_simulation(build_dg(code, 4), wide)
    print(window, f"{rep.decode_success_rate:.3f}", rep.integrity_alerts)
