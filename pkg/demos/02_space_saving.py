# coding: utf-8

# # How much does each layout save?
#
# Space saving is 1 - sent/raw.  Disjoint grouping splits the k systematic rows
# across all N nodes; flexible grouping uses two groups with complementary row
# bands.

# In[1]:

from edgedsc import build_dg, build_fg, build_hamming, compress_all, css_empirical
from edgedsc.metrics import css_of_scheme, format_css
from edgedsc.gf2 import BitBlock

code = build_hamming(3)
N = 4
layouts = {
    "DG": build_dg(code, N),
    "FG 2/2, r=2": build_fg(code, N, r_g1=2, group_sizes=(2, 2)),
    "FG 1/3, r=0": build_fg(code, N, r_g1=0, group_sizes=(1, 3)),
}


# The closed form and the measured payload sizes agree exactly.

# In[2]:

reading = [BitBlock(0b0110011, code.n)] * N
for name, scheme in layouts.items():
    sent = sum(len(p) for p in compress_all(scheme, reading))
    measured = css_empirical(N * code.n, sent)
    print(f"{name:<12} {format_css(css_of_scheme(scheme), N * code.n)}  measured {measured}")


# A lone node in group 1 that owns no rows lets the other group drop all k data
# bits.  As N grows that approaches k/n.

# In[3]:

for order in range(3, 7):
    c = build_hamming(order)
    for N in (2, 10, 1000):
        fg = build_fg(c, N, r_g1=0, group_sizes=(1, N - 1))
        print(c.name, N, f"{float(css_of_scheme(fg)):.4f}", "limit", f"{c.k / c.n:.4f}")
