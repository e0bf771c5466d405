# coding: utf-8

# # The whole FG design space at N = 1000
#
# Every (N_g1, r_g1) pair for Hamming(63,57).  The grid is 999 x 58 and costs
# a single numpy broadcast.

# In[1]:

import numpy as np

from edgedsc import build_hamming, css_surface

code = build_hamming(6)
surface = css_surface(code, 1000)
print(surface.saved.shape)


# In[2]:

hi = surface.argmax()
print("best", hi, surface.at(*hi), float(surface.at(*hi)))
print("balanced", surface.at(500, 28), float(surface.at(500, 28)))
print("worst", surface.argmin(), float(surface.at(*surface.argmin())))


# Both lopsided corners tie: one node that owns nothing opposite 999 that own
# everything, or the mirror image.  Along r_g1 the saving is linear, so the
# optimum always sits on an edge.

# In[3]:

v = surface.values
print(np.allclose(np.diff(v, 2, axis=1), 0))
print(v[0, :3], v[-1, -3:])


# Uncomment to draw it if matplotlib is around.

# In[4]:

# import matplotlib.pyplot as plt
# plt.imshow(surface.values.T, origin="lower", aspect="auto",
#            extent=(1, 999, 0, 57))
# plt.xlabel("N_g1"); plt.ylabel("r_g1"); plt.colorbar(); plt.show()

with open("surface_63_57.csv", "w", newline="") as fh:
    surface.to_csv(fh)
