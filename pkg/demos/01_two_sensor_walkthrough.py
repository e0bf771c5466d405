# coding: utf-8

# # Two sensors, one decoder
#
# Two nodes read almost the same value.  Each one sends a short payload built
# from its own reading only; the decoder recovers both readings exactly.

# In[1]:

from edgedsc import BitBlock, build_dg, build_hamming, compress
from edgedsc.codec import pair_decode_detail

code = build_hamming(3)
print(code.n, code.k, code.t)
print(code.Ht.array)


# The top four rows of H^T are the P block.  With two nodes each one owns two
# of those rows.

# In[2]:

scheme = build_dg(code, 2)
for p in scheme.partitions:
    print(p)


# In[3]:

x = BitBlock.from_str("1011010")
y = BitBlock.from_str("1011110")
px = compress(code, scheme.partition(1), x)
py = compress(code, scheme.partition(2), y)
print(px.body, len(px), "bits instead of", code.n)
print(py.body, len(py), "bits instead of", code.n)


# The decoder zero-pads both payloads, XORs them and lets the code correct the
# one-bit difference.

# In[4]:

trace = pair_decode_detail(code, px, scheme.partition(1), py, scheme.partition(2))
print("padded", trace.padded_first, trace.padded_second)
print("c       ", trace.c)
print("syndrome", trace.syndrome)
print("error   ", trace.correction.error_pattern)
print("codeword", trace.correction.codeword)
print(trace.first == x, trace.second == y)


# Two bits apart is too far for a t = 1 code.  Nothing fails loudly; the answer
# is just wrong.

# In[5]:

z = x.flip([1, 2])
pz = compress(code, scheme.partition(2), z)
trace = pair_decode_detail(code, px, scheme.partition(1), pz, scheme.partition(2))
print(trace.first == x, trace.second == z)
