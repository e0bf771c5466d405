"""
edgedsc: lossless compression of correlated edge-node readings by
partitioning the parity-check matrix of a linear block code.

Nodes never talk to each other.  Each one drops a band of its data bits and
folds their partial syndrome into its tail bits; a central decoder pairs
payloads, corrects their XOR with the code, and recovers every node exactly
as long as the readings differ in at most ``t`` bits.
"""

from .codec import (
    CompressedPayload,
    DecodeReport,
    compress,
    compress_all,
    decode,
    decode_payload,
    dg_decode,
    encode_payload,
    fg_decode,
    pair_decode,
    zero_pad,
)
from .codes import (
    LinearBlockCode,
    build_from_parity,
    build_hamming,
    correct,
    gray_decode,
    gray_encode,
    syndrome,
)
from .errors import (
    CapacityExceeded,
    ConstructionError,
    DecodeFailure,
    GroupEmptied,
    UndecodableSyndrome,
    UsageError,
    WireFormatError,
)
from .gf2 import BinaryMatrix, BitBlock, hamming_weight, submatrix_rows, vec_mat_mul, xor
from .metrics import css_dg, css_empirical, css_fg, css_fg_limit, css_surface, ldr_probe, sw_admissible
from .schemes import NodePartition, build_dg, build_fg, fg_join, fg_leave, dg_rebuild_on_churn, validate_dg

__version__ = "0.1.0"

__all__ = [
    "BinaryMatrix",
    "BitBlock",
    "CapacityExceeded",
    "CompressedPayload",
    "ConstructionError",
    "DecodeFailure",
    "DecodeReport",
    "GroupEmptied",
    "LinearBlockCode",
    "NodePartition",
    "UndecodableSyndrome",
    "UsageError",
    "WireFormatError",
    "build_dg",
    "build_fg",
    "build_from_parity",
    "build_hamming",
    "compress",
    "compress_all",
    "correct",
    "css_dg",
    "css_empirical",
    "css_fg",
    "css_fg_limit",
    "css_surface",
    "decode",
    "decode_payload",
    "dg_decode",
    "dg_rebuild_on_churn",
    "encode_payload",
    "fg_decode",
    "fg_join",
    "fg_leave",
    "gray_decode",
    "gray_encode",
    "hamming_weight",
    "ldr_probe",
    "pair_decode",
    "submatrix_rows",
    "sw_admissible",
    "syndrome",
    "validate_dg",
    "vec_mat_mul",
    "xor",
    "zero_pad",
    "__version__",
]
