"""Real-number QC-LDPC codes: addition-only encoding, GDSU decoding and the GDBF baseline."""
from .channel_sim import Amplitude, ChannelModel, SimConfig, SimStats, inject_errors, run_point, sweep
from .complexity import complexity_report, table_counts
from .encoder import compute_first_parity, compute_lambda, back_substitute, encode, syndrome
from .gdbf import binary_encode, gdbf_decode, gdbf_decode_batch
from .gdsu import DecodeResult, DecoderParams, decode, decode_batch
from .qc_code import (BaseMatrix, ParityStructure, SparseParityMatrix, builtin_code,
                      detect_structure, expand, load_base, parse_base_matrix, write_base_matrix)
from .quantize import (FixedPointFormat, decode_fixed, encode_fixed, quantize_frame,
                       required_parity_bits)

__version__ = "0.1.0"
