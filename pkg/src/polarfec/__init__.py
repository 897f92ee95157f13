"""Polar / recursive-Plotkin forward error correction.

Construction, encoding (plain and systematic), two equivalent successive
decoders and a deterministic BIAWGN Monte-Carlo harness.  The hot kernels
run as a compiled extension when available (``polarfec.KERNEL_BACKEND``
tells which backend is active).
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .channel import ChannelModel, block_stream, transmit
from .code import (
    CodeSpec,
    encode,
    materialize_generator,
    read_info_set,
    row_weight,
    write_info_set,
)
from .construction import (
    Direction,
    Method,
    ReliabilityProfile,
    bec_profile,
    dega_profile,
    dega_step,
    eqsnr_profile,
    eqsnr_step,
    genie_profile,
    rm_profile,
    select_info_set,
)
from .decoding import DecodeResult, Decoder, msd_decode, scd_decode
from .numerics import (
    CAP_EPS,
    LLR_MAX,
    SNR_MAX,
    biawgn_capacity,
    biawgn_capacity_inverse,
    phi,
    phi_inverse,
)
from .simulation import (
    BlockPolicy,
    ConfigError,
    PointConfig,
    SimRecord,
    run_point,
    run_sweep,
    write_csv,
)
from .systematic import (
    SystematicEncodingError,
    SystematicSpec,
    choose_output_set,
    systematic_encode,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "ChannelModel", "block_stream", "transmit",
    "CodeSpec", "encode", "materialize_generator", "read_info_set",
    "row_weight", "write_info_set",
    "Direction", "Method", "ReliabilityProfile", "bec_profile",
    "dega_profile", "dega_step", "eqsnr_profile", "eqsnr_step",
    "genie_profile", "rm_profile", "select_info_set",
    "DecodeResult", "Decoder", "msd_decode", "scd_decode",
    "CAP_EPS", "LLR_MAX", "SNR_MAX", "biawgn_capacity",
    "biawgn_capacity_inverse", "phi", "phi_inverse",
    "BlockPolicy", "ConfigError", "PointConfig", "SimRecord",
    "run_point", "run_sweep", "write_csv",
    "SystematicEncodingError", "SystematicSpec", "choose_output_set",
    "systematic_encode",
]
