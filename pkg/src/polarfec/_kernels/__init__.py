"""Hot-loop kernels: compiled extension if available, pure Python otherwise.

Both backends implement the same five entry points with identical semantics
(same recursion schedule, same clamping, same tie handling), so results do
not depend on which one is active.  ``BACKEND`` names the selected one.
"""

try:
    from . import _ckernels as _impl

    BACKEND = "c"
except ImportError:  # extension not built; interpreter fallback
    from . import _pykernels as _impl

    BACKEND = "python"

encode_inplace = _impl.encode_inplace
decode_llr = _impl.decode_llr
decode_pdiff = _impl.decode_pdiff
decode_llr_genie = _impl.decode_llr_genie
scratch_sizes = _impl.scratch_sizes
