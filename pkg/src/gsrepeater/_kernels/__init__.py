"""Kernel selection.

Imports the compiled extension when present, otherwise the pure-Python
reference implementation.  ``GSREPEATER_PURE=1`` forces the fallback (used
by the parity tests and the benchmark).
"""

import os

if os.environ.get("GSREPEATER_PURE"):
    from gsrepeater._kernels import reference as _impl
else:
    try:
        from gsrepeater._kernels import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        from gsrepeater._kernels import reference as _impl

IMPL_NAME = _impl.IMPL_NAME

binary_entropy = _impl.binary_entropy
secret_fraction = _impl.secret_fraction
indirect_profile = _impl.indirect_profile
tree_node_success = _impl.tree_node_success
indirect_errors = _impl.indirect_errors
tree_decoding_error = _impl.tree_decoding_error
tree_link = _impl.tree_link
rgs_components = _impl.rgs_components
rgs_errors = _impl.rgs_errors
rgs_link = _impl.rgs_link
tree_best_m = _impl.tree_best_m
rgs_best_m = _impl.rgs_best_m

__all__ = [
    "IMPL_NAME",
    "binary_entropy",
    "secret_fraction",
    "indirect_profile",
    "tree_node_success",
    "indirect_errors",
    "tree_decoding_error",
    "tree_link",
    "rgs_components",
    "rgs_errors",
    "rgs_link",
    "tree_best_m",
    "rgs_best_m",
]
