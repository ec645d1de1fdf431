"""Select the rewriting kernel at import time.

The compiled extension is used when it was built; setting the environment
variable ``QBUNDLE_PURE=1`` forces the pure-Python fallback.
"""
import os

from . import _rewrite_py

BACKEND = "python"

if os.environ.get("QBUNDLE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _rewrite as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _rewrite_py
else:
    _impl = _rewrite_py

find_redex = _impl.find_redex
word_nf = _impl.word_nf
nf_terms = _impl.nf_terms
mul_terms = _impl.mul_terms

__all__ = ["BACKEND", "find_redex", "word_nf", "nf_terms", "mul_terms"]
