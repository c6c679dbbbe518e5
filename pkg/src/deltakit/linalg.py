"""Exact linear algebra entry points.

Uses the compiled ``_linalg_ext`` kernels when the extension was built, and
the pure-Python reference otherwise.  Set ``DELTAKIT_PURE_PYTHON=1`` to force
the fallback (the benchmark uses this to compare both).
"""

import os

from . import _linalg_py

BACKEND = "python"
_impl = _linalg_py

if not os.environ.get("DELTAKIT_PURE_PYTHON"):
    try:
        from . import _linalg_ext as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

solve = _impl.solve
leading_minors = _impl.leading_minors
determinant = _impl.determinant
bilinear = _impl.bilinear
symmetric_diagonal = _linalg_py.symmetric_diagonal


def signature(matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric matrix."""
    diag = symmetric_diagonal(matrix)
    return (
        sum(1 for d in diag if d > 0),
        sum(1 for d in diag if d < 0),
        sum(1 for d in diag if d == 0),
    )


def is_negative_definite(matrix) -> bool:
    # (-1)^k * minor_k > 0 for every leading minor
    return all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(leading_minors(matrix)))
