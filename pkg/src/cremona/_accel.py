"""Switch between numba-compiled kernels and their numpy twins.

Set ``CREMONA_USE_NUMBA=0`` before import to force the numpy path.  When
numba is not installed the numpy path is used regardless.
"""

import os

_flag = os.environ.get("CREMONA_USE_NUMBA", "1").strip().lower()
_wanted = _flag not in ("0", "false", "no", "off")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = _wanted and HAVE_NUMBA


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
