"""Backend selection for the hot kernels.

Numba is used when it imports cleanly and ``TRAPOLY_DISABLE_NUMBA`` is unset
(or set to ``0``/``false``).  The pure-numpy twins in :mod:`trapoly._kernels`
are always importable and are used otherwise.
"""
import os
import warnings

_FALSY = {"", "0", "false", "no", "off"}


def _env_flag(name):
    return os.environ.get(name, "").strip().lower() not in _FALSY


try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def use_numba():
    """True when the numba kernels should be dispatched."""
    return HAVE_NUMBA and not _env_flag("TRAPOLY_DISABLE_NUMBA")


def precision_bits():
    """Working precision requested through ``TRAPOLY_PRECISION_BITS``.

    53 (IEEE double) is the default.  64 selects ``numpy.longdouble`` for the
    recurrence kernel, which forces the numpy path since numba has no long
    double support.  Anything else falls back to 53 with a warning.
    """
    raw = os.environ.get("TRAPOLY_PRECISION_BITS", "").strip()
    if not raw:
        return 53
    try:
        bits = int(raw)
    except ValueError:
        bits = -1
    if bits not in (53, 64):
        warnings.warn(
            f"TRAPOLY_PRECISION_BITS={raw!r} unsupported; using 53", RuntimeWarning
        )
        return 53
    return bits


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAVE_NUMBA:
        import numba

        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
