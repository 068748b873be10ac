"""Hot inner loops, each in a numba flavour and a pure-numpy flavour.

The numba versions are scalar loops compiled with ``@njit``.  The numpy
versions vectorise over the independent axis (evaluation points, eigenvalue
index) and loop in Python over the sequential axis.  Both return identical
results up to rounding; ``tests/test_kernels.py`` holds them to that.

Dispatch happens in the public wrappers at the bottom of the module.
"""
import math

import numpy as np

from ._backend import njit, precision_bits, use_numba

# Rescale the running recurrence once it leaves [1e-150, 1e150].
_BIG = 1e150
_SMALL = 1e-150


# --------------------------------------------------------------------------
# scaled three-term recurrence
# --------------------------------------------------------------------------


@njit(cache=True)
def _store_nb(w, scale, sig, exp, i, j):
    if w == 0.0:
        sig[i, j] = 0.0
        exp[i, j] = 0
        return
    k = int(math.floor(math.log10(abs(w))))
    s = w / 10.0 ** k
    if abs(s) >= 10.0:
        s /= 10.0
        k += 1
    elif abs(s) < 1.0:
        s *= 10.0
        k -= 1
    sig[i, j] = s
    exp[i, j] = scale + k


@njit(cache=True)
def recurrence_numba(A, B, p1):
    """p[n+1] = A[n] p[n] - B[n] p[n-1], p[0] = 1, p[1] = p1, per column."""
    n_max, m = A.shape
    sig = np.zeros((n_max + 1, m))
    exp = np.zeros((n_max + 1, m), dtype=np.int64)
    for j in range(m):
        sig[0, j] = 1.0
        if n_max == 0:
            continue
        scale = 0
        prev = 1.0
        cur = p1[j]
        _store_nb(cur, scale, sig, exp, 1, j)
        for n in range(1, n_max):
            nxt = A[n, j] * cur - B[n, j] * prev
            prev = cur
            cur = nxt
            big = max(abs(cur), abs(prev))
            if big > _BIG or (big < _SMALL and big > 0.0):
                k = int(math.floor(math.log10(big)))
                f = 10.0 ** (-k)
                cur *= f
                prev *= f
                scale += k
            _store_nb(cur, scale, sig, exp, n + 1, j)
    return sig, exp


def _normalise_np(w, scale):
    aw = np.abs(w)
    nz = aw > 0
    k = np.zeros(w.shape, dtype=np.int64)
    k[nz] = np.floor(np.log10(aw[nz])).astype(np.int64)
    s = np.where(nz, w / np.power(w.dtype.type(10), k.astype(w.dtype)), 0)
    hi = np.abs(s) >= 10
    s = np.where(hi, s / 10, s)
    k = np.where(hi, k + 1, k)
    lo = nz & (np.abs(s) < 1)
    s = np.where(lo, s * 10, s)
    k = np.where(lo, k - 1, k)
    return s, np.where(nz, scale + k, 0)


def recurrence_numpy(A, B, p1):
    """Numpy twin of :func:`recurrence_numba`; vectorised over columns."""
    n_max, m = A.shape
    dt = np.result_type(A.dtype, B.dtype, np.asarray(p1).dtype, np.float64)
    sig = np.zeros((n_max + 1, m), dtype=dt)
    exp = np.zeros((n_max + 1, m), dtype=np.int64)
    sig[0] = 1
    if n_max == 0:
        return sig, exp
    scale = np.zeros(m, dtype=np.int64)
    prev = np.ones(m, dtype=dt)
    cur = np.asarray(p1, dtype=dt).copy()
    sig[1], exp[1] = _normalise_np(cur, scale)
    ten = dt.type(10)
    for n in range(1, n_max):
        nxt = A[n] * cur - B[n] * prev
        prev, cur = cur, nxt
        big = np.maximum(np.abs(cur), np.abs(prev))
        resc = (big > _BIG) | ((big < _SMALL) & (big > 0))
        if resc.any():
            k = np.floor(np.log10(big[resc])).astype(np.int64)
            f = np.power(ten, -k.astype(dt))
            cur[resc] *= f
            prev[resc] *= f
            scale[resc] += k
        sig[n + 1], exp[n + 1] = _normalise_np(cur, scale)
    return sig, exp


# --------------------------------------------------------------------------
# Sturm-sequence bisection
# --------------------------------------------------------------------------


@njit(cache=True)
def _sturm_count_nb(d, e2, x, pivmin):
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def bisect_numba(d, e2, lo, hi, abs_tol, max_iter):
    """All eigenvalues of a symmetric tridiagonal matrix, ascending.

    Returns (values, failed_index); failed_index is -1 on success.
    """
    n = d.shape[0]
    pivmin = 2.2250738585072014e-308 * max(1.0, e2.max() if n > 1 else 1.0)
    vals = np.empty(n)
    left = lo
    for k in range(n):
        a = left
        b = hi
        ok = False
        for _ in range(max_iter):
            if b - a <= abs_tol + 2.220446049250313e-16 * max(abs(a), abs(b)):
                ok = True
                break
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                ok = True
                break
            if _sturm_count_nb(d, e2, mid, pivmin) > k:
                b = mid
            else:
                a = mid
        if not ok:
            return vals, k
        vals[k] = 0.5 * (a + b)
        left = a
    return vals, -1


def bisect_numpy(d, e2, lo, hi, abs_tol, max_iter):
    """Numpy twin of :func:`bisect_numba`; all indices bisected together."""
    n = d.shape[0]
    pivmin = np.finfo(float).tiny * max(1.0, e2.max() if n > 1 else 1.0)
    eps = np.finfo(float).eps
    target = np.arange(n)
    a = np.full(n, float(lo))
    b = np.full(n, float(hi))
    done = np.zeros(n, dtype=bool)
    for _ in range(max_iter):
        done |= b - a <= abs_tol + eps * np.maximum(np.abs(a), np.abs(b))
        mid = 0.5 * (a + b)
        done |= (mid == a) | (mid == b)
        if done.all():
            return 0.5 * (a + b), -1
        act = ~done
        x = mid[act]
        q = d[0] - x
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        cnt = (q < 0).astype(np.int64)
        for i in range(1, n):
            q = d[i] - x - e2[i - 1] / q
            q = np.where(np.abs(q) < pivmin, -pivmin, q)
            cnt += q < 0
        upper = cnt > target[act]
        ia = np.flatnonzero(act)
        b[ia[upper]] = x[upper]
        a[ia[~upper]] = x[~upper]
    bad = np.flatnonzero(~done)
    return 0.5 * (a + b), int(bad[0])


# --------------------------------------------------------------------------
# inverse iteration (tridiagonal LU with partial pivoting)
# --------------------------------------------------------------------------


@njit(cache=True)
def inverse_iteration_numba(d, e, lams, n_iter, pivfloor):
    """Unit eigenvectors for each shift in ``lams``; rows of the result."""
    n = d.shape[0]
    m = lams.shape[0]
    out = np.empty((m, n))
    dd = np.empty(n)
    du = np.zeros(n)
    du2 = np.zeros(n)
    dl = np.zeros(n)
    piv = np.zeros(n, dtype=np.bool_)
    v = np.empty(n)
    for j in range(m):
        for i in range(n):
            dd[i] = d[i] - lams[j]
            du2[i] = 0.0
            piv[i] = False
        for i in range(n - 1):
            du[i] = e[i]
            dl[i] = e[i]
        for i in range(n - 1):
            if abs(dd[i]) >= abs(dl[i]):
                if dd[i] == 0.0:
                    dd[i] = pivfloor
                fact = dl[i] / dd[i]
                dl[i] = fact
                dd[i + 1] -= fact * du[i]
            else:
                fact = dd[i] / dl[i]
                dd[i] = dl[i]
                dl[i] = fact
                tmp = du[i]
                du[i] = dd[i + 1]
                dd[i + 1] = tmp - fact * dd[i + 1]
                if i < n - 2:
                    du2[i] = du[i + 1]
                    du[i + 1] = -fact * du[i + 1]
                piv[i] = True
        if dd[n - 1] == 0.0:
            dd[n - 1] = pivfloor
        for i in range(n):
            v[i] = 1.0
        for _ in range(n_iter):
            for i in range(n - 1):
                if piv[i]:
                    tmp = v[i]
                    v[i] = v[i + 1]
                    v[i + 1] = tmp
                v[i + 1] -= dl[i] * v[i]
            v[n - 1] /= dd[n - 1]
            if n > 1:
                v[n - 2] = (v[n - 2] - du[n - 2] * v[n - 1]) / dd[n - 2]
            for i in range(n - 3, -1, -1):
                v[i] = (v[i] - du[i] * v[i + 1] - du2[i] * v[i + 2]) / dd[i]
            s = 0.0
            big = 0.0
            for i in range(n):
                big = max(big, abs(v[i]))
            for i in range(n):
                v[i] /= big
                s += v[i] * v[i]
            s = math.sqrt(s)
            for i in range(n):
                v[i] /= s
        for i in range(n):
            out[j, i] = v[i]
    return out


def inverse_iteration_numpy(d, e, lams, n_iter, pivfloor):
    """Numpy twin of :func:`inverse_iteration_numba`; shifts vectorised."""
    n = d.shape[0]
    m = lams.shape[0]
    dd = d[None, :] - lams[:, None]
    du = np.zeros((m, n))
    dl = np.zeros((m, n))
    du2 = np.zeros((m, n))
    du[:, : n - 1] = e
    dl[:, : n - 1] = e
    piv = np.zeros((m, n), dtype=bool)
    for i in range(n - 1):
        sw = np.abs(dd[:, i]) < np.abs(dl[:, i])
        dd[:, i] = np.where(~sw & (dd[:, i] == 0), pivfloor, dd[:, i])
        # no-swap branch
        f_ns = dl[:, i] / np.where(sw, 1.0, dd[:, i])
        # swap branch
        f_sw = dd[:, i] / np.where(sw, dl[:, i], 1.0)
        new_dd_i = np.where(sw, dl[:, i], dd[:, i])
        new_du_i = np.where(sw, dd[:, i + 1], du[:, i])
        new_dd_n = np.where(sw, du[:, i] - f_sw * dd[:, i + 1], dd[:, i + 1] - f_ns * du[:, i])
        if i < n - 2:
            du2[:, i] = np.where(sw, du[:, i + 1], 0.0)
            du[:, i + 1] = np.where(sw, -f_sw * du[:, i + 1], du[:, i + 1])
        dd[:, i] = new_dd_i
        du[:, i] = new_du_i
        dd[:, i + 1] = new_dd_n
        dl[:, i] = np.where(sw, f_sw, f_ns)
        piv[:, i] = sw
    dd[:, n - 1] = np.where(dd[:, n - 1] == 0, pivfloor, dd[:, n - 1])
    v = np.ones((m, n))
    rows = np.arange(m)
    for _ in range(n_iter):
        for i in range(n - 1):
            sw = piv[:, i]
            if sw.any():
                r = rows[sw]
                v[r, i], v[r, i + 1] = v[r, i + 1].copy(), v[r, i].copy()
            v[:, i + 1] -= dl[:, i] * v[:, i]
        v[:, n - 1] /= dd[:, n - 1]
        if n > 1:
            v[:, n - 2] = (v[:, n - 2] - du[:, n - 2] * v[:, n - 1]) / dd[:, n - 2]
        for i in range(n - 3, -1, -1):
            v[:, i] = (v[:, i] - du[:, i] * v[:, i + 1] - du2[:, i] * v[:, i + 2]) / dd[:, i]
        v /= np.abs(v).max(axis=1, keepdims=True)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v


# --------------------------------------------------------------------------
# log first eigenvector component (twisted factorisation)
# --------------------------------------------------------------------------


@njit(cache=True)
def log_first_component_numba(d, e, lams, pivmin):
    """ln |v_0| of the unit eigenvector for each eigenvalue in ``lams``.

    Components are grown from a twist index towards both ends, top-down
    pivots above it and bottom-up pivots below, so every component carries
    a small relative error however tiny it is.  All work is in logs.
    """
    n = d.shape[0]
    m = lams.shape[0]
    out = np.empty(m)
    fwd = np.empty(n)
    bwd = np.empty(n)
    lz = np.empty(n)
    for j in range(m):
        lam = lams[j]
        q = d[0] - lam
        if abs(q) < pivmin:
            q = -pivmin
        fwd[0] = q
        for i in range(1, n):
            q = d[i] - lam - e[i - 1] * e[i - 1] / q
            if abs(q) < pivmin:
                q = -pivmin
            fwd[i] = q
        q = d[n - 1] - lam
        if abs(q) < pivmin:
            q = -pivmin
        bwd[n - 1] = q
        for i in range(n - 2, -1, -1):
            q = d[i] - lam - e[i] * e[i] / q
            if abs(q) < pivmin:
                q = -pivmin
            bwd[i] = q
        r = 0
        best = np.inf
        for i in range(n):
            g = abs(fwd[i] + bwd[i] - (d[i] - lam))
            if g < best:
                best = g
                r = i
        lz[r] = 0.0
        for i in range(r - 1, -1, -1):
            lz[i] = lz[i + 1] + math.log(abs(e[i])) - math.log(abs(fwd[i]))
        for i in range(r + 1, n):
            lz[i] = lz[i - 1] + math.log(abs(e[i - 1])) - math.log(abs(bwd[i]))
        top = lz.max()
        s = 0.0
        for i in range(n):
            s += math.exp(2.0 * (lz[i] - top))
        out[j] = lz[0] - top - 0.5 * math.log(s)
    return out


def log_first_component_numpy(d, e, lams, pivmin):
    """Numpy twin of :func:`log_first_component_numba`; shifts vectorised."""
    n = d.shape[0]
    m = lams.shape[0]

    def guard(q):
        return np.where(np.abs(q) < pivmin, -pivmin, q)

    dl = d[None, :] - lams[:, None]
    fwd = np.empty((m, n))
    bwd = np.empty((m, n))
    fwd[:, 0] = guard(dl[:, 0])
    for i in range(1, n):
        fwd[:, i] = guard(dl[:, i] - e[i - 1] ** 2 / fwd[:, i - 1])
    bwd[:, n - 1] = guard(dl[:, n - 1])
    for i in range(n - 2, -1, -1):
        bwd[:, i] = guard(dl[:, i] - e[i] ** 2 / bwd[:, i + 1])
    r = np.argmin(np.abs(fwd + bwd - dl), axis=1)
    with np.errstate(divide="ignore"):
        le = np.log(np.abs(e))
    up = le[None, :] - np.log(np.abs(fwd[:, :-1]))    # lz[i] - lz[i+1], i < r
    down = le[None, :] - np.log(np.abs(bwd[:, 1:]))   # lz[i] - lz[i-1], i > r
    idx = np.arange(n)[None, :]
    # cumulative sums anchored at the twist index
    cu = np.concatenate((np.zeros((m, 1)), np.cumsum(up[:, ::-1], axis=1)), axis=1)[:, ::-1]
    cd = np.concatenate((np.zeros((m, 1)), np.cumsum(down, axis=1)), axis=1)
    rows = np.arange(m)
    lz = np.where(idx < r[:, None], cu - cu[rows, r][:, None], cd - cd[rows, r][:, None])
    top = lz.max(axis=1)
    s = np.exp(2.0 * (lz - top[:, None])).sum(axis=1)
    return lz[:, 0] - top - 0.5 * np.log(s)


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------


def recurrence(A, B, p1):
    if precision_bits() == 64:
        ld = np.longdouble
        return recurrence_numpy(A.astype(ld), B.astype(ld), np.asarray(p1, dtype=ld))
    if use_numba():
        return recurrence_numba(
            np.ascontiguousarray(A, dtype=np.float64),
            np.ascontiguousarray(B, dtype=np.float64),
            np.ascontiguousarray(p1, dtype=np.float64),
        )
    return recurrence_numpy(A, B, p1)


def bisect(d, e2, lo, hi, abs_tol, max_iter):
    if use_numba():
        return bisect_numba(d, e2, float(lo), float(hi), float(abs_tol), int(max_iter))
    return bisect_numpy(d, e2, lo, hi, abs_tol, max_iter)


def inverse_iteration(d, e, lams, n_iter, pivfloor):
    if use_numba():
        return inverse_iteration_numba(d, e, lams, int(n_iter), float(pivfloor))
    return inverse_iteration_numpy(d, e, lams, n_iter, pivfloor)


def log_first_component(d, e, lams, pivmin):
    if use_numba():
        return log_first_component_numba(d, e, lams, float(pivmin))
    return log_first_component_numpy(d, e, lams, pivmin)
