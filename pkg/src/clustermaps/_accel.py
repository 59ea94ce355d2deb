"""Hot integer kernels with a numba path and a pure-numpy fallback.

Set ``CLUSTERMAPS_DISABLE_NUMBA=1`` in the environment (before import) to force
the numpy path. The numba path is also skipped when numba cannot be imported.
Both paths take and return int64 arrays and must agree bit for bit.
"""

from __future__ import annotations

import os

import numpy as np

_disabled = os.environ.get("CLUSTERMAPS_DISABLE_NUMBA", "").strip() not in ("", "0")

try:
    if _disabled:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    HAVE_NUMBA = False

# largest magnitude an int64 kernel may produce without risking overflow
INT64_SAFE = 1 << 62


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# matrix mutation


def _mutate_numpy(b: np.ndarray, k: int) -> np.ndarray:
    col = b[:, k]
    row = b[k, :]
    # 1/2(|b_ik| b_kj + b_ik |b_kj|) is nonzero only when b_ik and b_kj share a sign
    out = b + (np.abs(col)[:, None] * row[None, :] + col[:, None] * np.abs(row)[None, :]) // 2
    out[k, :] = -b[k, :]
    out[:, k] = -b[:, k]
    return out


def _mutate_loop(b, k):
    n = b.shape[0]
    out = np.empty_like(b)
    for i in range(n):
        bik = b[i, k]
        for j in range(n):
            if i == k or j == k:
                out[i, j] = -b[i, j]
            else:
                bkj = b[k, j]
                out[i, j] = b[i, j] + (abs(bik) * bkj + bik * abs(bkj)) // 2
    return out


def _period_loop(b, max_m):
    """Smallest m <= max_m with mu_m...mu_1 b == rho^m b rho^-m, else 0."""
    n = b.shape[0]
    cur = b.copy()
    for m in range(1, max_m + 1):
        cur = _mutate_kernel(cur, (m - 1) % n)
        same = True
        for i in range(n):
            for j in range(n):
                if cur[i, j] != b[(i - m) % n, (j - m) % n]:
                    same = False
                    break
            if not same:
                break
        if same:
            return m
        for i in range(n):
            for j in range(n):
                if abs(cur[i, j]) > 1 << 40:
                    return -1
    return 0


def _period_numpy(b: np.ndarray, max_m: int) -> int:
    n = b.shape[0]
    cur = b.copy()
    for m in range(1, max_m + 1):
        cur = _mutate_numpy(cur, (m - 1) % n)
        if np.array_equal(cur, np.roll(b, (m, m), axis=(0, 1))):
            return m
        if np.abs(cur).max(initial=0) > 1 << 40:
            return -1
    return 0


# ---------------------------------------------------------------------------
# tropical (max-plus) degree recurrence


def _tropical_loop(pos, neg, seed, count):
    """d_{n+N} = max(pos.d, neg.d) - d_n over the window d_{n+1..n+N-1}.

    Returns (values, ok); ok is False once a value leaves the int64-safe band.
    """
    n = seed.shape[0]
    out = np.zeros(count, dtype=np.int64)
    for i in range(min(n, count)):
        out[i] = seed[i]
    bound = 1 << 58
    for t in range(n, count):
        a = 0
        c = 0
        for j in range(1, n):
            v = out[t - n + j]
            a += pos[j - 1] * v
            c += neg[j - 1] * v
        hi = a if a > c else c
        out[t] = hi - out[t - n]
        if abs(out[t]) > bound:
            return out, False
    return out, True


def _tropical_numpy(pos, neg, seed, count):
    n = seed.shape[0]
    out = np.zeros(count, dtype=np.int64)
    out[: min(n, count)] = seed[: min(n, count)]
    for t in range(n, count):
        window = out[t - n + 1 : t]
        hi = max(int(pos @ window), int(neg @ window))
        out[t] = hi - out[t - n]
        if abs(int(out[t])) > 1 << 58:
            return out, False
    return out, True


# ---------------------------------------------------------------------------
# sparse product with int64 coefficients; exponents arrive pre-encoded as
# non-negative int64 keys so that key(a*b) = key(a) + key(b) - shift


def _sparse_mul_loop(ka, ca, kb, cb, shift):
    na = ka.shape[0]
    nb = kb.shape[0]
    if na == 0 or nb == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    lo = ka.min() + kb.min() - shift
    span = ka.max() + kb.max() - shift - lo + 1
    if span <= 4 * na * nb + 4096:
        # dense accumulation over the key range
        acc = np.zeros(span, dtype=np.int64)
        for i in range(na):
            base = ka[i] - shift - lo
            for j in range(nb):
                acc[base + kb[j]] += ca[i] * cb[j]
        cnt = 0
        for t in range(span):
            if acc[t] != 0:
                cnt += 1
        out_k = np.empty(cnt, dtype=np.int64)
        out_v = np.empty(cnt, dtype=np.int64)
        cnt = 0
        for t in range(span):
            if acc[t] != 0:
                out_k[cnt] = t + lo
                out_v[cnt] = acc[t]
                cnt += 1
        return out_k, out_v
    keys = np.empty(na * nb, dtype=np.int64)
    vals = np.empty(na * nb, dtype=np.int64)
    t = 0
    for i in range(na):
        for j in range(nb):
            keys[t] = ka[i] + kb[j] - shift
            vals[t] = ca[i] * cb[j]
            t += 1
    order = np.argsort(keys)
    out_k = np.empty(na * nb, dtype=np.int64)
    out_v = np.empty(na * nb, dtype=np.int64)
    m = -1
    last = 0
    for idx in range(order.shape[0]):
        key = keys[order[idx]]
        if m >= 0 and key == last:
            out_v[m] += vals[order[idx]]
        else:
            m += 1
            out_k[m] = key
            out_v[m] = vals[order[idx]]
            last = key
    m += 1
    mask = out_v[:m] != 0
    return out_k[:m][mask], out_v[:m][mask]


def _sparse_mul_numpy(ka, ca, kb, cb, shift):
    keys = (ka[:, None] + kb[None, :] - shift).ravel()
    vals = (ca[:, None] * cb[None, :]).ravel()
    uniq, inv = np.unique(keys, return_inverse=True)
    acc = np.zeros(uniq.shape[0], dtype=np.int64)
    np.add.at(acc, inv, vals)
    mask = acc != 0
    return uniq[mask], acc[mask]


if HAVE_NUMBA:
    _mutate_kernel = numba.njit(cache=True)(_mutate_loop)
    _period_kernel = numba.njit(cache=True)(_period_loop)
    _tropical_kernel = numba.njit(cache=True)(_tropical_loop)
    _sparse_mul_kernel = numba.njit(cache=True)(_sparse_mul_loop)
else:
    _mutate_kernel = _mutate_numpy
    _period_kernel = _period_numpy
    _tropical_kernel = _tropical_numpy
    _sparse_mul_kernel = _sparse_mul_numpy


def mutate(b: np.ndarray, k: int) -> np.ndarray:
    """Matrix mutation at 0-based node ``k`` of an int64 skew matrix."""
    return _mutate_kernel(np.ascontiguousarray(b, dtype=np.int64), int(k))


def periodic_chain(b: np.ndarray, max_m: int) -> int:
    """Return the chain period (0 if none up to ``max_m``, -1 on entry blow-up)."""
    return int(_period_kernel(np.ascontiguousarray(b, dtype=np.int64), int(max_m)))


def tropical(pos, neg, seed, count: int):
    return _tropical_kernel(
        np.ascontiguousarray(pos, dtype=np.int64),
        np.ascontiguousarray(neg, dtype=np.int64),
        np.ascontiguousarray(seed, dtype=np.int64),
        int(count),
    )


def _sparse_mul_active(ka, ca, kb, cb, shift):
    # wide key ranges sort faster in numpy's C argsort than in the compiled loop
    if HAVE_NUMBA and ka.shape[0] and kb.shape[0]:
        span = int(ka.max()) + int(kb.max()) - int(ka.min()) - int(kb.min()) + 1
        if span > 4 * ka.shape[0] * kb.shape[0] + 4096:
            return _sparse_mul_numpy(ka, ca, kb, cb, shift)
    return _sparse_mul_kernel(ka, ca, kb, cb, shift)


def sparse_mul(ka, ca, kb, cb, shift: int):
    return _sparse_mul_active(ka, ca, kb, cb, np.int64(shift))


# reference implementations, exported for the benchmark and the agreement tests
numpy_impl = {
    "mutate": _mutate_numpy,
    "periodic_chain": _period_numpy,
    "tropical": _tropical_numpy,
    "sparse_mul": _sparse_mul_numpy,
}
kernel_impl = {
    "mutate": _mutate_kernel,
    "periodic_chain": _period_kernel,
    "tropical": _tropical_kernel,
    "sparse_mul": _sparse_mul_active,
}
