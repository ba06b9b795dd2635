"""Compiled kernels for the dense complex eigensolver.

Balancing, Householder reduction to upper Hessenberg form, single-shift
QR iteration with Wilkinson shifts, and triangular back-substitution for
eigenvectors. All kernels work in place on complex128 C-ordered arrays.
"""
import numpy as np
from numba import njit

DEFLATION_EPS = 1e-14
SWEEPS_PER_DIM = 40

# reassociation lets LLVM vectorize the rotation loops; NaN/Inf semantics kept
_ROTATION_MATH = {"reassoc", "contract", "nsz", "arcp"}

# status codes returned by hessenberg_qr
OK = 0
NO_CONVERGENCE = 1


@njit(cache=True)
def balance(a):
    """Diagonal similarity scaling by powers of two (Parlett-Reinsch).

    On return ``a`` holds ``D^{-1} A D``; the diagonal of ``D`` is returned.
    """
    n = a.shape[0]
    d = np.ones(n)
    radix = 2.0
    sqrdx = radix * radix
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = 0.0
            r = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j, i].real) + abs(a[j, i].imag)
                    r += abs(a[i, j].real) + abs(a[i, j].imag)
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c > g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                converged = False
                d[i] *= f
                ginv = 1.0 / f
                for j in range(n):
                    a[i, j] *= ginv
                for j in range(n):
                    a[j, i] *= f
    return d


@njit(cache=True)
def hessenberg(a, q, want_q):
    """Reduce ``a`` to upper Hessenberg form by Householder reflectors.

    If ``want_q`` the reflectors are accumulated into ``q`` (which must
    enter as the identity) so that ``A_in = Q H Q^H``.
    """
    n = a.shape[0]
    v = np.empty(n, dtype=np.complex128)
    w = np.empty(n, dtype=np.complex128)
    for k in range(n - 2):
        tail = 0.0
        for i in range(k + 2, n):
            tail += a[i, k].real ** 2 + a[i, k].imag ** 2
        if tail == 0.0:
            continue
        x0 = a[k + 1, k]
        norm = np.sqrt(tail + x0.real ** 2 + x0.imag ** 2)
        phase = x0 / abs(x0) if x0 != 0 else 1.0 + 0.0j
        alpha = -phase * norm
        m = n - k - 1
        v[0] = x0 - alpha
        for i in range(1, m):
            v[i] = a[k + 1 + i, k]
        vnorm2 = 0.0
        for i in range(m):
            vnorm2 += v[i].real ** 2 + v[i].imag ** 2
        scale = 2.0 / vnorm2
        # left: rows k+1.. of columns k..n-1
        for j in range(k, n):
            s = 0.0j
            for i in range(m):
                s += np.conj(v[i]) * a[k + 1 + i, j]
            s *= scale
            for i in range(m):
                a[k + 1 + i, j] -= v[i] * s
        # right: columns k+1.. of all rows
        for i in range(n):
            s = 0.0j
            for jj in range(m):
                s += a[i, k + 1 + jj] * v[jj]
            w[i] = s * scale
        for i in range(n):
            wi = w[i]
            for jj in range(m):
                a[i, k + 1 + jj] -= wi * np.conj(v[jj])
        a[k + 1, k] = alpha
        for i in range(k + 2, n):
            a[i, k] = 0.0
        if want_q:
            for i in range(n):
                s = 0.0j
                for jj in range(m):
                    s += q[i, k + 1 + jj] * v[jj]
                w[i] = s * scale
            for i in range(n):
                wi = w[i]
                for jj in range(m):
                    q[i, k + 1 + jj] -= wi * np.conj(v[jj])


@njit(cache=True)
def _givens(f, g):
    # returns (c, s, r) with [[c, s], [-conj(s), c]] @ [f, g] = [r, 0], c real
    af = abs(f)
    ag = abs(g)
    if ag == 0.0:
        return 1.0, 0.0j, f
    if af == 0.0:
        return 0.0, np.conj(g) / ag, ag + 0.0j
    norm = np.sqrt(af * af + ag * ag)
    c = af / norm
    phase = f / af
    s = phase * np.conj(g) / norm
    return c, s, phase * norm


@njit(cache=True, fastmath=_ROTATION_MATH)
def hessenberg_qr(h, z, want_t, want_z, eigs):
    """Single-shift QR iteration on an upper Hessenberg matrix.

    Eigenvalues are written into ``eigs``. With ``want_t`` the full Schur
    form is produced in ``h``; otherwise only the active window is updated.
    With ``want_z`` the unitary transformations are accumulated into ``z``.
    Returns ``(status, sweeps)``.
    """
    n = h.shape[0]
    smlnum = 1e-300
    budget = SWEEPS_PER_DIM * max(n, 1)
    cs = np.empty(n)
    ss = np.empty(n, dtype=np.complex128)
    sweeps = 0
    hi = n - 1
    while hi >= 0:
        its = 0
        while True:
            l = hi
            while l > 0:
                sub = abs(h[l, l - 1])
                if sub < smlnum or sub <= DEFLATION_EPS * (abs(h[l - 1, l - 1]) + abs(h[l, l])):
                    h[l, l - 1] = 0.0
                    break
                l -= 1
            if l == hi:
                eigs[hi] = h[hi, hi]
                hi -= 1
                break
            if sweeps >= budget:
                return NO_CONVERGENCE, sweeps
            a = h[hi - 1, hi - 1]
            b = h[hi - 1, hi]
            c = h[hi, hi - 1]
            d = h[hi, hi]
            if its == 10 or its == 20:
                shift = d + 0.75 * abs(c) * (1.0 + 0.5j)
            else:
                half = 0.5 * (a - d)
                disc = np.sqrt(half * half + b * c)
                mu1 = 0.5 * (a + d) + disc
                mu2 = 0.5 * (a + d) - disc
                shift = mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2
            its += 1
            sweeps += 1
            col_end = n if want_t else hi + 1
            row_start = 0 if want_t else l
            for k in range(l, hi + 1):
                h[k, k] -= shift
            for k in range(l, hi):
                cr, sr, rr = _givens(h[k, k], h[k + 1, k])
                cs[k] = cr
                ss[k] = sr
                h[k, k] = rr
                h[k + 1, k] = 0.0
                for j in range(k + 1, col_end):
                    x = h[k, j]
                    y = h[k + 1, j]
                    h[k, j] = cr * x + sr * y
                    h[k + 1, j] = -np.conj(sr) * x + cr * y
            # right rotations act on each row independently; sweep row by row
            # so memory access stays contiguous
            for i in range(row_start, hi + 1):
                for k in range(max(l, i - 2), hi):
                    cr = cs[k]
                    sr = ss[k]
                    x = h[i, k]
                    y = h[i, k + 1]
                    h[i, k] = cr * x + np.conj(sr) * y
                    h[i, k + 1] = -sr * x + cr * y
            if want_z:
                for i in range(n):
                    for k in range(l, hi):
                        cr = cs[k]
                        sr = ss[k]
                        x = z[i, k]
                        y = z[i, k + 1]
                        z[i, k] = cr * x + np.conj(sr) * y
                        z[i, k + 1] = -sr * x + cr * y
            for k in range(l, hi + 1):
                h[k, k] += shift
    return OK, sweeps


@njit(cache=True)
def triangular_eigenvectors(t):
    """Eigenvectors of an upper triangular matrix by back-substitution."""
    n = t.shape[0]
    x = np.zeros((n, n), dtype=np.complex128)
    tnorm = 0.0
    for i in range(n):
        for j in range(i, n):
            tnorm = max(tnorm, abs(t[i, j]))
    smin = max(2.2e-16 * tnorm, 1e-300)
    for k in range(n):
        lam = t[k, k]
        x[k, k] = 1.0
        for i in range(k - 1, -1, -1):
            s = 0.0j
            for j in range(i + 1, k + 1):
                s += t[i, j] * x[j, k]
            denom = t[i, i] - lam
            if abs(denom) < smin:
                denom = smin
            x[i, k] = -s / denom
    return x
