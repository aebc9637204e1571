"""Homogeneous polynomial spaces in four variables and matrix actions.

Polynomials are coefficient vectors over the graded-lexicographic
monomial basis of a fixed degree.  The module provides the induced
(substitution) action of a 4x4 matrix, the derivation associated with a
nilpotent matrix, and common-invariant dimension counts, including a
high-precision recomputation used as an independent cross-check.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

NVARS = 4


@lru_cache(maxsize=None)
def monomials(degree: int):
    """Exponent tuples of total degree `degree`, graded-lex order
    (descending in the exponent tuple)."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), degree, NVARS)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(degree: int):
    return {m: i for i, m in enumerate(monomials(degree))}


def dimension(degree: int) -> int:
    return len(monomials(degree))


def poly_from_dict(d, degree):
    """Coefficient vector from {exponent tuple: coefficient}."""
    idx = monomial_index(degree)
    v = np.zeros(dimension(degree), dtype=complex)
    for mono, c in d.items():
        v[idx[tuple(mono)]] = c
    return v


def poly_to_dict(v, degree, tol=0.0):
    return {m: v[i] for i, m in enumerate(monomials(degree))
            if abs(v[i]) > tol}


def _mono_times_linear(mono, coeffs):
    """Multiply a monomial by a linear form sum_j coeffs[j] x_j."""
    out = {}
    for j in range(NVARS):
        c = coeffs[j]
        if c == 0:
            continue
        m2 = list(mono)
        m2[j] += 1
        out[tuple(m2)] = out.get(tuple(m2), 0) + c
    return out


def induced_matrix(T, degree: int):
    """Matrix of J(x) -> J(T x) on the degree-d coefficient space."""
    T = np.asarray(T)
    monos = monomials(degree)
    idx = monomial_index(degree)
    dim = len(monos)
    M = np.zeros((dim, dim), dtype=complex)
    for col, mono in enumerate(monos):
        # expand prod_j (sum_k T[j,k] x_k)^{e_j}
        poly = {(0, 0, 0, 0): 1.0 + 0j}
        for j in range(NVARS):
            for _ in range(mono[j]):
                nxt = {}
                for m, c in poly.items():
                    for m2, c2 in _mono_times_linear(m, T[j, :]).items():
                        nxt[m2] = nxt.get(m2, 0) + c * c2
                poly = nxt
        for m, c in poly.items():
            M[idx[m], col] = c
    return M


def derivation_matrix(N, degree: int):
    """Matrix of J -> grad(J) . (N x) on the degree-d coefficient space."""
    N = np.asarray(N)
    monos = monomials(degree)
    idx = monomial_index(degree)
    dim = len(monos)
    M = np.zeros((dim, dim), dtype=complex)
    for col, mono in enumerate(monos):
        for j in range(NVARS):
            if mono[j] == 0:
                continue
            dm = list(mono)
            dm[j] -= 1
            factor = mono[j]
            # multiply d/dx_j by the linear form (N x)_j
            for k in range(NVARS):
                c = N[j, k]
                if c == 0:
                    continue
                m2 = list(dm)
                m2[k] += 1
                M[idx[tuple(m2)], col] += factor * c
    return M


def derivation_apply(N, coeffs, degree: int, nilpotent_tol=1e-8):
    """Apply the derivation of a nilpotent matrix to a polynomial."""
    N = np.asarray(N, dtype=complex)
    n2 = np.linalg.norm(N @ N)
    scale = max(np.linalg.norm(N) ** 2, 1e-300)
    if n2 > nilpotent_tol * scale:
        raise ValueError(f"matrix is not nilpotent: |N^2| = {n2:.2e}")
    return derivation_matrix(N, degree) @ np.asarray(coeffs, dtype=complex)


def compose_apply(T, coeffs, degree: int):
    """Coefficients of x -> J(T x)."""
    return induced_matrix(T, degree) @ np.asarray(coeffs, dtype=complex)


def unipotent_invariance_check(N, coeffs, degree: int, tol=1e-10):
    """(composition_invariant, derivation_annihilated) for a nilpotent N.

    The two agree for every polynomial: invariance under I + N equals
    membership in the derivation kernel, since I + N embeds in the flow
    of the linear field N x.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    comp = compose_apply(np.eye(NVARS) + np.asarray(N), coeffs, degree) - coeffs
    deriv = derivation_apply(N, coeffs, degree)
    return (bool(np.max(np.abs(comp)) <= tol * scale),
            bool(np.max(np.abs(deriv)) <= tol * scale))


def fixed_subspace(T, degree: int, rel_tol=1e-6):
    """Orthonormal basis of polynomials fixed by the substitution action."""
    M = induced_matrix(T, degree) - np.eye(dimension(degree))
    return _kernel(M, rel_tol)


def derivation_kernel(N, degree: int, rel_tol=1e-6):
    return _kernel(derivation_matrix(N, degree), rel_tol)


def _kernel(M, rel_tol):
    u, s, vh = np.linalg.svd(M)
    if s.size == 0:
        return np.eye(M.shape[1])
    cutoff = rel_tol * max(s[0], 1e-300)
    rank = int(np.sum(s > cutoff))
    return vh.conj().T[:, rank:]


def invariant_dimension(Ts, degree: int, rel_tol=1e-6):
    """(dimension, orthonormal basis) of polynomials of the given degree
    fixed by every matrix in Ts."""
    dim = dimension(degree)
    blocks = [induced_matrix(T, degree) - np.eye(dim) for T in Ts]
    if not blocks:
        return dim, np.eye(dim)
    stacked = np.vstack(blocks)
    basis = _kernel(stacked, rel_tol)
    return basis.shape[1], basis


def invariant_dimension_mp(Ts, degree: int, dps=50, rel_tol=1e-6):
    """High-working-precision recomputation of invariant_dimension.

    The inputs are promoted to `dps` decimal digits and the kernel rank
    is decided with the same relative threshold; used as an independent
    oracle for the floating-point path.
    """
    import mpmath as mp
    with mp.workdps(dps):
        dim = dimension(degree)
        rows = []
        for T in Ts:
            M = induced_matrix(np.asarray(T), degree)
            for i in range(dim):
                row = []
                for j in range(dim):
                    z = M[i, j] - (1.0 if i == j else 0.0)
                    row.append(mp.mpc(z.real, z.imag))
                rows.append(row)
        if not rows:
            return dim
        A = mp.matrix(rows)
        sv = mp.mp.svd_c(A, compute_uv=False)
        smax = max(sv[i] for i in range(sv.rows)) if sv.rows else mp.mpf(0)
        if smax == 0:
            return dim
        rank = sum(1 for i in range(sv.rows) if sv[i] > rel_tol * smax)
        return dim - rank
