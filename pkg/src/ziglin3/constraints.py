"""Constraint systems on the entries of the second unipotent generator.

With the first generator normalized to I + D (D the rank-2 square-zero
matrix with ones at (1,2) and (3,4)), the second is I + R where
R = V^{-1} D V has sixteen unknown entries.  Two constraint systems
restrict them:

* the invariance system: some pair of polynomials annihilated by the
  derivation of D must also be annihilated by the derivation of R.  It
  is emitted as a coefficient template, linear in the entries of R,
  whose rank deficiency on the kernel of the D-derivation encodes
  solvability;
* the nilpotency system: the characteristic polynomial of R equals
  lambda^4, i.e. all four elementary symmetric functions of its
  eigenvalues vanish (sums of principal minors).

Both are emitted as data with a human-readable rendering and can be
evaluated at a concrete numeric R.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import polyspace

SYMBOLS = [f"{row}{i}" for row in "abcd" for i in range(1, 5)]

D_MATRIX = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, 0.0, 0.0],
])


@dataclass(frozen=True)
class NilpotentPair:
    """The fixed nilpotent D and a conjugate R = V^{-1} D V."""

    R: np.ndarray
    V: np.ndarray = None

    @property
    def D(self):
        return D_MATRIX

    @classmethod
    def from_conjugator(cls, V):
        V = np.asarray(V, dtype=complex)
        R = np.linalg.solve(V, D_MATRIX @ V)
        return cls(R=R, V=V)

    def checks(self):
        R = self.R
        return {
            "R_squared": float(np.linalg.norm(R @ R)),
            "rank_R": int(np.linalg.matrix_rank(R, tol=1e-8)),
        }


def principal_minor_sums(R):
    """Elementary symmetric functions e1..e4 of the eigenvalues of R,
    computed as sums of principal minors (exact polynomials in entries)."""
    R = np.asarray(R)
    n = R.shape[0]
    out = []
    for k in range(1, n + 1):
        total = 0.0 + 0j
        for rows in combinations(range(n), k):
            sub = R[np.ix_(rows, rows)]
            total += np.linalg.det(sub)
        out.append(total)
    return out


def _minor_terms(rows):
    """Expand det of a principal submatrix into symbolic monomials."""
    from itertools import permutations
    k = len(rows)
    terms = []
    for perm in permutations(range(k)):
        sign = 1
        seen = list(perm)
        for i in range(k):
            for j in range(i + 1, k):
                if seen[i] > seen[j]:
                    sign = -sign
        mono = tuple(SYMBOLS[rows[i] * 4 + rows[perm[i]]] for i in range(k))
        terms.append((sign, mono))
    return terms


def nilpotency_system():
    """System (characteristic polynomial = lambda^4) as symbolic data.

    Returns a list of four equations; each is {"name", "terms", "render"}
    where terms are (sign, monomial-in-entry-symbols) pairs.
    """
    eqs = []
    for k in range(1, 5):
        terms = []
        for rows in combinations(range(4), k):
            terms.extend(_minor_terms(rows))
        render = " + ".join(
            ("-" if s < 0 else "") + "*".join(mono) for s, mono in terms)
        render = render.replace("+ -", "- ")
        eqs.append({
            "name": f"e{k}(R) = 0",
            "order": k,
            "terms": [[s, list(mono)] for s, mono in terms],
            "render": render if len(render) < 4000 else render[:4000] + " ...",
        })
    return eqs


def evaluate_nilpotency(R):
    """Residuals |e_k(R)| of the nilpotency system at a numeric R."""
    return [abs(v) for v in principal_minor_sums(R)]


@dataclass
class InvarianceTemplate:
    """Invariance system at one degree: the derivation of R restricted to
    the kernel of the derivation of D, entries linear in the entries of R.

    coefficient_tensor[i, j, e] is the coefficient of entry symbol e in
    the matrix element (i, j); solvability of the underlying system (a
    degree-d polynomial annihilated by both derivations) is the rank
    condition rank < kernel dimension, two independent ones need
    rank < kernel dimension - 1.
    """

    degree: int
    kernel_basis: np.ndarray         # dim x k, kernel of the D-derivation
    coefficient_tensor: np.ndarray   # dim x k x 16
    rank_condition: str = ""

    def matrix_at(self, R):
        R = np.asarray(R, dtype=complex)
        return np.tensordot(self.coefficient_tensor, R.ravel(), axes=([2], [0]))

    def satisfiable_at(self, R, want_independent_pair=False, rel_tol=1e-8):
        """Does some (pair of) kernel polynomial(s) die under the
        derivation of R?"""
        M = self.matrix_at(R)
        s = np.linalg.svd(M, compute_uv=False)
        k = self.kernel_basis.shape[1]
        smax = max(float(s[0]) if s.size else 0.0, 1e-300)
        rank = int(np.sum(s > rel_tol * smax))
        need = k - 2 if want_independent_pair else k - 1
        return rank <= need

    def to_json(self):
        return {
            "degree": self.degree,
            "kernel_dimension": int(self.kernel_basis.shape[1]),
            "space_dimension": int(self.kernel_basis.shape[0]),
            "entry_symbols": SYMBOLS,
            "coefficient_tensor_shape": list(self.coefficient_tensor.shape),
            "coefficient_tensor": [
                [[[c.real, c.imag] for c in row] for row in plane]
                for plane in self.coefficient_tensor
            ],
            "rank_condition": self.rank_condition,
        }


def invariance_template(degree: int) -> InvarianceTemplate:
    """Build the degree-d invariance system template."""
    if degree not in (1, 2, 3, 4):
        raise ValueError("degree must be between 1 and 4")
    K = polyspace.derivation_kernel(D_MATRIX, degree)
    dim, k = K.shape
    tensor = np.zeros((dim, k, 16), dtype=complex)
    for e in range(16):
        E = np.zeros((4, 4))
        E[e // 4, e % 4] = 1.0
        tensor[:, :, e] = polyspace.derivation_matrix(E, degree) @ K
    cond = (f"rank < {k} for one shared invariant; "
            f"rank < {k - 1} for two independent ones")
    return InvarianceTemplate(degree, K, tensor, cond)


def generate_constraints(degree: int):
    """Both systems for a given polynomial degree bound, as data."""
    if degree not in (1, 2, 3, 4):
        raise ValueError("degree must be between 1 and 4")
    return {
        "invariance": invariance_template(degree),
        "nilpotency": nilpotency_system(),
    }
