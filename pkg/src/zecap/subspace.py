"""Subspaces of d x d matrices under the Hilbert-Schmidt inner product."""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MatrixSubspace",
    "complement",
    "contains",
    "contains_identity",
    "is_hermitian_closed",
    "left_multiply",
    "span",
    "subspace_distance",
    "subspace_equal",
    "tensor_subspace",
]

RANK_CUTOFF = 1e-9
CONTAINS_TOL = 1e-9
EQUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class MatrixSubspace:
    """Orthonormal basis (under tr(A^dagger B)) of a subspace of B(C^d).

    ``basis`` has shape ``(k, d, d)``.
    """

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        d = self.ambient_dim
        if b.ndim != 3 or b.shape[1:] != (d, d):
            raise ValueError(f"basis must have shape (k, {d}, {d}), got {b.shape}")
        if not 0 < b.shape[0] <= d * d:
            raise ValueError("subspace dimension out of range")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def vectors(self):
        """Basis flattened to rows of length d^2."""
        return self.basis.reshape(self.dim, -1)

    def gram(self):
        v = self.vectors
        return v.conj() @ v.T

    def projector(self):
        """Orthogonal projector as a d^2 x d^2 matrix acting on vec(m)."""
        v = self.vectors
        return v.T @ v.conj()

    def project(self, m):
        v = self.vectors
        coeffs = v.conj() @ np.asarray(m, dtype=complex).reshape(-1)
        return (coeffs @ v).reshape(self.ambient_dim, self.ambient_dim)

    def __repr__(self):
        return f"MatrixSubspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def _orthonormal_rows(rows, cutoff=RANK_CUTOFF):
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return vh[:0], s
    r = int(np.sum(s > cutoff * s[0]))
    return vh[:r], s


def span(generators, ambient_dim=None):
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise ValueError("no generators")
    d = ambient_dim if ambient_dim is not None else gens[0].shape[0]
    for g in gens:
        if g.shape != (d, d):
            raise ValueError(f"generator of shape {g.shape} is not {d}x{d}")
    rows = np.stack([g.reshape(-1) for g in gens])
    if not np.any(np.abs(rows) > 0):
        raise ValueError("all generators are zero")
    basis, _ = _orthonormal_rows(rows)
    return MatrixSubspace(d, basis.reshape(-1, d, d))


def complement(s):
    d = s.ambient_dim
    if s.dim >= d * d:
        raise ValueError("complement of the full matrix space is trivial")
    # null space of conj(V) is the set of x with <v_i, x> = 0
    _, _, vh = np.linalg.svd(s.vectors.conj(), full_matrices=True)
    comp = vh[s.dim :].conj()
    return MatrixSubspace(d, comp.reshape(-1, d, d))


def contains(s, m, tol=CONTAINS_TOL):
    """Return ``(inside, relative_residual)``."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (s.ambient_dim, s.ambient_dim):
        raise ValueError("matrix does not match ambient dimension")
    n = np.linalg.norm(m)
    if n == 0:
        raise ValueError("zero matrix")
    r = float(np.linalg.norm(m - s.project(m)) / n)
    return r < tol, r


def is_hermitian_closed(s, tol=CONTAINS_TOL):
    return all(contains(s, b.conj().T, tol)[0] for b in s.basis)


def contains_identity(s, tol=CONTAINS_TOL):
    return contains(s, np.eye(s.ambient_dim), tol)[0]


def tensor_subspace(a, b):
    d = a.ambient_dim * b.ambient_dim
    prods = np.einsum("iab,jcd->ijacbd", a.basis, b.basis).reshape(a.dim * b.dim, d, d)
    return MatrixSubspace(d, prods)


def subspace_distance(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimensions differ")
    return float(np.linalg.norm(a.projector() - b.projector()))


def subspace_equal(a, b, tol=EQUAL_TOL):
    return subspace_distance(a, b) < tol


def left_multiply(u, s):
    """The subspace {u @ m : m in s}."""
    return span([u @ m for m in s.basis], s.ambient_dim)
