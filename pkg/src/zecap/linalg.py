"""Dense complex linear algebra used throughout the package.

Matrices, states and Kraus operators are plain ``numpy`` arrays of dtype
``complex128``. The small dataclasses below only wrap results that carry
more than one array.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = [
    "ATOL",
    "I2",
    "X",
    "Y",
    "Z",
    "SchmidtDecomposition",
    "as_density_matrix",
    "as_prob_vector",
    "as_pure_state",
    "basis_vector",
    "birkhoff_decompose",
    "hs_inner",
    "is_doubly_stochastic",
    "ket",
    "majorization_transfer_matrix",
    "majorizes",
    "max_entangled",
    "partial_trace",
    "psd_sqrt",
    "schmidt",
    "tensor",
]

ATOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def basis_vector(i, d):
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def ket(label):
    """Single-qubit kets by name: ``0 1 + - i+ i-``."""
    s = 1 / np.sqrt(2)
    table = {
        "0": [1, 0],
        "1": [0, 1],
        "+": [s, s],
        "-": [s, -s],
        "i+": [s, 1j * s],
        "i-": [s, -1j * s],
    }
    return np.array(table[label], dtype=complex)


def max_entangled(d):
    """(1/sqrt d) sum_k |kk>."""
    return np.eye(d, dtype=complex).reshape(d * d) / np.sqrt(d)


def as_pure_state(v, tol=1e-12):
    v = np.asarray(v, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValueError("state has non-finite amplitudes")
    n = np.linalg.norm(v)
    if abs(n - 1) > tol:
        raise ValueError(f"state is not normalized (norm {n!r})")
    return v


def as_density_matrix(m, tol=ATOL):
    """Validate a density matrix; a unit vector is promoted to its projector."""
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        v = as_pure_state(m)
        return np.outer(v, v.conj())
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("density matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("density matrix has non-finite entries")
    if np.abs(m - m.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(m) - 1) > tol:
        raise ValueError("density matrix does not have unit trace")
    if np.linalg.eigvalsh((m + m.conj().T) / 2)[0] < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    return m


def as_prob_vector(p, tol=ATOL):
    p = np.asarray(p, dtype=float).reshape(-1)
    if np.any(p < -tol) or abs(p.sum() - 1) > tol:
        raise ValueError("not a probability vector")
    return p


def tensor(*ops):
    """Kronecker product of any number of operators or vectors."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(m, dims, keep="A"):
    """Trace out subsystems of an operator on a tensor product space.

    ``dims`` lists the subsystem dimensions. ``keep`` is ``"A"`` or ``"B"``
    for the bipartite case, or a sequence of subsystem indices to keep (in
    ascending order).
    """
    m = np.asarray(m, dtype=complex)
    dims = tuple(int(x) for x in dims)
    n = int(np.prod(dims))
    if m.shape != (n, n):
        raise ValueError(f"operator of shape {m.shape} does not match dims {dims}")
    if keep == "A":
        keep = (0,)
    elif keep == "B":
        keep = (len(dims) - 1,) if len(dims) == 2 else (1,)
    keep = sorted(int(k) for k in keep)
    nsys = len(dims)
    t = m.reshape(dims + dims)
    # trace pairs from the highest index down so remaining axes stay aligned
    for ax in sorted(set(range(nsys)) - set(keep), reverse=True):
        cur = t.ndim // 2
        t = np.trace(t, axis1=ax, axis2=ax + cur)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)


def hs_inner(a, b):
    """Hilbert-Schmidt inner product tr(a^dagger b)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def psd_sqrt(m, tol=ATOL):
    """Positive square root of a Hermitian PSD matrix."""
    m = np.asarray(m, dtype=complex)
    if np.abs(m - m.conj().T).max() > tol:
        raise ValueError("matrix is not Hermitian")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    if w[0] < -tol:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0, None)
    return (v * np.sqrt(w)) @ v.conj().T


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_basis: np.ndarray  # columns
    right_basis: np.ndarray  # columns

    def reconstruct(self):
        c = np.sqrt(self.coefficients)
        return np.einsum("k,ik,jk->ij", c, self.left_basis, self.right_basis).reshape(-1)


def schmidt(state, dims):
    """Schmidt decomposition of a bipartite pure state.

    Coefficients are the squared singular values of the ``dA x dB`` amplitude
    matrix, in descending order, so they sum to one for a unit vector.
    """
    v = as_pure_state(state, tol=1e-9)
    da, db = dims
    if v.size != da * db:
        raise ValueError(f"state of dim {v.size} does not split as {da}x{db}")
    u, s, vh = np.linalg.svd(v.reshape(da, db))
    r = min(da, db)
    return SchmidtDecomposition(s**2, u[:, :r], vh[:r].T)


def majorizes(target, source, tol=ATOL):
    """True iff ``source`` is majorized by ``target`` (source ≺ target)."""
    a = np.sort(np.asarray(source, dtype=float))[::-1]
    b = np.sort(np.asarray(target, dtype=float))[::-1]
    n = max(a.size, b.size)
    a = np.pad(a, (0, n - a.size))
    b = np.pad(b, (0, n - b.size))
    if abs(a.sum() - b.sum()) > tol:
        return False
    return bool(np.all(np.cumsum(a) <= np.cumsum(b) + tol))


def majorization_transfer_matrix(lam, mu, tol=ATOL):
    """Doubly stochastic D with ``lam = D @ mu`` whenever lam ≺ mu.

    Built as a product of T-transforms (convex combinations of the identity
    and a transposition). Both vectors are handled in descending order and the
    result is permuted back to the caller's index order. The shorter vector
    is zero padded.
    """
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    n = max(lam.size, mu.size)
    lam = np.pad(lam, (0, n - lam.size))
    mu = np.pad(mu, (0, n - mu.size))
    if not majorizes(mu, lam, tol):
        raise ValueError("source vector is not majorized by target")
    pl = np.argsort(-lam, kind="stable")
    pm = np.argsort(-mu, kind="stable")
    x = lam[pl]
    y = mu[pm].copy()
    d = np.eye(n)
    while True:
        diff = y - x
        over = np.nonzero(diff > tol)[0]
        if over.size == 0:
            break
        j = over[-1]
        k = j + 1 + int(np.nonzero(diff[j + 1 :] < -tol)[0][0])
        delta = min(y[j] - x[j], x[k] - y[k])
        t = 1 - delta / (y[j] - y[k])
        tmat = np.eye(n)
        tmat[[j, k], [j, k]] = t
        tmat[j, k] = tmat[k, j] = 1 - t
        y = tmat @ y
        d = tmat @ d
    # x = d @ mu_sorted, lam = P_l^T x, mu_sorted = P_m mu
    out = np.zeros((n, n))
    out[np.ix_(pl, pm)] = d
    return out


def is_doubly_stochastic(d, tol=1e-9):
    d = np.asarray(d, dtype=float)
    return (
        d.ndim == 2
        and d.shape[0] == d.shape[1]
        and bool(np.all(d >= -1e-12))
        and np.allclose(d.sum(axis=0), 1, atol=tol)
        and np.allclose(d.sum(axis=1), 1, atol=tol)
    )


def _has_perfect_matching(support):
    if support.shape[0] == 0:
        return True
    r, c = linear_sum_assignment(~support)
    return not np.any(~support[r, c])


def _smallest_matching(support):
    """Lexicographically smallest permutation inside a boolean support."""
    n = support.shape[0]
    perm = []
    free = list(range(n))
    for row in range(n):
        for col in free:
            if not support[row, col]:
                continue
            rest = [c for c in free if c != col]
            if _has_perfect_matching(support[np.ix_(range(row + 1, n), rest)]):
                perm.append(col)
                free = rest
                break
        else:
            return None
    return np.array(perm)


def birkhoff_decompose(d, tol=1e-12):
    """Write a doubly stochastic matrix as a convex sum of permutations.

    Returns a list of ``(weight, perm)`` where ``perm[i]`` is the column of
    the unit entry in row ``i``. Greedy: repeatedly peel off the
    lexicographically smallest permutation supported on the positive entries.
    """
    d = np.asarray(d, dtype=float)
    if not is_doubly_stochastic(d):
        raise ValueError("matrix is not doubly stochastic")
    n = d.shape[0]
    rest = d.copy()
    terms = []
    remaining = 1.0
    while remaining > 1e-12:
        perm = _smallest_matching(rest > tol)
        if perm is None:
            break
        w = rest[np.arange(n), perm].min()
        terms.append((float(w), perm))
        rest[np.arange(n), perm] -= w
        remaining -= w
    total = sum(w for w, _ in terms)
    return [(w / total, p) for w, p in terms]
