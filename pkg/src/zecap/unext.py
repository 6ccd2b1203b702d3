"""Extendibility of matrix subspaces.

A subspace S of B(C^d) is extendible when its orthogonal complement holds a
rank-one matrix |psi><phi|. Two structural certificates settle some cases
exactly; everything else goes to a seesaw search that minimizes

    f(psi, phi) = sum_i |<A_i, |psi><phi|>|^2      (A_i an orthonormal basis of S)

by alternately fixing one vector and solving for the other with a least
singular vector. Each half-step is an exact minimization, so f never
increases along a run. A search that finds no zero is only evidence.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .linalg import hs_inner
from .subspace import complement, span, tensor_subspace

__all__ = [
    "EXTENDIBLE",
    "INCONCLUSIVE",
    "NO_WITNESS",
    "STRUCTURAL",
    "ExtendibilityReport",
    "RankOneWitness",
    "SearchConfig",
    "bell_seeds",
    "decide_extendibility",
    "grid_minimum",
    "seesaw_run",
    "seesaw_search",
    "structural_rules",
    "upb_tensor_check",
]

EXTENDIBLE = "ExtendibleWitnessed"
STRUCTURAL = "StructurallyUnextendible"
NO_WITNESS = "NoWitnessFound"
INCONCLUSIVE = "Inconclusive"

_CHUNK = 250


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 1000
    max_iters: int = 500
    seed: int = 42
    witness_tol: float = 1e-8
    floor_tol: float = 1e-3
    # stop launching restart chunks once a witness is found
    stop_on_witness: bool = True
    # start the first restarts from the generalized Bell basis when d = m^2
    bell_seeds: bool = True
    # apply the exact rules before searching; off means search only
    structural: bool = True

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        return cls(**known)


@dataclass(frozen=True, eq=False)
class RankOneWitness:
    """Candidate rank-one matrix |psi><phi| and its distance from S-perp.

    ``residual`` is the HS norm of the projection of |psi><phi| onto S.
    """

    psi: np.ndarray
    phi: np.ndarray
    residual: float

    @property
    def matrix(self):
        return np.outer(self.psi, self.phi.conj())

    def max_overlap(self, s):
        """max_A |tr(A^dagger |psi><phi|)| over the basis of ``s``, from scratch."""
        m = self.matrix
        return max(abs(hs_inner(a, m)) for a in s.basis)

    def recompute_residual(self, s):
        m = self.matrix
        return float(np.sqrt(sum(abs(hs_inner(a, m)) ** 2 for a in s.basis)))

    def to_dict(self):
        return {
            "psi": [[float(z.real), float(z.imag)] for z in self.psi],
            "phi": [[float(z.real), float(z.imag)] for z in self.phi],
            "residual": float(self.residual),
        }


@dataclass(frozen=True, eq=False)
class ExtendibilityReport:
    verdict: str
    witness: RankOneWitness = None
    min_residual: float = None
    restarts: int = 0
    seed: int = 0
    structural_rule: str = None
    max_iters: int = 0
    max_increase: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def proof(self):
        """Only the heuristic verdicts are not proofs."""
        return self.verdict in (EXTENDIBLE, STRUCTURAL)

    @property
    def extendible(self):
        if self.verdict == EXTENDIBLE:
            return True
        if self.verdict == STRUCTURAL:
            return False
        return None

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "proof": self.proof,
            "witness": self.witness.to_dict() if self.witness is not None else None,
            "min_residual": self.min_residual,
            "restarts": self.restarts,
            "seed": self.seed,
            "structural_rule": self.structural_rule,
            "max_iters": self.max_iters,
            "max_increase": self.max_increase,
            "notes": list(self.notes),
        }


def _least_right_vectors(rows):
    """Unit x minimizing ||rows @ x|| for each stacked matrix in ``rows``."""
    _, _, vh = np.linalg.svd(rows, full_matrices=True)
    return vh[:, -1, :].conj()


def _objective(adj, psi, phi):
    # adj[i] = A_i^dagger; <A_i, psi phi^dagger> = phi^dagger A_i^dagger psi
    vals = np.einsum("ria,ra->ri", np.einsum("iab,rb->ria", adj, psi), phi.conj())
    return np.sum(np.abs(vals) ** 2, axis=1)


def _seesaw_batch(basis, psi, max_iters, rel_tol=1e-12):
    adj = np.conj(np.swapaxes(basis, 1, 2))
    r = psi.shape[0]
    phi = np.zeros_like(psi)
    f = np.full(r, np.inf)
    active = np.ones(r, dtype=bool)
    history = [[] for _ in range(r)]
    iters = 0
    while iters < max_iters and active.any():
        iters += 1
        idx = np.nonzero(active)[0]
        p = psi[idx]
        # rows conj(A_i^dagger psi): f = ||rows @ phi||^2
        rows = np.einsum("iab,rb->ria", adj, p).conj()
        ph = _least_right_vectors(rows)
        # rows phi^dagger A_i^dagger: f = ||rows @ psi||^2
        rows = np.einsum("ra,iab->rib", ph.conj(), adj)
        p = _least_right_vectors(rows)
        fn = _objective(adj, p, ph)
        psi[idx] = p
        phi[idx] = ph
        for j, i in enumerate(idx):
            history[i].append(float(fn[j]))
        prev = f[idx]
        done = np.isfinite(prev) & (np.abs(prev - fn) <= rel_tol * np.maximum(prev, 1e-300))
        done |= fn < 1e-30
        f[idx] = fn
        active[idx[done]] = False
    return psi, phi, f, history


def _random_states(rng, n, d):
    v = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def seesaw_run(s, psi0, max_iters=500):
    """Single seesaw run from ``psi0``; returns ``(witness, objective_history)``."""
    psi = np.asarray(psi0, dtype=complex).reshape(1, -1).copy()
    psi, phi, f, hist = _seesaw_batch(s.basis, psi, max_iters)
    return RankOneWitness(psi[0], phi[0], float(np.sqrt(f[0]))), hist[0]


def bell_seeds(d):
    """vec(W_ab)/sqrt(m) for the m^2 Weyl operators when d = m^2, else empty.

    Random starts essentially never land in the basin of an isolated
    witness; maximally entangled starts cover the witnesses that algebraic
    constructions over C^m (x) C^m tend to produce.
    """
    m = int(round(np.sqrt(d)))
    if m < 2 or m * m != d:
        return np.zeros((0, d), dtype=complex)
    shift = np.roll(np.eye(m), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(m) / m))
    out = []
    for a in range(m):
        for b in range(m):
            w = np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
            out.append(w.reshape(-1) / np.sqrt(m))
    return np.array(out)


def _search(s, config):
    rng = np.random.default_rng(config.seed)
    d = s.ambient_dim
    seeds = bell_seeds(d) if config.bell_seeds else np.zeros((0, d), dtype=complex)
    seeds = seeds[: config.restarts]
    best = None
    best_f = np.inf
    done = 0
    max_increase = 0.0
    while done < config.restarts:
        n = min(_CHUNK, config.restarts - done)
        k = max(0, min(n, len(seeds) - done))
        psi0 = np.concatenate([seeds[done : done + k], _random_states(rng, n - k, d)])
        psi, phi, f, hist = _seesaw_batch(s.basis, psi0, config.max_iters)
        for h in hist:
            if len(h) > 1:
                max_increase = max(max_increase, float(np.max(np.diff(h))))
        i = int(np.argmin(f))  # first index on ties
        if f[i] < best_f:
            best_f = f[i]
            best = RankOneWitness(psi[i], phi[i], float(np.sqrt(max(f[i], 0.0))))
        done += n
        if config.stop_on_witness and best.residual < config.witness_tol:
            break
    return best, done, max_increase


def seesaw_search(s, seed=42, max_iters=500, restarts=1):
    """Best rank-one candidate orthogonal to ``s`` over seeded restarts."""
    cfg = SearchConfig(restarts=restarts, max_iters=max_iters, seed=seed, stop_on_witness=False)
    return _search(s, cfg)[0]


def _numerical_rank(m, tol=1e-9):
    sv = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(sv > tol * sv[0])) if sv[0] > 0 else 0


def _is_identity_tensor(b, c, tol=1e-9):
    d = b.shape[0]
    e = d // c
    blocks = b.reshape(c, e, c, e)
    inner = np.einsum("aiaj->ij", blocks) / c
    return np.linalg.norm(b - np.kron(np.eye(c), inner)) < tol * max(np.linalg.norm(b), 1.0)


def structural_rules(s):
    """Exact shortcuts, or ``None``.

    R1: the complement is one-dimensional and its generator has rank >= 2.
    R2: for some split d = c * e with c >= 2, the complement lies in
        I_c (x) B(C^e); each nonzero element then has rank c * rank(D) >= 2.
    R3: dim S < 2d - 1, which forces a rank-one matrix into the complement.
    R1 and R2 certify unextendibility, R3 certifies extendibility.
    """
    d = s.ambient_dim
    if s.dim < d * d:
        comp = complement(s)
        if comp.dim == 1 and _numerical_rank(comp.basis[0]) >= 2:
            return "R1"
        for c in range(2, d + 1):
            if d % c == 0 and all(_is_identity_tensor(b, c) for b in comp.basis):
                return "R2"
    if s.dim < 2 * d - 1:
        return "R3"
    return None


def decide_extendibility(s, config=None):
    """Does the complement of ``s`` contain a rank-one matrix?"""
    config = config or SearchConfig()
    rule = structural_rules(s)
    if rule in ("R1", "R2") and config.structural:
        return ExtendibilityReport(STRUCTURAL, seed=config.seed, structural_rule=rule)
    best, done, inc = _search(s, config)
    common = dict(
        min_residual=best.residual,
        restarts=done,
        seed=config.seed,
        structural_rule=rule,
        max_iters=config.max_iters,
        max_increase=inc,
    )
    if best.residual < config.witness_tol and best.max_overlap(s) < config.witness_tol:
        return ExtendibilityReport(EXTENDIBLE, witness=best, **common)
    notes = []
    if rule == "R3":
        notes.append("dimension count guarantees a witness the search did not reach")
    if best.residual >= config.floor_tol:
        return ExtendibilityReport(NO_WITNESS, witness=best, notes=notes, **common)
    return ExtendibilityReport(INCONCLUSIVE, witness=best, notes=notes, **common)


def grid_minimum(s, n=50):
    """Brute-force min of the seesaw objective's square root over a Bloch/phase grid, d = 2.

    Each of psi and phi runs over (cos(a/2), e^{ib} sin(a/2)) with a in
    [0, pi] and b in [0, 2 pi) sampled at n points, n^4 pairs in total.
    """
    if s.ambient_dim != 2:
        raise ValueError("grid search is only for 2 x 2 matrices")
    a = np.linspace(0, np.pi, n)
    b = np.linspace(0, 2 * np.pi, n, endpoint=False)
    aa, bb = np.meshgrid(a, b, indexing="ij")
    states = np.stack([np.cos(aa / 2), np.exp(1j * bb) * np.sin(aa / 2)], axis=-1).reshape(-1, 2)
    total = np.zeros((states.shape[0], states.shape[0]))
    for m in s.basis:
        # <A, psi phi^dagger> = phi^dagger A^dagger psi, rows indexed by phi
        total += np.abs(states.conj() @ m.conj().T @ states.T) ** 2
    return float(np.sqrt(total.min()))


def upb_tensor_check(generators, power=1, config=None):
    """Extendibility of span(generators)^(x power) for rank-one generators."""
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    gens = [np.asarray(g, dtype=complex) for g in generators]
    for g in gens:
        if _numerical_rank(g) != 1:
            raise ValueError("generators must all have rank one")
    s = span(gens)
    if power == 2:
        s = tensor_subspace(s, s)
    return decide_extendibility(s, config)
