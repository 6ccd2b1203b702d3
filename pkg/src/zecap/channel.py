"""Kraus-operator quantum channels and their confusability spaces."""

from dataclasses import dataclass, field
import math

import numpy as np

from .linalg import as_density_matrix
from .subspace import span

__all__ = [
    "CapacityBound",
    "ControlledChannel",
    "QuantumChannel",
    "apply",
    "assemble_controlled",
    "check_completeness",
    "compute_k_space",
    "direct_sum_channels",
    "identity_channel",
    "kraus_images",
    "outputs_orthogonal",
    "pure_output_overlap",
    "random_channel",
    "rank_one_kraus_test",
    "small_kraus_alpha_bound",
    "tensor_channels",
]

COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Completely positive map rho -> sum_k K_k rho K_k^dagger.

    ``kraus`` has shape ``(n, dim_out, dim_in)``. With
    ``trace_preserving=False`` the map is only required to be trace
    non-increasing (sum K^dagger K <= I), which is what the control blocks of
    a controlled channel are.
    """

    kraus: np.ndarray
    trace_preserving: bool = True
    name: str = field(default="", compare=False)

    def __post_init__(self):
        k = np.asarray(self.kraus, dtype=complex)
        if k.ndim == 2:
            k = k[None]
        if k.ndim != 3 or k.shape[0] == 0:
            raise ValueError("kraus must be a non-empty stack of matrices")
        if not np.all(np.isfinite(k)):
            raise ValueError("non-finite Kraus entries")
        k.setflags(write=False)
        object.__setattr__(self, "kraus", k)
        gram = np.einsum("kij,kil->jl", k.conj(), k)
        eye = np.eye(k.shape[2])
        if self.trace_preserving:
            if np.linalg.norm(gram - eye) > COMPLETENESS_TOL:
                raise ValueError(
                    f"completeness violated: residual {np.linalg.norm(gram - eye):.3e}"
                )
        elif np.linalg.eigvalsh(gram - eye)[-1] > COMPLETENESS_TOL:
            raise ValueError("sum of K^dagger K exceeds the identity")

    @property
    def dim_in(self):
        return self.kraus.shape[2]

    @property
    def dim_out(self):
        return self.kraus.shape[1]

    @property
    def n_kraus(self):
        return self.kraus.shape[0]

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return (
            f"QuantumChannel({label}dim_in={self.dim_in}, dim_out={self.dim_out}, "
            f"n_kraus={self.n_kraus})"
        )


@dataclass(frozen=True)
class CapacityBound:
    """Finite-use evidence ``quantity >= lower`` on ``uses`` channel copies."""

    quantity: str
    lower: float
    uses: int = 1
    witness: str = ""

    def __post_init__(self):
        if self.quantity not in ("alpha", "alpha_q"):
            raise ValueError(f"unknown quantity {self.quantity!r}")
        if self.quantity == "alpha" and self.lower < 1:
            raise ValueError("alpha is at least 1")
        if self.uses < 1:
            raise ValueError("uses must be positive")

    @property
    def rate(self):
        """log2(lower) / uses, a lower bound on the zero-error capacity."""
        return math.log2(self.lower) / self.uses

    def to_dict(self):
        return {
            "quantity": self.quantity,
            "lower": self.lower,
            "uses": self.uses,
            "rate": self.rate,
            "witness": self.witness,
        }


def identity_channel(d):
    return QuantumChannel(np.eye(d, dtype=complex)[None], name=f"id{d}")


def random_channel(rng, dim_in, dim_out=None, n_kraus=2):
    """Kraus blocks of a random isometry C^dim_in -> C^(n_kraus * dim_out)."""
    dim_out = dim_in if dim_out is None else dim_out
    if n_kraus * dim_out < dim_in:
        raise ValueError("too few Kraus operators for an isometry")
    g = rng.normal(size=(n_kraus * dim_out, dim_in)) + 1j * rng.normal(size=(n_kraus * dim_out, dim_in))
    q, _ = np.linalg.qr(g)
    return QuantumChannel(q.reshape(n_kraus, dim_out, dim_in))


def apply(c, rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (c.dim_in, c.dim_in):
        raise ValueError(f"input of shape {rho.shape}, channel expects {c.dim_in}")
    k = c.kraus
    return np.tensordot(k @ rho, k.conj(), axes=([0, 2], [0, 2]))


def tensor_channels(a, b):
    k = np.einsum("iab,jcd->ijacbd", a.kraus, b.kraus).reshape(
        a.n_kraus * b.n_kraus, a.dim_out * b.dim_out, a.dim_in * b.dim_in
    )
    return QuantumChannel(
        k,
        trace_preserving=a.trace_preserving and b.trace_preserving,
        name=f"({a.name}x{b.name})" if a.name and b.name else "",
    )


def direct_sum_channels(a, b):
    """Block channel: measure which input block, then apply ``a`` or ``b``.

    Output spaces are embedded as orthogonal blocks, so the two branches
    never overlap at the output.
    """
    din = a.dim_in + b.dim_in
    dout = a.dim_out + b.dim_out
    ka = np.zeros((a.n_kraus, dout, din), dtype=complex)
    ka[:, : a.dim_out, : a.dim_in] = a.kraus
    kb = np.zeros((b.n_kraus, dout, din), dtype=complex)
    kb[:, a.dim_out :, a.dim_in :] = b.kraus
    return QuantumChannel(
        np.concatenate([ka, kb]),
        trace_preserving=a.trace_preserving and b.trace_preserving,
        name=f"({a.name}+{b.name})" if a.name and b.name else "",
    )


def compute_k_space(c):
    """span{K_k^dagger K_l} as a subspace of B(C^dim_in)."""
    prods = np.einsum("kji,ljm->klim", c.kraus.conj(), c.kraus)
    return span(prods.reshape(-1, c.dim_in, c.dim_in), c.dim_in)


def check_completeness(c):
    gram = np.einsum("kij,kil->jl", c.kraus.conj(), c.kraus)
    return float(np.linalg.norm(gram - np.eye(c.dim_in)))


def outputs_orthogonal(c, rho, sigma, tol=1e-10):
    """Return ``(orthogonal, tr(E(rho) E(sigma)))`` for density matrices."""
    a = apply(c, as_density_matrix(rho))
    b = apply(c, as_density_matrix(sigma))
    overlap = float(np.real(np.trace(a @ b)))
    return overlap < tol, overlap


def kraus_images(c, psi, uses=1):
    """All vectors K_I psi for Kraus words I of the ``uses``-fold tensor power.

    Returns shape ``(n_kraus**uses, dim_out**uses)``. This avoids ever forming
    the tensor-power channel or its output density matrix.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != c.dim_in**uses:
        raise ValueError(f"state of dim {psi.size} does not fit {uses} uses")
    t = psi.reshape(1, 1, -1)
    for _ in range(uses):
        nw, no, nr = t.shape
        t = t.reshape(nw, no, c.dim_in, nr // c.dim_in)
        t = np.einsum("kod,wadr->wkaor", c.kraus, t)
        t = t.reshape(nw * c.n_kraus, no * c.dim_out, nr // c.dim_in)
    return t.reshape(t.shape[0], t.shape[1])


def pure_output_overlap(c, psi, phi, uses=1):
    """tr(E(|psi><psi|) E(|phi><phi|)) on the ``uses``-fold tensor power.

    Equal to sum_{I,J} |<K_I psi, K_J phi>|^2.
    """
    a = kraus_images(c, psi, uses)
    b = kraus_images(c, phi, uses)
    return float(np.linalg.norm(a.conj() @ b.T) ** 2)


@dataclass(frozen=True, eq=False)
class ControlledChannel:
    """Blocks (E_k, F_k): control sub-channels paired with data channels."""

    control_ops: tuple
    data_ops: tuple

    def __post_init__(self):
        if len(self.control_ops) != len(self.data_ops) or not self.control_ops:
            raise ValueError("control and data lists must be equal and non-empty")
        d = self.control_ops[0].dim_in
        total = np.zeros((d, d), dtype=complex)
        for e in self.control_ops:
            total += np.einsum("kij,kil->jl", e.kraus.conj(), e.kraus)
        if np.linalg.norm(total - np.eye(d)) > COMPLETENESS_TOL:
            raise ValueError("control blocks do not sum to a trace-preserving map")


def assemble_controlled(cc):
    blocks = [
        tensor_channels(e, f).kraus for e, f in zip(cc.control_ops, cc.data_ops)
    ]
    return QuantumChannel(np.concatenate(blocks))


def rank_one_kraus_test(c, tol=1e-9):
    """Sufficient test for entanglement breaking: every Kraus op has rank one."""
    s = np.linalg.svd(c.kraus, compute_uv=False)
    if s.shape[1] < 2:
        return True
    return bool(np.all(s[:, 1] < tol * s[:, 0]))


def small_kraus_alpha_bound(c):
    """alpha >= 2 whenever dim K(E) < 2 d - 1 (such subspaces are extendible)."""
    k = compute_k_space(c)
    if k.dim < 2 * c.dim_in - 1:
        return CapacityBound("alpha", 2, 1, witness=f"dim K = {k.dim} < {2 * c.dim_in - 1}")
    return None
