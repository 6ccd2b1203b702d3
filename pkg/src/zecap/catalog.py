"""Constructors for the channels and subspaces studied in this package.

Besides the fixed examples there are two generic compilers turning a
subspace into a channel whose confusability space is exactly that subspace:
one through an arbitrary Hermitian basis (block-diagonal output), one
through a PSD resolution of the identity (flagged output).
"""

from dataclasses import dataclass, field
import warnings

import numpy as np

from .channel import (
    ControlledChannel,
    QuantumChannel,
    assemble_controlled,
    direct_sum_channels,
)
from .linalg import ket, psd_sqrt
from .subspace import (
    MatrixSubspace,
    contains_identity,
    is_hermitian_closed,
    span,
)

__all__ = [
    "CATALOG",
    "CatalogEntry",
    "cfb_channel",
    "cfb_resolution",
    "cfb_upb_generators",
    "channel_from_psd_resolution",
    "channel_from_subspace",
    "fourier_basis",
    "lemma3_s0",
    "lemma3_s0_generators",
    "lemma3_s1",
    "lemma3_s1_generators",
    "lemma3_unitary",
    "lemma3_witness",
    "mub_qubit_bases",
    "super_channel",
    "super_channel_parameters",
    "theorem1_channel",
    "theorem2_channel",
    "upb_generators",
    "weyl",
]


def _e(i, j, d=4):
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = 1
    return m


def _check_theta(theta):
    if not 0 < theta < np.pi / 2:
        warnings.warn(
            f"theta={theta} is outside (0, pi/2); unextendibility is not guaranteed there",
            stacklevel=3,
        )


def lemma3_s0_generators(theta=np.pi / 4):
    c, s = np.cos(theta), np.sin(theta)
    return [
        _e(0, 0) + _e(1, 1),
        _e(2, 2) + _e(3, 3),
        _e(2, 0) - _e(0, 2),
        _e(3, 0) + _e(0, 3),
        _e(1, 3) + _e(3, 1),
        c * _e(0, 1) + s * _e(2, 3) - _e(1, 2),
        c * _e(1, 0) + s * _e(3, 2) - _e(2, 1),
        s * _e(0, 1) - c * _e(2, 3) + s * _e(1, 0) - c * _e(3, 2),
    ]


def lemma3_s1_generators(theta=np.pi / 4):
    c, s = np.cos(theta), np.sin(theta)
    return [
        _e(0, 0) + _e(1, 1),
        _e(2, 2) + _e(3, 3),
        _e(2, 0) + _e(0, 2),
        _e(3, 0) + _e(0, 3),
        _e(1, 3) - _e(3, 1),
        c * _e(0, 1) + s * _e(2, 3) - _e(1, 2),
        c * _e(1, 0) + s * _e(3, 2) - _e(2, 1),
        s * _e(0, 1) - c * _e(2, 3) + s * _e(1, 0) - c * _e(3, 2),
    ]


def lemma3_unitary():
    return np.diag([1, -1, 1, -1]).astype(complex)


def lemma3_s0(theta=np.pi / 4):
    _check_theta(theta)
    return span(lemma3_s0_generators(theta), 4)


def lemma3_s1(theta=np.pi / 4):
    _check_theta(theta)
    return span(lemma3_s1_generators(theta), 4)


def lemma3_witness():
    """(psi, phi) with |psi><phi| = (I (x) U)|Phi_4><Phi_4|, orthogonal to S0 (x) S1."""
    phi4 = np.eye(4, dtype=complex).reshape(16) / 2
    psi = np.kron(np.eye(4), lemma3_unitary()) @ phi4
    return psi, phi4


def _hermitian_basis(m):
    """Real-linear basis of the Hermitian part of a dagger-closed subspace."""
    d = m.ambient_dim
    herm = []
    for b in m.basis:
        herm.append((b + b.conj().T) / 2)
        herm.append(1j * (b - b.conj().T) / 2)
    flat = np.stack([h.reshape(-1) for h in herm])
    real = np.concatenate([flat.real, flat.imag], axis=1)
    _, sv, vh = np.linalg.svd(real, full_matrices=False)
    r = int(np.sum(sv > 1e-9 * sv[0]))
    n = d * d
    out = (vh[:r, :n] + 1j * vh[:r, n:]).reshape(r, d, d)
    return [(h + h.conj().T) / 2 for h in out]


def channel_from_subspace(m):
    """Trace-preserving channel E with K(E) = m.

    m must be closed under the adjoint and contain the identity. A Hermitian
    basis M_k is shifted to positive definite F_k = I + s M_k, the identity is
    completed by F_0 = I - t sum F_k, and each block gets a Kraus operator
    A_k with A_k^dagger A_k equal to its operator, mapping into its own
    orthogonal copy of C^d. The output has dimension (n + 1) d.
    """
    if not is_hermitian_closed(m):
        raise ValueError("subspace is not closed under the adjoint")
    if not contains_identity(m):
        raise ValueError("subspace does not contain the identity")
    d = m.ambient_dim
    herm = _hermitian_basis(m)
    n = len(herm)
    s = 1 / (2 * max(np.linalg.norm(h, 2) for h in herm))
    f = [np.eye(d) + s * h for h in herm]
    t = 1 / (2 * (n + 1))
    f0 = np.eye(d) - t * sum(f)
    ops = [f0] + [t * x for x in f]
    kraus = np.zeros((n + 1, (n + 1) * d, d), dtype=complex)
    for k, op in enumerate(ops):
        w, v = np.linalg.eigh((op + op.conj().T) / 2)
        if w[0] <= 0:
            raise RuntimeError("positive-definite shift failed")
        kraus[k, k * d : (k + 1) * d] = np.sqrt(w)[:, None] * v.conj().T
    return QuantumChannel(kraus, name="from-subspace")


def channel_from_psd_resolution(ms):
    """E(rho) = sum_k sqrt(M_k) rho sqrt(M_k) (x) |k><k|, output C^d (x) C^N."""
    ms = [np.asarray(x, dtype=complex) for x in ms]
    d = ms[0].shape[0]
    total = sum(ms)
    if np.linalg.norm(total - np.eye(d)) > 1e-9:
        raise ValueError("operators do not sum to the identity")
    n = len(ms)
    kraus = []
    for k, mk in enumerate(ms):
        flag = np.zeros((n, 1), dtype=complex)
        flag[k] = 1
        kraus.append(np.kron(psd_sqrt(mk), flag))
    return QuantumChannel(np.stack(kraus), name="psd-resolution")


def theorem1_channel(theta=np.pi / 4):
    e = channel_from_subspace(lemma3_s0(theta))
    f = channel_from_subspace(lemma3_s1(theta))
    return direct_sum_channels(e, f)


def fourier_basis(d):
    """Columns are |k-bar> = F|k>; every overlap <j|k-bar> has modulus 1/sqrt d."""
    w = np.exp(2j * np.pi / d)
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return w ** (j * k) / np.sqrt(d)


def theorem2_channel(d):
    """Entanglement-breaking controlled channel on C^2 (x) C^d.

    Control blocks {|0><0|, |1><+|} and {|0><1|, |1><-|} are each scaled by
    1/sqrt 2 so the two of them together are trace preserving; the data
    blocks are {|k><k|} and {|k-bar><k|}.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    h = 1 / np.sqrt(2)
    e0 = QuantumChannel(
        h * np.stack([np.outer(ket("0"), ket("0")), np.outer(ket("1"), ket("+").conj())]),
        trace_preserving=False,
    )
    e1 = QuantumChannel(
        h * np.stack([np.outer(ket("0"), ket("1")), np.outer(ket("1"), ket("-").conj())]),
        trace_preserving=False,
    )
    eye = np.eye(d, dtype=complex)
    fb = fourier_basis(d)
    f0 = QuantumChannel(np.stack([np.outer(eye[k], eye[k]) for k in range(d)]))
    f1 = QuantumChannel(np.stack([np.outer(fb[:, k], eye[k]) for k in range(d)]))
    c = assemble_controlled(ControlledChannel((e0, e1), (f0, f1)))
    return QuantumChannel(c.kraus, name=f"theorem2-d{d}")


def mub_qubit_bases():
    """The Z, X and Y eigenbases of a qubit as (first, second) vector pairs."""
    return [
        (ket("0"), ket("1")),
        (ket("+"), ket("-")),
        (ket("i+"), ket("i-")),
    ]


def weyl(a, b, d):
    """Shift^a Clock^b on C^d."""
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)


def super_channel_parameters(d):
    """Per flag value k: (psi_k0, psi_k1, U_k), N = 3 d^2 of them."""
    params = []
    for pair in mub_qubit_bases():
        for a in range(d):
            for b in range(d):
                params.append((pair[0], pair[1], weyl(a, b, d)))
    return params


def super_channel(d=2):
    """Retro-correctible controlled channel C^2 (x) C^d -> C^N (x) C^d.

    With probability 1/N pick k, measure the control qubit in
    {conj(psi_k0), conj(psi_k1)}, apply U_k to the data on the second outcome,
    and emit k but not the outcome. Kraus operators are
    (1/sqrt N) |k><conj(psi_kb)| (x) {I, U_k}.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    params = super_channel_parameters(d)
    n = len(params)
    controls, datas = [], []
    for k, (p0, p1, u) in enumerate(params):
        flag = np.zeros(n, dtype=complex)
        flag[k] = 1
        for p, du in ((p0, np.eye(d, dtype=complex)), (p1, u)):
            # <conj(p)| = p^T
            op = np.outer(flag, p) / np.sqrt(n)
            controls.append(QuantumChannel(op[None], trace_preserving=False))
            datas.append(QuantumChannel(du[None]))
    c = assemble_controlled(ControlledChannel(tuple(controls), tuple(datas)))
    return QuantumChannel(c.kraus, name=f"super-d{d}")


def cfb_resolution():
    """Four positive operators summing to I and spanning span{I, X, Y}."""
    def proj(v):
        return np.outer(v, v.conj())

    p, m = proj(ket("+")), proj(ket("-"))
    ip, im = proj(ket("i+")), proj(ket("i-"))
    return [
        (2 / 3 * p + 1 / 3 * m) / 2,
        (1 / 3 * p + 2 / 3 * m) / 2,
        (2 / 3 * ip + 1 / 3 * im) / 2,
        (1 / 3 * ip + 2 / 3 * im) / 2,
    ]


def cfb_upb_generators():
    """Three rank-one projectors spanning span{I, X, Y}."""
    return [np.outer(ket(x), ket(x).conj()) for x in ("+", "-", "i+")]


def cfb_channel():
    c = channel_from_psd_resolution(cfb_resolution())
    return QuantumChannel(c.kraus, name="cfb")


def upb_generators(d):
    """{|0><1|, |1><0|, |+><-|} (x) {|k><l|}: rank-one, spanning traceless (x) B(C^d)."""
    left = [
        np.outer(ket("0"), ket("1")),
        np.outer(ket("1"), ket("0")),
        np.outer(ket("+"), ket("-")),
    ]
    eye = np.eye(d, dtype=complex)
    return [np.kron(a, np.outer(eye[k], eye[l])) for a in left for k in range(d) for l in range(d)]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    build: object
    params: dict = field(default_factory=dict)
    kind: str = "channel"
    claims: tuple = ()


CATALOG = {
    e.name: e
    for e in [
        CatalogEntry("lemma3-s0", lemma3_s0, {"theta": np.pi / 4}, "subspace", ("L3",)),
        CatalogEntry("lemma3-s1", lemma3_s1, {"theta": np.pi / 4}, "subspace", ("L3",)),
        CatalogEntry("theorem1", theorem1_channel, {"theta": np.pi / 4}, "channel", ("T1",)),
        CatalogEntry("theorem2", theorem2_channel, {"d": 2}, "channel", ("T2",)),
        CatalogEntry("super", super_channel, {"d": 2}, "channel", ("T3", "T4")),
        CatalogEntry("cfb", cfb_channel, {}, "channel", ("T4",)),
    ]
}
