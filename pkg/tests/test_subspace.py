import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from zecap.catalog import (
    cfb_upb_generators,
    lemma3_s0,
    lemma3_s0_generators,
    lemma3_s1,
    lemma3_s1_generators,
    lemma3_unitary,
    super_channel,
)
from zecap.channel import compute_k_space
from zecap.linalg import I2, X, Y, Z, hs_inner, ket
from zecap.subspace import (
    MatrixSubspace,
    complement,
    contains,
    contains_identity,
    is_hermitian_closed,
    left_multiply,
    span,
    subspace_distance,
    subspace_equal,
    tensor_subspace,
)


def random_subspace(rng, d, k):
    g = rng.normal(size=(k, d, d)) + 1j * rng.normal(size=(k, d, d))
    return span(list(g), d)


def gram_residual(s):
    return np.abs(s.gram() - np.eye(s.dim)).max()


def test_span_examples():
    assert span([I2, 2 * I2]).dim == 1
    s0 = span(lemma3_s0_generators(np.pi / 4))
    assert s0.dim == 8 and gram_residual(s0) < 1e-10
    ixy = span([I2, X, Y])
    assert subspace_equal(span(cfb_upb_generators()), ixy)
    with pytest.raises(ValueError):
        span([np.zeros((2, 2))])


def test_complement_examples():
    assert subspace_equal(complement(span([I2, X, Y])), span([Z]))
    u = lemma3_unitary()
    c = complement(lemma3_s0())
    assert c.dim == 8
    assert subspace_equal(left_multiply(u, c), lemma3_s1())
    with pytest.raises(ValueError):
        complement(span([I2, X, Y, Z]))


def test_complement_against_null_space():
    rng = np.random.default_rng(0)
    for d, k in [(2, 1), (2, 3), (3, 4), (3, 7), (4, 9)]:
        s = random_subspace(rng, d, k)
        # independent oracle: scipy null space of the conjugated coordinate rows
        ns = scipy.linalg.null_space(s.vectors.conj())
        ref = MatrixSubspace(d, ns.T.reshape(-1, d, d))
        assert subspace_distance(complement(s), ref) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.data())
def test_complement_properties(d, data):
    k = data.draw(st.integers(1, d * d - 1))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**31 - 1)))
    s = random_subspace(rng, d, k)
    c = complement(s)
    assert s.dim + c.dim == d * d
    assert gram_residual(c) < 1e-10
    assert np.abs(s.vectors.conj() @ c.vectors.T).max() < 1e-10
    assert subspace_equal(complement(c), s)
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    p = s.project(m)
    assert np.abs(s.project(p) - p).max() < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_hermitian_closure_passes_to_complement(d, k, seed):
    rng = np.random.default_rng(seed)
    gens = []
    for _ in range(k):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        gens += [g + g.conj().T]
    s = span(gens, d)
    assert is_hermitian_closed(s)
    if s.dim < d * d:
        assert is_hermitian_closed(complement(s))


def test_contains_examples():
    ok, r = contains(span([I2, X, Y]), Z)
    assert not ok and r == pytest.approx(1)
    k = compute_k_space(super_channel(2))
    for a in (np.outer(ket("0"), ket("1")), np.outer(ket("1"), ket("0")), np.outer(ket("+"), ket("-"))):
        for i in range(2):
            for j in range(2):
                assert contains(k, np.kron(a, np.outer(np.eye(2)[i], np.eye(2)[j])))[0]
    s = random_subspace(np.random.default_rng(1), 3, 4)
    for b in s.basis:
        ok, r = contains(s, b)
        assert ok and r < 1e-12
    with pytest.raises(ValueError):
        contains(s, np.zeros((3, 3)))


def test_hermitian_and_identity_examples():
    assert not is_hermitian_closed(span([np.outer(ket("0"), ket("1"))]))
    assert is_hermitian_closed(lemma3_s0())
    assert not contains_identity(span([Z]))
    g = lemma3_s1_generators()
    assert np.allclose(g[0] + g[1], np.eye(4))
    assert contains_identity(lemma3_s1())


def test_tensor_subspace():
    assert subspace_equal(tensor_subspace(span([I2]), span([I2])), span([np.eye(4)]))
    pair = tensor_subspace(lemma3_s0(), lemma3_s1())
    assert pair.dim == 64 and pair.ambient_dim == 16
    assert gram_residual(pair) < 1e-10


def test_subspace_equal_examples():
    s = lemma3_s0()
    assert subspace_equal(s, s)
    assert not subspace_equal(span([I2, X]), span([I2, Y]))


def test_lemma3_generators_orthogonal_pair():
    a3 = lemma3_s0_generators()[2]
    a3p = lemma3_s1_generators()[2]
    assert abs(hs_inner(a3, a3p)) < 1e-15
    assert np.allclose(a3, -a3.T) and np.allclose(a3p, a3p.T)


def test_s1_is_u_s0_perp_across_theta():
    u = lemma3_unitary()
    for th in np.linspace(0.05, np.pi / 2 - 0.05, 10):
        assert subspace_equal(left_multiply(u, complement(lemma3_s0(th))), lemma3_s1(th))


def test_theta_outside_domain_warns():
    with pytest.warns(UserWarning):
        lemma3_s0(0.0)
