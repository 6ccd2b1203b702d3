import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zecap.catalog import cfb_channel, theorem2_channel
from zecap.channel import identity_channel, tensor_channels
from zecap.linalg import max_entangled, schmidt
from zecap.protocols import (
    ProtocolTranscript,
    ZeroErrorCode,
    cfb_protocol,
    haar_states,
    nielsen_convert,
    super_cfb_entanglement,
    theorem2_activation,
    theorem2_ebit_locc,
    theorem3_transmission,
    verify_code,
)


def test_transcript_bookkeeping():
    tr = ProtocolTranscript("t")
    assert tr.check("a", 1e-13, 1e-12)
    tr.note("info", 3)
    assert tr.passed and tr.verdict == "pass"
    assert not tr.check("b", 0.5, 1e-3)
    assert tr.verdict == "fail" and [s.label for s in tr.failures()] == ["b"]
    assert tr.max_residual("a") == 1e-13
    d = tr.to_dict()
    assert d["steps"][1]["passed"] is True and d["steps"][2]["passed"] is False


def test_verify_code_identity_channel():
    tr = verify_code(ZeroErrorCode(identity_channel(3), list(np.eye(3))))
    assert tr.passed and tr.bounds[0].lower == 3
    assert tr.ledger["code_size"] == 3


def test_verify_code_rejects_overlapping_words():
    s = 1 / np.sqrt(2)
    tr = verify_code(ZeroErrorCode(identity_channel(2), [[1, 0], [s, s]]))
    assert not tr.passed and tr.bounds == []
    assert tr.ledger["max_overlap"] == pytest.approx(0.5)


def test_code_validation():
    with pytest.raises(ValueError):
        ZeroErrorCode(identity_channel(2), [[1, 0, 0]])
    with pytest.raises(ValueError):
        verify_code(ZeroErrorCode(identity_channel(2), [[1, 0]]))


def test_theorem2_plain_inputs_collide():
    # without the noiseless qubit, the basis inputs |k> do not stay distinguishable
    e = theorem2_channel(3)
    tr = verify_code(ZeroErrorCode(e, [np.eye(6)[0], np.eye(6)[1]]))
    assert not tr.passed


@pytest.mark.parametrize("d", [2, 3, 5])
def test_theorem2_activation(d):
    tr = theorem2_activation(d)
    assert tr.passed, tr.failures()
    assert tr.ledger["alpha(I2 x E) >="] == d
    assert tr.bounds[0].lower == d


@pytest.mark.parametrize("d", [2, 3])
def test_theorem2_locc(d):
    tr = theorem2_ebit_locc(d)
    assert tr.passed, tr.failures()
    assert tr.ledger["messages"] == d


def test_haar_states_seeded():
    a = haar_states(5, 3, 1)
    assert np.allclose(np.linalg.norm(a, axis=1), 1)
    assert np.array_equal(a, haar_states(5, 3, 1))
    assert not np.allclose(a, haar_states(5, 3, 2))


def test_theorem3_transmission_basis_inputs():
    tr = theorem3_transmission(2, inputs=np.eye(2, dtype=complex), n_random=0)
    assert tr.passed
    assert all(b.fidelity > 1 - 1e-10 for b in tr.branches)


@st.composite
def state_and_target(draw):
    d = draw(st.integers(2, 4))
    seed = draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    v = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
    v /= np.linalg.norm(v)
    lam = schmidt(v, (d, d)).coefficients
    # mixing toward a product vector only ever moves up in the majorization order
    t = draw(st.floats(0, 1))
    mu = (1 - t) * lam
    mu[0] += t
    return v, d, mu


@settings(max_examples=30, deadline=None)
@given(state_and_target())
def test_nielsen_convert_reaches_target(case):
    v, d, mu = case
    branches = nielsen_convert(v, (d, d), mu)
    assert abs(sum(b.probability for b in branches) - 1) < 1e-9
    for b in branches:
        sc = schmidt(b.post_state, (d, d)).coefficients
        assert np.abs(np.sort(sc)[::-1] - np.sort(mu)[::-1]).max() < 1e-8


def test_nielsen_convert_rejects_unreachable():
    v = np.array([np.sqrt(0.9), 0, 0, np.sqrt(0.1)])
    with pytest.raises(ValueError):
        nielsen_convert(v, (2, 2), [0.5, 0.5])
    # the reverse direction is always possible
    assert len(nielsen_convert(max_entangled(2), (2, 2), [0.9, 0.1])) >= 1


def test_nielsen_identity_on_target():
    v = max_entangled(3)
    branches = nielsen_convert(v, (3, 3), [1 / 3] * 3)
    assert sum(b.probability for b in branches) == pytest.approx(1)


def test_cfb_protocol():
    tr = cfb_protocol()
    assert tr.passed, [s.label for s in tr.failures()][:5]
    assert tr.ledger["C_cfb >="] == pytest.approx(1 / 3)
    assert tr.ledger["Q_cfb >="] == pytest.approx(1 / 8)
    outcomes = {b.outcome[:2] for b in tr.branches}
    assert len(outcomes) == 16


def test_cfb_direct_bit_fails_without_feedback():
    # a single use cannot carry a bit: K contains the identity and X, so any two pure inputs collide
    c = cfb_channel()
    tr = verify_code(ZeroErrorCode(c, [[1, 0], [0, 1]]))
    assert not tr.passed


@pytest.mark.parametrize("d", [2, 3])
def test_super_cfb(d):
    tr = super_cfb_entanglement(d)
    assert tr.passed
    assert min(b.fidelity for b in tr.branches) > 1 - 1e-10
    assert sum(b.probability for b in tr.branches) == pytest.approx(1)


def test_transcript_json_roundtrip():
    import json

    tr = theorem2_activation(2)
    text = json.dumps(tr.to_dict(), sort_keys=True)
    assert json.loads(text)["verdict"] == "pass"


def test_tensor_with_identity_matches_activation_channel():
    ch = tensor_channels(identity_channel(2), theorem2_channel(2))
    assert ch.dim_in == 8
