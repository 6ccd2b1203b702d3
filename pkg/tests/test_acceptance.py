"""Acceptance criteria 1-13, each pinned at its stated tolerance.

Every test prints one ``PASS`` or ``FAIL`` line naming its criterion, so
``pytest -s`` shows a compact scoreboard. Where a library routine is the
thing under test, the check goes through an independent route (dense
matrices, explicit K-space bases, scipy) instead of re-calling it.
"""

import json
import time

import numpy as np
import pytest

from zecap.catalog import (
    CATALOG,
    cfb_channel,
    cfb_resolution,
    cfb_upb_generators,
    channel_from_subspace,
    fourier_basis,
    lemma3_s0,
    lemma3_s1,
    lemma3_unitary,
    lemma3_witness,
    super_channel,
    theorem1_channel,
    theorem2_channel,
    upb_generators,
)
from zecap.channel import (
    apply,
    check_completeness,
    compute_k_space,
    identity_channel,
    random_channel,
    rank_one_kraus_test,
    tensor_channels,
)
from zecap.linalg import I2, X, Y, hs_inner, ket, max_entangled, schmidt
from zecap.protocols import (
    ZeroErrorCode,
    cfb_protocol,
    super_cfb_entanglement,
    theorem2_ebit_locc,
    theorem3_transmission,
    verify_code,
)
from zecap.report import run_report
from zecap.subspace import (
    complement,
    contains,
    contains_identity,
    is_hermitian_closed,
    left_multiply,
    span,
    subspace_distance,
    tensor_subspace,
)
from zecap.unext import (
    EXTENDIBLE,
    NO_WITNESS,
    SearchConfig,
    decide_extendibility,
    grid_minimum,
    seesaw_search,
    structural_rules,
    upb_tensor_check,
)


def verdict(n, ok, detail, budget=None, elapsed=None):
    timing = ""
    if budget is not None:
        timing = f" [{elapsed:.1f} s of {budget} s]"
        ok = ok and elapsed < budget
    print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}{timing}")
    assert ok, detail


def proj(v):
    return np.outer(v, v.conj())


def random_admissible(rng, d):
    gens = [np.eye(d, dtype=complex)]
    for _ in range(int(rng.integers(1, d * d - 1))):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        gens.append(g + g.conj().T)
    return span(gens, d)


def traceless_identity_tensor(d):
    # I_2 (x) M over the d^2 - 1 traceless matrix units and diagonal differences
    gens = []
    for i in range(d):
        for j in range(d):
            if i != j:
                m = np.zeros((d, d), dtype=complex)
                m[i, j] = 1
                gens.append(m)
    for i in range(d - 1):
        m = np.diag([1.0 if k == i else (-1.0 if k == i + 1 else 0.0) for k in range(d)])
        gens.append(m.astype(complex))
    return span([np.kron(I2, g) for g in gens], 2 * d)


def test_criterion_01_lemma2_roundtrip():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    cases = [lemma3_s0(), lemma3_s1(), span([I2, X, Y])]
    cases += [random_admissible(rng, 2 + i % 2) for i in range(20)]
    comp = dist = 0.0
    for m in cases:
        e = channel_from_subspace(m)
        # completeness directly from the Kraus list
        comp = max(comp, np.abs(sum(k.conj().T @ k for k in e.kraus) - np.eye(e.dim_in)).max())
        dist = max(dist, subspace_distance(compute_k_space(e), m))
    verdict(1, comp < 1e-9 and dist < 1e-8,
            f"{len(cases)} subspaces, completeness {comp:.1e}, K distance {dist:.1e}",
            10, time.perf_counter() - t0)


def test_criterion_02_lemma3_structure():
    t0 = time.perf_counter()
    u = lemma3_unitary()
    ok = True
    worst = 0.0
    for th in np.linspace(0.1, np.pi / 2 - 0.1, 10):
        s0, s1 = lemma3_s0(th), lemma3_s1(th)
        ok &= s0.dim == 8 and s1.dim == 8
        ok &= all(is_hermitian_closed(s) and contains_identity(s) for s in (s0, s1))
        worst = max(worst, subspace_distance(s1, left_multiply(u, complement(s0))))
    verdict(2, ok and worst < 1e-8, f"10 angles, dims 8/8, S1 vs U S0-perp distance {worst:.1e}",
            5, time.perf_counter() - t0)


def test_criterion_03_pair_extendible():
    t0 = time.perf_counter()
    pair = tensor_subspace(lemma3_s0(), lemma3_s1())
    # witness built from scratch: (I (x) U) Phi_4
    phi4 = max_entangled(4)
    psi = np.kron(np.eye(4), lemma3_unitary()) @ phi4
    w = np.outer(phi4, psi.conj())
    overlap = max(abs(hs_inner(a, w)) for a in pair.basis)
    rep = decide_extendibility(pair, SearchConfig(seed=42))
    ok = overlap < 1e-10 and rep.verdict == EXTENDIBLE and rep.min_residual < 1e-8
    verdict(3, ok, f"witness overlap {overlap:.1e}, search {rep.verdict} residual {rep.min_residual:.1e}",
            30, time.perf_counter() - t0)


def test_criterion_04_lemma3_unextendible_heuristic():
    t0 = time.perf_counter()
    results = {}
    for name, s in (("S0", lemma3_s0()), ("S1", lemma3_s1())):
        rep = decide_extendibility(s, SearchConfig(restarts=1000, seed=42))
        results[name] = (rep.verdict, rep.min_residual, rep.restarts)
    ok = all(v == NO_WITNESS and r > 1e-3 and n >= 1000 for v, r, n in results.values())
    # brute-force grid cross-check of the seesaw engine on 2 x 2 subspaces
    rng = np.random.default_rng(5)
    cases = [span([I2, X, Y]), span([I2]), span([X, Y])]
    for k in (1, 2, 3):
        g = rng.normal(size=(k, 2, 2)) + 1j * rng.normal(size=(k, 2, 2))
        cases.append(span(list(g), 2))
    grid_gap = max(abs(grid_minimum(s) - seesaw_search(s, seed=0, restarts=50).residual) for s in cases)
    ok &= grid_gap <= 0.05
    detail = ", ".join(f"{k} {v} min {r:.3f}" for k, (v, r, _) in results.items())
    verdict(4, ok, f"{detail}; grid gap {grid_gap:.3f}", 60, time.perf_counter() - t0)


def test_criterion_05_theorem1_code():
    t0 = time.perf_counter()
    g = theorem1_channel()
    psi, phi = lemma3_witness()
    words = []
    for v in (phi, psi):
        w = np.zeros((8, 8), dtype=complex)
        w[:4, 4:] = v.reshape(4, 4)
        words.append(w.reshape(-1))
    tr = verify_code(ZeroErrorCode(g, words, uses=2))
    # independent route: psi phi^dagger against an explicit basis of K(G) (x) K(G)
    kk = tensor_subspace(compute_k_space(g), compute_k_space(g))
    oracle = max(abs(hs_inner(a, np.outer(words[1], words[0].conj()))) for a in kk.basis)
    rate = tr.bounds[0].rate if tr.bounds else 0.0
    ok = tr.passed and tr.ledger["max_overlap"] < 1e-10 and oracle < 1e-10 and rate >= 0.5
    verdict(5, ok, f"overlap {tr.ledger['max_overlap']:.1e} (oracle {oracle:.1e}), C0(G) >= {rate}",
            5, time.perf_counter() - t0)


def test_criterion_06_theorem2():
    t0 = time.perf_counter()
    ok = True
    parts = []
    k0, k1, kp, km = ket("0"), ket("1"), ket("+"), ket("-")
    rho0 = (proj(np.kron(k0, k0)) + proj(np.kron(kp, k1))) / 2
    rho1 = (proj(np.kron(k1, k0)) + proj(np.kron(km, k1))) / 2
    r01 = abs(np.trace(rho0 @ rho1))
    ok &= r01 < 1e-12
    for d in (2, 3, 4, 8):
        e = theorem2_channel(d)
        ch = tensor_channels(identity_channel(2), e)
        words = [np.kron(max_entangled(2), np.eye(d)[k]) for k in range(d)]
        # dense outputs, pairwise Hilbert-Schmidt overlaps
        outs = [apply(ch, proj(w)) for w in words]
        worst = max(abs(np.trace(outs[i] @ outs[j])) for i in range(d) for j in range(i + 1, d))
        k = compute_k_space(e)
        rep = decide_extendibility(k, SearchConfig(restarts=1000, seed=42, structural=False))
        rule = structural_rules(k)
        ok &= rank_one_kraus_test(e) and worst < 1e-10
        ok &= rep.verdict == NO_WITNESS and rep.min_residual > 1e-3 and rule == "R2"
        parts.append(f"d={d} overlap {worst:.0e} search min {rep.min_residual:.3f}")
    verdict(6, ok, f"tr(rho0 rho1) {r01:.0e}; " + "; ".join(parts), 60, time.perf_counter() - t0)


def test_criterion_07_theorem2_locc():
    t0 = time.perf_counter()
    ok = True
    for d in (2, 3, 4):
        tr = theorem2_ebit_locc(d)
        by_msg = {}
        for b in tr.branches:
            by_msg.setdefault(b.outcome[0], []).append(b)
        for k in range(d):
            total = sum(b.probability for b in by_msg[k])
            wrong = sum(b.probability for b in by_msg[k] if b.outcome[-1] != k)
            ok &= abs(total - 1) < 1e-10 and wrong < 1e-12
        ok &= tr.passed
    verdict(7, ok, "every branch decodes its message for d = 2, 3, 4", 10, time.perf_counter() - t0)


def test_criterion_08_theorem3():
    t0 = time.perf_counter()
    ok = True
    parts = []
    for d in (2, 3):
        k = compute_k_space(super_channel(d))
        comp = complement(k)
        dist = subspace_distance(comp, traceless_identity_tensor(d))
        upb = max(contains(k, g)[1] for g in upb_generators(d))
        rule = structural_rules(k)
        tr = theorem3_transmission(d, n_random=100, seed=42)
        fid = min(b.fidelity for b in tr.branches)
        ok &= comp.dim == d * d - 1 and dist < 1e-8 and rule == "R2" and upb < 1e-10
        ok &= tr.passed and fid >= 1 - 1e-10
        parts.append(f"d={d} complement dim {comp.dim} dist {dist:.0e} {rule} upb {upb:.0e} min fid 1-{1 - fid:.0e}")
    verdict(8, ok, "; ".join(parts), 60, time.perf_counter() - t0)


def test_criterion_09_theorem4_channel():
    t0 = time.perf_counter()
    res = np.abs(sum(cfb_resolution()) - np.eye(2)).max()
    k = compute_k_space(cfb_channel())
    dist = subspace_distance(k, span([I2, X, Y]))
    rule = structural_rules(k)
    rep = upb_tensor_check(cfb_upb_generators(), power=2, config=SearchConfig(seed=42))
    ok = res < 1e-12 and dist < 1e-8 and rule == "R1"
    ok &= rep.verdict == NO_WITNESS and rep.min_residual > 1e-3
    verdict(9, ok, f"sum A_k residual {res:.0e}, K distance {dist:.0e}, {rule}, "
            f"power 2 {rep.verdict} min {rep.min_residual:.3f}", 30, time.perf_counter() - t0)


def test_criterion_10_theorem4_protocol():
    t0 = time.perf_counter()
    tr = cfb_protocol()
    # Schmidt chain recomputed here from the catalog blocks
    e1 = cfb_resolution()[0]
    w, v = np.linalg.eigh(e1)
    root = (v * np.sqrt(w)) @ v.conj().T
    one = np.kron(np.eye(2), root) @ max_entangled(2)
    one /= np.linalg.norm(one)
    c1 = schmidt(one, (2, 2)).coefficients
    two = np.kron(one, one).reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(16)
    c2 = schmidt(two, (4, 4)).coefficients
    chain = max(np.abs(c1 - [2 / 3, 1 / 3]).max(), np.abs(c2 - np.array([4, 2, 2, 1]) / 9).max())
    conv = tr.ledger["max Schmidt deviation after conversion"]
    bit = tr.ledger["max bit-stage overlap"]
    prob = abs(sum(b.probability for b in tr.branches) - 1)
    ok = tr.passed and chain < 1e-10 and conv < 1e-9 and prob < 1e-9 and bit < 1e-12
    ok &= tr.ledger["C_cfb >="] >= 1 / 3 - 1e-15 and tr.ledger["Q_cfb >="] >= 1 / 8 - 1e-15
    verdict(10, ok, f"chain {chain:.0e}, conversion {conv:.0e}, bit overlap {bit:.0e}, "
            f"{len(tr.branches)} branches, C >= 1/3, Q >= 1/8", 30, time.perf_counter() - t0)


def test_criterion_11_super_cfb():
    t0 = time.perf_counter()
    fids = {d: min(b.fidelity for b in super_cfb_entanglement(d).branches) for d in (2, 3)}
    ok = all(f >= 1 - 1e-10 for f in fids.values())
    verdict(11, ok, ", ".join(f"d={d} min fidelity 1-{1 - f:.0e}" for d, f in fids.items()),
            30, time.perf_counter() - t0)


def test_criterion_12_cross_module():
    t0 = time.perf_counter()
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(20):
        da, db = (int(x) for x in rng.integers(2, 4, size=2))
        e = random_channel(rng, da, n_kraus=int(rng.integers(1, 4)))
        f = random_channel(rng, db, n_kraus=int(rng.integers(1, 4)))
        lhs = compute_k_space(tensor_channels(e, f))
        rhs = tensor_subspace(compute_k_space(e), compute_k_space(f))
        worst = max(worst, subspace_distance(lhs, rhs))
    props = {}
    for name, entry in CATALOG.items():
        if entry.kind != "channel":
            continue
        k = compute_k_space(entry.build(**entry.params))
        props[name] = is_hermitian_closed(k) and contains_identity(k)
    ok = worst < 1e-8 and all(props.values())
    verdict(12, ok, f"20 pairs, K distance {worst:.0e}; properties hold for {sorted(props)}",
            20, time.perf_counter() - t0)


def test_criterion_13_determinism():
    t0 = time.perf_counter()
    a = json.dumps(run_report(seed=42).to_dict(), sort_keys=True, indent=2)
    ledger_time = time.perf_counter() - t0
    b = json.dumps(run_report(seed=42).to_dict(), sort_keys=True, indent=2)
    other = run_report(seed=7)
    sa = {c["claim_id"]: c["status"] for c in json.loads(a)["claims"]}
    sb = {c.claim_id: c.status for c in other.claims}
    statuses = sorted(set(sa.values()))
    ok = a == b and sa == sb and len(sa) >= 14 and statuses[0] in ("heuristic-pass", "pass")
    ok &= all(s in ("pass", "heuristic-pass") for s in sa.values())
    elapsed = time.perf_counter() - t0 - ledger_time
    # the budget is relative: the second and third runs together within twice the first
    verdict(13, ok, f"{len(sa)} claims, byte identical {a == b}, statuses match across seeds {sa == sb}",
            round(2 * ledger_time + 1), elapsed)
