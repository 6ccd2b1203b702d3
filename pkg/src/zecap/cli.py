"""Command-line entry point.

Exit codes: 0 everything passed, 1 a definite failure, 2 usage or input
error, 3 passed but only on search evidence.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import serialize as ser
from .catalog import (
    cfb_channel,
    lemma3_s0,
    lemma3_s1,
    lemma3_witness,
    super_channel,
    theorem1_channel,
    theorem2_channel,
)
from .channel import check_completeness, compute_k_space
from .protocols import (
    ZeroErrorCode,
    cfb_protocol,
    super_cfb_entanglement,
    theorem2_activation,
    theorem2_ebit_locc,
    theorem3_transmission,
    verify_code,
)
from .report import run_report
from .subspace import contains_identity, is_hermitian_closed, tensor_subspace
from .unext import EXTENDIBLE, STRUCTURAL, SearchConfig, decide_extendibility

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_HEURISTIC = 0, 1, 2, 3

CONSTRUCT_NAMES = (
    "lemma3-s0", "lemma3-s1", "lemma3-pair", "theorem1", "theorem1-code",
    "theorem2", "super", "cfb",
)
PROTOCOL_NAMES = ("theorem2", "theorem2-locc", "theorem3", "cfb", "super-cfb")


class UsageError(Exception):
    pass


def _default_seed():
    env = os.environ.get("ZECAP_SEED")
    if env is None:
        return 42
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"ZECAP_SEED={env!r} is not an integer")


def _write(obj, out):
    if out is None:
        return
    text = ser.dump(obj, out)
    if out == "-":
        sys.stdout.write(text)


def _orthonormality(s):
    return float(np.linalg.norm(s.gram() - np.eye(s.dim)))


def _theorem1_code_json(theta):
    psi, phi = lemma3_witness()
    words = []
    for v in (phi, psi):
        w = np.zeros((8, 8), dtype=complex)
        w[:4, 4:] = v.reshape(4, 4)
        words.append(w.reshape(-1))
    return ser.code_to_json(words, 2)


def cmd_construct(args):
    name = args.name
    theta = args.theta
    d = args.d
    if d is not None and d < 2:
        raise UsageError("--d must be at least 2")
    if name in ("lemma3-s0", "lemma3-s1", "lemma3-pair"):
        if name == "lemma3-s0":
            s = lemma3_s0(theta)
        elif name == "lemma3-s1":
            s = lemma3_s1(theta)
        else:
            s = tensor_subspace(lemma3_s0(theta), lemma3_s1(theta))
        print(f"{name}: subspace dim {s.dim} in B(C^{s.ambient_dim}), "
              f"orthonormality residual {_orthonormality(s):.2e}")
        _write(ser.subspace_to_json(s), args.out)
        return EXIT_OK
    if name == "theorem1-code":
        print("theorem1-code: 2 codewords on 2 uses of the direct-sum channel")
        _write(_theorem1_code_json(theta), args.out)
        return EXIT_OK
    builders = {
        "theorem1": lambda: theorem1_channel(theta),
        "theorem2": lambda: theorem2_channel(d or 2),
        "super": lambda: super_channel(d or 2),
        "cfb": cfb_channel,
    }
    c = builders[name]()
    print(f"{name}: dim_in {c.dim_in}, dim_out {c.dim_out}, {c.n_kraus} Kraus operators, "
          f"completeness residual {check_completeness(c):.2e}")
    _write(ser.channel_to_json(c), args.out)
    return EXIT_OK


def _load_channel(path):
    return ser.channel_from_json(ser.load(path))


def cmd_verify(args):
    if args.check == "k-space":
        if not args.channel:
            raise UsageError("k-space needs --channel")
        c = _load_channel(args.channel)
        k = compute_k_space(c)
        herm, unital = is_hermitian_closed(k), contains_identity(k)
        print(f"K(E): dim {k.dim} in B(C^{k.ambient_dim}); adjoint closed {herm}; contains I {unital}")
        _write(ser.subspace_to_json(k), args.out)
        ok = herm and (unital or not c.trace_preserving)
        return EXIT_OK if ok else EXIT_FAIL

    if args.check == "extendibility":
        if not args.subspace:
            raise UsageError("extendibility needs --subspace")
        s, rank = ser.subspace_from_json(ser.load(args.subspace))
        cfg = SearchConfig(restarts=args.restarts, seed=args.seed, witness_tol=args.tol or 1e-8)
        t0 = time.perf_counter()
        rep = decide_extendibility(s, cfg)
        dt = time.perf_counter() - t0
        res = "n/a" if rep.min_residual is None else f"{rep.min_residual:.3e}"
        rule = f" ({rep.structural_rule})" if rep.structural_rule else ""
        print(f"rank {rank}: {rep.verdict}{rule}; min residual {res}; "
              f"{rep.restarts} restarts; {dt:.2f} s")
        _write(ser.report_to_json(rep), args.out)
        if rep.verdict in (EXTENDIBLE, STRUCTURAL):
            return EXIT_OK
        return EXIT_HEURISTIC

    if not (args.channel and args.code):
        raise UsageError("code needs --channel and --code")
    c = _load_channel(args.channel)
    words, uses = ser.code_from_json(ser.load(args.code))
    tr = verify_code(ZeroErrorCode(c, words, uses), tol=args.tol or 1e-10)
    print(f"code of {len(words)} words on {uses} use(s): {tr.verdict}; "
          f"max overlap {tr.ledger['max_overlap']:.2e}")
    for b in tr.bounds:
        print(f"  {b.quantity} >= {b.lower} on {b.uses} use(s), rate {b.rate:.4f}")
    _write(tr.to_dict(), args.out)
    return EXIT_OK if tr.passed else EXIT_FAIL


def cmd_protocol(args):
    d = args.d
    if d is not None and d < 2:
        raise UsageError("--d must be at least 2")
    runs = {
        "theorem2": lambda: theorem2_activation(d or 2),
        "theorem2-locc": lambda: theorem2_ebit_locc(d or 2),
        "theorem3": lambda: theorem3_transmission(d or 2, seed=args.seed),
        "cfb": cfb_protocol,
        "super-cfb": lambda: super_cfb_entanglement(d or 2),
    }
    tr = runs[args.name]()
    print(f"{tr.name}: {tr.verdict}; {len(tr.steps)} checks, {len(tr.branches)} branches")
    for f in tr.failures():
        print(f"  FAIL {f.label}: residual {f.residual:.3e} (tol {f.tol})")
    for k, v in tr.ledger.items():
        print(f"  {k} {v}")
    _write(tr.to_dict(), args.out)
    return EXIT_OK if tr.passed else EXIT_FAIL


def cmd_paper_report(args):
    only = None
    if args.only:
        only = [p for chunk in args.only for p in chunk.split(",") if p]
    rep = run_report(seed=args.seed, only=only, jobs=args.jobs)
    for c in rep.claims:
        res = "-" if c.residual is None else f"{c.residual:.3e}"
        print(f"{c.status:15s} {c.claim_id:22s} residual {res:>10s}  {c.runtime:7.2f} s  {c.anchor}")
    summary = rep.to_dict()["summary"]
    print(f"{len(rep.claims)} claims: " + ", ".join(f"{v} {k}" for k, v in summary.items()))
    _write(rep.to_dict(timings=args.timings), args.out)
    return rep.exit_code


def build_parser():
    seed_default = argparse.SUPPRESS
    p = argparse.ArgumentParser(prog="zecap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, theta=False, d=False):
        if theta:
            sp.add_argument("--theta", type=float, default=np.pi / 4)
        if d:
            sp.add_argument("--d", type=int, default=None)
        sp.add_argument("--seed", type=int, default=seed_default)
        sp.add_argument("--out", default=None, help="output JSON path, - for stdout")

    sp = sub.add_parser("construct", help="build a catalog channel or subspace")
    sp.add_argument("--name", required=True, choices=CONSTRUCT_NAMES)
    common(sp, theta=True, d=True)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="k-space, extendibility or code check")
    sp.add_argument("check", choices=("k-space", "extendibility", "code"))
    sp.add_argument("--channel")
    sp.add_argument("--subspace")
    sp.add_argument("--code")
    sp.add_argument("--restarts", type=int, default=1000)
    sp.add_argument("--tol", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("protocol", help="simulate a protocol over all branches")
    sp.add_argument("--name", required=True, choices=PROTOCOL_NAMES)
    common(sp, d=True)
    sp.set_defaults(func=cmd_protocol)

    sp = sub.add_parser("paper-report", help="run the full claim ledger")
    sp.add_argument("--only", action="append", help="claim id prefix, repeatable or comma separated")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--timings", action="store_true", help="include runtimes in the JSON")
    common(sp)
    sp.set_defaults(func=cmd_paper_report)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if not hasattr(args, "seed"):
            args.seed = _default_seed()
        if getattr(args, "restarts", 1) < 1 or getattr(args, "jobs", 1) < 1:
            raise UsageError("--restarts and --jobs must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"zecap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"zecap: cannot process input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
