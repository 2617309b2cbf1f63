"""Command-line front end: enroll, verify, bench, synth, inspect.

Exit codes are a stable scripting contract: 0 success/genuine, 1 forged,
2 usage or I/O error, 3 internal failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import evaluation
from .classifier import verify
from .enrollment import EnrollmentParams, enroll
from .errors import HsigError, MalformedInput
from .evaluation import ProtocolConfig, SyntheticSpec, generate_synthetic_user, run_protocol
from .model import (
    cell_keys,
    load_profile,
    parse_signature,
    save_profile,
    serialize_signature,
)

EXIT_OK = 0
EXIT_FORGED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

_FORMATS = {".svc": "svc", ".csv": "csv", ".json": "json"}


def _read_signature(path: Path):
    fmt = _FORMATS.get(path.suffix.lower())
    if fmt is None:
        raise MalformedInput(f"unsupported signature extension: {path.name}")
    return parse_signature(path.read_text(), fmt)


def _read_directory(directory: Path):
    files = sorted(p for p in directory.iterdir()
                   if p.suffix.lower() in _FORMATS)
    return [_read_signature(p) for p in files]


def _weight_table(profile) -> str:
    lines = ["signal traj section band weight dmax"]
    for key in cell_keys(profile.P):
        s, a, p, r = key
        lines.append(f"{s:>6} {a:>4} {p:>7} {r:>4} "
                     f"{profile.weights[key]:.6f} {profile.dmax[key]:.6f}")
    return "\n".join(lines)


def cmd_enroll(args) -> int:
    refs_dir = Path(args.refs)
    try:
        refs = _read_directory(refs_dir)
    except (OSError, MalformedInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if len(refs) < 2:
        print(f"error: need at least 2 parseable signatures in {refs_dir}",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        params = EnrollmentParams(delta=args.delta, mu_min=args.mu_min,
                                  cth=args.cth, P=args.P)
        profile = enroll(refs, params, user_id=args.user)
        Path(args.out).write_bytes(save_profile(profile))
    except (HsigError, ValueError) as exc:
        print(f"enrollment failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    print(_weight_table(profile))
    print(f"profile written to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        profile = load_profile(Path(args.profile).read_bytes())
        sig = _read_signature(Path(args.sig))
    except (OSError, HsigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    mode = "shape_only" if args.mode == "shape-only" else "full"
    result = verify(sig, profile, mode=mode)
    print(f"similarity: {result.similarity:.6f}")
    print(f"decision: {'genuine' if result.genuine else 'forged'} "
          f"(threshold {result.threshold_used:.6f})")
    print("signal traj section band dtst")
    for key in cell_keys(profile.P):
        s, a, p, r = key
        print(f"{s:>6} {a:>4} {p:>7} {r:>4} {result.dtst[key]:.6f}")
    return EXIT_OK if result.genuine else EXIT_FORGED


def _load_dataset(root: Path) -> dict:
    dataset = {}
    for user_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        genuine_dir = user_dir / "genuine"
        forgery_dir = user_dir / "forgery"
        if not genuine_dir.is_dir() or not forgery_dir.is_dir():
            raise MalformedInput(
                f"{user_dir.name}: expected genuine/ and forgery/ subdirectories")
        dataset[user_dir.name] = (_read_directory(genuine_dir),
                                  _read_directory(forgery_dir))
    if not dataset:
        raise MalformedInput(f"no user directories under {root}")
    return dataset


def cmd_bench(args) -> int:
    try:
        dataset = _load_dataset(Path(args.data))
    except (OSError, MalformedInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cfg = ProtocolConfig(
        repetitions=args.reps,
        rng_seed=args.seed,
        P_values=tuple(args.P_list),
        delta=args.delta,
        cth=args.cth,
    )
    try:
        report = run_protocol(dataset, cfg, cth_sweep=args.cth_sweep)
    except HsigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(report.summary_table())
    if args.cth_sweep:
        for P, (eer, cth) in sorted(report.eer.items()):
            print(f"P={P} EER={100 * eer:.2f}% at cth={cth:.2f}")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.txt").write_text(report.summary_table() + "\n")
    (out_dir / "report.kv").write_text(report.key_values() + "\n")
    (out_dir / "weights.tsv").write_text(report.weight_rows() + "\n")
    print(f"report files written to {out_dir}")
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.users < 1:
        print("error: --users must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    out_root = Path(args.out)
    spec = SyntheticSpec()
    try:
        for u in range(args.users):
            genuine, forgeries = generate_synthetic_user(args.seed + u, spec)
            for kind, sigs in (("genuine", genuine), ("forgery", forgeries)):
                d = out_root / f"user{u:03d}" / kind
                d.mkdir(parents=True, exist_ok=True)
                for n, sig in enumerate(sigs):
                    (d / f"{kind}{n:03d}.csv").write_text(
                        serialize_signature(sig, "csv"))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {args.users} synthetic users to {out_root}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    try:
        profile = load_profile(Path(args.profile).read_bytes())
    except (OSError, HsigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"user_id: {profile.user_id}")
    print(f"K: {profile.K}  P: {profile.P}  delta: {profile.delta}  "
          f"mu_min: {profile.mu_min}  cth: {profile.cth}")
    print(_weight_table(profile))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsig",
        description="Dynamic handwritten-signature verification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enroll", help="enroll a user from reference signatures")
    p.add_argument("--refs", required=True, help="directory of reference signatures")
    p.add_argument("--out", required=True, help="output profile path")
    p.add_argument("--user", default="user")
    p.add_argument("--P", type=int, default=2)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--mu-min", dest="mu_min", type=float, default=0.01)
    p.add_argument("--cth", type=float, default=0.5)
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("verify", help="verify a signature against a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--sig", required=True)
    p.add_argument("--mode", choices=["full", "shape-only"], default="full")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run the FAR/FRR evaluation protocol")
    p.add_argument("--data", required=True, help="dataset root directory")
    p.add_argument("--out", default="bench-report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--P-list", dest="P_list", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--cth", type=float, default=0.5)
    p.add_argument("--cth-sweep", dest="cth_sweep", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("inspect", help="print profile metadata")
    p.add_argument("--profile", required=True)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # unexpected failure, not a modeled error path
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
