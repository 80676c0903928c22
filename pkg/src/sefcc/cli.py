"""Command-line front end.

Exit status: 0 success, 1 validation/certification failure, 2 usage or
parse error. Every subcommand that writes output also writes a JSON
manifest from which ``sefcc replay`` reproduces the outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channel import SimConfig, compare_csv, run_simulation
from .enumeration import SearchStrategy, certify_theorems, default_workers
from .fcc import (
    AssignmentParseError,
    BooleanFunction,
    DEFAULT_EVEN_SUBSET,
    DEFAULT_ODD_SUBSET,
    ParityAssignment,
    construct_max_sum,
    extend_to_full,
    has_dmin_2,
    is_valid,
    optimal_fer_assignment,
    parse_assignment,
    spectrum,
)
from .hamming import Word, distance3_graph

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _subset(text: str) -> tuple:
    try:
        items = tuple(int(x) - 1 for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated 1-based indices, got {text!r}")
    return items


def _read_assignment(path: str) -> ParityAssignment:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}")
    try:
        return parse_assignment(text)
    except AssignmentParseError as exc:
        raise UsageError(f"{path}: {exc}")


def _emit(text: str, out: str | None, outputs: list) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    outputs.append(path)


def _summary(pa: ParityAssignment) -> str:
    g = distance3_graph()
    valid = is_valid(pa, g)
    spec = spectrum(extend_to_full(pa))
    return f"valid={str(valid).lower()} sum={spec.sum_distance} dmin={spec.d_min} N2={spec.n(2)}"


def cmd_construct(args, outputs) -> int:
    if args.kind == "max-sum":
        try:
            pa = construct_max_sum(args.odd_subset, args.even_subset, args.swap)
        except ValueError as exc:
            raise UsageError(str(exc))
    else:
        try:
            p = Word.from_str(args.parity)
        except ValueError as exc:
            raise UsageError(str(exc))
        if p.length != 2:
            raise UsageError("--parity must be two bits")
        pa = optimal_fer_assignment(p)
    _emit(pa.to_text(), args.out, outputs)
    print(_summary(pa), file=sys.stderr if args.out is None else sys.stdout)
    return EXIT_OK


def cmd_validate(args, outputs) -> int:
    pa = _read_assignment(args.assignment)
    g = distance3_graph()
    valid = is_valid(pa, g)
    spec = spectrum(extend_to_full(pa))
    lines = [f"valid={str(valid).lower()}"]
    if valid:
        lines.append(f"dmin2_condition={str(has_dmin_2(pa, g)).lower()}")
    lines += [f"dmin={spec.d_min}", f"sum={spec.sum_distance}", f"N2={spec.n(2)}"]
    _emit("\n".join(lines) + "\n" + spec.to_csv(), args.out, outputs)
    return EXIT_OK if valid else EXIT_FAIL


def cmd_spectrum(args, outputs) -> int:
    pa = _read_assignment(args.assignment)
    _emit(spectrum(extend_to_full(pa)).to_csv(), args.out, outputs)
    return EXIT_OK


def cmd_certify(args, outputs) -> int:
    strategy = SearchStrategy(args.strategy.replace("-", "_"), args.workers)
    report = certify_theorems(strategy=strategy, sample_size=args.sample_size, seed=args.seed)
    _emit(report.to_text(), args.out, outputs)
    return EXIT_OK if report.all_passed else EXIT_FAIL


def _snr_points(start: float, stop: float, step: float) -> tuple:
    if step <= 0:
        raise UsageError("--snr-step must be positive")
    if stop < start:
        raise UsageError("--snr-stop must be >= --snr-start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + i * step, 10) for i in range(n))


def cmd_simulate(args, outputs) -> int:
    if args.compare and len(args.codes) != 2:
        raise UsageError("--compare needs exactly two assignment files")
    if len(args.codes) > 1 and not args.compare and args.out is None:
        raise UsageError("several codes without --compare need --out DIR")
    codes = []
    for path in args.codes:
        pa = _read_assignment(path)
        if not is_valid(pa) and not args.allow_invalid:
            print(f"{path}: assignment is not a valid SEFCC (use --allow-invalid)", file=sys.stderr)
            return EXIT_FAIL
        codes.append((Path(path).stem, extend_to_full(pa)))
    try:
        cfg = SimConfig(_snr_points(args.snr_start, args.snr_stop, args.snr_step), args.trials, args.seed, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc))
    f = BooleanFunction.hcmf()
    results = [run_simulation(code, f, cfg, code_id=name) for name, code in codes]
    if args.compare:
        _emit(compare_csv(*results), args.out, outputs)
    elif len(results) == 1:
        _emit(results[0].to_csv(), args.out, outputs)
    else:
        for res in results:
            _emit(res.to_csv(), str(Path(args.out) / f"{res.code_id}.csv"), outputs)
    return EXIT_OK


def _add_out(p):
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--manifest", help="manifest path (default: <out>.manifest.json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sefcc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write a max-sum or optimal-FER assignment file")
    p.add_argument("kind", choices=["max-sum", "optimal-fer"])
    p.add_argument("--odd-subset", type=_subset, default=DEFAULT_ODD_SUBSET,
                   help="4 odd-weight codewords (1-based) given the first parity of their pair; default 3,4,5,6")
    p.add_argument("--even-subset", type=_subset, default=DEFAULT_EVEN_SUBSET,
                   help="4 even-weight codewords (1-based); default 1,2,7,8")
    p.add_argument("--swap", action="store_true", help="give {01,10} to the odd side and {00,11} to the even side")
    p.add_argument("--parity", default="00", help="optimal-fer: parity of the non-codewords")
    _add_out(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("validate", help="check an assignment file")
    p.add_argument("assignment")
    _add_out(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("spectrum", help="distance spectrum as d,count CSV")
    p.add_argument("assignment")
    _add_out(p)
    p.set_defaults(func=cmd_spectrum)

    workers = default_workers()
    p = sub.add_parser("certify", help="run the exhaustive census and certification checks")
    p.add_argument("--strategy", choices=["backtracking", "full-sweep"], default="backtracking")
    p.add_argument("--workers", type=int, default=workers)
    p.add_argument("--sample-size", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("simulate", help="AWGN/BPSK Monte-Carlo BER/FER")
    p.add_argument("codes", nargs="+", metavar="ASSIGNMENT")
    p.add_argument("--compare", action="store_true", help="emit one joined CSV for two codes")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--snr-start", type=float, default=0.0)
    p.add_argument("--snr-stop", type=float, default=9.0)
    p.add_argument("--snr-step", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=workers)
    p.add_argument("--allow-invalid", action="store_true")
    _add_out(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("replay", help="re-run a manifest and check its output hashes")
    p.add_argument("manifest")
    p.set_defaults(func=None)
    return parser


def _input_paths(args) -> list[str]:
    if args.command in ("validate", "spectrum"):
        return [args.assignment]
    if args.command == "simulate":
        return list(args.codes)
    return []


def _write_manifest(args, argv: list[str], outputs: list[Path], status: int) -> None:
    if args.manifest:
        path = Path(args.manifest)
    elif args.out:
        out = Path(args.out)
        path = out / "manifest.json" if out.is_dir() else out.with_name(out.name + ".manifest.json")
    else:
        return
    params = {k: v for k, v in vars(args).items() if k not in ("func", "manifest")}
    params = {k: list(v) if isinstance(v, tuple) else v for k, v in params.items()}
    manifest = {
        "tool": "sefcc",
        "version": __version__,
        "subcommand": args.command,
        "argv": argv,
        "params": params,
        "seed": params.get("seed"),
        "inputs": {p: _sha256(Path(p)) for p in _input_paths(args)},
        "outputs": {str(p): _sha256(p) for p in outputs},
        "exit_status": status,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _strip_manifest_flag(argv: list[str]) -> list[str]:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--manifest":
            skip = True
            continue
        if a.startswith("--manifest="):
            continue
        out.append(a)
    return out


def _replay(path: str) -> int:
    try:
        manifest = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"{path}: cannot read manifest: {exc}")
    for inp, digest in manifest["inputs"].items():
        if _sha256(Path(inp)) != digest:
            print(f"input {inp} changed since the manifest was written", file=sys.stderr)
            return EXIT_FAIL
    status = main(list(manifest["argv"]) + ["--manifest", str(Path(path).with_suffix(".replay.json"))])
    mismatched = [o for o, d in manifest["outputs"].items() if _sha256(Path(o)) != d]
    for o in mismatched:
        print(f"output {o} differs from the manifest", file=sys.stderr)
    if mismatched or status != manifest["exit_status"]:
        return EXIT_FAIL
    print(f"replayed {manifest['subcommand']}: {len(manifest['outputs'])} output(s) identical")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "replay":
            return _replay(args.manifest)
        outputs: list[Path] = []
        status = args.func(args, outputs)
        _write_manifest(args, _strip_manifest_flag(argv), outputs, status)
        return status
    except UsageError as exc:
        print(f"sefcc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
