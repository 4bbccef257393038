"""Command-line front end.

Subcommands:

    diagnose   run the invertibility ladder on a directory of block files
    invert     compute a structured inverse and write it out
    generate   build a seeded random instance from a JSON spec
    verify     recompute every identity on an instance and report residuals

Exit codes: 0 success (for diagnose: invertible), 1 singular (diagnose) or a
failed identity (verify), 2 undetermined, 64 usage error, 65 data error.
Reports are emitted as text or canonical JSON; both carry the same facts and
identical inputs produce byte-identical JSON.
"""

import argparse
import sys as _sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import assemble
from .errors import GenerationError, PreconditionError
from .generators import GeneratorSpec, gen_instance
from .inverses import dense_inverse_blocks, inverse_via_factorization, \
    three_block_inverse, verify_identities
from .invertibility import Verdict, diagnose
from .mmio import canonical_json, load_block_system, save_block_system, \
    save_inverse_blocks, write_json
from .tolerances import DEFAULT_TOL

EXIT_INVERTIBLE = 0
EXIT_SINGULAR = 1
EXIT_UNDETERMINED = 2
EXIT_USAGE = 64
EXIT_DATA = 65


@dataclass
class RunConfig:
    """Parsed invocation: subcommand plus every option it may consult."""

    command: str
    input_dir: str | None = None
    out_dir: str | None = None
    spec_path: str | None = None
    tol_rank: float | None = None
    tol_residual: float | None = None
    alpha: float | None = None
    seed: int | None = None
    fmt: str = "text"
    allow_dense: bool = False


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(_sys.stderr)
        _sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dsaddle",
                     description="invertibility analysis for double saddle-point systems")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--tol-rank", type=float, default=None,
                       help="relative rank tolerance (default 1e-10)")
        p.add_argument("--tol-residual", type=float, default=None,
                       help="relative residual tolerance (default 1e-8)")
        p.add_argument("--format", dest="fmt", choices=("text", "json"),
                       default="text", help="report format")

    p = sub.add_parser("diagnose", help="decide invertibility of a block system")
    p.add_argument("input_dir", help="directory holding A.mtx, B.mtx, C.mtx [D.mtx E.mtx]")
    add_common(p)

    p = sub.add_parser("invert", help="compute a structured inverse")
    p.add_argument("input_dir")
    p.add_argument("--out", dest="out_dir", required=True, help="output directory")
    p.add_argument("--allow-dense", action="store_true",
                   help="fall back to dense inversion when no formula applies")
    add_common(p)

    p = sub.add_parser("generate", help="generate a seeded random instance")
    p.add_argument("--spec", dest="spec_path", required=True,
                   help="JSON file with generator targets")
    p.add_argument("--out", dest="out_dir", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the spec seed")
    add_common(p)

    p = sub.add_parser("verify", help="recompute identities and report residuals")
    p.add_argument("input_dir")
    p.add_argument("--alpha", type=float, default=None,
                   help="congruence scaling (default: interval midpoint)")
    add_common(p)
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_dir=getattr(args, "input_dir", None),
        out_dir=getattr(args, "out_dir", None),
        spec_path=getattr(args, "spec_path", None),
        tol_rank=getattr(args, "tol_rank", None),
        tol_residual=getattr(args, "tol_residual", None),
        alpha=getattr(args, "alpha", None),
        seed=getattr(args, "seed", None),
        fmt=getattr(args, "fmt", "text"),
        allow_dense=getattr(args, "allow_dense", False),
    )


def _tolerances(config: RunConfig):
    tol = DEFAULT_TOL
    if config.tol_rank is not None:
        tol = tol.replace(rank_rtol=config.tol_rank)
    if config.tol_residual is not None:
        tol = tol.replace(residual_rtol=config.tol_residual)
    return tol


def _emit(config: RunConfig, payload: dict, text_lines) -> None:
    if config.fmt == "json":
        _sys.stdout.write(canonical_json(payload))
    else:
        _sys.stdout.write("\n".join(text_lines) + "\n")


def _diagnosis_text(result) -> list:
    lines = [f"verdict: {result.verdict.value}"]
    if result.rule:
        lines.append(f"rule: {result.rule}")
    for entry in result.report.to_dict()["conditions"]:
        lines.append(f"condition {entry['id']}: {entry['status']}")
    for name, tag in result.report.to_dict()["definiteness"].items():
        lines.append(f"definiteness {name}: {tag}")
    for name, rank in result.report.to_dict()["ranks"].items():
        lines.append(f"rank {name}: {rank}")
    if result.witness is not None:
        lines.append("witness: " + " ".join(f"{x:.17g}" for x in result.witness))
    return lines


def _cmd_diagnose(config: RunConfig) -> int:
    tol = _tolerances(config)
    system = load_block_system(config.input_dir, tol)
    result = diagnose(system, tol)
    payload = {"schema": "dsaddle.diagnosis/1"}
    payload.update(result.to_dict())
    _emit(config, payload, _diagnosis_text(result))
    return {Verdict.INVERTIBLE: EXIT_INVERTIBLE,
            Verdict.SINGULAR: EXIT_SINGULAR,
            Verdict.UNDETERMINED: EXIT_UNDETERMINED}[result.verdict]


def _cmd_invert(config: RunConfig) -> int:
    tol = _tolerances(config)
    system = load_block_system(config.input_dir, tol)
    constructor = None
    inv = None
    for name, fn in (("three_block", three_block_inverse),
                     ("factorization", inverse_via_factorization)):
        try:
            inv = fn(system, tol)
            constructor = name
            break
        except PreconditionError:
            continue
    if inv is None:
        if not config.allow_dense:
            _sys.stderr.write(
                "no structured constructor applies to this system; "
                "rerun with --allow-dense for a dense fallback\n")
            return EXIT_DATA
        _sys.stderr.write("warning: falling back to dense inversion\n")
        inv = dense_inverse_blocks(system)
        constructor = "dense"

    misfit = assemble(system).matrix @ inv.full - np.eye(system.ell)
    residual = np.linalg.norm(misfit, 2)
    max_entry = float(np.max(np.abs(misfit)))
    manifest = {
        "schema": "dsaddle.inverse-manifest/1",
        "constructor": constructor,
        "dims": list(system.dims),
        "spectral_residual": float(residual),
        "max_entry_residual": max_entry,
    }
    save_inverse_blocks(config.out_dir, inv, manifest)
    _emit(config, manifest, [
        f"constructor: {constructor}",
        f"spectral residual of K X - I: {residual:.3e}",
        f"written to: {config.out_dir}",
    ])
    return 0


def _cmd_generate(config: RunConfig) -> int:
    import json

    spec_data = json.loads(Path(config.spec_path).read_text(encoding="utf-8"))
    if config.seed is not None:
        spec_data["seed"] = config.seed
    spec = GeneratorSpec.from_dict(spec_data)
    system, certificate = gen_instance(spec, _tolerances(config))
    out = Path(config.out_dir)
    save_block_system(out, system)
    payload = {"schema": "dsaddle.certificate/1"}
    payload.update(certificate.to_dict())
    write_json(out / "certificate.json", payload)
    _emit(config, payload,
          [f"instance written to: {config.out_dir}"]
          + [f"{k}: {v}" for k, v in sorted(certificate.to_dict().items())
             if k != "definiteness"])
    return 0


def _cmd_verify(config: RunConfig) -> int:
    tol = _tolerances(config)
    system = load_block_system(config.input_dir, tol)
    entries = verify_identities(system, tol, alpha=config.alpha)
    failed = [e for e in entries if e["status"] == "failed"]
    computed = [e for e in entries if e["status"] != "skipped"]
    payload = {"schema": "dsaddle.verify/1", "identities": entries,
               "all_passed": not failed and bool(computed)}
    lines = []
    for entry in entries:
        if entry["status"] == "skipped":
            lines.append(f"{entry['id']}: skipped ({entry['reason']})")
        elif "residual" in entry:
            lines.append(f"{entry['id']}: {entry['status']} "
                         f"(residual {entry['residual']:.3e})")
        else:
            lines.append(f"{entry['id']}: {entry['status']}")
    _emit(config, payload, lines)
    if failed:
        return 1
    return 0 if computed else EXIT_UNDETERMINED


def run(config: RunConfig) -> int:
    """Execute one parsed invocation and return its exit code."""
    handlers = {
        "diagnose": _cmd_diagnose,
        "invert": _cmd_invert,
        "generate": _cmd_generate,
        "verify": _cmd_verify,
    }
    try:
        return handlers[config.command](config)
    except (FileNotFoundError, ValueError, GenerationError) as exc:
        _sys.stderr.write(f"dsaddle {config.command}: {exc}\n")
        return EXIT_DATA


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return run(config_from_args(args))


if __name__ == "__main__":
    raise SystemExit(main())
