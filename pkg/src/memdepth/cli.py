"""``memdepth`` command line interface.

Exit codes: 0 success, 2 invalid input, 3 analytic/numeric disagreement,
4 reset verification failed.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bloch import bloch_from_density, density_from_bloch, random_bloch
from .classical import depth_histogram, survey
from .depth import (
    DEFAULT_N_MAX,
    DepthClassification,
    NumericDepthResult,
    Verdict,
    classify_analytic,
    classify_numeric,
)
from .errors import MemdepthError
from .gates import bell_state
from .kak import kak_decompose
from .linalg import STRUCTURAL_TOL, UNITARY_TOL, random_density
from .serialization import encode_complex_matrix, encode_real, fingerprint, resolve_input
from .simulator import run_sequence, verify_reset_factorization

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DISAGREE = 3
EXIT_VERIFY_FAILED = 4


def parse_bloch_list(text: str | None) -> list[np.ndarray]:
    """``"x,y,z;x,y,z"`` -> list of Bloch vectors (empty string -> [])."""
    if text is None or not text.strip():
        return []
    out = []
    for chunk in text.split(";"):
        try:
            vec = np.array([float(v) for v in chunk.split(",")])
        except ValueError as exc:
            raise MemdepthError(f"bad Bloch vector {chunk!r}") from exc
        if vec.shape != (3,):
            raise MemdepthError(f"Bloch vector {chunk!r} needs three components")
        density_from_bloch(vec)  # validates the norm
        out.append(vec)
    return out


def _one_bloch(text: str | None) -> np.ndarray | None:
    vecs = parse_bloch_list(text)
    if len(vecs) > 1:
        raise MemdepthError("expected a single Bloch vector")
    return vecs[0] if vecs else None


# payload builders; pure functions of their arguments


def decompose_payload(u) -> dict:
    d = kak_decompose(u)
    return {
        "angles": encode_real(d.angles),
        "angles_over_pi": encode_real(d.angles / np.pi),
        "global_phase": float(d.global_phase),
        "locals": {name: encode_complex_matrix(getattr(d, name)) for name in ("v1", "w1", "v2", "w2")},
        "recomposition_residual": d.residual(u),
    }


def analytic_payload(c: DepthClassification) -> dict:
    cert = c.certificate
    out = {
        "verdict": "infinite" if c.verdict is Verdict.INFINITE else str(c.verdict.value),
        "status": "proved infinite (analytic)" if c.verdict is Verdict.INFINITE else f"depth {c.verdict.value}",
        "angles": encode_real(cert.angles),
        "cosines": encode_real(cert.cosines),
        "conditions": cert.conditions,
        "near_threshold": cert.near_threshold,
    }
    if cert.s_matrix is not None:
        out["distinguished_axis"] = "xyz"[cert.distinguished_axis]
        out["s_matrix"] = encode_real(cert.s_matrix)
        out["s_constraint_residual"] = cert.s_constraint_residual
    if cert.witness_inputs is not None:
        out["witness_inputs"] = cert.witness_inputs
        out["witness_relevant_norm"] = cert.witness_norm
    return out


def numeric_payload(r: NumericDepthResult) -> dict:
    return {
        "status": r.status,
        "depth": r.depth,
        "n_max": r.n_max,
        "residuals": [float(x) for x in r.residuals],
        "note": f"no finite depth <= {r.n_max} found (numeric)" if r.exceeds_bound else "smallest passing length",
    }


def classify_payload(u, mode: str, n_max: int, tol: float) -> dict:
    out: dict = {"mode": mode}
    analytic = classify_analytic(u, tol, n_max) if mode in ("analytic", "both") else None
    numeric = classify_numeric(u, n_max, tol) if mode in ("numeric", "both") else None
    if analytic is not None:
        out["analytic"] = analytic_payload(analytic)
    if numeric is not None:
        out["numeric"] = numeric_payload(numeric)
    if analytic is not None and numeric is not None:
        if analytic.verdict is Verdict.INFINITE:
            out["agree"] = numeric.exceeds_bound
        else:
            out["agree"] = numeric.depth == analytic.depth
    return out


def _alternative_memory(m: np.ndarray) -> np.ndarray:
    return -m if np.linalg.norm(m) > 0.1 else np.array([0.0, 0.0, 1.0])


def simulate_payload(u, memory: np.ndarray, inputs: list[np.ndarray]) -> dict:
    rhos = [density_from_bloch(r) for r in inputs]
    traj = run_sequence(u, density_from_bloch(memory), rhos)
    alt_memory = _alternative_memory(memory)
    alt = run_sequence(u, density_from_bloch(alt_memory), rhos)
    diffs = [float(np.linalg.norm(a - b)) for a, b in zip(traj.memory_blochs, alt.memory_blochs)]
    return {
        "initial_memory": encode_real(memory),
        "inputs": [encode_real(r) for r in inputs],
        "memory_blochs": [encode_real(m) for m in traj.memory_blochs],
        "channels": [{"matrix": encode_real(c.matrix), "vector": encode_real(c.vector)} for c in traj.per_use_channels],
        "outputs": [encode_real(bloch_from_density(o)) for o in traj.outputs],
        "resimulation": {
            "alternative_initial_memory": encode_real(alt_memory),
            "memory_difference": diffs,
        },
    }


def verify_payload(u, reset1, reset2, omega_kind: str, memory, tol: float, rng) -> tuple[dict, bool]:
    if omega_kind == "bell":
        omega = bell_state()
    elif omega_kind == "product":
        omega = np.kron(density_from_bloch(random_bloch(rng)), density_from_bloch(random_bloch(rng)))
    elif omega_kind == "random":
        omega = random_density(4, rng)
    else:
        raise MemdepthError(f"unknown omega kind {omega_kind!r}")
    report = verify_reset_factorization(
        u,
        [density_from_bloch(r) for r in reset1],
        [density_from_bloch(r) for r in reset2],
        omega,
        density_from_bloch(memory),
        tol,
    )
    payload = {
        "reset1": [encode_real(r) for r in reset1],
        "reset2": [encode_real(r) for r in reset2],
        "memory": encode_real(memory),
        "omega12": omega_kind,
        "factorization_residual": report.factorization_residual,
        "memory_independence_residual": report.memory_independence_residual,
        "omega_offdiag_residual": report.omega_offdiag_residual,
        "tolerance": report.tolerance,
        "passed": report.passed,
        "note": "reset blocks are product states; correlated resets are untested",
    }
    return payload, report.passed


def survey_payload(n_max: int) -> dict:
    entries = survey(n_max)
    return {
        "n_max": n_max,
        "rows": [{"mapping": list(e.permutation.mapping), "depth": e.label} for e in entries],
        "histogram": depth_histogram(entries),
    }


# text rendering


def _fmt_vec(v) -> str:
    return "(" + ", ".join(f"{x:+.6f}" for x in v) + ")"


def _render(command: str, payload: dict) -> str:
    lines = [f"memdepth {command}"]
    if command == "decompose":
        lines.append(f"  angles/pi   {_fmt_vec(payload['angles_over_pi'])}")
        lines.append(f"  phase       {payload['global_phase']:+.6f}")
        lines.append(f"  residual    {payload['recomposition_residual']:.3e}")
    elif command == "classify":
        if "analytic" in payload:
            a = payload["analytic"]
            lines.append(f"  analytic    {a['status']}  angles {_fmt_vec(a['angles'])}")
        if "numeric" in payload:
            n = payload["numeric"]
            lines.append(f"  numeric     {n['status']}  residuals " + " ".join(f"{r:.2e}" for r in n["residuals"]))
        if "agree" in payload:
            lines.append(f"  agree       {payload['agree']}")
    elif command == "simulate":
        lines.append(f"  {'use':>4}  {'input':<33}  {'output':<33}  memory after")
        for j, (r, o, m) in enumerate(zip(payload["inputs"], payload["outputs"], payload["memory_blochs"][1:]), 1):
            lines.append(f"  {j:>4}  {_fmt_vec(r):<33}  {_fmt_vec(o):<33}  {_fmt_vec(m)}")
        lines.append(f"  initial memory {_fmt_vec(payload['initial_memory'])}")
        diffs = payload["resimulation"]["memory_difference"]
        lines.append("  resimulation memory differences: " + " ".join(f"{d:.1e}" for d in diffs))
    elif command == "verify-reset":
        for key in ("factorization_residual", "memory_independence_residual", "omega_offdiag_residual"):
            lines.append(f"  {key:<30} {payload[key]:.3e}")
        lines.append(f"  passed ({payload['tolerance']:g})  {payload['passed']}")
    elif command == "classical-survey":
        for row in payload["rows"]:
            lines.append(f"  {tuple(row['mapping'])}  {row['depth']}")
        lines.append("  histogram " + ", ".join(f"{k}: {v}" for k, v in payload["histogram"].items()))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=STRUCTURAL_TOL)

    with_input = argparse.ArgumentParser(add_help=False)
    with_input.add_argument("--input", required=True, help="preset name (swap, cnot, identity, u_alpha_z[=a]) or JSON file")

    parser = argparse.ArgumentParser(prog="memdepth", description="Memory depth of qubit memory channels.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("decompose", parents=[common, with_input], help="KAK decomposition")

    p = sub.add_parser("classify", parents=[common, with_input], help="classify the memory depth")
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    p.add_argument("--mode", choices=("analytic", "numeric", "both"), default="both")

    p = sub.add_parser("simulate", parents=[common, with_input], help="simulate sequential uses")
    p.add_argument("--memory", default="0,0,0", help="initial memory Bloch vector x,y,z")
    p.add_argument("--inputs", help="input Bloch vectors 'x,y,z;x,y,z;...'")
    p.add_argument("--count", type=int, default=0, help="number of random inputs (uses --seed)")

    p = sub.add_parser("verify-reset", parents=[common, with_input], help="check reset-sequence factorization")
    p.add_argument("--reset-length", type=int, default=2)
    p.add_argument("--reset1", help="first reset block 'x,y,z;...' (random if omitted)")
    p.add_argument("--reset2", help="second reset block (random if omitted)")
    p.add_argument("--omega", choices=("bell", "product", "random"), default="bell")
    p.add_argument("--memory", help="initial memory Bloch vector (random if omitted)")

    p = sub.add_parser("classical-survey", parents=[common], help="classify all 24 bit permutations")
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    return parser


def _echo(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "json"}


def run(args: argparse.Namespace) -> tuple[dict, int]:
    """Execute a parsed command; returns the report document and exit code."""
    rng = np.random.default_rng(args.seed)
    u = resolve_input(args.input) if hasattr(args, "input") else None
    code = EXIT_OK
    if getattr(args, "n_max", 1) < 1:
        raise MemdepthError("--n-max must be >= 1")

    if args.command == "decompose":
        payload = decompose_payload(u)
    elif args.command == "classify":
        payload = classify_payload(u, args.mode, args.n_max, args.tol)
        if payload.get("agree") is False:
            code = EXIT_DISAGREE
    elif args.command == "simulate":
        memory = _one_bloch(args.memory)
        memory = np.zeros(3) if memory is None else memory
        inputs = parse_bloch_list(args.inputs)
        if args.count < 0:
            raise MemdepthError("--count must be non-negative")
        inputs += [random_bloch(rng) for _ in range(args.count)]
        payload = simulate_payload(u, memory, inputs)
    elif args.command == "verify-reset":
        n = args.reset_length
        if n < 0:
            raise MemdepthError("--reset-length must be non-negative")
        reset1 = parse_bloch_list(args.reset1) or [random_bloch(rng) for _ in range(n)]
        reset2 = parse_bloch_list(args.reset2) or [random_bloch(rng) for _ in range(n)]
        memory = _one_bloch(args.memory)
        memory = random_bloch(rng) if memory is None else memory
        payload, passed = verify_payload(u, reset1, reset2, args.omega, memory, args.tol, rng)
        code = EXIT_OK if passed else EXIT_VERIFY_FAILED
    elif args.command == "classical-survey":
        payload = survey_payload(args.n_max)
    else:  # pragma: no cover - argparse enforces the choices
        raise MemdepthError(f"unknown command {args.command}")

    doc = {
        "command": args.command,
        "arguments": _echo(args),
        "unitary_fingerprint": fingerprint(u) if u is not None else None,
        "result": payload,
        "version": __version__,
        "tolerances": {"structural": args.tol, "unitarity": UNITARY_TOL},
    }
    return doc, code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = run(args)
    except MemdepthError as exc:
        print(f"memdepth: error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.json == "-":
        sys.stdout.write(text + "\n")
    else:
        print(_render(args.command, doc["result"]))
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
