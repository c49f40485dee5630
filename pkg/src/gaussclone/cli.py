"""Command-line front end: design, solve, synth, verify, certify, simulate,
tradeoff.

Structured documents are JSON (schema-versioned, exact double round-trip);
bulk outputs are CSV.  All randomness flows through an explicit --seed.
Exit codes: 0 success, 2 invalid input or failed precondition, 3 failed
verification or certification (reports are still written).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys

import numpy as np

from . import simulate
from .certificate import (
    build_certificate,
    build_problem,
    random_feasible_cost_scan,
    verify_certificate,
    weights_from_profile,
)
from .circuits import (
    FeedforwardCircuit,
    build_interferometer,
    channel_from_amplifier,
    feedforward_output_state,
    feedforward_params,
    g_opt_matrix,
    noise_gram_matrix,
    scheme_equivalence_check,
)
from .core import cp_min_eigenvalue
from .design import (
    CostWeights,
    InfeasibleDesignError,
    NoiseProfile,
    design_from_weights,
    estimation_tradeoff,
    last_noise_roots,
    residual,
    symmetric_profile,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FAILED = 3


def algebraic_tol() -> float:
    """Default algebraic tolerance, overridable via GAUSSCLONE_TOL."""
    value = os.environ.get("GAUSSCLONE_TOL")
    return float(value) if value else 1e-10


class CliError(Exception):
    """Invalid input or failed precondition; maps to exit code 2."""


def _dump_json(doc: dict, path: str | None):
    text = json.dumps(doc, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


# -- design documents --------------------------------------------------------


def design_document(profile: NoiseProfile, weights: CostWeights | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "N": profile.n_in,
        "M": profile.m_out,
        "noises": list(map(float, profile.noises)),
        "residual": residual(profile),
        "fidelities": list(map(float, profile.fidelities())),
    }
    if weights is not None:
        doc["weights"] = list(map(float, weights.weights))
        if weights.lagrange is not None:
            doc["lambda"] = weights.lagrange
    return doc


def load_design(path: str) -> tuple[NoiseProfile, CostWeights | None]:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise CliError(f"unsupported design schema version {doc.get('schema_version')}")
    profile = NoiseProfile(int(doc["N"]), int(doc["M"]), np.array(doc["noises"], dtype=float))
    if abs(residual(profile) - doc["residual"]) > 1e-9:
        raise CliError("stored residual does not match recomputed value")
    weights = None
    if "weights" in doc:
        weights = CostWeights(np.array(doc["weights"], dtype=float), doc.get("lambda"))
    return profile, weights


def design_hash(doc: dict) -> str:
    canonical = json.dumps(
        {k: doc[k] for k in ("schema_version", "N", "M", "noises")}, sort_keys=True
    )
    return hashlib.sha256(canonical.encode()).hexdigest()


# -- circuit documents -------------------------------------------------------


def circuit_document(profile: NoiseProfile, scheme: str) -> dict:
    base = {
        "schema_version": SCHEMA_VERSION,
        "scheme": scheme,
        "design": {
            "N": profile.n_in,
            "M": profile.m_out,
            "noises": list(map(float, profile.noises)),
        },
        "provenance": {"design_sha256": design_hash(design_document(profile))},
    }
    if scheme == "amplifier":
        circ = build_interferometer(profile)
        base["parameters"] = {
            "t": circ.t,
            "g": circ.g,
            "V": [float(v) for v in circ.V.ravel()],
            "kappa": [float(v) for v in circ.kappa.ravel()],
        }
    elif scheme == "feedforward":
        circ = feedforward_params(profile)
        base["parameters"] = {
            "r_tap": circ.r_tap,
            "gains": list(map(float, circ.gains)),
            "reflectances": list(map(float, circ.reflectances)),
            "phase_convention": simulate.calibrate_phase_convention(profile),
        }
    else:
        raise CliError(f"unknown scheme {scheme!r}")
    return base


def load_circuit(path: str):
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise CliError(f"unsupported circuit schema version {doc.get('schema_version')}")
    d = doc["design"]
    profile = NoiseProfile(int(d["N"]), int(d["M"]), np.array(d["noises"], dtype=float))
    return doc, profile


# -- invariant summaries -----------------------------------------------------


def amplifier_invariants(profile: NoiseProfile, tol: float) -> dict:
    circ = build_interferometer(profile)
    m, n = profile.m_out, profile.n_in
    unitarity = float(np.max(np.abs(circ.V.T @ circ.V - np.eye(m))))
    target = np.eye(m) - np.ones((m, m)) / n + noise_gram_matrix(profile)
    kappa_resid = float(np.max(np.abs(circ.kappa @ circ.kappa.T - target)))
    channel = channel_from_amplifier(circ, profile)
    g_resid = float(np.max(np.abs(channel.G - g_opt_matrix(profile))))
    cp_eig = cp_min_eigenvalue(channel)
    return {
        "unitarity_residual": unitarity,
        "kappa_gram_residual": kappa_resid,
        "g_opt_residual": g_resid,
        "cp_min_eigenvalue": cp_eig,
        "transmittance": circ.t,
        "passed": bool(
            unitarity < 100 * tol
            and kappa_resid < 100 * tol
            and g_resid < 100 * tol
            and cp_eig > -1e-9
            and circ.t <= 1.0
        ),
    }


def feedforward_invariants(profile: NoiseProfile, tol: float) -> dict:
    circ = feedforward_params(profile)
    in_range = bool(
        np.all(circ.reflectances >= 0.0)
        and np.all(circ.reflectances <= 1.0)
        and 0.0 <= circ.r_tap <= 1.0
    )
    gain_resid = float(np.max(np.abs(circ.gains**2 - profile.noises)))
    equiv = scheme_equivalence_check(profile)
    return {
        "reflectances_in_range": in_range,
        "gain_noise_residual": gain_resid,
        "scheme_discrepancy": equiv["discrepancy"],
        "passed": bool(in_range and gain_resid < 100 * tol and equiv["passed"]),
    }


# -- commands ----------------------------------------------------------------


def cmd_design(args) -> int:
    if args.symmetric == (args.weights is not None):
        raise CliError("specify exactly one of --symmetric or --weights")
    if args.symmetric:
        profile = symmetric_profile(args.n_in, args.m_out)
        weights = None
    else:
        values = np.array([float(v) for v in args.weights.split(",")])
        weights = CostWeights(values)
        profile = design_from_weights(weights, args.n_in, args.m_out)
    doc = design_document(profile, weights)
    print(_dump_json(doc, args.out))
    return EXIT_OK


def cmd_solve(args) -> int:
    partial = np.array([float(v) for v in args.noises.split(",")])
    try:
        roots = last_noise_roots(partial, args.n_in, args.m_out)
    except InfeasibleDesignError as exc:
        print(f"infeasible: {exc}")
        return EXIT_INPUT
    print(f"optimal n_M = {roots[0]:.12g}")
    if len(roots) > 1:
        print(f"other root  = {roots[1]:.12g}  (on-surface but suboptimal)")
    return EXIT_OK


def cmd_synth(args) -> int:
    profile, _ = load_design(args.design)
    doc = circuit_document(profile, args.scheme)
    tol = algebraic_tol()
    if args.scheme == "amplifier":
        checks = amplifier_invariants(profile, tol)
    else:
        checks = feedforward_invariants(profile, tol)
    if not checks["passed"]:
        failing = [k for k, v in checks.items() if k != "passed"]
        raise CliError(f"circuit invariants failed: {json.dumps(checks)}; see {failing}")
    print(_dump_json(doc, args.out))
    print(json.dumps({"invariants": checks}, indent=2), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    doc, profile = load_circuit(args.circuit)
    tol = algebraic_tol()
    if doc["scheme"] == "amplifier":
        report = amplifier_invariants(profile, tol)
    else:
        report = feedforward_invariants(profile, tol)
    text = _dump_json({"scheme": doc["scheme"], **report}, args.out)
    print(text)
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_certify(args) -> int:
    profile, weights = load_design(args.design)
    if weights is None or weights.lagrange is None:
        weights = weights_from_profile(profile)
    problem = build_problem(profile, weights)
    cert = build_certificate(problem)
    report = verify_certificate(problem, cert)
    scan = random_feasible_cost_scan(
        problem, cert, args.trials, np.random.default_rng(args.seed)
    )
    full = {"certificate": report, "feasible_scan": scan}
    print(_dump_json(full, args.out))
    return EXIT_OK if report["passed"] and scan["passed"] else EXIT_FAILED


def cmd_simulate(args) -> int:
    doc, profile = load_circuit(args.circuit)
    if doc["scheme"] != "feedforward":
        raise CliError("simulation requires a feedforward circuit document")
    p = doc["parameters"]
    circ = FeedforwardCircuit(
        r_tap=p["r_tap"],
        gains=np.array(p["gains"], dtype=float),
        reflectances=np.array(p["reflectances"], dtype=float),
        phase_convention=p["phase_convention"],
    )
    re, im = (float(v) for v in args.alpha.split(","))
    config = simulate.SimConfig(
        profile=profile,
        alpha=complex(re, im),
        shots=args.shots,
        seed=args.seed,
        shards=args.shards,
    )
    result = simulate.run(config, circuit=circ, samples_path=args.out)
    summary = {
        "shots_used": result.shots_used,
        "clone_means_re": list(map(float, result.clone_means.real)),
        "clone_means_im": list(map(float, result.clone_means.imag)),
        "clone_cov": [float(v) for v in result.clone_cov.ravel()],
        "mean_se": list(map(float, result.mean_se)),
        "cov_se": [float(v) for v in result.cov_se.ravel()],
    }
    print(_dump_json(summary, args.summary_out))
    return EXIT_OK


def cmd_tradeoff(args) -> int:
    points = args.points
    if points < 1:
        raise CliError("need at least one point")
    rows = []
    for n_f in np.geomspace(1e-3, 1e3, points):
        pt = estimation_tradeoff(float(n_f))
        rows.append((pt.n_f, pt.n_g, pt.fidelity_quantum, pt.fidelity_estimate))
    out = args.out
    if out:
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n_F", "n_G", "F", "G"])
            for row in rows:
                writer.writerow([f"{v:.17g}" for v in row])
    for row in rows:
        print(",".join(f"{v:.12g}" for v in row))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussclone",
        description="Optimal N-to-M asymmetric Gaussian cloning of coherent states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="design an optimal noise profile")
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--weights", help="comma-separated positive cost weights")
    p.add_argument("--n-in", type=int, required=True)
    p.add_argument("--m-out", type=int, required=True)
    p.add_argument("--out", help="write design document JSON here")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("solve", help="complete M-1 noises to the optimal surface")
    p.add_argument("--noises", required=True, help="comma-separated first M-1 noises")
    p.add_argument("--n-in", type=int, required=True)
    p.add_argument("--m-out", type=int, required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("synth", help="synthesize a physical circuit")
    p.add_argument("--design", required=True)
    p.add_argument("--scheme", choices=("amplifier", "feedforward"), required=True)
    p.add_argument("--out", help="write circuit document JSON here")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="re-check circuit invariants")
    p.add_argument("--circuit", required=True)
    p.add_argument("--out", help="write verification report JSON here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", help="verify the SDP dual optimality certificate")
    p.add_argument("--design", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write certification report JSON here")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("simulate", help="Monte Carlo of the feedforward scheme")
    p.add_argument("--circuit", required=True)
    p.add_argument("--alpha", default="1,0", help="input amplitude as re,im")
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--out", help="stream per-shot samples to this CSV")
    p.add_argument("--summary-out", help="write the summary JSON here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tradeoff", help="export the partial-estimation tradeoff curve")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--out", help="write the curve to this CSV")
    p.set_defaults(func=cmd_tradeoff)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
