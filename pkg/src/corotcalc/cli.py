"""Command-line surface: spin computation, verification, simulation, benchmarks.

Exit codes: 0 success; 1 a verification row failed; 2 malformed input
(bad JSON, schema violation, non-symmetric D, non-skew W, bad flags);
3 the supplied B is not positive definite; 4 the integrator aborted.

All output is deterministic for a fixed seed and configuration: floats are
printed with 17 significant digits and randomness flows through the seeded
counter-based generator documented in ``corotcalc.sampling``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from . import kinematics as ki
from .matcore import (
    Matrix,
    MatrixValidationError,
    NotSkewError,
    NotSpdError,
    NotSymmetricError,
    SkewMatrix,
    SpdMatrix,
    SymMatrix,
    eigendecompose_symmetric,
    frobenius_norm,
)
from .sampling import make_rng, random_skew, random_spd_ratio, random_symmetric
from .verify import SUITE_NAMES, run_suites

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_NOT_SPD = 3
EXIT_INTEGRATOR_ABORT = 4

DEFAULT_TOL = 1e-10


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


@dataclass
class RunConfig:
    """Resolved run settings; round-trips losslessly through key=value text."""

    seed: int = 42
    dim: int = 3
    tol: float = DEFAULT_TOL
    dt: float = 1e-3
    t_end: float = 1.0
    motion: str = "simple_shear"
    method: str = "both"
    output_path: str = ""

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            lines.append(f"{f.name}={getattr(self, f.name)!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        values = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {line!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
        kwargs = {}
        for f in cls.__dataclass_fields__.values():
            if f.name not in values:
                continue
            raw = values[f.name]
            if f.type in ("int", int):
                kwargs[f.name] = int(raw)
            elif f.type in ("float", float):
                kwargs[f.name] = float(raw)
            else:
                kwargs[f.name] = raw.strip("'\"")
        return cls(**kwargs)


def _env_tol() -> float:
    raw = os.environ.get("COROTCALC_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise SystemExit(f"COROTCALC_TOL is not a number: {raw!r}")


def _resolve(args, key, config: RunConfig | None, default):
    """Precedence: explicit flag > config file > default (env folds into default)."""
    val = getattr(args, key, None)
    if val is not None:
        return val
    if config is not None:
        return getattr(config, key)
    return default


def _load_config(args) -> RunConfig | None:
    path = getattr(args, "config", None)
    if path is None:
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return RunConfig.from_text(fh.read())
    except (OSError, ValueError) as exc:
        print(f"error: cannot read config {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT)


# ---------------------------------------------------------------------------
# spin


def _parse_matrix_field(payload: dict, key: str) -> Matrix:
    if key not in payload:
        raise MatrixValidationError(f"missing field {key!r}")
    return Matrix.from_json_dict(payload[key])


def cmd_spin(args) -> int:
    config = _load_config(args)
    tol = _resolve(args, "tol", config, _env_tol())
    method = _resolve(args, "method", config, "both")
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot parse input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    try:
        b_raw = _parse_matrix_field(payload, "B")
        d_raw = _parse_matrix_field(payload, "D")
        w_raw = _parse_matrix_field(payload, "W")
    except MatrixValidationError as exc:
        print(f"error: bad matrix payload: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    try:
        b = SpdMatrix(b_raw.array, sym_tol=tol)
    except NotSpdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_SPD
    except NotSymmetricError as exc:
        print(f"error: B is not symmetric: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        d = SymMatrix(d_raw.array, sym_tol=tol)
        w = SkewMatrix(w_raw.array, sym_tol=tol)
    except (NotSymmetricError, NotSkewError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if not (b.dim == d.dim == w.dim):
        print("error: B, D, W must share one dimension", file=sys.stderr)
        return EXIT_BAD_INPUT

    dec = b.decomposition
    out: dict = {}
    if method == "spectral":
        omega = ki.log_spin_spectral(b.array, d.array, w.array, decomposition=dec)
    elif method == "commutator":
        omega = ki.log_spin_commutator(b.array, d.array, w.array, decomposition=dec)
    else:
        omega_sp = ki.log_spin_spectral(b.array, d.array, w.array, decomposition=dec)
        omega = ki.log_spin_commutator(b.array, d.array, w.array, decomposition=dec)
        out["method_discrepancy"] = float(frobenius_norm(omega_sp - omega))
    out["omega_log"] = Matrix(omega).to_json_dict()
    print(json.dumps(out, sort_keys=True, indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    config = _load_config(args)
    seed = int(_resolve(args, "seed", config, 42))
    trials = args.trials if args.trials is not None else 200
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    results = run_suites(names, seed=seed, trials=trials)
    failed = []
    width = max(len(r.label) for rows in results.values() for r in rows) + 2
    for name, rows in results.items():
        print(f"suite {name}  (seed={seed}, trials={trials})")
        for r in rows:
            status = "ok" if r.passed else "FAIL"
            print(f"  {r.label:<{width}} max residual {_fmt(r.residual):>24}  "
                  f"threshold {r.threshold:.1e}  {status}")
            if not r.passed:
                failed.append((name, r))
    if failed:
        for name, r in failed:
            print(f"FAILED: [{name}] {r.label}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    print("all identities verified")
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate


def _build_field(args, config: RunConfig | None, seed: int, dim: int):
    motion = _resolve(args, "motion", config, "simple_shear")
    if motion == "simple_shear":
        return ki.simple_shear(args.kappa, dim=dim)
    if motion == "pure_stretch":
        rates = tuple(float(r) for r in args.rates.split(","))
        return ki.pure_stretch(rates)
    if motion == "rigid_rotation":
        return ki.rigid_rotation(args.rate, dim=dim)
    if motion == "polynomial":
        return ki.polynomial_motion(seed, dim=dim)
    print(f"error: unknown motion {motion!r}", file=sys.stderr)
    raise SystemExit(EXIT_BAD_INPUT)


def write_trajectory_csv(samples, path: str) -> None:
    """Trajectory table: t, res_eq5, res_eq40, spin_agreement, det_F per sample."""
    lines = ["t,res_eq5,res_eq40,spin_agreement,det_F"]
    for s in samples:
        lines.append(
            ",".join(
                (
                    _fmt(s.t),
                    _fmt(s.rate_residual),
                    _fmt(s.evolution_residual),
                    _fmt(s.spin_agreement),
                    _fmt(s.det_f),
                )
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_simulate(args) -> int:
    config = _load_config(args)
    seed = int(_resolve(args, "seed", config, 42))
    dim = int(_resolve(args, "dim", config, 3))
    dt = float(_resolve(args, "dt", config, 1e-3))
    t_end = float(_resolve(args, "t_end", config, 1.0))
    if args.out is not None:
        out_path = args.out
    elif config is not None and config.output_path:
        out_path = config.output_path
    else:
        out_path = "traj.csv"
    field = _build_field(args, config, seed, dim)
    try:
        samples = ki.integrate_motion(
            field, np.eye(field.dim), t_end, dt, record_every=args.record_every
        )
    except ki.IntegrationAbort as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRATOR_ABORT
    write_trajectory_csv(samples, out_path)
    print(f"motion {field.descriptor}: {len(samples)} samples -> {out_path}")
    print(f"max res_eq5       = {_fmt(max(s.rate_residual for s in samples))}")
    print(f"max res_eq40      = {_fmt(max(s.evolution_residual for s in samples))}")
    print(f"max spin mismatch = {_fmt(max(s.spin_agreement for s in samples))}")
    print(f"min det F         = {_fmt(min(s.det_f for s in samples))}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench


def cmd_bench(args) -> int:
    config = _load_config(args)
    seed = int(_resolve(args, "seed", config, 7))
    dims = [int(d) for d in args.dims.split(",")]
    if any(d < 1 or d > 16 for d in dims):
        print("error: dimensions must be in [1, 16]", file=sys.stderr)
        return EXIT_BAD_INPUT
    trials = args.trials
    print(f"{'dim':>4} {'spectral us':>14} {'commutator us':>14} {'max discrepancy':>18}")
    for dim in dims:
        rng = make_rng(seed + dim)
        cases = []
        for _ in range(trials):
            b = random_spd_ratio(rng, dim)
            d = random_symmetric(rng, dim)
            w = random_skew(rng, dim)
            cases.append((b, d, w, eigendecompose_symmetric(b)))
        t0 = time.perf_counter()
        spectral = [
            ki.log_spin_spectral(b, d, w, decomposition=dec) for b, d, w, dec in cases
        ]
        t_spectral = time.perf_counter() - t0
        t0 = time.perf_counter()
        commutator = [
            ki.log_spin_commutator(b, d, w, decomposition=dec) for b, d, w, dec in cases
        ]
        t_commutator = time.perf_counter() - t0
        disc = max(
            frobenius_norm(a - b_) for a, b_ in zip(spectral, commutator)
        )
        print(
            f"{dim:>4} {1e6 * t_spectral / trials:>14.1f} "
            f"{1e6 * t_commutator / trials:>14.1f} {_fmt(disc):>18}"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corotcalc",
        description="Spin tensors and commutator-kernel identities for symmetric matrices",
    )
    parser.add_argument("--version", action="version", version=f"corotcalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_spin = sub.add_parser("spin", help="compute the log-rate spin from B, D, W")
    p_spin.add_argument("--input", required=True, help="JSON file with B, D, W matrix objects")
    p_spin.add_argument("--method", choices=("spectral", "commutator", "both"), default=None)
    p_spin.add_argument("--tol", type=float, default=None, help="validation tolerance")
    p_spin.add_argument("--config", default=None, help="key=value config file")
    p_spin.set_defaults(func=cmd_spin)

    p_verify = sub.add_parser("verify", help="run identity-verification suites")
    p_verify.add_argument("--suite", choices=SUITE_NAMES + ("all",), default="all")
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--trials", type=int, default=None)
    p_verify.add_argument("--config", default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_sim = sub.add_parser("simulate", help="integrate a motion and write the residual table")
    p_sim.add_argument(
        "--motion",
        choices=("simple_shear", "pure_stretch", "rigid_rotation", "polynomial"),
        default=None,
    )
    p_sim.add_argument("--kappa", type=float, default=1.0, help="shear rate")
    p_sim.add_argument("--rates", default="0.3,-0.3,0", help="stretch rates, comma separated")
    p_sim.add_argument("--rate", type=float, default=1.0, help="rotation rate")
    p_sim.add_argument("--dt", type=float, default=None)
    p_sim.add_argument("--t-end", dest="t_end", type=float, default=None)
    p_sim.add_argument("--record-every", type=int, default=1)
    p_sim.add_argument("--seed", type=int, default=None, help="seed for polynomial motion")
    p_sim.add_argument("--dim", type=int, default=None)
    p_sim.add_argument("--out", default=None, help="output CSV path")
    p_sim.add_argument("--config", default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_bench = sub.add_parser("bench", help="time the two spin assemblies")
    p_bench.add_argument("--dims", default="3,5,8")
    p_bench.add_argument("--trials", type=int, default=1000)
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.add_argument("--config", default=None)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
