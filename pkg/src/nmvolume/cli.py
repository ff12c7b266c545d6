"""Command-line front end.

Every command writes CSV (to ``--out`` or stdout).  Summary lines go to
stdout when ``--out`` is given and to stderr otherwise, so piped CSV stays
clean.  Exit status: 0 success, 1 usage error, 2 numerical/domain error.

Model files (``--model``) are JSON objects, e.g.::

    {"model": "lorentzian", "gamma0": 10, "lambda": 1, "delta": 0}
    {"model": "dephasing", "nu": {"kind": "exponential", "gamma": 1.0}}
    {"model": "dephasing", "nu": {"kind": "damped_oscillation", "gamma": 0.1, "omega": 1.0}}
    {"model": "dephasing", "nu": {"kind": "sampled", "t": [...], "real": [...], "imag": [...]}}
    {"model": "lindblad", "hamiltonian": [[0, 0], [0, 0]],
     "jump_operators": [[[0, 0], [1, 0]]], "rates": [[1.0]]}
    {"model": "attenuation", "gamma": 1.0, "sigma_inf": [[0.5, 0], [0, 0.5]]}
    {"model": "gaussian_series", "channels": [{"t": 0, "X": [...], "Y": [...]}, ...]}

Complex matrices may be given as nested lists or as ``{"real": ..., "imag": ...}``.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import gaussian_cv as gcv
from .affine_map import volume_factor
from .generator_basis import build_basis
from .model_channels import (
    DephasingModel,
    LindbladModel,
    LorentzianDecayModel,
    dephasing_map,
    dephasing_trajectory,
    lindblad_propagate,
    lorentzian_map,
    lorentzian_trajectory,
)
from .tomography import estimate_volume, make_plan, simulate_record
from .volume_measure import VolumeTrajectory, measure_nv

EXIT_USAGE = 1
EXIT_DOMAIN = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# model handling
# ---------------------------------------------------------------------------


def _complex_matrix(obj) -> np.ndarray:
    if isinstance(obj, dict):
        return np.asarray(obj["real"], dtype=float) + 1j * np.asarray(obj.get("imag", 0.0), dtype=float)
    return np.asarray(obj, dtype=complex)


def _load_model_file(path: str) -> dict:
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read model file {path!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"model file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict) or "model" not in spec:
        raise UsageError(f"model file {path!r} must be a JSON object with a 'model' key")
    return spec


def _lorentzian_from_args(args) -> LorentzianDecayModel:
    if not args.gamma0_over_lambda > 0:
        raise ValueError(f"--gamma0-over-lambda must be > 0, got {args.gamma0_over_lambda}")
    if not np.isfinite(args.delta_over_lambda):
        raise ValueError(f"--delta-over-lambda must be finite, got {args.delta_over_lambda}")
    return LorentzianDecayModel(args.gamma0_over_lambda, 1.0, args.delta_over_lambda)


def _dephasing_from_spec(spec: dict) -> DephasingModel:
    nu = spec.get("nu")
    if not isinstance(nu, dict) or "kind" not in nu:
        raise UsageError("dephasing model needs a 'nu' object with a 'kind'")
    kind = nu["kind"]
    if kind == "exponential":
        return DephasingModel.exponential(float(nu["gamma"]))
    if kind == "damped_oscillation":
        return DephasingModel.damped_oscillation(float(nu["gamma"]), float(nu["omega"]))
    if kind == "sampled":
        values = np.asarray(nu["real"], dtype=float) + 1j * np.asarray(nu.get("imag", 0.0), dtype=float)
        return DephasingModel.from_samples(nu["t"], values)
    raise UsageError(f"unknown dephasing kind {kind!r}")


def _lindblad_from_spec(spec: dict) -> LindbladModel:
    try:
        return LindbladModel(
            _complex_matrix(spec["hamiltonian"]),
            [_complex_matrix(c) for c in spec.get("jump_operators", [])],
            _complex_matrix(spec.get("rates", [[]])),
        )
    except KeyError as exc:
        raise UsageError(f"lindblad model is missing key {exc}") from exc


def _grid(args) -> np.ndarray:
    if not args.t_max > 0:
        raise UsageError(f"--t-max must be > 0, got {args.t_max}")
    if args.points < 2:
        raise UsageError(f"--points must be >= 2, got {args.points}")
    return np.linspace(0.0, args.t_max, args.points)


def _qubit_maps(args, times):
    """Affine maps of the selected discrete-variable model on the grid."""
    if args.model is None:
        model = _lorentzian_from_args(args)
        basis = build_basis(2)
        return [lorentzian_map(model, t, basis) for t in times]
    spec = _load_model_file(args.model)
    kind = spec["model"]
    if kind == "lorentzian":
        model = LorentzianDecayModel(float(spec["gamma0"]), float(spec.get("lambda", 1.0)), float(spec.get("delta", 0.0)))
        basis = build_basis(2)
        return [lorentzian_map(model, t, basis) for t in times]
    if kind == "dephasing":
        model = _dephasing_from_spec(spec)
        basis = build_basis(2)
        return [dephasing_map(model, t, basis) for t in times]
    if kind == "lindblad":
        model = _lindblad_from_spec(spec)
        return lindblad_propagate(model, build_basis(model.dimension), times)
    raise UsageError(f"model {kind!r} is not a discrete-variable model")


def _trajectory(args) -> VolumeTrajectory:
    times = _grid(args)
    if args.model is None:
        return lorentzian_trajectory(_lorentzian_from_args(args), times)
    spec = _load_model_file(args.model)
    if spec["model"] == "dephasing":
        return dephasing_trajectory(_dephasing_from_spec(spec), times)
    return VolumeTrajectory.from_maps(_qubit_maps(args, times), spec["model"])


def _gaussian_channels(args):
    if args.model is None:
        spec = {"model": "attenuation", "gamma": args.gamma, "sigma_inf": gcv.vacuum(1).tolist()}
    else:
        spec = _load_model_file(args.model)
    kind = spec["model"]
    if kind == "attenuation":
        gamma = float(spec.get("gamma", args.gamma))
        if gamma < 0:
            raise ValueError(f"--gamma must be non-negative, got {gamma}")
        sigma_inf = np.asarray(spec.get("sigma_inf", gcv.vacuum(1)), dtype=float)
        return [gcv.markovian_attenuation(gamma, sigma_inf, t) for t in _grid(args)]
    if kind == "gaussian_series":
        chans = [gcv.GaussianChannel.from_record(r) for r in spec["channels"]]
        if not chans:
            raise UsageError("gaussian_series has no channels")
        return chans
    raise UsageError(f"model {kind!r} is not a Gaussian model")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def run_trajectory(args, out, log):
    out.write(_trajectory(args).to_csv())


def run_nv(args, out, log):
    if args.input is not None:
        try:
            with open(args.input) as fh:
                traj = VolumeTrajectory.from_csv(fh.read(), args.input)
        except OSError as exc:
            raise UsageError(f"cannot read {args.input!r}: {exc.strerror}") from exc
    else:
        traj = _trajectory(args)
    res = measure_nv(traj, args.threshold)
    out.write("t_start,t_end,dV\n")
    for a, b, dv in res.growth_intervals:
        out.write(f"{_fmt(a)},{_fmt(b)},{_fmt(dv)}\n")
    log.write(
        f"n_v={_fmt(res.n_v)} intervals={len(res.growth_intervals)} "
        f"total_decay={_fmt(res.total_decay)} threshold={args.threshold:g}\n"
    )


def _scan_values(args) -> np.ndarray:
    if args.param_points < 1 or args.param_max < args.param_min:
        raise UsageError(
            f"empty scan range: [{args.param_min}, {args.param_max}] with {args.param_points} points"
        )
    return np.linspace(args.param_min, args.param_max, args.param_points)


def _scan(args, out, make_model):
    values = _scan_values(args)
    times = _grid(args)

    def point(v):
        return measure_nv(lorentzian_trajectory(make_model(v), times), args.threshold).n_v

    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        results = list(pool.map(point, values))
    out.write("param,n_v\n")
    for v, nv in zip(values, results):
        out.write(f"{_fmt(v)},{_fmt(nv)}\n")


def run_scan_detuning(args, out, log):
    if not args.gamma0_over_lambda > 0:
        raise ValueError(f"--gamma0-over-lambda must be > 0, got {args.gamma0_over_lambda}")
    _scan(args, out, lambda d: LorentzianDecayModel(args.gamma0_over_lambda, 1.0, d))


def run_scan_coupling(args, out, log):
    if args.param_min <= 0:
        raise ValueError(f"--param-min must be > 0 for a coupling scan, got {args.param_min}")
    _scan(args, out, lambda g: LorentzianDecayModel(g, 1.0, args.delta_over_lambda))


def run_gaussian(args, out, log):
    traj = gcv.gaussian_trajectory(_gaussian_channels(args))
    out.write(traj.to_csv())
    res = measure_nv(traj, args.threshold)
    log.write(f"n_v={_fmt(res.n_v)} intervals={len(res.growth_intervals)} threshold={args.threshold:g}\n")


def run_tomo_sim(args, out, log):
    times = _grid(args)
    maps = _qubit_maps(args, times)
    plan = make_plan(maps[0].dimension)
    shots = args.shots
    if shots is not None and shots <= 0:
        raise ValueError(f"--shots must be a positive integer, got {shots}")
    v_true, v_est = [], []
    for k, m in enumerate(maps):
        rec = simulate_record(plan, m, shots, args.seed + k)
        v_true.append(volume_factor(m))
        v_est.append(estimate_volume(rec, plan))
    out.write("t,V_true,V_est\n")
    for t, a, b in zip(times, v_true, v_est):
        out.write(f"{_fmt(t)},{_fmt(a)},{_fmt(b)}\n")
    nv_true = measure_nv(VolumeTrajectory(times, v_true), args.threshold).n_v
    nv_est = measure_nv(VolumeTrajectory(times, v_est), args.threshold).n_v
    log.write(
        f"n_v_true={_fmt(nv_true)} n_v_est={_fmt(nv_est)} threshold={args.threshold:g} "
        f"shots={'inf' if shots is None else shots} seed={args.seed}\n"
    )


COMMANDS = {
    "trajectory": (run_trajectory, "V(t) = |det A_t| on a time grid (CSV t,V)"),
    "nv": (run_nv, "volume-growth measure and growth intervals"),
    "scan-detuning": (run_scan_detuning, "n_v of the Lorentzian model versus Delta/lambda"),
    "scan-coupling": (run_scan_coupling, "n_v of the Lorentzian model versus gamma0/lambda"),
    "gaussian": (run_gaussian, "|det Xvec| for a Gaussian channel family"),
    "tomo-sim": (run_tomo_sim, "simulated tomography estimate of V(t)"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gamma0-over-lambda", type=float, default=10.0)
    common.add_argument("--delta-over-lambda", type=float, default=0.0)
    common.add_argument("--t-max", type=float, default=10.0, help="grid end, in units of 1/lambda")
    common.add_argument("--points", type=int, default=5000)
    common.add_argument("--threshold", type=float, default=1e-12)
    common.add_argument("--shots", type=int, default=None, help="omit for exact tomography")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None)
    common.add_argument("--model", default=None, help="JSON model file")

    parser = _Parser(prog="nmvolume", description="Volume-of-accessible-states non-Markovianity tools")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "nv":
            p.add_argument("--input", default=None, help="read a t,V CSV instead of a model")
        if name.startswith("scan"):
            lo, hi = (-10.0, 10.0) if name == "scan-detuning" else (0.1, 20.0)
            p.add_argument("--param-min", type=float, default=lo)
            p.add_argument("--param-max", type=float, default=hi)
            p.add_argument("--param-points", type=int, default=41)
            p.add_argument("--workers", type=int, default=min(4, os.cpu_count() or 1))
        if name == "gaussian":
            p.add_argument("--gamma", type=float, default=1.0, help="attenuation rate Gamma")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threshold < 0:
        print(f"nmvolume: error: --threshold must be >= 0, got {args.threshold}", file=sys.stderr)
        return EXIT_USAGE
    handler = COMMANDS[args.command][0]
    buf = io.StringIO()
    log = io.StringIO()
    try:
        handler(args, buf, log)
    except UsageError as exc:
        print(f"nmvolume: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"nmvolume: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.out is None:
        sys.stdout.write(buf.getvalue())
        sys.stderr.write(log.getvalue())
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
        sys.stdout.write(log.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
