"""Command-line front door.

All frequencies and rates are in units of the cavity frequency (omega = 1
internally); times are in units of 1/omega.  Every output file echoes the
full resolved configuration, which suffices to reproduce it byte-for-byte.

Exit codes: 0 success, 2 parameter/validation error (diagnostic names the
violated precondition), 1 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__, laser_direct, laser_rate, liouvillian
from .errors import FockLaserError, ValidationError
from .params import GainParams, MultiLevelGain, RabiParams
from .serialize import ResultEnvelope
from .spectrum import spectrum_table
from .emission import blockade_profile

__all__ = ["main", "run"]


def _parse_grid(spec: str) -> list[float]:
    """'a..b:num' -> log-spaced grid; 'x,y,z' or 'x' -> explicit values."""
    if ".." in spec:
        span, _, num = spec.partition(":")
        lo, _, hi = span.partition("..")
        if not num:
            raise ValidationError(f"grid '{spec}' needs a point count after ':'")
        vals = np.logspace(np.log10(float(lo)), np.log10(float(hi)), int(num))
        return [float(v) for v in vals]
    return [float(v) for v in spec.split(",")]


def _build_parser():
    top = argparse.ArgumentParser(
        prog="focklaser",
        description="Deep-strong-coupling spectra and Fock-laser statistics "
                    "(all rates in units of omega).")
    top.add_argument("--version", action="version",
                     version=f"focklaser {__version__}")
    sub = top.add_subparsers(dest="command", required=True)
    subparsers = {}

    def add_common(sp, gain=True):
        sp.add_argument("--config", type=str, default=None,
                        help="JSON file of defaults; flags override it")
        sp.add_argument("--g", type=str, default="1.0",
                        help="dimensionless coupling (comma list where a sweep applies)")
        sp.add_argument("--lambda", dest="lam", type=float, default=0.0)
        sp.add_argument("--omega0-detuning", dest="delta", type=float,
                        default=0.0, help="dimensionless emitter detuning")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", type=str, default=None)
        if gain:
            sp.add_argument("--epsilon", type=float, default=1e-5)
            sp.add_argument("--gamma", type=float, default=1e-3)
            sp.add_argument("--kappa", type=float, default=1e-8)
            sp.add_argument("--r", type=str, default="1e-2")
        return sp

    sp = subparsers["spectrum"] = add_common(
        sub.add_parser("spectrum", help="levels and gaps"), gain=False)
    sp.add_argument("--n-max", type=int, default=100)

    sp = subparsers["blockade"] = add_common(
        sub.add_parser("blockade", help="emission probability vs n"))
    sp.add_argument("--t", type=float, default=None,
                    help="interaction time (default 0.01/epsilon)")
    sp.add_argument("--n-max", type=int, default=None)

    sp = subparsers["gain-loss"] = add_common(
        sub.add_parser("gain-loss", help="gain/loss coefficient curves"))
    sp.add_argument("--n-max", type=int, default=None)

    sp = subparsers["steady-state"] = add_common(
        sub.add_parser("steady-state", help="stationary distribution"))
    sp.add_argument("--method", choices=("rate", "direct", "liouvillian"),
                    default="rate",
                    help="the direct method reads --r as the effective "
                         "pump r*Gamma/(r+Gamma) of its five-level medium")
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("--n-fock", type=int, default=None)
    sp.add_argument("--interaction", choices=("a", "b"), default="b")
    sp.add_argument("--jump", choices=("a", "b"), default="b")
    sp.add_argument("--bath-ratio", type=float, default=1e4,
                    help="gamma_c,d / gamma for the direct method")

    sp = subparsers["transient"] = add_common(
        sub.add_parser("transient", help="rate-equation evolution"))
    sp.add_argument("--t-final", type=float, required=True)
    sp.add_argument("--rho0-fock", type=int, default=0,
                    help="initial Fock level (default vacuum)")
    sp.add_argument("--n-max", type=int, default=None)

    sp = subparsers["sweep"] = add_common(
        sub.add_parser("sweep", help="pump sweep (S-curve data)"))
    sp.add_argument("--method", choices=("rate", "direct"), default="rate")
    sp.add_argument("--r-log", type=str, default=None,
                    help="pump grid 'a..b:num' (log-spaced); overrides --r")
    sp.add_argument("--jobs", type=int, default=1)

    sp = subparsers["regime-map"] = add_common(
        sub.add_parser("regime-map", help="distribution-shape map"))
    sp.add_argument("--r-log", type=str, required=True)
    sp.add_argument("--gamma-log", type=str, required=True)
    sp.add_argument("--jobs", type=int, default=1)

    return top, subparsers


def _apply_config_file(argv: list[str], args: argparse.Namespace,
                       top: argparse.ArgumentParser,
                       subparsers: dict) -> argparse.Namespace:
    if getattr(args, "config", None) is None:
        return args
    with open(args.config) as fh:
        defaults = json.load(fh)
    if not isinstance(defaults, dict):
        raise ValidationError(f"{args.config}: config must be a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in defaults.items()}
    unknown = set(defaults) - set(vars(args))
    if unknown:
        raise ValidationError(f"{args.config}: unknown keys {sorted(unknown)}")
    # defaults live on the subparser; explicit flags still override them
    subparsers[args.command].set_defaults(
        **{k: (str(v) if isinstance(getattr(args, k, None), str) else v)
           for k, v in defaults.items()})
    return top.parse_args(argv)


def _single(values: list[float], what: str) -> float:
    if len(values) != 1:
        raise ValidationError(f"{what} must be a single value here, got {values}")
    return values[0]


def _rabi(args, g: float) -> RabiParams:
    return RabiParams(omega=1.0, g=g, lam=args.lam)


def _gain(args, r: float) -> GainParams:
    return GainParams(epsilon=args.epsilon, gamma=args.gamma, r=r,
                      kappa=args.kappa, delta=args.delta)


def _gain_echo(args, r: float) -> dict:
    return {"epsilon": args.epsilon, "gamma": args.gamma, "kappa": args.kappa,
            "r": r, "delta": args.delta}


def _distribution_rows(dist) -> list:
    return [(int(n), float(p)) for n, p in zip(dist.n, dist.probs)]


# module-level workers so ProcessPoolExecutor can pickle them
def _sweep_point(task):
    method, g, lam, delta, eps, gam, kap, bath_ratio, r = task
    p = RabiParams(g=g, lam=lam)
    gp = GainParams(epsilon=eps, gamma=gam, r=r, kappa=kap, delta=delta)
    if method == "direct":
        mlg = MultiLevelGain.symmetric(_invert_ra(r, gam), gam, bath_ratio)
        d = laser_direct.steady_state_direct(p, gp, mlg, check=False)
    else:
        d = laser_rate.steady_state(p, gp)
    return (g, r, d.mean, d.std, d.fano)


def _regime_point(task):
    g, lam, delta, eps, kap, r, gam = task
    p = RabiParams(g=g, lam=lam)
    gp = GainParams(epsilon=eps, gamma=gam, r=r, kappa=kap, delta=delta)
    d = laser_rate.steady_state(p, gp)
    from .errors import ScanLimitError
    from .spectrum import critical_photon_number
    try:
        nc = critical_photon_number(p) if g > 0 else None
    except ScanLimitError:
        nc = None
    return (r, gam, laser_rate.classify_distribution(d, nc))


def _invert_ra(r_a: float, gamma: float) -> float:
    """Pump r with rGamma/(r+Gamma) = r_a (requires r_a < Gamma)."""
    if r_a >= gamma:
        raise ValidationError(
            f"effective pump r_a = {r_a} must stay below gamma = {gamma} "
            "for the five-level medium")
    return r_a * gamma / (gamma - r_a)


def _map_jobs(fn, tasks, jobs: int):
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, tasks))  # preserves input order


def _cmd_spectrum(args) -> ResultEnvelope:
    g = _single(_parse_grid(args.g), "--g")
    table = spectrum_table(_rabi(args, g), args.n_max)
    rows = [r for r in table.rows()]
    return ResultEnvelope("spectrum", {"g": g, "lambda": args.lam,
                                       "n_max": args.n_max},
                          ["n", "sigma", "energy", "gap"], rows)


def _cmd_blockade(args) -> ResultEnvelope:
    g = _single(_parse_grid(args.g), "--g")
    p = _rabi(args, g)
    gp = _gain(args, float(_parse_grid(args.r)[0]))
    t = args.t if args.t is not None else 0.01 / gp.epsilon
    n_max = args.n_max
    if n_max is None:
        n_max = max(50, int(2 * g * g) + 50)
    prof = blockade_profile(p, gp, t, n_max)
    rows = [(int(n), float(v)) for n, v in enumerate(prof)]
    return ResultEnvelope("blockade",
                          {"g": g, "lambda": args.lam, "t": t, "n_max": n_max,
                           **_gain_echo(args, gp.r)},
                          ["n", "p_emit"], rows)


def _cmd_gain_loss(args) -> ResultEnvelope:
    g = _single(_parse_grid(args.g), "--g")
    p = _rabi(args, g)
    gp = _gain(args, float(_parse_grid(args.r)[0]))
    n_max = args.n_max
    if n_max is None:
        n_max = max(50, int(2 * g * g) + 100)
    curves = laser_rate.gain_loss(p, gp, n_max)
    rows = [(int(n), float(gn), float(ls), float(f), float(s))
            for n, gn, ls, f, s in zip(curves.n, curves.gain, curves.loss,
                                       curves.nonlinearity, curves.saturation)]
    return ResultEnvelope("gain-loss",
                          {"g": g, "lambda": args.lam, "n_max": n_max,
                           **_gain_echo(args, gp.r)},
                          ["n", "gain", "loss", "F", "G"], rows)


def _cmd_steady_state(args) -> ResultEnvelope:
    g = _single(_parse_grid(args.g), "--g")
    r = _single(_parse_grid(args.r), "--r")
    p = _rabi(args, g)
    gp = _gain(args, r)
    config = {"g": g, "lambda": args.lam, "method": args.method,
              **_gain_echo(args, r)}
    if args.method == "rate":
        dist = laser_rate.steady_state(p, gp, n_max=args.n_max)
    elif args.method == "direct":
        mlg = MultiLevelGain.symmetric(_invert_ra(r, gp.gamma), gp.gamma,
                                       args.bath_ratio)
        config["bath_ratio"] = args.bath_ratio
        dist = laser_direct.steady_state_direct(p, gp, mlg, n_max=args.n_max)
    else:
        model = liouvillian.build_model(p, gp, n_fock=args.n_fock,
                                        interaction=args.interaction,
                                        jump=args.jump)
        config.update({"n_fock": model.basis.n_fock,
                       "interaction": args.interaction, "jump": args.jump})
        dist = liouvillian.steady_state(model).distribution
    print(f"mean={dist.mean:.6g} std={dist.std:.6g} fano={dist.fano:.6g}",
          file=sys.stderr)
    return ResultEnvelope("steady-state", config, ["n", "probability"],
                          _distribution_rows(dist))


def _cmd_transient(args) -> ResultEnvelope:
    from .distribution import PhotonDistribution

    g = _single(_parse_grid(args.g), "--g")
    r = _single(_parse_grid(args.r), "--r")
    p = _rabi(args, g)
    gp = _gain(args, r)
    probs = np.zeros(args.rho0_fock + 1)
    probs[args.rho0_fock] = 1.0
    rho0 = PhotonDistribution.from_probs(probs)
    dist = laser_rate.transient(rho0, p, gp, args.t_final, n_max=args.n_max)
    return ResultEnvelope("transient",
                          {"g": g, "lambda": args.lam, "t_final": args.t_final,
                           "rho0_fock": args.rho0_fock, **_gain_echo(args, r)},
                          ["n", "probability"], _distribution_rows(dist))


def _cmd_sweep(args) -> ResultEnvelope:
    gs = _parse_grid(args.g)
    rs = _parse_grid(args.r_log) if args.r_log else _parse_grid(args.r)
    if sorted(rs) != rs or min(rs) <= 0:
        raise ValidationError("pump grid must be positive ascending")
    tasks = [(args.method, g, args.lam, args.delta, args.epsilon, args.gamma,
              args.kappa, 1e4, r) for g in gs for r in rs]
    rows = _map_jobs(_sweep_point, tasks, args.jobs)
    return ResultEnvelope("sweep",
                          {"g": ",".join(repr(v) for v in gs),
                           "lambda": args.lam, "method": args.method,
                           "epsilon": args.epsilon, "gamma": args.gamma,
                           "kappa": args.kappa, "delta": args.delta,
                           "r_grid": args.r_log or args.r},
                          ["g", "r", "mean", "std", "fano"],
                          [tuple(map(float, row)) for row in rows])


def _cmd_regime_map(args) -> ResultEnvelope:
    g = _single(_parse_grid(args.g), "--g")
    rs = _parse_grid(args.r_log)
    gams = _parse_grid(args.gamma_log)
    tasks = [(g, args.lam, args.delta, args.epsilon, args.kappa, r, gam)
             for gam in gams for r in rs]
    rows = _map_jobs(_regime_point, tasks, args.jobs)
    return ResultEnvelope("regime-map",
                          {"g": g, "lambda": args.lam, "epsilon": args.epsilon,
                           "kappa": args.kappa, "delta": args.delta,
                           "r_grid": args.r_log, "gamma_grid": args.gamma_log},
                          ["r", "gamma", "class"],
                          [(float(r), float(gam), cls) for r, gam, cls in rows])


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "blockade": _cmd_blockade,
    "gain-loss": _cmd_gain_loss,
    "steady-state": _cmd_steady_state,
    "transient": _cmd_transient,
    "sweep": _cmd_sweep,
    "regime-map": _cmd_regime_map,
}


def run(argv: list[str]) -> int:
    top, subparsers = _build_parser()
    try:
        args = top.parse_args(argv)
        args = _apply_config_file(argv, args, top, subparsers)
        start = time.perf_counter()
        envelope = _DISPATCH[args.command](args)
        envelope.duration_s = time.perf_counter() - start
        text = envelope.write(args.out, fmt=args.format)
        if args.out is None:
            sys.stdout.write(text)
        return 0
    except (ValidationError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"focklaser: parameter error: {exc}", file=sys.stderr)
        return 2
    except FockLaserError as exc:
        print(f"focklaser: numerical failure: {exc}", file=sys.stderr)
        return 1
    except OverflowError as exc:
        print(f"focklaser: numerical failure: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
