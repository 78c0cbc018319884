"""Command-line interface.

Subcommands: keyrate, sweep, sifted, montecarlo, tomography, optimize.
All output is deterministic given the full argument list (seeds included);
floats are emitted with shortest round-trip representation in JSON and 9
significant digits in sweep CSVs.

Exit statuses: 0 success, 1 usage/validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import decoy, montecarlo
from .config import load_config
from .optimize import RateCurve, distance_sweep, max_secure_distance, optimize_mu_nu
from .qstate import PolLabel
from .tomography import (
    AberrationSpec,
    GridSpec,
    StokesField,
    apply_aberration,
    make_vector_mode,
    project_all,
    reconstruct_stokes,
)


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1, not argparse's default 2
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _result_payload(res: decoy.KeyRateResult, modulation_rate_hz: float) -> dict:
    # both candidate source rates reported side by side: the 1 GHz repetition
    # rate and the 100 MHz modulation figure
    return {
        "k_per_pulse": res.k_per_pulse,
        "mu": res.mu,
        "nu": res.nu,
        "bits_per_second": res.k_per_pulse * modulation_rate_hz,
        "bits_per_second_1ghz": res.k_per_pulse * 1e9,
        "bits_per_second_100mhz": res.k_per_pulse * 1e8,
        "components": res.components,
        "flags": list(res.flags),
    }


def _cmd_keyrate(args) -> int:
    cfg = load_config(args.config)
    p = cfg.channel if args.length is None else cfg.channel.at_length(args.length)
    if (args.mu is None) != (args.nu is None):
        raise ValueError("give both --mu and --nu, or neither (optimize)")
    if args.mu is not None:
        res = decoy.evaluate_key_rate(p, args.mu, args.nu, qber_override=args.qber)
    else:
        res = optimize_mu_nu(p, cfg.optimizer, qber_override=args.qber)
    _emit(json.dumps(_result_payload(res, cfg.modulation_rate_hz), indent=2) + "\n", args.out)
    return 0


def _cmd_optimize(args) -> int:
    cfg = load_config(args.config)
    p = cfg.channel if args.length is None else cfg.channel.at_length(args.length)
    res = optimize_mu_nu(p, cfg.optimizer, qber_override=args.qber)
    payload = _result_payload(res, cfg.modulation_rate_hz)
    if args.max_distance:
        try:
            d = max_secure_distance(p, cfg.optimizer, l_max=args.l_max)
        except ValueError:
            payload["max_secure_distance_m"] = None
        else:
            payload["max_secure_distance_m"] = (
                d if d != float("inf") else f"no cutoff below {args.l_max} m"
            )
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _curve_csv(curve: RateCurve) -> str:
    lines = ["length_m,k_per_pulse,mu_opt,nu_opt,flags"]
    for pt in curve.points:
        flags = ";".join(pt.flags)
        lines.append(
            f"{pt.length_m:.9g},{pt.k_per_pulse:.9g},{pt.mu_opt:.9g},{pt.nu_opt:.9g},{flags}"
        )
    return "\n".join(lines) + "\n"


def _cmd_sweep(args) -> int:
    if args.l_min >= args.l_max:
        raise ValueError("need l_min < l_max")
    if args.step <= 0:
        raise ValueError("step must be > 0")
    cfg = load_config(args.config)
    lengths = list(np.arange(args.l_min, args.l_max + args.step / 2, args.step))
    if args.step > args.l_max - args.l_min:
        lengths = [args.l_min]
    curve = distance_sweep(cfg.channel, lengths, cfg.optimizer)
    if args.format == "json":
        payload = [
            {
                "length_m": pt.length_m,
                "k_per_pulse": pt.k_per_pulse,
                "mu_opt": pt.mu_opt,
                "nu_opt": pt.nu_opt,
                "flags": list(pt.flags),
            }
            for pt in curve.points
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(_curve_csv(curve), args.out)
    return 0


def _cmd_sifted(args) -> int:
    rate = decoy.sifted_key_fraction(args.qber)
    _emit(f"{rate:.4f}\n", args.out)
    return 0


def _cmd_montecarlo(args) -> int:
    cfg = load_config(args.config)
    p = cfg.channel if args.length is None else cfg.channel.at_length(args.length)
    stats = montecarlo.simulate_session(p, args.mu, args.n_pulses, args.seed)
    _emit(json.dumps(stats.to_json_dict(), indent=2) + "\n", args.out)
    if args.check and not montecarlo.within_model_band(stats, p, args.mu):
        print("analytic model outside 4 standard errors", file=sys.stderr)
        return 2
    return 0


def _stokes_rows(field: StokesField, grid: GridSpec):
    x, y = grid.axes()
    for i in range(grid.n):
        for j in range(grid.n):
            yield (
                x[i, j],
                y[i, j],
                field.intensity[i, j],
                field.s1[i, j],
                field.s2[i, j],
                field.s3[i, j],
                int(field.valid[i, j]),
            )


def write_pgm(path: str | Path, arr: np.ndarray) -> None:
    """Plain 16-bit PGM, intensity scaled to the array peak."""
    peak = float(arr.max())
    scaled = np.zeros_like(arr, dtype=int) if peak == 0 else np.round(arr / peak * 65535).astype(int)
    with open(path, "w") as fh:
        fh.write(f"P2\n{arr.shape[1]} {arr.shape[0]}\n65535\n")
        for row in scaled:
            fh.write(" ".join(str(v) for v in row) + "\n")


def _cmd_tomography(args) -> int:
    grid = GridSpec(n=args.n, extent_waists=args.extent)
    if args.random_aberration:
        spec = AberrationSpec.random(args.seed, args.length or 0.0, args.rms_per_m)
    else:
        spec = AberrationSpec(
            tip=args.tip,
            tilt=args.tilt,
            astig_oblique=args.astig_oblique,
            astig_vertical=args.astig_vertical,
            defocus=args.defocus,
        )
    field = apply_aberration(make_vector_mode(args.kind, grid), spec)
    intensities = project_all(field)
    stokes = reconstruct_stokes(intensities)
    prefix = Path(args.out) if args.out else Path(f"tomography_{args.kind}")
    prefix.parent.mkdir(parents=True, exist_ok=True)
    for lab in PolLabel:
        write_pgm(f"{prefix}_I{lab.value}.pgm", intensities[lab])
    if args.format == "json":
        payload = {
            "kind": args.kind,
            "n": grid.n,
            "extent_waists": grid.extent_waists,
            "aberration": spec.coefficients(),
            "s1": stokes.s1.tolist(),
            "s2": stokes.s2.tolist(),
            "s3": stokes.s3.tolist(),
            "intensity": stokes.intensity.tolist(),
            "valid": stokes.valid.astype(int).tolist(),
        }
        Path(f"{prefix}_stokes.json").write_text(json.dumps(payload) + "\n")
    else:
        lines = ["x,y,intensity,s1,s2,s3,valid"]
        for row in _stokes_rows(stokes, grid):
            lines.append(",".join(f"{v:.9g}" if not isinstance(v, int) else str(v) for v in row))
        Path(f"{prefix}_stokes.csv").write_text("\n".join(lines) + "\n")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="uwqkd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(sp):
        sp.add_argument("--config", help="flat JSON config file (defaults: flume channel)")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("keyrate", help="decoy key rate at fixed or optimized (mu, nu)")
    add_common(sp)
    sp.add_argument("--mu", type=float)
    sp.add_argument("--nu", type=float)
    sp.add_argument("--length", type=float, help="channel length in m (overrides config)")
    sp.add_argument("--qber", type=float, help="measured QBER replacing the modeled E_mu")
    sp.set_defaults(func=_cmd_keyrate)

    sp = sub.add_parser("optimize", help="optimal (mu, nu) and key rate for one channel")
    add_common(sp)
    sp.add_argument("--length", type=float)
    sp.add_argument("--qber", type=float)
    sp.add_argument("--max-distance", action="store_true", help="also bisect the secure cutoff")
    sp.add_argument("--l-max", type=float, default=200.0)
    sp.set_defaults(func=_cmd_optimize)

    sp = sub.add_parser("sweep", help="optimized rate-distance curve")
    add_common(sp)
    sp.add_argument("--l-min", type=float, required=True)
    sp.add_argument("--l-max", type=float, required=True)
    sp.add_argument("--step", type=float, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("sifted", help="key rate per sifted photon from a QBER")
    sp.add_argument("qber", type=float)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_sifted)

    sp = sub.add_parser("montecarlo", help="pulse-level BB84 session simulation")
    add_common(sp)
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--n-pulses", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--length", type=float)
    sp.add_argument("--check", action="store_true", help="exit 2 unless analytic model within 4 SE")
    sp.set_defaults(func=_cmd_montecarlo)

    sp = sub.add_parser("tomography", help="vector mode synthesis and Stokes reconstruction")
    sp.add_argument("--kind", required=True, choices=("radial", "azimuthal", "vortex_cw", "vortex_ccw"))
    sp.add_argument("--n", type=int, default=256)
    sp.add_argument("--extent", type=float, default=8.0)
    sp.add_argument("--tip", type=float, default=0.0)
    sp.add_argument("--tilt", type=float, default=0.0)
    sp.add_argument("--astig-oblique", type=float, default=0.0)
    sp.add_argument("--astig-vertical", type=float, default=0.0)
    sp.add_argument("--defocus", type=float, default=0.0)
    sp.add_argument("--random-aberration", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--length", type=float, help="channel length for random aberration scaling")
    sp.add_argument("--rms-per-m", type=float, default=0.05)
    sp.add_argument("--out", help="output path prefix")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=_cmd_tomography)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"uwqkd: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure
        print(f"uwqkd: failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
