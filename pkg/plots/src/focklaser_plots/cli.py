"""Batch front end: generate simulator data and re-render the paper panels.

``focklaser-plots generate --data DIR`` runs the ``focklaser`` CLI (which
must be on PATH) for the standard panel configurations; ``render-all``
turns a populated data directory into PNGs; ``render`` does one panel from
explicit inputs.
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from pathlib import Path

from .figures import RENDERERS, render
from .reader import SchemaError

# standard panel data: subcommand arguments keyed by output file name
SPECTRUM_COUPLINGS = tuple(round(0.25 * k, 2) for k in range(13))  # 0 .. 3
GAP_COUPLINGS = (0.01, 1.0, 5.0, 10.0)
GAIN_COUPLINGS = (0.3, 5.0, 10.0, 18.0)
PROP_COUPLINGS = (2.0, 4.0, 6.0, 8.0, 10.0, 12.0)
SWEEP_ARGS = ["--g", "0,5,10,18", "--epsilon", "1e-5", "--gamma", "1e-3",
              "--kappa", "2e-7", "--r-log", "1e-6..1e-1:25"]
DIST_PUMPS = (("below", "2e-7"), ("near", "5e-7"), ("above", "1e-2"))
GRID_COUPLINGS = (0.0, 5.0, 10.0)
GRID_PUMPS = ("3e-4", "1e-3", "1e-2")  # below / at / above the Q=5e6 threshold


def _run(cmd: list[str]) -> None:
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(cmd)} failed:\n{proc.stderr}")


def generate(data_dir: Path, simulator: str = "focklaser") -> None:
    data_dir.mkdir(parents=True, exist_ok=True)
    for k, g in enumerate(SPECTRUM_COUPLINGS):
        _run([simulator, "spectrum", "--g", str(g), "--n-max", "15",
              "--out", str(data_dir / f"specgrid_{k:02d}.csv")])
    for g in GAP_COUPLINGS:
        _run([simulator, "spectrum", "--g", str(g), "--n-max", "200",
              "--out", str(data_dir / f"spectrum_g{g:g}.csv")])
    for g in GAIN_COUPLINGS:
        _run([simulator, "gain-loss", "--g", str(g), "--epsilon", "1e-5",
              "--gamma", "1e-3", "--kappa", "1e-8", "--r", "1e-2",
              "--n-max", "400", "--out", str(data_dir / f"gainloss_g{g:g}.csv")])
    for g in PROP_COUPLINGS:
        _run([simulator, "gain-loss", "--g", str(g), "--epsilon", "1e-5",
              "--gamma", "1e-3", "--kappa", "1e-8", "--r", "1e-2",
              "--n-max", "200", "--out", str(data_dir / f"prop_g{g:g}.csv")])
    _run([simulator, "sweep", "--method", "rate", *SWEEP_ARGS,
          "--out", str(data_dir / "sweep.csv")])
    for tag, r in DIST_PUMPS:
        _run([simulator, "steady-state", "--method", "rate", "--g", "10",
              "--epsilon", "1e-5", "--gamma", "1e-3", "--kappa", "1e-8",
              "--r", r, "--out", str(data_dir / f"dist_{tag}.csv")])
    for g in GRID_COUPLINGS:
        for j, r in enumerate(GRID_PUMPS):
            _run([simulator, "steady-state", "--method", "rate",
                  "--g", str(g), "--epsilon", "1e-5", "--gamma", "1e-3",
                  "--kappa", "2e-7", "--r", r,
                  "--out", str(data_dir / f"grid_g{g:g}_r{j}.csv")])


def render_all(data_dir: Path, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    made = [
        render("spectrum-vs-g",
               sorted(data_dir.glob("specgrid_*.csv")),
               out_dir / "spectrum_vs_g.png"),
        render("gaps",
               sorted(data_dir.glob("spectrum_g*.csv")),
               out_dir / "excitation_gaps.png"),
        render("gain-loss",
               sorted(data_dir.glob("gainloss_g*.csv")),
               out_dir / "gain_loss.png"),
        render("s-curves", [data_dir / "sweep.csv"],
               out_dir / "s_curves.png"),
        render("propagation",
               sorted(data_dir.glob("prop_g*.csv")),
               out_dir / "propagation.png"),
        render("distributions",
               [data_dir / f"dist_{tag}.csv" for tag, _ in DIST_PUMPS],
               out_dir / "distributions.png"),
        render("statistics-grid",
               sorted(data_dir.glob("grid_g*.csv")),
               out_dir / "statistics_grid.png"),
    ]
    return made


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="focklaser-plots")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("generate", help="run the simulator for panel data")
    sp.add_argument("--data", type=Path, required=True)
    sp.add_argument("--simulator", default="focklaser")

    sp = sub.add_parser("render-all", help="render every panel from a data dir")
    sp.add_argument("--data", type=Path, required=True)
    sp.add_argument("--out", type=Path, required=True)

    sp = sub.add_parser("render", help="render one panel")
    sp.add_argument("figure", choices=sorted(RENDERERS))
    sp.add_argument("--inputs", nargs="+", required=True)
    sp.add_argument("--out", type=Path, required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            generate(args.data, args.simulator)
        elif args.command == "render-all":
            for path in render_all(args.data, args.out):
                print(path)
        else:
            print(render(args.figure, args.inputs, args.out))
        return 0
    except (SchemaError, RuntimeError, OSError) as exc:
        print(f"focklaser-plots: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
