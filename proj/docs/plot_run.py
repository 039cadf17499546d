#!/usr/bin/env python3
"""Quick-look plots for pfl output directories.

Usage:
    python3 docs/plot_run.py out/simulate_default
    python3 docs/plot_run.py out/experiment_part_ii

Picks up trajectory.csv (energy breakdown, particle track, drift) or
experiment.csv (distance, comoving seminorm, energy floor), whichever the
directory contains, and writes PNGs next to the data.
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def plot_trajectory(path: Path) -> None:
    df = pd.read_csv(path / "trajectory.csv")
    fig, axes = plt.subplots(3, 1, figsize=(7, 9), sharex=True)
    axes[0].plot(df.t, df.q1, label="q1")
    axes[0].plot(df.t, df.p1, label="p1")
    axes[0].plot(df.t, df.qdot_norm, label="|qdot|")
    axes[0].legend()
    axes[0].set_ylabel("particle")
    for col in ["E_kin", "E_pot", "E_pi", "E_grad", "E_int"]:
        axes[1].plot(df.t, df[col], label=col)
    axes[1].legend(ncol=3, fontsize=8)
    axes[1].set_ylabel("energy terms")
    axes[2].semilogy(df.t, df.drift.clip(lower=1e-18))
    axes[2].set_ylabel("|H(t)-H(0)|/|H(0)|")
    axes[2].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path / "trajectory.png", dpi=130)
    print(f"wrote {path / 'trajectory.png'}")


def plot_experiment(path: Path) -> None:
    df = pd.read_csv(path / "experiment.csv")
    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    axes[0].plot(df.t, df.dist_E, label="dist_E to the attractor set")
    axes[0].plot(df.t, df["floor"], "--", label="energy floor")
    axes[0].legend()
    axes[0].set_ylabel("energy norm")
    axes[1].semilogy(df.t, df.local_seminorm.clip(lower=1e-18))
    axes[1].set_ylabel("comoving deviation seminorm")
    axes[1].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path / "experiment.png", dpi=130)
    print(f"wrote {path / 'experiment.png'}")


def main() -> int:
    if len(sys.argv) != 2:
        print(__doc__)
        return 2
    path = Path(sys.argv[1])
    if (path / "trajectory.csv").exists():
        plot_trajectory(path)
    if (path / "experiment.csv").exists():
        plot_experiment(path)
    if not any((path / f).exists() for f in ("trajectory.csv", "experiment.csv")):
        print(f"nothing to plot in {path}")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
