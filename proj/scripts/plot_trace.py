#!/usr/bin/env python3
"""Render a gridmpc trace.csv into the standard set of figures.

Usage:
    python3 scripts/plot_trace.py results/trace.csv [-o results/figures.png]

Produces a four-panel figure: DC-side powers, per-inverter output powers,
bus voltages (DC bus and PCC RMS), and the measured PCC frequency. Needs
matplotlib; everything else is stdlib.
"""

import argparse
import csv
import sys


def read_trace(path):
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        rows = [row for row in reader]
    if not rows:
        sys.exit(f"{path}: no data rows")
    cols = {name: [float(r[name]) for r in rows] for name in reader.fieldnames}
    vsi_count = sum(1 for name in reader.fieldnames if name.startswith("p_vsi"))
    return cols, vsi_count


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("trace", help="trace.csv produced by gridmpc")
    ap.add_argument("-o", "--out", default=None, help="output image (default: <trace>.png)")
    args = ap.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    cols, m = read_trace(args.trace)
    t = cols["t"]

    fig, axes = plt.subplots(4, 1, figsize=(9, 11), sharex=True)

    ax = axes[0]
    ax.plot(t, [p / 1e3 for p in cols["p_pv"]], label="P_PV")
    ax.plot(t, [p / 1e3 for p in cols["p_bat"]], label="P_bat")
    ax.plot(t, [p / 1e3 for p in cols["p_dcload"]], label="P_dcload")
    ax.set_ylabel("DC power [kW]")
    ax.legend(loc="center right")
    ax.grid(alpha=0.3)

    ax = axes[1]
    for j in range(1, m + 1):
        ax.plot(t, [p / 1e3 for p in cols[f"p_vsi{j}"]], label=f"P_vsi{j}")
    ax.set_ylabel("Inverter power [kW]")
    ax.legend(loc="center right")
    ax.grid(alpha=0.3)

    ax = axes[2]
    ax.plot(t, cols["v_dc"], label="v_DC")
    ax.plot(t, cols["v_pcc_rms"], label="PCC RMS")
    ax.set_ylabel("Voltage [V]")
    ax.legend(loc="center right")
    ax.grid(alpha=0.3)

    ax = axes[3]
    f = [x if x > 0 else float("nan") for x in cols["f_pcc"]]  # mask warm-up
    ax.plot(t, f, label="f_PCC")
    ax.set_ylabel("Frequency [Hz]")
    ax.set_xlabel("time [s]")
    ax.legend(loc="center right")
    ax.grid(alpha=0.3)

    out = args.out or args.trace.rsplit(".", 1)[0] + ".png"
    fig.tight_layout()
    fig.savefig(out, dpi=130)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
