#!/usr/bin/env python3
"""Renders a cavlat CSV result to an image.

Files with two scan axes become one colour map per channel; anything else is
drawn as line plots of every column against the first one.
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

AXIS_COLUMNS = {
    "delta_c_over_gamma",
    "delta_a_over_gamma",
    "delta_ca_over_gamma",
    "delta_lat_over_fsr",
    "z0_phase",
    "cav_offset",
    "time",
}


def read_csv(path):
    rows = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    header = rows[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in rows[1:]])
    return header, data


def plot_map(header, data, channels, out):
    xs, ys = np.unique(data[:, 0]), np.unique(data[:, 1])
    names = channels or header[2:]
    fig, axes = plt.subplots(1, len(names), figsize=(4.5 * len(names), 4), squeeze=False)
    for ax, name in zip(axes[0], names):
        z = data[:, header.index(name)].reshape(len(ys), len(xs))
        mesh = ax.pcolormesh(xs, ys, z, shading="nearest")
        fig.colorbar(mesh, ax=ax)
        ax.set(xlabel=header[0], ylabel=header[1], title=name)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_lines(header, data, channels, out, logy):
    names = channels or header[1:]
    fig, ax = plt.subplots(figsize=(6, 4))
    for name in names:
        ax.plot(data[:, 0], data[:, header.index(name)], label=name)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(header[0])
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("csv")
    p.add_argument("-o", "--out", help="image path (default: CSV path with .png)")
    p.add_argument("-c", "--channel", action="append", help="column to draw; repeatable")
    p.add_argument("--logy", action="store_true", help="logarithmic y axis for line plots")
    args = p.parse_args()

    header, data = read_csv(args.csv)
    out = args.out or str(Path(args.csv).with_suffix(".png"))
    if len(header) > 2 and header[0] in AXIS_COLUMNS and header[1] in AXIS_COLUMNS:
        plot_map(header, data, args.channel, out)
    else:
        plot_lines(header, data, args.channel, out, args.logy)
    print(out)


if __name__ == "__main__":
    main()
