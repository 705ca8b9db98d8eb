# Copyright 2026 The gaspolar Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Plots bler.csv and cdf.csv files written by the gaspolar CLI."""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def plot_bler(paths, out):
    fig, ax = plt.subplots(figsize=(5, 4))
    for path in paths:
        df = pd.read_csv(path)
        ax.semilogy(df.snr_db, df.bler_ml, "o-", label=f"ML {path}")
        ax.semilogy(df.snr_db, df.bler_gas, "x--", label=f"GAS {path}")
    ax.set_xlabel("SNR [dB]")
    ax.set_ylabel("BLER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_cdf(paths, out):
    fig, axes = plt.subplots(1, 2, figsize=(9, 4), sharey=True)
    for path in paths:
        df = pd.read_csv(path)
        n = len(df)
        resolved = df[df.censored == 0]
        for ax, col in zip(axes, ["cd_at_opt", "qd_at_opt"]):
            vals = resolved[col].sort_values().to_numpy()
            ax.step(vals, [(i + 1) / n for i in range(len(vals))], where="post", label=path)
    axes[0].set_xlabel("classical iterations to optimum")
    axes[1].set_xlabel("Grover rotations to optimum")
    axes[0].set_ylabel("CDF")
    for ax in axes:
        ax.set_xscale("symlog", linthresh=1)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("kind", choices=["bler", "cdf"])
    parser.add_argument("csv", nargs="+")
    parser.add_argument("--out", default="plot.png")
    args = parser.parse_args()
    (plot_bler if args.kind == "bler" else plot_cdf)(args.csv, args.out)


if __name__ == "__main__":
    main()
