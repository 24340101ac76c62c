"""Figure rendering for analysis reports (written next to the text output)."""

from __future__ import annotations

import os
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import (SternParams, stern_attack_report, truncated_rank,
                       truncated_recovery_probability, log2_fraction)
from .keygen import PublicKey


def work_factor_figure(n: int, k: int, mu: int, nu: int, t: int, sp: SternParams,
                       ells: Sequence[int], path: str) -> str:
    """log2 work factor of the whole-sequence attack as a function of ell."""
    ys = [stern_attack_report(n, k, ell, mu, nu, t, sp).work_factor_log2 for ell in ells]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(list(ells), ys, marker="o", lw=1.2)
    ax.set_xlabel("message length $\\ell$ (frames)")
    ax.set_ylabel("work factor ($\\log_2$)")
    ax.set_title(f"Stern work factor, n={n} k={k} $\\mu$={mu} $\\nu$={nu} t={t} "
                 f"p={sp.p} m={sp.m}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def truncated_recovery_figure(pk: PublicKey, s_values: Sequence[int], model,
                              path: str) -> str:
    """Recovery probability and rank deficiency over truncated prefixes."""
    probs = [log2_fraction(truncated_recovery_probability(pk, s, model)) for s in s_values]
    deficiency = [pk.k * (s + 1) - truncated_rank(pk, s)[0] for s in s_values]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.2, 4.0))
    ax1.plot(list(s_values), probs, marker="o", lw=1.2, color="tab:red")
    ax1.set_xlabel("prefix length $s$")
    ax1.set_ylabel("recovery probability ($\\log_2$)")
    ax1.set_title("truncated-interval recovery")
    ax1.grid(True, alpha=0.3)
    ax2.plot(list(s_values), deficiency, marker="s", lw=1.2, color="tab:blue")
    ax2.set_xlabel("prefix length $s$")
    ax2.set_ylabel("rank deficiency $k(s{+}1) - k_s$")
    ax2.set_title("truncated generator rank")
    ax2.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_analysis_figures(plot_dir: str, *, n: int, k: int, mu: int, nu: int, t: int,
                            sp: SternParams, ells: Sequence[int],
                            pk: Optional[PublicKey], s_values: Sequence[int],
                            model) -> list[str]:
    os.makedirs(plot_dir, exist_ok=True)
    out = [work_factor_figure(n, k, mu, nu, t, sp, ells,
                              os.path.join(plot_dir, "work_factor_vs_ell.png"))]
    if pk is not None and s_values:
        out.append(truncated_recovery_figure(
            pk, s_values, model, os.path.join(plot_dir, "truncated_recovery.png")))
    return out
