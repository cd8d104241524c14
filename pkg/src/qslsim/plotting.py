"""Figure rendering for the CLI report path.

Renders the sweep/pair/trace data produced by the CLI commands to PNG files
next to the delimited output.  Pure file output (Agg backend), no display.
"""
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["plot_qsl_sweep", "plot_nonmarkov_sweep", "plot_pairs",
           "plot_trace"]


def _group_by_tau(rows):
    taus = sorted({row["tau"] for row in rows})
    for tau in taus:
        sub = [r for r in rows if r["tau"] == tau]
        sub.sort(key=lambda r: r["delta"])
        yield tau, np.array([r["delta"] for r in sub]), sub


def plot_qsl_sweep(rows, path):
    """QSL-to-driving-time ratio against detuning, one curve per tau."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for tau, deltas, sub in _group_by_tau(rows):
        ratio = np.array([r["tau_qsl"] / r["tau"] for r in sub])
        ax.plot(deltas, ratio, label=f"tau = {tau:g}")
    ax.set_xlabel("detuning delta (units of beta)")
    ax.set_ylabel("tau_qsl / tau")
    ax.set_title("Quantum-speed-limit ratio across the band edge")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_nonmarkov_sweep(rows, path):
    """Non-Markovianity and trapped population against detuning."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    for tau, deltas, sub in _group_by_tau(rows):
        ax1.plot(deltas, [r["n_value"] for r in sub], label=f"tau = {tau:g}")
        ax2.plot(deltas, [r["p_tau"] for r in sub], label=f"tau = {tau:g}")
    ax1.set_ylabel("backflow N")
    ax2.set_ylabel("P at tau")
    ax2.set_xlabel("detuning delta (units of beta)")
    ax1.set_title("Memory effects and population trapping")
    ax1.legend()
    ax1.grid(alpha=0.3)
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_pairs(integrals, optimal_value, path):
    """Per-pair backflow integrals against the canonical-pair value."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(np.arange(len(integrals)), integrals, ".", ms=3,
            label="sampled pairs")
    ax.axhline(optimal_value, color="tab:red", lw=1.5,
               label="canonical pair (|0>, |1>)")
    ax.set_xlabel("pair index")
    ax.set_ylabel("backflow integral")
    ax.set_title("Random state pairs never beat the canonical pair")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trace(t, P, dPdt, path):
    """Population history with its derivative."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    ax1.plot(t, P)
    ax1.set_ylabel("P(t)")
    ax1.set_title("Excited-state population")
    ax2.plot(t, dPdt)
    ax2.axhline(0.0, color="k", lw=0.5)
    ax2.set_ylabel("dP/dt")
    ax2.set_xlabel("t (units of 1/beta)")
    ax1.grid(alpha=0.3)
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
