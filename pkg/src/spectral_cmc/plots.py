"""Matplotlib report figures (Agg backend, rendered straight to files)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .curve import SpectralData, h_on_circle
from .polynomials import roots


def plot_spectral_plane(data: SpectralData, path):
    """Roots of a, Sym points, and the unit circle in the spectral plane."""
    fig, ax = plt.subplots(figsize=(5, 5))
    th = np.linspace(0, 2 * np.pi, 512)
    ax.plot(np.cos(th), np.sin(th), color="0.7", lw=0.8, label="unit circle")
    if data.g > 0:
        ra = np.array(roots(data.a))
        ax.scatter(ra.real, ra.imag, marker="x", color="tab:red",
                   label="roots of a")
    if data.b.degree >= 1:
        rb = np.array(roots(data.b))
        ax.scatter(rb.real, rb.imag, marker="+", color="tab:green",
                   label="roots of b")
    for lam, name in ((data.lambda1, "$\\lambda_1$"),
                      (data.lambda2, "$\\lambda_2$")):
        ax.scatter([lam.real], [lam.imag], marker="o", color="tab:blue")
        ax.annotate(name, (lam.real, lam.imag), textcoords="offset points",
                    xytext=(6, 4))
    ax.set_aspect("equal")
    ax.set_xlabel("Re $\\lambda$")
    ax.set_ylabel("Im $\\lambda$")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_delta_scan(data: SpectralData, path, n: int = 4096):
    """Trace discriminant Delta^2 - 4 along the unit circle."""
    theta, hvals = h_on_circle(data, n=n)
    delta = 2.0 * np.cosh(hvals)
    val = (delta**2 - 4.0).real
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(theta, val, lw=0.9)
    ax.axhline(0.0, color="0.6", lw=0.6)
    for lam, name in ((data.lambda1, "$\\lambda_1$"),
                      (data.lambda2, "$\\lambda_2$")):
        ax.axvline(np.angle(lam) % (2 * np.pi), color="tab:orange", lw=0.7,
                   ls="--")
    ax.set_xlabel("arg $\\lambda$")
    ax.set_ylabel("$\\Delta^2 - 4$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trajectory(times, coeff_series: dict, path, arc=None):
    """Coefficient trajectories of a deformation run, plus arc length."""
    fig, axes = plt.subplots(2 if arc is not None else 1, 1,
                             figsize=(7, 5), sharex=True, squeeze=False)
    ax = axes[0][0]
    for label, series in coeff_series.items():
        series = np.asarray(series)
        ax.plot(times, series.real, label=f"Re {label}", lw=0.9)
        if np.max(np.abs(series.imag)) > 1e-14:
            ax.plot(times, series.imag, label=f"Im {label}", lw=0.9, ls="--")
    ax.set_ylabel("coefficient")
    ax.legend(fontsize=7, ncol=2)
    if arc is not None:
        ax2 = axes[1][0]
        ax2.plot(times, arc, color="tab:purple", lw=1.0)
        ax2.set_ylabel("short arc length")
        ax2.set_xlabel("t")
    else:
        ax.set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_mesh_preview(mesh, path):
    """3D wireframe of the stereographic projection of the mesh."""
    pole = np.array([0.0, 0.0, 0.0, -1.0])
    pts = mesh.points
    denom = 1.0 - pts @ pole
    denom = np.where(np.abs(denom) < 1e-12, 1e-12, denom)
    proj = pts[..., :3] / denom[..., None]
    fig = plt.figure(figsize=(6, 6))
    ax = fig.add_subplot(projection="3d")
    stride = max(1, mesh.shape[0] // 48)
    ax.plot_wireframe(proj[..., 0], proj[..., 1], proj[..., 2],
                      rstride=stride, cstride=stride, lw=0.4,
                      color="tab:blue")
    ax.set_box_aspect((1, 1, 1))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
