"""Static SVG figures with reproducible bytes."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "zztopo"
plt.rcParams["svg.fonttype"] = "none"


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_landscapes(per_plane: dict, L: int, path, title: str = "") -> None:
    """Landscape layers of every plane, one panel per plane."""
    Z = len(per_plane)
    cols = min(Z, 5)
    rows = int(np.ceil(Z / cols))
    fig, axes = plt.subplots(rows, cols, figsize=(3 * cols, 2.4 * rows), squeeze=False, sharey=True)
    for ax in axes.ravel()[Z:]:
        ax.axis("off")
    for ax, (p, lv) in zip(axes.ravel(), sorted(per_plane.items())):
        t = np.linspace(0, L - 1, lv.R)
        for k in range(lv.K):
            ax.plot(t, lv.values[k], lw=1, label=f"$\\lambda_{k + 1}$")
        ax.set_title(f"plane {p}", fontsize=9)
        ax.set_xlabel("layer")
    axes[0, 0].legend(fontsize=7)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    _save(fig, path)


def plot_bars(names, means, stds, path, ylabel: str = "ARI") -> None:
    fig, ax = plt.subplots(figsize=(max(3, 0.9 * len(names) + 1), 3))
    x = np.arange(len(names))
    ax.bar(x, means, yerr=stds, capsize=3, color="0.6")
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel(ylabel)
    ax.axhline(0, color="k", lw=0.5)
    fig.tight_layout()
    _save(fig, path)


def plot_confusion(cm, classes, path) -> None:
    cm = np.asarray(cm)
    fig, ax = plt.subplots(figsize=(1 + 0.6 * len(classes), 1 + 0.6 * len(classes)))
    ax.imshow(cm, cmap="Greys")
    for (i, j), v in np.ndenumerate(cm):
        ax.text(j, i, str(v), ha="center", va="center", color="tab:red", fontsize=8)
    ax.set_xticks(range(len(classes)))
    ax.set_yticks(range(len(classes)))
    ax.set_xticklabels(classes, rotation=45, ha="right", fontsize=8)
    ax.set_yticklabels(classes, fontsize=8)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    fig.tight_layout()
    _save(fig, path)
