"""Renderers for the four figure kinds exported by the experiment pipeline.

Everything is read-only over the exported metrics.csv / predictions.jsonl
files; no physics or model quantities are recomputed here.  Quartile lines
come from the exported p25/p50/p75 pseudo-rows, and every renderer returns
the counts of what it drew so tests can reconcile a figure against the
metrics rows without parsing image bytes.  Rendering uses no random state,
so rerunning a spec plots identical data.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("circle", "param-scatter", "violin", "graph-pair")
METRICS_COLUMNS = ("experiment", "sample_id", "method", "metric", "value")
_QUARTILE_TAGS = ("p25", "p50", "p75")

_METHOD_COLORS = {
    "translator": "tab:blue",
    "ntk": "tab:orange",
    "random": "tab:green",
    "truth": "tab:gray",
}


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    metrics: Path
    output: Path
    title: str
    experiment: str
    seed: int
    predictions: Path | None = None
    ntk_predictions: Path | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind '{self.kind}'")


def load_figure_specs(config_path) -> list[FigureSpec]:
    """Figure specs from a pipeline figures.json; paths resolve relative
    to the config file's directory."""
    config_path = Path(config_path)
    with open(config_path, encoding="utf-8") as f:
        cfg = json.load(f)
    for key in ("experiment", "seed", "metrics", "figures"):
        if key not in cfg:
            raise ValueError(f"{config_path}: missing key '{key}'")
    base = config_path.parent
    preds = base / cfg["predictions"] if "predictions" in cfg else None
    ntk = base / cfg["ntk_predictions"] if "ntk_predictions" in cfg else None
    specs = []
    for entry in cfg["figures"]:
        specs.append(FigureSpec(
            kind=entry["kind"],
            metrics=base / cfg["metrics"],
            output=base / entry["output"],
            title=entry.get("title", cfg["experiment"]),
            experiment=cfg["experiment"],
            seed=int(cfg["seed"]),
            predictions=preds,
            ntk_predictions=ntk,
        ))
    return specs


def read_metrics(path) -> list[dict]:
    """Metric rows with float values; header and non-emptiness enforced."""
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        names = reader.fieldnames or ()
        for col in METRICS_COLUMNS:
            if col not in names:
                raise ValueError(f"{path}: missing column '{col}'")
        rows = [dict(r, value=float(r["value"])) for r in reader]
    if not rows:
        raise ValueError(f"{path}: no metric rows")
    return rows


def read_predictions(path, required: tuple[str, ...]) -> list[dict]:
    if path is None:
        raise ValueError(f"no prediction file given (need {required})")
    with open(path, encoding="utf-8") as f:
        rows = [json.loads(line) for line in f if line.strip()]
    if not rows:
        raise ValueError(f"{path}: no prediction rows")
    for row in rows:
        for col in required:
            if col not in row:
                raise ValueError(f"{path}: missing column '{col}'")
    return rows


def _caption(spec: FigureSpec) -> str:
    return f"experiment {spec.experiment}, seed {spec.seed}"


def _finish(fig, spec: FigureSpec) -> str:
    caption = _caption(spec)
    fig.text(0.5, 0.01, caption, ha="center", fontsize=8)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)
    return caption


def _sample_rows(rows: list[dict]) -> list[dict]:
    return [r for r in rows if not r["sample_id"].endswith(_QUARTILE_TAGS)]


def _prefix(sample_id: str) -> str:
    return sample_id.split("/")[0] + "/" if "/" in sample_id else ""


def render(spec: FigureSpec) -> dict:
    """Render one figure; returns a summary of the plotted data."""
    metrics = read_metrics(spec.metrics)  # empty metrics fail before drawing
    fn = {"circle": _render_circle, "param-scatter": _render_param_scatter,
          "violin": _render_violin, "graph-pair": _render_graph_pair}[spec.kind]
    return fn(spec, metrics)


def _render_circle(spec: FigureSpec, metrics: list[dict]) -> dict:
    preds = read_predictions(spec.predictions, ("pred_xx", "pred_z", "theta"))
    fig, ax = plt.subplots(figsize=(4.8, 4.8), constrained_layout=True)
    t = np.linspace(0.0, 2.0 * np.pi, 400)
    ax.plot(-np.cos(t), -np.sin(t), color="0.75", lw=1.0,
            label="ground-state locus")
    thetas = np.array([r["theta"] for r in preds])
    ax.scatter(-np.cos(thetas), -np.sin(thetas), marker="o", s=36,
               facecolors="none", edgecolors="k", label="truth")
    ax.scatter([r["pred_xx"] for r in preds], [r["pred_z"] for r in preds],
               marker="x", s=30, color=_METHOD_COLORS["translator"],
               label="reconstructed")
    ax.set_xlabel(r"$\langle X_1 X_2 \rangle$")
    ax.set_ylabel(r"$\langle Z_1 \rangle$")
    ax.set_aspect("equal")
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title(spec.title)
    caption = _finish(fig, spec)
    return {"kind": spec.kind, "output": str(spec.output),
            "n_points": len(preds), "caption": caption}


def _render_param_scatter(spec: FigureSpec, metrics: list[dict]) -> dict:
    preds = read_predictions(spec.predictions, ("pred_params", "true_params"))
    n_series = len(preds[0]["true_params"])
    fig, ax = plt.subplots(figsize=(4.8, 4.8), constrained_layout=True)
    lims = [np.inf, -np.inf]
    n_points = 0
    for k in range(n_series):
        true_k = [r["true_params"][k] for r in preds]
        pred_k = [r["pred_params"][k] for r in preds]
        ax.scatter(true_k, pred_k, s=22, alpha=0.8, label=f"coefficient {k}")
        lims[0] = min(lims[0], min(true_k), min(pred_k))
        lims[1] = max(lims[1], max(true_k), max(pred_k))
        n_points += len(true_k)
    pad = 0.05 * (lims[1] - lims[0] or 1.0)
    lo, hi = lims[0] - pad, lims[1] + pad
    ax.plot([lo, hi], [lo, hi], "k--", lw=0.8)
    ax.set_xlim(lo, hi)
    ax.set_ylim(lo, hi)
    ax.set_xlabel("true coefficient")
    ax.set_ylabel("predicted coefficient")
    ax.legend(fontsize=8)
    ax.set_title(spec.title)
    caption = _finish(fig, spec)
    return {"kind": spec.kind, "output": str(spec.output),
            "n_points": n_points, "n_series": n_series, "caption": caption}


def _violin_metric(metrics: list[dict]) -> str:
    counts: dict[str, int] = {}
    for r in _sample_rows(metrics):
        if r["metric"] != "nll":
            counts[r["metric"]] = counts.get(r["metric"], 0) + 1
    if not counts:
        raise ValueError("no per-sample metric rows to plot")
    return max(counts, key=counts.get)


def _render_violin(spec: FigureSpec, metrics: list[dict]) -> dict:
    metric = _violin_metric(metrics)
    rows = [r for r in metrics if r["metric"] == metric]
    groups: dict[str, list[float]] = {}
    for r in _sample_rows(rows):
        groups.setdefault(_prefix(r["sample_id"]) + r["method"], []).append(
            r["value"])
    quartiles: dict[str, list[float]] = {}
    for tag in _QUARTILE_TAGS:
        for r in rows:
            if r["sample_id"].endswith(tag):
                label = _prefix(r["sample_id"]) + r["method"]
                quartiles.setdefault(label, []).append(r["value"])

    labels = sorted(groups)
    fig, ax = plt.subplots(figsize=(1.4 + 1.2 * len(labels), 4.2),
                           constrained_layout=True)
    for pos, label in enumerate(labels):
        vals = groups[label]
        method = label.split("/")[-1]
        color = _METHOD_COLORS.get(method, "tab:purple")
        parts = ax.violinplot([vals], positions=[pos], widths=0.7,
                              showextrema=False)
        for body in parts["bodies"]:
            body.set_facecolor(color)
            body.set_alpha(0.35)
        # strip points at deterministic offsets; no jitter rng
        offs = np.linspace(-0.12, 0.12, len(vals))
        ax.scatter(pos + offs, vals, s=9, color=color, alpha=0.8, zorder=3)
        for q in quartiles.get(label, ()):
            ax.hlines(q, pos - 0.3, pos + 0.3, colors=color, linestyles="--",
                      lw=0.9, zorder=2)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel(metric)
    ax.set_title(spec.title)
    caption = _finish(fig, spec)
    return {"kind": spec.kind, "output": str(spec.output), "metric": metric,
            "series": {k: len(v) for k, v in groups.items()},
            "quartiles": quartiles, "caption": caption}


def _draw_graph(ax, edges, weights, rows, cols, title):
    xy = np.array([(s % cols, -(s // cols)) for s in range(rows * cols)],
                  dtype=float)
    norm = matplotlib.colors.Normalize(vmin=0.0, vmax=max(2.0, max(weights)))
    cmap = matplotlib.colormaps["viridis"]
    for (i, j), w in zip(edges, weights):
        ax.plot(xy[[i, j], 0], xy[[i, j], 1], color=cmap(norm(w)),
                lw=0.8 + 2.6 * norm(w), zorder=1)
    ax.scatter(xy[:, 0], xy[:, 1], s=110, color="0.15", zorder=2)
    for s in range(rows * cols):
        ax.annotate(str(s), xy[s], color="w", ha="center", va="center",
                    fontsize=6, zorder=3)
    ax.set_title(title, fontsize=8)
    ax.set_aspect("equal")
    ax.axis("off")


def _render_graph_pair(spec: FigureSpec, metrics: list[dict],
                       max_records: int = 4) -> dict:
    preds = read_predictions(
        spec.predictions,
        ("sample_id", "edges", "rows", "cols", "pred_params", "true_params"))
    preds = [r for r in preds if r.get("method", "translator") == "translator"]
    drawn = preds[:max_records]
    fig, axes = plt.subplots(2, len(drawn),
                             figsize=(2.1 * len(drawn) + 0.6, 4.6),
                             constrained_layout=True, squeeze=False)
    for k, row in enumerate(drawn):
        edges = [tuple(e) for e in row["edges"]]
        _draw_graph(axes[0][k], edges, row["true_params"], row["rows"],
                    row["cols"], f"{row['sample_id']} true")
        _draw_graph(axes[1][k], edges, row["pred_params"], row["rows"],
                    row["cols"], f"{row['sample_id']} predicted")
    fig.suptitle(spec.title, fontsize=10)
    caption = _finish(fig, spec)
    return {"kind": spec.kind, "output": str(spec.output),
            "n_records_drawn": len(drawn), "n_records_available": len(preds),
            "n_edges": len(drawn[0]["edges"]), "caption": caption}
