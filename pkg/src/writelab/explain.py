"""Exact grouped Shapley attribution of ITE predictions, with beeswarm data
emission (CSV is canonical, SVG is a convenience rendering)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import EstimationError
from .util import derive_seed

MAX_GROUPS = 12

DEFAULT_BACKGROUND_SIZE = 100

BEESWARM_COLUMNS = ("session_id", "confounder", "shap_value", "confounder_raw_value")


@dataclass(frozen=True, eq=False)
class ShapMatrix:
    """Per-session, per-confounder-group Shapley attributions.

    For every row, the attributions plus the baseline reproduce the model
    prediction (efficiency), up to 1e-9.
    """

    session_ids: tuple[str, ...]
    groups: tuple[str, ...]
    values: np.ndarray
    baseline: float
    predictions: np.ndarray

    def __post_init__(self) -> None:
        expected = (len(self.session_ids), len(self.groups))
        if self.values.shape != expected:
            raise EstimationError(
                f"shap matrix shape {self.values.shape} does not match {expected}"
            )
        if self.predictions.shape != (len(self.session_ids),):
            raise EstimationError("predictions must have one entry per session")

    def mean_abs_by_group(self) -> dict[str, float]:
        magnitudes = np.abs(self.values).mean(axis=0)
        return {group: float(mag) for group, mag in zip(self.groups, magnitudes)}


def sample_background(
    features: np.ndarray,
    size: int = DEFAULT_BACKGROUND_SIZE,
    seed: int = 0,
) -> np.ndarray:
    """Fixed-seed row sample used as the marginalization background; all rows
    when the matrix is smaller than the requested size."""
    if size < 1:
        raise EstimationError("background size must be positive")
    n = features.shape[0]
    if n <= size:
        return features.copy()
    rng = np.random.default_rng(derive_seed(seed, "background"))
    indices = np.sort(rng.choice(n, size=size, replace=False))
    return features[indices]


def shapley_attributions(
    ite_model: Callable[[np.ndarray], np.ndarray],
    features: np.ndarray,
    background: np.ndarray,
    grouping: Mapping[str, tuple[int, ...]],
    session_ids: Sequence[str] | None = None,
) -> ShapMatrix:
    """Exact Shapley values over grouped columns.

    The coalition value for a row is the background-mean prediction with the
    coalition's columns taken from the row and the rest from the background
    (interventional marginalization). All 2^#groups coalitions are evaluated,
    so the group count is capped.
    """
    x = np.asarray(features, dtype=float)
    if x.ndim != 2:
        raise EstimationError("feature matrix must be 2-dimensional")
    bg = np.asarray(background, dtype=float)
    if bg.ndim != 2 or bg.shape[1] != x.shape[1]:
        raise EstimationError("background must be 2-dimensional with matching columns")
    if bg.shape[0] < 1:
        raise EstimationError("background must contain at least one row")
    groups = tuple(grouping.keys())
    if len(groups) > MAX_GROUPS:
        raise EstimationError(
            f"exact Shapley enumeration supports at most {MAX_GROUPS} groups, "
            f"got {len(groups)}; use a sampling approximation instead"
        )
    if not groups:
        raise EstimationError("grouping must contain at least one group")
    covered = sorted(idx for indices in grouping.values() for idx in indices)
    if covered != list(range(x.shape[1])):
        raise EstimationError("grouping must partition the feature columns")
    ids = tuple(session_ids) if session_ids is not None else tuple(
        str(i) for i in range(x.shape[0])
    )
    if len(ids) != x.shape[0]:
        raise EstimationError("session ids must match the feature rows")

    n, g = x.shape[0], len(groups)
    m = bg.shape[0]
    full_mask = (1 << g) - 1
    predictions = np.asarray(ite_model(x), dtype=float).reshape(-1)
    baseline = float(np.mean(np.asarray(ite_model(bg), dtype=float)))

    group_columns = [np.array(grouping[name], dtype=int) for name in groups]
    # v[mask] is the per-row coalition value; the empty and full coalitions
    # need no background mixing.
    values_by_mask: dict[int, np.ndarray] = {
        0: np.full(n, baseline),
        full_mask: predictions.copy(),
    }
    tiled_bg = np.tile(bg, (n, 1))
    repeated_rows = np.repeat(x, m, axis=0)
    for mask in range(1, full_mask):
        mixed = tiled_bg.copy()
        for bit, columns in enumerate(group_columns):
            if mask >> bit & 1:
                mixed[:, columns] = repeated_rows[:, columns]
        predicted = np.asarray(ite_model(mixed), dtype=float).reshape(n, m)
        values_by_mask[mask] = predicted.mean(axis=1)

    factorial = [math.factorial(k) for k in range(g + 1)]
    weights = [
        factorial[size] * factorial[g - size - 1] / factorial[g]
        for size in range(g)
    ]
    shap = np.zeros((n, g))
    for mask in range(full_mask + 1):
        size = bin(mask).count("1")
        for bit in range(g):
            if mask >> bit & 1:
                continue
            gain = values_by_mask[mask | (1 << bit)] - values_by_mask[mask]
            shap[:, bit] += weights[size] * gain
    return ShapMatrix(
        session_ids=ids,
        groups=groups,
        values=shap,
        baseline=baseline,
        predictions=predictions,
    )


def emit_beeswarm_data(
    shap: ShapMatrix,
    confounder_raw: Mapping[str, Sequence],
) -> list[tuple[str, str, float, object]]:
    """Long-format rows (session, group, attribution, raw confounder value),
    blocked by group in descending mean-|attribution| order."""
    order = sorted(
        shap.groups,
        key=lambda name: (-shap.mean_abs_by_group()[name], name),
    )
    rows: list[tuple[str, str, float, object]] = []
    for name in order:
        column = shap.groups.index(name)
        raw_values = confounder_raw.get(name)
        for i, session_id in enumerate(shap.session_ids):
            raw = raw_values[i] if raw_values is not None else ""
            rows.append((session_id, name, float(shap.values[i, column]), raw))
    return rows


def _raw_color_fractions(raw_values: list) -> list[float]:
    """Map raw confounder values to [0, 1] for coloring: numeric values by
    min-max position, labels by sorted rank."""
    numeric: list[float] = []
    for value in raw_values:
        try:
            numeric.append(float(value))
        except (TypeError, ValueError):
            ranks = {label: i for i, label in enumerate(sorted(set(map(str, raw_values))))}
            top = max(len(ranks) - 1, 1)
            return [ranks[str(v)] / top for v in raw_values]
    low, high = min(numeric), max(numeric)
    spread = high - low
    if spread == 0:
        return [0.5 for _ in numeric]
    return [(v - low) / spread for v in numeric]


def _color(fraction: float) -> str:
    low_rgb = (0, 139, 251)
    high_rgb = (255, 0, 82)
    mixed = tuple(
        round(low + fraction * (high - low)) for low, high in zip(low_rgb, high_rgb)
    )
    return f"#{mixed[0]:02x}{mixed[1]:02x}{mixed[2]:02x}"


def render_beeswarm_svg(
    shap: ShapMatrix,
    confounder_raw: Mapping[str, Sequence],
    width: int = 640,
    row_height: int = 60,
) -> str:
    """Static SVG rendering of the beeswarm data; byte-stable given inputs."""
    rows = emit_beeswarm_data(shap, confounder_raw)
    order: list[str] = []
    for _, group, _, _ in rows:
        if group not in order:
            order.append(group)
    spread = float(np.abs(shap.values).max()) if shap.values.size else 0.0
    if spread == 0.0:
        spread = 1.0
    margin_left, margin_right, margin_top = 120, 20, 30
    plot_width = width - margin_left - margin_right
    height = margin_top + row_height * len(order) + 20

    def x_pos(value: float) -> float:
        return margin_left + (value + spread) / (2.0 * spread) * plot_width

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{x_pos(0.0):.2f}" y1="{margin_top}" x2="{x_pos(0.0):.2f}" '
        f'y2="{height - 20}" stroke="#999999" stroke-dasharray="4,3"/>',
        f'<text x="{x_pos(0.0):.2f}" y="{margin_top - 10}" font-size="11" '
        f'text-anchor="middle" fill="#333333">0</text>',
    ]
    grouped: dict[str, list[tuple[str, float, object]]] = {name: [] for name in order}
    for session_id, group, value, raw in rows:
        grouped[group].append((session_id, value, raw))
    for band, name in enumerate(order):
        center = margin_top + row_height * band + row_height / 2
        parts.append(
            f'<text x="{margin_left - 10}" y="{center + 4:.2f}" font-size="12" '
            f'text-anchor="end" fill="#333333">{name}</text>'
        )
        entries = grouped[name]
        fractions = _raw_color_fractions([raw for _, _, raw in entries])
        order_in_band = sorted(range(len(entries)), key=lambda i: entries[i][1])
        offsets = {}
        for rank, idx in enumerate(order_in_band):
            step = (rank % 7) - 3
            offsets[idx] = step * 5
        for idx, (session_id, value, _raw) in enumerate(entries):
            cx = x_pos(value)
            cy = center + offsets[idx]
            parts.append(
                f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" '
                f'fill="{_color(fractions[idx])}" fill-opacity="0.8">'
                f"<title>{session_id}: {value:.4f}</title></circle>"
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
