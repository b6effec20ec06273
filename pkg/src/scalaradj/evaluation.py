"""Ranking evaluation: pairwise accuracy, Kendall's tau-b, Spearman's rho.

Gold mild-to-extreme scales are compared against real-valued intensity
scores.  p-acc and tau are micro-averaged over gold pairs across a dataset;
rho is averaged per scale.  Scales on which a correlation is undefined
(zero denominator) are excluded from aggregation and counted, never
zero-filled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MissingDataError, UndefinedMetricError
from .scales import GoldPair, Relation, Scale, ScaleDataset, unordered_pairs


@dataclass(frozen=True)
class ScalePrediction:
    """Real-valued intensity scores for the adjectives of one scale."""

    scale_id: str
    scores: dict[str, float]

    def __post_init__(self):
        for surface, score in self.scores.items():
            if not math.isfinite(score):
                raise ValueError(f"non-finite score for {surface!r}: {score}")

    def score(self, surface: str) -> float:
        try:
            return self.scores[surface]
        except KeyError:
            raise MissingDataError(
                f"prediction {self.scale_id!r} has no score for {surface!r}",
                missing=[surface],
            ) from None


def _check_coverage(gold: Scale, pred: ScalePrediction) -> None:
    absent = [s for s in gold.surfaces if s not in pred.scores]
    if absent:
        raise MissingDataError(
            f"prediction {pred.scale_id!r} missing scores for {absent}",
            missing=absent,
        )


def pairwise_accuracy(gold: Scale, pred: ScalePrediction,
                      tie_eps: float = 0.0) -> float:
    """Fraction of gold unordered pairs the scores get right.

    A LESS pair (a milder than b) is correct iff score(a) < score(b),
    strictly.  A TIE pair is correct iff |score(a) - score(b)| <= tie_eps.
    """
    if tie_eps < 0:
        raise ValueError(f"tie_eps must be >= 0, got {tie_eps}")
    _check_coverage(gold, pred)
    pairs = unordered_pairs(gold)
    if not pairs:
        raise UndefinedMetricError(f"scale {gold.scale_id!r} has no pairs")
    correct = sum(_pair_correct(p, pred, tie_eps) for p in pairs)
    return correct / len(pairs)


def _pair_correct(pair: GoldPair, pred: ScalePrediction, tie_eps: float) -> bool:
    sa = pred.score(pair.a.surface)
    sb = pred.score(pair.b.surface)
    if pair.relation is Relation.TIE:
        return abs(sa - sb) <= tie_eps
    return sa < sb


def _pair_stats(gold: Scale, pred: ScalePrediction) -> tuple[int, int, int, int, int]:
    """(C, D, n0, n1, n2): concordant, discordant, total, gold-tied,
    prediction-tied pair counts over all unordered pairs of the scale."""
    _check_coverage(gold, pred)
    surfaces = gold.surfaces
    levels = [gold.level_of(s) for s in surfaces]
    scores = [pred.scores[s] for s in surfaces]
    c = d = n1 = n2 = 0
    n0 = 0
    for i in range(len(surfaces)):
        for j in range(i + 1, len(surfaces)):
            n0 += 1
            dg = levels[i] - levels[j]
            dp = scores[i] - scores[j]
            if dg == 0:
                n1 += 1
            if dp == 0:
                n2 += 1
            if dg == 0 or dp == 0:
                continue
            if (dg > 0) == (dp > 0):
                c += 1
            else:
                d += 1
    return c, d, n0, n1, n2


def kendall_tau(gold: Scale, pred: ScalePrediction, variant: str = "b") -> float:
    """Kendall correlation between gold level order and predicted scores.

    variant "b" (default) corrects for ties on both sides:
    (C - D) / sqrt((n0 - n1) (n0 - n2)).  variant "a" divides by n0.
    """
    if len(gold) < 2:
        raise UndefinedMetricError(
            f"scale {gold.scale_id!r} has fewer than 2 adjectives"
        )
    c, d, n0, n1, n2 = _pair_stats(gold, pred)
    if variant == "a":
        return (c - d) / n0
    if variant != "b":
        raise ValueError(f"unknown tau variant {variant!r}")
    denom = (n0 - n1) * (n0 - n2)
    if denom == 0:
        side = "gold" if n0 == n1 else "predicted"
        raise UndefinedMetricError(
            f"tau undefined on {gold.scale_id!r}: all {side} values tied"
        )
    return (c - d) / math.sqrt(denom)


def average_ranks(values) -> np.ndarray:
    """1-based ranks; tied values share the mean of their rank range."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # ranks i+1 .. j+1 share their mean
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman_rho(gold: Scale, pred: ScalePrediction) -> float:
    """Pearson correlation of average ranks of gold levels vs scores."""
    if len(gold) < 2:
        raise UndefinedMetricError(
            f"scale {gold.scale_id!r} has fewer than 2 adjectives"
        )
    _check_coverage(gold, pred)
    surfaces = gold.surfaces
    rg = average_ranks([gold.level_of(s) for s in surfaces])
    rp = average_ranks([pred.scores[s] for s in surfaces])
    rg = rg - rg.mean()
    rp = rp - rp.mean()
    vg = float(np.dot(rg, rg))
    vp = float(np.dot(rp, rp))
    if vg == 0.0 or vp == 0.0:
        side = "gold" if vg == 0.0 else "predicted"
        raise UndefinedMetricError(
            f"rho undefined on {gold.scale_id!r}: zero {side} variance"
        )
    return float(np.dot(rg, rp) / math.sqrt(vg * vp))


@dataclass(frozen=True)
class ScaleMetrics:
    scale_id: str
    n_pairs: int
    p_acc: float | None
    tau: float | None
    rho: float | None


@dataclass(frozen=True)
class AggregateMetrics:
    """Dataset-level metrics for one (method, layer, mode) cell.

    p_acc and tau are micro-averaged over gold pairs (tau from pooled pair
    statistics); rho_avg is the mean of per-scale rho over the scales where
    it is defined.  tau_macro is the per-scale mean, for transparency.
    """

    n_scales: int
    n_pairs: int
    p_acc: float
    tau: float | None
    tau_macro: float | None
    rho_avg: float | None
    undefined_tau: int
    undefined_rho: int
    per_scale: tuple[ScaleMetrics, ...]


def evaluate_scale(gold: Scale, pred: ScalePrediction,
                   tie_eps: float = 0.0) -> ScaleMetrics:
    pairs = unordered_pairs(gold)
    try:
        p_acc = pairwise_accuracy(gold, pred, tie_eps)
    except UndefinedMetricError:
        p_acc = None
    try:
        tau = kendall_tau(gold, pred)
    except UndefinedMetricError:
        tau = None
    try:
        rho = spearman_rho(gold, pred)
    except UndefinedMetricError:
        rho = None
    return ScaleMetrics(
        scale_id=gold.scale_id,
        n_pairs=len(pairs),
        p_acc=p_acc,
        tau=tau,
        rho=rho,
    )


def aggregate(ds: ScaleDataset, preds, tie_eps: float = 0.0) -> AggregateMetrics:
    """Micro p-acc and tau plus mean per-scale rho over one dataset."""
    by_id = {p.scale_id: p for p in preds}
    absent = [s.scale_id for s in ds.scales if s.scale_id not in by_id]
    if absent:
        raise MissingDataError(
            f"no prediction for scale(s) {absent}", missing=absent
        )

    per_scale = []
    correct_pairs = 0.0
    total_pairs = 0
    tc = td = tn0 = tn1 = tn2 = 0
    for scale in ds.scales:
        pred = by_id[scale.scale_id]
        sm = evaluate_scale(scale, pred, tie_eps)
        per_scale.append(sm)
        pairs = unordered_pairs(scale)
        correct_pairs += sum(_pair_correct(p, pred, tie_eps) for p in pairs)
        total_pairs += len(pairs)
        c, d, n0, n1, n2 = _pair_stats(scale, pred)
        tc, td = tc + c, td + d
        tn0, tn1, tn2 = tn0 + n0, tn1 + n1, tn2 + n2

    if total_pairs == 0:
        raise UndefinedMetricError(f"dataset {ds.name!r} has no gold pairs")
    denom = (tn0 - tn1) * (tn0 - tn2)
    tau_micro = (tc - td) / math.sqrt(denom) if denom > 0 else None

    taus = [sm.tau for sm in per_scale if sm.tau is not None]
    rhos = [sm.rho for sm in per_scale if sm.rho is not None]
    return AggregateMetrics(
        n_scales=len(ds.scales),
        n_pairs=total_pairs,
        p_acc=correct_pairs / total_pairs,
        tau=tau_micro,
        tau_macro=sum(taus) / len(taus) if taus else None,
        rho_avg=sum(rhos) / len(rhos) if rhos else None,
        undefined_tau=sum(1 for sm in per_scale if sm.tau is None),
        undefined_rho=sum(1 for sm in per_scale if sm.rho is None),
        per_scale=tuple(per_scale),
    )


METRIC_NAMES = ("p_acc", "tau", "rho_avg")


@dataclass
class RankingReport:
    """Aggregate metrics across methods, layers, and pooling modes.

    Cells are keyed by (method, layer, mode); best_layer picks, per metric
    and per (method, mode), the layer with the highest value, breaking ties
    toward the lowest layer index.
    """

    dataset: str
    tie_eps: float = 0.0
    cells: dict[tuple[str, int, str], AggregateMetrics] = field(default_factory=dict)

    def add(self, method: str, layer: int, mode: str,
            metrics: AggregateMetrics) -> None:
        key = (method, layer, mode)
        if key in self.cells:
            raise ValueError(f"duplicate report cell {key}")
        self.cells[key] = metrics

    def methods(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted({(m, md) for (m, _, md) in self.cells}))

    def layers(self, method: str, mode: str) -> tuple[int, ...]:
        return tuple(
            sorted(l for (m, l, md) in self.cells if (m, md) == (method, mode))
        )

    def best_layer(self, method: str, mode: str, metric: str):
        """(layer, value) with the best ``metric``; ties go to the lowest
        layer; None when the metric is undefined everywhere."""
        if metric not in METRIC_NAMES:
            raise ValueError(f"unknown metric {metric!r}")
        best = None
        for layer in self.layers(method, mode):
            value = getattr(self.cells[(method, layer, mode)], metric)
            if value is None:
                continue
            if best is None or value > best[1]:
                best = (layer, value)
        return best

    def to_csv(self) -> str:
        lines = [
            "method,mode,layer,p_acc,tau,tau_macro,rho_avg,"
            "n_scales,n_pairs,undefined_tau,undefined_rho"
        ]
        for (method, layer, mode) in sorted(self.cells):
            m = self.cells[(method, layer, mode)]
            lines.append(
                f"{method},{mode},{layer},{_fmt(m.p_acc)},{_fmt(m.tau)},"
                f"{_fmt(m.tau_macro)},{_fmt(m.rho_avg)},{m.n_scales},"
                f"{m.n_pairs},{m.undefined_tau},{m.undefined_rho}"
            )
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        """Best-layer summary table; subscripts mark the winning layer."""
        lines = [
            f"## Ranking results: {self.dataset}",
            "",
            "| method | mode | p-acc | tau | rho_avg |",
            "| --- | --- | --- | --- | --- |",
        ]
        for method, mode in self.methods():
            row = [method, mode]
            for metric in METRIC_NAMES:
                best = self.best_layer(method, mode, metric)
                if best is None:
                    row.append("undef")
                elif mode == "none":
                    # table-lookup methods have no layer axis
                    row.append(f"{best[1]:.3f}")
                else:
                    row.append(f"{best[1]:.3f}_{best[0]}")
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")
        lines.append(
            f"Micro-averaged over gold pairs (tie_eps={self.tie_eps:g}); "
            "rho_avg is the mean per-scale Spearman. Subscripts denote the "
            "layer achieving the value."
        )
        return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    return "" if value is None else f"{value:.6f}"
