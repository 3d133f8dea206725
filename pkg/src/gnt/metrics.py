"""Proportion vectors and response metrics over classified slots.

Breakdowns computed from label counts use exact rational arithmetic, so the
normalisation (m + f + n = 1) and delta-closure identities hold exactly;
breakdowns rebuilt from rounded reference proportions live in floats and are
checked against the reporting tolerances by the callers instead.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .classify import GenderLabel, SlotScore
from .errors import EmptySelection, GntError, InvalidThreshold
from .suite import GenderCondition, StereotypeCondition, TemplateFamily, TestInstance

DEFAULT_SIGNIFICANCE_THRESHOLD = 0.07

_STRATEGY_LABELS = (
    GenderLabel.N1_COMMON_FORM,
    GenderLabel.N2_NEUTER_CASE,
    GenderLabel.N3_ALT_PART_OF_SPEECH,
    GenderLabel.N4_SOURCE_COPY,
    GenderLabel.N5_ALT_MORPHOLOGY,
)


@dataclass(frozen=True)
class StrategyBreakdown:
    """Masculine/feminine/neutral proportions over classified slots.

    `count` is the denominator (non-Unmatched slots); `u_count` slots were
    unmatched and excluded, with `u` their share of the full selection.
    The per-strategy split n1..n5 is None when unknown (e.g. breakdowns
    rebuilt from a rounded reference (M, F, N) triplet).
    """

    m: Fraction | float
    f: Fraction | float
    n: Fraction | float
    n1: Fraction | float | None = None
    n2: Fraction | float | None = None
    n3: Fraction | float | None = None
    n4: Fraction | float | None = None
    n5: Fraction | float | None = None
    u: Fraction | float = 0
    count: int | None = None
    u_count: int = 0

    @property
    def is_empty(self) -> bool:
        return self.count == 0

    @property
    def strategy_vector(self) -> tuple | None:
        parts = (self.n1, self.n2, self.n3, self.n4, self.n5)
        if any(p is None for p in parts):
            return None
        return parts

    @classmethod
    def from_label_counts(cls, labels: Mapping[GenderLabel, int]) -> "StrategyBreakdown":
        u_count = labels.get(GenderLabel.UNMATCHED, 0)
        classified = sum(count for label, count in labels.items() if label is not GenderLabel.UNMATCHED)
        total = classified + u_count
        if classified == 0:
            return cls(m=0, f=0, n=0, u=Fraction(u_count, total) if total else 0, count=0, u_count=u_count)

        def share(label: GenderLabel) -> Fraction:
            return Fraction(labels.get(label, 0), classified)

        strategies = tuple(share(label) for label in _STRATEGY_LABELS)
        return cls(
            m=share(GenderLabel.MASCULINE),
            f=share(GenderLabel.FEMININE),
            n=sum(strategies),
            n1=strategies[0],
            n2=strategies[1],
            n3=strategies[2],
            n4=strategies[3],
            n5=strategies[4],
            u=Fraction(u_count, total),
            count=classified,
            u_count=u_count,
        )

    @classmethod
    def from_proportions(
        cls,
        m: float,
        f: float,
        n: float,
        strategies: Sequence[float] | None = None,
        count: int | None = None,
        u_count: int = 0,
    ) -> "StrategyBreakdown":
        """Rebuild a breakdown from (rounded) reference proportions."""
        if abs((m + f + n) - 1) > 0.05:
            raise ValueError(f"proportions must sum to ~1, got {m + f + n}")
        detail: Sequence = (None,) * 5
        if strategies is not None:
            if len(strategies) != 5:
                raise ValueError("strategies must carry exactly n1..n5")
            detail = tuple(strategies)
        return cls(m=m, f=f, n=n, n1=detail[0], n2=detail[1], n3=detail[2], n4=detail[3], n5=detail[4],
                   u=0, count=count, u_count=u_count)


def aggregate(
    scores: Iterable[SlotScore],
    suite: Iterable[TestInstance] | Mapping[str, TestInstance],
    where: Callable[[TemplateFamily, GenderCondition, StereotypeCondition], bool] = lambda *_: True,
) -> StrategyBreakdown:
    """Aggregate the scores whose slot conditions pass the filter.

    Proportions are taken over classified (non-Unmatched) slots; unmatched
    slots are reported separately via u/u_count. Raises EmptySelection when
    no score passes the filter.
    """
    index = suite if isinstance(suite, Mapping) else {inst.id: inst for inst in suite}
    labels: Counter = Counter()
    selected = 0
    for score in scores:
        instance = index.get(score.instance_id)
        if instance is None:
            # data mismatch, not an empty filter: must not be swallowed by
            # section-skipping EmptySelection handlers
            raise GntError(f"score references unknown instance {score.instance_id!r}")
        slot = instance.slots[score.slot_index]
        if where(instance.family, slot.gender, slot.stereotype):
            selected += 1
            labels[score.label] += 1
    if selected == 0:
        raise EmptySelection("no slot passed the aggregation filter")
    return StrategyBreakdown.from_label_counts(labels)


def flag_significance(delta, threshold) -> bool:
    """True iff |delta| reaches the threshold (boundary included)."""
    if threshold < 0:
        raise InvalidThreshold(f"threshold must be non-negative, got {threshold}")
    return abs(delta) >= threshold


@dataclass(frozen=True)
class ResponseReport:
    """Paired determined/ambiguous comparison with its deltas."""

    det: StrategyBreakdown
    amb: StrategyBreakdown
    delta_m: Fraction | float
    delta_f: Fraction | float
    delta_n: Fraction | float
    delta_ni: tuple | None
    significant_m: bool
    significant_n: bool
    threshold: float


def paired_response(
    det: StrategyBreakdown,
    amb: StrategyBreakdown,
    threshold: float = DEFAULT_SIGNIFICANCE_THRESHOLD,
) -> ResponseReport:
    """Deltas of the ambiguous condition relative to the determined one."""
    if det.is_empty or amb.is_empty:
        raise EmptySelection("paired_response needs two non-empty breakdowns")
    delta_ni = None
    det_detail, amb_detail = det.strategy_vector, amb.strategy_vector
    if det_detail is not None and amb_detail is not None:
        delta_ni = tuple(a - d for a, d in zip(amb_detail, det_detail))
    return ResponseReport(
        det=det,
        amb=amb,
        delta_m=amb.m - det.m,
        delta_f=amb.f - det.f,
        delta_n=amb.n - det.n,
        delta_ni=delta_ni,
        significant_m=flag_significance(amb.m - det.m, threshold),
        significant_n=flag_significance(amb.n - det.n, threshold),
        threshold=threshold,
    )


def _mean(values: Sequence):
    return sum(values) / len(values)


def macro_average_breakdowns(breakdowns: Mapping[str, StrategyBreakdown]) -> StrategyBreakdown:
    """Unweighted field-wise mean over per-family breakdowns; counts are summed."""
    if not breakdowns:
        raise EmptySelection("macro average needs at least one breakdown")
    members = list(breakdowns.values())
    if any(b.is_empty for b in members):
        raise EmptySelection("macro average over an empty breakdown")
    details = [b.strategy_vector for b in members]
    strategies = None
    if all(d is not None for d in details):
        strategies = tuple(_mean([d[i] for d in details]) for i in range(5))
    counts = [b.count for b in members]
    return StrategyBreakdown(
        m=_mean([b.m for b in members]),
        f=_mean([b.f for b in members]),
        n=_mean([b.n for b in members]),
        n1=strategies[0] if strategies else None,
        n2=strategies[1] if strategies else None,
        n3=strategies[2] if strategies else None,
        n4=strategies[3] if strategies else None,
        n5=strategies[4] if strategies else None,
        u=_mean([b.u for b in members]),
        count=sum(counts) if all(c is not None for c in counts) else None,
        u_count=sum(b.u_count for b in members),
    )


def macro_average(reports: Mapping[str, ResponseReport]) -> ResponseReport:
    """Unweighted mean of per-family response reports (one entry per family)."""
    if not reports:
        raise EmptySelection("macro average needs at least one report")
    members = list(reports.values())
    thresholds = {r.threshold for r in members}
    if len(thresholds) != 1:
        raise ValueError(f"reports mix significance thresholds: {sorted(thresholds)}")
    det = macro_average_breakdowns({key: r.det for key, r in reports.items()})
    amb = macro_average_breakdowns({key: r.amb for key, r in reports.items()})
    return paired_response(det, amb, threshold=thresholds.pop())


@dataclass(frozen=True)
class StereotypeReport:
    """Average shift of binary gender (and neutrality) under stereotype cues."""

    neutral: StrategyBreakdown
    stereo_m: StrategyBreakdown
    stereo_f: StrategyBreakdown
    delta_g_avg: Fraction | float
    delta_n_avg: Fraction | float


def compute_stereotype_effect(
    neutral: StrategyBreakdown,
    stereo_m: StrategyBreakdown,
    stereo_f: StrategyBreakdown,
) -> StereotypeReport:
    """Mean pull of each cue toward its own gender, and the drift of N.

    delta_g_avg averages the masculine gain under masculine cues with the
    feminine gain under feminine cues; delta_n_avg averages the change of the
    neutral share under both cues.
    """
    for breakdown in (neutral, stereo_m, stereo_f):
        if breakdown.is_empty:
            raise EmptySelection("stereotype effect needs three non-empty breakdowns")
    delta_g = ((stereo_m.m - neutral.m) + (stereo_f.f - neutral.f)) / 2
    delta_n = ((stereo_m.n - neutral.n) + (stereo_f.n - neutral.n)) / 2
    return StereotypeReport(neutral, stereo_m, stereo_f, delta_g, delta_n)
