"""Coefficient-of-variation profiling over an alternative grouping axis.

Indicators whose prevalence varies strongly across the alternative grouping
(e.g. political-party support) characterize only part of the population and
are candidates for exclusion from the stress index.

Two CV estimators are provided. ``sample`` divides the sample standard
deviation (ddof=1) by the mean. ``unnormalized`` skips the 1/(L-1)
normalization, i.e. sqrt of the raw sum of squared deviations over the
mean; it is kept because published reference tables for the bundled
dataset are closer to this variant.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

ESTIMATORS = ("sample", "unnormalized")


class VariationError(ValueError):
    """Raised for invalid grouped tables or undefined CV inputs."""


@dataclass(frozen=True)
class GroupedIndicatorTable:
    """n indicators x L groups matrix of prevalence rates.

    ``overall`` optionally carries a whole-population column as metadata; it
    never enters CV computation.
    """

    indicator_ids: tuple[int, ...]
    groups: tuple[str, ...]
    values: np.ndarray  # (n, L)
    overall: tuple[float, ...] | None = None

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.shape != (len(self.indicator_ids), len(self.groups)):
            raise VariationError(
                f"values shape {arr.shape} != "
                f"({len(self.indicator_ids)}, {len(self.groups)})"
            )
        if len(self.groups) < 2:
            raise VariationError("need at least 2 groups")
        if not np.isfinite(arr).all() or (arr < 0).any():
            raise VariationError("values must be finite and >= 0")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)


@dataclass
class VariationProfile:
    """Per-indicator CV scores and the resulting ranking.

    ``ranking`` is descending by the selected estimator's score, ties broken
    by ascending indicator id. Indicators whose CV is undefined (mean <= 0)
    are listed in ``errors`` and omitted from the ranking.
    """

    estimator: str
    cv_sample: dict[int, float]
    cv_unnormalized: dict[int, float]
    ranking: tuple[int, ...]
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def selected(self) -> dict[int, float]:
        return self.cv_sample if self.estimator == "sample" else self.cv_unnormalized

    @classmethod
    def from_scores(cls, scores: Mapping[int, float], estimator: str = "sample"):
        """Build a profile from externally supplied CV scores.

        Useful for ranking published CV columns that cannot be recomputed.
        """
        scores = {int(k): float(v) for k, v in scores.items()}
        return cls(
            estimator=estimator,
            cv_sample=scores if estimator == "sample" else {},
            cv_unnormalized=scores if estimator == "unnormalized" else {},
            ranking=rank_by_score(scores),
        )


def coefficient_of_variation(values: Sequence[float], estimator: str = "sample") -> float:
    """CV of a value vector across groups.

    ``sample``: sqrt(sum (x - mean)^2 / (L - 1)) / mean.
    ``unnormalized``: sqrt(sum (x - mean)^2) / mean.
    """
    if estimator not in ESTIMATORS:
        raise VariationError(f"unknown estimator {estimator!r}")
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise VariationError("need at least 2 values")
    mean = float(x.mean())
    if mean <= 0.0:
        raise VariationError(f"mean {mean} <= 0, CV undefined")
    ss = float(((x - mean) ** 2).sum())
    if estimator == "sample":
        ss /= x.size - 1
    return math.sqrt(ss) / mean


def rank_by_score(scores: Mapping[int, float]) -> tuple[int, ...]:
    """Indicator ids descending by score, ties broken by ascending id."""
    return tuple(sorted(scores, key=lambda i: (-scores[i], i)))


def variation_table(
    table: GroupedIndicatorTable, estimator: str = "sample"
) -> VariationProfile:
    """CV per indicator over the group columns, both estimators, ranked."""
    if estimator not in ESTIMATORS:
        raise VariationError(f"unknown estimator {estimator!r}")
    cv_sample: dict[int, float] = {}
    cv_unnorm: dict[int, float] = {}
    errors: list[tuple[int, str]] = []
    for idx, ind_id in enumerate(table.indicator_ids):
        row = table.values[idx]
        try:
            cv_sample[ind_id] = coefficient_of_variation(row, "sample")
            cv_unnorm[ind_id] = coefficient_of_variation(row, "unnormalized")
        except VariationError as exc:
            errors.append((ind_id, str(exc)))
    selected = cv_sample if estimator == "sample" else cv_unnorm
    return VariationProfile(
        estimator=estimator,
        cv_sample=cv_sample,
        cv_unnormalized=cv_unnorm,
        ranking=rank_by_score(selected),
        errors=errors,
    )


def flag_exclusions(profile: VariationProfile, policy: str) -> set[int]:
    """Indicator ids to exclude under a flagging policy.

    ``policy`` is ``topk:K`` (K highest-ranked ids) or ``threshold:T``
    (all ids with CV strictly above T).
    """
    kind, _, arg = policy.partition(":")
    if kind == "topk":
        try:
            k = int(arg)
        except ValueError:
            raise VariationError(f"bad topk policy {policy!r}") from None
        if k < 0 or k > len(profile.ranking):
            raise VariationError(
                f"topk k={k} outside [0, {len(profile.ranking)}]"
            )
        return set(profile.ranking[:k])
    if kind == "threshold":
        try:
            t = float(arg)
        except ValueError:
            raise VariationError(f"bad threshold policy {policy!r}") from None
        if t < 0:
            raise VariationError(f"threshold t={t} must be >= 0")
        scores = profile.selected
        return {i for i in profile.ranking if scores[i] > t}
    raise VariationError(f"unknown flag policy {policy!r}")


def parse_grouped_table(csv_text: str) -> GroupedIndicatorTable:
    """Parse ``indicator_id,group,value`` CSV into a grouped table.

    Ordering of indicators and groups follows first appearance; the table
    must be dense.
    """
    lines = [
        ln for ln in csv_text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")
    ]
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise VariationError("empty input") from None
    if tuple(h.strip() for h in header) != ("indicator_id", "group", "value"):
        raise VariationError(f"malformed header {header!r}")
    cells: dict[tuple[int, str], float] = {}
    ids: list[int] = []
    groups: list[str] = []
    for row in reader:
        if len(row) != 3:
            raise VariationError(f"expected 3 fields, got {row!r}")
        try:
            ind_id = int(row[0])
            value = float(row[2])
        except ValueError:
            raise VariationError(f"bad row {row!r}") from None
        group = row[1].strip()
        if ind_id not in ids:
            ids.append(ind_id)
        if group not in groups:
            groups.append(group)
        key = (ind_id, group)
        if key in cells:
            raise VariationError(f"duplicate cell {key}")
        cells[key] = value
    try:
        values = np.array([[cells[(i, g)] for g in groups] for i in ids])
    except KeyError as exc:
        raise VariationError(f"missing cell {exc.args[0]}") from None
    return GroupedIndicatorTable(
        indicator_ids=tuple(ids), groups=tuple(groups), values=values
    )


def profile_to_csv(profile: VariationProfile, flagged: Iterable[int] = ()) -> str:
    """Render ``indicator_id,cv_sample,cv_unnormalized,rank,flagged`` CSV."""
    flagged = set(flagged)
    rank_of = {ind_id: pos + 1 for pos, ind_id in enumerate(profile.ranking)}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["indicator_id", "cv_sample", "cv_unnormalized", "rank", "flagged"])
    for ind_id in profile.ranking:
        writer.writerow(
            [
                ind_id,
                _fmt(profile.cv_sample.get(ind_id)),
                _fmt(profile.cv_unnormalized.get(ind_id)),
                rank_of[ind_id],
                int(ind_id in flagged),
            ]
        )
    return buf.getvalue()


def _fmt(v: float | None) -> str:
    return "" if v is None else f"{v:.6f}"
