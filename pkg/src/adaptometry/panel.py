"""Panel data model: periods x units x indicators prevalence tables.

The panel is the common input of every downstream computation. It is loaded
from long-format CSV (one row per cell) and kept as a dense, immutable
3-axis array.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

CSV_HEADER = ("period", "unit", "indicator_id", "indicator_name", "value")


class PanelError(ValueError):
    """Raised when panel input or an operation precondition is invalid."""


@dataclass(frozen=True)
class Indicator:
    id: int
    name: str


@dataclass(frozen=True)
class IndicatorPanel:
    """Dense prevalence table indexed (period, unit, indicator).

    Values are percentages in [0, 100]. The object is immutable; all
    operations return new panels or views.
    """

    periods: tuple[str, ...]
    units: tuple[str, ...]
    indicators: tuple[Indicator, ...]
    values: np.ndarray  # shape (n_periods, n_units, n_indicators)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        expected = (len(self.periods), len(self.units), len(self.indicators))
        if arr.shape != expected:
            raise PanelError(f"values shape {arr.shape} != {expected}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n_periods(self) -> int:
        return len(self.periods)

    @property
    def n_units(self) -> int:
        return len(self.units)

    @property
    def n_indicators(self) -> int:
        return len(self.indicators)

    @property
    def indicator_ids(self) -> tuple[int, ...]:
        return tuple(ind.id for ind in self.indicators)


@dataclass(frozen=True)
class PeriodSlice:
    """Units x indicators matrix for one period."""

    period: str
    units: tuple[str, ...]
    indicator_ids: tuple[int, ...]
    matrix: np.ndarray  # shape (n_units, n_indicators)

    @property
    def n_units(self) -> int:
        return len(self.units)

    @property
    def n_indicators(self) -> int:
        return len(self.indicator_ids)


@dataclass
class ValidationReport:
    errors: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def parse_panel(csv_text: str) -> IndicatorPanel:
    """Parse long-format panel CSV into a dense IndicatorPanel.

    Expected header: ``period,unit,indicator_id,indicator_name,value``.
    Lines starting with ``#`` are ignored. Ordering of periods, units and
    indicators follows first appearance. Every (period, unit, indicator)
    combination must appear exactly once.
    """
    rows = iter(_numbered_rows(csv_text))
    try:
        _, header = next(rows)
    except StopIteration:
        raise PanelError("empty input") from None
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise PanelError(
            f"malformed header {header!r}, expected {','.join(CSV_HEADER)}"
        )

    periods: list[str] = []
    units: list[str] = []
    indicators: dict[int, str] = {}
    cells: dict[tuple[str, str, int], float] = {}
    for lineno, row in rows:
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) != 5:
            raise PanelError(f"row {lineno}: expected 5 fields, got {len(row)}")
        period, unit, raw_id, name, raw_value = (f.strip() for f in row)
        try:
            ind_id = int(raw_id)
        except ValueError:
            raise PanelError(f"row {lineno}: non-integer indicator_id {raw_id!r}") from None
        try:
            value = float(raw_value)
        except ValueError:
            raise PanelError(f"row {lineno}: non-numeric value {raw_value!r}") from None
        if not math.isfinite(value) or not 0.0 <= value <= 100.0:
            raise PanelError(f"row {lineno}: value {value} outside [0, 100]")
        if period not in periods:
            periods.append(period)
        if unit not in units:
            units.append(unit)
        if ind_id not in indicators:
            indicators[ind_id] = name
        elif indicators[ind_id] != name:
            raise PanelError(
                f"row {lineno}: indicator {ind_id} renamed "
                f"{indicators[ind_id]!r} -> {name!r}"
            )
        key = (period, unit, ind_id)
        if key in cells:
            raise PanelError(f"row {lineno}: duplicate cell {key}")
        cells[key] = value

    if not cells:
        raise PanelError("no data rows")
    values = np.empty((len(periods), len(units), len(indicators)))
    ind_ids = list(indicators)
    for p_i, period in enumerate(periods):
        for u_i, unit in enumerate(units):
            for i_i, ind_id in enumerate(ind_ids):
                try:
                    values[p_i, u_i, i_i] = cells[(period, unit, ind_id)]
                except KeyError:
                    raise PanelError(
                        f"missing cell (period={period}, unit={unit}, "
                        f"indicator={ind_id})"
                    ) from None
    n_expected = len(periods) * len(units) * len(indicators)
    if len(cells) != n_expected:
        # dense fill succeeded yet extra cells exist: unreachable given the
        # duplicate check, kept as a guard
        raise PanelError("inconsistent cell count")
    return IndicatorPanel(
        periods=tuple(periods),
        units=tuple(units),
        indicators=tuple(Indicator(i, indicators[i]) for i in ind_ids),
        values=values,
    )


def serialize_panel(panel: IndicatorPanel) -> str:
    """Emit the panel in the same long-format CSV accepted by parse_panel."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for p_i, period in enumerate(panel.periods):
        for u_i, unit in enumerate(panel.units):
            for i_i, ind in enumerate(panel.indicators):
                writer.writerow(
                    [period, unit, ind.id, ind.name,
                     _format_value(panel.values[p_i, u_i, i_i])]
                )
    return buf.getvalue()


def validate(panel: IndicatorPanel) -> ValidationReport:
    """Check panel invariants; returns a report instead of raising.

    Errors: non-finite or out-of-range values, period labels not strictly
    increasing, duplicate unit or indicator labels. Warnings: zero-variance
    (period, indicator) pairs, for which Pearson correlation downstream is
    undefined.
    """
    report = ValidationReport()
    for a, b in zip(panel.periods, panel.periods[1:]):
        if not a < b:
            report.errors.append(
                (f"period {b}", f"period labels not strictly increasing ({a!r} then {b!r})")
            )
    if len(set(panel.units)) != panel.n_units:
        report.errors.append(("units", "duplicate unit labels"))
    if len(set(panel.indicator_ids)) != panel.n_indicators:
        report.errors.append(("indicators", "duplicate indicator ids"))
    bad = ~np.isfinite(panel.values) | (panel.values < 0) | (panel.values > 100)
    for p_i, u_i, i_i in zip(*np.nonzero(bad)):
        report.errors.append(
            (
                f"({panel.periods[p_i]}, {panel.units[u_i]}, "
                f"{panel.indicators[i_i].id})",
                f"value {panel.values[p_i, u_i, i_i]} outside [0, 100]",
            )
        )
    for p_i, period in enumerate(panel.periods):
        col_var = panel.values[p_i].var(axis=0)
        for i_i in np.nonzero(col_var == 0.0)[0]:
            report.warnings.append(
                (
                    f"({period}, {panel.indicators[i_i].id})",
                    "zero variance across units",
                )
            )
    return report


def exclude_indicators(panel: IndicatorPanel, ids: Iterable[int]) -> IndicatorPanel:
    """Return a panel with the given indicator columns removed everywhere."""
    ids = set(ids)
    unknown = ids - set(panel.indicator_ids)
    if unknown:
        raise PanelError(f"unknown indicator ids: {sorted(unknown)}")
    keep = [i for i, ind in enumerate(panel.indicators) if ind.id not in ids]
    return IndicatorPanel(
        periods=panel.periods,
        units=panel.units,
        indicators=tuple(panel.indicators[i] for i in keep),
        values=panel.values[:, :, keep],
    )


def slice_period(panel: IndicatorPanel, period: str) -> PeriodSlice:
    """Units x indicators view of one period."""
    try:
        p_i = panel.periods.index(period)
    except ValueError:
        raise PanelError(f"unknown period {period!r}") from None
    return PeriodSlice(
        period=period,
        units=panel.units,
        indicator_ids=panel.indicator_ids,
        matrix=panel.values[p_i],
    )


def _numbered_rows(text: str) -> list[tuple[int, list[str]]]:
    """Parse csv lines one by one, keeping source line numbers.

    Comment lines (leading ``#``) are skipped. Quoted fields with embedded
    newlines are not supported; none of the panel fields need them.
    """
    out: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.lstrip().startswith("#"):
            continue
        for row in csv.reader([line]):
            out.append((lineno, row))
    return out


def _format_value(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))
