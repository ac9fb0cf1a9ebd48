"""Compositions, closure and dataset validation.

A composition is a vector of non-negative parts summing to one. Everything
else in the package assumes its inputs passed through :func:`close` or
:func:`as_dataset` first.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "SUM_TOL",
    "CompositionError",
    "CompositionalDataset",
    "ValidationReport",
    "Violation",
    "as_dataset",
    "check_alpha",
    "close",
    "has_zeros",
    "read_csv",
    "validate_dataset",
]

SUM_TOL = 1e-10


class CompositionError(ValueError):
    """Raised when data cannot be interpreted as compositions."""


def close(raw) -> np.ndarray:
    """Rescale non-negative parts so that they sum to one.

    Works row-wise on 2-D input.

    Parameters
    ----------
    raw : array_like, shape (D,) or (n, D)
        Non-negative measurements, D >= 2.

    Returns
    -------
    ndarray
        ``raw / raw.sum(axis=-1)``, read-only.

    Examples
    --------
    >>> close([2, 3, 5])
    array([0.2, 0.3, 0.5])
    """
    x = np.array(raw, dtype=float)
    if x.ndim not in (1, 2):
        raise CompositionError("expected a vector or a 2-D array of compositions")
    if x.shape[-1] < 2:
        raise CompositionError("a composition needs at least 2 components")
    if not np.all(np.isfinite(x)):
        raise CompositionError("non-finite component")
    if np.any(x < 0):
        raise CompositionError("negative component")
    total = x.sum(axis=-1, keepdims=True)
    if np.any(total == 0):
        raise CompositionError("degenerate composition")
    x = x / total
    x.flags.writeable = False
    return x


def check_alpha(alpha: float, zeros: bool = False) -> float:
    """Validate a transformation parameter against the data it will touch."""
    alpha = float(alpha)
    if not -1.0 <= alpha <= 1.0 or np.isnan(alpha):
        raise ValueError(f"alpha must lie in [-1, 1], got {alpha}")
    if zeros and alpha <= 0:
        raise CompositionError(
            f"alpha must be positive with zeros in the data (got alpha={alpha})"
        )
    return alpha


@dataclass(frozen=True)
class Violation:
    row: int
    column: Optional[int]
    message: str

    def __str__(self):
        where = f"row {self.row}" if self.column is None else f"row {self.row}, column {self.column}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class CompositionalDataset:
    """An ``n x D`` block of compositions, one observation per row.

    The array is copied and frozen on construction; rows within
    :data:`SUM_TOL` of unit sum are renormalised, anything further off is
    rejected.
    """

    values: np.ndarray
    component_names: Optional[tuple] = field(default=None)

    def __post_init__(self):
        x = np.array(self.values, dtype=float)
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2:
            raise CompositionError("dataset must be two-dimensional")
        report = validate_dataset(x)
        if not report.ok:
            raise CompositionError(f"invalid compositional data:\n{report}")
        x = x / x.sum(axis=1, keepdims=True)
        x.flags.writeable = False
        object.__setattr__(self, "values", x)
        if self.component_names is not None:
            names = tuple(str(c) for c in self.component_names)
            if len(names) != x.shape[1]:
                raise CompositionError(
                    f"{len(names)} component names for {x.shape[1]} components"
                )
            object.__setattr__(self, "component_names", names)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    def __len__(self):
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def D(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_raw(cls, raw, component_names=None) -> "CompositionalDataset":
        """Close each row of raw measurements and wrap the result."""
        return cls(close(np.atleast_2d(np.asarray(raw, dtype=float))), component_names)


def as_dataset(data) -> np.ndarray:
    """Return a validated, closed ``(n, D)`` float array view of `data`."""
    if isinstance(data, CompositionalDataset):
        return data.values
    return CompositionalDataset(data).values


def validate_dataset(data, require_strictly_positive: bool = False) -> ValidationReport:
    """Check every row against the composition invariants.

    Nothing is raised; problems come back as a list of violations with
    row and column indices (0-based).

    Examples
    --------
    >>> validate_dataset([[0.5, 0.5, 0.0]], require_strictly_positive=True).ok
    False
    """
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    out = []
    if x.ndim != 2:
        return ValidationReport((Violation(0, None, "dataset must be two-dimensional"),))
    if x.shape[1] < 2:
        return ValidationReport((Violation(0, None, "D must be at least 2"),))
    nonfinite = ~np.isfinite(x)
    negative = ~nonfinite & (x < 0)
    zero = x == 0 if require_strictly_positive else np.zeros_like(x, dtype=bool)
    sums = x.sum(axis=1)
    bad_rows = nonfinite.any(axis=1) | negative.any(axis=1)
    off_sum = ~bad_rows & (np.abs(sums - 1.0) > SUM_TOL)
    flagged = nonfinite | negative | zero
    for i in np.flatnonzero(flagged.any(axis=1) | off_sum):
        for j in np.flatnonzero(flagged[i]):
            if nonfinite[i, j]:
                msg = "non-finite component"
            elif negative[i, j]:
                msg = "negative component"
            else:
                msg = "zero component"
            out.append(Violation(int(i), int(j), msg))
        if off_sum[i]:
            out.append(Violation(int(i), None, f"sum ≠ 1 (sum = {sums[i]!r})"))
    return ValidationReport(tuple(out))


def has_zeros(data) -> bool:
    """True iff some entry is exactly zero."""
    return bool(np.any(np.asarray(data, dtype=float) == 0.0))


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def read_csv(source, delimiter: str = ",") -> CompositionalDataset:
    """Load compositions from a CSV file, closing every row.

    One observation per line, D numeric columns, optionally preceded by a
    single header line whose names become ``component_names``.

    Parameters
    ----------
    source : path or file-like
    delimiter : str

    Raises
    ------
    CompositionError
        With the (1-based) line and column of the first offending cell.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            text = fh.read()
        name = os.fspath(source)
    else:
        text = source.read()
        name = getattr(source, "name", "<stream>")
    rows = [r for r in csv.reader(io.StringIO(text), delimiter=delimiter)]
    lines = [(k + 1, [c.strip() for c in r]) for k, r in enumerate(rows)]
    lines = [(k, r) for k, r in lines if r and any(c for c in r)]
    if not lines:
        raise CompositionError(f"{name}: no data")

    names = None
    _, first = lines[0]
    if not all(_is_number(c) for c in first):
        names = first
        lines = lines[1:]
    if not lines:
        raise CompositionError(f"{name}: header but no data rows")

    width = len(names) if names is not None else len(lines[0][1])
    values = []
    for lineno, cells in lines:
        if len(cells) != width:
            raise CompositionError(
                f"{name}: line {lineno}: expected {width} columns, found {len(cells)}"
            )
        row = []
        for col, c in enumerate(cells, start=1):
            try:
                v = float(c)
            except ValueError:
                raise CompositionError(
                    f"{name}: line {lineno}, column {col}: not a number: {c!r}"
                ) from None
            if not np.isfinite(v):
                raise CompositionError(f"{name}: line {lineno}, column {col}: non-finite value")
            if v < 0:
                raise CompositionError(f"{name}: line {lineno}, column {col}: negative component")
            row.append(v)
        if sum(row) == 0:
            raise CompositionError(f"{name}: line {lineno}: degenerate composition")
        values.append(row)
    return CompositionalDataset.from_raw(np.array(values), names)
