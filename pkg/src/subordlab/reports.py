"""Report records shared by the verifiers, and their CSV encoding."""

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


def fmt(value):
    """Format a value for CSV output; floats keep 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return "%.17g" % value
    if isinstance(value, complex):
        return "%.17g%+.17gj" % (value.real, value.imag)
    if value is None:
        return ""
    return str(value)


def write_csv(path, header, rows):
    """Write rows with a header line, LF endings, comma separated."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(buf.getvalue())


@dataclass
class Check:
    """One asserted inequality or identity.

    ``paper`` marks checks whose threshold is a constant or identity stated
    outright (total mass one, the sector constant, the ergodic bound 2, ...);
    the rest are empirical constants that are only required to be finite and
    stable.
    """

    name: str
    value: float
    bound: Optional[float]
    passed: bool
    paper: bool = False
    paper_constant: Optional[float] = None
    grid: str = ""


@dataclass
class VerificationReport:
    subject: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name, value, bound, passed, paper=False, paper_constant=None, grid=""):
        self.checks.append(Check(name, float(value), None if bound is None else float(bound),
                                 bool(passed), paper, paper_constant, grid))
        return self.checks[-1]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def rows(self):
        return [(self.subject, c.name, c.value, c.bound, c.paper_constant, c.passed,
                 "paper" if c.paper else "empirical", c.grid) for c in self.checks]

    HEADER = ("subject", "check", "value", "bound", "paper_constant", "pass", "kind", "grid")


@dataclass
class DominationReport:
    """Result of a pointwise domination sweep ``|T f| <= C * S |f|``.

    ``worst_case`` holds ``(t_or_z, x, f_id)`` for the largest ratio seen.
    """

    theorem: str
    empirical_constant: float
    paper_constant: Optional[float]
    sample_count: int
    worst_case: tuple
    stable: Optional[bool] = None
    k: Optional[int] = None
    parameter: Optional[float] = None
    extras: dict = field(default_factory=dict)

    @property
    def passed(self):
        if not np.isfinite(self.empirical_constant):
            return False
        if self.paper_constant is None:
            return self.stable is not False
        return self.empirical_constant <= self.paper_constant * (1 + 1e-6)

    CSV_HEADER = ("theorem", "k", "theta_or_beta", "empirical_constant", "paper_constant",
                  "pass", "worst_t_or_z", "worst_x", "f_id")

    def csv_row(self):
        t, x, fid = self.worst_case
        return (self.theorem, self.k, self.parameter, self.empirical_constant,
                self.paper_constant, self.passed, t, x, fid)
