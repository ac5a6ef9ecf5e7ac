"""Plot-ready tables behind the error-versus-power figures.

Each table is built by calling the single-point functions in
:mod:`signconf.design` and :mod:`signconf.signpolicy` once per grid value;
nothing here does arithmetic of its own beyond laying out the grid.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np

from . import design
from . import distributions as dist
from .errors import DomainError, NumericError
from .signpolicy import make_policy, sign_declaration_power

DEFAULT_POWER_GRID = tuple(round(k / 100, 2) for k in range(6, 81))
DEFAULT_EFFECT_GRID = tuple(round(k * 0.05, 2) for k in range(0, 161))
DEFAULT_ALPHA_S = (0.1, 0.01, 0.001)
DENSITY_POINTS = 512


@dataclass
class CurveTable:
    name: str
    columns: list[str]
    rows: list[tuple[float, ...]]
    meta: dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        k = len(self.columns)
        for row in self.rows:
            if len(row) != k:
                raise ValueError(f"row {row!r} does not have {k} fields")
        grid = [row[0] for row in self.rows]
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"grid column {self.columns[0]!r} is not strictly increasing")
        if not all(math.isfinite(v) for row in self.rows for v in row):
            raise NumericError(f"table {self.name!r} contains non-finite values")

    def column(self, label: str) -> list[float]:
        j = self.columns.index(label)
        return [row[j] for row in self.rows]

    def write_csv(self, out: TextIO) -> None:
        """Write ``# key=value`` metadata lines, the header, then the rows."""
        out.write(f"# table={self.name}\n")
        for key, value in self.meta.items():
            out.write(f"# {key}={_fmt(value)}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([repr(float(v)) for v in row])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def _fmt(value) -> str:
    if isinstance(value, (list, tuple)):
        return ";".join(_fmt(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _check_power_grid(alpha: float, power_grid: Sequence[float]) -> list[float]:
    grid = [float(p) for p in power_grid]
    for p in grid:
        if not alpha < p < 1.0:
            raise DomainError(f"power grid value {p!r} outside ({alpha}, 1)")
    return grid


def density_cutoff_table(alpha: float = 0.05, power: float = 0.06,
                         grid_n: int = DENSITY_POINTS) -> CurveTable:
    """N(1, tau^2) density of the estimate, with the rejection cutoffs.

    The grid spans 1 +/- 4 crit_z and also contains the cutoffs and the
    true value 1 exactly; these are repeated in the metadata.
    """
    if int(grid_n) != grid_n or grid_n < 2:
        raise DomainError(f"grid_n must be an integer >= 2, got {grid_n!r}")
    dp = design.DesignPoint(alpha, power)
    tau = design.solve_tau(dp)
    crit = dist.norm_isf(alpha / 2.0) * tau
    grid = np.linspace(1.0 - 4.0 * crit, 1.0 + 4.0 * crit, int(grid_n))
    grid = np.unique(np.concatenate([grid, [-crit, 1.0, crit]]))
    dens = np.asarray(dist.norm_pdf((grid - 1.0) / tau)) / tau
    return CurveTable(
        name="density",
        columns=["theta_hat", "density"],
        rows=[(float(x), float(y)) for x, y in zip(grid, dens)],
        meta={"alpha": alpha, "power": power, "tau": tau,
              "cutoff_lower": -crit, "cutoff_upper": crit, "theta_true": 1.0},
    )


def type_s_curve(alpha: float = 0.05,
                 power_grid: Sequence[float] = DEFAULT_POWER_GRID) -> CurveTable:
    rows = []
    for p in _check_power_grid(alpha, power_grid):
        tau = design.solve_tau(design.DesignPoint(alpha, p))
        rows.append((p, design.type_s(tau, alpha)))
    return CurveTable("type_s", ["power", "type_s"], rows, {"alpha": alpha})


def exaggeration_curve(alpha: float = 0.05,
                       power_grid: Sequence[float] = DEFAULT_POWER_GRID) -> CurveTable:
    rows = []
    for p in _check_power_grid(alpha, power_grid):
        res = design.exaggeration_analytic(design.DesignPoint(alpha, p))
        rows.append((p, res.min_ratio, res.exaggeration))
    return CurveTable("exaggeration", ["power", "min_ratio", "expected_ratio"],
                      rows, {"alpha": alpha})


def sign_power_curves(alpha1: float = 0.05,
                      alpha_s_list: Sequence[float] = DEFAULT_ALPHA_S,
                      effect_grid: Sequence[float] = DEFAULT_EFFECT_GRID) -> CurveTable:
    """Power at alpha1 and probability of a sign declaration, versus |theta|/tau.

    The sign columns hold the total alpha2 rejection rate, which includes
    the (tiny) rate of wrong-sign declarations.
    """
    policies = [make_policy(alpha1, a) for a in alpha_s_list]
    rows = []
    for d in effect_grid:
        d = float(d)
        row = [d, design.power_at_effect(d, alpha1)]
        row.extend(sign_declaration_power(d, pol)[0] for pol in policies)
        rows.append(tuple(row))
    columns = ["effect_over_tau", "power_alpha1"]
    columns += [f"sign_alpha_s_{_fmt(float(a))}" for a in alpha_s_list]
    return CurveTable("sign_power", columns, rows,
                      {"alpha1": alpha1, "alpha_s": [float(a) for a in alpha_s_list],
                       "alpha2": [pol.alpha2 for pol in policies]})
