import csv
import io
import math

import pytest
from scipy import integrate

from signconf import curves, design
from signconf.design import DesignPoint
from signconf.errors import DomainError
from signconf.signpolicy import make_policy

TAU_LOW_POWER = 3.394507


def _read(text):
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        else:
            body.append(line)
    rows = list(csv.reader(body))
    return meta, rows[0], [[float(v) for v in r] for r in rows[1:]]


def test_density_table_anchors():
    t = curves.density_cutoff_table(0.05, 0.06)
    assert t.meta["tau"] == pytest.approx(TAU_LOW_POWER, abs=1e-5)
    assert t.meta["cutoff_upper"] == pytest.approx(6.65, abs=0.01)
    assert t.meta["cutoff_lower"] == -t.meta["cutoff_upper"]
    x = t.column("theta_hat")
    assert t.meta["cutoff_upper"] in x and t.meta["cutoff_lower"] in x and 1.0 in x
    peak = t.rows[x.index(1.0)][1]
    assert peak == pytest.approx(1 / (t.meta["tau"] * math.sqrt(2 * math.pi)), rel=1e-14)
    assert max(t.column("density")) == peak


def test_density_rejection_mass_is_the_power():
    t = curves.density_cutoff_table(0.05, 0.06)
    tau, c = t.meta["tau"], t.meta["cutoff_upper"]
    f = lambda x: math.exp(-0.5 * ((x - 1) / tau) ** 2) / (tau * math.sqrt(2 * math.pi))
    mass = integrate.quad(f, c, math.inf)[0] + integrate.quad(f, -math.inf, -c)[0]
    assert mass == pytest.approx(0.06, abs=1e-8)


def test_density_grid_size():
    t = curves.density_cutoff_table(0.05, 0.3, grid_n=10)
    assert 10 <= len(t.rows) <= 13
    with pytest.raises(DomainError):
        curves.density_cutoff_table(0.05, 0.3, grid_n=1)
    with pytest.raises(DomainError):
        curves.density_cutoff_table(0.05, 0.05)


def test_type_s_curve():
    t = curves.type_s_curve()
    p = t.column("power")
    ts = t.column("type_s")
    assert p[0] == 0.06 and p[-1] == 0.8
    assert ts[0] == pytest.approx(0.2013426, abs=1e-6)
    assert ts[p.index(0.3)] < 0.005
    assert all(b < a for a, b in zip(ts, ts[1:]))


def test_exaggeration_curve():
    t = curves.exaggeration_curve()
    p = t.column("power")
    mr = t.column("min_ratio")
    er = t.column("expected_ratio")
    assert mr[0] == pytest.approx(6.65, abs=0.01)
    assert er[0] == pytest.approx(8.01, abs=0.01)
    assert 1.35 <= er[p.index(0.5)] <= 1.45
    assert all(b < a for a, b in zip(er, er[1:]))
    assert all(e >= m for e, m in zip(er, mr))


def test_curve_rows_equal_single_point_calls():
    t = curves.exaggeration_curve(0.01, [0.2, 0.5])
    for p, mr, er in t.rows:
        res = design.exaggeration_analytic(DesignPoint(0.01, p))
        assert (mr, er) == (res.min_ratio, res.exaggeration)


def test_sign_power_curves():
    t = curves.sign_power_curves(0.05, (0.1, 0.01, 0.001))
    assert len(t.columns) == 5
    first = t.rows[0]
    assert first[0] == 0.0
    assert first[1] == pytest.approx(0.05, abs=1e-15)
    for a_s, v in zip((0.1, 0.01, 0.001), first[2:]):
        assert v == pytest.approx(make_policy(0.05, a_s).alpha2, rel=1e-12)
    for row in t.rows:
        assert row[1] >= row[2] >= row[3] >= row[4]
    for j in range(1, 5):
        col = [r[j] for r in t.rows]
        assert all(b > a for a, b in zip(col, col[1:]))
    assert t.rows[-1][1] > 0.999


def test_bad_power_grid():
    with pytest.raises(DomainError):
        curves.type_s_curve(0.05, [0.04, 0.5])
    with pytest.raises(DomainError):
        curves.exaggeration_curve(0.05, [0.5, 1.0])
    with pytest.raises(ValueError):
        curves.type_s_curve(0.05, [0.5, 0.4])


def test_csv_round_trip_is_exact():
    t = curves.type_s_curve(0.05, [0.06, 0.3, 0.8])
    meta, header, rows = _read(t.to_csv())
    assert meta["table"] == "type_s" and float(meta["alpha"]) == 0.05
    assert header == t.columns
    assert [tuple(r) for r in rows] == t.rows


def test_csv_is_deterministic():
    assert curves.sign_power_curves().to_csv() == curves.sign_power_curves().to_csv()
    buf = io.StringIO()
    curves.density_cutoff_table().write_csv(buf)
    assert buf.getvalue() == curves.density_cutoff_table().to_csv()
