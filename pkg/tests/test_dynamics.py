import csv
from fractions import Fraction

import numpy as np
import pytest

from extham.catalog import make_minkowski_hamiltonian
from extham.dynamics import (
    COMPLETED,
    DOMAIN_EXIT,
    NO_CONVERGENCE,
    drift_report,
    integrate,
)
from extham.phase import PhaseFunction, PhasePoint, lift_last


def free_particle():
    return PhaseFunction(lambda q, p: 0.5 * p[0] * p[0], 1)


@pytest.fixture(scope="module")
def wedge_system():
    mdl = make_minkowski_hamiltonian(Fraction(1), 1.0, 2.0, 0.0)
    H = mdl.extension.hamiltonian()
    L = lift_last(mdl.base.L, 2)
    K = mdl.extension.k_closed()
    return H, L, K


def test_free_particle_linear_motion():
    traj = integrate(free_particle(), PhasePoint((0.0,), (1.0,)), 0.01, 100)
    assert traj.status == COMPLETED
    for i, t in enumerate(traj.times):
        assert abs(traj.states[i][0] - t) <= 1e-12
        assert abs(traj.states[i][1] - 1.0) <= 1e-14


def test_second_order_energy_convergence(wedge_system):
    # escape orbit (E > 0): drift scales as h^2, so halving h divides it by ~4
    H, _, _ = wedge_system
    x0 = PhasePoint((1.0, 0.0), (3.2, 0.5))
    T = 1.6
    drifts = []
    for h in (4e-3, 2e-3, 1e-3, 5e-4):
        traj = integrate(H, x0, h, int(round(T / h)))
        assert traj.status == COMPLETED
        drifts.append(drift_report(traj, {"H": H})["H"])
    for a, b in zip(drifts, drifts[1:]):
        assert 3.0 <= a / b <= 5.5


def test_time_reversal(wedge_system):
    H, _, _ = wedge_system
    x0 = PhasePoint((1.0, 0.0), (3.2, 0.5))
    fwd = integrate(H, x0, 1e-3, 1500)
    assert fwd.status == COMPLETED
    back = integrate(H, fwd.point(-1), -1e-3, 1500)
    assert back.status == COMPLETED
    assert np.max(np.abs(back.states[-1] - x0.as_array())) <= 1e-9


def test_conserved_quantities_on_escape_orbit(wedge_system):
    H, L, K = wedge_system
    x0 = PhasePoint((1.0, 0.0), (3.2, 0.5))
    traj = integrate(H, x0, 1e-3, 4000)
    rep = drift_report(traj, {"H": H, "L": L, "K": K})
    assert rep["H"] <= 1e-4
    assert rep["L"] <= 1e-6
    assert rep["K"] <= 1e-5


def test_domain_exit_guard(wedge_system):
    # the falling orbit crosses u = 0.35 long before the step budget runs out
    H, _, _ = wedge_system
    traj = integrate(H, PhasePoint((1.0, 0.0), (0.2, 0.5)), 1e-3, 10_000, u_min=0.35)
    assert traj.status == DOMAIN_EXIT
    assert traj.exit_step is not None and traj.exit_step < 10_000
    assert traj.states[-1][0] < 0.4


def test_no_convergence_status(wedge_system):
    # a huge step near the singular region defeats the fixed-point solve
    H, _, _ = wedge_system
    traj = integrate(H, PhasePoint((0.2, 0.0), (-1.0, 0.5)), 0.5, 10)
    assert traj.status == NO_CONVERGENCE
    assert traj.exit_step is not None


def test_drift_report_controls(wedge_system):
    H, _, _ = wedge_system
    x0 = PhasePoint((1.0, 0.0), (3.2, 0.5))
    traj = integrate(H, x0, 1e-3, 500)
    const = PhaseFunction(lambda q, p: 4.2, 2)
    psi = PhaseFunction(lambda q, p: q[1], 2)
    rep = drift_report(traj, {"const": const, "psi": psi, "H": H})
    assert rep["const"] == 0.0
    assert rep["psi"] > 0.01  # non-integral drifts O(1), reported without error
    assert rep["H"] < 1e-4


def test_csv_round_trip(tmp_path, wedge_system):
    H, _, _ = wedge_system
    traj = integrate(H, PhasePoint((1.0, 0.0), (3.2, 0.5)), 1e-3, 50)
    path = tmp_path / "traj.csv"
    traj.write_csv(path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "q1", "q2", "p1", "p2"]
    assert len(rows) == len(traj.states) + 1
    # full double precision survives the round trip
    for i in (1, 25, len(rows) - 1):
        vals = [float(v) for v in rows[i]]
        assert vals[0] == traj.times[i - 1]
        assert vals[1:] == list(traj.states[i - 1])


def test_step_size_validation():
    with pytest.raises(ValueError):
        integrate(free_particle(), PhasePoint((0.0,), (1.0,)), 0.0, 10)
