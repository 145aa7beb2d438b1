import json
import math
from fractions import Fraction

import pytest

from extham.catalog import (
    catalog_listing,
    cosh_base,
    exp_base,
    from_pseudo_polar,
    make_base_family,
    make_curved_hamiltonian,
    make_flat_ttw_hamiltonian,
    make_minkowski_hamiltonian,
    make_remark_pair,
    minkowski_indices,
    momentum_free_seed_base,
    sinh_base,
    to_pseudo_polar,
    trig_base,
)
from extham.extension import bracket_scale, seed_equation_terms
from extham.phase import PhaseFunction, PhasePoint, poisson_bracket
from extham.sampling import make_rng, sample_points


def wedge_points(num, seed):
    return sample_points(num, seed, 2, q_range=(0.3, 2.0))


def test_minkowski_hamiltonian_values():
    mdl = make_minkowski_hamiltonian(Fraction(1), 1.0, 2.0, 0.0)
    x = PhasePoint((1.3, 0.8), (0.4, -0.7))
    q1, q2 = 1.3, 0.8
    expected = 0.4 * -0.7 - q2**3 * q1**-5 - q2 * q1**-3
    assert mdl.H(x) == pytest.approx(expected, rel=1e-14)
    # all couplings off: free motion p1 p2
    free = make_minkowski_hamiltonian(Fraction(0), 0.0, 0.0, 0.0)
    assert free.H(x) == pytest.approx(0.4 * -0.7, rel=1e-15)
    # the Omega term is 2 Omega q1 q2
    momega = make_minkowski_hamiltonian(Fraction(1), 1.0, 2.0, 0.5)
    assert momega.H(x) - mdl.H(x) == pytest.approx(2 * 0.5 * q1 * q2, rel=1e-13)


def test_minkowski_wedge_domain():
    mdl = make_minkowski_hamiltonian(Fraction(1, 2), 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        mdl.H(PhasePoint((-0.5, 1.0), (0.0, 0.0)))


def test_integral_indices_from_k():
    assert minkowski_indices(Fraction(1)) == (4, 1)
    assert minkowski_indices(Fraction(1, 2)) == (3, 1)
    assert minkowski_indices(Fraction(3)) == (8, 1)
    assert minkowski_indices(Fraction(1, 4)) == (5, 2)
    with pytest.raises(ValueError):
        minkowski_indices(0.37)
    with pytest.raises(ValueError):
        minkowski_indices(Fraction(-2))


def test_pseudo_polar_center_point():
    s = 1.0 / math.sqrt(2.0)
    x = PhasePoint((s, s), (0.3, 0.9))
    y = to_pseudo_polar(1, x)
    assert y.q[0] == pytest.approx(1.0, rel=1e-15)
    assert y.q[1] == pytest.approx(0.0, abs=1e-15)


def test_pseudo_polar_round_trip():
    for k in (Fraction(1), Fraction(1, 2), Fraction(3)):
        kf = float(k)
        for x in wedge_points(50, 61):
            y = from_pseudo_polar(kf, to_pseudo_polar(kf, x))
            for a, b in zip(x.as_array(), y.as_array()):
                assert abs(a - b) <= 1e-13 * (1.0 + abs(a))


def test_chart_equality_null_vs_polar():
    for k in (Fraction(1), Fraction(1, 2), Fraction(3)):
        mdl = make_minkowski_hamiltonian(k, 1.0, 2.0, 0.4)
        H_polar = mdl.extension.hamiltonian()
        for x in wedge_points(50, 62):
            a = mdl.H(x)
            b = H_polar(to_pseudo_polar(float(k), x))
            scale = 1.0 + abs(a) + abs(x.p[0] * x.p[1])
            assert abs(a - b) <= 1e-12 * scale


def test_transform_is_canonical():
    # pulled-back chart functions satisfy canonical bracket relations
    k = 1.0
    charts = []
    for idx in range(4):
        def rule(q, p, idx=idx):
            from extham.catalog import polar_coords_generic

            qq, pp = polar_coords_generic(k, q, p)
            return (qq + pp)[idx]

        charts.append(PhaseFunction(rule, 2))
    u_c, psi_c, pu_c, ppsi_c = charts
    for x in wedge_points(50, 63):
        assert abs(poisson_bracket(u_c, pu_c, x) - 1.0) <= 1e-11
        assert abs(poisson_bracket(psi_c, ppsi_c, x) - 1.0) <= 1e-11
        assert abs(poisson_bracket(u_c, ppsi_c, x)) <= 1e-11
        assert abs(poisson_bracket(psi_c, pu_c, x)) <= 1e-11
        assert abs(poisson_bracket(u_c, psi_c, x)) <= 1e-11
        assert abs(poisson_bracket(pu_c, ppsi_c, x)) <= 1e-11


def test_exp_base_is_the_wedge_potential():
    base = exp_base(0.5, 0.5)
    x = PhasePoint((0.9,), (0.0,))
    assert base.V(x) == pytest.approx(
        0.5 * math.exp(-3.6) + 0.5 * math.exp(-1.8), rel=1e-14
    )
    assert base.params["C1"] == 1.0 and base.params["C2"] == 0.0


def test_v1_subfamily_is_c4_zero():
    base = make_base_family(1.0, 0.6, 1.3, 0.0, 2.0, "hyperbolic")
    for psi in (0.4, 1.0, 1.7):
        g = base.g_scalar(psi)
        assert base.V(PhasePoint((psi,), (0.0,))) == pytest.approx(1.3 / g**2, rel=1e-13)


def test_every_family_passes_seed_residual():
    rng = make_rng(202)
    bases = [
        exp_base(0.5, 0.5),
        make_base_family(1.0, 0.6, 1.3, 0.0, 2.0, "hyperbolic"),
        cosh_base(1.2, 0.4, 0.8, -0.5, 2.0),
        sinh_base(0.9, 0.5, 1.1, 0.7, 2.0),
        trig_base(1.0, 0.2, 1.0, 0.5, 1.0),
        momentum_free_seed_base(1.0, 0.4, 1.2, 2.0),
    ]
    # five random (V2) parameter draws with C1, C2 > 0 (pole-free gauge)
    for _ in range(5):
        C1, C2 = rng.uniform(0.5, 2.0), rng.uniform(0.1, 1.5)
        C3, C4 = rng.uniform(0.4, 2.0), rng.uniform(-2.0, 2.0)
        eta = rng.uniform(0.8, 2.5)
        bases.append(make_base_family(C1, C2, C3, C4, eta, "hyperbolic"))
    for base in bases:
        for x in sample_points(50, 203, 1, q_range=base.psi_window):
            a, b = seed_equation_terms(base, base.c, base.c0, x)
            assert abs(a + b) <= 1e-10 * (1.0 + abs(a) + abs(b)), base.family


def test_base_family_validation():
    with pytest.raises(ValueError):
        make_base_family(0.0, 0.0, 1.0, 1.0, 2.0, "hyperbolic")
    with pytest.raises(ValueError):
        make_base_family(1.0, 0.0, 0.0, 0.0, 2.0, "hyperbolic")
    with pytest.raises(ValueError):
        make_base_family(1.0, 0.0, 1.0, 0.0, 0.0, "hyperbolic")
    with pytest.raises(ValueError):
        make_base_family(1.0, 0.0, 1.0, 0.0, 2.0, "elliptic")
    with pytest.raises(ValueError):
        # gauge vanishes inside the window
        make_base_family(1.0, -1.0, 1.0, 0.0, 2.0, "hyperbolic", psi_window=(-1.0, 1.0))


@pytest.mark.parametrize("kappa", [1, -1])
@pytest.mark.parametrize("Omega", [0.0, 0.4])
def test_curved_models_brackets(kappa, Omega):
    base = trig_base(1.0, 0.2, 1.0, 0.5, 1.0)
    mdl = make_curved_hamiltonian(base, Fraction(1), kappa, Omega)
    pts = sample_points(20, 64, 2, q_ranges=mdl.q_windows)
    for name, K in mdl.known_integrals:
        for x in pts:
            b = abs(poisson_bracket(mdl.H, K, x))
            assert b <= 1e-9 * max(bracket_scale(mdl.H, K, x), 1e-6), (name, kappa, Omega)


def test_curved_chart_labels():
    tb = trig_base(1.0, 0.2, 1.0, 0.5, 1.0)
    hb = exp_base(0.7, 1.3)
    assert make_curved_hamiltonian(tb, Fraction(1), 1).chart == "sphere S2"
    assert make_curved_hamiltonian(tb, Fraction(1), -1).chart == "pseudosphere H2"
    assert make_curved_hamiltonian(hb, Fraction(1), 1).chart == "de Sitter dS2"
    assert make_curved_hamiltonian(hb, Fraction(1), -1).chart == "anti-de Sitter AdS2"
    with pytest.raises(ValueError):
        make_curved_hamiltonian(tb, Fraction(1), 2)
    with pytest.raises(ValueError):
        make_curved_hamiltonian(tb, 1.0, 1)


def test_flat_ttw_warp_coefficient():
    # warp +m^2/(|eta|^2 n^2 u^2) agrees with -(m/n)^2 gamma' at gamma = 1/(cu)
    base = trig_base(1.0, 0.2, 1.0, 0.5, 2.0)
    mdl = make_flat_ttw_hamiltonian(base, 3, 2, 0.0)
    H = mdl.H
    for x in sample_points(10, 65, 2, q_ranges=mdl.q_windows):
        u = x.q[0]
        L = base.L(PhasePoint(x.q[1:], x.p[1:]))
        expected = 0.5 * x.p[0] ** 2 + (9.0 / (4.0 * 4.0 * u * u)) * L
        assert H(x) == pytest.approx(expected, rel=1e-12)
    # Omega term is eta^4 u^2 Omega
    mdl2 = make_flat_ttw_hamiltonian(base, 3, 2, 0.7)
    x = PhasePoint((0.9, 0.5), (0.1, 0.2))
    assert mdl2.H(x) - H(x) == pytest.approx(16.0 * 0.81 * 0.7, rel=1e-11)
    with pytest.raises(ValueError):
        make_flat_ttw_hamiltonian(exp_base(0.7, 1.3), 2, 1)


def test_flat_ttw_bracket_with_omega():
    base = trig_base(1.0, 0.2, 1.0, 0.5, 1.0)
    mdl = make_flat_ttw_hamiltonian(base, 2, 1, 0.4)
    name, K = mdl.known_integrals[-1]
    assert name == "Kbar(2,1)"
    for x in sample_points(20, 66, 2, q_ranges=mdl.q_windows):
        assert abs(poisson_bracket(mdl.H, K, x)) <= 1e-9 * bracket_scale(mdl.H, K, x)


def test_remark_pair_brackets_and_flags():
    h1, h2 = make_remark_pair(2.0, 3.0)
    assert h1.extendable is False and h2.extendable is False
    I1, I2 = h1.integral("I1"), h2.integral("I2")
    for x in wedge_points(50, 67):
        b1 = abs(poisson_bracket(h1.H, I1, x))
        assert b1 <= 1e-10 * bracket_scale(h1.H, I1, x)
        b2 = abs(poisson_bracket(h2.H, I2, x))
        assert b2 <= 1e-10 * bracket_scale(h2.H, I2, x)
    with pytest.raises(ValueError):
        h1.H(PhasePoint((-1.0, 1.0), (0.0, 0.0)))


def test_irrational_k_refuses_integrals_but_conserves_l():
    for kf in (0.37, math.sqrt(2.0)):
        mdl = make_minkowski_hamiltonian(kf, 1.0, 2.0, 0.0)
        assert [name for name, _ in mdl.known_integrals] == ["L"]
        assert mdl.extension is None
        L = mdl.integral("L")
        for x in wedge_points(20, 68):
            assert abs(poisson_bracket(mdl.H, L, x)) <= 1e-10 * bracket_scale(mdl.H, L, x)


def test_separability_integral_in_null_chart():
    mdl = make_minkowski_hamiltonian(Fraction(1), 1.0, 2.0, 0.0)
    for name, K in mdl.known_integrals:
        for x in wedge_points(25, 69):
            assert abs(poisson_bracket(mdl.H, K, x)) <= 1e-9 * bracket_scale(mdl.H, K, x)


def test_catalog_listing_is_json_serializable():
    listing = catalog_listing()
    blob = json.dumps(listing)
    ids = {entry["id"] for entry in listing}
    assert {"minkowski", "sphere", "pseudosphere", "de-sitter", "anti-de-sitter",
            "ttw-flat", "remark-h1", "remark-h2"} <= ids
    for entry in listing:
        assert set(entry) == {"id", "chart", "params", "known_integrals", "extendable"}
    assert json.loads(blob) == listing
