"""Concrete Hamiltonian families: Minkowski wedge system, base-potential
families, constant-curvature generalizations, the flat TTW form, and the
non-extendable pair, plus the null <-> pseudo-polar canonical transforms.

Rational parameters are passed as fractions.Fraction so the integral indices
(m, n) come out exact; irrational k is accepted for Hamiltonian construction
but characteristic-integral construction is refused.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from . import duals as dm
from .duals import primal
from .extension import BaseSystem, Extension, ExtensionSpec
from .phase import PhaseFunction, PhasePoint, lift_last
from .tagged_trig import GammaProfile

_SQRT2 = math.sqrt(2.0)


@dataclass
class ModelInstance:
    """A catalog Hamiltonian with its known first integrals and metadata."""

    id: str
    H: PhaseFunction
    known_integrals: list
    chart: str
    params: dict
    extendable: bool
    extension: Extension = None
    base: BaseSystem = None
    q_windows: tuple = None

    def integral(self, label):
        for name, f in self.known_integrals:
            if name == label:
                return f
        raise KeyError(label)

    def describe(self):
        return {
            "id": self.id,
            "chart": self.chart,
            "params": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.params.items()},
            "known_integrals": [name for name, _ in self.known_integrals],
            "extendable": self.extendable,
        }


# -- base-potential families -------------------------------------------------


def _window_free_of_zeros(g, window, label):
    lo, hi = window
    for i in range(201):
        psi = lo + (hi - lo) * i / 200.0
        if abs(g(psi)) < 1e-6:
            raise ValueError(f"{label}: gauge function vanishes inside psi window {window}")


def make_base_family(C1, C2, C3, C4, eta, branch, psi_window=None):
    """Base system with seed G = g(psi) p_psi.

    hyperbolic branch: g = C1 e^(eta psi) + C2 e^(-eta psi), c = -eta^2;
    trig branch:       g = C1 cos(|eta| psi) + C2 sin(|eta| psi), c = +eta^2;
    both with V = (C3 + C4 g'/eta_hat) / g^2 and c0 = 0.
    """
    if (C1, C2) == (0.0, 0.0):
        raise ValueError("C1 and C2 must not both vanish")
    if (C3, C4) == (0.0, 0.0):
        raise ValueError("C3 and C4 must not both vanish")
    if eta == 0.0:
        raise ValueError("eta must be nonzero")
    eta_hat = abs(eta)
    if branch == "hyperbolic":
        c = -(eta_hat**2)

        def g(psi):
            return C1 * dm.exp(eta_hat * psi) + C2 * dm.exp(-eta_hat * psi)

        def gp_over_eta(psi):
            return C1 * dm.exp(eta_hat * psi) - C2 * dm.exp(-eta_hat * psi)

    elif branch == "trig":
        c = eta_hat**2

        def g(psi):
            return C1 * dm.cos(eta_hat * psi) + C2 * dm.sin(eta_hat * psi)

        def gp_over_eta(psi):
            return -C1 * dm.sin(eta_hat * psi) + C2 * dm.cos(eta_hat * psi)

    else:
        raise ValueError(f"unknown branch {branch!r}")

    def V_rule(q, p):
        gv = g(q[0])
        return (C3 + C4 * gp_over_eta(q[0])) / (gv * gv)

    V = PhaseFunction(V_rule, 1)
    L = PhaseFunction(lambda q, p: 0.5 * p[0] * p[0] + V_rule(q, p), 1)
    G = PhaseFunction(lambda q, p: g(q[0]) * p[0], 1)
    if psi_window is None:
        psi_window = (0.3, 2.0)
    label = f"{branch}(C1={C1}, C2={C2})"
    _window_free_of_zeros(g, psi_window, label)
    return BaseSystem(
        family=f"V2-{branch}",
        params={"C1": C1, "C2": C2, "C3": C3, "C4": C4, "eta": eta},
        c=c,
        c0=0.0,
        V=V,
        L=L,
        G=G,
        g_scalar=g,
        eta_hat=eta_hat,
        psi_window=psi_window,
    )


def exp_base(alpha_t, beta_t, eta=2.0):
    """V = alpha_t e^(-2 eta psi) + beta_t e^(-eta psi), the Minkowski wedge base."""
    if alpha_t == 0.0 and beta_t == 0.0:
        return _free_base(eta)
    return make_base_family(1.0, 0.0, alpha_t, beta_t, eta, "hyperbolic")


def _free_base(eta):
    """V = 0: the seed G = e^(eta psi) p_psi still solves the c = -eta^2 equation."""

    def g(psi):
        return dm.exp(eta * psi)

    return BaseSystem(
        family="free",
        params={"C1": 1.0, "C2": 0.0, "C3": 0.0, "C4": 0.0, "eta": eta},
        c=-(eta**2),
        c0=0.0,
        V=PhaseFunction(lambda q, p: 0.0, 1),
        L=PhaseFunction(lambda q, p: 0.5 * p[0] * p[0], 1),
        G=PhaseFunction(lambda q, p: dm.exp(eta * q[0]) * p[0], 1),
        g_scalar=g,
        eta_hat=eta,
    )


def cosh_base(A, psi0, alpha, beta, eta=2.0):
    """g = A cosh(eta psi + psi0), V = (alpha + beta sinh(eta psi + psi0))/cosh^2(...)."""
    C1 = 0.5 * A * math.exp(psi0)
    C2 = 0.5 * A * math.exp(-psi0)
    return make_base_family(C1, C2, alpha * A * A, beta * A, eta, "hyperbolic")


def sinh_base(A, psi0, alpha, beta, eta=2.0, psi_window=(0.3, 2.0)):
    """g = A sinh(eta psi + psi0), V = (alpha + beta cosh(eta psi + psi0))/sinh^2(...)."""
    C1 = 0.5 * A * math.exp(psi0)
    C2 = -0.5 * A * math.exp(-psi0)
    return make_base_family(C1, C2, alpha * A * A, beta * A, eta, "hyperbolic", psi_window)


def trig_base(A, psi0, alpha, beta, abs_eta=1.0, psi_window=None):
    """g = A sin(|eta| psi + psi0), V = (alpha + beta cos(|eta| psi + psi0))/sin^2(...)."""
    C1 = A * math.sin(psi0)
    C2 = A * math.cos(psi0)
    if psi_window is None:
        # keep |eta| psi + psi0 inside (0.3, pi - 0.4), away from the sin zeros
        lo = max(0.05, (0.3 - psi0) / abs_eta)
        hi = (math.pi - 0.4 - psi0) / abs_eta
        psi_window = (lo, hi)
    return make_base_family(C1, C2, alpha * A * A, beta * A, abs_eta, "trig", psi_window)


def momentum_free_seed_base(C1, C2, C3, eta=2.0):
    """The position-only seed G = C1 e^(eta psi) - C2 e^(-eta psi) with V = C3/g^2."""
    if (C1, C2) == (0.0, 0.0):
        raise ValueError("C1 and C2 must not both vanish")
    if C3 == 0.0:
        raise ValueError("C3 must be nonzero")

    def g(psi):
        return C1 * dm.exp(eta * psi) + C2 * dm.exp(-eta * psi)

    V = PhaseFunction(lambda q, p: C3 / g(q[0]) ** 2, 1)
    L = PhaseFunction(lambda q, p: 0.5 * p[0] * p[0] + C3 / g(q[0]) ** 2, 1)
    G = PhaseFunction(
        lambda q, p: C1 * dm.exp(eta * q[0]) - C2 * dm.exp(-eta * q[0]), 1
    )
    _window_free_of_zeros(g, (0.3, 2.0), "V10")
    return BaseSystem(
        family="V10",
        params={"C1": C1, "C2": C2, "C3": C3, "eta": eta},
        c=-(eta**2),
        c0=0.0,
        V=V,
        L=L,
        G=G,
        g_scalar=g,
        eta_hat=eta,
    )


# -- null <-> pseudo-polar canonical transforms --------------------------------


def _check_k(k):
    kf = float(k)
    if kf == -1.0:
        raise ValueError("k = -1 degenerates the pseudo-polar map")
    return kf


def polar_coords_generic(k, q, p):
    """(u, psi, p_u, p_psi) from null coordinates; generic in duals."""
    kf = _check_k(k)
    q1, q2 = q
    p1, p2 = p
    if primal(q1) <= 0.0 or primal(q2) <= 0.0:
        raise ValueError("pseudo-polar chart requires the wedge q1 > 0, q2 > 0")
    u = dm.sqrt(2.0 * q1 * q2)
    chi = 0.5 * dm.log(q1 / q2)
    ech = dm.exp(chi)
    pu = (p1 * ech + p2 / ech) / _SQRT2
    ppsi = u * (p1 * ech - p2 / ech) / (_SQRT2 * (kf + 1.0))
    return (u, (kf + 1.0) * chi), (pu, ppsi)


def null_coords_generic(k, q, p):
    """Inverse of polar_coords_generic, also a cotangent lift."""
    kf = _check_k(k)
    u, psi = q
    pu, ppsi = p
    if primal(u) <= 0.0:
        raise ValueError("pseudo-polar chart requires u > 0")
    chi = psi / (kf + 1.0)
    ech = dm.exp(chi)
    q1 = u * ech / _SQRT2
    q2 = u / (ech * _SQRT2)
    rad = (kf + 1.0) * ppsi / u
    p1 = (pu + rad) / (ech * _SQRT2)
    p2 = ech * (pu - rad) / _SQRT2
    return (q1, q2), (p1, p2)


def to_pseudo_polar(k, x):
    q, p = polar_coords_generic(k, x.q, x.p)
    return PhasePoint(q, p)


def from_pseudo_polar(k, x):
    q, p = null_coords_generic(k, x.q, x.p)
    return PhasePoint(q, p)


def pullback_to_null(f_polar, k):
    """f on the (u, psi) chart composed with the pseudo-polar map."""
    rule = f_polar.rule

    def new_rule(q, p):
        qq, pp = polar_coords_generic(k, q, p)
        return rule(qq, pp)

    return PhaseFunction(new_rule, 2)


# -- Minkowski wedge model ------------------------------------------------------


def minkowski_indices(k):
    """(m, n) with m/n = 2(k+1) in lowest terms; k must be rational and > -1."""
    if not isinstance(k, Fraction):
        raise ValueError(
            "characteristic integrals need rational k given as a Fraction; "
            "irrational k only supports H construction and L conservation"
        )
    ratio = 2 * (k + 1)
    if ratio <= 0:
        raise ValueError("k must exceed -1 for positive integral indices")
    return ratio.numerator, ratio.denominator


def make_minkowski_hamiltonian(k, alpha, beta, Omega=0.0):
    """H = p1 p2 - alpha q2^(2k+1) q1^(-2k-3) - beta/2 q2^k q1^(-k-2) + 2 Omega q1 q2."""
    kf = _check_k(k)
    e1, e2 = 2 * kf + 1, -2 * kf - 3
    e3, e4 = kf, -kf - 2

    def H_rule(q, p):
        q1, q2 = q
        if primal(q1) <= 0.0 or primal(q2) <= 0.0:
            raise ValueError("Minkowski family is defined on the wedge q1, q2 > 0")
        val = (
            p[0] * p[1]
            - alpha * dm.pow_(q2, e1) * dm.pow_(q1, e2)
            - 0.5 * beta * dm.pow_(q2, e3) * dm.pow_(q1, e4)
        )
        if Omega != 0.0:
            val = val + 2.0 * Omega * q1 * q2
        return val

    H = PhaseFunction(H_rule, 2)

    alpha_t = 2.0 * alpha / (kf + 1.0) ** 2
    beta_t = beta / (kf + 1.0) ** 2
    base = exp_base(alpha_t, beta_t, eta=2.0)
    integrals = [("L", pullback_to_null(lift_last(base.L, 2), kf))]

    extension = None
    if isinstance(k, Fraction):
        m, n = minkowski_indices(k)
        profile = GammaProfile.from_c_C(-4.0, 0.0)
        # catalog Omega multiplies u^2 = 2 q1 q2; the extension scalar is
        # Omega_ext / gamma^2 = 16 Omega_ext u^2, so Omega_ext = Omega/16
        spec = ExtensionSpec(m, n, -4.0, 0.0, Omega / 16.0, profile)
        extension = Extension(spec, base)
        if Omega == 0.0:
            K_polar = extension.k_closed()
            integral_label = f"K({m},{n})"
        elif m % 2 == 0:
            K_polar = extension.kbar_closed(m // 2, n)
            integral_label = f"Kbar({m},{n})"
        else:
            spec2 = ExtensionSpec(2 * m, 2 * n, -4.0, 0.0, Omega / 16.0, profile)
            K_polar = Extension(spec2, base).kbar_closed(m, 2 * n)
            integral_label = f"Kbar({2*m},{2*n})"
        integrals.append((integral_label, pullback_to_null(K_polar, kf)))

    return ModelInstance(
        id="minkowski",
        H=H,
        known_integrals=integrals,
        chart="null-coordinates",
        params={"k": k, "alpha": alpha, "beta": beta, "Omega": Omega},
        extendable=True,
        extension=extension,
        base=base,
        q_windows=((0.3, 2.0), (0.3, 2.0)),
    )


# -- constant-curvature and flat TTW models -------------------------------------


_CURVED_CHARTS = {
    (1, 1): "sphere S2",
    (1, -1): "pseudosphere H2",
    (-1, 1): "de Sitter dS2",
    (-1, -1): "anti-de Sitter AdS2",
}


def make_curved_hamiltonian(base, k, kappa, Omega=0.0, model_id=None):
    """Extension of the base on a curved background: kappa = +1 or -1.

    The warp is (k+1)^2 c / S_kappa^2(c u) with m/n = k+1, and the scalar
    term Omega / gamma^2 equals Omega tan^2(c u) (kappa=+1) or
    Omega tanh^2(c u) (kappa=-1).
    """
    if kappa not in (1, -1):
        raise ValueError("kappa must be +1 or -1")
    if not isinstance(k, Fraction):
        raise ValueError("curved models take rational k (a Fraction)")
    ratio = k + 1
    if ratio <= 0:
        raise ValueError("k must exceed -1")
    m, n = ratio.numerator, ratio.denominator
    c = base.c
    profile = GammaProfile.from_c_kappa(c, float(kappa))
    spec = ExtensionSpec(m, n, c, 0.0, Omega, profile)
    ext = Extension(spec, base)
    chart = _CURVED_CHARTS[(1 if c > 0 else -1, kappa)]
    if kappa == 1:
        u_window = (0.3 / abs(c), 1.25 / abs(c))
    else:
        u_window = (0.3 / abs(c), 2.0 / abs(c))
    integrals = [("L", lift_last(base.L, 2))]
    if Omega == 0.0:
        integrals.append((f"K({m},{n})", ext.k_closed()))
    elif m % 2 == 0:
        integrals.append((f"Kbar({m},{n})", ext.kbar_closed(m // 2, n)))
    else:
        spec2 = ExtensionSpec(2 * m, 2 * n, c, 0.0, Omega, profile)
        integrals.append((f"Kbar({2*m},{2*n})", Extension(spec2, base).kbar_closed(m, 2 * n)))
    return ModelInstance(
        id=model_id or chart.split()[0],
        H=ext.hamiltonian(),
        known_integrals=integrals,
        chart=chart,
        params={"k": k, "c": c, "kappa": kappa, "Omega": Omega, **base.params},
        extendable=True,
        extension=ext,
        base=base,
        q_windows=(u_window, base.psi_window),
    )


def make_flat_ttw_hamiltonian(base, m, n, Omega=0.0):
    """H = p_u^2/2 + m^2/(|eta|^2 n^2 u^2) L + eta^4 u^2 Omega on the plane."""
    if base.c <= 0.0:
        raise ValueError("the flat model needs a trig-branch base (c > 0)")
    profile = GammaProfile.from_c_C(base.c, 0.0)
    spec = ExtensionSpec(m, n, base.c, 0.0, Omega, profile)
    ext = Extension(spec, base)
    integrals = [("L", lift_last(base.L, 2))]
    if Omega == 0.0:
        integrals.append((f"K({m},{n})", ext.k_closed()))
    elif m % 2 == 0:
        integrals.append((f"Kbar({m},{n})", ext.kbar_closed(m // 2, n)))
    else:
        spec2 = ExtensionSpec(2 * m, 2 * n, base.c, 0.0, Omega, profile)
        integrals.append((f"Kbar({2*m},{2*n})", Extension(spec2, base).kbar_closed(m, 2 * n)))
    return ModelInstance(
        id="ttw-flat",
        H=ext.hamiltonian(),
        known_integrals=integrals,
        chart="euclidean E2",
        params={"m": m, "n": n, "Omega": Omega, **base.params},
        extendable=True,
        extension=ext,
        base=base,
        q_windows=((0.3, 2.0), base.psi_window),
    )


# -- the non-extendable pair ------------------------------------------------


def make_remark_pair(d1=2.0, d2=3.0):
    """Two wedge Hamiltonians with quadratic integrals that admit no extension.

    The bracket identities {H1, I1} = {H2, I2} = 0 hold for every real d;
    the integer-derived choices d1 in {p, (1-2p)/2} and d2 in
    {(1-p)/p, (1+2p)/(1-2p)} (p natural) are recorded as metadata only.
    """
    d1f, d2f = float(d1), float(d2)

    def _wedge(q):
        if primal(q[0]) <= 0.0:
            raise ValueError("q1 > 0 required")

    def H1_rule(q, p):
        _wedge(q)
        return 2.0 * p[0] * p[1] + dm.pow_(q[1], d1f) / dm.sqrt(q[0])

    def I1_rule(q, p):
        _wedge(q)
        return 2.0 * p[0] * (q[1] * p[1] - p[0] * q[0]) + dm.pow_(q[1], d1f + 1.0) / dm.sqrt(q[0])

    def H2_rule(q, p):
        return 2.0 * p[0] * p[1] + q[0] * dm.pow_(q[1], d2f)

    def I2_rule(q, p):
        return p[0] * p[0] + dm.pow_(q[1], d2f + 1.0) / (d2f + 1.0)

    first = ModelInstance(
        id="remark-h1",
        H=PhaseFunction(H1_rule, 2),
        known_integrals=[("I1", PhaseFunction(I1_rule, 2))],
        chart="null-coordinates",
        params={"d": d1f, "rule": "d = p or d = (1-2p)/2, p natural"},
        extendable=False,
        q_windows=((0.3, 2.0), (0.3, 2.0)),
    )
    second = ModelInstance(
        id="remark-h2",
        H=PhaseFunction(H2_rule, 2),
        known_integrals=[("I2", PhaseFunction(I2_rule, 2))],
        chart="null-coordinates",
        params={"d": d2f, "rule": "d = (1-p)/p or d = (1+2p)/(1-2p), p natural"},
        extendable=False,
        q_windows=((0.3, 2.0), (0.3, 2.0)),
    )
    return first, second


# -- machine-readable catalog -------------------------------------------------


def default_models():
    """One representative instance per catalog family."""
    tb = trig_base(1.0, 0.2, 1.0, 0.5, 1.0)
    models = [
        make_minkowski_hamiltonian(Fraction(1), 1.0, 2.0, 0.0),
        make_curved_hamiltonian(tb, Fraction(1), 1, 0.0, model_id="sphere"),
        make_curved_hamiltonian(tb, Fraction(1), -1, 0.0, model_id="pseudosphere"),
        make_curved_hamiltonian(exp_base(0.7, 1.3), Fraction(1), 1, 0.0, model_id="de-sitter"),
        make_curved_hamiltonian(exp_base(0.7, 1.3), Fraction(1), -1, 0.0, model_id="anti-de-sitter"),
        make_flat_ttw_hamiltonian(tb, 2, 1, 0.0),
    ]
    models.extend(make_remark_pair())
    return models


def catalog_listing():
    return [m.describe() for m in default_models()]
