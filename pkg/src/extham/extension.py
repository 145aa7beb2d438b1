"""Extension engine: seed equation, G_n chain, U operator, extended H, K and Kbar.

Everything here evaluates pointwise through the exact differentiation scheme.
Two independent routes exist for each construction: the literal operator
recursion (U applied repeatedly, G_n built by its recursion) and the closed
binomial expansions; tests pin their pointwise equality.

The base Hamiltonian L acts on the trailing (psi, p_psi) block of the
extended phase space (u, psi, p_u, p_psi); functions of the base block are
silently lifted. X_L never touches (u, p_u), so multiplication by any
function of u commutes with the U operator.
"""

import math
from dataclasses import dataclass

import numpy as np

from .phase import (
    PhaseFunction,
    gradient,
    hamiltonian_vector_field,
    lift_last,
    partials_at,
)
from .tagged_trig import GammaProfile, gamma, gamma_prime


@dataclass(frozen=True)
class ExtensionSpec:
    """Indices and constants (m, n, c, c0, Omega) plus the gamma branch of one extension."""

    m: int
    n: int
    c: float
    c0: float
    Omega: float
    gamma: GammaProfile

    def __post_init__(self):
        if not (isinstance(self.m, int) and isinstance(self.n, int)):
            raise TypeError("m and n must be integers")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if self.c == 0.0 and self.c0 == 0.0:
            raise ValueError("(c, c0) must not both vanish")
        if abs(self.gamma.c - self.c) > 1e-12 * (1.0 + abs(self.c)):
            raise ValueError("gamma profile must solve the ODE with the same c")

    @property
    def gcd(self):
        return math.gcd(self.m, self.n)

    @property
    def ratio(self):
        return self.m / self.n


@dataclass
class BaseSystem:
    """One-dimensional natural Hamiltonian L = p^2/2 + V with its seed G.

    The seed satisfies X_L^2(G) = -2(c L + c0) G for the recorded (c, c0).
    psi_window is the position interval on which the family is free of
    singularities; samplers respect it.
    """

    family: str
    params: dict
    c: float
    c0: float
    V: PhaseFunction
    L: PhaseFunction
    G: PhaseFunction
    g_scalar: object = None
    eta_hat: float = None
    psi_window: tuple = (0.3, 2.0)

    def __post_init__(self):
        if self.V.dof != 1 or self.L.dof != 1 or self.G.dof != 1:
            raise ValueError("base system functions must live on the 1-dof phase space")


def seed_equation_terms(base, c, c0, x):
    """(X_L^2 G, 2(cL+c0)G) at x; their sum is the seed-equation residual."""
    xg = hamiltonian_vector_field(base.L, base.G)
    x2g = hamiltonian_vector_field(base.L, xg)
    return x2g(x), 2.0 * (c * base.L(x) + c0) * base.G(x)


def seed_equation_residual(base, c, c0, x):
    """X_L^2(G)(x) + 2(cL(x)+c0)G(x); zero certifies the extension seed."""
    a, b = seed_equation_terms(base, c, c0, x)
    return a + b


class Extension:
    """An ExtensionSpec bound to a BaseSystem, with memoized U-operator chains."""

    def __init__(self, spec, base):
        self.spec = spec
        self.base = base
        self._lifted_L = lift_last(base.L, 2)
        self._chains = {}

    # -- pointwise seed data ---------------------------------------------

    def _seed_triple(self, q1, p1):
        """(G, X_L G, L) values at a base-block point; inputs may be duals."""
        Gv, Gq, Gp = partials_at(self.base.G, q1, p1, (0,))
        Lv, Lq, Lp = partials_at(self.base.L, q1, p1, (0,))
        xg = Gq[0] * Lp[0] - Gp[0] * Lq[0]
        return Gv, xg, Lv

    def _gn_xgn_values(self, q1, p1, n, magnitudes=False):
        """Closed-form (G_n, X_L G_n) from powers of (G, X_L G, cL+c0).

        X_L acts as a derivation with X_L(G) = XG, X_L(XG) = -2(cL+c0)G and
        X_L(L) = 0, which turns both sums into plain algebra. With
        magnitudes=True, absolute values of the summands are accumulated
        instead: the intrinsic scale against which the cancelling sums are
        conditioned.
        """
        G, XG, L = self._seed_triple(q1, p1)
        w = self.spec.c * L + self.spec.c0
        if magnitudes:
            G, XG, w = abs(G), abs(XG), abs(w)
            sign = 2
        else:
            sign = -2
        gn = 0.0
        xgn = 0.0
        for j in range((n - 1) // 2 + 1):
            coef = math.comb(n, 2 * j + 1) * sign**j
            t = coef * w**j
            gn = gn + t * G ** (2 * j + 1) * XG ** (n - 2 * j - 1)
            xgn = xgn + t * (2 * j + 1) * G ** (2 * j) * XG ** (n - 2 * j)
            if n - 2 * j - 1 > 0:
                term = t * 2 * (n - 2 * j - 1) * w * G ** (2 * j + 2) * XG ** (n - 2 * j - 2)
                xgn = (xgn + term) if magnitudes else (xgn - term)
        return gn, xgn, L

    def _pd_values(self, r, gam, pu, w, magnitudes=False):
        """Closed-form P_{m,n,r} and D_{m,n,r} in powers of (m/n)gamma, p_u, cL+c0."""
        mg = (self.spec.m / self.spec.n) * gam
        if magnitudes:
            mg, pu, w = abs(mg), abs(pu), abs(w)
            sign = 2
        else:
            sign = -2
        P = 0.0
        for j in range(r // 2 + 1):
            P = P + math.comb(r, 2 * j) * sign**j * mg ** (2 * j) * pu ** (r - 2 * j) * w**j
        D = 0.0
        for j in range((r - 1) // 2 + 1):
            D = D + math.comb(r, 2 * j + 1) * sign**j * mg ** (2 * j + 1) * pu ** (r - 2 * j - 1) * w**j
        return P, (1.0 / self.spec.n) * D

    # -- G_n chain ---------------------------------------------------------

    def gn_recursive(self, n):
        """G_n by the literal recursion G_{k+1} = X_L(G) G_k + (1/k) G X_L(G_k)."""
        if n < 1:
            raise ValueError("n must be positive")
        G = self.base.G
        XG = hamiltonian_vector_field(self.base.L, G)
        g = G
        for k in range(1, n):
            g = XG * g + (1.0 / k) * G * hamiltonian_vector_field(self.base.L, g)
        return g

    def gn_closed(self, n):
        """G_n from its binomial expansion in G, X_L G and (cL+c0)."""
        if n < 1:
            raise ValueError("n must be positive")

        def rule(q, p):
            return self._gn_xgn_values(q, p, n)[0]

        return PhaseFunction(rule, 1)

    def xl_gn_closed(self, n):
        """X_L(G_n) in closed form (derivation applied to the expansion)."""

        def rule(q, p):
            return self._gn_xgn_values(q, p, n)[1]

        return PhaseFunction(rule, 1)

    # -- extended Hamiltonian and the U operator ---------------------------

    def hamiltonian(self, extra_scalar=None):
        """H = p_u^2/2 - (m/n)^2 gamma' L + (m/n)^2 c0 gamma^2 + Omega/gamma^2."""
        spec = self.spec
        prof = spec.gamma
        ratio2 = (spec.m / spec.n) ** 2
        L = self.base.L
        c0 = spec.c0
        Om = spec.Omega
        scalar_off = (
            isinstance(Om, (int, float)) and Om == 0.0 and c0 == 0.0 and extra_scalar is None
        )

        def rule(q, p):
            u = q[0]
            Lv = L.rule(q[1:], p[1:])
            H = 0.5 * p[0] * p[0] - ratio2 * gamma_prime(prof, u) * Lv
            if not scalar_off:
                g = gamma(prof, u)
                H = H + ratio2 * c0 * g * g + Om / (g * g)
                if extra_scalar is not None:
                    H = H + extra_scalar(u)
            return H

        return PhaseFunction(rule, 2)

    def u_apply(self, f):
        """U(f) = p_u f + (m/n^2) gamma X_L(f), X_L acting on the base block only."""
        f = lift_last(f, 2)
        coef = self.spec.m / self.spec.n**2
        prof = self.spec.gamma
        L = self._lifted_L

        def rule(q, p):
            fv, fq, fp = partials_at(f, q, p, (1,))
            _, Lq, Lp = partials_at(L, q, p, (1,))
            xl = fq[0] * Lp[0] - fp[0] * Lq[0]
            return p[0] * fv + coef * gamma(prof, q[0]) * xl

        return PhaseFunction(rule, 2)

    def u_power_applied(self, start, key, r):
        """U^r(start); chains are memoized per (key, r)."""
        if r == 0:
            return lift_last(start, 2)
        prev = self._chains.get((key, r))
        if prev is None:
            prev = self.u_apply(self.u_power_applied(start, key, r - 1))
            self._chains[(key, r)] = prev
        return prev

    # -- characteristic first integrals ------------------------------------

    def k_recursive(self):
        """K_{m,n} = U^m(G_n) via the operator recursion (Omega must be 0)."""
        self._require_omega_zero()
        n = self.spec.n
        return self.u_power_applied(self.gn_recursive(n), ("gn", n), self.spec.m)

    def k_closed(self):
        """K_{m,n} = P_{m,n,m} G_n + D_{m,n,m} X_L(G_n) in closed form."""
        self._require_omega_zero()
        spec = self.spec

        def rule(q, p):
            gn, xgn, L = self._gn_xgn_values(q[1:], p[1:], spec.n)
            w = spec.c * L + spec.c0
            gam = gamma(spec.gamma, q[0])
            P, D = self._pd_values(spec.m, gam, p[0], w)
            return P * gn + D * xgn

        return PhaseFunction(rule, 2)

    def _require_omega_zero(self):
        Om = self.spec.Omega
        if not (isinstance(Om, (int, float)) and Om == 0.0):
            raise ValueError("K_{m,n} requires Omega = 0; use kbar for Omega != 0")

    def _check_kbar_indices(self, s, r):
        if s < 1 or r < 1:
            raise ValueError("s and r must be strictly positive")
        if self.spec.m != 2 * s or self.spec.n != r:
            raise ValueError("kbar requires spec indices (m, n) = (2s, r)")

    def kbar_closed(self, s, r):
        """Kbar_{2s,r} = sum_j C(s,j) (2 Omega/gamma^2)^j U^{2(s-j)}(G_r), expanded."""
        self._check_kbar_indices(s, r)
        spec = self.spec

        def rule(q, p):
            gn, xgn, L = self._gn_xgn_values(q[1:], p[1:], r)
            w = spec.c * L + spec.c0
            gam = gamma(spec.gamma, q[0])
            om_term = 2.0 * spec.Omega / (gam * gam)
            total = 0.0
            for j in range(s + 1):
                P, D = self._pd_values(2 * (s - j), gam, p[0], w)
                total = total + math.comb(s, j) * om_term**j * (P * gn + D * xgn)
            return total

        return PhaseFunction(rule, 2)

    def kbar_recursive(self, s, r):
        """Kbar_{2s,r} = (U^2 + 2 Omega gamma^-2)^s (G_r) by operator application."""
        self._check_kbar_indices(s, r)
        spec = self.spec
        om_of_u = PhaseFunction(
            lambda q, p: 2.0 * spec.Omega / gamma(spec.gamma, q[0]) ** 2, 2
        )
        f = lift_last(self.gn_recursive(r), 2)
        for _ in range(s):
            f = self.u_apply(self.u_apply(f)) + om_of_u * f
        return f

    def momentum_degree_bound(self):
        """Exact polynomial degree of K (and Kbar) in the momenta: m + 2n - 1."""
        return self.spec.m + 2 * self.spec.n - 1

    def k_magnitude(self, x):
        """Sum of absolute summand magnitudes of the closed form of K at x.

        agreement tolerances are taken relative to this scale: the value of
        K itself can sit many orders below it through cancellation.
        """
        spec = self.spec
        gn, xgn, L = self._gn_xgn_values(x.q[1:], x.p[1:], spec.n, magnitudes=True)
        w = spec.c * L + spec.c0
        gam = gamma(spec.gamma, x.q[0])
        P, D = self._pd_values(spec.m, gam, x.p[0], w, magnitudes=True)
        return P * gn + abs(D) * xgn

    def kbar_magnitude(self, x, s, r):
        spec = self.spec
        gn, xgn, L = self._gn_xgn_values(x.q[1:], x.p[1:], r, magnitudes=True)
        w = spec.c * L + spec.c0
        gam = gamma(spec.gamma, x.q[0])
        om_term = abs(2.0 * spec.Omega / (gam * gam))
        total = 0.0
        for j in range(s + 1):
            P, D = self._pd_values(2 * (s - j), gam, x.p[0], w, magnitudes=True)
            total = total + math.comb(s, j) * om_term**j * (P * gn + abs(D) * xgn)
        return total


# -- spec-level operation surface (thin wrappers) ---------------------------


def build_gn_recursive(base, c, c0, n):
    spec = ExtensionSpec(1, 1, c, c0, 0.0, GammaProfile.from_c_C(c, 0.0))
    return Extension(spec, base).gn_recursive(n)


def build_gn_closed(base, c, c0, n):
    spec = ExtensionSpec(1, 1, c, c0, 0.0, GammaProfile.from_c_C(c, 0.0))
    return Extension(spec, base).gn_closed(n)


def build_extended_hamiltonian(spec, base, extra_scalar=None):
    return Extension(spec, base).hamiltonian(extra_scalar)


def u_apply(spec, base, f):
    return Extension(spec, base).u_apply(f)


def k_integral_recursive(spec, base):
    return Extension(spec, base).k_recursive()


def k_integral_closed(spec, base):
    return Extension(spec, base).k_closed()


def kbar_integral(spec, base, s, r):
    return Extension(spec, base).kbar_closed(s, r)


def functional_independence(fs, x):
    """Rank of the Jacobian of fs w.r.t. all phase coordinates at x.

    Rows are normalized before the SVD: gradients of high-degree integrals
    run 8+ orders larger than those of H and L, which would otherwise push
    genuinely independent directions under any relative threshold.
    """
    jac = np.array([gradient(f, x) for f in fs])
    norms = np.linalg.norm(jac, axis=1)
    safe = np.where(norms > 0.0, norms, 1.0)
    svals = np.linalg.svd(jac / safe[:, None], compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return 0
    return int(np.sum(svals > 1e-8 * svals[0]))


def bracket_scale(f, g, x):
    """The relative scale |grad f||grad g| used by every bracket tolerance."""
    return float(np.linalg.norm(gradient(f, x)) * np.linalg.norm(gradient(g, x)))
