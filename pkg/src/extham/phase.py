"""Phase-space points, smooth phase functions, Poisson brackets and X_L.

Evaluation rules receive the coordinate and momentum blocks as tuples whose
entries are floats or :class:`~extham.duals.Dual` numbers, so every function
built from them supports exact first derivatives in any single phase
direction, at any nesting depth. Functions are immutable after construction
and all operations are pure; concurrent evaluation at distinct points needs
no synchronization.
"""

from dataclasses import dataclass

import numpy as np

from . import duals
from .duals import new_tag, primal, tangent_part, value_part


@dataclass(frozen=True)
class PhasePoint:
    """Real phase-space point: position block q and momentum block p."""

    q: tuple
    p: tuple

    def __post_init__(self):
        q = tuple(float(v) for v in self.q)
        p = tuple(float(v) for v in self.p)
        if len(q) != len(p):
            raise ValueError(f"q and p must have equal length, got {len(q)} and {len(p)}")
        if not all(np.isfinite(q + p)):
            raise ValueError(f"non-finite phase point: q={q} p={p}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def dof(self):
        return len(self.q)

    def as_array(self):
        return np.array(self.q + self.p, dtype=float)

    @staticmethod
    def from_array(z):
        d = len(z) // 2
        return PhasePoint(tuple(z[:d]), tuple(z[d:]))


class PhaseFunction:
    """Scalar phase-space function with exact first-derivative support.

    Wraps an evaluation rule ``rule(q, p) -> scalar`` that must be generic in
    its inputs (floats or Duals). Supports pointwise algebra so composite
    functions stay differentiable.
    """

    __slots__ = ("rule", "dof")

    def __init__(self, rule, dof):
        self.rule = rule
        self.dof = dof

    def __call__(self, x):
        if x.dof != self.dof:
            raise ValueError(f"function of {self.dof} dof evaluated at a {x.dof}-dof point")
        return self.rule(x.q, x.p)

    def _combine(self, other, op):
        if isinstance(other, PhaseFunction):
            if other.dof != self.dof:
                raise ValueError("cannot combine phase functions of different dof")
            f, g = self.rule, other.rule
            return PhaseFunction(lambda q, p: op(f(q, p), g(q, p)), self.dof)
        f = self.rule
        return PhaseFunction(lambda q, p: op(f(q, p), other), self.dof)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._combine(other, lambda a, b: b / a)

    def __pow__(self, r):
        f = self.rule
        return PhaseFunction(lambda q, p: f(q, p) ** r, self.dof)

    def __neg__(self):
        f = self.rule
        return PhaseFunction(lambda q, p: -f(q, p), self.dof)


def coordinate(i, dof):
    """The i-th position coordinate as a phase function."""
    return PhaseFunction(lambda q, p: q[i], dof)


def momentum(i, dof):
    """The i-th momentum coordinate as a phase function."""
    return PhaseFunction(lambda q, p: p[i], dof)


def constant(c, dof):
    return PhaseFunction(lambda q, p: c, dof)


def lift_last(f, dof):
    """Promote a function to a larger phase space, reading the trailing block.

    A function of (psi, p_psi) lifted to (u, psi, p_u, p_psi) ignores the
    leading slots; this is the silent promotion used by the extension
    machinery.
    """
    if f.dof > dof:
        raise ValueError("cannot lift to a smaller phase space")
    if f.dof == dof:
        return f
    k = f.dof
    rule = f.rule
    return PhaseFunction(lambda q, p: rule(q[-k:], p[-k:]), dof)


def _seeded(block, i, tag):
    return block[:i] + (duals.seed(block[i], tag),) + block[i + 1 :]


def partials_at(f, q, p, slots):
    """df/dq_i and df/dp_i for each slot i, plus the plain value of f.

    Each directional derivative costs one instrumented evaluation; the value
    is recovered from the primal of the first one for free.
    """
    dq = []
    dp = []
    value = None
    for i in slots:
        tag = new_tag()
        y = f.rule(_seeded(q, i, tag), p)
        if value is None:
            value = value_part(y, tag)
        dq.append(tangent_part(y, tag))
        tag = new_tag()
        y = f.rule(q, _seeded(p, i, tag))
        dp.append(tangent_part(y, tag))
    if value is None:
        value = f.rule(q, p)
    return value, dq, dp


def poisson_bracket(f, g, x):
    """{f, g} = sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i at the point x."""
    return poisson_bracket_generic(f, g, x.q, x.p)


def poisson_bracket_generic(f, g, q, p):
    if f.dof != g.dof:
        raise ValueError("bracket of functions on different phase spaces")
    slots = range(f.dof)
    _, fq, fp = partials_at(f, q, p, slots)
    _, gq, gp = partials_at(g, q, p, slots)
    total = 0.0
    for i in slots:
        total = total + (fq[i] * gp[i] - fp[i] * gq[i])
    return total


def hamiltonian_vector_field(L, f, slots=None):
    """X_L(f) = {f, L} as a new phase function, optionally restricted to slots.

    Restricting slots is only a shortcut for Hamiltonians whose remaining
    partial derivatives vanish identically (e.g. a lifted base Hamiltonian
    that never reads the leading block); values are unchanged.
    """
    if L.dof != f.dof:
        raise ValueError("X_L requires L and f on the same phase space")
    active = tuple(range(L.dof)) if slots is None else tuple(slots)

    def rule(q, p):
        _, fq, fp = partials_at(f, q, p, active)
        _, Lq, Lp = partials_at(L, q, p, active)
        total = 0.0
        for k in range(len(active)):
            total = total + (fq[k] * Lp[k] - fp[k] * Lq[k])
        return total

    return PhaseFunction(rule, f.dof)


def gradient(f, x):
    """All first partials (d/dq..., d/dp...) as a numpy vector."""
    _, dq, dp = partials_at(f, x.q, x.p, range(f.dof))
    return np.array([primal(v) for v in dq] + [primal(v) for v in dp])


def fd_gradient(f, x, h=1e-5):
    """Central-difference gradient; the independent cross-check oracle."""
    z = x.as_array()
    out = np.empty_like(z)
    for i in range(len(z)):
        zp = z.copy()
        zm = z.copy()
        zp[i] += h
        zm[i] -= h
        out[i] = (f(PhasePoint.from_array(zp)) - f(PhasePoint.from_array(zm))) / (2 * h)
    return out


def fd_poisson_bracket(f, g, x, h=1e-5):
    """Brute-force bracket from central differences only."""
    d = x.dof
    gf = fd_gradient(f, x, h)
    gg = fd_gradient(g, x, h)
    return float(sum(gf[i] * gg[d + i] - gf[d + i] * gg[i] for i in range(d)))
