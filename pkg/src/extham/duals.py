"""Nested first-order dual numbers for exact forward-mode differentiation.

A :class:`Dual` carries a value and one derivative slot. Derivatives of
derivatives are obtained by re-instrumenting an evaluation with a fresh
tag; tags keep independent differentiation levels from collapsing into
each other (the classic perturbation-confusion failure of naive nested
duals). Plain floats act as constants at every level, so mixed-depth
arithmetic is cheap.
"""

import itertools
import math

_fresh_tag = itertools.count(1).__next__


class Dual:
    """Value plus a single tagged derivative slot; components may be Duals."""

    __slots__ = ("val", "dot", "tag")

    def __init__(self, val, dot, tag):
        self.val = val
        self.dot = dot
        self.tag = tag

    def __repr__(self):
        return f"Dual({self.val!r}, {self.dot!r}, tag={self.tag})"

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Dual):
            if other.tag == self.tag:
                return Dual(self.val + other.val, self.dot + other.dot, self.tag)
            if other.tag > self.tag:
                return Dual(self + other.val, other.dot, other.tag)
        return Dual(self.val + other, self.dot, self.tag)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            if other.tag == self.tag:
                return Dual(self.val - other.val, self.dot - other.dot, self.tag)
            if other.tag > self.tag:
                return Dual(self - other.val, -other.dot, other.tag)
        return Dual(self.val - other, self.dot, self.tag)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.dot, self.tag)

    def __neg__(self):
        return Dual(-self.val, -self.dot, self.tag)

    def __mul__(self, other):
        if isinstance(other, Dual):
            if other.tag == self.tag:
                return Dual(
                    self.val * other.val,
                    self.val * other.dot + self.dot * other.val,
                    self.tag,
                )
            if other.tag > self.tag:
                return Dual(self * other.val, self * other.dot, other.tag)
        return Dual(self.val * other, self.dot * other, self.tag)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            if other.tag == self.tag:
                q = self.val / other.val
                return Dual(q, (self.dot - q * other.dot) / other.val, self.tag)
            if other.tag > self.tag:
                q = self / other.val
                return Dual(q, -q * other.dot / other.val, other.tag)
        return Dual(self.val / other, self.dot / other, self.tag)

    def __rtruediv__(self, other):
        q = other / self.val
        return Dual(q, -q * self.dot / self.val, self.tag)

    def __pow__(self, r):
        if isinstance(r, Dual):
            return exp(r * log(self))
        if r == 0:
            return Dual(1.0, 0.0, self.tag)
        if r == 1:
            return self
        if r == 2:
            return self * self
        return Dual(pow_(self.val, r), (r * pow_(self.val, r - 1)) * self.dot, self.tag)

    def __rpow__(self, base):
        return exp(self * math.log(base))

    def __abs__(self):
        s = 1.0 if primal(self) >= 0.0 else -1.0
        return Dual(abs(self.val), self.dot * s, self.tag)

    # Comparisons act on the underlying primal value.
    def __lt__(self, other):
        return primal(self) < primal(other)

    def __le__(self, other):
        return primal(self) <= primal(other)

    def __gt__(self, other):
        return primal(self) > primal(other)

    def __ge__(self, other):
        return primal(self) >= primal(other)


def primal(x):
    """Strip every derivative layer, returning the plain float value."""
    while isinstance(x, Dual):
        x = x.val
    return x


def seed(x, tag):
    """Wrap x as the variable of differentiation for the given tag."""
    return Dual(x, 1.0, tag)


def new_tag():
    """Allocate a fresh differentiation level."""
    return _fresh_tag()


def value_part(y, tag):
    """Value of y with the given tag's derivative layer removed."""
    if isinstance(y, Dual) and y.tag == tag:
        return y.val
    return y


def tangent_part(y, tag):
    """Derivative of y with respect to the variable seeded at the given tag."""
    if isinstance(y, Dual) and y.tag == tag:
        return y.dot
    return 0.0


def derivative(f, x):
    """Exact derivative of a scalar function at x (x may itself be a Dual)."""
    tag = _fresh_tag()
    y = f(Dual(x, 1.0, tag))
    return tangent_part(y, tag)


def nth_derivative(f, x, order):
    """Iterated exact derivative; nesting depth equals order."""
    if order == 0:
        return f(x)
    return derivative(lambda t: nth_derivative(f, t, order - 1), x)


# -- math functions that dispatch on Dual --------------------------------


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.val)
        return Dual(e, e * x.dot, x.tag)
    return math.exp(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(log(x.val), x.dot / x.val, x.tag)
    return math.log(x)


def sqrt(x):
    if isinstance(x, Dual):
        s = sqrt(x.val)
        return Dual(s, x.dot / (s + s), x.tag)
    return math.sqrt(x)


def sin(x):
    if isinstance(x, Dual):
        return Dual(sin(x.val), cos(x.val) * x.dot, x.tag)
    return math.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(cos(x.val), -sin(x.val) * x.dot, x.tag)
    return math.cos(x)


def tan(x):
    if isinstance(x, Dual):
        t = tan(x.val)
        return Dual(t, (1.0 + t * t) * x.dot, x.tag)
    return math.tan(x)


def sinh(x):
    if isinstance(x, Dual):
        return Dual(sinh(x.val), cosh(x.val) * x.dot, x.tag)
    return math.sinh(x)


def cosh(x):
    if isinstance(x, Dual):
        return Dual(cosh(x.val), sinh(x.val) * x.dot, x.tag)
    return math.cosh(x)


def tanh(x):
    if isinstance(x, Dual):
        t = tanh(x.val)
        return Dual(t, (1.0 - t * t) * x.dot, x.tag)
    return math.tanh(x)


def pow_(x, r):
    """x**r for real r; raises ValueError off the real domain (negative base)."""
    if isinstance(x, Dual):
        return x**r
    return math.pow(x, r)
