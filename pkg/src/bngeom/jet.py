"""Second-order forward-mode differentiation.

A :class:`Jet2` is a truncated Taylor expansion ``f(x0 + h) ~ val + grad.h +
h.hess.h / 2`` carried through arithmetic, so any expression built from
``+ - * /`` on jets yields exact (to rounding) first and second partials.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Jet2", "variables", "constant"]


class Jet2:
    __slots__ = ("val", "grad", "hess")

    def __init__(self, val, grad, hess):
        self.val = float(val)
        self.grad = grad
        self.hess = hess

    @property
    def dim(self):
        return self.grad.shape[0]

    def _lift(self, other):
        if isinstance(other, Jet2):
            return other
        d = self.dim
        return Jet2(other, np.zeros(d), np.zeros((d, d)))

    def __add__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.val + other, self.grad, self.hess)
        return Jet2(self.val + other.val, self.grad + other.grad, self.hess + other.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.val - other, self.grad, self.hess)
        return Jet2(self.val - other.val, self.grad - other.grad, self.hess - other.hess)

    def __rsub__(self, other):
        return Jet2(other - self.val, -self.grad, -self.hess)

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.val * other, self.grad * other, self.hess * other)
        a, b = self, other
        cross = np.outer(a.grad, b.grad)
        return Jet2(
            a.val * b.val,
            a.val * b.grad + b.val * a.grad,
            a.val * b.hess + b.val * a.hess + cross + cross.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.val / other, self.grad / other, self.hess / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self):
        v = self.val
        if v == 0.0:
            raise ZeroDivisionError("reciprocal of a jet with zero value")
        g = self.grad
        return Jet2(1.0 / v, -g / v**2, -self.hess / v**2 + 2.0 * np.outer(g, g) / v**3)

    def __repr__(self):
        return f"Jet2(val={self.val!r}, dim={self.dim})"


def constant(value, dim):
    return Jet2(value, np.zeros(dim), np.zeros((dim, dim)))


def variables(x):
    """Seed one independent jet per coordinate of ``x``."""
    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return [Jet2(x[i], eye[i].copy(), zero) for i in range(d)]
