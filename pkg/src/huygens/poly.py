"""Sparse multivariate polynomials with (possibly complex) coefficients.

Used to store the nonlinearity of a quasi-linear system exactly, so its
derivatives are exact too.
"""
from __future__ import annotations

import numbers

import numpy as np

__all__ = ["Poly", "variables"]


class Poly:
    """Polynomial in ``nvars`` variables stored as ``{exponents: coefficient}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = int(nvars)
        clean = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ValueError("exponent tuple length does not match nvars")
            if coef != 0:
                clean[exps] = clean.get(exps, 0) + coef
        self.terms = {e: c for e, c in clean.items() if c != 0}

    @classmethod
    def var(cls, i, nvars):
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): 1})

    @classmethod
    def const(cls, value, nvars):
        return cls(nvars, {(0,) * nvars: value})

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different variable spaces")
            return other
        if isinstance(other, numbers.Number):
            return Poly.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly.const(1, self.nvars)
        for _ in range(int(k)):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i}" + (f"^{p}" if p > 1 else "") for i, p in enumerate(e) if p)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def diff(self, i):
        """Exact partial derivative with respect to variable ``i``."""
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                terms[tuple(d)] = terms.get(tuple(d), 0) + c * e[i]
        return Poly(self.nvars, terms)

    def __call__(self, x):
        """Evaluate at ``x`` of shape ``(nvars, ...)``; broadcasting over trailing axes."""
        x = np.asarray(x)
        if x.shape[0] != self.nvars:
            raise ValueError("evaluation point has the wrong number of variables")
        dtype = np.result_type(x, *[type(c) for c in self.terms.values()] or [float])
        out = np.zeros(x.shape[1:], dtype=dtype)
        for e, c in self.terms.items():
            term = np.full(x.shape[1:], c, dtype=dtype)
            for i, p in enumerate(e):
                if p:
                    term = term * x[i] ** p
            out = out + term
        return out


def variables(nvars):
    """Tuple of the coordinate polynomials ``x0, ..., x_{nvars-1}``."""
    return tuple(Poly.var(i, nvars) for i in range(nvars))
