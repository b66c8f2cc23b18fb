"""Sparse Laurent polynomials and truncated Laurent series in named variables.

Exponents are integer tuples.  A series may carry one fixed rational
``offset`` vector, so its monomials are ``x^(offset + e)``; this is how the
``(a0 b0 c0)^(-1/2)`` prefactor of the period is kept without leaving
integer exponent arithmetic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from . import lattice
from .rational import q, rational_from_json, rational_to_json

Exp = Tuple[int, ...]


def _add_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Sparse Laurent polynomial with Fraction coefficients.

    >>> x, y = Poly.gens("x", "y")
    >>> ((x + 1) * (x - 1)).terms == {(2, 0): 1, (0, 0): -1}
    True
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exp, object] = ()):
        self.variables = tuple(variables)
        clean: Dict[Exp, Fraction] = {}
        for e, c in dict(terms).items():
            c = q(c)
            if c:
                e = tuple(int(i) for i in e)
                if len(e) != len(self.variables):
                    raise ValueError("exponent length does not match variables")
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def gens(cls, *names: str):
        n = len(names)
        return tuple(cls(names, {tuple(int(i == j) for i in range(n)): 1}) for j in range(n))

    @classmethod
    def constant(cls, variables: Sequence[str], c) -> "Poly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exp: Sequence[int], c=1) -> "Poly":
        return cls(variables, {tuple(exp): c})

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
            return other
        return Poly.constant(self.variables, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.variables, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t: Dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.variables, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self.terms.items()
            return Poly(self.variables, {tuple(i * n for i in e): c ** n})
        out = Poly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.variables == other.variables and self.terms == other.terms
        return self == self._coerce(other)

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def substitute(self, images: Mapping[str, "Poly"], target_vars: Optional[Sequence[str]] = None) -> "Poly":
        """Ring homomorphism sending each variable to a Laurent polynomial.

        Variables missing from ``images`` map to themselves (they must then
        occur in ``target_vars``).  Negative powers need monomial images.
        """
        target_vars = tuple(target_vars or next(iter(images.values())).variables)
        imgs = []
        for v in self.variables:
            if v in images:
                im = images[v]
                if not isinstance(im, Poly):
                    im = Poly.constant(target_vars, im)
            else:
                idx = target_vars.index(v)
                im = Poly.monomial(target_vars, [int(i == idx) for i in range(len(target_vars))])
            imgs.append(im)
        out = Poly(target_vars)
        cache: Dict[Tuple[int, int], Poly] = {}
        for e, c in self.terms.items():
            term = Poly.constant(target_vars, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = imgs[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        vals = [q(point[v]) for v in self.variables]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def __repr__(self):
        return f"Poly({self.to_string()})"

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = " ".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c} {mono}")
        return " + ".join(parts).replace("+ -", "- ")


_TOKEN = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Parse sums of signed monomials such as ``"W1 W2 - U V z"`` or ``"2 x^2 y"``.

    Factors are separated by whitespace or ``*``; ``^`` marks integer powers.
    """
    variables = tuple(variables)
    out = Poly(variables)
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    pos = 0
    for m in _TOKEN.finditer(text):
        if m.start() != pos:
            raise ValueError(f"cannot parse {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(sign)
        exp = [0] * len(variables)
        for factor in m.group(2).replace("*", " ").split():
            base, _, power = factor.partition("^")
            k = int(power) if power else 1
            if base in variables:
                exp[variables.index(base)] += k
            else:
                coeff *= Fraction(base) ** k
        out = out + Poly(variables, {tuple(exp): coeff})
    if pos != len(text):
        raise ValueError(f"cannot parse {text!r}")
    return out


@dataclass(frozen=True)
class DegreeFunctional:
    """``deg(e) = sum w_i c_i + sum a_i |c_i|`` with coordinates ``c = P e``.

    With ``P`` the identity and ``a = 0`` this is a weighted total degree.
    The xyzu-series uses ``a = (0,0,0,2)`` so that ``n+m+k+2|l|`` bounds a
    finite window although ``l`` runs over all integers.
    """

    weights: Tuple[Fraction, ...]
    abs_weights: Tuple[Fraction, ...] = ()
    coords: Optional[Tuple[Tuple[Fraction, ...], ...]] = None

    @classmethod
    def total(cls, n: int) -> "DegreeFunctional":
        return cls(tuple(Fraction(1) for _ in range(n)))

    @property
    def is_linear(self) -> bool:
        return not any(self.abs_weights)

    def coordinates(self, e: Sequence) -> Sequence:
        if self.coords is None:
            return e
        return [sum(p * x for p, x in zip(row, e)) for row in self.coords]

    def __call__(self, e: Sequence) -> Fraction:
        c = self.coordinates(e)
        d = sum(Fraction(w) * x for w, x in zip(self.weights, c))
        if self.abs_weights:
            d += sum(Fraction(a) * abs(x) for a, x in zip(self.abs_weights, c))
        return Fraction(d)

    def to_json(self) -> dict:
        out = {"weights": [rational_to_json(w) for w in self.weights]}
        if self.abs_weights:
            out["abs_weights"] = [rational_to_json(a) for a in self.abs_weights]
        if self.coords is not None:
            out["coords"] = [[rational_to_json(x) for x in row] for row in self.coords]
        return out

    @classmethod
    def from_json(cls, d: dict) -> "DegreeFunctional":
        coords = d.get("coords")
        return cls(
            tuple(rational_from_json(w) for w in d["weights"]),
            tuple(rational_from_json(a) for a in d.get("abs_weights", [])),
            None if coords is None else tuple(tuple(rational_from_json(x) for x in row) for row in coords),
        )


class LaurentSeries:
    """Truncated Laurent series ``sum_e C(e) x^(offset+e)`` with ``deg(e) <= truncation``."""

    __slots__ = ("variables", "truncation", "degree", "offset", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exp, object], truncation,
                 degree: Optional[DegreeFunctional] = None, offset: Optional[Sequence] = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        self.truncation = q(truncation)
        self.degree = degree or DegreeFunctional.total(n)
        self.offset = None if offset is None or not any(offset) else tuple(q(x) for x in offset)
        clean: Dict[Exp, Fraction] = {}
        for e, c in dict(terms).items():
            c = q(c)
            e = tuple(int(i) for i in e)
            if len(e) != n:
                raise ValueError("exponent length does not match variables")
            if c and self.degree(e) <= self.truncation:
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    def _like(self, terms, truncation=None, offset="same") -> "LaurentSeries":
        return LaurentSeries(self.variables, terms,
                             self.truncation if truncation is None else truncation,
                             self.degree, self.offset if offset == "same" else offset)

    def coefficient(self, e: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def in_window(self, e: Sequence[int]) -> bool:
        return self.degree(e) <= self.truncation

    def _check_compatible(self, other: "LaurentSeries"):
        if other.variables != self.variables or other.degree != self.degree:
            raise ValueError("series live in different rings")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check_compatible(other)
        if other.offset != self.offset:
            raise ValueError("cannot add series with different offsets")
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return self._like(t, min(self.truncation, other.truncation))

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LaurentSeries":
        c = q(c)
        return self._like({e: c * v for e, v in self.terms.items()})

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        self._check_compatible(other)
        if not self.degree.is_linear:
            raise ValueError("products need a linear degree functional")
        for s in (self, other):
            if any(s.degree(e) < 0 for e in s.terms):
                raise ValueError("products need nonnegative degrees on the support")
        trunc = min(self.truncation, other.truncation)
        t: Dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            d1 = self.degree(e1)
            for e2, c2 in other.terms.items():
                if d1 + other.degree(e2) > trunc:
                    continue
                e = _add_exp(e1, e2)
                t[e] = t.get(e, 0) + c1 * c2
        if self.offset is None and other.offset is None:
            off = None
        else:
            z = (Fraction(0),) * len(self.variables)
            off = _add_exp(self.offset or z, other.offset or z)
        return LaurentSeries(self.variables, t, trunc, self.degree, off)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, LaurentSeries) and self.variables == other.variables
                and self.truncation == other.truncation and self.offset == other.offset
                and self.terms == other.terms)

    def with_offset(self, offset: Sequence) -> "LaurentSeries":
        """Multiply by the monomial ``x^offset`` (offsets accumulate)."""
        z = [Fraction(0)] * len(self.variables)
        base = self.offset or z
        return LaurentSeries(self.variables, self.terms, self.truncation, self.degree,
                             [b + q(o) for b, o in zip(base, offset)])

    def substitute_monomials(self, images: Mapping[str, Tuple[object, Sequence[int]]],
                             target_vars: Sequence[str]) -> "LaurentSeries":
        """Apply ``x_i -> c_i * t^(v_i)`` for every variable.

        The exponent map must be injective; the degree functional is pulled
        back along it so the window is exactly the image of the old one.
        """
        if self.offset is not None:
            raise ValueError("substitution into fractional powers is not defined")
        target_vars = tuple(target_vars)
        missing = [v for v in self.variables if v not in images]
        if missing:
            raise ValueError(f"no image for {missing}")
        coeffs = [q(images[v][0]) for v in self.variables]
        vecs = [tuple(int(x) for x in images[v][1]) for v in self.variables]
        if any(len(v) != len(target_vars) for v in vecs):
            raise ValueError("image exponent length does not match target variables")
        if lattice.rank(vecs) < len(vecs):
            raise ValueError("non-injective monomial substitution: the degree would be "
                             "unbounded below on the window")
        # left inverse: coordinates of the image exponent in the old exponents
        Vt = [list(map(Fraction, v)) for v in vecs]
        G = lattice.matmul(Vt, lattice.transpose(Vt))
        left = lattice.matmul(lattice.inverse_q(G), Vt)
        old = self.degree.coords
        new_coords = left if old is None else lattice.matmul([list(r) for r in old], left)
        degree = DegreeFunctional(self.degree.weights, self.degree.abs_weights,
                                  tuple(tuple(r) for r in new_coords))
        t: Dict[Exp, Fraction] = {}
        for e, c in self.terms.items():
            img = [0] * len(target_vars)
            val = c
            for k, v, ci in zip(e, vecs, coeffs):
                if k:
                    img = [a + k * b for a, b in zip(img, v)]
                    val *= ci ** k
            img = tuple(img)
            t[img] = t.get(img, 0) + val
        return LaurentSeries(target_vars, t, self.truncation, degree)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        """Exact value of the stored (finite) sum at a rational point."""
        if self.offset is not None:
            raise ValueError("evaluation of fractional powers is not exact")
        return Poly(self.variables, self.terms).evaluate(point)

    def to_poly(self) -> Poly:
        if self.offset is not None:
            raise ValueError("series with an offset is not a Laurent polynomial")
        return Poly(self.variables, self.terms)

    def to_json(self) -> dict:
        off = [rational_to_json(x) for x in (self.offset or [0] * len(self.variables))]
        return {
            "vars": list(self.variables),
            "truncation": rational_to_json(self.truncation),
            "degree": self.degree.to_json(),
            "terms": [
                {"exp": list(e), "offset": off, **rational_to_json(self.terms[e])}
                for e in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, d: dict) -> "LaurentSeries":
        terms = {}
        offset = None
        for t in d["terms"]:
            terms[tuple(t["exp"])] = rational_from_json(t)
            offset = [rational_from_json(x) for x in t["offset"]]
        return cls(d["vars"], terms, rational_from_json(d["truncation"]),
                   DegreeFunctional.from_json(d["degree"]) if "degree" in d else None, offset)

    def __repr__(self):
        return f"LaurentSeries({len(self.terms)} terms in {self.variables}, deg<={self.truncation})"


def box_exponents(lo: Sequence[int], hi: Sequence[int]) -> Iterable[Exp]:
    return iproduct(*(range(a, b + 1) for a, b in zip(lo, hi)))
