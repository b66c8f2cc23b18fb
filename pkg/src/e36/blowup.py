"""Equations of the blow-up of xyz = uv along its singular lines, checked on parametrizations."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import cones, datasets
from .certificate import Certificate
from .exactcore import lattice
from .exactcore.series import Poly, parse_poly

VARS = ("x", "y", "z", "u", "v", "U", "V", "W1", "W2", "W3")


class RationalFunction:
    """num / den with polynomial parts; no cancellation is attempted."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None):
        den = den if den is not None else Poly.constant(num.variables, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = num, den

    def _co(self, other):
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction(Poly.constant(self.num.variables, other))

    def __add__(self, other):
        o = self._co(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._co(other))

    def __mul__(self, other):
        o = self._co(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        return RationalFunction(self.num * o.den, self.den * o.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def equals(self, other) -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        return f"({self.num.to_string()}) / ({self.den.to_string()})"


@dataclass(frozen=True)
class Equation:
    text: str
    lhs: Poly
    rhs: Poly

    @property
    def poly(self) -> Poly:
        return self.lhs - self.rhs

    @classmethod
    def parse(cls, text: str, variables=VARS) -> "Equation":
        left, _, right = text.partition("=")
        return cls(text, parse_poly(left, variables), parse_poly(right, variables))


@dataclass(frozen=True)
class EquationSet:
    name: str
    equations: Tuple[Equation, ...]

    def __add__(self, other):
        return EquationSet(f"{self.name}+{other.name}", self.equations + other.equations)

    def texts(self) -> List[str]:
        return [e.text for e in self.equations]


def equation_set(name: str) -> EquationSet:
    data = datasets.load("equations")
    return EquationSet(name, tuple(Equation.parse(t) for t in data["sets"][name]))


class ChartMap:
    """Assignment of rational functions in ``params`` to the ambient variables."""

    def __init__(self, name: str, params: Sequence[str], images: Mapping[str, object]):
        self.name = name
        self.params = tuple(params)
        g = dict(zip(self.params, Poly.gens(*self.params)))
        self.images: Dict[str, RationalFunction] = {}
        for v, im in images.items():
            if isinstance(im, str):
                num, _, den = im.partition("/")
                im = RationalFunction(parse_poly(num, self.params),
                                      parse_poly(den, self.params) if den else None)
            elif isinstance(im, Poly):
                im = RationalFunction(im)
            elif not isinstance(im, RationalFunction):
                im = RationalFunction(Poly.constant(self.params, im))
            self.images[v] = im
        for p in self.params:
            self.images.setdefault(p, RationalFunction(g[p]))

    def pull(self, p: Poly) -> RationalFunction:
        out = RationalFunction(Poly(self.params))
        cache = {}
        for e, c in p.terms.items():
            term = RationalFunction(Poly.constant(self.params, c))
            for v, k in zip(p.variables, e):
                if k:
                    if v not in self.images:
                        raise KeyError(f"chart {self.name} does not assign {v}")
                    key = (v, k)
                    if key not in cache:
                        r = self.images[v]
                        cache[key] = RationalFunction(r.num ** k, r.den ** k)
                    term = term * cache[key]
            out = out + term
        return out

    def compose(self, inner: "ChartMap") -> "ChartMap":
        """self after inner: variables of ``self.params`` are given by ``inner``."""
        out = {}
        for v, r in self.images.items():
            out[v] = _pull_rational(inner, r)
        return ChartMap(f"{self.name}.{inner.name}", inner.params, out)


def _pull_rational(chart: ChartMap, r: RationalFunction) -> RationalFunction:
    return chart.pull(r.num) / chart.pull(r.den)


def graph_chart() -> ChartMap:
    """(x, y, z, u) -> the point with v = xyz/u and [U:V:W1:W2:W3] = [u:v:yz:zx:xy]."""
    return ChartMap("graph", ("x", "y", "z", "u"),
                    {"v": "x y z / u", "U": "u", "V": "x y z / u", "W1": "y z", "W2": "z x", "W3": "x y"})


def w1_chart() -> ChartMap:
    return ChartMap("W1", ("y", "z", "U", "V"),
                    {"W1": 1, "W2": "U V z", "W3": "U V y", "u": "U y z", "v": "V y z", "x": "U V y z"})


def segre_chart() -> ChartMap:
    """U = 1 chart through the 2x2x2 hypermatrix with entries a_i b_j c_k."""
    data = datasets.load("equations")["hypermatrix"]
    params = ("a0", "a1", "b0", "b1", "c0", "c1")
    images = {var: f"a{key[0]} b{key[1]} c{key[2]}" for key, var in data.items()}
    images["U"] = 1
    images["v"] = f"{images['V']} {images['u']}"
    return ChartMap("segre", params, images)


def verify_on_parametrization(eqs: EquationSet, chart: ChartMap) -> Certificate:
    residuals = []
    for e in eqs.equations:
        r = chart.pull(e.poly)
        if not r.is_zero():
            residuals.append({"equation": e.text, "residual": str(r)})
    cert = Certificate("blowup.parametrization", parameters={"equations": eqs.name, "chart": chart.name})
    cert.witnesses.update({"count": len(eqs.equations), "residuals": residuals})
    return cert.finish(not residuals)


def segre_chart_check() -> Certificate:
    eqs = equation_set("segre1") + equation_set("segre2")
    c = verify_on_parametrization(eqs, segre_chart())
    cert = Certificate("blowup.segre", parameters={"equations": len(eqs.equations)})
    cert.add(c)
    minors = hypermatrix_minors()
    matched = [e.text for e in eqs.equations if e.poly in minors or -e.poly in minors]
    p1 = datasets.load("equations")["singular_points"]["p1"]
    cert.witnesses.update({"equations_that_are_minors": len(matched), "distinct_minors": len(minors),
                           "p1": p1})
    return cert.finish(c.passed and len(eqs.equations) == 9 and len(matched) == 9)


def hypermatrix_minors() -> set:
    """2x2 minors of the three flattenings of the hypermatrix of U = 1 chart coordinates."""
    data = datasets.load("equations")["hypermatrix"]
    g = dict(zip(VARS, Poly.gens(*VARS)))
    a = {tuple(int(ch) for ch in k): g[v] for k, v in data.items()}
    out = set()
    for axis in range(3):
        others = [i for i in range(3) if i != axis]
        cols = [(j, k) for j in (0, 1) for k in (0, 1)]

        def entry(r, col):
            idx = [0, 0, 0]
            idx[axis], idx[others[0]], idx[others[1]] = r, col[0], col[1]
            return a[tuple(idx)]
        for c1, c2 in combinations(cols, 2):
            m = entry(0, c1) * entry(1, c2) - entry(0, c2) * entry(1, c1)
            if not m.is_zero():
                out.add(m)
    return out


def transform_check() -> Certificate:
    eqs = equation_set("transform") + equation_set("transform_c5")
    cert = Certificate("blowup.transform", parameters={"equations": len(eqs.equations)})
    g = graph_chart()
    cert.add(verify_on_parametrization(eqs, g))
    # pi0 o lift = id on u != 0, and the lift lies on xyz = uv
    hyp = parse_poly("x y z - u v", VARS)
    coords_back = all(g.images[v].equals(RationalFunction(Poly.gens(*g.params)[i]))
                      for i, v in enumerate(("x", "y", "z", "u")))
    cert.witnesses.update({"on_hypersurface": g.pull(hyp).is_zero(), "projection_is_identity": coords_back})
    return cert.finish(cert.witnesses["on_hypersurface"] and coords_back and len(eqs.equations) == 15)


def charts_check() -> Certificate:
    eqs = equation_set("transform") + equation_set("transform_c5")
    cert = Certificate("blowup.charts")
    cert.add(verify_on_parametrization(eqs, w1_chart()))
    cert.add(verify_on_parametrization(eqs + ChartEquations.xyzuv(), w1_chart()))
    # overlap W1 != 0, U != 0: W1-chart points in U = 1 coordinates satisfy the Segre equations
    w = w1_chart()
    Uc = w.images["U"]
    to_u = ChartMap("W1->U", w.params,
                    {**{v: w.images[v] for v in ("x", "y", "z", "u", "v")},
                     "U": 1, "V": w.images["V"] / Uc, "W1": w.images["W1"] / Uc,
                     "W2": w.images["W2"] / Uc, "W3": w.images["W3"] / Uc})
    seg = equation_set("segre1") + equation_set("segre2") + EquationSet("v=Vu", (Equation.parse("v = V u"),))
    cert.add(verify_on_parametrization(seg, to_u))
    # and back: Segre points with W1 != 0 match the W1-chart assignments
    s = segre_chart()
    W1 = s.images["W1"]
    back = {"y": s.images["y"], "z": s.images["z"], "U": s.images["U"] / W1, "V": s.images["V"] / W1}
    agree = []
    for var in ("W2", "W3", "u", "v", "x"):
        chart_value = _pull_rational(ChartMap("tmp", s.params, back), w.images[var])
        native = s.images[var] / W1 if var in ("W2", "W3") else s.images[var]
        agree.append(chart_value.equals(native))
    cert.witnesses["overlap_agreement"] = all(agree)
    return cert.finish(all(agree))


class ChartEquations:
    @staticmethod
    def xyzuv() -> EquationSet:
        return EquationSet("xyz=uv", (Equation.parse("x y z = u v"),))


def _restrict(eqs: EquationSet, values: Mapping[str, object]) -> List[Poly]:
    """Nonzero polynomials in U, V, W1..W3 (and any symbolic base values) left after substitution."""
    out = []
    for e in eqs.equations:
        p = e.poly.substitute({k: v for k, v in values.items()}, VARS)
        if not p.is_zero():
            out.append(p)
    return out


def fiber_over_origin() -> Certificate:
    eqs = equation_set("transform")
    zero = {v: 0 for v in ("x", "y", "z", "u", "v")}
    surviving = _restrict(eqs, zero)
    U, V, W1, W2, W3 = (Poly.gens(*VARS)[i] for i in range(5, 10))
    expected = {W1 * W2, W1 * W3, W2 * W3}
    red = set(surviving) == expected
    # components: minimal coordinate subspaces of [U,V,W1,W2,W3] on which every surviving monomial vanishes
    names = ("W1", "W2", "W3")
    comps = []
    for k in range(1, 4):
        for S in combinations(names, k):
            if any(set(c) <= set(S) for c in comps):
                continue
            vals = {n: 0 for n in S}
            if all(p.substitute(vals, VARS).is_zero() for p in surviving):
                comps.append(S)
    free = [tuple(v for v in ("U", "V") + names if v not in S) for S in comps]
    triple = set(names)
    for S in comps:
        triple &= set(S)
    # all three components contain the line W1 = W2 = W3 = 0, and their common part is exactly it
    common = set(("U", "V") + names)
    for f in free:
        common &= set(f)
    planes = all(len(f) == 3 for f in free)
    cert = Certificate("blowup.fiber")
    cert.witnesses.update({"surviving": sorted(p.to_string() for p in surviving),
                           "components_zero_sets": [list(S) for S in comps],
                           "components_free": [list(f) for f in free],
                           "triple_intersection_free": sorted(common)})
    ok0 = red and len(comps) == 3 and planes and sorted(common) == ["U", "V"]
    # over (x0, 0, 0, 0, 0) with x0 != 0
    t = Poly.gens(*VARS)
    off = _restrict(eqs, {"x": t[0], "y": 0, "z": 0, "u": 0, "v": 0})
    forced = any(p == t[0] * t[7] or p == -(t[0] * t[7]) for p in off)
    rest = [p for p in off if p.substitute({"W1": 0}, VARS).terms]
    rest = [p.substitute({"W1": 0}, VARS) for p in rest]
    quadric_ok = len(rest) == 1 and _quadric_rank(rest[0], ("U", "V", "W2", "W3"), {"x": 1}) == 4
    cert.witnesses.update({"off_origin_W1_forced": forced,
                           "off_origin_quadric": [p.to_string() for p in rest],
                           "off_origin_rank4_quadric": quadric_ok})
    return cert.finish(ok0 and forced and quadric_ok)


def _quadric_rank(p: Poly, names, values) -> int:
    p = p.substitute(values, VARS)
    idx = [VARS.index(n) for n in names]
    M = [[Fraction(0)] * len(names) for _ in names]
    for e, c in p.terms.items():
        pos = [i for i, j in enumerate(idx) for _ in range(e[j])]
        if len(pos) != 2 or sum(e) != 2:
            raise ValueError("not a quadratic form in the given variables")
        a, b = pos
        if a == b:
            M[a][a] += c
        else:
            M[a][b] += c / 2
            M[b][a] += c / 2
    return lattice.rank(M)


def flip_cone_shadow(samples: int = 200, seed: int = 1906) -> Certificate:
    data = datasets.cones()
    rho = [tuple(r) for r in data["rho"]]
    sig = {k: cones.Cone([rho[i - 1] for i in v]) for k, v in data["sigma"].items()}
    base = cones.Cone(rho)
    side1, side2 = ("s11", "s21"), ("s12", "s22", "s32")
    face1 = cones.shared_face(sig["s11"], sig["s21"])
    face2 = sig[side2[0]]
    for k in side2[1:]:
        face2 = cones.shared_face(face2, sig[k])
    pair2 = {f"{a}&{b}": sorted(rho.index(r) + 1 for r in cones.shared_face(sig[a], sig[b]).rays)
             for a, b in combinations(side2, 2)}
    rng = random.Random(seed)
    audits = {}
    for name, side in (("sigma1", side1), ("sigma2", side2)):
        cells = [tuple(base.rays.index(r) for r in sig[k].rays) for k in side]
        S = cones.Subdivision(base, base.rays, tuple(cells))
        audits[name] = cones.audit_subdivision(S, samples, rng)["ok"]
    expected1 = cones.Cone(rho[:3])
    expected2 = cones.Cone(rho[3:5])
    cert = Certificate("blowup.flip", parameters={"samples": samples, "seed": seed})
    cert.witnesses.update({
        "face_sigma1": sorted(rho.index(r) + 1 for r in face1.rays), "face_sigma1_dim": face1.dim,
        "face_sigma2": sorted(rho.index(r) + 1 for r in face2.rays), "face_sigma2_dim": face2.dim,
        "pairwise_sigma2": pair2,
        "unimodular": {k: c.is_smooth() for k, c in sig.items()},
        "supports_cover": audits})
    ok = (face1 == expected1 and face1.dim == 3 and face2 == expected2 and face2.dim == 2
          and all(cert.witnesses["unimodular"].values()) and all(audits.values()))
    return cert.finish(ok)


def perturbed(eqs: EquationSet, index: int = 0) -> EquationSet:
    """Copy of ``eqs`` with the sign of one right-hand side flipped (fault injection)."""
    e = eqs.equations[index]
    bad = Equation(e.text.replace("=", "= -", 1), e.lhs, -e.rhs)
    return EquationSet(eqs.name + "*", eqs.equations[:index] + (bad,) + eqs.equations[index + 1:])


SUITES = {"transform": transform_check, "charts": charts_check, "segre": segre_chart_check,
          "fiber": fiber_over_origin, "flip": flip_cone_shadow}
