"""Gamma-series coefficients of the period, the residue expansion, and coefficient-level GKZ checks.

Variables.  The nine unsigned coefficients ``a0, b0, c0, a1, a2, b1, b2,
c1, c2`` are the coefficients of the three Laurent factors.  The signed
gauge variables are ``A = (-a0, -b0, -c0, a1, a2, b1, b2, c1, c2)``, and
chart coordinates are the monomials ``z_m = A^(l_m)`` taken literally.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .certificate import Certificate
from .exactcore import gauge, lattice
from .exactcore.rational import HALF
from .exactcore.series import DegreeFunctional, LaurentSeries, Poly

UNSIGNED_NAMES = ("a0", "b0", "c0", "a1", "a2", "b1", "b2", "c1", "c2")
GAUGE_NAMES = tuple(f"A{i}" for i in range(1, 10))
SIGNS = (-1, -1, -1, 1, 1, 1, 1, 1, 1)
OFFSET = (-HALF, -HALF, -HALF, 0, 0, 0, 0, 0, 0)
BETA = (-HALF, -HALF, -HALF, Fraction(0), Fraction(0))

# exponents of x, y, z, u, v as monomials in the gauge variables
XYZUV = {
    "x": (-1, 0, -1, 0, 1, 0, 0, 1, 0),
    "y": (-1, -1, 0, 1, 0, 0, 1, 0, 0),
    "z": (0, -1, -1, 0, 0, 1, 0, 0, 1),
    "u": (-1, -1, -1, 1, 0, 1, 0, 1, 0),
    "v": (-1, -1, -1, 0, 1, 0, 1, 0, 1),
}
ELL_S11 = (
    (-1, 0, 0, 1, 0, 0, 0, 1, -1),
    (0, -1, 0, 1, -1, 1, 0, 0, 0),
    (0, 0, -1, 0, 0, 1, -1, 1, 0),
    (0, 0, 0, -1, 1, -1, 1, -1, 1),
)

# degree functional n + m + k + 2|l| on (x, y, z, u) exponents
XYZU_DEGREE = DegreeFunctional((Fraction(1), Fraction(1), Fraction(1), Fraction(0)),
                               (Fraction(0), Fraction(0), Fraction(0), Fraction(2)))


# --- Gamma-function values ------------------------------------------------

@lru_cache(maxsize=None)
def gamma_half_ratio(k: int) -> Fraction:
    """Gamma(k + 1/2) / Gamma(1/2) for any integer k."""
    if k >= 0:
        return Fraction(factorial(2 * k), 4 ** k * factorial(k))
    out = Fraction(1)
    for j in range(k, 0):
        out /= j + HALF
    return out


def inv_factorial(k: int) -> Fraction:
    """1 / Gamma(k + 1), which vanishes at the poles k < 0."""
    return Fraction(0) if k < 0 else Fraction(1, factorial(k))


def gamma_coefficient(e: Sequence[int]) -> Fraction:
    """Coefficient of ``A^e`` (e in L) in the normalized period.

    It is ``prod_{i<=3} Gamma(1/2 - e_i)/Gamma(1/2) / prod_{i>=4} Gamma(e_i + 1)``.
    """
    den = Fraction(1)
    for x in e[3:]:
        f = inv_factorial(x)
        if not f:
            return Fraction(0)
        den *= f
    num = Fraction(1)
    for x in e[:3]:
        num *= gamma_half_ratio(-x)
    return num * den


def coeff_c4(n1: int, n2: int, n3: int, n4: int) -> Fraction:
    n = (n1, n2, n3)
    if min(n1, n2, n3, n4) < 0:
        raise ValueError("arguments must be nonnegative")
    val = Fraction(1)
    for ni in n:
        val *= inv_factorial(n4 - ni)
    for j in range(3):
        for k in range(j + 1, 3):
            val *= inv_factorial(n[j] + n[k] - n4)
    if not val:
        return val
    for ni in n:
        val *= gamma_half_ratio(ni)
    return val


def coeff_c5(n: int, m: int, k: int, l: int) -> Fraction:
    if min(n, m, k) < max(0, -l):
        return Fraction(0)
    val = Fraction(1)
    for t in (m, n, k, m + l, n + l, k + l):
        val *= inv_factorial(t)
    return val * gamma_half_ratio(m + n + l) * gamma_half_ratio(n + k + l) * gamma_half_ratio(m + k + l)


# --- the residue expansion ------------------------------------------------

def r_coefficient(n: int) -> Fraction:
    """Taylor coefficient of (1 + P)^(-1/2)."""
    return Fraction((-1) ** n * comb(2 * n, n), 4 ** n)


# Each factor is (constant, x-coefficient, y-coefficient) in unsigned names.
FACTORS = (("a2", "a0", "a1"), ("b1", "b2", "b0"), ("c0", "c1", "c2"))
CHARTS = ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))


def chart_renaming(chart: Tuple[int, int]) -> Dict[str, str]:
    """Renaming of unsigned coefficients carrying the default chart to ``chart``.

    In chart ``(i, j)`` factor ``i`` is divided by ``tx`` and factor ``j``
    by ``ty``; the role names are those of the default chart ``(0, 1)``.
    """
    i, j = chart
    (k,) = {0, 1, 2} - {i, j}
    ci, xi, yi = FACTORS[i]
    cj, xj, yj = FACTORS[j]
    ck, xk, yk = FACTORS[k]
    return {"a2": ci, "a0": xi, "a1": yi, "b1": cj, "b2": xj, "b0": yj,
            "c0": ck, "c1": xk, "c2": yk}


def _factor_expansion(role, lead, tvars, N, names):
    """(1 + P)^(-1/2) up to P^N where P = (f / t-monomial) / lead - 1."""
    nv = len(names) + 2
    idx = {v: i for i, v in enumerate(names)}

    def mono(coef_name, ex, ey):
        e = [0] * nv
        e[idx[coef_name]] += 1
        e[idx[lead]] -= 1
        e[-2], e[-1] = ex, ey
        return tuple(e)

    P = Poly(names + ("tx", "ty"), {mono(c, ex, ey): 1 for c, (ex, ey) in role})
    out = Poly.constant(P.variables, 1)
    power = Poly.constant(P.variables, 1)
    for n in range(1, N + 1):
        power = power * P
        out = out + power * r_coefficient(n)
    return out


def residue_expansion(order: int, chart: Tuple[int, int] = (0, 1), budget: int = 2_000_000) -> Poly:
    """Constant term in (tx, ty) of the product of the three expanded factors.

    Returns a Laurent polynomial in the unsigned coefficients containing
    every monomial of degree at most ``order``; it is the normalized
    period multiplied out, with no Gamma functions involved.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    estimate = ((order + 1) * (order + 2) // 2) ** 3
    if estimate > budget:
        raise MemoryError(f"expansion of order {order} needs about {estimate} terms (budget {budget})")
    names = UNSIGNED_NAMES
    i, j = chart
    if i == j or not {i, j} <= {0, 1, 2}:
        raise ValueError("chart must be a pair of distinct factor indices")
    polys = []
    for f in range(3):
        const, xc, yc = FACTORS[f]
        if f == i:      # divided by tx: lead is the x coefficient
            role, lead = [(const, (-1, 0)), (yc, (-1, 1))], xc
        elif f == j:    # divided by ty
            role, lead = [(const, (0, -1)), (xc, (1, -1))], yc
        else:
            role, lead = [(xc, (1, 0)), (yc, (0, 1))], const
        polys.append(_factor_expansion(role, lead, ("tx", "ty"), order, names))
    # multiply, keeping only tx/ty exponents that can still cancel
    prod = polys[0] * polys[1]
    out: Dict[Tuple[int, ...], Fraction] = {}
    for e1, c1 in prod.terms.items():
        for e2, c2 in polys[2].terms.items():
            if e1[-2] + e2[-2] == 0 and e1[-1] + e2[-1] == 0:
                e = tuple(a + b for a, b in zip(e1[:-2], e2[:-2]))
                out[e] = out.get(e, 0) + c1 * c2
    return Poly(names, out)


@lru_cache(maxsize=None)
def _xyzu_inverse():
    B = [XYZUV[k] for k in "xyzu"]
    P = [list(b[3:7]) for b in B]
    return lattice.inverse_q(lattice.transpose(P))


def xyzu_coordinates(e: Sequence[int]) -> Tuple[int, int, int, int]:
    """(n, m, k, l) with A^e = x^n y^m z^k u^l; x, y, z, u form a basis of L."""
    c = lattice.matvec(_xyzu_inverse(), list(e[3:7]))
    if any(x.denominator != 1 for x in c):
        raise ValueError("exponent outside L")
    c = tuple(int(x) for x in c)
    B = [XYZUV[k] for k in "xyzu"]
    recon = tuple(sum(ci * b[i] for ci, b in zip(c, B)) for i in range(9))
    if recon != tuple(e):
        raise ValueError("exponent outside L")
    return c


def unsigned_to_gauge_sign(e: Sequence[int]) -> int:
    """a^e = sign * A^e for integer exponents."""
    return (-1) ** (sum(e[:3]) % 2)


@dataclass
class ResidueSeries:
    order: int
    chart: Tuple[int, int]
    xyzu: Optional[LaurentSeries]       # v eliminated; Laurent in u
    xyzuv: Optional[LaurentSeries]      # power series, u and v never both present
    nine: LaurentSeries                 # gauge variables, offset (-1/2)^3


def residue_series(order: int, chart: Tuple[int, int] = (0, 1), budget: int = 2_000_000) -> ResidueSeries:
    raw = residue_expansion(order, (0, 1), budget)
    four: Dict[Tuple[int, ...], Fraction] = {}
    for e, c in raw.terms.items():
        nmkl = xyzu_coordinates(e)
        four[nmkl] = four.get(nmkl, 0) + c * unsigned_to_gauge_sign(e)
    xyzu = LaurentSeries(("x", "y", "z", "u"), four, order, XYZU_DEGREE)
    five_deg = DegreeFunctional(tuple(Fraction(w) for w in (1, 1, 1, 2, 5)))
    five = {}
    for (n, m, k, l), c in xyzu.terms.items():
        e = (n, m, k, l, 0) if l >= 0 else (n + l, m + l, k + l, 0, -l)
        five[e] = c
    xyzuv = LaurentSeries(("x", "y", "z", "u", "v"), five, order, five_deg)
    nine = xyzu.substitute_monomials({k: (1, XYZUV[k]) for k in "xyzu"}, GAUGE_NAMES).with_offset(OFFSET)
    if tuple(chart) == (0, 1):
        return ResidueSeries(order, (0, 1), xyzu, xyzuv, nine)
    # another chart: expand afresh, and carry the degree functional along the renaming
    ren = chart_renaming(tuple(chart))
    perm = [UNSIGNED_NAMES.index(ren[v]) for v in UNSIGNED_NAMES]   # role i -> actual index
    raw_c = residue_expansion(order, tuple(chart), budget)
    inv = [perm.index(i) for i in range(9)]
    coords = tuple(tuple(row[inv[i]] for i in range(9)) for row in nine.degree.coords)
    deg = DegreeFunctional(nine.degree.weights, nine.degree.abs_weights, coords)
    terms = {e: c * unsigned_to_gauge_sign(e) for e, c in raw_c.terms.items()}
    lead = [ren["a0"], ren["b0"], ren["c0"]]
    off = [(-HALF if v in lead else Fraction(0)) for v in UNSIGNED_NAMES]
    nine_c = LaurentSeries(GAUGE_NAMES, terms, order, deg, off)
    return ResidueSeries(order, tuple(chart), None, None, nine_c)


def rename_series(s: LaurentSeries, chart: Tuple[int, int]) -> Dict[Tuple[int, ...], Fraction]:
    """Default-chart gauge series with coefficients renamed into ``chart``.

    Signs are recomputed since the renaming can move a coefficient into or
    out of the three negated gauge slots.
    """
    ren = chart_renaming(chart)
    perm = [UNSIGNED_NAMES.index(ren[v]) for v in UNSIGNED_NAMES]
    out = {}
    for e, c in s.terms.items():
        cu = c * unsigned_to_gauge_sign(e)          # back to unsigned coefficients
        f = [0] * 9
        for i, x in enumerate(e):
            f[perm[i]] = x
        f = tuple(f)
        out[f] = cu * unsigned_to_gauge_sign(f)
    return out


# --- chart series ---------------------------------------------------------

@dataclass(frozen=True)
class ChartBasis:
    name: str
    ell: Tuple[Tuple[int, ...], ...]

    def exponent(self, n: Sequence[int]) -> Tuple[int, ...]:
        return tuple(sum(ni * l[i] for ni, l in zip(n, self.ell)) for i in range(9))


def chart_basis(name: str = "s11") -> ChartBasis:
    """Primitive generators of the dual of a smooth cone of the C_NE^vee splittings.

    The default chart keeps the printed order of its generators; the others
    are in canonical (sorted) order.
    """
    if name == "s11":
        return ChartBasis("s11", ELL_S11)
    from . import cones, datasets

    data = datasets.cones()
    rho = data["rho"]
    idx = data["sigma"][name]
    sigma = cones.Cone([rho[i - 1] for i in idx])
    dual = cones.dual_cone(sigma)
    return ChartBasis(name, tuple(gauge.pi4_inv(r) for r in dual.rays))


def omega0_series(basis: ChartBasis, order: int) -> LaurentSeries:
    names = ("z1", "z2", "z3", "z4")
    terms = {}
    for n in product(range(order + 1), repeat=4):
        if sum(n) <= order:
            c = gamma_coefficient(basis.exponent(n))
            if c:
                terms[n] = c
    return LaurentSeries(names, terms, order)


def chart_substitution(basis: ChartBasis, s: LaurentSeries) -> LaurentSeries:
    """The series in gauge variables obtained from z_m -> A^(l_m)."""
    return s.substitute_monomials({f"z{m + 1}": (1, basis.ell[m]) for m in range(4)}, GAUGE_NAMES)


# --- GKZ checks -----------------------------------------------------------

def homogeneity_check(s: LaurentSeries, beta: Sequence = BETA) -> Certificate:
    cert = Certificate("gkz.homogeneity", parameters={"beta": [str(b) for b in beta],
                                                       "terms": len(s.terms)})
    off = s.offset or (Fraction(0),) * len(s.variables)
    bad = []
    for e in sorted(s.terms):
        full = [Fraction(x) + o for x, o in zip(e, off)]
        if tuple(lattice.matvec(gauge.PHI_A, full)) != tuple(beta):
            bad.append([str(x) for x in full])
    cert.witnesses["offending"] = bad[:10]
    return cert.finish(not bad)


def window_points(order: int) -> List[Tuple[int, ...]]:
    """Exponents e in L with |n|+|m|+|k|+2|l| <= order in (x, y, z, u) coordinates."""
    B = [XYZUV[k] for k in "xyzu"]
    pts = []
    for l in range(-(order // 2), order // 2 + 1):
        rest = order - 2 * abs(l)
        for n in range(-rest, rest + 1):
            for m in range(-(rest - abs(n)), rest - abs(n) + 1):
                r2 = rest - abs(n) - abs(m)
                for k in range(-r2, r2 + 1):
                    c = (n, m, k, l)
                    pts.append(tuple(sum(ci * b[i] for ci, b in zip(c, B)) for i in range(9)))
    return sorted(pts)


def _box_factor(v: Sequence[Fraction], part: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for vi, p in zip(v, part):
        for j in range(1, p + 1):
            out *= vi + j
    return out


def box_recurrence_check(ell: Sequence[int], s: LaurentSeries, window: Optional[int] = None,
                         signs: Optional[Sequence[int]] = SIGNS) -> Certificate:
    """Coefficient form of the box operator for ``ell`` on a gauge-variable series.

    With ``signs`` the recurrence carries the character ``signs^(l+)`` and
    ``signs^(l-)`` on its two sides, which is the box operator of the
    unsigned coefficients written in gauge variables; ``signs=None`` tests
    the printed operator on the signed variables literally.
    """
    ell = tuple(int(x) for x in ell)
    if not gauge.in_L(ell):
        raise ValueError(f"{ell} is not in L")
    window = int(s.truncation) if window is None else window
    plus = tuple(max(x, 0) for x in ell)
    minus = tuple(max(-x, 0) for x in ell)
    sp = sm = 1
    if signs is not None:
        for sg, p, m in zip(signs, plus, minus):
            sp *= sg ** p
            sm *= sg ** m
    off = s.offset or (Fraction(0),) * 9
    checked, failures = 0, []
    for e in window_points(window):
        e2 = tuple(a - b for a, b in zip(e, ell))      # v + l- = (v + l+) - l
        if not (s.in_window(e) and s.in_window(e2)):
            continue
        v = [Fraction(a - p) + o for a, p, o in zip(e, plus, off)]
        lhs = s.coefficient(e) * _box_factor(v, plus) * sp
        rhs = s.coefficient(e2) * _box_factor(v, minus) * sm
        checked += 1
        if lhs != rhs:
            failures.append({"exponent": [str(x) for x in v], "lhs": str(lhs), "rhs": str(rhs)})
    cert = Certificate("gkz.box", parameters={"ell": list(ell), "window": window,
                                               "sign_character": list(signs) if signs else None})
    cert.witnesses.update({"checked": checked, "failures": failures[:5]})
    return cert.finish(checked > 0 and not failures if any(ell) else not failures)


def random_lattice_elements(count: int, rng: random.Random, norm: int = 4) -> List[Tuple[int, ...]]:
    """Nonzero elements of L with |n|+|m|+|k|+2|l| <= norm in (x, y, z, u) coordinates."""
    B = [XYZUV[k] for k in "xyzu"]
    out = []
    while len(out) < count:
        c = [rng.randint(-norm, norm) for _ in range(3)] + [rng.randint(-(norm // 2), norm // 2)]
        if any(c) and sum(map(abs, c[:3])) + 2 * abs(c[3]) <= norm:
            out.append(tuple(sum(ci * b[i] for ci, b in zip(c, B)) for i in range(9)))
    return out


def box_suite(s: LaurentSeries, window: int, rng: random.Random, random_count: int = 20) -> Certificate:
    """Boxes for the chart generators and for random lattice elements.

    A random element is redrawn when no exponent of the window supports
    both sides of its recurrence, so every recorded check is nonvacuous.
    """
    cert = Certificate("gkz.box_suite", parameters={"window": window, "random": random_count})
    for l in ELL_S11:
        cert.add(box_recurrence_check(l, s, window))
    drawn = 0
    while drawn < random_count:
        (l,) = random_lattice_elements(1, rng, max(2, window // 2))
        c = box_recurrence_check(l, s, window)
        if c.witnesses["checked"] == 0:
            continue
        cert.add(c)
        drawn += 1
    return cert.finish(True)


def agreement_check(order: int = 6, series: Optional[ResidueSeries] = None) -> Certificate:
    """Residue coefficients against the closed Gamma formula on the whole window."""
    rs = series or residue_series(order)
    s = rs.xyzu
    mismatches = []
    count = 0
    for l in range(-(order // 2), order // 2 + 1):
        for n in range(0, order + 1):
            for m in range(0, order + 1):
                for k in range(0, order + 1):
                    if n + m + k + 2 * abs(l) > order:
                        continue
                    count += 1
                    if s.coefficient((n, m, k, l)) != coeff_c5(n, m, k, l):
                        mismatches.append([n, m, k, l])
    extra = [list(e) for e in s.terms if min(e[:3]) < max(0, -e[3])]
    cert = Certificate("series.agreement", parameters={"order": order})
    cert.witnesses.update({"exponents_compared": count, "mismatches": mismatches[:10],
                           "support_violations": extra[:10]})
    return cert.finish(not mismatches and not extra)


def sublattice_check(order: int, series: Optional[ResidueSeries] = None, basis: Optional[ChartBasis] = None) -> Certificate:
    """Residue coefficients at exponents n.l (l the chart basis) against c4.

    Also records the spot values: two c4 values read at l-exponents and
    two c5 values read in the xyzu coordinates.
    """
    rs = series or residue_series(order)
    basis = basis or chart_basis("s11")
    compared, mismatches = 0, []
    for n in product(range(order + 1), repeat=4):
        if sum(n) > order:
            continue
        e = basis.exponent(n)
        if not rs.nine.in_window(e):
            continue
        compared += 1
        if rs.nine.coefficient(e) != coeff_c4(*n):
            mismatches.append(list(n))
    spots = {"c4(1,1,1,1)": (rs.nine.coefficient(basis.exponent((1, 1, 1, 1))), Fraction(1, 8)),
             "c4(1,1,0,1)": (rs.nine.coefficient(basis.exponent((1, 1, 0, 1))), Fraction(1, 4)),
             "c4(1,0,0,0)": (rs.nine.coefficient(basis.exponent((1, 0, 0, 0))), Fraction(0)),
             "c5(1,1,1,-1)": (rs.xyzu.coefficient((1, 1, 1, -1)), Fraction(1, 8))}
    cert = Certificate("series.sublattice", parameters={"order": order, "chart": basis.name})
    cert.witnesses.update({"exponents_compared": compared, "mismatches": mismatches[:10],
                           "spot_values": {k: v[0] for k, v in spots.items()}})
    return cert.finish(compared > 0 and not mismatches and all(a == b for a, b in spots.values()))


def chart_agreement_check(order: int, rs: Optional[ResidueSeries] = None) -> Certificate:
    """omega0 in the default chart pushed to gauge variables matches the residue series."""
    rs = rs or residue_series(order)
    basis = chart_basis("s11")
    w0 = omega0_series(basis, order)
    pushed = chart_substitution(basis, w0)
    nine = rs.nine
    mismatches = []
    for e, c in pushed.terms.items():
        if nine.in_window(e) and nine.coefficient(e) != c:
            mismatches.append(list(e))
    # every residue monomial in the chart's cone must come from omega0
    Binv = lattice.inverse_q(lattice.transpose([list(l[3:7]) for l in basis.ell]))
    missing = []
    for e, c in nine.terms.items():
        n = lattice.matvec(Binv, list(e[3:7]))
        if all(x.denominator == 1 and x >= 0 for x in n) and sum(n) <= order:
            if pushed.coefficient(e) != c:
                missing.append(list(e))
    cert = Certificate("series.chart", parameters={"order": order, "chart": basis.name})
    cert.witnesses.update({"compared": len(pushed.terms), "mismatches": mismatches[:10],
                           "missing": missing[:10]})
    return cert.finish(not mismatches and not missing)
