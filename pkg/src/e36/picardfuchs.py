"""Theta-operators in the chart coordinates z1..z4 and the operators D_l."""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import datasets, gkzseries
from .certificate import Certificate
from .exactcore import gauge, lattice
from .exactcore.rational import rational_from_json, rational_to_json
from .exactcore.series import LaurentSeries, Poly, parse_poly

THETAS = ("t1", "t2", "t3", "t4")
ZVARS = ("z1", "z2", "z3", "z4")
ZExp = Tuple[int, ...]


def theta_gens() -> Tuple[Poly, ...]:
    return Poly.gens(*THETAS)


class ThetaOperator:
    """``sum_alpha z^alpha p_alpha(theta)`` with every theta to the right."""

    def __init__(self, terms: Mapping[ZExp, Poly] = (), nvars: int = 4):
        self.nvars = nvars
        clean: Dict[ZExp, Poly] = {}
        for a, p in dict(terms).items():
            a = tuple(int(x) for x in a)
            if len(a) != nvars or min(a, default=0) < 0:
                raise ValueError(f"bad z-exponent {a}")
            if not isinstance(p, Poly):
                p = Poly.constant(THETAS[:nvars], p)
            p = clean.get(a, Poly(p.variables)) + p
            if p.is_zero():
                clean.pop(a, None)
            else:
                clean[a] = p
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def zero(cls) -> "ThetaOperator":
        return cls({})

    @classmethod
    def from_string(cls, text: str) -> "ThetaOperator":
        """Parse ``'<z-monomial> * (<theta factor>)(<theta factor>) + ...'``.

        Each summand is an optional sign, an optional product of ``z_i``
        powers and a product of parenthesized linear forms in ``t1..t4``.
        """
        out = cls.zero()
        for sign, body in _split_summands(text):
            zexp = [0] * 4
            head, _, rest = body.partition("(")
            rest = "(" + rest if rest else ""
            coef = Fraction(sign)
            for tok in head.replace("*", " ").split():
                if tok.startswith("z"):
                    name, _, pw = tok.partition("^")
                    zexp[int(name[1:]) - 1] += int(pw or 1)
                else:
                    coef *= Fraction(tok)
            p = Poly.constant(THETAS, coef)
            for factor in _paren_groups(rest):
                p = p * parse_poly(factor, THETAS)
            out = out + cls({tuple(zexp): p})
        return out

    def __add__(self, other: "ThetaOperator") -> "ThetaOperator":
        terms = dict(self.terms)
        for a, p in other.terms.items():
            terms[a] = terms[a] + p if a in terms else p
        return ThetaOperator(terms)

    def __neg__(self):
        return ThetaOperator({a: -p for a, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ThetaOperator":
        return ThetaOperator({a: p * Fraction(c) for a, p in self.terms.items()})

    def __mul__(self, other: "ThetaOperator") -> "ThetaOperator":
        """Composition, using ``p(theta) z^beta = z^beta p(theta + beta)``."""
        out: Dict[ZExp, Poly] = {}
        for a, p in self.terms.items():
            for b, qq in other.terms.items():
                shifted = shift_theta(p, b)
                key = tuple(x + y for x, y in zip(a, b))
                term = shifted * qq
                out[key] = out[key] + term if key in out else term
        return ThetaOperator(out)

    def __eq__(self, other):
        return isinstance(other, ThetaOperator) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def theta_degree(self) -> int:
        return max((p.degree() for p in self.terms.values()), default=0)

    def z_shifts(self) -> List[ZExp]:
        return list(self.terms)

    def __repr__(self):
        return " + ".join(f"z^{a}*({p.to_string()})" for a, p in self.terms.items()) or "0"

    def to_json(self) -> dict:
        return {"terms": [{"zexp": list(a),
                           "theta_poly": [{"texp": list(e), **rational_to_json(c)}
                                          for e, c in sorted(p.terms.items())]}
                          for a, p in self.terms.items()]}

    @classmethod
    def from_json(cls, d: dict) -> "ThetaOperator":
        terms = {}
        for t in d["terms"]:
            terms[tuple(t["zexp"])] = Poly(THETAS, {tuple(m["texp"]): rational_from_json(m)
                                                   for m in t["theta_poly"]})
        return cls(terms)


def _split_summands(text: str):
    depth, cur, out, sign = 0, "", [], 1
    for ch in text.strip():
        if ch in "+-" and depth == 0 and cur.strip():
            out.append((sign, cur.strip()))
            cur, sign = "", (1 if ch == "+" else -1)
            continue
        if ch in "+-" and depth == 0 and not cur.strip():
            sign *= 1 if ch == "+" else -1
            continue
        depth += (ch == "(") - (ch == ")")
        cur += ch
    if cur.strip():
        out.append((sign, cur.strip()))
    return out


def _paren_groups(text: str) -> List[str]:
    groups, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            if depth:
                cur += ch
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth:
                cur += ch
            else:
                groups.append(cur)
                cur = ""
        elif depth:
            cur += ch
    return groups


def shift_theta(p: Poly, beta: Sequence[int]) -> Poly:
    if not any(beta):
        return p
    t = theta_gens()
    return p.substitute({THETAS[i]: t[i] + beta[i] for i in range(4)}, THETAS)


# --- application to series -------------------------------------------------

def apply(op: ThetaOperator, s: LaurentSeries) -> Tuple[LaurentSeries, int]:
    """``op`` applied to a power series in z; returns the result and its trusted order.

    A target coefficient of total degree <= truncation only receives
    contributions from sources of smaller or equal degree, all stored, so
    the trusted region is the series' own truncation.
    """
    if s.variables != ZVARS:
        raise ValueError("expects a series in z1..z4")
    T = int(s.truncation)
    out: Dict[ZExp, Fraction] = {}
    for a, p in op.terms.items():
        for n, c in s.terms.items():
            tgt = tuple(x + y for x, y in zip(n, a))
            if sum(tgt) > T:
                continue
            v = p.evaluate(dict(zip(THETAS, n))) * c
            if v:
                out[tgt] = out.get(tgt, 0) + v
    return LaurentSeries(ZVARS, out, T), T


def verify_annihilation(ops: Sequence[ThetaOperator], s: LaurentSeries, window: int,
                        names: Optional[Sequence[str]] = None) -> Certificate:
    if window > s.truncation:
        raise ValueError("window exceeds the series truncation")
    names = list(names or [f"op{i + 1}" for i in range(len(ops))])
    failures = {}
    for name, op in zip(names, ops):
        res, _ = apply(op, s)
        bad = [[list(e), rational_to_json(c)] for e, c in sorted(res.terms.items()) if sum(e) <= window]
        if bad:
            failures[name] = bad[:5]
    cert = Certificate("pf.annihilation", parameters={"truncation": int(s.truncation), "window": window,
                                                       "operators": names})
    cert.witnesses["failures"] = failures
    return cert.finish(not failures)


# --- generating D_l ---------------------------------------------------------

def chart_coordinates(ell: Sequence[int], basis: gkzseries.ChartBasis) -> Optional[Tuple[int, ...]]:
    """Integer c with ell = sum c_m l^(m), or None."""
    M = [list(l) for l in basis.ell]
    sol = lattice.solve_q(lattice.transpose(M), list(ell))
    if sol is None or any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def _theta_a(basis, i) -> Poly:
    t = theta_gens()
    out = Poly(THETAS)
    for m in range(4):
        if basis.ell[m][i]:
            out = out + t[m] * basis.ell[m][i]
    return out


def theta_power_product(part: Sequence[int], basis, offset) -> Poly:
    """``prod_i prod_{j<part_i} (theta_Ai + offset_i - j)``."""
    out = Poly.constant(THETAS, 1)
    for i, k in enumerate(part):
        th = _theta_a(basis, i)
        for j in range(k):
            out = out * (th + (Fraction(offset[i]) - j))
    return out


def _lex_lead(p: Poly) -> Fraction:
    top = max(p.terms, key=lambda e: (sum(e), e))
    return p.terms[top]


def character_sign(ell, signs=gkzseries.SIGNS) -> int:
    s = 1
    for sg, x in zip(signs, ell):
        if sg < 0 and x % 2:
            s = -s
    return s


def generate_operator(ell: Sequence[int], basis: Optional[gkzseries.ChartBasis] = None,
                      offset=gkzseries.OFFSET, signs=gkzseries.SIGNS,
                      witness: Optional[LaurentSeries] = None, info: Optional[dict] = None) -> ThetaOperator:
    """``D_l`` in normal form.

    The conjugated box gives ``P_+(theta) - eps z^c P_-(theta)``.  ``eps``
    is fixed by requiring annihilation of ``witness`` (omega0 of the chart)
    at the lowest exponent where the z-term contributes, and is checked
    against the character ``signs^l``.  The overall sign makes the
    z-free part lex-positive.
    """
    basis = basis or gkzseries.chart_basis("s11")
    ell = tuple(int(x) for x in ell)
    if not gauge.in_L(ell):
        raise ValueError(f"{ell} is not in L")
    if not any(ell):
        return ThetaOperator.zero()
    c = chart_coordinates(ell, basis)
    if c is None or min(c) < 0:
        raise ValueError(f"{ell} is not a nonnegative combination of the chart generators")
    plus = [max(x, 0) for x in ell]
    minus = [max(-x, 0) for x in ell]
    P = ThetaOperator({(0,) * 4: theta_power_product(plus, basis, offset)})
    M = ThetaOperator({c: theta_power_product(minus, basis, offset)})
    rule = character_sign(ell, signs)
    eps = rule
    if witness is not None:
        eps = resolve_sign(P, M, witness)
        if eps != rule:
            raise AssertionError(f"witness sign {eps} disagrees with the character {rule} for {ell}")
    op = P - M.scale(eps)
    if _lex_lead(op.terms[(0,) * 4]) < 0:
        op = -op
    if info is not None:
        info.update({"ell": list(ell), "chart_coordinates": list(c), "z_term_sign": eps,
                     "character": rule})
    return op


def resolve_sign(P: ThetaOperator, M: ThetaOperator, s: LaurentSeries) -> int:
    """The eps with ``(P - eps M) s`` vanishing at the lowest exponent where ``M s`` does not."""
    ps, _ = apply(P, s)
    ms, _ = apply(M, s)
    for e in sorted(ms.terms, key=lambda e: (sum(e), e)):
        ratio = ps.coefficient(e) / ms.coefficient(e)
        if ratio not in (1, -1):
            raise AssertionError(f"no sign annihilates the witness at {e}: ratio {ratio}")
        return int(ratio)
    raise ValueError("the z-term does not act on the witness window")


# Combinations of l^(1)..l^(4) for D1..D9, in the printed order.
CATALOG_COMBINATIONS = ((1,), (2,), (3,), (1, 4), (2, 4), (3, 4), (1, 2, 4), (1, 3, 4), (2, 3, 4))


def combination_vector(combo: Sequence[int], basis=None) -> Tuple[int, ...]:
    basis = basis or gkzseries.chart_basis("s11")
    return tuple(sum(basis.ell[m - 1][i] for m in combo) for i in range(9))


@lru_cache(maxsize=None)
def recorded_catalog() -> Tuple[Tuple[Tuple[int, ...], ThetaOperator], ...]:
    data = datasets.load("operators")
    return tuple((tuple(d["combination"]), ThetaOperator.from_string(d["operator"])) for d in data["operators"])


def generate_catalog(witness: Optional[LaurentSeries] = None, basis=None, offset=gkzseries.OFFSET,
                     signs=gkzseries.SIGNS, infos: Optional[list] = None) -> List[ThetaOperator]:
    out = []
    for combo in CATALOG_COMBINATIONS:
        info: dict = {}
        out.append(generate_operator(combination_vector(combo, basis), basis, offset, signs, witness, info))
        if infos is not None:
            infos.append(info)
    return out


def uniqueness_check(ops: Sequence[ThetaOperator], window: int) -> Certificate:
    """Dimension of the power-series solutions of the coefficient equations up to degree ``window``."""
    unknowns = [n for n in product(range(window + 1), repeat=4) if sum(n) <= window]
    index = {n: i for i, n in enumerate(unknowns)}
    rows = []
    for op in ops:
        for tgt in unknowns:
            row = [Fraction(0)] * len(unknowns)
            for a, p in op.terms.items():
                src = tuple(x - y for x, y in zip(tgt, a))
                if min(src) >= 0:
                    row[index[src]] += p.evaluate(dict(zip(THETAS, src)))
            if any(row):
                rows.append(row)
    null = lattice.nullspace_q(rows, len(unknowns))
    cert = Certificate("pf.uniqueness", parameters={"window": window, "unknowns": len(unknowns)})
    cert.witnesses.update({"equations": len(rows), "solution_dimension": len(null)})
    if len(null) == 1:
        v = null[0]
        c0 = v[index[(0,) * 4]]
        if c0:
            cert.witnesses["normalized_solution_nonzero"] = sum(1 for x in v if x)
    return cert.finish(len(null) == 1)


# --- discriminant -----------------------------------------------------------

def discriminant_factors() -> List[Poly]:
    z1, z2, z3, z4 = Poly.gens(*ZVARS)
    zs = (z1, z2, z3)
    out = [z1, z2, z3, z4]
    out += [1 + zi for zi in zs]
    out += [1 + zi * z4 for zi in zs]
    out += [1 - zs[i] * zs[j] * z4 for i, j in ((0, 1), (0, 2), (1, 2))]
    out.append(1 - (z1 * z2 + z1 * z3 + z2 * z3 + z1 * z2 * z3) * z4 - z1 * z2 * z3 * z4 ** 2)
    return out


def discriminant_poly() -> Poly:
    out = Poly.constant(ZVARS, 1)
    for f in discriminant_factors():
        out = out * f
    return out


def discriminant_eval(z: Sequence) -> Fraction:
    pt = dict(zip(ZVARS, (Fraction(x) for x in z)))
    out = Fraction(1)
    for f in discriminant_factors():
        out *= f.evaluate(pt)
    return out


def gauge_matrix(a: Sequence) -> List[List]:
    """(E3 | a | b | c) in the unsigned coefficients a0,b0,c0,a1,a2,b1,b2,c1,c2."""
    a0, b0, c0, a1, a2, b1, b2, c1, c2 = a
    return [[1, 0, 0, a2, b1, c0], [0, 1, 0, a0, b2, c1], [0, 0, 1, a1, b0, c2]]


def chart_point(a: Sequence, basis=None) -> Tuple[Fraction, ...]:
    basis = basis or gkzseries.chart_basis("s11")
    A = [Fraction(s * x) for s, x in zip(gkzseries.SIGNS, a)]
    out = []
    for l in basis.ell:
        v = Fraction(1)
        for x, e in zip(A, l):
            v *= x ** e
        out.append(v)
    return tuple(out)


def degenerate_minors() -> List[Tuple[int, int, int]]:
    """Minors of the gauge matrix that are not a single coefficient."""
    out = []
    for i in range(1, 5):
        for j in range(i + 1, 6):
            for k in range(j + 1, 7):
                if len({i, j, k} & {4, 5, 6}) >= 2:
                    out.append((i, j, k))
    return out


def degenerate_sample(minor, rng: random.Random, bound: int = 20) -> List[Fraction]:
    """Nonzero coefficients with the given minor vanishing (solved linearly in one coefficient)."""
    while True:
        a = [Fraction(rng.randint(-bound, bound)) for _ in range(9)]
        var = rng.randrange(9)
        lo, hi = list(a), list(a)
        lo[var], hi[var] = Fraction(0), Fraction(1)
        m0 = gauge.minor3(gauge_matrix(lo), *minor)
        m1 = gauge.minor3(gauge_matrix(hi), *minor)
        if m1 == m0:
            continue
        a[var] = -m0 / (m1 - m0)
        if all(a):
            assert gauge.minor3(gauge_matrix(a), *minor) == 0
            return a


def discriminant_suite(samples: int = 50, seed: int = 1906) -> Certificate:
    cert = Certificate("pf.discriminant", parameters={"samples": samples, "seed": seed})
    rng = random.Random(seed)
    zero_ok = discriminant_eval((0, 0, 0, 0)) == 0
    D = discriminant_poly()
    sym = all(D.substitute({ZVARS[i]: Poly.gens(*ZVARS)[p[i]] for i in range(3)}, ZVARS) == D
              for p in ((1, 0, 2), (0, 2, 1), (1, 2, 0)))
    minors = degenerate_minors()
    pulled, generic = [], 0
    for t in range(samples):
        mnr = minors[t % len(minors)]
        z = chart_point(degenerate_sample(mnr, rng))
        vals = [f.evaluate(dict(zip(ZVARS, z))) for f in discriminant_factors()]
        pulled.append({"minor": list(mnr), "vanishing_factors": [i for i, v in enumerate(vals) if v == 0]})
    # control: generic coefficients keep the discriminant nonzero
    for _ in range(samples):
        a = [Fraction(rng.choice([x for x in range(-20, 21) if x])) for _ in range(9)]
        if any(gauge.minor3(gauge_matrix(a), *m) == 0 for m in minors):
            continue
        generic += discriminant_eval(chart_point(a)) != 0
    pull_ok = all(p["vanishing_factors"] for p in pulled)
    cert.witnesses.update({"zero_at_origin": zero_ok, "s3_symmetric": sym, "pullbacks": pulled,
                           "generic_nonzero": generic})
    return cert.finish(zero_ok and sym and pull_ok)
