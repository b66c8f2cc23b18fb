"""Suite assembly: each suite is a tree of certificates built from a RunConfig."""
from __future__ import annotations

import random
from functools import lru_cache
from typing import Callable, Dict

from . import blowup, datasets, gkzseries, moduli, picardfuchs
from .certificate import Certificate, RunConfig
from .cones import (Cone, decompositions_without_extra_rays, dual_cone, is_gorenstein,
                    lattice_isomorphic, subdivision_counts, triangulate_cone_with_rays)
from .exactcore import lattice
from .exactcore.gauge import PHI_A, pi4
from .secondary import PointConfiguration, secondary_polytope


@lru_cache(maxsize=4)
def _secondary(threads: int = 1):
    pc = PointConfiguration(lattice.transpose(PHI_A), [1, 1, 1, 0, 0])
    return secondary_polytope(pc, threads=threads, reduce=pi4)


def _quarter(b, a):
    d = [x - y for x, y in zip(b, a)]
    if any(x % 4 for x in d):
        return None
    return tuple(x // 4 for x in d)


def anchor_vertex(sp):
    """Singular vertex from which the singular vertices sit at the recorded quarter-differences.

    Several could in principle qualify; the lexicographically largest is taken.
    """
    V = {tuple(v) for v in datasets.cones()["V_quarter"]}
    sing = sp.singular_vertices()
    hits = [a for a in sing if {_quarter(b, a) for b in sing} == V]
    return (max(hits) if hits else None), hits


# --- secondary -------------------------------------------------------------

def census_report(sp) -> dict:
    rows = []
    for psi in sp.vertices:
        T = sp.triangulation_of[psi]
        rows.append({"gkz": list(psi), "simplices": [list(c) for c in T.key()],
                     "smooth_vertex": sp.vertex_cones[psi].is_smooth(),
                     "vertex_cone_rays": [list(r) for r in sp.vertex_cones[psi].rays]})
    return {"points": sp.config.to_json(), "vertex_count": len(rows), "vertices": rows}


def secondary_suite(config: RunConfig) -> Certificate:
    sp = _secondary(config.threads)
    census = sp.census
    c1 = Certificate("secondary.census", witnesses={
        "regular": len(census.regular), "nonregular_found": len(census.nonregular),
        "flip_graph_connected": census.flip_graph_connected(),
        "flip_graph_symmetric": census.flip_graph_symmetric()})
    c1.finish(len(census.regular) == 108 and c1.witnesses["flip_graph_connected"])

    sing = sp.singular_vertices()
    anchor, candidates = anchor_vertex(sp)
    quarters = sorted(_quarter(b, anchor) for b in sing) if anchor else []
    c2 = Certificate("secondary.singular_vertices", parameters={"anchor_rule": "lex-max matching candidate"},
                     witnesses={"singular": len(sing), "smooth": len(sp.vertices) - len(sing),
                                "anchor": anchor, "anchor_candidates": len(candidates),
                                "quarter_differences": quarters})
    c2.finish(len(sing) == 6 and anchor is not None)

    CNE = Cone(datasets.cones()["C_NE_pi4"])
    wit, ok = [], True
    for psi in sing:
        g = lattice_isomorphic(sp.vertex_cones[psi], CNE)
        good = g is not None and abs(lattice.det(g)) == 1
        ok &= good
        wit.append({"vertex": psi, "matrix": g})
    c3 = Certificate("secondary.vertex_cones", witnesses={"isomorphisms_to_C_NE": wit}).finish(ok)
    return Certificate.bundle("secondary", [c1, c2, c3], config.to_json())


# --- cones -----------------------------------------------------------------

def cones_suite(config: RunConfig) -> Certificate:
    d = datasets.cones()
    rho = [tuple(r) for r in d["rho"]]
    mu = [tuple(r) for r in d["mu"]]
    CNE, C0 = Cone(d["C_NE_pi4"]), Cone(d["C0_pi4"])
    CNEd, C0d = dual_cone(CNE), dual_cone(C0)
    kids = []

    c = Certificate("cones.duals", witnesses={"dual_C_NE": sorted(CNEd.rays), "dual_C0": sorted(C0d.rays)})
    kids.append(c.finish(set(CNEd.rays) == set(rho) and set(C0d.rays) == set(mu)))

    mA = is_gorenstein(Cone(lattice.transpose(PHI_A)))
    m0, mNE = is_gorenstein(C0d), is_gorenstein(CNEd)
    c = Certificate("cones.gorenstein", witnesses={"cone_A": mA, "C0_dual": m0, "C_NE_dual": mNE})
    kids.append(c.finish(mA == (1, 1, 1, 0, 0) and m0 is not None and mNE is None))

    decs = decompositions_without_extra_rays(CNEd)
    groups = {1: ("s11", "s21"), 2: ("s12", "s22", "s32")}
    expected = {k: {frozenset(rho[i - 1] for i in d["sigma"][s]) for s in names} for k, names in groups.items()}
    found = [{frozenset(S.rays_used[i] for i in cell) for cell in S.maximal_cones} for S in decs]
    matched = {k: any(f == e for f in found) for k, e in expected.items()}
    unimodular = all(S.is_smooth() for S in decs)
    c = Certificate("cones.decompositions", witnesses={
        "count": len(decs), "matches": matched, "all_unimodular": unimodular,
        "subdivisions": decs})
    kids.append(c.finish(len(decs) == 2 and all(matched.values()) and unimodular))

    kids.append(_subdivision_census(config, C0d, mu + rho, rho))
    return Certificate.bundle("cones", kids, config.to_json())


def _subdivision_census(config, C0d, rays, rho) -> Certificate:
    """Count the subdivisions of C0^dual and locate C_NE^dual inside them.

    C_NE^dual is a union of cells exactly when the cells with all rays
    among rho form one of its two decompositions.
    """
    subs = triangulate_cone_with_rays(C0d, rays, config.convention)
    d = datasets.cones()
    rho_list = list(rho)
    splits = {"sigma1": ("s11", "s21"), "sigma2": ("s12", "s22", "s32")}
    patterns = {k: {frozenset(rho_list[i - 1] for i in d["sigma"][s]) for s in names}
                for k, names in splits.items()}
    found = {k: [] for k in splits}
    for S in subs:
        cells = [frozenset(S.rays_used[i] for i in c) for c in S.maximal_cones]
        inside = {c for c in cells if c <= set(rho)}
        for k, pat in patterns.items():
            if inside == pat:
                found[k].append({c for c in cells if c not in inside})
    counts = subdivision_counts(C0d, rays)
    wit = {"convention": config.convention, "count": len(subs), "counts_by_convention": counts,
           "containing": {k: len(v) for k, v in found.items()}}
    ok = len(subs) == 54 and all(len(v) == 1 for v in found.values())
    if ok:
        outside = found["sigma1"][0]
        ok &= outside == found["sigma2"][0]
        unsplit = len(outside) + 1
        sp = _secondary(config.threads)
        nsing = len(sp.singular_vertices())
        wit.update({"outside_cells": len(outside), "unsplit_cell_count": unsplit,
                    "split_cell_counts": {k: len(outside) + len(patterns[k]) for k in splits},
                    "chart_bookkeeping": {
                        "unsplit_times_singular": unsplit * nsing, "secondary_vertices": len(sp.vertices),
                        "outside_times_singular": len(outside) * nsing,
                        "secondary_smooth_vertices": len(sp.vertices) - nsing}})
        ok &= unsplit == 18 and wit["split_cell_counts"]["sigma1"] == 19
        ok &= unsplit * nsing == len(sp.vertices) and len(outside) * nsing == len(sp.vertices) - nsing
    c = Certificate("cones.subdivisions_C0_dual", parameters={"convention": config.convention}, witnesses=wit)
    return c.finish(ok)


# --- series ----------------------------------------------------------------

def series_suite(config: RunConfig) -> Certificate:
    chart = tuple(int(ch) for ch in config.chart) if config.chart.isdigit() else (0, 1)
    rs = gkzseries.residue_series(config.order, chart)
    default = rs if chart == (0, 1) else gkzseries.residue_series(config.order)
    kids = [gkzseries.agreement_check(min(config.order, 6), default),
            gkzseries.sublattice_check(config.order, default)]
    kids.append(gkzseries.homogeneity_check(rs.nine))
    kids.append(gkzseries.box_suite(rs.nine, config.order, random.Random(config.seed)))
    kids.append(gkzseries.chart_agreement_check(min(config.order, 5)))
    return Certificate.bundle("series", kids, config.to_json())


# --- pf --------------------------------------------------------------------

def pf_suite(config: RunConfig) -> Certificate:
    basis = gkzseries.chart_basis("s11")
    w = gkzseries.omega0_series(basis, config.order)
    infos = []
    ops = picardfuchs.generate_catalog(w, basis, infos=infos)
    printed = picardfuchs.recorded_catalog()
    same = [a == b for (_, a), b in zip(printed, ops)]
    c = Certificate("pf.catalog", parameters={"sign_rule": "witness-resolved, checked against (-1)^(l1+l2+l3)"},
                    witnesses={"matches_printed": same, "z_term_signs": [i["z_term_sign"] for i in infos],
                               "operators": ops})
    kids = [c.finish(all(same) and len(ops) == 9)]
    kids.append(picardfuchs.verify_annihilation(ops, w, config.window))

    # the z1z2z3z4 coefficient of D1 applied to omega0 cancels between two terms
    D1 = ops[0]
    img, _ = picardfuchs.apply(D1, w)
    flipped = picardfuchs.ThetaOperator({k: (-p if any(k) else p) for k, p in D1.terms.items()})
    bad, _ = picardfuchs.apply(flipped, w)
    key = (1, 1, 1, 1)
    c = Certificate("pf.witness_coefficient", witnesses={
        "D1_coefficient": img.terms.get(key, 0), "flipped_D1_coefficient": bad.terms.get(key, 0)})
    kids.append(c.finish(img.terms.get(key, 0) == 0 and bad.terms.get(key, 0) != 0))

    kids.append(picardfuchs.uniqueness_check(ops, config.window))
    kids.append(picardfuchs.discriminant_suite(50, config.seed))
    return Certificate.bundle("pf", kids, config.to_json())


# --- moduli / blowup -------------------------------------------------------

def moduli_suite(config: RunConfig) -> Certificate:
    kids = []
    for name, fn in moduli.SUITES.items():
        n = config.cover_samples if name == "cover" else config.samples
        kids.append(fn(n, config.seed))
    return Certificate.bundle("moduli", kids, config.to_json())


def blowup_suite(config: RunConfig) -> Certificate:
    kids = [fn() for name, fn in blowup.SUITES.items() if name != "flip"]
    kids.append(blowup.flip_cone_shadow(config.samples, config.seed))
    return Certificate.bundle("blowup", kids, config.to_json())


SUITES: Dict[str, Callable[[RunConfig], Certificate]] = {
    "secondary": secondary_suite, "cones": cones_suite, "series": series_suite,
    "pf": pf_suite, "moduli": moduli_suite, "blowup": blowup_suite,
}
