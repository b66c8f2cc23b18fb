"""The ten end-to-end acceptance checks, each reporting one PASS/FAIL line."""
import filecmp
import os
import random
import time
from fractions import Fraction

import pytest

from e36 import blowup, datasets, gkzseries, moduli, picardfuchs
from e36.certificate import RunConfig
from e36.cli import run_suite
from e36.cones import (Cone, decompositions_without_extra_rays, dual_cone, is_gorenstein,
                       lattice_isomorphic)
from e36.exactcore import lattice
from e36.exactcore.gauge import PHI_A
from e36.suites import _quarter, _secondary, _subdivision_census, anchor_vertex

D = datasets.cones()
RHO = [tuple(r) for r in D["rho"]]
MU = [tuple(r) for r in D["mu"]]


@pytest.fixture
def report(pytestconfig):
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")

    def emit(number, title, checks):
        ok = all(v for v in checks.values())
        failed = [k for k, v in checks.items() if not v]
        line = f"ACCEPTANCE {number:2d} {title}: {'PASS' if ok else 'FAIL ' + ', '.join(failed)}"
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
        assert ok, line

    return emit


def test_criterion_01_triangulation_census(report):
    t0 = time.perf_counter()
    _secondary.cache_clear()
    sp = _secondary()
    elapsed = time.perf_counter() - t0
    sing = sp.singular_vertices()
    anchor, _ = anchor_vertex(sp)
    V = {tuple(v) for v in D["V_quarter"]}
    report(1, "triangulation census", {
        "108 regular": len(sp.census.regular) == 108,
        "108 vertices": len(sp.vertices) == 108,
        "6 singular": len(sing) == 6,
        "quarter differences": anchor is not None and {_quarter(b, anchor) for b in sing} == V,
        "under 2 minutes": elapsed < 120,
    })


def test_criterion_02_cone_facts(report):
    CNEd = dual_cone(Cone(D["C_NE_pi4"]))
    C0d = dual_cone(Cone(D["C0_pi4"]))
    decs = decompositions_without_extra_rays(CNEd)
    cells = [{frozenset(S.rays_used[i] for i in c) for c in S.maximal_cones} for S in decs]
    sig = {k: frozenset(RHO[i - 1] for i in v) for k, v in D["sigma"].items()}
    want = [{sig["s11"], sig["s21"]}, {sig["s12"], sig["s22"], sig["s32"]}]
    sp = _secondary()
    CNE = Cone(D["C_NE_pi4"])
    witnesses_ok = True
    for psi in sp.singular_vertices():
        C = sp.vertex_cones[psi]
        g = lattice_isomorphic(C, CNE)
        witnesses_ok &= (g is not None and abs(lattice.det(g)) == 1
                         and {tuple(lattice.matvec(g, r)) for r in C.rays} == set(CNE.rays))
    report(2, "cone facts", {
        "dual of C_NE is rho": set(CNEd.rays) == set(RHO),
        "two decompositions": len(decs) == 2 and sorted(map(sorted, cells), key=len)
        == sorted(map(sorted, want), key=len),
        "sigma cones unimodular": all(Cone(list(c)).is_smooth() for c in sig.values()),
        "Cone(A) Gorenstein with m=(1,1,1,0,0)": is_gorenstein(Cone(lattice.transpose(PHI_A))) == (1, 1, 1, 0, 0),
        "C0 dual Gorenstein": is_gorenstein(C0d) is not None,
        "C_NE dual not Gorenstein": is_gorenstein(CNEd) is None,
        "singular vertex cones isomorphic to C_NE": witnesses_ok,
    })


def test_criterion_03_subdivision_census(report):
    C0d = dual_cone(Cone(D["C0_pi4"]))
    cert = _subdivision_census(RunConfig(), C0d, MU + RHO, RHO)
    w = cert.witnesses
    book = w.get("chart_bookkeeping", {})
    report(3, "subdivision census", {
        "54 under the fine convention": w["convention"] == "fine" and w["count"] == 54,
        "one subdivision per decomposition of C_NE dual": w["containing"] == {"sigma1": 1, "sigma2": 1},
        "18 unsplit": w.get("unsplit_cell_count") == 18,
        "19 split": w.get("split_cell_counts", {}).get("sigma1") == 19,
        "18 x 6 = 108": book.get("unsplit_times_singular") == 108 == book.get("secondary_vertices"),
        "certificate": cert.passed,
    })


def test_criterion_04_series_agreement(report):
    t0 = time.perf_counter()
    rs = gkzseries.residue_series(8)
    agree = gkzseries.agreement_check(6, rs)
    sub = gkzseries.sublattice_check(8, rs)
    elapsed = time.perf_counter() - t0
    b = gkzseries.chart_basis("s11")
    report(4, "series agreement", {
        "c5 on n+m+k+2|l| <= 6": agree.passed and agree.witnesses["exponents_compared"] == 176,
        "c4 on the sublattice": sub.passed,
        "c(1,1,1,1) = 1/8": rs.nine.coefficient(b.exponent((1, 1, 1, 1))) == Fraction(1, 8),
        "c(1,1,0,1) = 1/4": rs.nine.coefficient(b.exponent((1, 1, 0, 1))) == Fraction(1, 4),
        "c(1,1,1,-1) = 1/8": rs.xyzu.coefficient((1, 1, 1, -1)) == Fraction(1, 8),
        "c(1,0,0,0) = 0": rs.nine.coefficient(b.exponent((1, 0, 0, 0))) == 0,
        "under 1 minute": elapsed < 60,
    })


def test_criterion_05_homogeneity_and_boxes(report):
    rs = gkzseries.residue_series(8)
    boxes = gkzseries.box_suite(rs.nine, 8, random.Random(1906))
    basis_ok = all(c.passed for c in boxes.children[:4])
    randoms = boxes.children[4:]
    report(5, "homogeneity and boxes", {
        "degree beta": gkzseries.homogeneity_check(rs.nine, gkzseries.BETA).passed,
        "l1..l4": basis_ok and len(boxes.children) >= 4,
        "20 random elements": len(randoms) == 20 and all(c.passed and c.witnesses["checked"] > 0 for c in randoms),
    })


def test_criterion_06_picard_fuchs(report):
    basis = gkzseries.chart_basis("s11")
    w = gkzseries.omega0_series(basis, 8)
    infos = []
    ops = picardfuchs.generate_catalog(w, basis, infos=infos)
    printed = [op for _, op in picardfuchs.recorded_catalog()]
    img, _ = picardfuchs.apply(ops[0], w)
    report(6, "Picard-Fuchs operators", {
        "nine operators reproduced": len(ops) == 9 and ops == printed,
        "sign rule recorded": all(i["z_term_sign"] == i["character"] for i in infos),
        "annihilation on window 4": picardfuchs.verify_annihilation(ops, w, 4).passed,
        "z1z2z3z4 witness": img.coefficient((1, 1, 1, 1)) == 0 and w.coefficient((1, 1, 1, 1)) == Fraction(1, 8),
        "discriminant suite": picardfuchs.discriminant_suite(50, 1906).passed,
    })


def test_criterion_07_moduli_identities(report):
    checks = {name: moduli.SUITES[name](200, 1906).passed for name in ("igusa", "pluecker", "roundtrip", "sigma")}
    cover = moduli.covering_check(500, 1906)
    checks["cover on 500"] = cover.passed and cover.witnesses["failures"] == []
    report(7, "moduli identities", checks)


def test_criterion_08_line_geometry(report):
    cert = moduli.line_suite()
    w = cert.witnesses
    lines = {L.id: L for L in moduli.load_lines()}
    images = w["plane_images"]
    on_y0 = all(any(list(f) == [1, 0, 0, 0, 0] for f in lines[i].forms) for v in images.values() for i in v)
    report(8, "line geometry", {
        "F4 vanishes on all 15": len(w["F4_vanishes"]) == 15 and all(w["F4_vanishes"].values()),
        "15 points": w["points"] == 15,
        "3-regular both ways": w["three_lines_per_point"] and w["three_points_per_line"],
        "planes into Y0 = 0": on_y0,
        "planes onto L10..L15": sorted(i for v in images.values() for i in v) == list(range(10, 16)),
        "matches recorded": images == datasets.load("lines")["plane_images"],
        "certificate": cert.passed,
    })


def test_criterion_09_blowup(report):
    report(9, "blow-up", {name: fn().passed for name, fn in blowup.SUITES.items()})


def test_criterion_10_determinism(report, tmp_path):
    t0 = time.perf_counter()
    runs = []
    for k in range(2):
        _secondary.cache_clear()
        out = tmp_path / f"run{k}"
        cert = run_suite("all", RunConfig(), str(out))
        runs.append((out, cert, time.perf_counter() - t0))
    (a, c1, t1), (b, c2, t2) = runs
    files = sorted(f for f in os.listdir(a) if f != "timings.json")
    _, mismatch, errors = filecmp.cmpfiles(a, b, files, shallow=False)
    report(10, "determinism", {
        "exit status 0": c1.passed and c2.passed,
        "byte-identical bundles": files and not mismatch and not errors,
        "default run under 10 minutes": t1 < 600,
    })
