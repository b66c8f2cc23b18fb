"""Command line entry point ``e36``."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional

from . import blowup, datasets, gkzseries, moduli, picardfuchs
from .certificate import Certificate, RunConfig, canonical_json
from .suites import SUITES, _secondary, census_report

SUITE_NAMES = tuple(SUITES) + ("all",)


class UsageError(Exception):
    pass


def _write(out: Optional[str], fname: str, obj) -> Optional[str]:
    if out is None:
        return None
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, fname)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(obj))
    return path


def _run_one(name: str, config: RunConfig) -> Certificate:
    t0 = time.perf_counter()
    cert = SUITES[name](config)
    cert.runtime = time.perf_counter() - t0
    return cert


def run_suite(name: str, config: Optional[RunConfig] = None, out: Optional[str] = None) -> Certificate:
    """Run a suite (or ``all``) and, if ``out`` is given, write its certificates there.

    Each suite lands in ``<suite>.json``; runtimes go to ``timings.json`` so
    the certificate files depend on the configuration alone.
    """
    config = config or RunConfig()
    if name not in SUITE_NAMES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    names = list(SUITES) if name == "all" else [name]
    if len(names) > 1 and config.threads > 1:
        with ProcessPoolExecutor(max_workers=min(config.threads, len(names))) as pool:
            certs = list(pool.map(_run_one, names, [config] * len(names)))
    else:
        certs = [_run_one(n, config) for n in names]
    if name == "all":
        result = Certificate.bundle("all", certs, config.to_json())
        result.runtime = sum(c.runtime for c in certs)
    else:
        result = certs[0]
    if out is not None:
        for c in certs:
            _write(out, f"{c.check_id}.json", c)
        if name == "all":
            _write(out, "all.json", result)
        if "secondary" in names:
            _write(out, "secondary_census.json", census_report(_secondary(config.threads)))
        with open(os.path.join(out, "timings.json"), "w", encoding="utf-8") as fh:
            json.dump(result.timings(), fh, indent=1)
            fh.write("\n")
    return result


def export_dataset(name: str, out: Optional[str] = None) -> str:
    """Canonical JSON of a bundled dataset, written to ``out/<name>.json`` when ``out`` is set."""
    if name not in datasets.DATASETS:
        raise UsageError(f"unknown dataset {name!r}; choose from {', '.join(datasets.DATASETS)}")
    text = canonical_json(datasets.load(name))
    if out is not None:
        os.makedirs(out, exist_ok=True)
        with open(os.path.join(out, f"{name}.json"), "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# --- argument handling ------------------------------------------------------

def _config(args) -> RunConfig:
    kw = {}
    for field in ("order", "window", "samples", "seed", "threads", "convention", "chart"):
        v = getattr(args, field, None)
        if v is not None:
            kw[field] = v
    if getattr(args, "cover_samples", None) is not None:
        kw["cover_samples"] = args.cover_samples
    return RunConfig(**kw)


def _common(p: argparse.ArgumentParser):
    # SUPPRESS keeps a nested parser from clobbering options given earlier
    opt = dict(default=argparse.SUPPRESS)
    p.add_argument("--order", type=int, **opt)
    p.add_argument("--window", type=int, **opt)
    p.add_argument("--samples", type=int, **opt)
    p.add_argument("--cover-samples", type=int, dest="cover_samples", **opt)
    p.add_argument("--seed", type=int, **opt)
    p.add_argument("--threads", type=int, **opt)
    p.add_argument("--convention", choices=("all", "fine", "regular", "regular-fine"), **opt)
    p.add_argument("--chart", choices=["".join(map(str, c)) for c in gkzseries.CHARTS],
                   help="residue chart, e.g. 01", **opt)
    p.add_argument("--out", help="output directory (default e36-out)", **opt)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="e36", description="Exact checks for the E6-type GKZ system.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("secondary", "cones", "all"):
        _common(sub.add_parser(name))

    s = sub.add_parser("series")
    s_sub = s.add_subparsers(dest="action")
    _common(s)
    p = s_sub.add_parser("residue")
    _common(p)
    p = s_sub.add_parser("omega0")
    _common(p)
    p.add_argument("--basis", default="s11")
    p = s_sub.add_parser("check-box")
    _common(p)
    p.add_argument("--ell", required=True, help="nine comma-separated integers")

    s = sub.add_parser("pf")
    s_sub = s.add_subparsers(dest="action")
    _common(s)
    p = s_sub.add_parser("generate")
    _common(p)
    p.add_argument("--ell", nargs="+", required=True, help="combination such as: 1 +4")
    p = s_sub.add_parser("verify")
    _common(p)
    p = s_sub.add_parser("discriminant")
    _common(p)
    p.add_argument("--eval", dest="eval_file", required=True, help="JSON file with four rationals")

    s = sub.add_parser("moduli")
    s_sub = s.add_subparsers(dest="action")
    _common(s)
    p = s_sub.add_parser("check")
    _common(p)
    p.add_argument("--suite", choices=tuple(moduli.SUITES), required=True)

    s = sub.add_parser("blowup")
    s_sub = s.add_subparsers(dest="action")
    _common(s)
    p = s_sub.add_parser("verify")
    _common(p)
    p.add_argument("--suite", choices=tuple(blowup.SUITES), required=True)

    p = sub.add_parser("export")
    p.add_argument("dataset")
    p.add_argument("--out", default=None)
    return ap


def _emit(cert: Certificate, out: Optional[str], fname: str) -> int:
    _write(out, fname, cert)
    print(json.dumps({"check_id": cert.check_id, "status": "pass" if cert.passed else "fail"}))
    return 0 if cert.passed else 1


def _parse_ell(text: str):
    vals = [int(x) for x in text.replace(" ", "").split(",") if x]
    if len(vals) != 9:
        raise UsageError("--ell needs nine integers")
    return tuple(vals)


def _combination(tokens: List[str]):
    combo = [int(t.lstrip("+")) for t in " ".join(tokens).replace("+", " ").split()]
    if not combo or any(c not in (1, 2, 3, 4) for c in combo):
        raise UsageError("--ell takes indices 1..4 of the chart basis")
    return combo


def _series_table(s) -> dict:
    return s.to_json()


def _dispatch(args) -> int:
    cmd, action = args.command, getattr(args, "action", None)
    if cmd == "export":
        sys.stdout.write(export_dataset(args.dataset, args.out))
        return 0
    config = _config(args)
    out = getattr(args, "out", "e36-out")
    if cmd in SUITE_NAMES and action is None:
        cert = run_suite(cmd, config, out)
        for c in (cert.children if cmd == "all" else [cert]):
            print(json.dumps({"check_id": c.check_id, "status": "pass" if c.passed else "fail"}))
        return 0 if cert.passed else 1

    if cmd == "series":
        if action == "residue":
            chart = tuple(int(c) for c in config.chart)
            rs = gkzseries.residue_series(config.order, chart)
            path = _write(out, f"residue_{config.chart}_order{config.order}.json", _series_table(rs.xyzu))
            print(json.dumps({"written": path, "terms": len(rs.xyzu.terms)}))
            return 0
        if action == "omega0":
            w = gkzseries.omega0_series(gkzseries.chart_basis(args.basis), config.order)
            path = _write(out, f"omega0_{args.basis}_order{config.order}.json", _series_table(w))
            print(json.dumps({"written": path, "terms": len(w.terms)}))
            return 0
        if action == "check-box":
            rs = gkzseries.residue_series(config.order, tuple(int(c) for c in config.chart))
            cert = gkzseries.box_recurrence_check(_parse_ell(args.ell), rs.nine)
            return _emit(cert, out, "box_check.json")
    if cmd == "pf":
        if action == "generate":
            basis = gkzseries.chart_basis("s11")
            w = gkzseries.omega0_series(basis, config.order)
            combo = _combination(args.ell)
            info = {}
            op = picardfuchs.generate_operator(picardfuchs.combination_vector(combo, basis), basis,
                                               witness=w, info=info)
            payload = {"combination": combo, "operator": op, "info": info}
            _write(out, "operator_" + "_".join(map(str, combo)) + ".json", payload)
            sys.stdout.write(canonical_json(payload))
            return 0
        if action == "verify":
            basis = gkzseries.chart_basis("s11")
            w = gkzseries.omega0_series(basis, config.order)
            ops = [op for _, op in picardfuchs.recorded_catalog()]
            return _emit(picardfuchs.verify_annihilation(ops, w, config.window), out, "pf_verify.json")
        if action == "discriminant":
            with open(args.eval_file, encoding="utf-8") as fh:
                z = [Fraction(x) if not isinstance(x, dict) else Fraction(x["num"], x["den"])
                     for x in json.load(fh)]
            if len(z) != 4:
                raise UsageError("the discriminant takes four coordinates")
            value = picardfuchs.discriminant_eval(z)
            sys.stdout.write(canonical_json({"z": z, "discriminant": value}))
            return 0
    if cmd == "moduli" and action == "check":
        fn = moduli.SUITES[args.suite]
        n = config.cover_samples if args.suite == "cover" else config.samples
        return _emit(fn(n, config.seed), out, f"moduli_{args.suite}.json")
    if cmd == "blowup" and action == "verify":
        fn = blowup.SUITES[args.suite]
        cert = fn(config.samples, config.seed) if args.suite == "flip" else fn()
        return _emit(cert, out, f"blowup_{args.suite}.json")
    raise UsageError(f"incomplete command: {cmd} {action or ''}".strip())


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:          # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (UsageError, ValueError) as exc:
        print(f"e36: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"e36: cannot write output: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":      # pragma: no cover
    sys.exit(main())
