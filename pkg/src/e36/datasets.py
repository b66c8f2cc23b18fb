"""Loader for the bundled JSON datasets."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def _load(name: str) -> str:
    return resources.files("e36.data").joinpath(name).read_text(encoding="utf-8")


def load(name: str):
    """Parsed copy of a dataset (by dataset name or file name), fresh on each call."""
    if name in DATASETS:
        fname, key = DATASETS[name]
        data = json.loads(_load(fname))
        return data if key is None else data[key]
    return json.loads(_load(name))


def cones():
    return load("cones.json")


DATASETS = {
    "A": ("cones.json", "A"),
    "cones": ("cones.json", None),
    "ell": ("cones.json", "ell_s11"),
    "operators": ("operators.json", None),
    "lines": ("lines.json", None),
    "equations": ("blowup_eqs.json", None),
}
