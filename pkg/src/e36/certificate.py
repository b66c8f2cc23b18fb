"""Machine-readable check results and the run configuration."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, List, Optional

from .exactcore.rational import rational_to_json


def _plain(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return rational_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=lambda x: json.dumps(x, sort_keys=True))
        return items
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, float, str)):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


class Certificate:
    """Outcome of one check.

    ``runtime`` is measured but excluded from :meth:`to_json`, so the
    serialized certificate depends only on the parameters.
    """

    def __init__(self, check_id: str, parameters: Optional[dict] = None,
                 witnesses: Optional[dict] = None):
        self.check_id = check_id
        self.parameters = dict(parameters or {})
        self.witnesses = dict(witnesses or {})
        self.status: Optional[str] = None
        self.children: List["Certificate"] = []
        self.runtime: float = 0.0
        self._t0 = time.perf_counter()

    def finish(self, ok: bool) -> "Certificate":
        self.status = "pass" if ok else "fail"
        self.runtime = time.perf_counter() - self._t0
        return self

    @property
    def passed(self) -> bool:
        return self.status == "pass" and all(c.passed for c in self.children)

    def add(self, child: "Certificate") -> "Certificate":
        self.children.append(child)
        return child

    def to_json(self) -> dict:
        out = {"check_id": self.check_id, "status": "pass" if self.passed else "fail",
               "parameters": self.parameters, "witnesses": self.witnesses}
        if self.children:
            out["checks"] = [c.to_json() for c in self.children]
        return _plain(out)

    def timings(self) -> dict:
        out = {"check_id": self.check_id, "seconds": round(self.runtime, 3)}
        if self.children:
            out["checks"] = [c.timings() for c in self.children]
        return out

    @classmethod
    def bundle(cls, check_id: str, children: List["Certificate"], parameters=None) -> "Certificate":
        c = cls(check_id, parameters)
        for ch in children:
            c.add(ch)
        return c.finish(True)

    def __repr__(self):
        return f"Certificate({self.check_id!r}, {self.status})"


@dataclass(frozen=True)
class RunConfig:
    order: int = 8
    window: int = 4
    samples: int = 200
    cover_samples: int = 500
    seed: int = 1906
    threads: int = 1
    convention: str = "fine"
    chart: str = "01"           # residue chart (i, j) written as two digits

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("threads")       # output does not depend on it
        return d
