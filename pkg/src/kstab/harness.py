"""Instance specs, per-instance certificates, and a content-addressed cache."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
from referencing import Registry, Resource

from . import __version__
from .blowup import (blowup_model, minimal_semiample_r, prop31_check, prop44_margin,
                     random_flag_ideal, semiample_test, seshadri_flag)
from .dfinter import decomposition_check, donaldson_futaki_intersection
from .dfweight import donaldson_futaki_weight
from .ideals import FlagIdeal
from .lct import global_lct, lct_lower_oracle, threshold_gate
from .toric import ToricFanoVariety, load_corpus, variety


class InputError(ValueError):
    """Malformed or unsatisfiable input (exit code 2)."""


def q(x) -> str | None:
    if x is None:
        return None
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- schemas ------------------------------------------------------------------

def _schema(name: str) -> dict:
    return json.loads((resources.files("kstab") / "schemas" / name).read_text())


def _registry() -> Registry:
    res = [(n, Resource.from_contents(_schema(n)))
           for n in ("variety.v1.json", "flag-ideal.v1.json", "instance.v1.json", "certificate.v1.json")]
    return Registry().with_resources([(f"kstab/{n}", r) for n, r in res])


def validate_json(data: Any, schema: str) -> None:
    validator = jsonschema.Draft202012Validator(_schema(schema), registry=_registry())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.path) or "<root>"
        raise InputError(f"{schema}: {where}: {e.message}")


# -- instances ----------------------------------------------------------------

@dataclass(frozen=True)
class InstanceSpec:
    raw: dict

    @classmethod
    def from_json(cls, data: Any) -> "InstanceSpec":
        validate_json(data, "instance.v1.json")
        return cls(data)

    def canonical(self) -> str:
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))

    def key(self) -> str:
        return hashlib.sha256(f"{__version__}\n{self.canonical()}".encode()).hexdigest()

    @property
    def kmax(self) -> int:
        return int(self.raw.get("kmax", 12))

    @property
    def seed(self) -> int:
        return int(self.raw.get("seed", 0))

    def variety(self) -> ToricFanoVariety:
        ref = self.raw["variety"]
        try:
            if isinstance(ref, str):
                return variety(ref)
            if "corpus" in ref:
                return load_corpus(ref["corpus"])[ref["index"]]
            return ToricFanoVariety.from_json(ref)
        except (KeyError, IndexError, ValueError) as exc:
            raise InputError(f"bad variety reference: {exc}") from exc

    def flag_ideal(self, X: ToricFanoVariety) -> FlagIdeal:
        try:
            if "flag_ideal" in self.raw:
                return FlagIdeal.from_json(X, self.raw["flag_ideal"])
            return random_flag_ideal(X, self.seed)
        except (ValueError, RuntimeError) as exc:
            raise InputError(f"bad flag ideal: {exc}") from exc

    def order(self, model) -> int:
        r = self.raw.get("r", "auto")
        if r == "auto":
            found = minimal_semiample_r(model)
            if found is None:
                raise InputError("no semiample order r found below the search bound")
            return found
        return int(r)


# -- certificate --------------------------------------------------------------

def lct_report(X: ToricFanoVariety, oracle_mmax: int | None = None) -> dict:
    res = global_lct(X)
    out = {"variety": X.name, "n": X.n, "lct": res.to_json(), "gate": threshold_gate(X, res)}
    if oracle_mmax:
        orc = lct_lower_oracle(X, oracle_mmax)
        out["oracle"] = orc.to_json()
        out["oracle_agrees"] = orc.value == res.value
        out["passed"] = orc.value >= res.value
    else:
        out["passed"] = True
    return out


def certify(spec: InstanceSpec) -> dict:
    """Run every check on one instance; ``passed`` is the conjunction of the ledger."""
    X = spec.variety()
    J = spec.flag_ideal(X)
    model = blowup_model(X, J)
    model.check()
    r = spec.order(model)
    ledger: list[dict] = []

    def record(check, source, passed, note=""):
        entry = {"check": check, "source": source, "passed": bool(passed)}
        if note:
            entry["note"] = note
        ledger.append(entry)

    lct = global_lct(X)
    gate = threshold_gate(X, lct)
    sesh = seshadri_flag(X, J)
    semi = semiample_test(model, r)
    record("semiample at order r", "semiample_test", semi.passed)
    if sesh.value is not None:
        record("semiample implies 1/r <= Seshadri", "semiample_test+seshadri_flag",
               (not semi.passed) or Fraction(1, r) <= sesh.value)
    p31 = prop31_check(model, sesh)
    record("Seshadri bounded by discrepancy ratio / lct", "prop31_check", p31.holds,
           "vacuous" if p31.vacuous else "")
    margin = prop44_margin(model, sesh)

    df_w = donaldson_futaki_weight(X, J, r, kmax=spec.kmax)
    df_i = donaldson_futaki_intersection(X, J, r)
    n = X.n
    record("e_{n+1,n+1} = 0", "donaldson_futaki_weight", df_w.e[(n + 1, n + 1)] == 0)
    record("weight DF = intersection DF", "donaldson_futaki_weight+donaldson_futaki_intersection",
           df_w.value == df_i.value)
    if J.trivial_type:
        record("trivial configuration has DF = 0", "donaldson_futaki_intersection", df_i.value == 0)

    dec = decomposition_check(X, J, r)
    for name, ok in dec.checks.items():
        record(name, "decomposition_check", ok)
    if not margin.vacuous:
        sign = margin.detail["sign"]
        if sign == "positive":
            record("margin > 0 implies DF > 0", "prop44_margin", df_i.value > 0)
        elif sign == "zero":
            record("margin = 0 implies DF >= 0", "prop44_margin", df_i.value >= 0)

    cert = {
        "schema": "kstab/certificate.v1",
        "instance": {"key": spec.key(), "variety": X.name, "flag_ideal": J.to_json(), "r": r,
                     "seed": spec.seed, "version": __version__},
        "lct": lct.to_json(),
        "gate": gate,
        "seshadri": q(sesh.value),
        "blowup": model.to_json(),
        "prop31": {"lhs": q(p31.lhs), "rhs": q(p31.rhs), "holds": p31.holds, "vacuous": p31.vacuous},
        "margin": {"epsilon": q(margin.lhs), "vacuous": margin.vacuous,
                   "sign": margin.detail.get("sign")},
        "df": {"weight": df_w.to_json(), "intersection": df_i.to_json()},
        "decomposition": {"first": q(dec.first), "second": q(dec.second), "A^n.E": q(dec.e_degree),
                          "hodge": q(dec.hodge), "s": dec.s},
        "ledger": ledger,
        "passed": all(e["passed"] for e in ledger),
    }
    return cert


# -- cache --------------------------------------------------------------------

class Cache:
    """One JSON file per instance key; writes go through a temp file and rename."""

    def __init__(self, root: str | os.PathLike | None):
        self.root = Path(root) if root else None
        if self.root:
            self.root.mkdir(parents=True, exist_ok=True)

    def get(self, key: str) -> dict | None:
        if not self.root:
            return None
        path = self.root / f"{key}.json"
        if not path.exists():
            return None
        return json.loads(path.read_text())

    def put(self, key: str, value: dict) -> None:
        if not self.root:
            return
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(value, fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, self.root / f"{key}.json")


def certify_cached(spec: InstanceSpec, cache: Cache, spot_check: bool = False) -> dict:
    hit = cache.get(spec.key())
    if hit is not None:
        if spot_check and certify(spec) != hit:
            raise AssertionError(f"cached certificate {spec.key()} differs from recomputation")
        return hit
    cert = certify(spec)
    cache.put(spec.key(), cert)
    return cert
