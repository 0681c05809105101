"""Deterministic JSON encodings for matrices, series and certificates.

All rationals are "num/den" strings, keys are sorted and no floats or
timestamps appear anywhere, so byte-identical inputs give byte-identical
outputs.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .exactcore import SymRatMatrix, rat_from_str, rat_to_str
from .groupring import GroupRingElement
from .hahn import HahnSeries
from .polytext import poly_from_json, poly_to_json
from .soscert import DualCertificate, Inconclusive, SosCertificate, SosOutcome

FORMAT_NAME = "shadow-obstruct-certificate"


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def matrix_to_json(M: SymRatMatrix) -> list[list[str]]:
    return M.to_json()


def matrix_from_json(data) -> SymRatMatrix:
    return SymRatMatrix.from_json(data)


def series_to_json(s: HahnSeries) -> dict:
    terms = []
    for e, c in s.terms:
        if not isinstance(c, Fraction):
            raise ValueError("only exact series serialize to JSON")
        terms.append({"exp": [rat_to_str(x) for x in e], "coeff": rat_to_str(c)})
    return {
        "n": s.n,
        "terms": terms,
        "trunc": None if s.trunc is None else [rat_to_str(x) for x in s.trunc],
    }


def series_from_json(data: dict) -> HahnSeries:
    terms = {}
    for t in data["terms"]:
        e = tuple(rat_from_str(x) for x in t["exp"])
        terms[e] = rat_from_str(t["coeff"])
    trunc = data.get("trunc")
    if trunc is not None:
        trunc = tuple(rat_from_str(x) for x in trunc)
    return HahnSeries.from_dict(int(data["n"]), terms, trunc)


def outcome_to_json(target: GroupRingElement, outcome: SosOutcome) -> dict:
    base = {
        "format": FORMAT_NAME,
        "version": 1,
        "kind": outcome.kind,
        "target": poly_to_json(target),
    }
    if isinstance(outcome, SosCertificate):
        base["basis"] = [list(b) for b in outcome.basis]
        base["gram"] = outcome.gram.to_json()
    elif isinstance(outcome, DualCertificate):
        base["basis"] = [list(b) for b in outcome.basis]
        base["y"] = [
            [list(e), rat_to_str(v)] for e, v in sorted(outcome.y.items())
        ]
        base["moment"] = outcome.moment.to_json()
        base["value"] = rat_to_str(outcome.value)
    else:
        base["reason"] = outcome.reason
    return base


def outcome_from_json(data: dict) -> tuple[GroupRingElement, SosOutcome]:
    if data.get("format") != FORMAT_NAME:
        raise ValueError("not a certificate file")
    target = poly_from_json(data["target"])
    kind = data["kind"]
    if kind == "sos":
        cert = SosCertificate(
            basis=tuple(tuple(int(x) for x in b) for b in data["basis"]),
            gram=SymRatMatrix.from_json(data["gram"]),
        )
        return target, cert
    if kind == "dual":
        y = {
            tuple(int(x) for x in e): rat_from_str(v) for e, v in data["y"]
        }
        cert = DualCertificate(
            basis=tuple(tuple(int(x) for x in b) for b in data["basis"]),
            y=y,
            moment=SymRatMatrix.from_json(data["moment"]),
            value=rat_from_str(data["value"]),
        )
        return target, cert
    if kind == "inconclusive":
        return target, Inconclusive(reason=data.get("reason", ""))
    raise ValueError(f"unknown certificate kind {kind!r}")
