"""Verdicts and replayable certificates.

A certificate is a list of claims, each of which can be re-checked with
nothing but exact matrix arithmetic:

``equation``
    ``sum_k coef_k * (M_k1 @ M_k2 @ ...)`` equals ``rhs`` row-wise modulo
    ``moduli`` (0 = exact equality).
``nonzero``
    a matrix is nonzero row-wise modulo ``moduli``.
``well_defined``
    a matrix defines a map between two presented modules.
``infeasible``
    a linear problem (stored in full) has no solution, witnessed by a
    Farkas-type row vector ``y``.

Every certificate also stores a SHA-256 digest of its canonical JSON form,
so a single changed entry is always detected, even in claims whose
mathematical content would survive the change.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import hashlib
import json

from .exactbase.matrix import Matrix
from .exactbase.rings import ScalarRing, ring_from_name
from .errors import SchemaError

FORMAT_VERSION = "1"


class Outcome(Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    INCONCLUSIVE = "InconclusiveWindow"

    @property
    def exit_code(self):
        return {"Certified": 0, "Refuted": 1, "InconclusiveWindow": 2}[self.value]


CERTIFIED = Outcome.CERTIFIED
REFUTED = Outcome.REFUTED
INCONCLUSIVE = Outcome.INCONCLUSIVE


# ---------------------------------------------------------------------------
# claims


def _mat(m):
    return m.to_json() if isinstance(m, Matrix) else m


def equation_claim(terms, rhs: Matrix, moduli=None, label=""):
    """``terms`` is a list of ``(coef, [Matrix, ...])``; the product is taken left to right."""
    if moduli is None:
        moduli = [0] * rhs.nrows
    ring = rhs.ring
    return {
        "type": "equation",
        "label": label,
        "moduli": [int(x) for x in moduli],
        "terms": [{"coef": ring.format(ring.coerce(c)), "factors": [_mat(f) for f in fs]}
                  for c, fs in terms],
        "rhs": _mat(rhs),
    }


def morphism_equation(lhs_terms, rhs, label=""):
    """Equation claim between BaseMorphism composites.

    ``lhs_terms`` is a list of ``(coef, [morphism, ...])`` with the
    composite read left to right as ``m1 @ m2 @ ...``.
    """
    return equation_claim([(c, [m.matrix for m in ms]) for c, ms in lhs_terms], rhs.matrix,
                          rhs.target.orders, label)


def nonzero_claim(m: Matrix, moduli=None, label=""):
    return {"type": "nonzero", "label": label,
            "moduli": [int(x) for x in (moduli or [0] * m.nrows)], "matrix": _mat(m)}


def well_defined_claim(morphism, label=""):
    return {"type": "well_defined", "label": label, "matrix": morphism.matrix.to_json(),
            "source": list(morphism.source.orders), "target": list(morphism.target.orders)}


def infeasible_claim(problem, y, label=""):
    ring = problem.ring
    fmt = (lambda v: str(Fraction(v))) if ring.kind == "Z" else ring.format
    return {"type": "infeasible", "label": label, "problem": problem.to_json(),
            "y": [fmt(v) for v in y]}


def _canonical_entries(ring, obj):
    """Entries must be written in canonical form; anything else is a mutation."""
    m = Matrix.from_json(ring, obj)
    if [ring.format(x) for r in m.data for x in r] != list(obj["entries"]):
        raise SchemaError("matrix entries are not in canonical form")
    return m


def _reduce_mod(ring, m: Matrix, moduli):
    if ring.kind != "Z":
        return m
    if len(moduli) != m.nrows:
        raise SchemaError("moduli length does not match row count")
    return m.reduce_rows(moduli)


def check_claim(ring: ScalarRing, claim) -> bool:
    kind = claim.get("type")
    if kind == "equation":
        rhs = _canonical_entries(ring, claim["rhs"])
        total = Matrix.zeros(ring, rhs.nrows, rhs.ncols)
        for t in claim["terms"]:
            coef = ring.parse(t["coef"])
            if ring.format(coef) != t["coef"]:
                return False
            fs = [_canonical_entries(ring, f) for f in t["factors"]]
            if not fs:
                return False
            prod = fs[0]
            for f in fs[1:]:
                prod = prod @ f
            total = total + prod.scale(coef)
        moduli = claim["moduli"]
        return _reduce_mod(ring, total - rhs, moduli).is_zero()
    if kind == "nonzero":
        m = _canonical_entries(ring, claim["matrix"])
        return not _reduce_mod(ring, m, claim["moduli"]).is_zero()
    if kind == "well_defined":
        from .exactbase.modules import BaseObject, well_defined
        m = _canonical_entries(ring, claim["matrix"])
        return well_defined(m, BaseObject(ring, claim["source"]), BaseObject(ring, claim["target"]))
    if kind == "infeasible":
        from .exactbase.solve import LinearProblem
        problem = LinearProblem.from_json(claim["problem"])
        if problem.ring != ring:
            return False
        if ring.kind == "Z":
            y = [Fraction(v) for v in claim["y"]]
            if [str(v) for v in y] != claim["y"]:
                return False
        else:
            y = [ring.parse(v) for v in claim["y"]]
            if [ring.format(v) for v in y] != claim["y"]:
                return False
        return problem.check_refutation(y)
    raise SchemaError(f"unknown claim type {kind!r}")


# ---------------------------------------------------------------------------
# certificates and verdicts


def _digest(body) -> str:
    text = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass
class Certificate:
    predicate: str
    outcome: Outcome
    ring: ScalarRing
    claims: list = field(default_factory=list)
    scope: dict = field(default_factory=dict)

    def extend(self, claims):
        self.claims.extend(claims)
        return self

    def body(self):
        return {"version": FORMAT_VERSION, "predicate": self.predicate,
                "outcome": self.outcome.value, "ring": self.ring.name,
                "scope": self.scope, "claims": self.claims}

    def to_json(self):
        body = self.body()
        body["digest"] = _digest(body)
        return body

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["predicate"], Outcome(obj["outcome"]), ring_from_name(obj["ring"]),
                       list(obj["claims"]), dict(obj.get("scope", {})))
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(f"malformed certificate: {exc}") from exc

    def verify(self) -> bool:
        return all(check_claim(self.ring, c) for c in self.claims)


def replay(obj) -> tuple[bool, str]:
    """Re-check a certificate given as parsed JSON.  Returns ``(ok, message)``."""
    if not isinstance(obj, dict):
        return False, "certificate must be a JSON object"
    digest = obj.get("digest")
    body = {k: v for k, v in obj.items() if k != "digest"}
    if digest != _digest(body):
        return False, "digest mismatch"
    try:
        cert = Certificate.from_json(obj)
    except SchemaError as exc:
        return False, str(exc)
    for k, claim in enumerate(cert.claims):
        try:
            ok = check_claim(cert.ring, claim)
        except Exception as exc:  # malformed claims fail replay, they do not crash it
            return False, f"claim {k} ({claim.get('label', '')}) is malformed: {exc}"
        if not ok:
            return False, f"claim {k} ({claim.get('label', '')}) does not hold"
    return True, f"{len(cert.claims)} claims verified"


@dataclass
class Verdict:
    """Outcome of a predicate together with its evidence.

    ``witness`` holds the mathematical objects (lifts, homotopies, ...) and
    ``certificate`` their replayable encoding.  Inconclusive verdicts carry
    no certificate.
    """

    outcome: Outcome
    predicate: str
    certificate: Certificate | None = None
    witness: dict = field(default_factory=dict)
    reason: str = ""

    @property
    def certified(self):
        return self.outcome is CERTIFIED

    @property
    def refuted(self):
        return self.outcome is REFUTED

    @property
    def inconclusive(self):
        return self.outcome is INCONCLUSIVE

    @property
    def definitive(self):
        return self.outcome is not INCONCLUSIVE

    def __repr__(self):
        extra = f", {self.reason}" if self.reason else ""
        return f"Verdict({self.predicate}: {self.outcome.value}{extra})"


def certified(predicate, ring, claims=(), witness=None, scope=None, reason=""):
    cert = Certificate(predicate, CERTIFIED, ring, list(claims), dict(scope or {}))
    return Verdict(CERTIFIED, predicate, cert, dict(witness or {}), reason)


def refuted(predicate, ring, claims=(), witness=None, scope=None, reason=""):
    cert = Certificate(predicate, REFUTED, ring, list(claims), dict(scope or {}))
    return Verdict(REFUTED, predicate, cert, dict(witness or {}), reason)


def inconclusive(predicate, reason="", witness=None):
    return Verdict(INCONCLUSIVE, predicate, None, dict(witness or {}), reason)
