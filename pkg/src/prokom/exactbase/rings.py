"""Exact scalar rings: the rationals, prime fields and the integers."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import re

from ..errors import RingUnsupported

_FIELD_RE = re.compile(r"^F_?(\d+)$")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class ScalarRing:
    """One of ``Q``, ``F_p`` or ``Z``.

    Scalars are plain Python values: ``Fraction`` over Q, ``int`` in
    ``[0, p)`` over F_p and ``int`` over Z.
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Q", "F", "Z"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "F":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"F_p needs a prime p, got {self.p!r}")
        elif self.p is not None:
            raise ValueError("only prime fields carry a characteristic")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def name(self) -> str:
        return f"F_{self.p}" if self.kind == "F" else self.kind

    def __repr__(self):
        return self.name

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def coerce(self, x):
        if self.kind == "Q":
            return x if type(x) is Fraction else Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if self.kind == "Z":
                    raise ValueError(f"{x} is not an integer")
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            x = x.numerator
        x = int(x)
        return x % self.p if self.kind == "F" else x

    def inv(self, x):
        if self.kind == "Q":
            return 1 / x
        if self.kind == "F":
            return pow(x, -1, self.p)
        if x in (1, -1):
            return x
        raise RingUnsupported(f"{x} is not a unit in Z")

    def parse(self, s) -> object:
        if isinstance(s, int) and not isinstance(s, bool):
            return self.coerce(s)
        if not isinstance(s, str):
            raise ValueError(f"scalars are encoded as strings, got {s!r}")
        text = s.strip()
        if self.kind == "Q":
            return Fraction(text)
        if "/" in text:
            raise ValueError(f"fraction literal {s!r} outside Q")
        return self.coerce(int(text))

    def format(self, x) -> str:
        return str(x)

    def to_json(self) -> str:
        return self.name

    @classmethod
    def from_json(cls, s: str) -> "ScalarRing":
        return ring_from_name(s)


RATIONALS = ScalarRing("Q")
INTEGERS = ScalarRing("Z")


def prime_field(p: int) -> ScalarRing:
    return ScalarRing("F", p)


F2 = prime_field(2)


def ring_from_name(name: str) -> ScalarRing:
    name = name.strip()
    if name in ("Q", "QQ", "Rationals"):
        return RATIONALS
    if name in ("Z", "ZZ", "Integers"):
        return INTEGERS
    m = _FIELD_RE.match(name)
    if m:
        return prime_field(int(m.group(1)))
    raise ValueError(f"unknown ring {name!r}")
