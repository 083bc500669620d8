"""Windowed ind-systems and pro-towers of supercomplexes.

Only a finite prefix (the window) of each sequential system is stored.  With
a stabilizing tail every level past the window equals the last stored one
and every further transition is the identity, so colimits and limits are
read off at the last level and negative answers are definitive.  With an
unknown tail, nothing is assumed past the window.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import DataInvalid, NotChainMap, ShapeMismatch, WindowTooShort
from ..exactbase.modules import BaseMorphism
from ..supercomplex import ChainMap, SuperComplex, commutes

STABILIZING = "stabilizing"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Window:
    length: int
    tail: str = STABILIZING

    def __post_init__(self):
        if self.length < 1:
            raise DataInvalid("a window holds at least one level")
        if self.tail not in (STABILIZING, UNKNOWN):
            raise DataInvalid(f"tail must be {STABILIZING!r} or {UNKNOWN!r}")

    @property
    def stabilizing(self):
        return self.tail == STABILIZING

    @property
    def last(self):
        return self.length - 1

    def to_json(self):
        return {"length": self.length, "tail": self.tail}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["length"]), obj.get("tail", STABILIZING))


def meet(*windows: Window) -> str:
    """Tail of a construction built from several systems."""
    return STABILIZING if all(w.stabilizing for w in windows) else UNKNOWN


# ---------------------------------------------------------------------------
# ind-systems


class IndComplex:
    """``X_0 -> X_1 -> ...`` with chain-map transitions ``X_i -> X_{i+1}``."""

    def __init__(self, levels, transitions, window: Window | None = None, *, injective=None, check=True):
        levels = tuple(levels)
        transitions = tuple(transitions)
        window = window or Window(len(levels))
        if len(levels) != window.length or len(transitions) != window.length - 1:
            raise ShapeMismatch("window length does not match the stored levels")
        ring = levels[0].ring
        for i, t in enumerate(transitions):
            if t.source != levels[i] or t.target != levels[i + 1]:
                raise ShapeMismatch(f"transition {i} has the wrong source or target")
            if check and not commutes(t):
                raise NotChainMap(f"transition {i} is not a chain map")
        self.levels = levels
        self.transitions = transitions
        self.window = window
        self.ring = ring
        self._injective = injective

    @classmethod
    def constant(cls, C: SuperComplex, length=1, tail=STABILIZING):
        return cls([C] * length, [ChainMap.identity(C)] * (length - 1), Window(length, tail))

    @classmethod
    def zero(cls, ring, length=1, tail=STABILIZING):
        return cls.constant(SuperComplex.zero(ring), length, tail)

    @property
    def length(self):
        return self.window.length

    @property
    def last(self):
        return self.window.last

    def level(self, i) -> SuperComplex:
        if i < self.length:
            return self.levels[i]
        if self.window.stabilizing:
            return self.levels[-1]
        raise WindowTooShort(f"level {i} lies past the window of length {self.length}")

    def transition(self, i, j) -> ChainMap:
        """The composite ``X_i -> X_j`` for ``i <= j``."""
        if j < i:
            raise ShapeMismatch("ind transitions only go forward")
        f = ChainMap.identity(self.level(i))
        for k in range(i, min(j, self.last)):
            f = self.transitions[k] @ f
        if j > self.last:
            self.level(j)  # raises under an unknown tail
        return f

    @property
    def injective(self) -> bool:
        """Injectivity flag: set explicitly, or automatic for fields and zero systems."""
        if self._injective is not None:
            return self._injective
        return self.ring.is_field or self.is_zero()

    def is_zero(self):
        return all(L.is_zero() for L in self.levels)

    def __eq__(self, other):
        return (isinstance(other, IndComplex) and self.window == other.window
                and self.levels == other.levels and self.transitions == other.transitions)

    def __hash__(self):
        return hash((self.window, self.levels, self.transitions))

    def __repr__(self):
        return f"IndComplex({self.length} levels, {self.window.tail})"

    def to_json(self):
        return {"window": self.window.to_json(), "levels": [L.to_json() for L in self.levels],
                "transitions": [{"f0": t[0].matrix.to_json(), "f1": t[1].matrix.to_json()}
                                for t in self.transitions]}

    @classmethod
    def from_json(cls, obj, ring=None):
        from ..exactbase.matrix import Matrix
        levels = [SuperComplex.from_json(L, ring) for L in obj["levels"]]
        ring = ring or levels[0].ring
        trans = []
        for i, t in enumerate(obj["transitions"]):
            A, B = levels[i], levels[i + 1]
            trans.append(ChainMap(A, B, BaseMorphism(A[0], B[0], Matrix.from_json(ring, t["f0"])),
                                  BaseMorphism(A[1], B[1], Matrix.from_json(ring, t["f1"]))))
        return cls(levels, trans, Window.from_json(obj["window"]))


class IndMorphism:
    """``X -> Y`` given by a level map ``m`` and chain maps ``X_i -> Y_{m(i)}``.

    Two representatives are equal when they agree after pushing into the
    last stored level of ``Y`` (the colimit, for a stabilizing tail).
    """

    def __init__(self, source: IndComplex, target: IndComplex, level_map, components, *, check=True):
        level_map = tuple(int(m) for m in level_map)
        components = tuple(components)
        if len(level_map) != source.length or len(components) != source.length:
            raise ShapeMismatch("one component per source level is required")
        for i, (m, c) in enumerate(zip(level_map, components)):
            if not 0 <= m < target.length:
                raise ShapeMismatch(f"component {i} points outside the target window")
            if c.source != source.levels[i] or c.target != target.levels[m]:
                raise ShapeMismatch(f"component {i} has the wrong source or target")
        self.source = source
        self.target = target
        self.level_map = level_map
        self.components = components
        if check and not self.is_compatible():
            raise DataInvalid("components are not compatible with the transitions")

    @classmethod
    def levelwise(cls, source, target, components, check=True):
        return cls(source, target, range(source.length), components, check=check)

    @classmethod
    def identity(cls, X: IndComplex):
        return cls.levelwise(X, X, [ChainMap.identity(L) for L in X.levels], check=False)

    @classmethod
    def zero(cls, X: IndComplex, Y: IndComplex):
        m = [min(i, Y.last) for i in range(X.length)]
        return cls(X, Y, m, [ChainMap.zero(X.levels[i], Y.levels[m[i]]) for i in range(X.length)], check=False)

    @property
    def ring(self):
        return self.source.ring

    def is_levelwise(self):
        return self.level_map == tuple(range(self.source.length))

    def component(self, i):
        """``(m, f)`` with ``f: X_i -> Y_m``; past the window the last component is reused."""
        if i >= self.source.length:
            self.source.level(i)
            i = self.source.last
        return self.level_map[i], self.components[i]

    def pushed(self, i, j=None) -> ChainMap:
        """Component ``i`` pushed forward into ``Y_j`` (default: last stored level)."""
        m, f = self.component(i)
        j = self.target.last if j is None else j
        if j < m:
            raise ShapeMismatch(f"cannot push level {m} back to {j}")
        return self.target.transition(m, j) @ f

    def is_compatible(self):
        X = self.source
        return all(self.pushed(i + 1) @ X.transitions[i] == self.pushed(i) for i in range(X.last))

    def __matmul__(self, other: "IndMorphism") -> "IndMorphism":
        """``self o other``."""
        if other.target != self.source:
            raise ShapeMismatch("ind-morphisms do not compose")
        level_map, comps = [], []
        for i in range(other.source.length):
            m, f = other.component(i)
            k, g = self.component(m)
            level_map.append(k)
            comps.append(g @ f)
        return IndMorphism(other.source, self.target, level_map, comps, check=False)

    def __eq__(self, other):
        if not (isinstance(other, IndMorphism) and self.source == other.source and self.target == other.target):
            return False
        return all(self.pushed(i) == other.pushed(i) for i in range(self.source.length))

    def __hash__(self):
        return hash((self.source, self.target))

    def degree(self, k):
        """Degree-``k`` components as BaseMorphisms."""
        return [c[k] for c in self.components]

    def to_json(self):
        return {"level_map": list(self.level_map),
                "components": [{"f0": c[0].matrix.to_json(), "f1": c[1].matrix.to_json()}
                               for c in self.components]}

    @classmethod
    def from_json(cls, source, target, obj):
        from ..exactbase.matrix import Matrix
        ring = source.ring
        comps = []
        for i, (m, c) in enumerate(zip(obj["level_map"], obj["components"])):
            A, B = source.levels[i], target.levels[int(m)]
            comps.append(ChainMap(A, B, BaseMorphism(A[0], B[0], Matrix.from_json(ring, c["f0"])),
                                  BaseMorphism(A[1], B[1], Matrix.from_json(ring, c["f1"]))))
        return cls(source, target, obj["level_map"], comps)


# ---------------------------------------------------------------------------
# pro-towers of ind-systems


class ProIndComplex:
    """``C_0 <- C_1 <- ...`` with ind-morphism transitions ``C_{n+1} -> C_n``."""

    def __init__(self, levels, transitions, window: Window | None = None, *, injective=None):
        levels = tuple(levels)
        transitions = tuple(transitions)
        window = window or Window(len(levels))
        if len(levels) != window.length or len(transitions) != window.length - 1:
            raise ShapeMismatch("window length does not match the stored levels")
        for n, a in enumerate(transitions):
            if a.source != levels[n + 1] or a.target != levels[n]:
                raise ShapeMismatch(f"pro transition {n} has the wrong source or target")
        self.levels = levels
        self.transitions = transitions
        self.window = window
        self.ring = levels[0].ring
        self._injective = injective

    @classmethod
    def constant(cls, X: IndComplex, length=1, tail=STABILIZING):
        return cls([X] * length, [IndMorphism.identity(X)] * (length - 1), Window(length, tail))

    @classmethod
    def zero(cls, ring, length=1, ind_length=1, tail=STABILIZING):
        return cls.constant(IndComplex.zero(ring, ind_length, tail), length, tail)

    @classmethod
    def grid(cls, levels, ind_transitions, pro_transitions, pro_window=None, ind_window=None):
        """Build from a grid of SuperComplexes ``levels[n][i]`` with identity level maps.

        ``ind_transitions[n][i]: X_{n,i} -> X_{n,i+1}`` and
        ``pro_transitions[n][i]: X_{n+1,i} -> X_{n,i}``.
        """
        N = len(levels)
        inds = []
        for n in range(N):
            w = ind_window or Window(len(levels[n]))
            inds.append(IndComplex(levels[n], ind_transitions[n], w))
        alphas = [IndMorphism.levelwise(inds[n + 1], inds[n], pro_transitions[n]) for n in range(N - 1)]
        return cls(inds, alphas, pro_window or Window(N))

    @property
    def length(self):
        return self.window.length

    @property
    def last(self):
        return self.window.last

    def level(self, n) -> IndComplex:
        if n < self.length:
            return self.levels[n]
        if self.window.stabilizing:
            return self.levels[-1]
        raise WindowTooShort(f"pro level {n} lies past the window of length {self.length}")

    def structure(self, n, k) -> IndMorphism:
        """The composite ``C_k -> C_n`` for ``k >= n``."""
        if k < n:
            raise ShapeMismatch("pro structure maps go from higher to lower levels")
        if k > self.last:
            self.level(k)  # raises under an unknown tail
            k = self.last
        n = min(n, self.last)
        f = IndMorphism.identity(self.levels[k])
        for j in range(k - 1, n - 1, -1):
            f = self.transitions[j] @ f
        return f

    @property
    def injective(self) -> bool:
        if self._injective is not None:
            return self._injective
        return self.ring.is_field or self.is_zero()

    def is_zero(self):
        return all(X.is_zero() for X in self.levels)

    def is_levelwise_grid(self):
        """Equal ind windows and identity level maps everywhere."""
        w = self.levels[0].window
        return all(X.window == w for X in self.levels) and all(a.is_levelwise() for a in self.transitions)

    def __eq__(self, other):
        return (isinstance(other, ProIndComplex) and self.window == other.window
                and self.levels == other.levels
                and all(a.level_map == b.level_map and a.components == b.components
                        for a, b in zip(self.transitions, other.transitions)))

    def __hash__(self):
        return hash((self.window, self.levels))

    def __repr__(self):
        return f"ProIndComplex({self.length} levels, {self.window.tail})"

    def to_json(self):
        return {"window": self.window.to_json(), "levels": [X.to_json() for X in self.levels],
                "transitions": [a.to_json() for a in self.transitions]}

    @classmethod
    def from_json(cls, obj, ring=None):
        levels = [IndComplex.from_json(X, ring) for X in obj["levels"]]
        trans = [IndMorphism.from_json(levels[n + 1], levels[n], a) for n, a in enumerate(obj["transitions"])]
        return cls(levels, trans, Window.from_json(obj["window"]))


class ProIndMorphism:
    """A levelwise morphism ``f_{n,i}: X_{n,i} -> Y_{n,i}`` of pro-ind complexes."""

    def __init__(self, source: ProIndComplex, target: ProIndComplex, components, *, check=True):
        if source.length != target.length:
            raise ShapeMismatch("levelwise morphisms need equal pro windows")
        comps = []
        for n, row in enumerate(components):
            X, Y = source.levels[n], target.levels[n]
            if X.length != Y.length:
                raise ShapeMismatch(f"pro level {n}: ind windows differ")
            comps.append(IndMorphism.levelwise(X, Y, row, check=check))
        self.source = source
        self.target = target
        self.components = tuple(comps)  # IndMorphisms, one per pro level
        if check and not self.is_compatible():
            raise DataInvalid("components do not commute with the pro transitions")

    @classmethod
    def identity(cls, X: ProIndComplex):
        return cls(X, X, [[ChainMap.identity(L) for L in Xn.levels] for Xn in X.levels], check=False)

    @classmethod
    def zero(cls, X, Y):
        return cls(X, Y, [[ChainMap.zero(a, b) for a, b in zip(Xn.levels, Yn.levels)]
                          for Xn, Yn in zip(X.levels, Y.levels)], check=False)

    @property
    def ring(self):
        return self.source.ring

    def at(self, n, i) -> ChainMap:
        return self.components[n].components[i]

    def is_compatible(self):
        X, Y = self.source, self.target
        for n in range(X.last):
            lhs = Y.transitions[n] @ self.components[n + 1]
            rhs = self.components[n] @ X.transitions[n]
            if lhs != rhs:
                return False
        return True

    def __eq__(self, other):
        return (isinstance(other, ProIndMorphism) and self.source == other.source
                and self.target == other.target and self.components == other.components)

    def __hash__(self):
        return hash(self.components)

    def __matmul__(self, other: "ProIndMorphism") -> "ProIndMorphism":
        if other.target != self.source:
            raise ShapeMismatch("pro-ind morphisms do not compose")
        return ProIndMorphism(other.source, self.target,
                              [[self.at(n, i) @ other.at(n, i) for i in range(other.source.levels[n].length)]
                               for n in range(other.source.length)], check=False)

    def to_json(self):
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "components": [[{"f0": c[0].matrix.to_json(), "f1": c[1].matrix.to_json()}
                                for c in row.components] for row in self.components]}

    @classmethod
    def from_json(cls, obj, ring=None):
        from ..exactbase.matrix import Matrix
        X = ProIndComplex.from_json(obj["source"], ring)
        Y = ProIndComplex.from_json(obj["target"], ring or X.ring)
        ring = X.ring
        comps = []
        for n, row in enumerate(obj["components"]):
            r = []
            for i, c in enumerate(row):
                A, B = X.levels[n].levels[i], Y.levels[n].levels[i]
                r.append(ChainMap(A, B, BaseMorphism(A[0], B[0], Matrix.from_json(ring, c["f0"])),
                                  BaseMorphism(A[1], B[1], Matrix.from_json(ring, c["f1"]))))
            comps.append(r)
        return cls(X, Y, comps)
