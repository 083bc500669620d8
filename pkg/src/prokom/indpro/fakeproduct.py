"""Fake products of pro-towers and embeddings into injective-flagged objects.

For a tower ``X`` with identity level maps, the fake product has
``P_n = X_0 (+) ... (+) X_n`` with the transitions that drop the last
summand.  ``X`` embeds by ``x -> (a_i^n x)_i`` where ``a_i^n`` are the
structure maps; the cokernel ``Q_n = X_0 (+) ... (+) X_{n-1}`` receives
``x -> (x_i - a_i^n x_n)_i`` and has the twisted transitions
``y -> (y_i - a_i^n y_n)_{i<n}``.  Each level splits via ``y -> (y, 0)``
and ``x -> x_n``.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import CertificateMissing, ShapeMismatch
from ..exactbase.modules import BaseMorphism, BaseObject
from ..exactbase.solve import solve_extend
from ..supercomplex import ChainMap, SuperComplex
from .extensions import PRO, ExtensionTriple, _ind_cert_from_lifts, _pro_cert, is_ind_locally_split, \
    is_pro_locally_split
from .levelwise import chain_block, sum_ind
from .systems import IndComplex, IndMorphism, ProIndComplex, ProIndMorphism


@dataclass
class FakeProduct:
    ext: ExtensionTriple
    section: list      # section[n][j]: Q_{n,j} -> P_{n,j}
    retraction: list   # retraction[n][j]: P_{n,j} -> X_{n,j}
    verdict: object

    @property
    def product(self) -> ProIndComplex:
        return self.ext.E


def _check_grid(X: ProIndComplex):
    if not X.is_levelwise_grid():
        raise ShapeMismatch("fake products need equal ind windows and identity level maps")


def _sum_or_zero(parts, like: IndComplex):
    if parts:
        return sum_ind(*parts)
    return IndComplex.zero(like.ring, like.length, like.window.tail)


def _block(sources, targets, entry):
    """Chain block with ``entry(row, col)`` giving a ChainMap or ``None``; zero when a side is empty."""
    if not sources or not targets:
        from ..supercomplex import direct_sum_complex
        S = direct_sum_complex(*sources) if sources else None
        T = direct_sum_complex(*targets) if targets else None
        ring = (sources or targets)[0].ring
        S = S or SuperComplex.zero(ring)
        T = T or SuperComplex.zero(ring)
        return ChainMap.zero(S, T)
    return chain_block(sources, targets, [[entry(r, c) for c in range(len(sources))] for r in range(len(targets))])


def _drop_last(src: IndComplex, tgt: IndComplex, parts_src, parts_tgt, twist=None):
    """Levelwise ``(x_0..x_m) -> (x_i + twist(i) x_m)_{i<m}`` between sums of ``parts``."""
    comps = []
    m = len(parts_src) - 1
    for j in range(src.length):
        S = [p.levels[j] for p in parts_src]
        T = [p.levels[j] for p in parts_tgt]

        def entry(r, c):
            if c == r:
                return ChainMap.identity(S[c])
            if twist is not None and c == m:
                return twist(r, j)
            return None
        comps.append(_block(S, T, entry))
    return IndMorphism.levelwise(src, tgt, comps)


def fake_product(X: ProIndComplex) -> FakeProduct:
    """The extension ``X -> P -> Q`` with its levelwise splitting and a pro certificate."""
    _check_grid(X)
    N = X.length
    parts = list(X.levels)
    injective = all(L.injective for L in parts)
    P_levels = [sum_ind(*parts[:n + 1]) for n in range(N)]
    Q_levels = [_sum_or_zero(parts[:n], parts[0]) for n in range(N)]

    def alpha(i, n, j):
        return X.structure(i, n).components[j]

    P_trans = [_drop_last(P_levels[n + 1], P_levels[n], parts[:n + 2], parts[:n + 1]) for n in range(N - 1)]
    Q_trans = []
    for n in range(N - 1):
        Q_trans.append(_drop_last(Q_levels[n + 1], Q_levels[n], parts[:n + 1], parts[:n],
                                  twist=lambda r, j, n=n: -alpha(r, n, j)))
    P = ProIndComplex(P_levels, P_trans, X.window, injective=injective or None)
    Q = ProIndComplex(Q_levels, Q_trans, X.window)

    infl, proj, sec, ret = [], [], [], []
    for n in range(N):
        rows_i, rows_p, rows_s, rows_r = [], [], [], []
        for j in range(X.levels[n].length):
            Xs = [parts[i].levels[j] for i in range(n + 1)]
            rows_i.append(_block([Xs[n]], Xs, lambda r, c: alpha(r, n, j)))
            rows_p.append(_block(Xs, Xs[:n], lambda r, c: ChainMap.identity(Xs[c]) if c == r
                                 else (-alpha(r, n, j) if c == n else None)))
            rows_s.append(_block(Xs[:n], Xs, lambda r, c: ChainMap.identity(Xs[c]) if c == r else None))
            rows_r.append(_block(Xs, [Xs[n]], lambda r, c: ChainMap.identity(Xs[n]) if c == n else None))
        infl.append(rows_i)
        proj.append(rows_p)
        sec.append(rows_s)
        ret.append(rows_r)
    ext = ExtensionTriple(PRO, X, P, Q, ProIndMorphism(X, P, infl), ProIndMorphism(P, Q, proj))
    per_level = {}
    for n in range(N):
        lifts = {(j, k): (j, sec[n][j][k]) for j in range(X.levels[n].length) for k in (0, 1)}
        per_level[n] = _ind_cert_from_lifts(ext.ind_level(n), lifts)
    verdict = _pro_cert(ext, {n: n for n in range(N)}, per_level)
    return FakeProduct(ext, sec, ret, verdict)


def _identity_embedding(Xn: IndComplex):
    e = ExtensionTriple.from_inclusion(IndMorphism.identity(Xn))
    return IndMorphism.identity(Xn), is_ind_locally_split(e)


def embed_into_injective(X: ProIndComplex, embeddings=None):
    """Embed ``X`` into ``"prod" I_n`` given inflations ``j_n: X_n -> I_n`` into injective-flagged ``I_n``.

    ``embeddings[n] = (j_n, verdict)`` where the verdict certifies the
    extension completed from ``j_n``.  Levels that are already flagged
    injective may be omitted (``j_n`` is then the identity).  Returns the
    extension completed from the embedding and its pro-locally-split verdict.
    """
    _check_grid(X)
    N = X.length
    embeddings = list(embeddings) if embeddings is not None else [None] * N
    js = []
    for n in range(N):
        item = embeddings[n]
        if item is None:
            if not X.levels[n].injective:
                raise CertificateMissing(f"level {n} is not flagged injective and no embedding was given")
            item = _identity_embedding(X.levels[n])
        j, v = item
        if v is None or not v.certified:
            raise CertificateMissing(f"embedding at level {n} has no locally split certificate")
        if not j.target.injective:
            raise CertificateMissing(f"embedding at level {n} does not land in an injective-flagged object")
        if not j.is_levelwise():
            raise ShapeMismatch("embeddings must be levelwise")
        js.append(j)
    parts = [j.target for j in js]
    P_levels = [sum_ind(*parts[:n + 1]) for n in range(N)]
    P_trans = [_drop_last(P_levels[n + 1], P_levels[n], parts[:n + 2], parts[:n + 1]) for n in range(N - 1)]
    P = ProIndComplex(P_levels, P_trans, X.window, injective=True)
    comps = []
    for n in range(N):
        row = []
        for jj in range(X.levels[n].length):
            Is = [parts[i].levels[jj] for i in range(n + 1)]
            row.append(_block([X.levels[n].levels[jj]], Is,
                              lambda r, c: js[r].components[jj] @ X.structure(r, n).components[jj]))
        comps.append(row)
    emb = ProIndMorphism(X, P, comps)
    ext = ExtensionTriple.from_inclusion(emb)
    return ext, is_pro_locally_split(ext)


def _base_objects(I):
    if isinstance(I, BaseObject):
        return [I]
    if isinstance(I, SuperComplex):
        return [I[0], I[1]]
    if isinstance(I, IndComplex):
        return _base_objects(I.levels[-1])
    if isinstance(I, ProIndComplex):
        return [X for L in I.levels for X in _base_objects(L)]
    raise TypeError("expected a base object, supercomplex, ind- or pro-ind complex")


def _probes(I: BaseObject):
    """Non-split monos hitting each cyclic summand: ``Z/a -> Z/(ap)`` and ``Z -> Z`` by ``p``."""
    ring = I.ring
    if ring.is_field:
        return
    for idx, a in enumerate(I.orders):
        for p in (2, 3):
            A = BaseObject(ring, [a])
            B = BaseObject(ring, [a * p])
            i = BaseMorphism.from_rows(A, B, [[p]])
            f = BaseMorphism.from_rows(A, I, [[1 if r == idx else 0] for r in range(I.dim)])
            yield i, f


def find_injectivity_counterexample(I, gen=None, trials=30):
    """Search for a mono ``i: A -> B`` and ``f: A -> I`` with no extension ``h i = f``.

    Returns ``(i, f, verdict)`` with a replayable refutation, or ``None``.
    Deterministic probes on each cyclic summand come first, then random monos
    drawn from ``gen``.  ``None`` is evidence, not proof, of injectivity.
    """
    from ..exactbase.modules import kernel
    for X in _base_objects(I):
        for i, f in _probes(X):
            v = solve_extend(i, f)
            if v.refuted:
                return i, f, v
        if gen is None:
            continue
        for _ in range(trials):
            A, B = gen.obj(min_dim=1), gen.obj(min_dim=1)
            i = gen.morphism(A, B, zero_prob=0)
            if not kernel(i)[0].is_zero():
                continue
            f = gen.morphism(A, X, zero_prob=0)
            v = solve_extend(i, f)
            if v.refuted:
                return i, f, v
    return None
