"""Immutable dense matrices over a :class:`ScalarRing`."""
from __future__ import annotations

from .rings import ScalarRing
from ..errors import RingMismatch, ShapeMismatch


class Matrix:
    """A ``rows x cols`` matrix with exact entries.

    Entries are stored as a tuple of row tuples.  Over F_p they are reduced
    mod p on construction; 0 x n and n x 0 shapes are legal.
    """

    __slots__ = ("ring", "nrows", "ncols", "data", "_hash")

    def __init__(self, ring: ScalarRing, nrows: int, ncols: int, data=None, *, _trusted=False):
        if nrows < 0 or ncols < 0:
            raise ShapeMismatch("negative matrix dimension")
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        if data is None:
            z = ring.zero
            data = tuple((z,) * ncols for _ in range(nrows))
        elif not _trusted:
            c = ring.coerce
            data = tuple(tuple(c(x) for x in row) for row in data)
            if len(data) != nrows or any(len(r) != ncols for r in data):
                raise ShapeMismatch(f"entries do not form a {nrows}x{ncols} matrix")
        self.data = data
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, ring, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ShapeMismatch("cannot infer column count of an empty row list")
            ncols = len(rows[0])
        return cls(ring, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        return cls(ring, nrows, ncols)

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero, ring.one
        return cls(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)),
                   _trusted=True)

    @classmethod
    def diag(cls, ring, values):
        n = len(values)
        z = ring.zero
        rows = [[z] * n for _ in range(n)]
        for i, v in enumerate(values):
            rows[i][i] = v
        return cls(ring, n, n, rows)

    @classmethod
    def block(cls, ring, blocks, row_sizes, col_sizes):
        """Assemble a block matrix; ``None`` entries denote zero blocks."""
        z = ring.zero
        out = []
        for bi, rs in enumerate(row_sizes):
            chunk = [[] for _ in range(rs)]
            for bj, cs in enumerate(col_sizes):
                b = blocks[bi][bj]
                if b is None:
                    for r in chunk:
                        r.extend([z] * cs)
                    continue
                if b.nrows != rs or b.ncols != cs:
                    raise ShapeMismatch(f"block ({bi},{bj}) has shape {b.shape}, expected {(rs, cs)}")
                for r, src in zip(chunk, b.data):
                    r.extend(src)
            out.extend(tuple(r) for r in chunk)
        return cls(ring, sum(row_sizes), sum(col_sizes), tuple(out), _trusted=True)

    # basic protocol -----------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.ring == other.ring and self.shape == other.shape
                and self.data == other.data)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.shape, self.data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"Matrix<{self.ring.name} {self.nrows}x{self.ncols}>[{body}]"

    def rows(self):
        return [list(r) for r in self.data]

    def is_zero(self):
        return all(x == 0 for r in self.data for x in r)

    # arithmetic ---------------------------------------------------------
    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        data = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data))
        return self._wrap_shape(data, self.nrows, self.ncols)

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} - {other.shape}")
        data = tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data))
        return self._wrap_shape(data, self.nrows, self.ncols)

    def __neg__(self):
        return self._wrap_shape(tuple(tuple(-a for a in r) for r in self.data), self.nrows, self.ncols)

    def scale(self, c):
        c = self.ring.coerce(c)
        return self._wrap_shape(tuple(tuple(c * a for a in r) for r in self.data), self.nrows, self.ncols)

    def __matmul__(self, other):
        self._check(other)
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        cols = list(zip(*other.data)) if other.nrows else [()] * other.ncols
        z = self.ring.zero
        data = tuple(
            tuple(sum((a * b for a, b in zip(r, c) if a and b), z) for c in cols)
            for r in self.data
        )
        return self._wrap_shape(data, self.nrows, other.ncols)

    def _wrap_shape(self, data, nrows, ncols):
        if self.ring.kind == "F":
            p = self.ring.p
            data = tuple(tuple(x % p for x in r) for r in data)
        return Matrix(self.ring, nrows, ncols, data, _trusted=True)

    @property
    def T(self):
        data = tuple(zip(*self.data)) if self.nrows else ((),) * 0
        if not self.nrows:
            data = tuple(() for _ in range(self.ncols))
        return Matrix(self.ring, self.ncols, self.nrows, data, _trusted=True)

    def submatrix(self, rows=None, cols=None):
        rows = range(self.nrows) if rows is None else list(rows)
        cols = range(self.ncols) if cols is None else list(cols)
        data = tuple(tuple(self.data[i][j] for j in cols) for i in rows)
        return Matrix(self.ring, len(rows), len(cols), data, _trusted=True)

    def hstack(self, *others):
        out = self
        for o in others:
            out._check(o)
            if o.nrows != out.nrows:
                raise ShapeMismatch("hstack row mismatch")
            data = tuple(a + b for a, b in zip(out.data, o.data))
            out = Matrix(out.ring, out.nrows, out.ncols + o.ncols, data, _trusted=True)
        return out

    def vstack(self, *others):
        out = self
        for o in others:
            out._check(o)
            if o.ncols != out.ncols:
                raise ShapeMismatch("vstack column mismatch")
            out = Matrix(out.ring, out.nrows + o.nrows, out.ncols, out.data + o.data, _trusted=True)
        return out

    def reduce_rows(self, moduli):
        """Reduce row ``i`` modulo ``moduli[i]`` (0 means no reduction)."""
        if self.ring.kind != "Z":
            return self
        data = tuple(tuple(x % m for x in r) if m else r for r, m in zip(self.data, moduli))
        return Matrix(self.ring, self.nrows, self.ncols, data, _trusted=True)

    # serialization ------------------------------------------------------
    def to_json(self):
        fmt = self.ring.format
        return {"rows": self.nrows, "cols": self.ncols,
                "entries": [fmt(x) for r in self.data for x in r]}

    @classmethod
    def from_json(cls, ring, obj):
        nrows, ncols, entries = obj["rows"], obj["cols"], obj["entries"]
        if not isinstance(entries, list) or len(entries) != nrows * ncols:
            raise ShapeMismatch(f"expected {nrows * ncols} entries, got {len(entries)}")
        vals = [ring.parse(e) for e in entries]
        return cls(ring, nrows, ncols, [vals[i * ncols:(i + 1) * ncols] for i in range(nrows)])
