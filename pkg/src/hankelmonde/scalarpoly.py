"""Exact scalars, dense univariate polynomials in z, and matrix polynomials.

Scalars are exact rationals.  Internally a value is stored as a plain ``int``
whenever its denominator is one and as ``fractions.Fraction`` otherwise; the
two interoperate transparently and integer arithmetic is roughly 40x faster,
which matters because most of the matrix families built on top of this module
have integer entries.

Matrices with zero rows or zero columns are first-class values; a product
across an empty inner dimension is the zero matrix of the outer shape.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, perm
from typing import Iterable, Sequence, Union

from .errors import ShapeMismatch

Rational = Fraction
Scalar = Union[int, Fraction]


def as_scalar(x) -> Scalar:
    """Coerce x to a canonical exact scalar (int when the denominator is 1)."""
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return int(x)
    raise TypeError(f"not an exact scalar: {x!r}")


class Poly:
    """Dense univariate polynomial over the rationals, coefficients ascending.

    The zero polynomial is the empty coefficient tuple; otherwise the last
    coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_scalar(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _trusted(cls, cs: list) -> "Poly":
        # internal fast path: cs entries are already canonical scalars
        while cs and not cs[-1]:
            cs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        """c * z**k"""
        if k < 0:
            raise ValueError("monomial degree must be >= 0")
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        """Degree, with the convention that the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self) -> "Poly":
        return Poly._trusted([-c for c in self.coeffs])

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly((other,))
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._trusted(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly((other,))
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return _P_ZERO
            return Poly._trusted([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _P_ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return Poly._trusted(out)

    __rmul__ = __mul__

    def derivative(self, k: int = 1) -> "Poly":
        """k-th derivative."""
        if k < 0:
            raise ValueError("derivative order must be >= 0")
        cs = self.coeffs
        if k == 0:
            return self
        if k >= len(cs):
            return _P_ZERO
        return Poly._trusted([perm(i + k, k) * cs[i + k] for i in range(len(cs) - k)])

    def subs_neg(self) -> "Poly":
        """The polynomial z -> p(-z)."""
        return Poly._trusted([c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def __call__(self, z0):
        """Evaluate at an exact point (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z0 + c
        return as_scalar(acc)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"{c}*z" if c != 1 else "z")
            else:
                parts.append(f"{c}*z^{i}" if c != 1 else f"z^{i}")
        return " + ".join(parts).replace("+ -", "- ")


_P_ZERO = Poly()
_P_ONE = Poly((1,))
Z = Poly((0, 1))


def poly_derivative(p: Poly, k: int) -> Poly:
    """k-th derivative of p; identically zero once k exceeds the degree."""
    return p.derivative(k)


class PolyMatrix:
    """Dense rectangular matrix with polynomial entries, row-major storage."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Poly]):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(e if isinstance(e, Poly) else Poly.constant(e) for e in entries)

    @classmethod
    def _trusted(cls, rows: int, cols: int, entries) -> "PolyMatrix":
        m = object.__new__(cls)
        m.rows = rows
        m.cols = cols
        m.entries = tuple(entries)
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "PolyMatrix":
        return cls._trusted(rows, cols, [_P_ZERO] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        es = [_P_ZERO] * (n * n)
        for i in range(n):
            es[i * n + i] = _P_ONE
        return cls._trusted(n, n, es)

    @classmethod
    def diag(cls, values) -> "PolyMatrix":
        vals = [v if isinstance(v, Poly) else Poly.constant(v) for v in values]
        n = len(vals)
        es = [_P_ZERO] * (n * n)
        for i, v in enumerate(vals):
            es[i * n + i] = v
        return cls._trusted(n, n, es)

    @classmethod
    def from_rows(cls, rows) -> "PolyMatrix":
        """Build from a list of rows whose items are Poly or exact scalars."""
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        if any(len(r) != nc for r in rows):
            raise ValueError("ragged rows")
        es = [x if isinstance(x, Poly) else Poly.constant(x) for r in rows for x in r]
        return cls._trusted(nr, nc, es)

    def __getitem__(self, ij) -> Poly:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> "list[Poly]":
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix._trusted(self.rows, self.cols, [-e for e in self.entries])

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch(f"add {self.shape} vs {other.shape}")
        return PolyMatrix._trusted(
            self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch(f"sub {self.shape} vs {other.shape}")
        return PolyMatrix._trusted(
            self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)]
        )

    def __mul__(self, scalar) -> "PolyMatrix":
        if not isinstance(scalar, (int, Fraction, Poly)):
            return NotImplemented
        return PolyMatrix._trusted(self.rows, self.cols, [e * scalar for e in self.entries])

    __rmul__ = __mul__

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return mat_mul(self, other)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def transpose(self) -> "PolyMatrix":
        es = self.entries
        c = self.cols
        return PolyMatrix._trusted(
            c, self.rows, [es[i * c + j] for j in range(c) for i in range(self.rows)]
        )

    @property
    def T(self) -> "PolyMatrix":
        return self.transpose()

    def block(self, i0: int, i1: int, j0: int, j1: int) -> "PolyMatrix":
        """Submatrix of rows [i0, i1) and columns [j0, j1)."""
        if not (0 <= i0 <= i1 <= self.rows and 0 <= j0 <= j1 <= self.cols):
            raise IndexError((i0, i1, j0, j1))
        es = self.entries
        c = self.cols
        out = [es[i * c + j] for i in range(i0, i1) for j in range(j0, j1)]
        return PolyMatrix._trusted(i1 - i0, j1 - j0, out)

    def max_degree(self) -> int:
        """Largest entry degree (-1 for an all-zero or empty matrix)."""
        return max((e.degree for e in self.entries), default=-1)

    def is_zero(self) -> bool:
        return all(not e for e in self.entries)

    def is_constant(self) -> bool:
        return all(e.degree <= 0 for e in self.entries)

    def subs_neg(self) -> "PolyMatrix":
        """Entrywise substitution z -> -z."""
        return PolyMatrix._trusted(self.rows, self.cols, [e.subs_neg() for e in self.entries])

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix._trusted(self.rows, self.cols, [fn(e) for e in self.entries])

    def __repr__(self) -> str:
        if self.rows * self.cols == 0:
            return f"PolyMatrix({self.rows}x{self.cols}, empty)"
        body = "; ".join(
            ", ".join(repr(e) for e in self.row(i)) for i in range(min(self.rows, 8))
        )
        tail = " ..." if self.rows > 8 else ""
        return f"PolyMatrix({self.rows}x{self.cols}: [{body}]{tail})"


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """Exact matrix product; an empty inner dimension yields the zero matrix."""
    if a.cols != b.rows:
        raise ShapeMismatch(f"mat_mul {a.shape} @ {b.shape}")
    n, m, p = a.rows, a.cols, b.cols
    ae, be = a.entries, b.entries
    out = []
    for i in range(n):
        arow = ae[i * m : (i + 1) * m]
        for j in range(p):
            acc = None
            for k in range(m):
                pc = arow[k].coeffs
                if not pc:
                    continue
                qc = be[k * p + j].coeffs
                if not qc:
                    continue
                width = len(pc) + len(qc) - 1
                if acc is None:
                    acc = [0] * width
                elif len(acc) < width:
                    acc.extend([0] * (width - len(acc)))
                for s, ca in enumerate(pc):
                    if ca:
                        for t, cb in enumerate(qc):
                            if cb:
                                acc[s + t] += ca * cb
            out.append(_P_ZERO if acc is None else Poly._trusted(acc))
    return PolyMatrix._trusted(n, p, out)


def kron(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """Kronecker (tensor) product, shape (a.rows*b.rows) x (a.cols*b.cols)."""
    R, C = a.rows * b.rows, a.cols * b.cols
    out = [_P_ZERO] * (R * C)
    for i1 in range(a.rows):
        for j1 in range(a.cols):
            f = a.entries[i1 * a.cols + j1]
            if not f:
                continue
            base_i, base_j = i1 * b.rows, j1 * b.cols
            for i2 in range(b.rows):
                ro = (base_i + i2) * C + base_j
                be = b.entries
                for j2 in range(b.cols):
                    g = be[i2 * b.cols + j2]
                    if g:
                        out[ro + j2] = f * g
    return PolyMatrix._trusted(R, C, out)


def shift_matrix(k: int) -> PolyMatrix:
    """k x k matrix with ones on the first superdiagonal; nilpotent."""
    if k < 1:
        raise ValueError("shift matrix size must be >= 1")
    es = [_P_ZERO] * (k * k)
    for i in range(k - 1):
        es[i * k + i + 1] = _P_ONE
    return PolyMatrix._trusted(k, k, es)


def factorial_diag(k: int) -> PolyMatrix:
    """diag(0!, 1!, ..., (k-1)!)."""
    if k < 1:
        raise ValueError("diagonal size must be >= 1")
    return PolyMatrix.diag([factorial(i) for i in range(k)])


def factorial_diag_inv(k: int) -> PolyMatrix:
    """diag(1/0!, 1/1!, ..., 1/(k-1)!)."""
    if k < 1:
        raise ValueError("diagonal size must be >= 1")
    return PolyMatrix.diag([Fraction(1, factorial(i)) for i in range(k)])


def eval_matrix(m: PolyMatrix, z0) -> PolyMatrix:
    """Entrywise evaluation at an exact point; the result has constant entries."""
    z0 = as_scalar(z0)
    return PolyMatrix._trusted(
        m.rows, m.cols, [Poly.constant(e(z0)) if e else _P_ZERO for e in m.entries]
    )


def hstack(mats: Sequence[PolyMatrix]) -> PolyMatrix:
    mats = list(mats)
    if not mats:
        raise ValueError("hstack of nothing")
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ShapeMismatch("hstack with differing row counts")
    out = []
    for i in range(rows):
        for m in mats:
            out.extend(m.entries[i * m.cols : (i + 1) * m.cols])
    return PolyMatrix._trusted(rows, sum(m.cols for m in mats), out)


def vstack(mats: Sequence[PolyMatrix]) -> PolyMatrix:
    mats = list(mats)
    if not mats:
        raise ValueError("vstack of nothing")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ShapeMismatch("vstack with differing column counts")
    out = []
    for m in mats:
        out.extend(m.entries)
    return PolyMatrix._trusted(sum(m.rows for m in mats), cols, out)


def block_diag(mats: Sequence[PolyMatrix]) -> PolyMatrix:
    mats = list(mats)
    R = sum(m.rows for m in mats)
    C = sum(m.cols for m in mats)
    out = [_P_ZERO] * (R * C)
    ro = co = 0
    for m in mats:
        for i in range(m.rows):
            base = (ro + i) * C + co
            out[base : base + m.cols] = m.entries[i * m.cols : (i + 1) * m.cols]
        ro += m.rows
        co += m.cols
    return PolyMatrix._trusted(R, C, out)


def from_blocks(grid) -> PolyMatrix:
    """Assemble a block matrix from a 2D grid of PolyMatrix blocks.

    Blocks in a grid row must share their row count and blocks in a grid
    column their column count; zero-sized blocks are legal.
    """
    return vstack([hstack(row) for row in grid])


__all__ = [
    "Rational",
    "Scalar",
    "Poly",
    "PolyMatrix",
    "Z",
    "as_scalar",
    "poly_derivative",
    "mat_mul",
    "kron",
    "shift_matrix",
    "factorial_diag",
    "factorial_diag_inv",
    "eval_matrix",
    "hstack",
    "vstack",
    "block_diag",
    "from_blocks",
]
