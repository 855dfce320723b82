"""Exact coefficient fields, monomials, truncated multivariate polynomials,
and per-degree exact linear algebra.

Everything here is exact: coefficients are `fractions.Fraction` over the
rationals or plain ints modulo a prime.  A `TruncatedPoly` is a sparse term
map carried modulo a power M^n of the maximal ideal M = (x1,...,xN); the
truncation level is explicit everywhere and no operation silently extends
precision.  All values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb


class ParseError(ValueError):
    """Syntax or range error in the polynomial DSL, with a position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class LevelError(ValueError):
    """Mismatched or insufficient truncation level / ambient / field."""


class FieldTooSmallError(ValueError):
    """A construction needs more distinct scalars than the field has."""


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Exact coefficient field: the rationals (char 0) or F_p (char p prime).

    Elements are `Fraction` values for char 0 and ints in [0, p) otherwise;
    the field object supplies the arithmetic.
    """

    __slots__ = ("char",)

    def __init__(self, char=0):
        if char != 0 and not _is_prime(char):
            raise ValueError(f"characteristic must be 0 or prime, got {char}")
        self.char = char

    @property
    def kind(self):
        return "Rationals" if self.char == 0 else "PrimeField"

    def zero(self):
        return Fraction(0) if self.char == 0 else 0

    def one(self):
        return Fraction(1) if self.char == 0 else 1

    def of(self, value):
        """Coerce an int or Fraction into the field."""
        if self.char == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            den = value.denominator % self.char
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.char}")
            return value.numerator * pow(den, -1, self.char) % self.char
        return value % self.char

    def add(self, a, b):
        return a + b if self.char == 0 else (a + b) % self.char

    def sub(self, a, b):
        return a - b if self.char == 0 else (a - b) % self.char

    def mul(self, a, b):
        return a * b if self.char == 0 else (a * b) % self.char

    def neg(self, a):
        return -a if self.char == 0 else (-a) % self.char

    def inv(self, a):
        if self.char == 0:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(a)
        return pow(a, -1, self.char)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def coeff_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Field) and self.char == other.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return "QQ" if self.char == 0 else f"GF({self.char})"


QQ = Field(0)


def GF(p):
    return Field(p)


# ---------------------------------------------------------------------------
# Monomials.  A monomial is a tuple of exponents; the total order is degree
# first, then natural tuple comparison (so within a degree x_N is smallest
# and x_1 largest).  Printing uses the descending order.


def mono_deg(m):
    return sum(m)


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def deglex_key(m):
    return (sum(m), m)


def monomials_of_degree(n_vars, d):
    """All exponent tuples of total degree d, ascending in the term order."""
    if n_vars == 1:
        return [(d,)]
    out = []
    def rec(prefix, rest, remaining):
        if rest == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), rest - 1, remaining - e)
    # enumerate with the FIRST variable's exponent ascending: that is exactly
    # ascending tuple order
    rec((), n_vars, d)
    return out


def count_monomials_upto(n_vars, max_deg_inclusive):
    """Number of monomials of degree <= max_deg_inclusive (= dim R/M^{d+1})."""
    if max_deg_inclusive < 0:
        return 0
    return comb(n_vars + max_deg_inclusive, n_vars)


class MonomialTable:
    """Index of all monomials of degree < level, ascending deg-then-lex.

    Provides the column numbering used by every echelon computation: columns
    of a common degree are contiguous, lower degrees first.
    """

    def __init__(self, n_vars, level):
        self.n_vars = n_vars
        self.level = level
        self.monos = []
        self.offset = [0] * (level + 1)  # offset[d] = first index of degree d
        for d in range(level):
            self.offset[d] = len(self.monos)
            self.monos.extend(monomials_of_degree(n_vars, d))
        self.offset[level] = len(self.monos)
        self.index = {m: i for i, m in enumerate(self.monos)}

    def degree_of_col(self, col):
        m = self.monos[col]
        return sum(m)

    def count_upto(self, d):
        """Number of columns of degree <= d."""
        d = min(d, self.level - 1)
        if d < 0:
            return 0
        return self.offset[d + 1]

    def vector_of(self, poly):
        """Sparse column vector {index: coeff} of a TruncatedPoly."""
        return {self.index[m]: c for m, c in poly.terms.items()}

    def poly_of(self, vec, field, level=None):
        terms = {self.monos[i]: c for i, c in vec.items()}
        return TruncatedPoly(self.n_vars, field, level or self.level, terms)


_tables = {}


def monomial_table(n_vars, level):
    key = (n_vars, level)
    if key not in _tables:
        _tables[key] = MonomialTable(n_vars, level)
    return _tables[key]


# ---------------------------------------------------------------------------
# Truncated polynomials.


class TruncatedPoly:
    """Sparse polynomial over an exact field, a representative modulo M^level.

    Terms of degree >= level are discarded on construction, so arithmetic is
    automatically arithmetic in R/M^level.  Instances are treated as
    immutable.
    """

    __slots__ = ("n_vars", "field", "level", "terms")

    def __init__(self, n_vars, field, level, terms=None):
        if level < 0:
            raise LevelError(f"level must be >= 0, got {level}")
        self.n_vars = n_vars
        self.field = field
        self.level = level
        clean = {}
        for m, c in (terms or {}).items():
            if len(m) != n_vars:
                raise ValueError(f"monomial {m} does not have {n_vars} exponents")
            if sum(m) >= level:
                continue
            c = field.of(c)
            if c != field.zero():
                clean[m] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n_vars, field, level):
        return cls(n_vars, field, level, {})

    @classmethod
    def constant(cls, value, n_vars, field, level):
        return cls(n_vars, field, level, {(0,) * n_vars: value})

    @classmethod
    def variable(cls, i, n_vars, field, level):
        """The variable x_i, 1-based."""
        if not 1 <= i <= n_vars:
            raise ValueError(f"variable index {i} out of range 1..{n_vars}")
        expo = tuple(1 if j == i - 1 else 0 for j in range(n_vars))
        return cls(n_vars, field, level, {expo: field.one()})

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def _check_compatible(self, other):
        if (self.n_vars, self.field, self.level) != (other.n_vars, other.field, other.level):
            raise LevelError(
                f"incompatible operands: ({self.n_vars} vars, {self.field}, level {self.level})"
                f" vs ({other.n_vars} vars, {other.field}, level {other.level})"
            )

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        self._check_compatible(other)
        f = self.field
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(terms.get(m, f.zero()), c)
            if s == f.zero():
                terms.pop(m, None)
            else:
                terms[m] = s
        return TruncatedPoly(self.n_vars, f, self.level, terms)

    def __neg__(self):
        f = self.field
        return TruncatedPoly(
            self.n_vars, f, self.level, {m: f.neg(c) for m, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check_compatible(other)
        f = self.field
        level = self.level
        acc = {}
        for m1, c1 in self.terms.items():
            d1 = sum(m1)
            for m2, c2 in other.terms.items():
                if d1 + sum(m2) >= level:
                    continue
                m = mono_mul(m1, m2)
                s = f.add(acc.get(m, f.zero()), f.mul(c1, c2))
                if s == f.zero():
                    acc.pop(m, None)
                else:
                    acc[m] = s
        return TruncatedPoly(self.n_vars, f, level, acc)

    def scale(self, c):
        f = self.field
        c = f.of(c)
        if c == f.zero():
            return TruncatedPoly.zero(self.n_vars, f, self.level)
        return TruncatedPoly(
            self.n_vars, f, self.level, {m: f.mul(v, c) for m, v in self.terms.items()}
        )

    def mul_monomial(self, mono, coeff=None):
        """Multiply by coeff * x^mono, re-truncating."""
        f = self.field
        c = f.one() if coeff is None else f.of(coeff)
        d = sum(mono)
        terms = {}
        for m, v in self.terms.items():
            if sum(m) + d < self.level:
                terms[mono_mul(m, mono)] = f.mul(v, c)
        return TruncatedPoly(self.n_vars, f, self.level, terms)

    def pow(self, k):
        out = TruncatedPoly.constant(1, self.n_vars, self.field, self.level)
        for _ in range(k):
            out = out * self
        return out

    # -- structure ----------------------------------------------------------

    def order(self):
        """Degree of the lowest nonzero homogeneous part; None when zero."""
        if not self.terms:
            return None
        return min(sum(m) for m in self.terms)

    def top_degree(self):
        if not self.terms:
            return None
        return max(sum(m) for m in self.terms)

    def homogeneous_part(self, d):
        return TruncatedPoly(
            self.n_vars, self.field, self.level,
            {m: c for m, c in self.terms.items() if sum(m) == d},
        )

    def truncate_to(self, level):
        if level > self.level:
            raise LevelError(f"cannot extend precision from {self.level} to {level}")
        return TruncatedPoly(self.n_vars, self.field, level, self.terms)

    def leading_term(self):
        """(monomial, coeff) of the deg-lex largest term of the initial form."""
        if not self.terms:
            return None
        o = self.order()
        m = max((m for m in self.terms if sum(m) == o))
        return m, self.terms[m]

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedPoly)
            and self.n_vars == other.n_vars
            and self.field == other.field
            and self.level == other.level
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n_vars, self.field, self.level, frozenset(self.terms.items())))

    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return f"TruncatedPoly({poly_str(self)!r}, N={self.n_vars}, {self.field}, level={self.level})"


def initial_form(f):
    """The homogeneous component of minimal degree of f (its initial form).

    The zero value has no initial form at this truncation level: all that is
    known is order(f) >= level, so we refuse rather than guess.
    """
    if f.is_zero():
        raise LevelError("order not determined below level: value is zero mod M^level")
    return f.homogeneous_part(f.order())


def mul_trunc(a, b):
    return a * b


# ---------------------------------------------------------------------------
# DSL parsing and printing.
#
#   poly    := sign? term (sign term)*
#   term    := coeff ("*" powprod)? | powprod
#   powprod := var ("^" uint)? ("*" var ("^" uint)?)*
#   var     := "x" uint          (1-based; "t" when parsing one-variable input)
#   coeff   := int | int "/" uint
#
# Whitespace is insignificant.


def parse_poly(text, n_vars, field, level, var="x"):
    """Parse the polynomial DSL into a TruncatedPoly (terms >= level dropped)."""
    s = text
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def peek():
        skip_ws()
        return s[pos] if pos < len(s) else ""

    def read_uint():
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if pos == start:
            raise ParseError("expected a number", start)
        return int(s[start:pos])

    def read_coeff(sign):
        nonlocal pos
        num = read_uint()
        if peek() == "/":
            pos += 1
            den = read_uint()
            if den == 0:
                raise ParseError("zero denominator", pos)
            value = Fraction(num, den)
        else:
            value = Fraction(num)
        return -value if sign < 0 else value

    def read_varpow():
        nonlocal pos
        skip_ws()
        here = pos
        pos += 1  # the variable prefix, already peeked
        if var == "t":
            idx = 1
        else:
            idx = read_uint()
            if not 1 <= idx <= n_vars:
                raise ParseError(f"variable index out of range: {var}{idx}", here)
        if peek() == "^":
            pos += 1
            exp = read_uint()
        else:
            exp = 1
        return idx, exp

    terms = {}
    zero = (0,) * n_vars

    def add_term(mono, coeff):
        c = field.of(coeff)
        cur = terms.get(mono, field.zero())
        s_ = field.add(cur, c)
        if s_ == field.zero():
            terms.pop(mono, None)
        else:
            terms[mono] = s_

    first = True
    while True:
        skip_ws()
        if pos >= len(s):
            if first:
                raise ParseError("empty polynomial", pos)
            break
        sign = 1
        ch = peek()
        if ch in "+-":
            if first and ch == "+":
                raise ParseError("unexpected '+'", pos)
            sign = -1 if ch == "-" else 1
            pos += 1
            skip_ws()
        elif not first:
            raise ParseError(f"expected '+' or '-', found {ch!r}", pos)
        first = False

        # one extra unary sign, so substituted coefficients like "+ -1*x2"
        # stay grammatical
        ch = peek()
        if ch in "+-":
            if ch == "-":
                sign = -sign
            pos += 1
            skip_ws()

        ch = peek()
        coeff = Fraction(sign)
        expo = list(zero)
        saw_factor = False
        if ch.isdigit():
            coeff = read_coeff(sign)
            saw_factor = True
            if peek() == "*":
                pos += 1
                ch = peek()
                if ch != var:
                    raise ParseError(f"expected variable after '*', found {ch!r}", pos)
        ch = peek()
        while ch == var:
            idx, exp = read_varpow()
            expo[idx - 1] += exp
            saw_factor = True
            if peek() == "*":
                pos += 1
                ch = peek()
                if ch != var:
                    raise ParseError(f"expected variable after '*', found {ch!r}", pos)
                continue
            break
        if not saw_factor:
            raise ParseError(f"expected a term, found {peek()!r}", pos)
        add_term(tuple(expo), coeff)

    return TruncatedPoly(n_vars, field, level, terms)


def poly_str(p, var="x"):
    """Canonical printing: decreasing deg-lex order, canonical signs."""
    if not p.terms:
        return "0"
    items = sorted(p.terms.items(), key=lambda mc: deglex_key(mc[0]), reverse=True)
    pieces = []
    rational = p.field.char == 0
    for i, (m, c) in enumerate(items):
        neg = rational and c < 0
        mag = -c if neg else c
        factors = []
        for j, e in enumerate(m):
            if e == 0:
                continue
            name = "t" if var == "t" else f"x{j + 1}"
            factors.append(name if e == 1 else f"{name}^{e}")
        if not factors:
            body = str(mag)
        elif mag == p.field.one():
            body = "*".join(factors)
        else:
            body = str(mag) + "*" + "*".join(factors)
        if i == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


# ---------------------------------------------------------------------------
# Exact sparse linear algebra.  Vectors are dicts {column: coeff}; columns
# come from a MonomialTable so that each degree occupies a contiguous block.


class Echelon:
    """Incrementally maintained reduced row echelon span over an exact field.

    Rows are sparse dicts with pivot = smallest column; each inserted row is
    fully reduced against the basis and, once inserted, cleared from all
    earlier rows, so the basis is in reduced form with unit pivots at all
    times.  Rank is therefore independent of the insertion order.
    """

    def __init__(self, field):
        self.field = field
        self.rows = {}  # pivot column -> row dict

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec):
        """Fully reduce a sparse vector against the basis (a fresh dict).

        Elimination at the smallest reducible column only creates support at
        larger columns, so the smallest reducible column strictly increases
        and the loop terminates with the canonical residual.
        """
        f = self.field
        v = dict(vec)
        while True:
            col = min((c for c in v if c in self.rows), default=None)
            if col is None:
                return v
            coef = v[col]
            for cc, vv in self.rows[col].items():
                s = f.sub(v.get(cc, f.zero()), f.mul(coef, vv))
                if s == f.zero():
                    v.pop(cc, None)
                else:
                    v[cc] = s

    def add(self, vec):
        """Insert a vector; returns True when the rank grew."""
        f = self.field
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v)
        inv = f.inv(v[piv])
        v = {c: f.mul(val, inv) for c, val in v.items()}
        # keep the reduced form: clear the new pivot from existing rows
        for row in self.rows.values():
            if piv in row:
                c = row[piv]
                for cc, vv in v.items():
                    s = f.sub(row.get(cc, f.zero()), f.mul(c, vv))
                    if s == f.zero():
                        row.pop(cc, None)
                    else:
                        row[cc] = s
        self.rows[piv] = v
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    def copy(self):
        dup = Echelon(self.field)
        dup.rows = {p: dict(r) for p, r in self.rows.items()}
        return dup

    def basis(self):
        """Rows sorted by pivot column."""
        return [self.rows[p] for p in sorted(self.rows)]

    def pivots(self):
        return sorted(self.rows)

    def rank_in_cols_below(self, col_bound):
        return sum(1 for p in self.rows if p < col_bound)


@dataclass
class DegreeSlice:
    """Reduced echelon basis of one graded block of a span."""

    degree: int
    basis: list  # TruncatedPoly, homogeneous of this degree
    dimension: int


def echelon_span(vectors, n_vars, field, level):
    """Echelonize polynomials and report the graded blocks of the span.

    Input polynomials need not be homogeneous; the slice at degree d is the
    degree-d graded block of the span filtration (rows of the cumulative
    reduced basis pivoted in degree d, truncated to that degree).  For
    homogeneous input this is just the degree-d part of the span.
    """
    table = monomial_table(n_vars, level)
    ech = Echelon(field)
    for p in vectors:
        if p.level < level:
            raise LevelError(f"vector at level {p.level} below requested level {level}")
        ech.add(table.vector_of(p.truncate_to(level)))
    slices = []
    for d in range(level):
        lo, hi = table.offset[d], table.offset[d + 1]
        rows = [
            {table.monos[c]: v for c, v in row.items() if c < hi}
            for piv, row in sorted(ech.rows.items())
            if lo <= piv < hi
        ]
        basis = [
            TruncatedPoly(n_vars, field, level, r) for r in rows
        ]
        slices.append(DegreeSlice(d, basis, len(basis)))
    return slices


