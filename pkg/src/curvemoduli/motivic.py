"""Exact arithmetic in the subring Z[L, L^-1] of the Grothendieck ring of
varieties, the non-archimedean filtration norm, rational motivic Poincare
series, cylinder-measure normalization, point-count specialization, and
partial motivic volumes.

General variety classes are deliberately not represented: every formula in
scope multiplies an input class by powers of L, so Laurent polynomials in L
with integer coefficients suffice.  Classes of enumerated strata enter
either symbolically or as polynomials fitted from point counts over a few
finite fields; the fit is labeled the heuristic it is.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class MotivicClass:
    """Laurent polynomial in L with integer coefficients (sparse, exact)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        for e, c in (coeffs or {}).items():
            if c:
                clean[int(e)] = int(c)
        self.coeffs = clean

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def L(cls, exponent=1):
        return cls({exponent: 1})

    @classmethod
    def from_int(cls, n):
        return cls({0: n})

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return MotivicClass(out)

    def __neg__(self):
        return MotivicClass({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return MotivicClass(out)

    def scale(self, n):
        return MotivicClass({e: c * n for e, c in self.coeffs.items()})

    def shift(self, k):
        """Multiply by L^k."""
        return MotivicClass({e + k: c for e, c in self.coeffs.items()})

    def pow(self, k):
        out = MotivicClass.one()
        for _ in range(k):
            out = out * self
        return out

    def order(self):
        """Filtration order: -(largest exponent); None for the zero class."""
        if not self.coeffs:
            return None
        return -max(self.coeffs)

    def norm(self):
        """2^(-order); the zero class has norm 0."""
        if not self.coeffs:
            return Fraction(0)
        return _two_power(-self.order())

    def specialize(self, q):
        """Point-count realization L -> q (exact; rational for negative powers)."""
        if q < 2:
            raise ValueError("specialization needs q >= 2")
        total = Fraction(0)
        for e, c in self.coeffs.items():
            total += c * (Fraction(q) ** e)
        return int(total) if total.denominator == 1 else total

    def __eq__(self, other):
        return isinstance(other, MotivicClass) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __str__(self):
        if not self.coeffs:
            return "0"
        pieces = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            if e == 0:
                body = str(abs(c))
            else:
                lpow = "L" if e == 1 else f"L^{e}"
                body = lpow if abs(c) == 1 else f"{abs(c)}*{lpow}"
            if not pieces:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"MotivicClass({self})"


def _two_power(k):
    return Fraction(2) ** k if k >= 0 else Fraction(1, 2 ** (-k))


@dataclass(frozen=True)
class MeasureContext:
    """Ambient data for the cylinder measure: fibration rank c = (N-1)e0."""

    n_vars: int
    e0: int

    @property
    def c(self):
        return (self.n_vars - 1) * self.e0


def measure_of_level(class_n, n, ctx):
    """mu_p at level n: the stratum class times L^{-(n+1)(N-1)e0}."""
    return class_n.shift(-(n + 1) * ctx.c)


class RationalSeries:
    """num(T) / prod (1 - L^a T^b): exact, expandable to any order.

    The representation is not unique; equality is decided by comparing the
    cross-multiplied numerators.
    """

    def __init__(self, numerator, denominator=()):
        self.numerator = {int(k): v for k, v in numerator.items() if not v.is_zero()}
        den = []
        for a, b in denominator:
            if b < 1 or a < 0:
                raise ValueError("denominator factors are (1 - L^a T^b) with a >= 0, b >= 1")
            den.append((int(a), int(b)))
        self.denominator = tuple(sorted(den))

    def expand(self, k):
        """Taylor coefficients in T up to T^k, exactly."""
        coeffs = [self.numerator.get(i, MotivicClass.zero()) for i in range(k + 1)]
        for a, b in self.denominator:
            # multiply by the geometric series of (1 - L^a T^b)^{-1}
            out = [MotivicClass.zero() for _ in range(k + 1)]
            for i in range(k + 1):
                if coeffs[i].is_zero():
                    continue
                j = i
                power = 0
                while j <= k:
                    out[j] = out[j] + coeffs[i].shift(a * power)
                    j += b
                    power += 1
            coeffs = out
        return coeffs

    def denominator_poly(self):
        poly = {0: MotivicClass.one()}
        for a, b in self.denominator:
            out = {}
            for i, c in poly.items():
                out[i] = out.get(i, MotivicClass.zero()) + c
                out[i + b] = out.get(i + b, MotivicClass.zero()) - c.shift(a)
            poly = {i: c for i, c in out.items() if not c.is_zero()}
        return poly

    def __eq__(self, other):
        if not isinstance(other, RationalSeries):
            return NotImplemented
        left = _poly_mul(self.numerator, other.denominator_poly())
        right = _poly_mul(other.numerator, self.denominator_poly())
        return left == right

    def __str__(self):
        num = " + ".join(
            f"({self.numerator[i]})*T^{i}" if i else f"({self.numerator[i]})"
            for i in sorted(self.numerator)
        ) or "0"
        if not self.denominator:
            return num
        den = "".join(
            f"(1 - {'L^%d' % a + '*' if a else ''}T{'^%d' % b if b > 1 else ''})"
            for a, b in self.denominator
        ).replace("L^1*", "L*")
        return f"({num}) / {den}"

    def to_json(self):
        return {
            "numerator": {str(i): str(c) for i, c in sorted(self.numerator.items())},
            "denominator": [[a, b] for a, b in self.denominator],
        }


def _poly_mul(p1, p2):
    out = {}
    for i, a in p1.items():
        for j, b in p2.items():
            k = i + j
            out[k] = out.get(k, MotivicClass.zero()) + a * b
    return {k: v for k, v in out.items() if not v.is_zero()}


def series_expand(series, k):
    return series.expand(k)


def mps(class0, n0, ctx):
    """Motivic Poincare series of a finitely determined property.

    Closed form: class0 * L^{c n0} T^{n0} / (1 - L^c T), with c the
    fibration rank; expansion coefficients gain a factor L^c per step.
    """
    if n0 < 1:
        raise ValueError("n0 must be >= 1")
    if class0.is_zero():
        return RationalSeries({}, [])
    return RationalSeries({n0: class0.shift(ctx.c * n0)}, [(ctx.c, 1)])


def specialize(value, q):
    """L -> q on a class (point counting; virtual classes may go negative)."""
    return value.specialize(q)


def volume_partial(terms, max_shift=None):
    """Partial motivic volume: sum of term(s) * L^{-s} for the given s.

    Also returns the norm bound 2^-(S+1-D) on the omitted tail, where S is
    the largest s supplied and D bounds the L-degree of the term classes
    (taken from the supplied terms unless given).  The bound assumes tail
    terms obey the same degree bound; that assumption is the caller's.
    """
    total = MotivicClass.zero()
    if not terms:
        return total, Fraction(0)
    S = max(terms)
    D = max_shift
    if D is None:
        D = max(
            (max(cls.coeffs) for cls in terms.values() if not cls.is_zero()),
            default=0,
        )
    for s, cls in terms.items():
        if s < 0:
            raise ValueError("term indices are s >= 0")
        total = total + cls.shift(-s)
    return total, _two_power(-(S + 1 - D))


def parse_motivic(text):
    """Parse a Laurent polynomial in L: e.g. "3*L^2 - L + 1 + 2*L^-1"."""
    s = text.strip()
    if not s:
        raise ValueError("empty class")
    pos = 0
    out = {}

    def skip():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def read_int(allow_sign=False):
        nonlocal pos
        skip()
        start = pos
        if allow_sign and pos < len(s) and s[pos] in "+-":
            pos += 1
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if pos == start or s[start:pos] in "+-":
            raise ValueError(f"expected an integer at position {start} in {text!r}")
        return int(s[start:pos])

    first = True
    while True:
        skip()
        if pos >= len(s):
            if first:
                raise ValueError("empty class")
            break
        sign = 1
        if s[pos] in "+-":
            if first and s[pos] == "+":
                raise ValueError("unexpected leading '+'")
            sign = -1 if s[pos] == "-" else 1
            pos += 1
            skip()
        elif not first:
            raise ValueError(f"expected '+' or '-' at position {pos} in {text!r}")
        first = False
        coeff = 1
        if pos < len(s) and s[pos].isdigit():
            coeff = read_int()
            skip()
            if pos < len(s) and s[pos] == "*":
                pos += 1
                skip()
        exp = 0
        if pos < len(s) and s[pos] == "L":
            pos += 1
            exp = 1
            skip()
            if pos < len(s) and s[pos] == "^":
                pos += 1
                exp = read_int(allow_sign=True)
        out[exp] = out.get(exp, 0) + sign * coeff
    return MotivicClass(out)


def fit_class_from_counts(counts, max_degree):
    """Heuristic: fit a polynomial in L through point counts at several q.

    Needs at least max_degree+1 distinct fields; uses the lowest-degree
    exact interpolation through all counts.  Returns the class and a list
    of warnings; a non-integral or non-reproducing fit raises instead,
    since emitting a wrong class silently would poison everything above.
    """
    qs = sorted(counts)
    if len(qs) < 2:
        raise ValueError("need counts for at least two fields")
    degree = min(max_degree, len(qs) - 1)
    warnings = [
        "polynomial point-count behavior is an assumption, not a verified fact"
    ]
    if degree < max_degree:
        warnings.append(
            f"fit degree lowered to {degree}: only {len(qs)} fields supplied"
        )
    n = degree + 1
    rows = [[Fraction(q) ** j for j in range(n)] + [Fraction(counts[q])] for q in qs[:n]]
    # plain Gaussian elimination on the (n+1)-column augmented system
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    sol = [rows[j][n] for j in range(n)]
    if any(c.denominator != 1 for c in sol):
        raise ValueError(f"fit is not integral: {sol}")
    cls = MotivicClass({j: int(c) for j, c in enumerate(sol)})
    for q in qs:
        if cls.specialize(q) != counts[q]:
            raise ValueError(
                f"no degree-{degree} polynomial reproduces all counts"
                f" (fails at q = {q})"
            )
    return cls, warnings
