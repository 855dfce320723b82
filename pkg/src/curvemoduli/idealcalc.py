"""Per-degree spans of ideals in R/M^n and the invariants read off them:
Hilbert-Samuel values H1(t) = dim R/(I+M^{t+1}), the stabilized pair
(e0, e1), initial ideals and their minimal generator degrees (Hironaka's
v*), standard-basis verification, minimal generator counts, and the
"false" intersection number dim R/(I+X).

The workhorse is a single reduced echelon span of all monomial multiples
of the generators at the working level, with columns ordered by ascending
degree: pivots in degrees <= d then give both dim (I+M^{d+1})/M^{d+1} and
an explicit basis of the degree-d graded piece of the initial ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .ringcore import (
    DegreeSlice,
    Echelon,
    LevelError,
    TruncatedPoly,
    count_monomials_upto,
    initial_form,
    monomial_table,
    monomials_of_degree,
    parse_poly,
)


class IdealPresentation:
    """An ideal of R given by generators at a common truncation level.

    Generators must be nonzero with order >= 1 (contained in M).  An empty
    generator list is the zero ideal; it shows up when truncation kills
    every generator, and then only the implicit M^level block remains.
    """

    __slots__ = ("n_vars", "field", "generators", "level")

    def __init__(self, generators, n_vars=None, field=None, level=None):
        generators = list(generators)
        if generators:
            g0 = generators[0]
            n_vars = g0.n_vars if n_vars is None else n_vars
            field = g0.field if field is None else field
            level = g0.level if level is None else level
        if n_vars is None or field is None or level is None:
            raise ValueError("empty presentation needs explicit n_vars, field, level")
        for g in generators:
            if (g.n_vars, g.field, g.level) != (n_vars, field, level):
                raise LevelError("generators disagree on ambient, field, or level")
            if g.is_zero():
                raise ValueError("zero generator")
            if g.order() < 1:
                raise ValueError(f"generator {g} is a unit: order must be >= 1")
        self.generators = generators
        self.n_vars = n_vars
        self.field = field
        self.level = level

    @classmethod
    def parse(cls, texts, n_vars, field, level):
        return cls([parse_poly(t, n_vars, field, level) for t in texts], n_vars, field, level)

    def truncated(self, level):
        """Re-truncate generators to a lower level, dropping the ones killed."""
        if level > self.level:
            raise LevelError(f"cannot extend precision from {self.level} to {level}")
        gens = [g.truncate_to(level) for g in self.generators]
        return IdealPresentation(
            [g for g in gens if not g.is_zero()], self.n_vars, self.field, level
        )

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators) or "0"
        return f"Ideal({gens}; N={self.n_vars}, {self.field}, level={self.level})"


class DegreeSpans:
    """Echelonized span of (I+M^n)/M^n with all per-degree data.

    The span of (I+M^{d+1})/M^{d+1} is generated by the monomial multiples
    x^a * f_i with |a| + order(f_i) <= d; since every generator has order
    >= 1 the multiples at the top level restrict correctly to every lower
    level, so one echelon pass serves all degrees at once.
    """

    def __init__(self, ideal, level):
        if level < 1:
            raise LevelError("level must be >= 1")
        if ideal.level < level:
            raise LevelError(
                f"generator level {ideal.level} too low for span level {level}"
            )
        self.ideal = ideal
        self.level = level
        self.table = monomial_table(ideal.n_vars, level)
        self.ech = Echelon(ideal.field)
        n_vars = ideal.n_vars
        gens = [g.truncate_to(level) for g in ideal.generators]
        gens = [g for g in gens if not g.is_zero()]
        # insert multiples by ascending total degree: cheaper reductions and
        # the pivot structure fills bottom-up
        by_order = sorted(gens, key=lambda g: g.order())
        for d in range(level):
            for g in by_order:
                o = g.order()
                if o > d:
                    break
                for m in monomials_of_degree(n_vars, d - o):
                    self.ech.add(self.table.vector_of(g.mul_monomial(m)))
        # pivots per degree
        self._pivots_by_degree = [0] * level
        for piv in self.ech.rows:
            self._pivots_by_degree[self.table.degree_of_col(piv)] += 1

    def span_dim(self, d):
        """dim (I+M^{d+1})/M^{d+1} inside R/M^{d+1}, for d < level."""
        return sum(self._pivots_by_degree[: d + 1])

    def h1(self, t):
        """H1(t) = dim R/(I+M^{t+1})."""
        return count_monomials_upto(self.ideal.n_vars, t) - self.span_dim(t)

    def h1_values(self):
        return [self.h1(t) for t in range(self.level)]

    def contains(self, poly):
        """Membership of poly in (I+M^level)/M^level."""
        p = poly.truncate_to(self.level) if poly.level > self.level else poly
        if p.level < self.level:
            raise LevelError("membership needs the poly at the span level")
        return self.ech.contains(self.table.vector_of(p))

    def initial_slice(self, d):
        """Echelon basis of the degree-d graded piece I*_d of the initial ideal.

        These are the rows pivoted in degree d, truncated to degree d: row
        support starts at the pivot, so after truncation they are homogeneous.
        """
        lo, hi = self.table.offset[d], self.table.offset[d + 1]
        basis = []
        for piv in sorted(self.ech.rows):
            if lo <= piv < hi:
                row = self.ech.rows[piv]
                terms = {self.table.monos[c]: v for c, v in row.items() if c < hi}
                basis.append(TruncatedPoly(self.ideal.n_vars, self.ideal.field, self.level, terms))
        return DegreeSlice(d, basis, len(basis))


def ideal_spans(ideal, level):
    return DegreeSpans(ideal, level)


# ---------------------------------------------------------------------------
# Hilbert-Samuel data.


@dataclass
class HilbertData:
    """H1 values, graded differences, and the stabilized (e0, e1) when found.

    e1 follows the convention H1(t) = e0*(t+1) - e1 on the stabilized tail
    (the one that gives plane curves e1 = e0(e0-1)/2); reports also show the
    other display form e0*T - e1.
    """

    values: list
    graded: list
    e0: int | None
    e1: int | None
    stab_index: int | None
    status: str  # "ok" | "not_stabilized" | "dim_ge_2"
    level: int

    def to_json(self):
        return {
            "values": list(self.values),
            "graded": list(self.graded),
            "e0": self.e0,
            "e1": self.e1,
            "stab_index": self.stab_index,
            "status": self.status,
        }

    def polynomial_forms(self):
        if self.status != "ok":
            return None
        return {
            "tail_form": f"{self.e0}*(T+1) - {self.e1}",
            "intro_form": f"{self.e0}*T - {self.e1}",
        }


def analyze_h1(values, window=2):
    """Read (e0, e1) off a list of H1 values H1(0..n-1).

    Stabilization requires the difference sequence constant over at least
    `window` consecutive steps ending at the level boundary; a strictly
    increasing difference tail is flagged as dimension >= 2 instead.
    """
    n = len(values)
    graded = [values[0]] + [values[t] - values[t - 1] for t in range(1, n)]
    if n < 3:
        raise LevelError(f"need level >= 3 to analyze, got {n}")
    tail = graded[-window:]
    if len(set(tail)) == 1:
        e0 = tail[0]
        t0 = n - 1
        while t0 > 0 and graded[t0 - 1] == e0:
            t0 -= 1
        e1 = e0 * n - values[n - 1]
        return HilbertData(values, graded, e0, e1, t0, "ok", n)
    strict = all(graded[t] > graded[t - 1] for t in range(n - window, n))
    status = "dim_ge_2" if strict else "not_stabilized"
    return HilbertData(values, graded, None, None, None, status, n)


def hilbert_data(ideal, level, window=2):
    """Hilbert-Samuel data of R/(I+M^level) read from spans at `level`."""
    spans = DegreeSpans(ideal, level)
    return analyze_h1(spans.h1_values(), window=window)


# ---------------------------------------------------------------------------
# Initial ideal, Hironaka v*, minimal generator count.


@dataclass
class InitialIdealData:
    """Graded slices of the initial ideal I* with its minimal generators.

    vstar is the multiset (sorted list) of degrees of a minimal homogeneous
    basis of I* as visible below the level; nu is its size.  Minimal
    generators are the slice vectors not in S_1 * I*_{d-1}, picked by
    echelon pivot in deg-lex order.

    nu here counts minimal generators of the initial ideal; a minimal
    standard basis can be redundant as a generating set, so this can
    strictly exceed min_generators(I) (e.g. (x1^2 - x2^3, x1*x2^2) needs
    the extra initial form x2^5 but no third generator).
    """

    slices: list  # DegreeSlice per degree < level
    vstar: list
    nu: int
    min_generators: dict  # degree -> list of homogeneous TruncatedPoly
    level: int

    def slice_dims(self):
        return [s.dimension for s in self.slices]


def _degree_block_echelon(field, table, polys):
    ech = Echelon(field)
    for p in polys:
        ech.add(table.vector_of(p))
    return ech


def initial_ideal(ideal, level, spans=None):
    """Initial ideal data of I at the given level.

    Uses (I+M^{d+1})*_d = I*_d for d < level: the degree-d graded piece of
    the span filtration is exactly the degree-d piece of the initial ideal.
    """
    spans = spans or DegreeSpans(ideal, level)
    table = spans.table
    f = ideal.field
    n_vars = ideal.n_vars
    slices = []
    mingens = {}
    vstar = []
    prev_slice = None
    for d in range(level):
        sl = spans.initial_slice(d)
        slices.append(sl)
        # span of S_1 * I*_{d-1}
        gen_ech = Echelon(f)
        if prev_slice is not None:
            for p in prev_slice.basis:
                for i in range(1, n_vars + 1):
                    mono = tuple(1 if j == i - 1 else 0 for j in range(n_vars))
                    gen_ech.add(table.vector_of(p.mul_monomial(mono)))
        fresh = []
        for p in sl.basis:
            if gen_ech.add(table.vector_of(p)):
                fresh.append(p)
        if fresh:
            mingens[d] = fresh
            vstar.extend([d] * len(fresh))
        prev_slice = sl
    return InitialIdealData(slices, sorted(vstar), len(vstar), mingens, level)


def min_generators(ideal, level):
    """nu at the level: dim (I+M^n)/(M*I+M^n), computed by two spans."""
    full = DegreeSpans(ideal, level)
    shifted = Echelon(ideal.field)
    table = full.table
    for g in ideal.generators:
        g = g.truncate_to(level)
        if g.is_zero():
            continue
        o = g.order()
        for d in range(o + 1, level):
            for m in monomials_of_degree(ideal.n_vars, d - o):
                shifted.add(table.vector_of(g.mul_monomial(m)))
    return full.ech.rank - shifted.rank


# ---------------------------------------------------------------------------
# Standard basis verification.


@dataclass
class StandardBasisReport:
    ok: bool
    failing_degree: int | None = None
    missing_initial_form: TruncatedPoly | None = None
    vstar: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.ok


def standard_basis_check(ideal, level, spans=None):
    """Check that the given generators are a standard basis up to the level.

    Criterion: the homogeneous ideal generated by the initial forms of the
    given generators must match the graded slices of the initial ideal in
    every degree < level.  On failure, reports the least degree where the
    candidate ideal misses part of I*_d and one missing form as witness.
    """
    spans = spans or DegreeSpans(ideal, level)
    data = initial_ideal(ideal, level, spans=spans)
    visible = [g.truncate_to(level) for g in ideal.generators]
    candidate = IdealPresentation(
        [initial_form(g) for g in visible if not g.is_zero()],
        ideal.n_vars, ideal.field, level,
    )
    cand_spans = DegreeSpans(candidate, level)
    table = spans.table
    for d in range(level):
        have = cand_spans.initial_slice(d)
        want = data.slices[d]
        if have.dimension == want.dimension:
            continue
        ech = _degree_block_echelon(ideal.field, table, have.basis)
        for p in want.basis:
            if not ech.contains(table.vector_of(p)):
                return StandardBasisReport(False, d, p, data.vstar)
        raise AssertionError("slice dims differ but no missing form found")
    return StandardBasisReport(True, None, None, data.vstar)


# ---------------------------------------------------------------------------
# Intersection number.


INTERSECTION_DIVERGENT = "divergent"


def intersection_number(ideal, other, n_max):
    """dim R/(I+X), or the divergence sentinel when it keeps growing.

    Computes dim R/(I+X+M^t) for t <= n_max; one repeated value pins the
    limit (the quotient surjections become isomorphisms from there on).
    """
    if (ideal.n_vars, ideal.field) != (other.n_vars, other.field):
        raise LevelError("intersection needs a common ambient and field")
    level = min(ideal.level, other.level)
    if level < n_max:
        raise LevelError(f"generators known only to level {level} < n_max {n_max}")
    combined = IdealPresentation(
        [g.truncate_to(n_max) for g in ideal.generators + other.generators],
        ideal.n_vars, ideal.field, n_max,
    )
    spans = DegreeSpans(combined, n_max)
    prev = None
    for t in range(n_max):
        cur = spans.h1(t)
        if prev is not None and cur == prev:
            return cur
        prev = cur
    return INTERSECTION_DIVERGENT
