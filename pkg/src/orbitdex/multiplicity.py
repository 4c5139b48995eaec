"""The zero order (local multiplicity) of a polynomial germ at the origin.

The certified core computes Q_d = dim K[x]_{<d} / span{ trunc(x^a f_i, d) }
for d = 1, 2, ... and stops at the first d with Q_d = Q_{d+1}: one repeat
certifies stabilization (equal nested quotients force m^d into the ideal
plus m^{d+1}, and Nakayama's lemma then puts m^d inside the ideal in the
local ring), so the repeated value is the multiplicity.

Exact closed-form reductions run first and hand the engine only small
residual systems:

* a coordinate that is a single variable lets the variable be set to zero
  and dropped;
* a coordinate divisible by a monomial splits the count additively, one
  variable factor at a time (isolation of the product is equivalent to
  isolation of every factor system, and the orders add);
* a common exponent gcd b_i per variable divides out, scaling the count
  by prod b_i (composition with x_i -> x_i^(b_i) multiplies orders);
* a variable occurring linearly in one coordinate and nowhere else in it
  can be solved for and substituted away;
* when the lowest-degree homogeneous system has 0 as its only zero, the
  order is the product of the lowest degrees, and that isolation question
  is itself decided exactly (a zero-dimensional system of forms of degrees
  m_j stabilizes by degree sum(m_j - 1) + 1, so running the quotient to
  that bound is a decision procedure).

All reductions are exact theorems, not heuristics; the engine result is
identical with or without them.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass

from .polynomials import GermMap, Poly, grevlex_key

DEFAULT_DEGREE_CAP = 64

# sizes above which the closed-form linear elimination is skipped
_ELIM_TERM_BUDGET = 50_000


class NotIsolatedWithinBound(Exception):
    """Quotient dimensions failed to stabilize below the degree cap.

    ``definite`` is True when the zero set is provably positive
    dimensional; otherwise the failure is ambiguous (the cap may simply
    be too small).  ``witness`` carries the evidence found, if any.
    """

    def __init__(self, degree_cap: int, witness: str | None = None,
                 definite: bool = False):
        self.degree_cap = degree_cap
        self.witness = witness
        self.definite = definite
        detail = witness or (
            "no stabilization by the degree cap; the zero may not be "
            "isolated, or the cap may be too small"
        )
        super().__init__(f"not isolated within degree {degree_cap}: {detail}")


@dataclass(frozen=True)
class MultiplicityResult:
    """Multiplicity value plus how it was obtained.

    ``fast_path`` is True when closed-form reductions (Cronin product or
    exact splitting) resolved the value without running the stabilization
    engine on any residual system.  The certificate fields are populated
    only when the engine ran directly on the input system: then
    quotient_dims = (Q_1, ..., Q_{d*+1}) with Q_{d*} = Q_{d*+1} = value.
    """

    value: int
    fast_path: bool
    stabilized_at: int | None = None
    quotient_dims: tuple[int, ...] = ()

    def __int__(self):
        return self.value


def _monomials_of_degree(nvars: int, degree: int):
    """All exponent tuples of the given total degree, grevlex-ascending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), degree, nvars)
    out.sort(key=grevlex_key)
    return out


class _Echelon:
    """Incremental sparse row echelon keyed by monomials, pivot = first
    nonzero column in grevlex order.

    Rows are dicts; a lazy min-heap of column keys tracks the current
    leading term so dense fill-in does not force a full scan per
    elimination step.
    """

    def __init__(self):
        self.pivots: dict[tuple, dict] = {}
        self.pivot_degrees = Counter()

    def insert(self, row: dict) -> tuple | None:
        """Reduce against current pivots; adopt as a new pivot row when a
        nonzero remainder is left.  Returns the new pivot column or None."""
        pivots = self.pivots
        heap = [grevlex_key(m) + (m,) for m in row]
        heapq.heapify(heap)
        while heap:
            col = heapq.heappop(heap)[-1]
            if col not in row:
                continue  # cancelled earlier (lazy deletion)
            prow = pivots.get(col)
            if prow is None:
                inv = row[col].invert()
                normalized = {m: c * inv for m, c in row.items()}
                pivots[col] = normalized
                self.pivot_degrees[sum(col)] += 1
                return col
            factor = row.pop(col)
            for m, c in prow.items():
                if m == col:
                    continue
                delta = factor * c
                cur = row.get(m)
                if cur is None:
                    row[m] = -delta
                    heapq.heappush(heap, grevlex_key(m) + (m,))
                else:
                    total = cur - delta
                    if total.is_zero():
                        del row[m]
                    else:
                        row[m] = total
        return None

    def pivots_below(self, degree: int) -> int:
        return sum(c for d, c in self.pivot_degrees.items() if d < degree)


class _IntEchelon(_Echelon):
    """Echelon over Q in cleared-denominator form: rows map monomials to
    integers, elimination is by cross-multiplication, and rows are
    divided by their content periodically to keep the integers small.
    Rank and pivot columns are scale-invariant, so the counts agree with
    the rational elimination exactly."""

    _STRIP_EVERY = 8

    @staticmethod
    def _strip(row: dict) -> None:
        g = 0
        for v in row.values():
            g = math.gcd(g, v)
            if g == 1:
                return
        if g > 1:
            for m in row:
                row[m] //= g

    def insert(self, row: dict) -> tuple | None:
        pivots = self.pivots
        heap = [grevlex_key(m) + (m,) for m in row]
        heapq.heapify(heap)
        steps = 0
        while heap:
            col = heapq.heappop(heap)[-1]
            if col not in row:
                continue
            prow = pivots.get(col)
            if prow is None:
                self._strip(row)
                pivots[col] = row
                self.pivot_degrees[sum(col)] += 1
                return col
            a = prow[col]
            b = row.pop(col)
            if a != 1:
                for m in row:
                    row[m] *= a
            for m, c in prow.items():
                if m == col:
                    continue
                cur = row.get(m)
                if cur is None:
                    row[m] = -b * c
                    heapq.heappush(heap, grevlex_key(m) + (m,))
                else:
                    total = cur - b * c
                    if total:
                        row[m] = total
                    else:
                        del row[m]
            steps += 1
            if steps % self._STRIP_EVERY == 0:
                self._strip(row)
        return None


def _integer_terms(p: Poly) -> dict:
    """The terms of a rational-coefficient polynomial with denominators
    cleared (scaling does not change the span)."""
    denom = 1
    for c in p.terms.values():
        denom = denom * c.coeffs[0].denominator // math.gcd(
            denom, c.coeffs[0].denominator)
    return {m: int(c.coeffs[0] * denom) for m, c in p.terms.items()}


def _shift_terms(terms: dict, alpha) -> dict:
    if not any(alpha):
        return dict(terms)
    return {
        tuple(a + b for a, b in zip(alpha, mono)): coeff
        for mono, coeff in terms.items()
    }


def _stabilize(coords, nvars: int, cap: int,
               witness: str | None = None):
    """Run the quotient-dimension engine; return (value, d_star, dims)."""
    if coords and coords[0].modulus == 1:
        ech: _Echelon = _IntEchelon()
        rows = [_integer_terms(p) for p in coords]
    else:
        ech = _Echelon()
        rows = [dict(p.terms) for p in coords]
    dims: list[int] = []
    for d in range(1, cap + 2):
        for alpha in _monomials_of_degree(nvars, d - 1):
            for terms in rows:
                ech.insert(_shift_terms(terms, alpha))
        q_d = math.comb(d - 1 + nvars, nvars) - ech.pivots_below(d)
        dims.append(q_d)
        if d >= 2 and dims[-1] == dims[-2]:
            return dims[-1], d - 1, tuple(dims)
    raise NotIsolatedWithinBound(cap, witness=witness, definite=False)


def _lowest_system(coords):
    lows = [p.lowest_form() for p in coords]
    degrees = [m for m, _ in lows]
    forms = [f for _, f in lows]
    return degrees, forms


def _homogeneous_isolated(forms, degrees, nvars: int, cap: int):
    """Exact isolation decision for a square homogeneous system.

    Returns True/False, or None when the decision bound exceeds the cap
    (then nothing is concluded).
    """
    macaulay = sum(degrees) - nvars + 2
    if macaulay > cap:
        return None
    try:
        _stabilize(forms, nvars, macaulay)
        return True
    except NotIsolatedWithinBound:
        return False


class _Context:
    __slots__ = ("cap", "engine_used", "top_certificate")

    def __init__(self, cap: int):
        self.cap = cap
        self.engine_used = False
        self.top_certificate = None


def _drop_coordinate_and_variable(coords, drop_coord: int, var: int):
    keep = [j for j in range(coords[0].nvars) if j != var]
    return [
        p.restrict_vars(keep)
        for j, p in enumerate(coords)
        if j != drop_coord
    ]


def _mult(coords: list[Poly], ctx: _Context, top: bool) -> int:
    nvars = coords[0].nvars if coords else 0
    if nvars == 0:
        return 1
    modulus = coords[0].modulus

    for j, p in enumerate(coords):
        if p.is_zero():
            raise NotIsolatedWithinBound(
                ctx.cap, witness=f"a coordinate vanishes identically "
                                 f"(position {j + 1} of a reduced system)",
                definite=True)
        if not p.constant_term().is_zero():
            # the system has no zero at the origin at all
            return 0

    # single-variable coordinate: set that variable to zero and drop it
    for j, p in enumerate(coords):
        if len(p.terms) == 1:
            (mono, _), = p.terms.items()
            if sum(mono) == 1:
                var = mono.index(1)
                return _mult(_drop_coordinate_and_variable(coords, j, var),
                             ctx, False)

    # a variable missing from every coordinate gives a product zero set
    used = [False] * nvars
    gcds = [0] * nvars
    for p in coords:
        for mono in p.terms:
            for i, e in enumerate(mono):
                if e:
                    used[i] = True
                    gcds[i] = math.gcd(gcds[i], e)
    if not all(used):
        miss = used.index(False)
        raise NotIsolatedWithinBound(
            ctx.cap, witness=f"variable x{miss + 1} appears in no coordinate, "
                             f"so the zero set contains its axis",
            definite=True)

    # common exponent gcd: divide out, scale by the product
    if any(g >= 2 for g in gcds):
        factor = 1
        for g in gcds:
            factor *= g
        reduced = [
            Poly(nvars, modulus,
                 {tuple(e // g for e, g in zip(m, gcds)): c
                  for m, c in p.terms.items()})
            for p in coords
        ]
        return factor * _mult(reduced, ctx, False)

    # monomial content: split additively, one variable factor at a time
    for j, p in enumerate(coords):
        content = p.monomial_content()
        if any(content):
            total = 0
            for i, a in enumerate(content):
                if a:
                    branch = list(coords)
                    branch[j] = Poly.variable(i, nvars, modulus)
                    total += a * _mult(branch, ctx, False)
            branch = list(coords)
            branch[j] = p.divide_monomial(content)
            total += _mult(branch, ctx, False)
            return total

    # Cronin fast path: product of lowest degrees when the lowest system
    # has 0 as its only common zero
    degrees, forms = _lowest_system(coords)
    isolated = _homogeneous_isolated(forms, degrees, nvars, ctx.cap)
    if isolated:
        product = 1
        for m in degrees:
            product *= m
        return product
    cronin_witness = None
    if isolated is False:
        cronin_witness = (
            "the lowest-degree homogeneous system has a positive-dimensional "
            "zero set (evidence of a non-isolated zero, not a proof)"
        )

    # solve out a variable that occurs linearly in one coordinate and in
    # no other term of that coordinate
    for j, p in enumerate(coords):
        for i in range(nvars):
            linear_mono = tuple(1 if k == i else 0 for k in range(nvars))
            c = p.terms.get(linear_mono)
            if c is None:
                continue
            rest = p - Poly(nvars, modulus, {linear_mono: c})
            if any(m[i] for m in rest.terms):
                continue
            solution = rest * (-(c.invert()))
            # substitution size guard: skip when it could blow up
            max_exp = max((m[i] for q in coords for m in q.terms), default=0)
            if len(solution.terms) ** max(max_exp, 1) > _ELIM_TERM_BUDGET:
                continue
            values = [Poly.variable(k, nvars, modulus) for k in range(nvars)]
            values[i] = solution
            new_coords = [
                q.substitute(values) for k, q in enumerate(coords) if k != j
            ]
            keep = [k for k in range(nvars) if k != i]
            new_coords = [q.restrict_vars(keep) for q in new_coords]
            return _mult(new_coords, ctx, False)

    # general engine
    ctx.engine_used = True
    value, d_star, dims = _stabilize(coords, nvars, ctx.cap,
                                     witness=cronin_witness)
    if top:
        ctx.top_certificate = (d_star, dims)
    return value


def _check_square(f: GermMap):
    if len(f.coords) != f.nvars:
        raise ValueError("multiplicity needs as many coordinates as variables")


def multiplicity(f: GermMap, degree_cap: int = DEFAULT_DEGREE_CAP) -> MultiplicityResult:
    """Zero order of the germ at the origin, with certificate.

    Raises NotIsolatedWithinBound when the origin is not an isolated zero
    (definite) or cannot be certified isolated below the cap (ambiguous).
    """
    _check_square(f)
    ctx = _Context(degree_cap)
    value = _mult(list(f.coords), ctx, True)
    if ctx.top_certificate is not None:
        d_star, dims = ctx.top_certificate
        return MultiplicityResult(value, fast_path=False,
                                  stabilized_at=d_star, quotient_dims=dims)
    return MultiplicityResult(value, fast_path=not ctx.engine_used)


def cronin(f: GermMap, degree_cap: int = DEFAULT_DEGREE_CAP) -> int | None:
    """Product of the lowest degrees when the lowest-degree homogeneous
    system has only the trivial zero; None when it does not (the order is
    then strictly larger) or when the decision exceeds the cap."""
    _check_square(f)
    for j, p in enumerate(f.coords):
        if p.is_zero():
            raise ValueError(
                f"coordinate {j + 1} is identically zero; the origin is not "
                f"an isolated zero")
    degrees, forms = _lowest_system(list(f.coords))
    if f.nvars == 0:
        return 1
    isolated = _homogeneous_isolated(forms, degrees, f.nvars, degree_cap)
    if not isolated:
        return None
    product = 1
    for m in degrees:
        product *= m
    return product


def truncated_quotient_dim(f: GermMap, d: int) -> int:
    """dim K[x]_{<d} modulo span{ trunc(x^a f_i, d) : |a| < d }."""
    _check_square(f)
    if d < 1:
        raise ValueError("truncation degree must be >= 1")
    nvars = f.nvars
    if nvars == 0:
        return 1
    if f.modulus == 1:
        ech: _Echelon = _IntEchelon()
        rows = [_integer_terms(p) for p in f.coords]
    else:
        ech = _Echelon()
        rows = [dict(p.terms) for p in f.coords]
    for deg in range(d):
        for alpha in _monomials_of_degree(nvars, deg):
            for terms in rows:
                row = {
                    m: c
                    for m, c in _shift_terms(terms, alpha).items()
                    if sum(m) < d
                }
                ech.insert(row)
    return math.comb(d - 1 + nvars, nvars) - ech.pivots_below(d)
