"""Crystallographic root systems: positive roots with heights, Macdonald's
Poincare formulas for the finite and affine Weyl groups, sincere roots,
and the exponent tables of the affine alternating products.

Roots are stored in simple-root coordinates only; heights are coordinate
sums and supports are coordinate supports, so no Euclidean embedding is
needed anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coxeter import _finite_cartan
from .series import Poly, RationalFunction


class RootSystemError(Exception):
    pass


_CLASSICAL_COUNTS = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": {6: 36, 7: 63, 8: 120},
    "F": {4: 24},
    "G": {2: 6},
}


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    cartan: tuple
    positive_roots: tuple  # coordinate tuples, sorted by (height, coords)
    highest_root: tuple
    coxeter_number: int

    @property
    def type_tag(self):
        return "%s%d" % (self.family, self.rank)

    def heights(self):
        return [sum(r) for r in self.positive_roots]

    def __repr__(self):
        return "RootSystem(%s, %d positive roots, h=%d)" % (
            self.type_tag, len(self.positive_roots), self.coxeter_number)


def positive_roots(family, rank):
    """Generate the full positive system by closure from the simple roots.

    Uses the standard root-string criterion: for a root a and simple root
    a_i, a + a_i is a root exactly when p - <a, a_i^vee> > 0 where p is the
    number of steps one can subtract a_i from a staying inside the system.
    """
    family = family.upper()
    cartan = tuple(tuple(r) for r in _finite_cartan(family, rank))
    n = rank
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    known = set(simple)
    by_height = {1: list(simple)}
    h = 1
    while by_height.get(h):
        nxt = []
        for a in by_height[h]:
            for i in range(n):
                pairing = sum(a[j] * cartan[i][j] for j in range(n))
                p = 0
                probe = list(a)
                while True:
                    probe[i] -= 1
                    if probe[i] < 0 or tuple(probe) not in known:
                        break
                    p += 1
                if p - pairing > 0:
                    up = tuple(a[j] + (1 if j == i else 0) for j in range(n))
                    if up not in known:
                        known.add(up)
                        nxt.append(up)
        if nxt:
            by_height[h + 1] = nxt
        h += 1
    roots = sorted(known, key=lambda r: (sum(r), r))
    expected = _CLASSICAL_COUNTS[family]
    expected = expected(rank) if callable(expected) else expected.get(rank)
    if expected is not None and len(roots) != expected:
        raise RootSystemError(
            "closure produced %d positive roots for %s%d, expected %d"
            % (len(roots), family, rank, expected))
    top_height = sum(roots[-1])
    tops = [r for r in roots if sum(r) == top_height]
    if len(tops) != 1:
        raise RootSystemError("highest root is not unique")
    return RootSystem(family, rank, cartan, tuple(roots), tops[0], top_height + 1)


# ---------------------------------------------------------------------------
# the affine root window P = {affine roots with 0 < height < h}


@dataclass(frozen=True)
class AffineRootWindow:
    """The affine roots of height strictly between 0 and the Coxeter
    number: the positive roots a, plus one root delta - a for each a,
    stored as ("+", a) and ("-", a) with heights ht(a) and h - ht(a)."""

    root_system: RootSystem
    members: tuple

    @staticmethod
    def build(rs):
        members = [("+", a) for a in rs.positive_roots]
        members += [("-", a) for a in rs.positive_roots]
        return AffineRootWindow(rs, tuple(members))

    def height(self, member):
        sign, a = member
        return sum(a) if sign == "+" else self.root_system.coxeter_number - sum(a)

    def support_is_full(self, member):
        """Whether the member touches every node of the extended diagram."""
        sign, a = member
        if sign == "+":
            return all(c != 0 for c in a)
        theta = self.root_system.highest_root
        return all(t - c != 0 for t, c in zip(theta, a))

    def heights_multiset(self):
        return sorted(self.height(m) for m in self.members)


# ---------------------------------------------------------------------------
# Macdonald's formulas


def _height_product(heights):
    out = RationalFunction(Poly.one())
    for t in heights:
        out = out * RationalFunction(_binomial(t + 1), _binomial(t))
    return out


def _binomial(d):
    return Poly((1,) + (0,) * (d - 1) + (-1,))


def macdonald_series(rs):
    """Poincare series of the finite and affine Weyl groups from the
    height products over the positive roots and the affine window."""
    finite = _height_product(sum(a) for a in rs.positive_roots)
    window = AffineRootWindow.build(rs)
    h, n = rs.coxeter_number, rs.rank
    affine = _height_product(window.heights_multiset())
    affine = affine * RationalFunction(Poly.one(), _binomial(h) ** n)
    return finite, affine


def sincere_heights(rs):
    """Heights of the full-support roots: (in R+, in the affine window
    among the wrapped roots delta - a)."""
    window = AffineRootWindow.build(rs)
    finite_part = sorted(
        sum(a) for a in rs.positive_roots if all(c != 0 for c in a)
    )
    wrapped_part = sorted(
        window.height(m) for m in window.members
        if m[0] == "-" and window.support_is_full(m)
    )
    return finite_part, wrapped_part


def alt_via_sincere(rs):
    """Alternating products of parabolic Poincare series, evaluated through
    the Moebius collapse onto full-support roots."""
    finite_hts, wrapped_hts = sincere_heights(rs)
    alt_finite = _height_product(finite_hts)
    h, n = rs.coxeter_number, rs.rank
    alt_affine = _height_product(wrapped_hts) * RationalFunction(Poly.one(), _binomial(h) ** n)
    return alt_finite, alt_affine


def exponent_table(rs):
    """The degrees d_1 <= ... <= d_n with Alt(affine)(u)^{-1} equal to the
    polynomial product of (1 - u^{d_i}); raises if the product fails to be
    a polynomial of that shape."""
    _, alt_affine = alt_via_sincere(rs)
    inv = alt_affine.inverse().reduced()
    if not inv.is_polynomial():
        raise RootSystemError("affine alternating product inverse is not a polynomial")
    factors = RationalFunction(inv.as_polynomial()).binomial_factors()
    if factors is None or any(m < 0 for _, m in factors):
        raise RootSystemError("affine alternating product is not a product of 1-u^d factors")
    out = []
    for d, m in factors:
        out.extend([d] * m)
    out.sort()
    n, h = rs.rank, rs.coxeter_number
    if len(out) != n or out[0] != n + 1 or out[-1] > h:
        raise RootSystemError("exponent list %r violates the rank/Coxeter bounds" % (out,))
    return out


# ---------------------------------------------------------------------------
# extended Cartan data and table output


def symmetrizers(cartan):
    """Positive rationals d_i with d_i * c_ij symmetric."""
    n = len(cartan)
    d = [None] * n
    d[0] = Fraction(1)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i != j and cartan[i][j] != 0 and d[i] is not None and d[j] is None:
                    d[j] = d[i] * Fraction(cartan[i][j], cartan[j][i])
                    changed = True
    if any(v is None for v in d):
        raise RootSystemError("Cartan matrix is not connected")
    return d


def extended_cartan(family, rank):
    """Generalized Cartan matrix of the untwisted affine extension, with
    the affine node last (matching the rank-2 generator numbering)."""
    rs = positive_roots(family, rank)
    cartan = rs.cartan
    n = rank
    d = symmetrizers(cartan)
    # (a, b) = sum_i a_i d_i <b, alpha_i^vee> built from rows of the Cartan matrix
    def form(a, b):
        return sum(
            Fraction(a[i]) * d[i] * sum(cartan[i][j] * b[j] for j in range(n))
            for i in range(n)
        )

    theta = rs.highest_root
    tt = form(theta, theta)
    ext = [[cartan[i][j] for j in range(n)] + [0] for i in range(n)]
    ext.append([0] * (n + 1))
    ext[n][n] = 2
    for j in range(n):
        alpha_j = tuple(1 if t == j else 0 for t in range(n))
        # pairing of alpha_j against the lowest-root coroot and vice versa
        v1 = -2 * form(alpha_j, theta) / tt
        v2 = -sum(cartan[j][i] * theta[i] for i in range(n))
        if v1.denominator != 1:
            raise RootSystemError("non-integral affine pairing")
        ext[n][j] = int(v1)
        ext[j][n] = v2
    return tuple(tuple(r) for r in ext)


def exponent_rows(specs):
    """Rows (type, rank, h, d_1..d_n) for the table CLI, one per type."""
    rows = []
    for family, rank in specs:
        rs = positive_roots(family, rank)
        rows.append((rs.type_tag, rank, rs.coxeter_number, exponent_table(rs)))
    return rows


DEFAULT_TABLE_SPECS = (
    [("A", n) for n in range(1, 9)]
    + [("B", n) for n in range(2, 9)]
    + [("C", n) for n in range(2, 9)]
    + [("D", n) for n in range(4, 9)]
    + [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
)
