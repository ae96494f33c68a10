"""Rank-2 straight-strip combinatorics: the cyclic strip generators, the
power length additivity check, the explicit length-preserving
factorizations of the affine group, and the determinant identity relating
the two strip factors to the alternating product of parabolic series.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import coxeter as cox
from .hecke import CyclicTwistedSeries, FiniteTwistedSeries
from .series import (
    Matrix,
    Poly,
    PowerSeries,
    RationalFunction,
    char_matrix_det,
    det_series,
    poincare_affine,
    scalar_one_like,
)


class StripsError(Exception):
    pass


# words in 0-based generator indices; s3 (index 2) is the affine reflection
_STRIP_WORDS = {
    "A2t": ((2, 1, 0), (2, 0, 1)),
    "C2t": ((2, 0, 1, 0), (2, 0, 1)),
    "G2t": ((2, 0, 1), (2, 0, 1, 0, 1)),
}

# the geometric strip stabilizer word for G2t before conjugating it into
# a power-length-additive generator; kept for the negative check
_G2T_RAW_WORD = (2, 0, 1, 2, 0)


@dataclass(frozen=True)
class StripSpec:
    type_tag: str
    index: int  # 1 or 2
    word: tuple
    length: int


def strip_generators(type_tag):
    """The two straight-strip generators of a rank-2 affine type, with
    lengths verified against the geometric representation."""
    if type_tag not in _STRIP_WORDS:
        raise StripsError("no strip generators for type %r" % (type_tag,))
    system = cox.build_system(type_tag)
    out = []
    for idx, word in enumerate(_STRIP_WORDS[type_tag], start=1):
        key = _word_key(system, word)
        length, _ = cox.length_and_word(system, key)
        if length != len(word):
            raise StripsError("strip word %r is not reduced" % (word,))
        out.append(StripSpec(type_tag, idx, word, length))
    return tuple(out)


def unreplaced_strip_generator():
    """The raw first strip-stabilizer generator of G2t (the one whose
    powers fail length additivity, motivating the conjugated word)."""
    system = cox.build_system("G2t")
    key = _word_key(system, _G2T_RAW_WORD)
    length, _ = cox.length_and_word(system, key)
    return StripSpec("G2t", 1, _G2T_RAW_WORD, length)


def _word_key(system, word):
    k = system.num_generators
    key = cox.mat_identity(k)
    for i in word:
        key = cox.mat_mul(key, system.generator_matrix(i))
    return key


@dataclass
class PowerLengthReport:
    spec: StripSpec
    k_max: int
    ok: bool
    first_failure: tuple = None  # (k, expected, actual)
    lengths: list = field(default_factory=list)

    def as_json(self):
        return {
            "type": self.spec.type_tag,
            "word": [i + 1 for i in self.spec.word],
            "k_max": self.k_max,
            "pass": self.ok,
            "lengths": self.lengths,
            "first_failure": list(self.first_failure) if self.first_failure else None,
        }


def check_power_lengths(table, spec, k_max):
    """Check l(w^k) == k * l(w) for 0 <= k <= k_max.

    Lengths come from the table when the power is within the bound and
    from the descent walk on the matrix otherwise, so large k is fine.
    """
    system = table.system
    base = _word_key(system, spec.word)
    key = cox.mat_identity(system.num_generators)
    report = PowerLengthReport(spec, k_max, True)
    for k in range(k_max + 1):
        expected = k * spec.length
        if key in table.index:
            actual = table.element(key).length
        else:
            actual, _ = cox.length_and_word(system, key)
        report.lengths.append(actual)
        if actual != expected and report.ok:
            report.ok = False
            report.first_failure = (k, expected, actual)
        key = cox.mat_mul(key, base)
    return report


# ---------------------------------------------------------------------------
# factorization schemes


@dataclass(frozen=True)
class FactorizationScheme:
    """Ordered factor descriptors whose set product is the whole group.

    Factor kinds: ("coset", J, I, side), ("parabolic", gens),
    ("cyclic", strip_index).
    """

    type_tag: str
    factors: tuple


def scheme_for(type_tag):
    if type_tag in ("A2t", "C2t"):
        factors = (
            ("coset", (0, 1), (1,), "right"),
            ("cyclic", 1),
            ("coset", (1, 2), (2,), "right"),
            ("cyclic", 2),
            ("coset", (0, 2), (0,), "left"),
        )
    elif type_tag == "G2t":
        # the census admits exactly one ordering of the two cyclic factors:
        # the long strip generator must precede the short one
        factors = (
            ("coset", (0, 1), (0,), "right"),
            ("cyclic", 2),
            ("cyclic", 1),
            ("parabolic", (0, 2)),
        )
    else:
        raise StripsError("no factorization scheme for type %r" % (type_tag,))
    return FactorizationScheme(type_tag, factors)


def realize_factors(table, scheme):
    """Resolve the abstract factor descriptors into element data.

    Returns a list of ("finite", elements) and ("cyclic", element) entries,
    in scheme order.
    """
    if table.system.type_tag != scheme.type_tag:
        raise StripsError("scheme %s applied to a %s table" % (scheme.type_tag, table.system.type_tag))
    specs = {s.index: s for s in strip_generators(scheme.type_tag)}
    out = []
    for factor in scheme.factors:
        kind = factor[0]
        if kind == "coset":
            _, J, I, side = factor
            out.append(("finite", cox.min_coset_reps(table, J, I, side)))
        elif kind == "parabolic":
            out.append(("finite", table.parabolic_elements(factor[1])))
        elif kind == "cyclic":
            spec = specs[factor[1]]
            out.append(("cyclic", table.element_of_word(spec.word)))
        else:
            raise StripsError("unknown factor kind %r" % (kind,))
    return out


@dataclass
class CensusReport:
    type_tag: str
    order: int
    counts: list
    expected: list
    length_additive_ok: bool
    distinct_ok: bool
    counts_ok: bool
    witness: dict = None

    @property
    def ok(self):
        return self.length_additive_ok and self.distinct_ok and self.counts_ok

    def as_json(self):
        return {
            "type": self.type_tag,
            "scheme": "strip-factorization",
            "L": self.order,
            "slice_counts": self.counts,
            "expected_counts": self.expected,
            "pass": bool(self.ok),
            "witness": self.witness,
        }


def factorization_census(table, scheme, order):
    """Enumerate all factor tuples of total length <= order and check that
    the factorization is length preserving, injective, and complete.

    (a) every product has length equal to the sum of factor lengths;
    (b) distinct tuples give distinct products;
    (c) the number of tuples of total length k equals the coefficient of
        u^k in the Poincare series of the group.
    """
    factors = realize_factors(table, scheme)
    system = table.system
    ident = cox.mat_identity(system.num_generators)
    counts = [0] * (order + 1)
    seen = {}
    report = CensusReport(scheme.type_tag, order, counts, [], True, True, True)

    def witness(kind, tup, extra):
        if report.witness is None:
            report.witness = {
                "check": kind,
                "tuple": [[i + 1 for i in w] for w in tup],
                **extra,
            }

    def descend(i, key, total, words):
        if i == len(factors):
            el = table.element(key)
            if el.length != total and report.length_additive_ok:
                report.length_additive_ok = False
                witness("length", words, {"expected": total, "actual": el.length})
            if key in seen:
                report.distinct_ok = False
                witness("distinct", words, {"collides_with": [[i + 1 for i in w] for w in seen[key]]})
            else:
                seen[key] = words
            counts[total] += 1
            return
        kind, data = factors[i]
        if kind == "finite":
            for el in data:
                if total + el.length > order:
                    continue
                descend(i + 1, cox.mat_mul(key, el.key), total + el.length, words + (el.word,))
        else:
            step = data.length
            cur = key
            k = 0
            while total + k * step <= order:
                descend(i + 1, cur, total + k * step, words + (data.word * k,))
                cur = cox.mat_mul(cur, data.key)
                k += 1

    descend(0, ident, 0, ())
    _, ps = poincare_affine(system, order, table if table.bound >= order else None)
    report.expected = [ps.coeff(d) for d in range(order + 1)]
    if counts != report.expected:
        report.counts_ok = False
        if report.witness is None:
            bad = next(d for d in range(order + 1) if counts[d] != report.expected[d])
            report.witness = {
                "check": "counts",
                "degree": bad,
                "expected": report.expected[bad],
                "actual": counts[bad],
            }
    return report


# ---------------------------------------------------------------------------
# twisted factorization at the series level


@dataclass
class TwistedFactorizationReport:
    type_tag: str
    order: int
    ok: bool
    first_mismatch: int = None

    def as_json(self):
        return {
            "type": self.type_tag,
            "L": self.order,
            "pass": bool(self.ok),
            "first_mismatch_degree": self.first_mismatch,
        }


def twisted_group_sum(rep, table, order):
    """Truncated twisted Poincare series of the whole group,
    sum of rho(e_w) u^l(w) over the table up to the given order."""
    one = scalar_one_like(rep.q)
    coeffs = [Matrix.identity(rep.dim, one) * 0 for _ in range(order + 1)]
    for d in range(order + 1):
        for el in table.layers[d]:
            coeffs[d] = coeffs[d] + rep.image(table, el)
    return PowerSeries(coeffs, order)


def verify_twisted_factorization(table, scheme, rep, order):
    """Check that the ordered product of the twisted factor series equals
    the twisted series of the whole group, coefficient by coefficient."""
    if order > table.bound:
        raise StripsError("order exceeds the table bound")
    factors = realize_factors(table, scheme)
    product = None
    for kind, data in factors:
        if kind == "finite":
            ts = FiniteTwistedSeries(rep, data, table).truncate(order)
        else:
            ts = CyclicTwistedSeries(rep, rep.image(table, data), data.length).truncate(order)
        product = ts if product is None else product * ts
    direct = twisted_group_sum(rep, table, order)
    report = TwistedFactorizationReport(scheme.type_tag, order, True)
    for d in range(order + 1):
        if not (product.coeffs[d] == direct.coeffs[d]):
            report.ok = False
            report.first_mismatch = d
            break
    return report


# ---------------------------------------------------------------------------
# the determinant identity


def _finite_factor_det(rep, table, elements):
    hook = getattr(rep, "finite_det_hook", None)
    if hook is not None:
        return hook(table, elements)
    return FiniteTwistedSeries(rep, elements, table).det()


def _cyclic_factor_det(rep, table, element):
    """det(I - rho(e_w) u^l(w)) as an exact polynomial."""
    hook = getattr(rep, "cyclic_det_hook", None)
    if hook is not None:
        return hook(table, element)
    return char_matrix_det(rep.image(table, element), element.length)


@dataclass
class DetIdentityReport:
    type_tag: str
    ok: bool
    strip_dets: list
    alt_det: RationalFunction
    dual_check_order: int
    dual_check_ok: bool

    def as_json(self):
        return {
            "type": self.type_tag,
            "pass": bool(self.ok),
            "strip_det_inverses": [str(p) for p in self.strip_dets],
            "alt_det": str(self.alt_det),
            "dual_check": {"order": self.dual_check_order, "pass": bool(self.dual_check_ok)},
        }


def verify_determinant_identity(system, rep, table=None, dual_check_order=None):
    """Exact check that the product of the two inverse strip determinants
    equals the alternating product of twisted parabolic determinants.

    The full-group factor of the alternating product is obtained through
    the length-preserving factorization; as an independent route its
    truncated expansion is compared with the trace-log determinant of the
    truncated group series.
    """
    if system.type_tag not in _STRIP_WORDS:
        raise StripsError("determinant identity applies to rank-2 affine types")
    if table is None:
        table = cox.enumerate_elements(system, cox.DEFAULT_BOUND)
    scheme = scheme_for(system.type_tag)
    factors = realize_factors(table, scheme)
    factor_dets = [
        (kind, _finite_factor_det(rep, table, data) if kind == "finite"
         else _cyclic_factor_det(rep, table, data))
        for kind, data in factors
    ]

    # determinants of the two cyclic strip factors: det(I - A_i u^{l_i})
    strip_dets = [det for kind, det in factor_dets if kind == "cyclic"]
    lhs = RationalFunction(Poly.one())
    for p in strip_dets:
        lhs = lhs / RationalFunction(p)

    # det of the full-group twisted series, through the factorization
    det_full = RationalFunction(Poly.one())
    for kind, det in factor_dets:
        if kind == "finite":
            det_full = det_full * RationalFunction(det)
        else:
            det_full = det_full / RationalFunction(det)

    # independent truncated route for the full-group determinant
    if dual_check_order is None:
        dual_check_order = 8 if rep.dim <= 8 else 6
    hook = getattr(rep, "det_series_hook", None)
    if hook is not None:
        truncated = hook(table, dual_check_order)
    else:
        truncated = det_series(twisted_group_sum(rep, table, dual_check_order))
    dual_ok = truncated == det_full.expand(dual_check_order)

    # alternating product over all parabolic subsets
    k = system.num_generators
    alt = RationalFunction(Poly.one())
    for subset in cox.all_proper_subsets(k):
        exponent = (-1) ** (len(subset) + k)
        d_i = RationalFunction(_finite_factor_det(rep, table, table.parabolic_elements(subset)))
        alt = alt * (d_i if exponent == 1 else d_i.inverse())
    alt = alt * det_full  # the full subset enters with exponent +1

    ok = dual_ok and (lhs == alt)
    return DetIdentityReport(system.type_tag, ok, strip_dets, alt, dual_check_order, dual_ok)
