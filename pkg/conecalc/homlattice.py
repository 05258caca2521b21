"""Integer lattice arithmetic on H_2 of a ruled surface blown up at n points.

Classes are written in the basis B (section), F (fiber), E_1..E_n (exceptional) with the
intersection form B.B = 0, B.F = 1, F.F = 0, E_i.E_j = -delta_ij and all mixed pairings 0.
Everything here is pure and works on frozen values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from conecalc.errors import DimensionMismatch, ParseError, UnsupportedGenus

Number = Union[int, Fraction]


@dataclass(frozen=True)
class ManifoldDescriptor:
    """Genus g of the base surface and number n of blow-ups."""

    g: int
    n: int

    def __post_init__(self) -> None:
        for name in ("g", "n"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")

    def require_irrational(self, operation: str) -> None:
        """Classification operations only make sense for an irrational base (g >= 1)."""
        if self.g < 1:
            raise UnsupportedGenus(
                f"{operation}: genus {self.g} is not supported; the exceptional set of a "
                "rational ruled surface is infinite"
            )


@dataclass(frozen=True)
class HomologyClass:
    """The class aB + bF + sum m_i E_i."""

    desc: ManifoldDescriptor
    a: int
    b: int
    m: Tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        m = tuple(self.m)
        if len(m) != self.desc.n:
            raise DimensionMismatch(
                f"class has {len(m)} exceptional coefficients but n = {self.desc.n}"
            )
        for value in (self.a, self.b, *m):
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"class coefficients must be integers, got {value!r}")
        object.__setattr__(self, "m", m)

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        _check_same(self, other)
        return HomologyClass(
            self.desc,
            self.a + other.a,
            self.b + other.b,
            tuple(x + y for x, y in zip(self.m, other.m)),
        )

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        return self + (-other)

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(self.desc, -self.a, -self.b, tuple(-x for x in self.m))

    def __mul__(self, k: int) -> "HomologyClass":
        return HomologyClass(self.desc, k * self.a, k * self.b, tuple(k * x for x in self.m))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and not any(self.m)

    def __str__(self) -> str:
        return format_class(self)


@dataclass(frozen=True)
class RationalClass:
    """A class with rational coefficients; used for Poincare duals of area vectors."""

    desc: ManifoldDescriptor
    a: Fraction
    b: Fraction
    m: Tuple[Fraction, ...] = field(default=())

    def __post_init__(self) -> None:
        m = tuple(Fraction(x) for x in self.m)
        if len(m) != self.desc.n:
            raise DimensionMismatch(
                f"class has {len(m)} exceptional coefficients but n = {self.desc.n}"
            )
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "m", m)

    @classmethod
    def from_class(cls, A: HomologyClass) -> "RationalClass":
        return cls(A.desc, Fraction(A.a), Fraction(A.b), tuple(Fraction(x) for x in A.m))

    def __add__(self, other: "RationalClass") -> "RationalClass":
        _check_same(self, other)
        return RationalClass(
            self.desc,
            self.a + other.a,
            self.b + other.b,
            tuple(x + y for x, y in zip(self.m, other.m)),
        )

    def __sub__(self, other: "RationalClass") -> "RationalClass":
        return self + other.scaled(Fraction(-1))

    def scaled(self, t: Number) -> "RationalClass":
        t = Fraction(t)
        return RationalClass(self.desc, t * self.a, t * self.b, tuple(t * x for x in self.m))


AnyClass = Union[HomologyClass, RationalClass]


def _check_same(x: AnyClass, y: AnyClass) -> None:
    if x.desc != y.desc:
        raise DimensionMismatch(f"descriptors differ: {x.desc} vs {y.desc}")


def pair(x: AnyClass, y: AnyClass) -> Number:
    """Intersection pairing a*b' + a'*b - sum m_i m'_i."""
    _check_same(x, y)
    return x.a * y.b + y.a * x.b - sum(p * q for p, q in zip(x.m, y.m))


def square(A: AnyClass) -> Number:
    return pair(A, A)


# ----- distinguished classes -----


def basis(desc: ManifoldDescriptor) -> Tuple[HomologyClass, HomologyClass, List[HomologyClass]]:
    """Return (B, F, [E_1..E_n])."""
    zero = (0,) * desc.n
    B = HomologyClass(desc, 1, 0, zero)
    F = HomologyClass(desc, 0, 1, zero)
    return B, F, [exceptional_basis_class(desc, i) for i in range(1, desc.n + 1)]


def exceptional_basis_class(desc: ManifoldDescriptor, i: int) -> HomologyClass:
    if not 1 <= i <= desc.n:
        raise DimensionMismatch(f"E{i} does not exist for n = {desc.n}")
    return HomologyClass(desc, 0, 0, tuple(1 if j == i else 0 for j in range(1, desc.n + 1)))


def section_class(desc: ManifoldDescriptor, k: int, subset: Iterable[int]) -> HomologyClass:
    """B + kF - sum_{i in subset} E_i (subset uses 1-based indices)."""
    chosen = set(subset)
    for i in chosen:
        if not 1 <= i <= desc.n:
            raise DimensionMismatch(f"E{i} does not exist for n = {desc.n}")
    return HomologyClass(desc, 1, k, tuple(-1 if j in chosen else 0 for j in range(1, desc.n + 1)))


def canonical_class(desc: ManifoldDescriptor) -> HomologyClass:
    """K = -2B + (2g-2)F + sum E_i, pinned down by adjunction on B, F and the E_i."""
    return HomologyClass(desc, -2, 2 * desc.g - 2, (1,) * desc.n)


def reduction_classes(desc: ManifoldDescriptor) -> List[HomologyClass]:
    """Square -2 classes cutting out the reduced region, normalized to pair >= 0 on it.

    F - E_1 - E_2 (when n >= 2) followed by E_j - E_i for j < i in lexicographic order.
    """
    out: List[HomologyClass] = []
    if desc.n >= 2:
        out.append(HomologyClass(desc, 0, 1, (-1, -1) + (0,) * (desc.n - 2)))
    for j in range(1, desc.n + 1):
        for i in range(j + 1, desc.n + 1):
            out.append(exceptional_basis_class(desc, j) - exceptional_basis_class(desc, i))
    return out


# ----- numerical invariants -----


def adjunction_genus(A: HomologyClass) -> int:
    """1 + (A.A + K.A)/2; defined for every lattice class (the zero class has genus 1)."""
    numerator = square(A) + pair(canonical_class(A.desc), A)
    # sum m_i(1 - m_i) is always even, so the numerator is too
    assert numerator % 2 == 0, f"odd adjunction numerator for {format_class(A)}"
    return 1 + numerator // 2


def riemann_index(A: HomologyClass) -> int:
    """2g(A) - 2 - 2 K.A for the embedded representative of A."""
    return 2 * adjunction_genus(A) - 2 - 2 * pair(canonical_class(A.desc), A)


def codim(A: HomologyClass) -> int:
    """Stratum codimension 2(-A.A - 1 + g(A)), equal to K.A - A.A and to -index."""
    return 2 * (-square(A) - 1 + adjunction_genus(A))


def is_exceptional_class(A: HomologyClass) -> bool:
    """Numerical test: square -1 and K-pairing -1."""
    return square(A) == -1 and pair(canonical_class(A.desc), A) == -1


def is_reduction_class(A: HomologyClass) -> bool:
    return A in reduction_classes(A.desc)


def is_section_type(A: HomologyClass) -> bool:
    """B + kF - sum_{i in I} E_i: B-coefficient 1 and every E-coefficient in {0, -1}."""
    return A.a == 1 and all(x in (0, -1) for x in A.m)


def is_fiber_type(A: HomologyClass) -> bool:
    return A.a == 0


def section_subset(A: HomologyClass) -> Tuple[int, ...]:
    """The 1-based indices i with E-coefficient -1."""
    return tuple(i for i, x in enumerate(A.m, start=1) if x == -1)


def class_sort_key(A: HomologyClass) -> tuple:
    """Canonical order for section classes: k first, then the index set lexicographically."""
    return (A.a, A.b, section_subset(A), tuple(-x for x in A.m))


# ----- text form -----


def format_class(A: HomologyClass) -> str:
    """Canonical text: terms in B, F, E_1..E_n order, unit coefficients omitted, zero is "0"."""
    terms: List[Tuple[int, str]] = [(A.a, "B"), (A.b, "F")]
    terms += [(x, f"E{i}") for i, x in enumerate(A.m, start=1)]
    out = ""
    for coeff, label in terms:
        if coeff == 0:
            continue
        magnitude = "" if abs(coeff) == 1 else str(abs(coeff))
        if not out:
            out = ("-" if coeff < 0 else "") + magnitude + label
        else:
            out += (" - " if coeff < 0 else " + ") + magnitude + label
    return out or "0"


def _tokenize(text: str) -> List[Tuple[str, object, int]]:
    tokens: List[Tuple[str, object, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j]), i))
            i = j
            continue
        if ch in "BF":
            tokens.append(("sym", ch, i))
            i += 1
            continue
        if ch == "E":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("E must be followed by an index", i)
            tokens.append(("exc", int(text[i + 1 : j]), i))
            i = j
            continue
        if ch in "+-":
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


def parse_class(text: str, desc: ManifoldDescriptor) -> HomologyClass:
    """Parse ``term (('+'|'-') term)*`` with an optional leading sign.

    A term is ``[coeff](B|F|E<index>)`` or a bare coefficient; only a bare 0 is meaningful.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty class", 0)
    a, b = 0, 0
    m = [0] * desc.n
    pos = 0
    sign = 1
    if tokens[0][0] == "op":
        sign = -1 if tokens[0][1] == "-" else 1
        pos = 1
    while True:
        if pos >= len(tokens):
            raise ParseError("expected a term", len(text))
        kind, value, where = tokens[pos]
        coeff = None
        if kind == "num":
            coeff = value
            pos += 1
        if pos < len(tokens) and tokens[pos][0] in ("sym", "exc"):
            kind, value, where = tokens[pos]
            pos += 1
            amount = sign * (1 if coeff is None else coeff)
            if kind == "sym":
                if value == "B":
                    a += amount
                else:
                    b += amount
            else:
                if value < 1:
                    raise ParseError("exceptional indices start at 1", where)
                if value > desc.n:
                    raise DimensionMismatch(f"E{value} does not exist for n = {desc.n}")
                m[value - 1] += amount
        elif coeff is None:
            raise ParseError("expected a term", where)
        elif coeff != 0:
            raise ParseError("a class has no constant term", where)
        if pos == len(tokens):
            break
        kind, value, where = tokens[pos]
        if kind != "op":
            raise ParseError("expected '+' or '-'", where)
        sign = -1 if value == "-" else 1
        pos += 1
    return HomologyClass(desc, a, b, tuple(m))


def parse_classes(texts: Sequence[str], desc: ManifoldDescriptor) -> List[HomologyClass]:
    return [parse_class(t, desc) for t in texts]
