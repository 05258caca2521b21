"""Degenerations of exceptional classes and the stratum classifier.

An exceptional class E may break into fiber-type rational curves of negative square,
E = sum r_i C_i. A two-part break S + X with S.S = -2 and X exceptional is mild; anything
else is bad. Together with the deep section classes (index <= -2) a profile of such data
lands in one cell of the partition table: top, one of the codimension-2 strata, or high.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Literal, Optional, Sequence, Tuple, Union

from conecalc.cone import (
    AreaVector,
    area,
    exceptional_set,
    fiber_curve_classes,
    require_in_cone,
)
from conecalc.errors import (
    InconsistentProfile,
    InvalidDecomposition,
    NotAdmissible,
    ParameterOutOfRange,
)
from conecalc.homlattice import (
    HomologyClass,
    ManifoldDescriptor,
    adjunction_genus,
    class_sort_key,
    codim,
    format_class,
    is_exceptional_class,
    is_fiber_type,
    is_section_type,
    pair,
    riemann_index,
    square,
)

logger = logging.getLogger("conecalc.strata")

Part = Tuple[HomologyClass, int]


def _part_key(part: Part) -> tuple:
    # E1 - E2 before E2: larger leading E-coefficients first
    cls, mult = part
    return (cls.a, cls.b, tuple(-x for x in cls.m), mult)


@dataclass(frozen=True)
class Decomposition:
    """total = sum mult * cls over parts; parts are kept in canonical order."""

    total: HomologyClass
    parts: Tuple[Part, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.parts, key=_part_key))
        object.__setattr__(self, "parts", ordered)

    @property
    def is_trivial(self) -> bool:
        return self.parts == ((self.total, 1),)

    def __str__(self) -> str:
        terms = [
            (f"{mult}*({format_class(cls)})" if mult > 1 else f"({format_class(cls)})")
            for cls, mult in self.parts
        ]
        return f"{format_class(self.total)} = " + " + ".join(terms)


@dataclass(frozen=True)
class Embedded:
    kind: Literal["embedded"] = "embedded"


@dataclass(frozen=True)
class Mild:
    """E = S + X with S.S = -2 and X exceptional."""

    S: HomologyClass
    X: HomologyClass
    kind: Literal["mild"] = "mild"


@dataclass(frozen=True)
class Bad:
    dec: Decomposition
    kind: Literal["bad"] = "bad"


ExceptionalStatus = Union[Embedded, Mild, Bad]


@dataclass(frozen=True)
class JProfile:
    """Which exceptional classes degenerate and which section classes are asserted embedded."""

    exc: Dict[HomologyClass, ExceptionalStatus]
    sections: FrozenSet[HomologyClass] = field(default_factory=frozenset)

    @classmethod
    def all_embedded(
        cls, desc: ManifoldDescriptor, sections: Sequence[HomologyClass] = ()
    ) -> "JProfile":
        return cls({E: Embedded() for E in exceptional_set(desc)}, frozenset(sections))


StratumKind = Literal["top", "cod2-mild", "cod2-section", "high"]


@dataclass(frozen=True)
class StratumLabel:
    kind: StratumKind
    codim_lower_bound: int
    # the degenerating exceptional class (cod2-mild) or the deep section (cod2-section)
    witness: Optional[HomologyClass] = None
    witnesses: Tuple[Tuple[str, int], ...] = ()


@dataclass(frozen=True)
class DecompositionSearch:
    decompositions: Tuple[Decomposition, ...]
    # False when the coefficient window or the part limit may have cut something off
    exhaustive: bool


@dataclass(frozen=True)
class CoverPairing:
    value: Fraction
    forced_positive: bool


# ----- decompositions -----


def validate_decomposition(dec: Decomposition) -> None:
    total = dec.total
    if not is_exceptional_class(total):
        raise InvalidDecomposition(f"{format_class(total)} is not an exceptional class")
    if not dec.parts:
        raise InvalidDecomposition("decomposition has no parts")
    acc = HomologyClass(total.desc, 0, 0, (0,) * total.desc.n)
    for cls, mult in dec.parts:
        if mult < 1:
            raise InvalidDecomposition(f"multiplicity {mult} of {format_class(cls)} must be >= 1")
        if not is_fiber_type(cls):
            raise InvalidDecomposition(f"{format_class(cls)} is not fiber-type")
        if adjunction_genus(cls) != 0:
            raise InvalidDecomposition(f"{format_class(cls)} has genus {adjunction_genus(cls)}")
        if square(cls) >= 0:
            raise InvalidDecomposition(f"{format_class(cls)} has square {square(cls)} >= 0")
        acc = acc + cls * mult
    if acc != total:
        raise InvalidDecomposition(f"parts sum to {format_class(acc)}, not {format_class(total)}")


def enumerate_decompositions(
    E: HomologyClass,
    u: AreaVector,
    max_parts: int,
    coeff_bound: int,
) -> DecompositionSearch:
    """Every E = sum mult * C over fiber-type genus-0 negative classes of positive area at u.

    At most ``max_parts`` distinct parts, coefficients of each part within ``coeff_bound``.
    The trivial decomposition is always part of the result.
    """
    desc = E.desc
    if max_parts < 1 or coeff_bound < 1:
        raise ParameterOutOfRange(
            f"bounds must be >= 1 (max_parts={max_parts}, coeff_bound={coeff_bound})"
        )
    if E not in exceptional_set(desc):
        raise InvalidDecomposition(f"{format_class(E)} is not an exceptional sphere class")
    require_in_cone(u, desc, "enumerate_decompositions")

    candidates, window_ok = fiber_curve_classes(u, desc, coeff_bound)
    target = area(u, E)
    areas = {C: area(u, C) for C in candidates}
    candidates = [C for C in candidates if areas[C] <= target]

    found: List[Decomposition] = []
    truncated = False

    def walk(start: int, remaining: HomologyClass, left: Fraction, parts: List[Part]) -> None:
        nonlocal truncated
        if left == 0:
            if remaining.is_zero():
                found.append(Decomposition(E, tuple(parts)))
            return
        for j in range(start, len(candidates)):
            C = candidates[j]
            a = areas[C]
            if a > left:
                continue
            if len(parts) == max_parts:
                truncated = True
                return
            mult = 1
            while mult * a <= left:
                parts.append((C, mult))
                walk(j + 1, remaining - C * mult, left - mult * a, parts)
                parts.pop()
                mult += 1

    walk(0, E, target, [])
    found.sort(key=lambda d: (len(d.parts), [_part_key(p) for p in d.parts]))
    logger.info(
        "enumerate_decompositions: %s candidates=%d found=%d exhaustive=%s",
        format_class(E),
        len(candidates),
        len(found),
        window_ok and not truncated,
    )
    return DecompositionSearch(tuple(found), window_ok and not truncated)


def classify_decomposition(dec: Decomposition) -> ExceptionalStatus:
    validate_decomposition(dec)
    if dec.is_trivial:
        return Embedded()
    if len(dec.parts) == 2 and all(mult == 1 for _, mult in dec.parts):
        by_square = {square(cls): cls for cls, _ in dec.parts}
        if set(by_square) == {-2, -1}:
            S, X = by_square[-2], by_square[-1]
            if pair(X, dec.total) == 0:
                assert S + X == dec.total and pair(S, X) == 1
                return Mild(S, X)
    return Bad(dec)


def check_mild_pair(E: HomologyClass, S: HomologyClass, X: HomologyClass) -> Optional[str]:
    """None when (S, X) is a mild degeneration of E, otherwise the failed condition."""
    if square(S) != -2 or adjunction_genus(S) != 0:
        return f"{format_class(S)} is not a square -2 sphere class"
    if not is_exceptional_class(X):
        return f"{format_class(X)} is not exceptional"
    if S + X != E:
        return f"{format_class(S)} + {format_class(X)} != {format_class(E)}"
    if pair(S, X) != 1:
        return f"S.X = {pair(S, X)}, expected 1"
    if pair(X, E) != 0:
        return f"X.E = {pair(X, E)}, expected 0"
    return None


def cover_pairing(c_prime: HomologyClass, m: int) -> CoverPairing:
    """K.C' forced on a genus-0 class C' whose m-fold cover appears in a stable curve."""
    value = Fraction(-(2 + m * m * square(c_prime)), m)
    return CoverPairing(value, value > 0 and value.denominator == 1)


def admissible_codim(classes: Sequence[HomologyClass]) -> int:
    """Sum of codimensions of a collection with pairwise nonnegative intersections."""
    for A in classes:
        if codim(A) <= 0:
            raise NotAdmissible(f"{format_class(A)} has codim {codim(A)} <= 0", (A, A))
    for i, A in enumerate(classes):
        for B in classes[i + 1 :]:
            if pair(A, B) < 0:
                raise NotAdmissible(
                    f"{format_class(A)} . {format_class(B)} = {pair(A, B)} < 0", (A, B)
                )
    return sum(codim(A) for A in classes)


# ----- profiles -----


def _deep_sections(p: JProfile) -> List[HomologyClass]:
    return sorted((s for s in p.sections if riemann_index(s) <= -2), key=class_sort_key)


def _validate_profile(p: JProfile, u: AreaVector, desc: ManifoldDescriptor) -> None:
    expected = set(exceptional_set(desc))
    if set(p.exc) != expected:
        missing = sorted(format_class(E) for E in expected - set(p.exc))
        extra = sorted(format_class(E) for E in set(p.exc) - expected)
        raise InconsistentProfile(f"profile keys differ: missing {missing}, extra {extra}")
    require_in_cone(u, desc, "classify_profile")

    def positive(cls: HomologyClass, what: str) -> None:
        if area(u, cls) <= 0:
            raise InconsistentProfile(f"{what} {format_class(cls)} has area {area(u, cls)} <= 0")

    for s in p.sections:
        if not is_section_type(s):
            raise InconsistentProfile(f"{format_class(s)} is not a section-type class")
        positive(s, "section")
    for E, status in p.exc.items():
        if isinstance(status, Mild):
            reason = check_mild_pair(E, status.S, status.X)
            if reason:
                raise InconsistentProfile(f"mild entry for {format_class(E)}: {reason}")
            positive(status.S, "mild part")
            positive(status.X, "mild part")
        elif isinstance(status, Bad):
            if status.dec.total != E:
                raise InconsistentProfile(f"bad entry for {format_class(E)} has another total")
            try:
                actual = classify_decomposition(status.dec)
            except InvalidDecomposition as exc:
                raise InconsistentProfile(f"bad entry for {format_class(E)}: {exc}") from exc
            if not isinstance(actual, Bad):
                raise InconsistentProfile(
                    f"bad entry for {format_class(E)} is a {actual.kind} decomposition"
                )
            for cls, _ in status.dec.parts:
                positive(cls, "bad part")


def witness_codims(p: JProfile) -> List[Tuple[str, int]]:
    """Itemized codimension witnesses used for the high-stratum lower bound."""
    out: List[Tuple[str, int]] = []
    for E in sorted(p.exc, key=class_sort_key):
        status = p.exc[E]
        if isinstance(status, Mild):
            out.append((f"mild {format_class(E)}", 2))
        elif isinstance(status, Bad):
            for cls, mult in status.dec.parts:
                value = codim(cls) if square(cls) <= -2 else 0
                if mult > 1:
                    value = max(value, 2 + 2 * int(max(cover_pairing(cls, mult).value, 0)))
                if value > 0:
                    out.append((f"bad {format_class(E)} part {format_class(cls)} x{mult}", value))
    for s in _deep_sections(p):
        out.append((f"section {format_class(s)}", codim(s)))
    return out


def table_cell(p: JProfile) -> Tuple[str, str]:
    """(row, column) of the partition table.

    Rows: "none", "index=-2", "index<-2" by the deepest asserted section; columns:
    "embedded", "mild", "bad" by the worst exceptional status.
    """
    deep = _deep_sections(p)
    if not deep:
        row = "none"
    elif all(riemann_index(s) == -2 for s in deep):
        row = "index=-2"
    else:
        row = "index<-2"
    statuses = list(p.exc.values())
    if any(isinstance(s, Bad) for s in statuses):
        column = "bad"
    elif any(isinstance(s, Mild) for s in statuses):
        column = "mild"
    else:
        column = "embedded"
    return row, column


def classify_profile(p: JProfile, u: AreaVector, desc: ManifoldDescriptor) -> StratumLabel:
    _validate_profile(p, u, desc)
    mild = sorted((E for E, s in p.exc.items() if isinstance(s, Mild)), key=class_sort_key)
    bad = [E for E, s in p.exc.items() if isinstance(s, Bad)]
    deep = _deep_sections(p)

    if not bad and not deep and not mild:
        label = StratumLabel("top", 0)
    elif not bad and not deep and len(mild) == 1:
        label = StratumLabel("cod2-mild", 2, mild[0], (("mild " + format_class(mild[0]), 2),))
    elif not bad and not mild and len(deep) == 1 and riemann_index(deep[0]) == -2:
        label = StratumLabel(
            "cod2-section", 2, deep[0], (("section " + format_class(deep[0]), 2),)
        )
    else:
        items = witness_codims(p)
        label = StratumLabel("high", max(4, sum(v for _, v in items)), None, tuple(items))
    logger.info(
        "classify_profile: mild=%d bad=%d deep=%d -> %s (>= %d)",
        len(mild),
        len(bad),
        len(deep),
        label.kind,
        label.codim_lower_bound,
    )
    return label
