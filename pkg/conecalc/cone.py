"""Symplectic cone membership, chamber signatures and wall scans.

A cohomology class is recorded by its areas u = (mu, f, c_1..c_n) on B, F, E_1..E_n. All
arithmetic is exact (``fractions.Fraction``); nothing here ever sees a float.
"""

from __future__ import annotations

import itertools
import logging
import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterator, List, Literal, Mapping, Optional, Sequence, Tuple

from conecalc.config import MAX_ENUMERATION_N, get_settings
from conecalc.errors import (
    BadSlice,
    BoundTooLarge,
    DegenerateSegment,
    DimensionMismatch,
    NotInCone,
    NotNormalized,
    ParseError,
)
from conecalc.homlattice import (
    HomologyClass,
    ManifoldDescriptor,
    RationalClass,
    class_sort_key,
    exceptional_basis_class,
    format_class,
    reduction_classes,
    section_class,
)

logger = logging.getLogger("conecalc.cone")

WallKind = Literal["interior", "extremal", "reduction"]
_KIND_ORDER = {"interior": 0, "extremal": 1, "reduction": 2}


@dataclass(frozen=True)
class AreaVector:
    """Areas (mu, f, c_1..c_n) of B, F, E_1..E_n; f > 0 always."""

    mu: Fraction
    f: Fraction
    c: Tuple[Fraction, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", Fraction(self.mu))
        object.__setattr__(self, "f", Fraction(self.f))
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))
        if self.f <= 0:
            raise ValueError(f"fiber area must be positive, got {self.f}")

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def is_normalized(self) -> bool:
        return self.f == 1

    def __str__(self) -> str:
        return format_area_vector(self)


def normalized(mu, c: Sequence = ()) -> AreaVector:
    """Shorthand for (mu, 1, c)."""
    return AreaVector(Fraction(mu), Fraction(1), tuple(Fraction(x) for x in c))


def _check_dims(u: AreaVector, desc: ManifoldDescriptor) -> None:
    if u.n != desc.n:
        raise DimensionMismatch(f"area vector has {u.n} blow-up sizes but n = {desc.n}")


def _require_normalized(u: AreaVector, operation: str) -> None:
    if not u.is_normalized:
        raise NotNormalized(f"{operation}: expected f = 1, got f = {u.f}")


def area(u: AreaVector, A: HomologyClass) -> Fraction:
    """a*mu + b*f + sum m_i c_i."""
    if u.n != A.desc.n:
        raise DimensionMismatch(f"area vector has {u.n} blow-up sizes but n = {A.desc.n}")
    return A.a * u.mu + A.b * u.f + sum((x * ci for x, ci in zip(A.m, u.c)), Fraction(0))


def pd_class(u: AreaVector, desc: ManifoldDescriptor) -> RationalClass:
    """The rational class P with P.X = area(X) for every X: fB + muF - sum c_i E_i."""
    _check_dims(u, desc)
    return RationalClass(desc, u.f, u.mu, tuple(-x for x in u.c))


def self_square(u: AreaVector) -> Fraction:
    """u.u = 2 mu f - sum c_i^2."""
    return 2 * u.mu * u.f - sum((x * x for x in u.c), Fraction(0))


# ----- text form -----

_RAT = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str, position: int = 0) -> Fraction:
    text = text.strip()
    if not _RAT.match(text):
        raise ParseError(f"not a rational number: {text!r}", position)
    _, _, denominator = text.partition("/")
    if denominator and int(denominator) == 0:
        raise ParseError(f"zero denominator in {text!r}", position + text.index("/") + 1)
    return Fraction(text)


def parse_area_vector(text: str) -> AreaVector:
    """Parse ``mu=<rat> [f=<rat>] c=<rat>,<rat>,...``; f defaults to 1."""
    values: Dict[str, object] = {}
    for match in re.finditer(r"\S+", text):
        token, where = match.group(0), match.start()
        key, sep, raw = token.partition("=")
        if not sep or key not in ("mu", "f", "c"):
            raise ParseError(f"expected mu=, f= or c=, got {token!r}", where)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", where)
        offset = where + len(key) + 1
        if key == "c":
            parts = raw.split(",") if raw else []
            cs = []
            for part in parts:
                cs.append(parse_rational(part, offset))
                offset += len(part) + 1
            values["c"] = tuple(cs)
        else:
            values[key] = parse_rational(raw, offset)
    if "mu" not in values:
        raise ParseError("missing mu=", len(text))
    f = values.get("f", Fraction(1))
    if f <= 0:  # type: ignore[operator]
        raise ParseError("f must be positive", text.find("f="))
    return AreaVector(values["mu"], f, values.get("c", ()))  # type: ignore[arg-type]


def format_area_vector(u: AreaVector) -> str:
    return f"mu={u.mu} f={u.f} c=" + ",".join(str(x) for x in u.c)


# ----- membership -----


@dataclass(frozen=True)
class Constraint:
    """One positivity condition and its value at the tested point."""

    name: str
    value: Fraction


@dataclass(frozen=True)
class ConeReport:
    status: Literal["inside", "boundary", "outside"]
    violated: Tuple[Constraint, ...] = ()

    @property
    def inside(self) -> bool:
        return self.status == "inside"


def exceptional_set(desc: ManifoldDescriptor) -> List[HomologyClass]:
    """Exceptional sphere classes of an irrational ruled surface: E_i then F - E_i."""
    desc.require_irrational("exceptional_set")
    es = [exceptional_basis_class(desc, i) for i in range(1, desc.n + 1)]
    F = HomologyClass(desc, 0, 1, (0,) * desc.n)
    return es + [F - e for e in es]


def cone_contains(u: AreaVector, desc: ManifoldDescriptor) -> ConeReport:
    """Positive square and positive area on every exceptional class."""
    desc.require_irrational("cone_contains")
    _check_dims(u, desc)
    constraints = [Constraint("u.u", self_square(u))]
    constraints += [
        Constraint(f"area({format_class(E)})", area(u, E)) for E in exceptional_set(desc)
    ]
    negative = tuple(x for x in constraints if x.value < 0)
    zero = tuple(x for x in constraints if x.value == 0)
    if negative:
        return ConeReport("outside", negative + zero)
    if zero:
        return ConeReport("boundary", zero)
    return ConeReport("inside")


def require_in_cone(u: AreaVector, desc: ManifoldDescriptor, operation: str) -> None:
    report = cone_contains(u, desc)
    if not report.inside:
        detail = ", ".join(f"{x.name} = {x.value}" for x in report.violated)
        raise NotInCone(
            f"{operation}: {format_area_vector(u)} is {report.status} the cone ({detail})"
        )


@dataclass(frozen=True)
class ReducedReport:
    reduced: bool
    witnesses: Tuple[str, ...] = ()
    on_reduction_wall: bool = False


def is_reduced(u: AreaVector) -> ReducedReport:
    """mu > 0, 0 < c_i < 1, c decreasing and c_1 + c_2 <= 1."""
    _require_normalized(u, "is_reduced")
    witnesses: List[str] = []
    if u.mu <= 0:
        witnesses.append(f"mu = {u.mu} is not positive")
    for i, ci in enumerate(u.c, start=1):
        if not 0 < ci < 1:
            witnesses.append(f"c{i} = {ci} is outside (0, 1)")
    for i in range(1, u.n):
        if u.c[i - 1] < u.c[i]:
            witnesses.append(f"ordering: c{i} = {u.c[i - 1]} < c{i + 1} = {u.c[i]}")
    if u.n >= 2 and u.c[0] + u.c[1] > 1:
        witnesses.append(f"c1 + c2 = {u.c[0] + u.c[1]} > 1")
    desc = ManifoldDescriptor(0, u.n)
    on_wall = any(area(u, D) == 0 for D in reduction_classes(desc))
    return ReducedReport(not witnesses, tuple(witnesses), on_wall)


# ----- enumeration -----


def index_subsets(n: int) -> Iterator[Tuple[int, ...]]:
    limit = get_settings().max_subsets
    if n > MAX_ENUMERATION_N or (1 << n) > limit:
        logger.warning("subset enumeration refused: n=%d max_subsets=%d", n, limit)
        raise BoundTooLarge(
            f"2^{n} subsets exceed the enumeration guard (n <= {MAX_ENUMERATION_N}, "
            f"CONECALC_MAX_SUBSETS = {limit})"
        )
    for size in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), size)


def max_negative_k(desc: ManifoldDescriptor, size: int) -> int:
    """Largest k with codim(B + kF - sum of `size` E_i) > 0, i.e. k < (size + g - 1)/2."""
    return (size + desc.g - 2) // 2


@dataclass(frozen=True)
class ChamberSignature:
    """Positive-area section classes of positive codimension; the chamber ID.

    ``on_walls`` lists the classes of the same family with area exactly 0 (the point sits on
    their walls); it does not take part in equality.
    """

    classes: Tuple[HomologyClass, ...]
    on_walls: Tuple[HomologyClass, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, A: object) -> bool:
        return A in self.classes

    def issubset(self, other: "ChamberSignature") -> bool:
        return set(self.classes) <= set(other.classes)


def section_candidates(u: AreaVector, desc: ManifoldDescriptor) -> ChamberSignature:
    """All B + kF - sum_{i in I} E_i with codim > 0 and positive area at u."""
    _require_normalized(u, "section_candidates")
    require_in_cone(u, desc, "section_candidates")
    members: List[HomologyClass] = []
    walls: List[HomologyClass] = []
    count = 0
    for subset in index_subsets(desc.n):
        count += 1
        s = sum((u.c[i - 1] for i in subset), Fraction(0))
        k_max = max_negative_k(desc, len(subset))
        # area mu + k - s > 0
        k_min = math.floor(s - u.mu) + 1
        for k in range(k_min, k_max + 1):
            members.append(section_class(desc, k, subset))
        edge = s - u.mu
        if edge.denominator == 1 and edge <= k_max:
            walls.append(section_class(desc, int(edge), subset))
    logger.debug("section_candidates: n=%d subsets=%d members=%d", desc.n, count, len(members))
    return ChamberSignature(
        tuple(sorted(members, key=class_sort_key)), tuple(sorted(walls, key=class_sort_key))
    )


def reduction_signs(u: AreaVector, desc: ManifoldDescriptor) -> Tuple[int, ...]:
    out = []
    for D in reduction_classes(desc):
        value = area(u, D)
        out.append((value > 0) - (value < 0))
    return tuple(out)


def same_chamber(u: AreaVector, v: AreaVector, desc: ManifoldDescriptor) -> bool:
    """Equal signatures and the same side of every reduction wall."""
    if section_candidates(u, desc) != section_candidates(v, desc):
        return False
    return reduction_signs(u, desc) == reduction_signs(v, desc)


def chamber_interval(u: AreaVector, desc: ManifoldDescriptor) -> Tuple[Fraction, Fraction]:
    """The interval (lo, hi] of mu on the horizontal line through u with u's signature.

    ``lo`` is clamped at the cone bound sum c_i^2 / 2 where u.u vanishes.
    """
    _require_normalized(u, "chamber_interval")
    require_in_cone(u, desc, "chamber_interval")
    lo = sum((x * x for x in u.c), Fraction(0)) / 2
    hi: Optional[Fraction] = None
    for subset in index_subsets(desc.n):
        s = sum((u.c[i - 1] for i in subset), Fraction(0))
        k_max = max_negative_k(desc, len(subset))
        k_min = math.floor(s - u.mu) + 1
        if k_min <= k_max:
            # the member with the smallest k is the first to lose its area as mu decreases
            lo = max(lo, s - k_min)
        k_up = min(k_max, math.floor(s - u.mu))
        hi = s - k_up if hi is None else min(hi, s - k_up)
    assert hi is not None
    return lo, hi


def fiber_curve_classes(
    u: AreaVector, desc: ManifoldDescriptor, coeff_bound: Optional[int] = None
) -> Tuple[List[HomologyClass], bool]:
    """Fiber-type genus-0 classes of negative square with positive area at u.

    Genus 0 forces b = 1 - sum m_i(m_i+1)/2, so the area is 1 - sum h_i(m_i) with
    h_i(m) = m(m+1)/2 - m c_i >= 0 for 0 < c_i < 1; |m_i| >= 2 already gives h_i > 1, hence
    every such class has m in {-1, 0, 1}^n. Returns the classes within ``coeff_bound`` and a
    flag telling whether nothing was cut off by the bound.
    """
    _require_normalized(u, "fiber_curve_classes")
    require_in_cone(u, desc, "fiber_curve_classes")
    found: List[HomologyClass] = []
    truncated = False

    def h(i: int, x: int) -> Fraction:
        return Fraction(x * (x + 1), 2) - x * u.c[i]

    def walk(i: int, prefix: Tuple[int, ...], used: Fraction) -> None:
        nonlocal truncated
        if i == desc.n:
            if not any(prefix):
                return
            b = 1 - sum(x * (x + 1) // 2 for x in prefix)
            if coeff_bound is not None and (
                abs(b) > coeff_bound or any(abs(x) > coeff_bound for x in prefix)
            ):
                truncated = True
                return
            found.append(HomologyClass(desc, 0, b, prefix))
            return
        for x in (-1, 0, 1):
            total = used + h(i, x)
            if total < 1:
                walk(i + 1, prefix + (x,), total)

    walk(0, (), Fraction(0))
    found.sort(key=class_sort_key)
    logger.debug("fiber_curve_classes: n=%d found=%d truncated=%s", desc.n, len(found), truncated)
    return found, not truncated


def negative_fiber_classes(u: AreaVector, desc: ManifoldDescriptor) -> List[HomologyClass]:
    """Diagnostic: every fiber-type negative class of genus 0 with positive area."""
    classes, _ = fiber_curve_classes(u, desc)
    return classes


# ----- wall scans -----


@dataclass(frozen=True)
class WallCrossing:
    parameter: Fraction
    wall_class: HomologyClass
    kind: WallKind
    point: AreaVector


def _crossing(a0: Fraction, a1: Fraction) -> Optional[Fraction]:
    if a0 == a1:
        return None
    s = a0 / (a0 - a1)
    return s if 0 < s <= 1 else None


def _lerp(u0: AreaVector, u1: AreaVector, s: Fraction) -> AreaVector:
    return AreaVector(
        (1 - s) * u0.mu + s * u1.mu,
        (1 - s) * u0.f + s * u1.f,
        tuple((1 - s) * x + s * y for x, y in zip(u0.c, u1.c)),
    )


def segment_walls(u0: AreaVector, u1: AreaVector, desc: ManifoldDescriptor) -> List[WallCrossing]:
    """Every parameter s in (0, 1] where a wall class has area exactly 0 on u0 -> u1.

    Classes whose area vanishes along the whole segment are contained walls, not crossings,
    and are skipped.
    """
    desc.require_irrational("segment_walls")
    if u0.n != u1.n:
        raise DimensionMismatch(f"endpoints have {u0.n} and {u1.n} blow-up sizes")
    _check_dims(u0, desc)
    _require_normalized(u0, "segment_walls")
    _require_normalized(u1, "segment_walls")
    if u0 == u1:
        raise DegenerateSegment("segment endpoints coincide")

    found: Dict[Tuple[Fraction, HomologyClass], WallCrossing] = {}

    def consider(A: HomologyClass, kind: WallKind) -> None:
        s = _crossing(area(u0, A), area(u1, A))
        if s is not None and (s, A) not in found:
            found[(s, A)] = WallCrossing(s, A, kind, _lerp(u0, u1, s))

    for E in exceptional_set(desc):
        consider(E, "extremal")
    for D in reduction_classes(desc):
        consider(D, "reduction")
    for subset in index_subsets(desc.n):
        # area along the segment is d(s) + k with d linear
        d0 = u0.mu - sum((u0.c[i - 1] for i in subset), Fraction(0))
        d1 = u1.mu - sum((u1.c[i - 1] for i in subset), Fraction(0))
        if d0 == d1:
            continue
        k_lo = math.ceil(min(-d0, -d1))
        k_hi = min(math.floor(max(-d0, -d1)), max_negative_k(desc, len(subset)))
        for k in range(k_lo, k_hi + 1):
            consider(section_class(desc, k, subset), "interior")

    out = sorted(
        found.values(),
        key=lambda w: (w.parameter, _KIND_ORDER[w.kind], class_sort_key(w.wall_class)),
    )
    logger.info("segment_walls: %s -> %s crossings=%d", u0, u1, len(out))
    return out


def ray_walls(u: AreaVector, mu_to: Fraction, desc: ManifoldDescriptor) -> List[WallCrossing]:
    """Horizontal scan from u to (mu_to, 1, c)."""
    return segment_walls(u, replace(u, mu=Fraction(mu_to)), desc)


# ----- two-dimensional slices -----

Point = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class WallLine:
    """A wall restricted to a slice.

    ``coeffs``/``const`` give the full equation coeffs . (mu, c_1..c_n) + const = 0 (with
    f = 1); ``restricted`` is the same equation in the two free coordinates; ``segment`` is
    the part of the line inside the window.
    """

    wall_class: HomologyClass
    kind: WallKind
    coeffs: Tuple[int, ...]
    const: int
    restricted: Tuple[Fraction, Fraction, Fraction]
    segment: Tuple[Point, Point]


@dataclass(frozen=True)
class SliceArrangement:
    desc: ManifoldDescriptor
    free: Tuple[str, str]
    fixed: Tuple[Tuple[str, Fraction], ...]
    window: Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]
    lines: Tuple[WallLine, ...]

    def count(self, kind: WallKind) -> int:
        return sum(1 for line in self.lines if line.kind == kind)


def coordinate_names(desc: ManifoldDescriptor) -> List[str]:
    return ["mu"] + [f"c{i}" for i in range(1, desc.n + 1)]


def _clip(
    cx: Fraction,
    cy: Fraction,
    k: Fraction,
    box: Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]],
) -> Optional[Tuple[Point, Point]]:
    """Intersect the line cx*x + cy*y + k = 0 with a closed box."""
    (xlo, xhi), (ylo, yhi) = box
    if cy == 0:
        x = -k / cx
        if xlo <= x <= xhi:
            return (x, ylo), (x, yhi)
        return None
    # y(x) = -(k + cx x)/cy; restrict x so that ylo <= y(x) <= yhi
    lo, hi = xlo, xhi
    if cx != 0:
        xa = -(k + cy * ylo) / cx
        xb = -(k + cy * yhi) / cx
        lo, hi = max(lo, min(xa, xb)), min(hi, max(xa, xb))
    else:
        y = -k / cy
        if not ylo <= y <= yhi:
            return None
    if lo > hi:
        return None
    return (lo, -(k + cx * lo) / cy), (hi, -(k + cx * hi) / cy)


def _meets_open_cone(
    segment: Tuple[Point, Point],
    free: Tuple[str, str],
    fixed: Mapping[str, Fraction],
    n: int,
) -> bool:
    """Whether some point of the segment has 0 < c_i < 1 and u.u > 0 (f = 1).

    Along the segment every coordinate is alpha + beta*s; the strict linear constraints cut
    out an open s-interval and u.u is a concave quadratic, so its supremum there is attained
    at an endpoint or at the vertex.
    """
    (x0, y0), (x1, y1) = segment
    coords: Dict[str, Tuple[Fraction, Fraction]] = {
        name: (Fraction(value), Fraction(0)) for name, value in fixed.items()
    }
    coords[free[0]] = (x0, x1 - x0)
    coords[free[1]] = (y0, y1 - y0)
    s_lo, s_hi = Fraction(0), Fraction(1)
    lo_open = hi_open = False
    for i in range(1, n + 1):
        alpha, beta = coords[f"c{i}"]
        for a, b in ((alpha, beta), (1 - alpha, -beta)):
            # a + b s > 0
            if b == 0:
                if a <= 0:
                    return False
            elif b > 0:
                bound = -a / b
                if bound >= s_lo:
                    s_lo, lo_open = bound, True
            else:
                bound = -a / b
                if bound <= s_hi:
                    s_hi, hi_open = bound, True
    if s_lo > s_hi or (s_lo == s_hi and (lo_open or hi_open)):
        return False

    def q(s: Fraction) -> Fraction:
        mu = coords["mu"][0] + coords["mu"][1] * s
        total = 2 * mu
        for i in range(1, n + 1):
            alpha, beta = coords[f"c{i}"]
            total -= (alpha + beta * s) ** 2
        return total

    candidates = [s_lo, s_hi]
    # q(s) = q0 + q1 s - q2 s^2 with q2 = sum beta_i^2 >= 0
    q2 = sum((coords[f"c{i}"][1] ** 2 for i in range(1, n + 1)), Fraction(0))
    if q2 > 0:
        q1 = 2 * coords["mu"][1] - 2 * sum(
            (coords[f"c{i}"][0] * coords[f"c{i}"][1] for i in range(1, n + 1)), Fraction(0)
        )
        vertex = q1 / (2 * q2)
        if s_lo < vertex < s_hi:
            candidates.append(vertex)
    return max(q(s) for s in candidates) > 0


def slice_arrangement(
    desc: ManifoldDescriptor,
    fixed: Mapping[str, Fraction],
    window: Mapping[str, Tuple[Fraction, Fraction]],
) -> SliceArrangement:
    """Exact wall lines of the two-dimensional slice through ``fixed`` inside ``window``.

    Coordinates are named mu, c1..cn. Interior walls are kept only where they meet the open
    cone; extremal and reduction lines are kept whenever they meet the window.
    """
    desc.require_irrational("slice_arrangement")
    names = coordinate_names(desc)
    unknown = [name for name in list(fixed) + list(window) if name not in names]
    if unknown:
        raise BadSlice(f"unknown coordinates: {', '.join(sorted(set(unknown)))}")
    free = [name for name in names if name not in fixed]
    if len(free) != 2:
        raise BadSlice(f"a slice needs exactly 2 free coordinates, got {len(free)}: {free}")
    fixed_q = {name: Fraction(value) for name, value in fixed.items()}
    box = []
    for name in free:
        if name not in window:
            raise BadSlice(f"window is missing a range for {name}")
        lo, hi = (Fraction(x) for x in window[name])
        if lo >= hi:
            raise BadSlice(f"empty window range for {name}: [{lo}, {hi}]")
        box.append((lo, hi))
    box_t = (box[0], box[1])
    x_name, y_name = free

    def full_equation(A: HomologyClass) -> Tuple[Tuple[int, ...], int]:
        return (A.a,) + A.m, A.b

    def restrict(coeffs: Tuple[int, ...], const: int) -> Tuple[Fraction, Fraction, Fraction]:
        cx = cy = Fraction(0)
        k = Fraction(const)
        for name, coeff in zip(names, coeffs):
            if name == x_name:
                cx += coeff
            elif name == y_name:
                cy += coeff
            else:
                k += coeff * fixed_q[name]
        return cx, cy, k

    lines: List[WallLine] = []

    def add(A: HomologyClass, kind: WallKind) -> None:
        coeffs, const = full_equation(A)
        cx, cy, k = restrict(coeffs, const)
        if cx == 0 and cy == 0:
            return
        segment = _clip(cx, cy, k, box_t)
        if segment is None:
            return
        if kind == "interior" and not _meets_open_cone(segment, (x_name, y_name), fixed_q, desc.n):
            return
        lines.append(WallLine(A, kind, coeffs, const, (cx, cy, k), segment))

    for subset in index_subsets(desc.n):
        k_max = max_negative_k(desc, len(subset))
        base = section_class(desc, 0, subset)
        coeffs, _ = full_equation(base)
        cx, cy, k0 = restrict(coeffs, 0)
        corners = [cx * x + cy * y + k0 for x in box_t[0] for y in box_t[1]]
        k_lo = math.ceil(-max(corners))
        k_hi = min(math.floor(-min(corners)), k_max)
        for k in range(k_lo, k_hi + 1):
            add(section_class(desc, k, subset), "interior")
    for E in exceptional_set(desc):
        add(E, "extremal")
    for D in reduction_classes(desc):
        add(D, "reduction")

    logger.info(
        "slice_arrangement: free=%s,%s lines=%d (interior=%d)",
        x_name,
        y_name,
        len(lines),
        sum(1 for line in lines if line.kind == "interior"),
    )
    return SliceArrangement(
        desc,
        (x_name, y_name),
        tuple(sorted(fixed_q.items())),
        box_t,
        tuple(lines),
    )
