"""Inflation bookkeeping on cohomology classes.

Inflating along a class Z with an embedded representative adds t * PD(Z) to the class of
the form: every area changes by t * Z.X. For Z.Z < 0 the parameter is bounded by
area(Z)/(-Z.Z). Formal mode accepts the bound itself; strict mode keeps ranges open.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from conecalc.cone import (
    AreaVector,
    area,
    format_area_vector,
    index_subsets,
    is_reduced,
    max_negative_k,
    require_in_cone,
)
from conecalc.errors import (
    DimensionMismatch,
    InfeasibleCorrection,
    NonpositiveArea,
    NotMildPair,
    NotNormalized,
    NotReduced,
    ParameterOutOfRange,
    Unreachable,
)
from conecalc.homlattice import (
    HomologyClass,
    ManifoldDescriptor,
    class_sort_key,
    exceptional_basis_class,
    format_class,
    is_fiber_type,
    riemann_index,
    section_class,
    section_subset,
    square,
)
from conecalc.strata import Bad, ExceptionalStatus, JProfile, Mild, check_mild_pair

logger = logging.getLogger("conecalc.inflation")


class InflationMode(str, Enum):
    FORMAL = "formal"
    STRICT = "strict"


@dataclass(frozen=True)
class InflationStep:
    z: HomologyClass
    t: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", Fraction(self.t))


@dataclass(frozen=True)
class InflationPath:
    """Steps applied in order to ``start``; the last vector normalized is ``normalized_end``."""

    start: AreaVector
    steps: Tuple[InflationStep, ...]
    normalized_end: AreaVector


def normalize_vector(u: AreaVector) -> AreaVector:
    if u.f == 1:
        return u
    return AreaVector(u.mu / u.f, Fraction(1), tuple(x / u.f for x in u.c))


def inflation_bound(u: AreaVector, z: HomologyClass) -> Optional[Fraction]:
    """area(z)/(-z.z) when z.z < 0, None when the parameter is unbounded."""
    sq = square(z)
    if sq >= 0:
        return None
    return area(u, z) / -sq


def inflate_once(
    u: AreaVector,
    z: HomologyClass,
    t: Fraction,
    mode: InflationMode = InflationMode.FORMAL,
) -> AreaVector:
    """(mu, f, c) -> (mu + t z.b, f + t z.a, c_i - t z.m_i)."""
    if u.n != z.desc.n:
        raise DimensionMismatch(f"area vector has {u.n} blow-up sizes but n = {z.desc.n}")
    t = Fraction(t)
    a = area(u, z)
    if a <= 0:
        raise NonpositiveArea(f"inflate_once: area({format_class(z)}) = {a} <= 0")
    if t < 0:
        raise ParameterOutOfRange(f"inflate_once: t = {t} is negative", Fraction(0))
    bound = inflation_bound(u, z)
    if bound is not None:
        too_far = t >= bound if mode is InflationMode.STRICT else t > bound
        if too_far:
            closing = ")" if mode is InflationMode.STRICT else "]"
            raise ParameterOutOfRange(
                f"inflate_once: t = {t} outside [0, {bound}{closing} for {format_class(z)}",
                bound,
            )
    f = u.f + t * z.a
    if f <= 0:
        raise ParameterOutOfRange(f"inflate_once: fiber area would become {f}", bound)
    out = AreaVector(u.mu + t * z.b, f, tuple(ci - t * x for ci, x in zip(u.c, z.m)))
    logger.debug("inflate_once: %s along %s t=%s -> %s", u, format_class(z), t, out)
    return out


def apply_steps(
    u: AreaVector, steps: Sequence[InflationStep], mode: InflationMode = InflationMode.FORMAL
) -> AreaVector:
    for step in steps:
        u = inflate_once(u, step.z, step.t, mode)
    return u


def replay(path: InflationPath, mode: InflationMode = InflationMode.FORMAL) -> AreaVector:
    """Apply the recorded steps to the start vector and normalize."""
    return normalize_vector(apply_steps(path.start, path.steps, mode))


# ----- composite section inflation -----


def _require_reduced(u: AreaVector, desc: ManifoldDescriptor, operation: str) -> None:
    if not u.is_normalized:
        raise NotNormalized(f"{operation}: expected f = 1, got f = {u.f}")
    report = is_reduced(u)
    if not report.reduced:
        raise NotReduced(f"{operation}: {format_area_vector(u)}: " + "; ".join(report.witnesses))
    require_in_cone(u, desc, operation)


def descent_limit(u: AreaVector, k: int, subset: Sequence[int]) -> Fraction:
    """mu' as t -> infinity: k + sum_{i not in I} c_i."""
    chosen = set(subset)
    return k + sum((ci for i, ci in enumerate(u.c, start=1) if i not in chosen), Fraction(0))


def descent_mu(u: AreaVector, k: int, subset: Sequence[int], t: Fraction) -> Fraction:
    """Closed form (mu + t k + t sum_{i not in I} c_i)/(1 + t)."""
    t = Fraction(t)
    return (u.mu + t * descent_limit(u, k, subset)) / (1 + t)


def solve_descent_parameter(
    u: AreaVector, k: int, subset: Sequence[int], target: Fraction
) -> Fraction:
    """The t with descent_mu(u, k, I, t) == target; target must lie in (limit, mu]."""
    target = Fraction(target)
    limit = descent_limit(u, k, subset)
    if not limit < target <= u.mu:
        raise ParameterOutOfRange(
            f"target mu = {target} is not in ({limit}, {u.mu}] for k={k} I={tuple(subset)}",
            limit,
        )
    return (u.mu - target) / (target - limit)


def _descent_steps(u: AreaVector, A: HomologyClass, t: Fraction) -> List[InflationStep]:
    desc = A.desc
    chosen = set(section_subset(A))
    F = HomologyClass(desc, 0, 1, (0,) * desc.n)
    steps = [InflationStep(A, t)]
    for i in range(1, desc.n + 1):
        E = exceptional_basis_class(desc, i)
        ci = u.c[i - 1]
        if i in chosen:
            steps.append(InflationStep(E, (1 - ci) * t))
        else:
            steps.append(InflationStep(F - E, ci * t))
    return steps


def section_descent(
    u: AreaVector,
    k: int,
    subset: Sequence[int],
    t: Fraction,
    desc: ManifoldDescriptor,
    mode: InflationMode = InflationMode.FORMAL,
) -> InflationPath:
    """Inflate along B + kF - sum_I E_i by t, restore every c_i, normalize.

    Correction steps: F - E_i by c_i t for i not in I, E_i by (1 - c_i) t for i in I.
    """
    t = Fraction(t)
    _require_reduced(u, desc, "section_descent")
    A = section_class(desc, k, subset)
    if t == 0:
        return InflationPath(u, (), u)
    steps = _descent_steps(u, A, t)
    current = inflate_once(u, steps[0].z, steps[0].t, mode)
    for step in steps[1:]:
        try:
            current = inflate_once(current, step.z, step.t, mode)
        except (ParameterOutOfRange, NonpositiveArea) as exc:
            raise InfeasibleCorrection(f"section_descent: correction step failed: {exc}") from exc
    end = normalize_vector(current)
    assert end.c == u.c, "section descent must restore the blow-up sizes"
    assert end.mu == descent_mu(u, k, subset, t)
    logger.info(
        "section_descent: %s k=%d I=%s t=%s -> mu=%s", u, k, tuple(subset), t, end.mu
    )
    return InflationPath(u, tuple(steps), end)


# ----- alternating inflation for mild pairs -----


def _check_alternating(u: AreaVector, S: HomologyClass, X: HomologyClass) -> None:
    reason = check_mild_pair(S + X, S, X)
    if reason:
        raise NotMildPair(f"alternating_inflation: {reason}")
    for cls in (S, X):
        if area(u, cls) <= 0:
            raise NonpositiveArea(f"alternating_inflation: area({format_class(cls)}) <= 0")


def _alternating_round(
    u: AreaVector,
    S: HomologyClass,
    X: HomologyClass,
    t: Fraction,
    mode: InflationMode,
) -> Tuple[AreaVector, List[InflationStep]]:
    steps = [InflationStep(S, t), InflationStep(X, t)]
    return apply_steps(u, steps, mode), steps


def _round_parameter(gap: Fraction, mode: InflationMode, epsilon: Optional[Fraction]) -> Fraction:
    if mode is InflationMode.FORMAL:
        return gap / 2
    if epsilon is None or not 0 < epsilon < 1:
        raise ParameterOutOfRange(
            f"strict alternating inflation needs 0 < epsilon < 1, got {epsilon}", Fraction(1)
        )
    # each round leaves (1 + epsilon)/2 of the gap, so it never closes
    return (1 - epsilon) * gap / 2


def alternating_inflation(
    u: AreaVector,
    S: HomologyClass,
    X: HomologyClass,
    rounds: int,
    mode: InflationMode = InflationMode.FORMAL,
    epsilon: Optional[Fraction] = None,
) -> List[AreaVector]:
    """u_0..u_rounds; each round inflates S then X by half the current area of S.

    In formal mode the area of S halves every round and
    u_r = u_0 + (1 - 2^-r) area_0(S) PD(S + X). Strict mode uses (1 - epsilon) gap/2.
    """
    if rounds < 0:
        raise ParameterOutOfRange(f"rounds = {rounds} is negative", Fraction(0))
    _check_alternating(u, S, X)
    out = [u]
    current = u
    for _ in range(rounds):
        t = _round_parameter(area(current, S), mode, epsilon)
        current, _ = _alternating_round(current, S, X, t, mode)
        out.append(current)
    logger.info(
        "alternating_inflation: S=%s X=%s rounds=%d gap %s -> %s",
        format_class(S),
        format_class(X),
        rounds,
        area(u, S),
        area(current, S),
    )
    return out


def alternating_steps(
    u: AreaVector,
    S: HomologyClass,
    X: HomologyClass,
    amount: Fraction,
    mode: InflationMode = InflationMode.FORMAL,
    epsilon: Optional[Fraction] = None,
) -> Tuple[AreaVector, List[InflationStep]]:
    """Steps moving u by exactly amount * PD(S + X), shortening the final round.

    Reachable iff amount < area(S) at u: the total after r rounds is (1 - 2^-r) area(S).
    """
    amount = Fraction(amount)
    _check_alternating(u, S, X)
    gap0 = area(u, S)
    if amount >= gap0:
        raise Unreachable(
            f"alternating scheme moves by less than area({format_class(S)}) = {gap0}, "
            f"asked for {amount}",
            gap0,
        )
    steps: List[InflationStep] = []
    current = u
    remaining = amount
    while remaining > 0:
        t = min(_round_parameter(area(current, S), mode, epsilon), remaining)
        current, round_steps = _alternating_round(current, S, X, t, mode)
        steps += round_steps
        remaining -= t
    return current, steps


# ----- planning -----


@dataclass(frozen=True)
class InflationHints:
    """Which classes the planner may inflate.

    ``exc`` maps exceptional classes to their status (missing means embedded); ``sections``
    lists the section classes with embedded representatives, None for the default family of
    index >= 0 section classes.
    """

    exc: Dict[HomologyClass, ExceptionalStatus] = field(default_factory=dict)
    sections: Optional[Tuple[HomologyClass, ...]] = None

    @classmethod
    def default(cls) -> "InflationHints":
        return cls()

    @classmethod
    def from_profile(cls, profile: JProfile) -> "InflationHints":
        return cls(dict(profile.exc), tuple(sorted(profile.sections, key=class_sort_key)))

    def status(self, E: HomologyClass) -> Optional[ExceptionalStatus]:
        return self.exc.get(E)


def default_sections(u: AreaVector, desc: ManifoldDescriptor) -> List[HomologyClass]:
    """Per subset I the section class of smallest k with index >= 0 and positive area."""
    out = []
    for subset in index_subsets(desc.n):
        # index >= 0  <=>  k >= (|I| + g - 1)/2
        k = max_negative_k(desc, len(subset)) + 1
        s = sum((u.c[i - 1] for i in subset), Fraction(0))
        k = max(k, math.floor(s - u.mu) + 1)
        out.append(section_class(desc, k, subset))
    return sorted(out, key=class_sort_key)


def _adjust_blowup(
    current: AreaVector,
    i: int,
    target: Fraction,
    hints: InflationHints,
    desc: ManifoldDescriptor,
    mode: InflationMode,
    epsilon: Optional[Fraction],
) -> Tuple[AreaVector, List[InflationStep]]:
    """Move c_i to target: E_i lowers it, F - E_i raises it (and mu by the same amount)."""
    ci = current.c[i - 1]
    E = exceptional_basis_class(desc, i)
    if target < ci:
        cls, amount = E, ci - target
    else:
        cls, amount = HomologyClass(desc, 0, 1, (0,) * desc.n) - E, target - ci
    status = hints.status(cls)
    if isinstance(status, Bad):
        raise Unreachable(f"plan_path: {format_class(cls)} is badly degenerated; cannot move c{i}")
    if isinstance(status, Mild):
        if not (is_fiber_type(status.S) and is_fiber_type(status.X)):
            raise NotMildPair(f"plan_path: mild parts of {format_class(cls)} must be fiber-type")
        logger.info("plan_path: c%d via alternating %s + %s", i, status.S, status.X)
        return alternating_steps(current, status.S, status.X, amount, mode, epsilon)
    step = InflationStep(cls, amount)
    try:
        return inflate_once(current, cls, amount, mode), [step]
    except ParameterOutOfRange as exc:
        raise Unreachable(f"plan_path: cannot move c{i} to {target}: {exc}", exc.bound) from exc


def plan_path(
    u_from: AreaVector,
    u_to: AreaVector,
    desc: ManifoldDescriptor,
    hints: Optional[InflationHints] = None,
    mode: InflationMode = InflationMode.FORMAL,
    epsilon: Optional[Fraction] = None,
) -> InflationPath:
    """Two phases: fix the blow-up sizes, then move mu with an F-step or a section descent."""
    hints = hints or InflationHints.default()
    if u_from.n != desc.n or u_to.n != desc.n:
        raise DimensionMismatch(f"plan_path: vectors must have n = {desc.n} blow-up sizes")
    _require_reduced(u_from, desc, "plan_path")
    _require_reduced(u_to, desc, "plan_path")
    if u_from == u_to:
        return InflationPath(u_from, (), u_to)

    steps: List[InflationStep] = []
    current = u_from
    for i in range(1, desc.n + 1):
        if current.c[i - 1] != u_to.c[i - 1]:
            current, more = _adjust_blowup(current, i, u_to.c[i - 1], hints, desc, mode, epsilon)
            steps += more
    assert current.f == 1 and current.c == u_to.c

    if current.mu < u_to.mu:
        F = HomologyClass(desc, 0, 1, (0,) * desc.n)
        steps.append(InflationStep(F, u_to.mu - current.mu))
        logger.info("plan_path: F-step t=%s", u_to.mu - current.mu)
    elif current.mu > u_to.mu:
        steps += _plan_descent(current, u_to.mu, desc, hints, mode)

    path = InflationPath(u_from, tuple(steps), u_to)
    assert replay(path, mode) == u_to, "planned path does not replay to the target"
    return path


def _plan_descent(
    u: AreaVector,
    target: Fraction,
    desc: ManifoldDescriptor,
    hints: InflationHints,
    mode: InflationMode,
) -> List[InflationStep]:
    if hints.sections is None:
        candidates = default_sections(u, desc)
    else:
        candidates = [A for A in hints.sections if area(u, A) > 0]
    best_bound: Optional[Fraction] = None
    choice: Optional[Tuple[Fraction, tuple, HomologyClass, Fraction]] = None
    for A in candidates:
        subset = section_subset(A)
        limit = descent_limit(u, A.b, subset)
        best_bound = limit if best_bound is None else min(best_bound, limit)
        if limit >= target:
            continue
        t = solve_descent_parameter(u, A.b, subset, target)
        bound = inflation_bound(u, A)
        if bound is not None and (t > bound or (mode is InflationMode.STRICT and t == bound)):
            logger.debug("plan_path: skip %s, t=%s exceeds %s", format_class(A), t, bound)
            continue
        key = (limit, class_sort_key(A))
        if choice is None or key < (choice[0], choice[1]):
            choice = (limit, class_sort_key(A), A, t)
    if choice is None:
        raise Unreachable(
            f"plan_path: no available section class descends to mu = {target}"
            + (f" (best limit {best_bound})" if best_bound is not None else ""),
            best_bound,
        )
    limit, _, A, t = choice
    logger.info(
        "plan_path: descent along %s (index %d) t=%s limit=%s",
        format_class(A),
        riemann_index(A),
        t,
        limit,
    )
    return _descent_steps(u, A, t)
