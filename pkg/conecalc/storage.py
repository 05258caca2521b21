from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from conecalc.cone import format_area_vector, parse_area_vector, parse_rational
from conecalc.errors import InvalidDocument
from conecalc.homlattice import (
    HomologyClass,
    ManifoldDescriptor,
    class_sort_key,
    format_class,
    parse_class,
)
from conecalc.inflation import InflationPath, InflationStep
from conecalc.strata import Bad, Decomposition, Embedded, ExceptionalStatus, JProfile, Mild


def canonical_json(payload: Any) -> str:
    """Sorted keys, two-space indent, no floats; identical input gives identical bytes."""
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def read_json(source: Path) -> Any:
    try:
        return json.loads(source.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidDocument(f"{source}: invalid JSON ({exc.msg})") from exc
    except OSError as exc:
        raise InvalidDocument(f"{source}: {exc.strerror}") from exc


# ----- inflation paths -----


class StepModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    class_: str = Field(alias="class")
    t: str

    @field_validator("t")
    @classmethod
    def check_rational(cls, value: str) -> str:
        parse_rational(value)
        return value


class PathModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    start: str
    steps: List[StepModel] = Field(default_factory=list)
    end: str


def path_to_dict(path: InflationPath) -> Dict[str, Any]:
    return {
        "start": format_area_vector(path.start),
        "steps": [{"class": format_class(s.z), "t": str(s.t)} for s in path.steps],
        "end": format_area_vector(path.normalized_end),
    }


def path_from_dict(data: Any, g: int) -> InflationPath:
    """Build an InflationPath; the blow-up count comes from the start vector."""
    try:
        model = PathModel.model_validate(data)
    except ValidationError as exc:
        raise InvalidDocument(f"not an inflation path: {exc.errors()[0]['msg']}") from exc
    start = parse_area_vector(model.start)
    end = parse_area_vector(model.end)
    desc = ManifoldDescriptor(g, start.n)
    steps = tuple(
        InflationStep(parse_class(s.class_, desc), parse_rational(s.t)) for s in model.steps
    )
    return InflationPath(start, steps, end)


def save_path(path: InflationPath, target: Path) -> None:
    target.write_text(canonical_json(path_to_dict(path)), encoding="utf-8")


def load_path(source: Path, g: int) -> InflationPath:
    return path_from_dict(read_json(source), g)


# ----- profiles -----


class PartModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    class_: str = Field(alias="class")
    mult: int = Field(default=1, ge=1)


class MildPairModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    S: str
    X: str


class MildEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mild: MildPairModel


class BadEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    bad: List[PartModel]


class ProfileModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    exc: Dict[str, Union[Literal["embedded"], MildEntry, BadEntry]]
    sections: List[str] = Field(default_factory=list)


def profile_from_dict(data: Any, desc: ManifoldDescriptor) -> JProfile:
    try:
        model = ProfileModel.model_validate(data)
    except ValidationError as exc:
        raise InvalidDocument(f"not a profile: {exc.errors()[0]['msg']}") from exc
    exc_map: Dict[HomologyClass, ExceptionalStatus] = {}
    for key, entry in model.exc.items():
        E = parse_class(key, desc)
        if isinstance(entry, MildEntry):
            exc_map[E] = Mild(parse_class(entry.mild.S, desc), parse_class(entry.mild.X, desc))
        elif isinstance(entry, BadEntry):
            parts = tuple((parse_class(p.class_, desc), p.mult) for p in entry.bad)
            exc_map[E] = Bad(Decomposition(E, parts))
        else:
            exc_map[E] = Embedded()
    sections = frozenset(parse_class(s, desc) for s in model.sections)
    return JProfile(exc_map, sections)


def status_to_json(status: ExceptionalStatus) -> Any:
    if isinstance(status, Mild):
        return {"mild": {"S": format_class(status.S), "X": format_class(status.X)}}
    if isinstance(status, Bad):
        return {"bad": [{"class": format_class(c), "mult": m} for c, m in status.dec.parts]}
    return "embedded"


def profile_to_dict(profile: JProfile) -> Dict[str, Any]:
    return {
        "exc": {format_class(E): status_to_json(s) for E, s in profile.exc.items()},
        "sections": [format_class(s) for s in sorted(profile.sections, key=class_sort_key)],
    }


def load_profile(source: Path, desc: ManifoldDescriptor) -> JProfile:
    return profile_from_dict(read_json(source), desc)

