"""Command-line front end: one subcommand per operation, exact rational output."""

from __future__ import annotations

import argparse
import logging
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv

from conecalc import __version__
from conecalc.config import get_settings
from conecalc.cone import (
    AreaVector,
    chamber_interval,
    cone_contains,
    exceptional_set,
    format_area_vector,
    is_reduced,
    parse_area_vector,
    parse_rational,
    ray_walls,
    section_candidates,
    segment_walls,
    slice_arrangement,
)
from conecalc.errors import (
    EXIT_INPUT,
    ConeCalcError,
    IncompleteSearch,
    ParseError,
    UsageError,
)
from conecalc.export import (
    crossings_to_csv,
    crossings_to_json,
    crossings_to_svg,
    export_slice,
    slice_to_json,
    slice_to_svg,
    walls_to_csv,
)
from conecalc.homlattice import (
    HomologyClass,
    ManifoldDescriptor,
    adjunction_genus,
    codim,
    format_class,
    pair,
    parse_class,
    parse_classes,
    riemann_index,
)
from conecalc.inflation import (
    InflationHints,
    InflationMode,
    InflationPath,
    alternating_inflation,
    inflate_once,
    plan_path,
    replay,
    section_descent,
    solve_descent_parameter,
)
from conecalc.storage import canonical_json, load_path, load_profile, path_to_dict, read_json
from conecalc.strata import (
    Bad,
    Decomposition,
    ExceptionalStatus,
    Mild,
    admissible_codim,
    classify_decomposition,
    classify_profile,
    enumerate_decompositions,
    table_cell,
)

logger = logging.getLogger("conecalc.cli")

FORMATS = ("table", "json", "csv", "svg", "all")
# formats beyond table/json, per command
EXTRA_FORMATS: Dict[str, Tuple[str, ...]] = {
    "slice": ("csv", "svg", "all"),
    "walls": ("csv", "svg"),
}


@dataclass
class CommandConfig:
    g: int
    n: int
    command: str
    args: Dict[str, Any] = field(default_factory=dict)
    output_format: str = "table"
    output: Optional[Path] = None
    mode: InflationMode = InflationMode.FORMAL
    epsilon: Optional[Fraction] = None
    coeff_bound: int = 5
    max_parts: int = 6
    require_complete: bool = False

    def __post_init__(self) -> None:
        allowed = ("table", "json") + EXTRA_FORMATS.get(self.command, ())
        if self.output_format not in allowed:
            raise UsageError(
                f"--format {self.output_format} is not available for {self.command} "
                f"(choose from {', '.join(allowed)})"
            )
        if self.output_format == "all" and self.output is None:
            raise UsageError("--format all needs --output PATH (files PATH.svg/.csv/.json)")
        if self.mode is InflationMode.STRICT and self.command == "alternate" and not self.epsilon:
            raise UsageError("--strict alternate needs --epsilon")

    @property
    def desc(self) -> ManifoldDescriptor:
        return ManifoldDescriptor(self.g, self.n)


@dataclass
class Report:
    """Renderings of one command result; table and json always exist."""

    table: str
    payload: Any
    csv: Optional[str] = None
    svg: Optional[str] = None
    files: List[Tuple[str, bytes]] = field(default_factory=list)


# ----- argument helpers -----


def _vector(cfg: CommandConfig, key: str = "u") -> AreaVector:
    return parse_area_vector(cfg.args[key])


def _cls(cfg: CommandConfig, key: str) -> HomologyClass:
    return parse_class(cfg.args[key], cfg.desc)


def _rational(text: str) -> Fraction:
    return parse_rational(text)


def _subset(text: Optional[str]) -> Tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(sorted(int(x) for x in text.split(",") if x.strip()))
    except ValueError as exc:
        raise ParseError(f"bad index set {text!r}", 0) from exc


def _assignment(text: str) -> Tuple[str, str]:
    name, sep, value = text.partition("=")
    if not sep:
        raise ParseError(f"expected NAME=VALUE, got {text!r}", 0)
    return name.strip(), value.strip()


def _classes(items: Sequence[HomologyClass]) -> List[str]:
    return [format_class(A) for A in items]


def _status_json(status: ExceptionalStatus) -> Any:
    if isinstance(status, Mild):
        return {"kind": "mild", "S": format_class(status.S), "X": format_class(status.X)}
    if isinstance(status, Bad):
        return {"kind": "bad", "decomposition": str(status.dec)}
    return {"kind": "embedded"}


def _status_text(status: ExceptionalStatus) -> str:
    if isinstance(status, Mild):
        return f"mild S={format_class(status.S)} X={format_class(status.X)}"
    return status.kind


# ----- commands -----


def cmd_pair(cfg: CommandConfig) -> Report:
    value = pair(_cls(cfg, "a"), _cls(cfg, "b"))
    return Report(str(value), {"pair": value})


def cmd_genus(cfg: CommandConfig) -> Report:
    value = adjunction_genus(_cls(cfg, "a"))
    return Report(str(value), {"genus": value})


def cmd_index(cfg: CommandConfig) -> Report:
    value = riemann_index(_cls(cfg, "a"))
    return Report(str(value), {"index": value})


def cmd_codim(cfg: CommandConfig) -> Report:
    value = codim(_cls(cfg, "a"))
    return Report(str(value), {"codim": value})


def cmd_exceptional(cfg: CommandConfig) -> Report:
    classes = exceptional_set(cfg.desc)
    return Report("\n".join(_classes(classes)), {"exceptional": _classes(classes)})


def cmd_cone_check(cfg: CommandConfig) -> Report:
    u = _vector(cfg)
    report = cone_contains(u, cfg.desc)
    lines = [report.status] + [f"  {c.name} = {c.value}" for c in report.violated]
    payload = {
        "status": report.status,
        "violated": [{"name": c.name, "value": str(c.value)} for c in report.violated],
    }
    return Report("\n".join(lines), payload)


def cmd_reduced_check(cfg: CommandConfig) -> Report:
    report = is_reduced(_vector(cfg))
    lines = ["reduced" if report.reduced else "not reduced"]
    lines += [f"  {w}" for w in report.witnesses]
    if report.on_reduction_wall:
        lines.append("  on a reduction wall")
    payload = {
        "reduced": report.reduced,
        "witnesses": list(report.witnesses),
        "on_reduction_wall": report.on_reduction_wall,
    }
    return Report("\n".join(lines), payload)


def cmd_chamber(cfg: CommandConfig) -> Report:
    u = _vector(cfg)
    signature = section_candidates(u, cfg.desc)
    lo, hi = chamber_interval(u, cfg.desc)
    lines = [f"signature ({len(signature)} classes):"]
    lines += [f"  {A}" for A in _classes(signature.classes)]
    if signature.on_walls:
        lines.append("on walls:")
        lines += [f"  {A}" for A in _classes(signature.on_walls)]
    lines.append(f"chamber interval: ({lo}, {hi}]")
    payload = {
        "signature": _classes(signature.classes),
        "on_walls": _classes(signature.on_walls),
        "interval": {"lo": str(lo), "hi": str(hi)},
    }
    return Report("\n".join(lines), payload)


def cmd_walls(cfg: CommandConfig) -> Report:
    u0 = _vector(cfg)
    if cfg.args.get("to"):
        crossings = segment_walls(u0, _vector(cfg, "to"), cfg.desc)
    elif cfg.args.get("mu_to"):
        crossings = ray_walls(u0, _rational(cfg.args["mu_to"]), cfg.desc)
    else:
        raise UsageError("walls needs --to VECTOR or --mu-to RATIONAL")
    lines = [
        f"{w.parameter}\t{w.kind}\t{format_class(w.wall_class)}\t{format_area_vector(w.point)}"
        for w in crossings
    ]
    return Report(
        "\n".join(lines),
        crossings_to_json(crossings),
        csv=crossings_to_csv(crossings, cfg.desc.n),
        svg=crossings_to_svg(crossings),
    )


def cmd_slice(cfg: CommandConfig) -> Report:
    fixed = {}
    for item in cfg.args.get("fix") or []:
        name, value = _assignment(item)
        fixed[name] = _rational(value)
    window = {}
    for item in cfg.args.get("window") or []:
        name, value = _assignment(item)
        lo, sep, hi = value.partition(":")
        if not sep:
            raise ParseError(f"window range must be LO:HI, got {value!r}", 0)
        window[name] = (_rational(lo), _rational(hi))
    arrangement = slice_arrangement(cfg.desc, fixed, window)
    lines = [
        f"{line.kind}\t{format_class(line.wall_class)}\t"
        f"{line.restricted[0]}*{arrangement.free[0]} + {line.restricted[1]}*{arrangement.free[1]}"
        f" + {line.restricted[2]} = 0"
        for line in arrangement.lines
    ]
    report = Report("\n".join(lines), slice_to_json(arrangement))
    if cfg.output_format == "all":
        report.files = export_slice(str(cfg.output), arrangement)
    elif cfg.output_format == "csv":
        report.csv = walls_to_csv(arrangement)
    elif cfg.output_format == "svg":
        report.svg = slice_to_svg(arrangement)
    return report


def cmd_inflate(cfg: CommandConfig) -> Report:
    out = inflate_once(_vector(cfg), _cls(cfg, "z"), _rational(cfg.args["t"]), cfg.mode)
    return Report(format_area_vector(out), {"result": format_area_vector(out)})


def _path_report(path: InflationPath) -> Report:
    lines = [f"start {format_area_vector(path.start)}"]
    lines += [f"  inflate {format_class(s.z)} t={s.t}" for s in path.steps]
    lines.append(f"end   {format_area_vector(path.normalized_end)}")
    return Report("\n".join(lines), path_to_dict(path))


def cmd_descend(cfg: CommandConfig) -> Report:
    u = _vector(cfg)
    k = int(cfg.args["k"])
    subset = _subset(cfg.args.get("subset"))
    if cfg.args.get("target"):
        t = solve_descent_parameter(u, k, subset, _rational(cfg.args["target"]))
    elif cfg.args.get("t"):
        t = _rational(cfg.args["t"])
    else:
        raise UsageError("descend needs --t or --target")
    return _path_report(section_descent(u, k, subset, t, cfg.desc, cfg.mode))


def cmd_alternate(cfg: CommandConfig) -> Report:
    vectors = alternating_inflation(
        _vector(cfg),
        _cls(cfg, "s"),
        _cls(cfg, "x"),
        int(cfg.args["rounds"]),
        cfg.mode,
        cfg.epsilon,
    )
    text = [format_area_vector(v) for v in vectors]
    return Report("\n".join(f"{r}\t{v}" for r, v in enumerate(text)), {"rounds": text})


def cmd_plan(cfg: CommandConfig) -> Report:
    hints = None
    if cfg.args.get("profile"):
        hints = InflationHints.from_profile(load_profile(Path(cfg.args["profile"]), cfg.desc))
    path = plan_path(_vector(cfg), _vector(cfg, "to"), cfg.desc, hints, cfg.mode, cfg.epsilon)
    return _path_report(path)


def cmd_replay(cfg: CommandConfig) -> Report:
    path = load_path(Path(cfg.args["path"]), cfg.g)
    end = replay(path, cfg.mode)
    matches = end == path.normalized_end
    text = format_area_vector(end) + ("" if matches else "  (differs from recorded end)")
    return Report(text, {"end": format_area_vector(end), "matches_recorded_end": matches})


def cmd_decompose(cfg: CommandConfig) -> Report:
    E = _cls(cfg, "e")
    search = enumerate_decompositions(E, _vector(cfg), cfg.max_parts, cfg.coeff_bound)
    if cfg.require_complete and not search.exhaustive:
        raise IncompleteSearch(
            f"search window (coeff bound {cfg.coeff_bound}, {cfg.max_parts} parts) "
            "is not provably exhaustive"
        )
    rows = [(str(dec), classify_decomposition(dec)) for dec in search.decompositions]
    lines = [f"{text}\t{_status_text(status)}" for text, status in rows]
    lines.append(f"exhaustive: {'yes' if search.exhaustive else 'no'}")
    payload = {
        "decompositions": [
            {"decomposition": text, "status": _status_json(status)} for text, status in rows
        ],
        "exhaustive": search.exhaustive,
    }
    return Report("\n".join(lines), payload)


def _part(text: str, desc: ManifoldDescriptor) -> Tuple[HomologyClass, int]:
    """CLASS or CLASS:MULT."""
    body, sep, mult = text.rpartition(":")
    if not sep:
        return parse_class(text, desc), 1
    if not mult.strip().isdigit():
        raise ParseError(f"bad multiplicity in {text!r}", len(body) + 1)
    return parse_class(body, desc), int(mult)


def cmd_classify_dec(cfg: CommandConfig) -> Report:
    E = _cls(cfg, "e")
    parts = tuple(_part(p, cfg.desc) for p in cfg.args.get("part") or [])
    status = classify_decomposition(Decomposition(E, parts))
    return Report(_status_text(status), _status_json(status))


def cmd_classify_profile(cfg: CommandConfig) -> Report:
    profile = load_profile(Path(cfg.args["profile"]), cfg.desc)
    label = classify_profile(profile, _vector(cfg), cfg.desc)
    row, column = table_cell(profile)
    lines = [f"{label.kind} (codim >= {label.codim_lower_bound})", f"cell: {row} / {column}"]
    if label.witness is not None:
        lines.append(f"witness: {format_class(label.witness)}")
    lines += [f"  {name}: {value}" for name, value in label.witnesses]
    payload = {
        "kind": label.kind,
        "codim_lower_bound": label.codim_lower_bound,
        "witness": format_class(label.witness) if label.witness is not None else None,
        "witnesses": [{"name": name, "codim": value} for name, value in label.witnesses],
        "cell": {"row": row, "column": column},
    }
    return Report("\n".join(lines), payload)


def cmd_collection_codim(cfg: CommandConfig) -> Report:
    classes = parse_classes(cfg.args.get("cls") or [], cfg.desc)
    value = admissible_codim(classes)
    return Report(str(value), {"codim": value, "classes": _classes(classes)})


COMMANDS: Dict[str, Callable[[CommandConfig], Report]] = {
    "pair": cmd_pair,
    "genus": cmd_genus,
    "index": cmd_index,
    "codim": cmd_codim,
    "exceptional": cmd_exceptional,
    "cone-check": cmd_cone_check,
    "reduced-check": cmd_reduced_check,
    "chamber": cmd_chamber,
    "walls": cmd_walls,
    "slice": cmd_slice,
    "inflate": cmd_inflate,
    "descend": cmd_descend,
    "alternate": cmd_alternate,
    "plan": cmd_plan,
    "replay": cmd_replay,
    "decompose": cmd_decompose,
    "classify-dec": cmd_classify_dec,
    "classify-profile": cmd_classify_profile,
    "collection-codim": cmd_collection_codim,
}


def run(cfg: CommandConfig) -> Tuple[int, str]:
    """Execute one command; returns (exit status, text for stdout)."""
    logger.info("run: %s g=%d n=%d format=%s", cfg.command, cfg.g, cfg.n, cfg.output_format)
    report = COMMANDS[cfg.command](cfg)
    fmt = cfg.output_format
    if fmt == "all":
        written = []
        for name, content in report.files:
            Path(name).write_bytes(content)
            written.append(name)
        return 0, "\n".join(written) + "\n"
    if fmt == "json":
        text = canonical_json(report.payload)
    elif fmt == "csv":
        text = report.csv or ""
    elif fmt == "svg":
        text = report.svg or ""
    else:
        text = report.table + "\n"
    if cfg.output is not None:
        cfg.output.write_text(text, encoding="utf-8")
        logger.info("run: wrote %s", cfg.output)
        return 0, ""
    return 0, text


# ----- argument parsing -----


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=int, default=1, help="genus of the base surface")
    common.add_argument("--n", type=int, default=None, help="number of blow-ups")
    common.add_argument("--format", dest="output_format", choices=FORMATS, default="table")
    common.add_argument("--output", type=Path, default=None)
    common.add_argument("--strict", action="store_true", help="open inflation ranges")
    common.add_argument(
        "--epsilon", default=None, help="relative margin in (0, 1) for strict alternating rounds"
    )
    common.add_argument("--coeff-bound", type=int, default=None)
    common.add_argument("--max-parts", type=int, default=None)
    common.add_argument("--require-complete", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conecalc",
        description="Exact chamber, wall and inflation calculus for blown-up ruled surfaces.",
    )
    parser.add_argument("--version", action="version", version=f"conecalc {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("pair", "intersection pairing of two classes")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    for name, help_text in (
        ("genus", "adjunction genus"),
        ("index", "index of the embedded representative"),
        ("codim", "stratum codimension"),
    ):
        add(name, help_text).add_argument("--a", required=True)
    add("exceptional", "exceptional sphere classes")
    for name, help_text in (
        ("cone-check", "membership in the symplectic cone"),
        ("reduced-check", "reduced-region test"),
        ("chamber", "chamber signature and mu-interval"),
    ):
        add(name, help_text).add_argument("--u", required=True)
    p = add("walls", "walls crossed by a segment or horizontal ray")
    p.add_argument("--u", required=True)
    p.add_argument("--to", default=None)
    p.add_argument("--mu-to", dest="mu_to", default=None)
    p = add("slice", "wall lines of a two-dimensional slice")
    p.add_argument("--fix", action="append", default=[], help="NAME=VALUE, e.g. c2=1/2")
    p.add_argument("--window", action="append", default=[], help="NAME=LO:HI, e.g. mu=1:4")
    p = add("inflate", "inflate once along a class")
    p.add_argument("--u", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--t", required=True)
    p = add("descend", "section inflation with blow-up correction")
    p.add_argument("--u", required=True)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--subset", default="", help="1-based indices, e.g. 1,3")
    p.add_argument("--t", default=None)
    p.add_argument("--target", default=None, help="solve t for this mu")
    p = add("alternate", "alternating inflation for a mild pair")
    p.add_argument("--u", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--rounds", required=True, type=int)
    p = add("plan", "inflation path between two reduced classes")
    p.add_argument("--u", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--profile", default=None)
    add("replay", "replay a saved inflation path").add_argument("--path", required=True)
    p = add("decompose", "decompositions of an exceptional class")
    p.add_argument("--u", required=True)
    p.add_argument("--e", required=True)
    p = add("classify-dec", "classify one decomposition")
    p.add_argument("--e", required=True)
    p.add_argument("--part", action="append", default=[], help="CLASS or CLASS:MULT")
    p = add("classify-profile", "stratum of a profile")
    p.add_argument("--u", required=True)
    p.add_argument("--profile", required=True)
    p = add("collection-codim", "codimension of an admissible collection")
    p.add_argument("--class", dest="cls", action="append", default=[])
    return parser


_E_INDEX = re.compile(r"E(\d+)")


def _infer_n(args: Dict[str, Any]) -> int:
    """Blow-up count from the first area vector given, else the largest E index mentioned."""
    for key in ("u", "to"):
        if args.get(key):
            return parse_area_vector(args[key]).n
    if args.get("path"):
        try:
            return parse_area_vector(read_json(Path(args["path"]))["start"]).n
        except (KeyError, TypeError):
            return 0
    coordinates = list(args.get("fix") or []) + list(args.get("window") or [])
    if coordinates:
        names = [_assignment(x)[0] for x in coordinates]
        return max((int(x[1:]) for x in names if x.startswith("c") and x[1:].isdigit()), default=0)
    texts: List[str] = []
    for value in args.values():
        if isinstance(value, str):
            texts.append(value)
        elif isinstance(value, list):
            texts += [v for v in value if isinstance(v, str)]
    indices = [int(m) for text in texts for m in _E_INDEX.findall(text)]
    return max(indices, default=0)


def config_from_args(ns: argparse.Namespace) -> CommandConfig:
    settings = get_settings()
    args = {
        key: value
        for key, value in vars(ns).items()
        if key
        not in {
            "command",
            "verbose",
            "g",
            "n",
            "output_format",
            "output",
            "strict",
            "epsilon",
            "coeff_bound",
            "max_parts",
            "require_complete",
        }
    }
    return CommandConfig(
        g=ns.g,
        n=ns.n if ns.n is not None else _infer_n(args),
        command=ns.command,
        args=args,
        output_format=ns.output_format,
        output=ns.output,
        mode=InflationMode.STRICT if ns.strict else InflationMode.FORMAL,
        epsilon=_rational(ns.epsilon) if ns.epsilon else None,
        coeff_bound=ns.coeff_bound or settings.coeff_bound,
        max_parts=ns.max_parts or settings.max_parts,
        require_complete=ns.require_complete,
    )


def _configure_logging(verbose: int) -> None:
    root = logging.getLogger("conecalc")
    if verbose >= 2:
        root.setLevel(logging.DEBUG)
    elif verbose == 1:
        root.setLevel(logging.INFO)
    else:
        root.setLevel(get_settings().log_level.upper())


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    ns = parser.parse_args(argv)
    _configure_logging(ns.verbose)
    try:
        cfg = config_from_args(ns)
        status, text = run(cfg)
    except ConeCalcError as exc:
        logger.info("%s failed: %s", ns.command, exc.code)
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_status
    except ValueError as exc:
        # malformed values caught by dataclass validation (e.g. f <= 0, negative n)
        print(f"error[input]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
