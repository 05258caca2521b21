from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from conecalc.config import get_settings
from conecalc.cone import SliceArrangement, WallCrossing, format_area_vector
from conecalc.homlattice import HomologyClass, format_class
from conecalc.storage import canonical_json

WALL_COLOURS = {"interior": "red", "extremal": "black", "reduction": "blue"}


def format_rational(q: Fraction) -> str:
    """Exact text: p/q, or p for integers."""
    return str(Fraction(q))


def _pixel(q: Fraction, scale: int) -> int:
    # Fraction rounds half to even
    return round(Fraction(q) * scale)


def _csv_header(n: int, extra: Sequence[str] = ()) -> List[str]:
    coeffs = ["coeff_mu"] + [f"coeff_c{i}" for i in range(1, n + 1)]
    return ["class", "kind"] + coeffs + ["const"] + list(extra)


def _equation_row(A: HomologyClass, kind: str) -> List[str]:
    return [format_class(A), kind, str(A.a)] + [str(x) for x in A.m] + [str(A.b)]


def walls_to_csv(arrangement: SliceArrangement) -> str:
    """class,kind,coeff_mu,coeff_c1..cn,const; one row per line of the slice."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_csv_header(arrangement.desc.n))
    for line in arrangement.lines:
        writer.writerow(
            [format_class(line.wall_class), line.kind]
            + [str(x) for x in line.coeffs]
            + [str(line.const)]
        )
    return buffer.getvalue()


def crossings_to_csv(crossings: Sequence[WallCrossing], n: int) -> str:
    """Same columns as walls_to_csv followed by the segment parameter and the crossing point."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_csv_header(n, ("parameter", "point")))
    for w in crossings:
        writer.writerow(
            _equation_row(w.wall_class, w.kind)
            + [format_rational(w.parameter), format_area_vector(w.point)]
        )
    return buffer.getvalue()


def slice_to_json(arrangement: SliceArrangement) -> Dict[str, Any]:
    x_name, y_name = arrangement.free
    walls = []
    for line in arrangement.lines:
        cx, cy, k = line.restricted
        (x0, y0), (x1, y1) = line.segment
        walls.append(
            {
                "class": format_class(line.wall_class),
                "kind": line.kind,
                "equation": {"coeffs": [str(x) for x in line.coeffs], "const": str(line.const)},
                "restricted": {"coeffs": [str(cx), str(cy)], "const": str(k)},
                "segment": [[str(x0), str(y0)], [str(x1), str(y1)]],
            }
        )
    return {
        "g": arrangement.desc.g,
        "n": arrangement.desc.n,
        "free": [x_name, y_name],
        "fixed": {name: str(value) for name, value in arrangement.fixed},
        "window": {
            x_name: [str(x) for x in arrangement.window[0]],
            y_name: [str(y) for y in arrangement.window[1]],
        },
        "walls": walls,
    }


def crossings_to_json(crossings: Sequence[WallCrossing]) -> List[Dict[str, Any]]:
    return [
        {
            "class": format_class(w.wall_class),
            "kind": w.kind,
            "equation": {
                "coeffs": [str(w.wall_class.a)] + [str(x) for x in w.wall_class.m],
                "const": str(w.wall_class.b),
            },
            "parameter": format_rational(w.parameter),
            "point": format_area_vector(w.point),
        }
        for w in crossings
    ]


# ----- SVG -----


def svgroot(w: int, h: int) -> ET.Element:
    return ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        version="1.1",
        width=f"{w}px",
        height=f"{h}px",
        viewBox=f"0 0 {w} {h}",
    )


def svglinelist(parent: ET.Element, points: Sequence[Tuple[int, int]], **attrs: str) -> ET.Element:
    d = f"M{points[0][0]} {points[0][1]}" + "".join(f"L{x} {y}" for x, y in points[1:])
    return ET.SubElement(parent, "path", d=d, **attrs)


def slice_to_svg(
    arrangement: SliceArrangement, scale: Optional[int] = None, margin: Optional[int] = None
) -> str:
    """One <path> per wall line; x grows to the right, y upwards."""
    settings = get_settings()
    scale = scale or settings.svg_scale
    margin = settings.svg_margin if margin is None else margin
    (xlo, xhi), (ylo, yhi) = arrangement.window
    width = _pixel(xhi - xlo, scale) + 2 * margin
    height = _pixel(yhi - ylo, scale) + 2 * margin

    def to_px(p: Tuple[Fraction, Fraction]) -> Tuple[int, int]:
        return margin + _pixel(p[0] - xlo, scale), margin + _pixel(yhi - p[1], scale)

    root = svgroot(width, height)
    ET.SubElement(root, "title").text = "walls in " + ", ".join(arrangement.free)
    ET.SubElement(
        root,
        "rect",
        x=str(margin),
        y=str(margin),
        width=str(width - 2 * margin),
        height=str(height - 2 * margin),
        fill="none",
        stroke="gray",
    )
    group = ET.SubElement(root, "g", fill="none")
    group.set("stroke-width", "1")
    for line in arrangement.lines:
        start, end = line.segment
        path = svglinelist(group, [to_px(start), to_px(end)], stroke=WALL_COLOURS[line.kind])
        path.set("data-class", format_class(line.wall_class))
        path.set("data-kind", line.kind)
    return ET.tostring(root, encoding="unicode") + "\n"


def crossings_to_svg(
    crossings: Sequence[WallCrossing], scale: Optional[int] = None, margin: Optional[int] = None
) -> str:
    """The segment as a unit strip with one tick per crossing at its parameter."""
    settings = get_settings()
    scale = scale or settings.svg_scale
    margin = settings.svg_margin if margin is None else margin
    length = 4 * scale
    width, height = length + 2 * margin, 2 * margin + 20
    root = svgroot(width, height)
    axis = ET.SubElement(
        root,
        "line",
        x1=str(margin),
        y1=str(margin + 10),
        x2=str(margin + length),
        y2=str(margin + 10),
    )
    axis.set("stroke", "gray")
    for w in crossings:
        x = margin + _pixel(w.parameter, length)
        path = svglinelist(root, [(x, margin), (x, margin + 20)], stroke=WALL_COLOURS[w.kind])
        path.set("data-class", format_class(w.wall_class))
        path.set("data-parameter", format_rational(w.parameter))
    return ET.tostring(root, encoding="unicode") + "\n"


def export_slice(title: str, arrangement: SliceArrangement) -> List[Tuple[str, bytes]]:
    """(file name, content) for the SVG, CSV and JSON renderings of one slice."""
    stem = title or "slice"
    return [
        (f"{stem}.svg", slice_to_svg(arrangement).encode("utf-8")),
        (f"{stem}.csv", walls_to_csv(arrangement).encode("utf-8")),
        (f"{stem}.json", canonical_json(slice_to_json(arrangement)).encode("utf-8")),
    ]
