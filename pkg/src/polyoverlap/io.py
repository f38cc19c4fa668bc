"""Polygon files, WKT import, JSON-lines records and SVG rendering.

A polygon file is a JSON object ``{"ring": [[x, y], ...], "parts": [...]}``
where ``parts`` is an optional list of rings.  Coordinates are written with
Python's shortest round-trip float representation, so writing and reading
back reproduces every coordinate bit for bit.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Iterable, Optional
from xml.sax.saxutils import escape

import numpy as np

from .errors import ValidationError
from .geometry import ConvexPolygon, SimplePolygon


def _reject_constant(token):
    raise ValidationError(f"non-finite number {token!r} is not allowed")


def _token_at(text: str, pos: int) -> str:
    m = re.compile(r"\S{1,20}").match(text, pos)
    return m.group(0) if m else "end of input"


def _ring_from(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) < 3:
        raise ValidationError(f"{where}: expected a list of at least 3 [x, y] pairs")
    out = np.empty((len(value), 2))
    for k, pair in enumerate(value):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in pair)):
            raise ValidationError(f"{where}, vertex {k}: expected [x, y], got {json.dumps(pair)}")
        if not all(math.isfinite(c) for c in pair):
            raise ValidationError(f"{where}, vertex {k}: coordinates must be finite")
        out[k] = pair
    return out


def polygon_from_dict(data) -> SimplePolygon:
    if not isinstance(data, dict) or "ring" not in data:
        raise ValidationError('polygon record must be an object with a "ring" field')
    unknown = set(data) - {"ring", "parts"}
    if unknown:
        raise ValidationError(f"unknown polygon fields: {sorted(unknown)}")
    ring = _ring_from(data["ring"], "ring")
    parts = data.get("parts")
    if parts is not None:
        if not isinstance(parts, list) or not parts:
            raise ValidationError('"parts" must be a non-empty list of rings')
        parts = [ConvexPolygon(_ring_from(p, f"part {i}")) for i, p in enumerate(parts)]
    return SimplePolygon(ring, parts)


def polygon_to_dict(P) -> dict:
    if isinstance(P, ConvexPolygon):
        return {"ring": P.vertices.tolist()}
    out = {"ring": P.ring.tolist()}
    if P.parts is not None:
        out["parts"] = [q.vertices.tolist() for q in P.parts]
    return out


def parse_polygon(text: str) -> SimplePolygon:
    """Polygon from the text of a polygon file.

    Raises:
        ValidationError: malformed JSON (naming the offending token and its
            line and column) or an invalid polygon.
    """
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as err:
        raise ValidationError(
            f"malformed polygon file at line {err.lineno} column {err.colno}: "
            f"{err.msg} near {_token_at(text, err.pos)!r}") from None
    return polygon_from_dict(data)


def format_polygon(P) -> str:
    return json.dumps(polygon_to_dict(P)) + "\n"


def read_polygon(path) -> SimplePolygon:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".wkt":
        return polygon_from_wkt(text)
    return parse_polygon(text)


def write_polygon(path, P) -> None:
    Path(path).write_text(format_polygon(P))


_WKT = re.compile(r"^\s*POLYGON\s*\(\s*\((?P<ring>[^()]*)\)\s*(?P<rest>.*)\)\s*$", re.IGNORECASE | re.DOTALL)


def polygon_from_wkt(text: str) -> SimplePolygon:
    """Polygon from WKT ``POLYGON ((x y, ...))`` text; holes are rejected."""
    m = _WKT.match(text)
    if m is None:
        raise ValidationError("expected WKT of the form POLYGON ((x y, x y, ...))")
    if m.group("rest").strip():
        raise ValidationError("WKT polygons with holes are not supported")
    pts = []
    for k, item in enumerate(m.group("ring").split(",")):
        fields = item.split()
        if len(fields) != 2:
            raise ValidationError(f"WKT vertex {k}: expected two coordinates, got {item.strip()!r}")
        try:
            x, y = float(fields[0]), float(fields[1])
        except ValueError:
            raise ValidationError(f"WKT vertex {k}: not a number in {item.strip()!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValidationError(f"WKT vertex {k}: coordinates must be finite")
        pts.append((x, y))
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    return SimplePolygon(pts)


def format_record(record: dict) -> str:
    """One JSON line; fields keep their insertion order."""
    return json.dumps(record, allow_nan=False, default=_plain) + "\n"


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialise {type(value).__name__}")


# ---------------------------------------------------------------------------
# SVG

_FILLS = ("#8ecae6", "#ffb703", "#90be6d", "#f28482", "#cdb4db", "#bde0fe", "#fcbf49", "#a3b18a")


class SvgCanvas:
    """Accumulates polygons and segments and writes them as one SVG document."""

    def __init__(self, width: int = 640):
        self.width = width
        self._items = []
        self._lo = np.array([np.inf, np.inf])
        self._hi = -self._lo

    def _grow(self, pts: np.ndarray) -> None:
        if len(pts):
            self._lo = np.minimum(self._lo, pts.min(axis=0))
            self._hi = np.maximum(self._hi, pts.max(axis=0))

    def polygon(self, pts, fill: str = "none", stroke: str = "#222", opacity: float = 0.6,
                label: Optional[str] = None) -> None:
        pts = np.asarray(pts, dtype=float)
        self._grow(pts)
        self._items.append(("polygon", pts, fill, stroke, opacity, label))

    def segments(self, segs, stroke: str = "#555") -> None:
        segs = np.asarray(segs, dtype=float).reshape(-1, 2, 2)
        self._grow(segs.reshape(-1, 2))
        self._items.append(("segments", segs, stroke))

    def point(self, p, fill: str = "#d00") -> None:
        p = np.asarray(p, dtype=float).reshape(1, 2)
        self._grow(p)
        self._items.append(("point", p, fill))

    def parts(self, polygons: Iterable) -> None:
        for k, q in enumerate(polygons):
            self.polygon(q.vertices, fill=_FILLS[k % len(_FILLS)])

    def render(self) -> str:
        lo, hi = self._lo, self._hi
        if not np.all(np.isfinite(lo)):
            lo, hi = np.zeros(2), np.ones(2)
        span = float(max((hi - lo).max(), 1e-12))
        margin = 0.05 * span
        scale = self.width / (span + 2 * margin)
        height = int(math.ceil((hi[1] - lo[1] + 2 * margin) * scale))
        width = int(math.ceil((hi[0] - lo[0] + 2 * margin) * scale))

        def xy(p):
            # flip y so that the drawing uses the usual orientation
            return (p[0] - lo[0] + margin) * scale, (hi[1] - p[1] + margin) * scale

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
               f'viewBox="0 0 {width} {height}">']
        for item in self._items:
            if item[0] == "polygon":
                _, pts, fill, stroke, opacity, label = item
                coords = " ".join("%.3f,%.3f" % xy(p) for p in pts)
                title = f"<title>{escape(label)}</title>" if label else ""
                out.append(f'<polygon points="{coords}" fill="{fill}" fill-opacity="{opacity}" '
                           f'stroke="{stroke}" stroke-width="1">{title}</polygon>')
            elif item[0] == "segments":
                _, segs, stroke = item
                for a, b in segs:
                    (x0, y0), (x1, y1) = xy(a), xy(b)
                    out.append(f'<line x1="{x0:.3f}" y1="{y0:.3f}" x2="{x1:.3f}" y2="{y1:.3f}" '
                               f'stroke="{stroke}" stroke-width="0.5"/>')
            else:
                _, p, fill = item
                x, y = xy(p[0])
                out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{fill}"/>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.render())
