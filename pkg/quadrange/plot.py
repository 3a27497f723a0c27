"""
CSV and SVG pictures of a sampled joint range.

The SVG is a plain template render: one dot per sample, the axes, and
optionally the augmentation F(R^n) + R+ d drawn as faint rays clipped to
the viewport. The data-to-viewport map is an affine map (no rotation)
written into a comment at the top of the document, so tests and readers
can map pixels back to data.
"""

import csv
import io
import logging
import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np
from jinja2 import Template
from shapely import affinity
from shapely import geometry as geos

from .config import settings
from .core import QuadraticPair, PlaneDirection
from .oracle import RangeCloud, ball_points, evaluate, pair_arrays


MARGIN = 20
PAD = 0.05
# at most this many augmentation rays are drawn
MAX_RAYS = 400

SVG_TEMPLATE = Template("""<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{{ size }}" height="{{ size }}" viewBox="0 0 {{ size }} {{ size }}">
<!-- {{ title }} -->
<!-- viewport: X = {{ "%.12g"|format(m[0]) }} * f + {{ "%.12g"|format(m[4]) }}, Y = {{ "%.12g"|format(m[3]) }} * g + {{ "%.12g"|format(m[5]) }} -->
<!-- data box: f in [{{ "%.12g"|format(box[0]) }}, {{ "%.12g"|format(box[2]) }}], g in [{{ "%.12g"|format(box[1]) }}, {{ "%.12g"|format(box[3]) }}] -->
<rect x="0" y="0" width="{{ size }}" height="{{ size }}" fill="white"/>
{% if shading %}<g id="augmentation" stroke="#1199ff" stroke-opacity="0.08" stroke-width="2">
{% for s in shading %}<line x1="{{ "%.3f"|format(s[0]) }}" y1="{{ "%.3f"|format(s[1]) }}" x2="{{ "%.3f"|format(s[2]) }}" y2="{{ "%.3f"|format(s[3]) }}"/>
{% endfor %}</g>
{% endif %}<g id="axes" stroke="#808080" stroke-width="1">
{% for s in axes %}<line x1="{{ "%.3f"|format(s[0]) }}" y1="{{ "%.3f"|format(s[1]) }}" x2="{{ "%.3f"|format(s[2]) }}" y2="{{ "%.3f"|format(s[3]) }}"/>
{% endfor %}</g>
<g id="samples" fill="#e92d00">
{% for p in points %}<circle cx="{{ "%.3f"|format(p[0]) }}" cy="{{ "%.3f"|format(p[1]) }}" r="1.5"/>
{% endfor %}</g>
</svg>
""")


@dataclass(frozen=True)
class Viewport:
    """ Data box and the affine matrix [a, b, d, e, xoff, yoff] taking it
    onto the square picture (shapely.affinity.affine_transform layout)
    """
    box: tuple[float, float, float, float]
    matrix: tuple[float, float, float, float, float, float]
    size: int

    @classmethod
    def fit(cls, values: np.ndarray, size: Optional[int] = None) -> "Viewport":
        """ Smallest padded box holding every value and the origin
        """
        size = size or settings["plot"]["viewport"]
        hull = geos.MultiPoint([tuple(v) for v in values] + [(0.0, 0.0)])
        minx, miny, maxx, maxy = hull.bounds
        padx = max(maxx - minx, 1.0) * PAD
        pady = max(maxy - miny, 1.0) * PAD
        minx, maxx = minx - padx, maxx + padx
        miny, maxy = miny - pady, maxy + pady
        sx = (size - 2 * MARGIN) / (maxx - minx)
        sy = (size - 2 * MARGIN) / (maxy - miny)
        matrix = (sx, 0.0, 0.0, -sy, MARGIN - minx * sx, size - MARGIN + miny * sy)
        return cls((minx, miny, maxx, maxy), matrix, size)

    @property
    def region(self) -> geos.Polygon:
        return geos.box(*self.box)

    def to_screen(self, geom):
        return affinity.affine_transform(geom, list(self.matrix))

    def pixels(self, values: np.ndarray) -> np.ndarray:
        """ The same map as `to_screen`, for an (N, 2) array
        """
        a, _, _, e, xoff, yoff = self.matrix
        return np.column_stack([a * values[:, 0] + xoff, e * values[:, 1] + yoff])

    def segment(self, line: geos.LineString) -> Optional[tuple]:
        """ Clip a data-space line to the box and map it to pixels
        """
        clipped = line.intersection(self.region)
        if clipped.is_empty or clipped.geom_type != "LineString":
            return None
        (x1, y1), (x2, y2) = list(self.to_screen(clipped).coords)[:2]
        return (x1, y1, x2, y2)


def sample_range(pair: QuadraticPair, samples: Optional[int] = None,
                 radius: Optional[float] = None, seed: Optional[int] = None) -> RangeCloud:
    """ `samples` preimages uniform in the ball of `radius`, with their values
    """
    cfg = settings["plot"]
    samples = cfg["samples"] if samples is None else samples
    radius = cfg["radius"] if radius is None else radius
    seed = settings["oracle"]["seed"] if seed is None else seed
    n = pair.n
    X = ball_points(np.random.default_rng(seed), samples, n, radius) if n else np.zeros((1, 0))
    values = evaluate(pair_arrays(pair), X)
    keep = np.all(np.isfinite(values), axis=1)
    if not np.all(keep):
        logging.warning("dropped %d non-finite samples", int(np.sum(~keep)))
    return RangeCloud(X[keep], values[keep])


def render_csv(cloud: RangeCloud) -> str:
    """ Columns x1..xn, f, g
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    n = cloud.points.shape[1]
    writer.writerow(["x{}".format(i + 1) for i in range(n)] + ["f", "g"])
    for x, v in zip(cloud.points, cloud.values):
        writer.writerow(["%.12g" % t for t in x] + ["%.12g" % v[0], "%.12g" % v[1]])
    return out.getvalue()


def _shading(cloud: RangeCloud, view: Viewport, direction: PlaneDirection) -> list:
    d = np.array([float(direction.d1), float(direction.d2)])
    d /= np.linalg.norm(d)
    minx, miny, maxx, maxy = view.box
    reach = 2.0 * math.hypot(maxx - minx, maxy - miny)
    step = max(1, len(cloud) // MAX_RAYS)
    rays = []
    for v in cloud.values[::step]:
        seg = view.segment(geos.LineString([tuple(v), tuple(v + reach * d)]))
        if seg is not None:
            rays.append(seg)
    return rays


def _axes(view: Viewport) -> list:
    minx, miny, maxx, maxy = view.box
    lines = [geos.LineString([(minx, 0.0), (maxx, 0.0)]),
             geos.LineString([(0.0, miny), (0.0, maxy)])]
    return [s for s in (view.segment(line) for line in lines) if s is not None]


def render_svg(cloud: RangeCloud, direction: Optional[PlaneDirection] = None,
               title: str = "joint range", size: Optional[int] = None) -> tuple[str, Viewport]:
    view = Viewport.fit(cloud.values, size)
    points = view.pixels(cloud.values)
    shading = _shading(cloud, view, direction) if direction is not None else []
    if direction is not None:
        title = "{} + R+{}".format(title, direction)
    svg = SVG_TEMPLATE.render(size=view.size, title=title, m=view.matrix, box=view.box,
                              shading=shading, axes=_axes(view), points=points)
    return svg, view


@dataclass(frozen=True)
class PlotFiles:
    svg: str
    csv: str
    viewport: Viewport
    samples: int


def write_plot(pair: QuadraticPair, out: str, samples: Optional[int] = None,
               radius: Optional[float] = None, seed: Optional[int] = None,
               direction: Optional[PlaneDirection] = None, title: str = "joint range") -> PlotFiles:
    """ Write OUT.svg and OUT.csv (a trailing .svg or .csv on `out` is dropped)
    """
    stem, ext = os.path.splitext(out)
    if ext.lower() not in (".svg", ".csv"):
        stem = out
    cloud = sample_range(pair, samples, radius, seed)
    svg, view = render_svg(cloud, direction, title)
    svg_path, csv_path = stem + ".svg", stem + ".csv"
    with open(svg_path, "w") as outp:
        outp.write(svg)
    with open(csv_path, "w") as outp:
        outp.write(render_csv(cloud))
    logging.info("wrote %s and %s (%d samples)", svg_path, csv_path, len(cloud))
    return PlotFiles(svg_path, csv_path, view, len(cloud))
