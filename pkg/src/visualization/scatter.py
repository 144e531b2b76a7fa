"""Self-contained SVG scatter of eigenvalues against R, with the |λ| = 1/4 and 1/2 bands."""
from typing import Sequence
import logging
import xml.etree.ElementTree as ET

import numpy as np

logger = logging.getLogger(__name__)

WIDTH = 640.0
HEIGHT = 480.0
MARGIN_LEFT = 64.0
MARGIN_RIGHT = 24.0
MARGIN_TOP = 40.0
MARGIN_BOTTOM = 48.0
Y_LIMIT = 0.55
POINT_RADIUS = 2.0

BANDS = (
    (0.5, "#424242", None),
    (0.25, "#1E88E5", "6,4"),
)


def _y(value: float) -> float:
    span = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    return MARGIN_TOP + (Y_LIMIT - value) / (2 * Y_LIMIT) * span


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def eigenvalue_scatter_svg(labels: Sequence[str], spectra: Sequence[Sequence[float]],
                           title: str = "NP eigenvalues", axis_title: str = "aspect ratio") -> str:
    """One column of points per label (usually one per R); eigenvalues beyond ±0.55 are clipped."""
    if len(labels) != len(spectra):
        raise ValueError(f"{len(labels)} labels but {len(spectra)} spectra")

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=_fmt(WIDTH), height=_fmt(HEIGHT),
                     viewBox=f"0 0 {WIDTH:g} {HEIGHT:g}")
    ET.SubElement(svg, "rect", x="0", y="0", width=_fmt(WIDTH), height=_fmt(HEIGHT), fill="white")
    ET.SubElement(svg, "text", x=_fmt(WIDTH / 2), y="24", attrib={"text-anchor": "middle",
                  "font-family": "sans-serif", "font-size": "16"}).text = title

    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    for level, colour, dash in BANDS:
        for value in (level, -level):
            line = ET.SubElement(svg, "line", x1=_fmt(left), x2=_fmt(right), y1=_fmt(_y(value)),
                                 y2=_fmt(_y(value)), stroke=colour, attrib={"stroke-width": "1"})
            if dash:
                line.set("stroke-dasharray", dash)
            ET.SubElement(svg, "text", x=_fmt(left - 6), y=_fmt(_y(value) + 4),
                          attrib={"text-anchor": "end", "font-family": "sans-serif",
                                  "font-size": "11"}).text = f"{value:g}"

    step = (right - left) / max(len(labels), 1)
    for i, (label, values) in enumerate(zip(labels, spectra)):
        x = left + (i + 0.5) * step
        ET.SubElement(svg, "text", x=_fmt(x), y=_fmt(HEIGHT - MARGIN_BOTTOM + 20),
                      attrib={"text-anchor": "middle", "font-family": "sans-serif",
                              "font-size": "11"}).text = label
        column = ET.SubElement(svg, "g", fill="#E53935", attrib={"fill-opacity": "0.7"})
        for value in np.clip(np.asarray(values, dtype=float), -Y_LIMIT, Y_LIMIT):
            ET.SubElement(column, "circle", cx=_fmt(x), cy=_fmt(_y(value)), r=_fmt(POINT_RADIUS))

    ET.SubElement(svg, "text", x=_fmt(WIDTH / 2), y=_fmt(HEIGHT - 8),
                  attrib={"text-anchor": "middle", "font-family": "sans-serif",
                          "font-size": "12"}).text = axis_title
    logger.debug(f"Rendered scatter with {len(labels)} columns")
    return ET.tostring(svg, encoding="unicode") + "\n"
