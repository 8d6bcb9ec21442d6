"""Static figure emission: pgfplots coordinate lists and plain SVG 1.1."""
import re
from decimal import Decimal
from pathlib import Path

POS_COLOR = "#1f77b4"
NEG_COLOR = "#d62728"

COORD_RE = re.compile(r"\((\d+),(-?\d+\.\d+)\)")

_HEADER = (
    '<?xml version="1.0" standalone="no"?>\n'
    '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
    '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n'
)


def format_decimal(x):
    """Shortest round-tripping decimal, never in exponent form."""
    s = format(Decimal(repr(float(x))), "f")
    return s if "." in s else s + ".0"


def loss_coordinates(entries):
    return " ".join(f"({int(e)},{format_decimal(loss)})" for e, loss in entries)


def parse_coordinates(text):
    tokens = text.split()
    out = []
    for tok in tokens:
        m = COORD_RE.fullmatch(tok)
        if m is None:
            raise ValueError(f"bad coordinate token {tok!r}")
        out.append((int(m.group(1)), float(m.group(2))))
    return out


def _svg_open(width, height):
    return _HEADER + (
        f'<svg version="1.1" xmlns="http://www.w3.org/2000/svg" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">\n'
    )


def svg_line_chart(entries, width=480, height=320, margin=40):
    if not entries:
        raise ValueError("no points to plot")
    xs = [e for e, _ in entries]
    ys = [v for _, v in entries]
    x0, x1 = min(xs), max(xs)
    y1 = max(max(ys), 0.0) or 1.0
    pw, ph = width - 2 * margin, height - 2 * margin

    def px(e):
        return margin + (pw * (e - x0) / (x1 - x0) if x1 > x0 else pw / 2)

    def py(v):
        return margin + ph * (1.0 - v / y1)

    pts = [(px(e), py(v)) for e, v in entries]
    out = [_svg_open(width, height)]
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n')
    out.append(
        f'<line class="axis" x1="{margin}" y1="{margin + ph}" x2="{margin + pw}" '
        f'y2="{margin + ph}" stroke="black"/>\n'
        f'<line class="axis" x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{margin + ph}" stroke="black"/>\n'
    )
    out.append(f'<text x="{width / 2:.1f}" y="{height - 8}" text-anchor="middle">Epoch</text>\n')
    out.append(f'<text x="12" y="{height / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 12 {height / 2:.1f})">Loss</text>\n')
    out.append(f'<text x="{margin - 4}" y="{margin + 4}" text-anchor="end" '
               f'font-size="10">{format_decimal(y1)}</text>\n')
    out.append(f'<text x="{margin}" y="{margin + ph + 14}" text-anchor="middle" '
               f'font-size="10">{x0}</text>\n')
    if x1 > x0:
        out.append(f'<text x="{margin + pw}" y="{margin + ph + 14}" text-anchor="middle" '
                   f'font-size="10">{x1}</text>\n')
    if len(pts) > 1:
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="blue"/>\n')
    for x, y in pts:
        out.append(f'<circle class="mark" cx="{x:.2f}" cy="{y:.2f}" r="2" fill="blue"/>\n')
    out.append("</svg>\n")
    return "".join(out)


def svg_scatter(points, size=400, margin=20):
    """Points ``(x, y, label)`` on the unit disk; +1 and -1 get distinct colours."""
    if not points:
        raise ValueError("no points to plot")
    half = size / 2
    scale = half - margin
    out = [_svg_open(size, size)]
    out.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="white" stroke="gray"/>\n')
    for x, y, label in points:
        color, cls = (POS_COLOR, "pos") if label > 0 else (NEG_COLOR, "neg")
        out.append(
            f'<circle class="point {cls}" cx="{half + scale * x:.2f}" '
            f'cy="{half - scale * y:.2f}" r="3" fill="{color}"/>\n'
        )
    out.append("</svg>\n")
    return "".join(out)


def _write(path, text):
    with open(path, "w", newline="\n") as f:
        f.write(text)


def emit_loss_plot(entries, path):
    """Write the coordinate list to ``path`` and an SVG beside it.

    Returns the SVG path.
    """
    entries = list(entries)
    if not entries:
        raise ValueError("loss log is empty; nothing to plot")
    path = Path(path)
    _write(path, loss_coordinates(entries) + "\n")
    svg_path = path.with_suffix(".svg")
    _write(svg_path, svg_line_chart(entries))
    return svg_path


def emit_scatter_plot(points, path):
    points = [(s.x, s.y, s.label) if hasattr(s, "label") else tuple(s) for s in points]
    _write(path, svg_scatter(points))
