"""DOT and SVG drawings of an element set with its paths highlighted.

Open switches are hollow squares and closed switches filled ones. Active
paths are solid green, backup paths dashed blue. Output is a pure function of
the inputs, so the same network always renders to the same bytes.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

from .errors import UnsupportedFormat
from .model import Element, ElementSet, ElementType, id_key
from .paths import PathSet

FORMATS = ("dot", "svg")

ACTIVE_COLOR = "#1a9641"
BACKUP_COLOR = "#2b83ba"
NETWORK_COLOR = "#555555"


def anchor(e: Element) -> tuple[float, float]:
    """Where an element is drawn: its point, or the mean of a line's vertices."""
    xs = [c[0] for c in e.coords]
    ys = [c[1] for c in e.coords]
    return (sum(xs) / len(xs), sum(ys) / len(ys))


def _hops(paths: PathSet | None, active: bool) -> list[tuple[str, str]]:
    if paths is None or not paths.classified:
        return []
    seen = set()
    out = []
    for c in sorted(paths.customers, key=id_key):
        chosen = paths.active_paths(c) if active else paths.backup_paths(c)
        for p in chosen:
            for a, b in zip(p.elements, p.elements[1:]):
                key = (a, b)
                if key not in seen:
                    seen.add(key)
                    out.append(key)
    return out


def _f(v: float) -> str:
    text = f"{v:.3f}"
    return "0.000" if text == "-0.000" else text


_DOT_SHAPES = {
    ElementType.CUSTOMER: "circle",
    ElementType.TRANSFORMER: "triangle",
    ElementType.CABINET: "house",
    ElementType.CONNECTION_BOARD: "diamond",
    ElementType.POLE: "point",
}


def to_dot(elements: ElementSet, paths: PathSet | None = None) -> str:
    lines = ["graph network {", "  node [fontsize=8];"]
    for e in elements.values():
        x, y = anchor(e)
        attrs = [f'pos="{_f(x)},{_f(y)}!"', f'label="{e.id}"', f'type="{e.element_type.value}"']
        if e.element_type.is_switch:
            attrs.append("shape=square")
            if e.is_open:
                attrs.append('style="solid" fillcolor="white"')
            else:
                attrs.append('style="filled" fillcolor="black" fontcolor="white"')
        elif e.element_type.is_line:
            attrs.append("shape=box")
        else:
            attrs.append(f"shape={_DOT_SHAPES.get(e.element_type, 'ellipse')}")
        lines.append(f'  "{e.id}" [{" ".join(attrs)}];')
    for a, b in _hops(paths, active=False):
        lines.append(f'  "{a}" -- "{b}" [color="{BACKUP_COLOR}" style="dashed" class="backup"];')
    for a, b in _hops(paths, active=True):
        lines.append(f'  "{a}" -- "{b}" [color="{ACTIVE_COLOR}" style="solid" penwidth=3 class="active"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_svg(elements: ElementSet, paths: PathSet | None = None, size: float = 800.0) -> str:
    pts = [c for e in elements.values() for c in e.coords]
    if pts:
        xmin = min(p[0] for p in pts)
        xmax = max(p[0] for p in pts)
        ymin = min(p[1] for p in pts)
        ymax = max(p[1] for p in pts)
    else:
        xmin = ymin = 0.0
        xmax = ymax = 1.0
    span = max(xmax - xmin, ymax - ymin, 1e-9)
    margin = 30.0
    scale = (size - 2 * margin) / span
    width = (xmax - xmin) * scale + 2 * margin
    height = (ymax - ymin) * scale + 2 * margin

    def sx(x: float) -> str:
        return _f(margin + (x - xmin) * scale)

    def sy(y: float) -> str:
        # map north up
        return _f(margin + (ymax - y) * scale)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        '<g id="network">',
    ]
    for e in elements.values():
        if e.element_type.is_line:
            poly = " ".join(f"{sx(x)},{sy(y)}" for x, y in e.coords)
            out.append(
                f'<polyline id="{escape(e.id)}" class="{e.element_type.value}" points="{poly}" '
                f'fill="none" stroke="{NETWORK_COLOR}" stroke-width="2"/>'
            )
    for e in elements.values():
        if e.element_type.is_line:
            continue
        x, y = e.coords[0]
        cx, cy = sx(x), sy(y)
        eid = escape(e.id)
        t = e.element_type
        if t.is_switch:
            fill = "white" if e.is_open else "black"
            out.append(
                f'<rect id="{eid}" class="switch {"open" if e.is_open else "closed"}" '
                f'x="{_f(float(cx) - 5)}" y="{_f(float(cy) - 5)}" width="10" height="10" '
                f'fill="{fill}" stroke="black" stroke-width="1.5"/>'
            )
        elif t is ElementType.TRANSFORMER:
            px, py = float(cx), float(cy)
            tri = f"{_f(px)},{_f(py - 8)} {_f(px - 7)},{_f(py + 5)} {_f(px + 7)},{_f(py + 5)}"
            out.append(f'<polygon id="{eid}" class="transformer" points="{tri}" fill="#d7191c" stroke="black"/>')
        elif t is ElementType.CUSTOMER:
            out.append(f'<circle id="{eid}" class="customer" cx="{cx}" cy="{cy}" r="5" fill="#fdae61" stroke="black"/>')
        else:
            out.append(f'<circle id="{eid}" class="{t.value}" cx="{cx}" cy="{cy}" r="3" fill="{NETWORK_COLOR}"/>')
    out.append("</g>")

    def overlay(group: str, hops: list[tuple[str, str]], color: str, extra: str) -> None:
        out.append(f'<g id="{group}">')
        for a, b in hops:
            (x1, y1), (x2, y2) = anchor(elements[a]), anchor(elements[b])
            out.append(
                f'<line class="{group}" data-from="{escape(a)}" data-to="{escape(b)}" '
                f'x1="{sx(x1)}" y1="{sy(y1)}" x2="{sx(x2)}" y2="{sy(y2)}" '
                f'stroke="{color}" {extra}/>'
            )
        out.append("</g>")

    overlay("backup", _hops(paths, active=False), BACKUP_COLOR, 'stroke-width="2" stroke-dasharray="6 4"')
    overlay("active", _hops(paths, active=True), ACTIVE_COLOR, 'stroke-width="3"')
    out.append('<g id="labels" font-family="sans-serif" font-size="10">')
    for e in elements.values():
        x, y = anchor(e)
        out.append(f'<text x="{_f(float(sx(x)) + 6)}" y="{_f(float(sy(y)) - 6)}">{escape(e.id)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(elements: ElementSet, paths: PathSet | None = None, fmt: str = "svg") -> str:
    fmt = fmt.lower()
    if fmt == "dot":
        return to_dot(elements, paths)
    if fmt == "svg":
        return to_svg(elements, paths)
    raise UnsupportedFormat(f"unsupported render format {fmt!r}; expected one of {FORMATS}")


def write_render(elements: ElementSet, paths: PathSet | None, fmt: str, target: str) -> None:
    text = render(elements, paths, fmt)
    with open(target, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def node_ids(dot_text: str) -> list[str]:
    """Node ids declared in DOT text produced by :func:`to_dot`."""
    ids = []
    for line in dot_text.splitlines():
        line = line.strip()
        if line.startswith('"') and "--" not in line and "[" in line:
            ids.append(line[1:line.index('"', 1)])
    return ids

