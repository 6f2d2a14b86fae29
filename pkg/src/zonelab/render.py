"""Static SVG drawing of a planar instance: lines, K, zone cells, outer borders."""
from __future__ import annotations

import itertools
from xml.sax.saxutils import quoteattr

import gmpy2

from .arrangement import Arrangement, build_arrangement, signs_to_str
from .body import ConvexBody, FaceClass, classify_faces
from .errors import MalformedInput
from .exact import dot, eq, solve_affine_system
from .zone import zone_cells

SIZE = 640
MARGIN = 20


def body_vertices(K: ConvexBody) -> list:
    """Vertices of a planar polyhedron given by halfspaces."""
    out = []
    for c1, c2 in itertools.combinations(K.halfspaces, 2):
        sol = solve_affine_system([eq(c1.coefficients, c1.offset), eq(c2.coefficients, c2.offset)], 2)
        if sol is not None and sol.dim == 0 and K.contains(sol.point) and sol.point not in out:
            out.append(sol.point)
    return out


def viewport(arr: Arrangement, K: ConvexBody) -> tuple:
    """Bounding box of arrangement and body vertices, grown by 20% on every side."""
    pts = [f.witness for f in arr.faces_of_dim(0)]
    if not K.is_empty:
        pts += body_vertices(K)
    if not pts:
        pts = [f.witness for f in arr.faces.values()]
        if not K.is_empty:
            pts.append(K.witness)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, gmpy2.mpq(1))
    pad = span / 5
    return x0 - pad, y0 - pad, x1 + pad, y1 + pad


def _clip(poly, normal, offset):
    """Keep the part of a convex polygon with normal . x >= offset."""
    out = []
    for p, q in zip(poly, poly[1:] + poly[:1]):
        fp = dot(normal, p) - offset
        fq = dot(normal, q) - offset
        if fp >= 0:
            out.append(p)
        if (fp > 0 and fq < 0) or (fp < 0 and fq > 0):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _box(vp):
    x0, y0, x1, y1 = vp
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


def cell_polygon(cell, vp) -> list:
    poly = _box(vp)
    for h, s in zip(cell.hyperplanes, cell.signs):
        poly = _clip(poly, tuple(s * a for a in h.normal), s * h.offset)
        if not poly:
            break
    return poly


def body_polygon(K: ConvexBody, vp) -> list:
    poly = _box(vp)
    for c in K.halfspaces:
        poly = _clip(poly, c.coefficients, c.offset)
        if not poly:
            break
    return poly


def edge_segment(edge, vp):
    """Endpoints of a 1-face clipped to the viewport, or None when it lies outside."""
    p, (u,) = edge.flat.point, edge.flat.basis
    lo, hi = None, None
    rows = [(tuple(s * a for a in h.normal), s * h.offset)
            for h, s in zip(edge.hyperplanes, edge.signs) if s]
    x0, y0, x1, y1 = vp
    rows += [((1, 0), x0), ((-1, 0), -x1), ((0, 1), y0), ((0, -1), -y1)]
    for normal, offset in rows:
        slope = dot(normal, u)
        rest = offset - dot(normal, p)
        if slope > 0:
            lo = rest / slope if lo is None else max(lo, rest / slope)
        elif slope < 0:
            hi = rest / slope if hi is None else min(hi, rest / slope)
        elif rest > 0:
            return None
    if lo is None or hi is None or lo > hi:
        return None
    return tuple(p[i] + lo * u[i] for i in range(2)), tuple(p[i] + hi * u[i] for i in range(2))


def render_svg(hyperplanes, K: ConvexBody) -> str:
    if K.dim != 2:
        raise MalformedInput("rendering is only available in the plane")
    arr = build_arrangement(hyperplanes, 2)
    classes = classify_faces(arr, K)
    zone = zone_cells(arr, K, classes)
    zone_keys = {c.signs for c in zone}
    vp = viewport(arr, K)
    x0, y0, x1, y1 = vp
    scale = (SIZE - 2 * MARGIN) / float(max(x1 - x0, y1 - y0))

    def px(pt):
        return (MARGIN + float(pt[0] - x0) * scale, SIZE - MARGIN - float(pt[1] - y0) * scale)

    def points(poly):
        return " ".join(f"{x:.3f},{y:.3f}" for x, y in map(px, poly))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        "<style>"
        ".zone-cell{fill:#f6c945;fill-opacity:0.45;stroke:none}"
        ".body{fill:#3b7dd8;fill-opacity:0.35;stroke:#1d4f91;stroke-width:2}"
        ".hyperplane{stroke:#555;stroke-width:1}"
        ".outer-border{stroke:#c0392b;stroke-width:3}"
        ".outer-vertex{fill:#c0392b}"
        "</style>",
        f'<rect class="frame" x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    for cell in zone:
        poly = cell_polygon(cell, vp)
        if len(poly) >= 3:
            out.append(f'<polygon class="zone-cell" data-signs={quoteattr(signs_to_str(cell.signs))} '
                       f'points="{points(poly)}"/>')
    if not K.is_empty:
        poly = body_polygon(K, vp)
        if len(poly) >= 3:
            out.append(f'<polygon class="body" points="{points(poly)}"/>')
    for f in sorted(arr.faces_of_dim(1), key=lambda f: f.signs):
        seg = edge_segment(f, vp)
        if seg is None:
            continue
        outer_border = (classes[f.signs] is FaceClass.OUTER
                        and any(c.signs in zone_keys for c in arr.incident_cells(f)))
        (ax, ay), (bx, by) = px(seg[0]), px(seg[1])
        cls = "outer-border" if outer_border else "hyperplane"
        out.append(f'<line class="{cls}" data-signs={quoteattr(signs_to_str(f.signs))} '
                   f'x1="{ax:.3f}" y1="{ay:.3f}" x2="{bx:.3f}" y2="{by:.3f}"/>')
    for v in sorted(arr.faces_of_dim(0), key=lambda f: f.signs):
        if classes[v.signs] is FaceClass.OUTER and any(c.signs in zone_keys
                                                       for c in arr.incident_cells(v)):
            cx, cy = px(v.witness)
            out.append(f'<circle class="outer-vertex" data-signs={quoteattr(signs_to_str(v.signs))} '
                       f'cx="{cx:.3f}" cy="{cy:.3f}" r="4"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
