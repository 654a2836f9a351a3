"""Planar domains: membership, boundary parametrizations, distances, indicators.

Shapes carry analytic membership and boundary-distance tests where closed
forms exist (discs, squares, the tangent-disc example) and fall back to a
cached fine polyline otherwise.  Boundary points are classified as exterior
everywhere (the indicator is an a.e. object; a fixed convention suffices).

The cusp models are concrete realizations of drop/peach-shaped regions:
``Drop`` is bounded by ``y = +/- x**1.5 * (1 - x)`` on ``x in [0, 1]``
(interior cusp at 0, smoothness exponent 1/2); ``Peach`` is the unit disc
minus that region (exterior cusp at 0).  ``DiscMinusTwoDiscs`` is the disc of
radius 2 minus the closed unit discs centered at +1 and -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import dijkstra
from scipy.special import j1

from .grid import Field, GridSpec

__all__ = [
    "Domain",
    "Disc",
    "Square",
    "SmoothJordan",
    "Drop",
    "Peach",
    "DiscMinusTwoDiscs",
    "DisjointUnion",
    "BoundaryPoint",
    "contains",
    "boundary_parametrization",
    "boundary_distance",
    "geodesic_distance",
    "geodesic_distances",
    "interior_mask",
    "indicator",
    "ellipse",
    "domain_to_json",
    "domain_from_json",
]


@dataclass(frozen=True)
class BoundaryPoint:
    point: complex
    unit_tangent: complex
    arc_weight: float


class Domain:
    """Base class; subclasses implement vectorized membership and distances."""

    def contains_points(self, z) -> np.ndarray:
        raise NotImplementedError

    def boundary_distance_points(self, z) -> np.ndarray:
        raise NotImplementedError

    def boundary(self, m: int) -> list[BoundaryPoint]:
        raise NotImplementedError(f"{type(self).__name__} has no single-curve boundary")

    def bounding_radius(self) -> float:
        """Radius of a disc around the origin containing the closure."""
        raise NotImplementedError


@dataclass(frozen=True)
class Disc(Domain):
    center: complex = 0.0
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def contains_points(self, z):
        return np.abs(np.asarray(z) - self.center) < self.radius

    def boundary_distance_points(self, z):
        return np.abs(np.abs(np.asarray(z) - self.center) - self.radius)

    def boundary(self, m):
        theta = 2.0 * np.pi * np.arange(m) / m
        pts = self.center + self.radius * np.exp(1j * theta)
        tan = 1j * np.exp(1j * theta)
        w = 2.0 * np.pi * self.radius / m
        return [BoundaryPoint(complex(p), complex(t), w) for p, t in zip(pts, tan)]

    def bounding_radius(self):
        return abs(self.center) + self.radius


@dataclass(frozen=True)
class Square(Domain):
    center: complex = 0.0
    side: float = 2.0

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError("side must be positive")

    def contains_points(self, z):
        d = np.asarray(z) - self.center
        return np.maximum(np.abs(d.real), np.abs(d.imag)) < self.side / 2.0

    def boundary_distance_points(self, z):
        d = np.asarray(z) - self.center
        h = self.side / 2.0
        ax, ay = np.abs(d.real), np.abs(d.imag)
        inside = np.maximum(ax, ay) < h
        # outside: distance to the square treated as a solid box
        ox = np.maximum(ax - h, 0.0)
        oy = np.maximum(ay - h, 0.0)
        outside_d = np.hypot(ox, oy)
        inside_d = h - np.maximum(ax, ay)
        return np.where(inside, inside_d, outside_d)

    def boundary(self, m):
        # corner-aware: walk the perimeter counterclockwise from the SW corner,
        # sampling midpoints of m equal arclength pieces so corners never carry
        # an (undefined) tangent sample.
        h = self.side / 2.0
        per = 4.0 * self.side
        sw = self.center - h - 1j * h
        corners = [sw, sw + self.side, sw + self.side + 1j * self.side, sw + 1j * self.side]
        tangents = [1.0, 1j, -1.0, -1j]
        pts = []
        w = per / m
        for k in range(m):
            t = (k + 0.5) * w
            edge = min(int(t // self.side), 3)
            along = t - edge * self.side
            p = corners[edge] + tangents[edge] * along
            pts.append(BoundaryPoint(complex(p), complex(tangents[edge]), w))
        return pts

    def bounding_radius(self):
        return abs(self.center) + self.side / np.sqrt(2.0)


def _polyline_arclength_resample(points: np.ndarray, m: int):
    """Resample a closed polyline to m arclength-uniform points with tangents."""
    closed = np.append(points, points[:1])
    seg = np.abs(np.diff(closed))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    targets = (np.arange(m) + 0.5) * total / m
    idx = np.searchsorted(cum, targets, side="right") - 1
    idx = np.clip(idx, 0, len(seg) - 1)
    frac = (targets - cum[idx]) / seg[idx]
    pts = closed[idx] + frac * (closed[idx + 1] - closed[idx])
    tan = (closed[idx + 1] - closed[idx]) / seg[idx]
    w = np.full(m, total / m)
    return pts, tan, w


def _point_segment_distance(z, a, b):
    """Distance from points z (array) to segment [a, b]."""
    ab = b - a
    t = ((z - a) * np.conj(ab)).real / (abs(ab) ** 2)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(z - (a + t * ab))


def _polyline_distance(z, points: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    closed = np.append(points, points[:1])
    best = np.full(flat.shape, np.inf)
    # chunk over segments to bound memory
    step = max(1, 2_000_000 // max(flat.size, 1))
    for k in range(0, len(points), step):
        end = min(k + step, len(points))
        a = closed[k:end]
        b = closed[k + 1 : end + 1]
        d = _point_segment_distance(flat[:, None], a[None, :], b[None, :])
        best = np.minimum(best, d.min(axis=1))
    return best.reshape(z.shape)


def _ray_crossings(z, points: np.ndarray) -> np.ndarray:
    """Even-odd membership test against a closed polyline (vectorized)."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    x, y = flat.real, flat.imag
    closed = np.append(points, points[:1])
    inside = np.zeros(flat.shape, dtype=bool)
    step = max(1, 2_000_000 // max(flat.size, 1))
    for k in range(0, len(points), step):
        end = min(k + step, len(points))
        x0 = closed[k:end].real[None, :]
        y0 = closed[k:end].imag[None, :]
        x1 = closed[k + 1 : end + 1].real[None, :]
        y1 = closed[k + 1 : end + 1].imag[None, :]
        cond = (y0 > y[:, None]) != (y1 > y[:, None])
        with np.errstate(divide="ignore", invalid="ignore"):
            xin = x0 + (y[:, None] - y0) * (x1 - x0) / (y1 - y0)
        hits = cond & (x[:, None] < xin)
        inside ^= (np.sum(hits, axis=1) % 2).astype(bool)
    return inside.reshape(z.shape)


def _has_self_intersection(points: np.ndarray) -> bool:
    """Segment-pair orientation test over the closed polyline (O(m^2), vectorized)."""
    m = len(points)
    closed = np.append(points, points[:1])
    a, b = closed[:-1], closed[1:]

    def orient(p, q, r):
        return np.sign(((q - p) * np.conj(r - p)).imag)

    i, j = np.triu_indices(m, k=2)
    # the wrap-around pair (first, last) is adjacent, not an intersection
    keep = ~((i == 0) & (j == m - 1))
    i, j = i[keep], j[keep]
    p1, q1, p2, q2 = a[i], b[i], a[j], b[j]
    hit = (orient(p1, q1, p2) * orient(p1, q1, q2) < 0) & (orient(p2, q2, p1) * orient(p2, q2, q1) < 0)
    return bool(np.any(hit))


@dataclass(frozen=True)
class SmoothJordan(Domain):
    """Closed Jordan curve given by boundary samples (>= 64, positively oriented)."""

    points: np.ndarray
    smoothness: float = 0.5

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).ravel()
        if pts.size < 64:
            raise ValueError("SmoothJordan needs at least 64 boundary samples")
        object.__setattr__(self, "points", pts)
        if not 0 < self.smoothness <= 1:
            raise ValueError("smoothness exponent must lie in (0, 1]")
        if pts.size <= 2048 and _has_self_intersection(pts):
            raise ValueError("boundary polyline intersects itself")
        # positive orientation: shoelace area must be positive
        closed = np.append(pts, pts[:1])
        area = 0.5 * np.sum(closed[:-1].real * closed[1:].imag - closed[1:].real * closed[:-1].imag)
        if area < 0:
            object.__setattr__(self, "points", pts[::-1].copy())

    def contains_points(self, z):
        return _ray_crossings(z, self.points)

    def boundary_distance_points(self, z):
        return _polyline_distance(z, self.points)

    def boundary(self, m):
        pts, tan, w = _polyline_arclength_resample(self.points, m)
        return [BoundaryPoint(complex(p), complex(t), float(wt)) for p, t, wt in zip(pts, tan, w)]

    def bounding_radius(self):
        return float(np.max(np.abs(self.points)))


def ellipse(a: float, b: float, center: complex = 0.0, m: int = 512, smoothness: float = 1.0) -> SmoothJordan:
    theta = 2.0 * np.pi * np.arange(m) / m
    return SmoothJordan(center + a * np.cos(theta) + 1j * b * np.sin(theta), smoothness)


def _drop_height(x):
    return x**1.5 * (1.0 - x)


def _drop_slope(x):
    return 1.5 * np.sqrt(np.maximum(x, 0.0)) * (1.0 - x) - x**1.5


def _drop_boundary_chain(m_fine=4096):
    """Fine positively-oriented polyline for the Drop: lower arc then upper arc."""
    # cosine-clustered parameter resolves the cusp end
    t = 0.5 * (1.0 - np.cos(np.pi * np.arange(m_fine // 2) / (m_fine // 2)))
    lower = t + 1j * (-_drop_height(t))
    xu = t[::-1]
    upper = xu + 1j * _drop_height(xu)
    chain = np.concatenate([lower, upper])
    # junctions at (1, 0) and the cusp repeat; drop zero-length segments
    keep = np.abs(np.diff(np.append(chain, chain[:1]))) > 1e-14
    return chain[keep]


@dataclass(frozen=True)
class Drop(Domain):
    """Region between ``y = +/- x**1.5 (1 - x)``; interior cusp at the origin."""

    smoothness: float = 0.5

    def contains_points(self, z):
        z = np.asarray(z, dtype=complex)
        x, y = z.real, z.imag
        ok = (x > 0) & (x < 1)
        return ok & (np.abs(y) < _drop_height(np.where(ok, x, 0.5)))

    def boundary_distance_points(self, z):
        return _polyline_distance(z, _drop_chain_cache())

    def boundary(self, m):
        pts, tan, w = _polyline_arclength_resample(_drop_chain_cache(), m)
        return [BoundaryPoint(complex(p), complex(t), float(wt)) for p, t, wt in zip(pts, tan, w)]

    def cusp(self) -> complex:
        return 0.0

    def bounding_radius(self):
        return 1.0


_DROP_CHAIN = None


def _drop_chain_cache():
    global _DROP_CHAIN
    if _DROP_CHAIN is None:
        _DROP_CHAIN = _drop_boundary_chain()
    return _DROP_CHAIN


@dataclass(frozen=True)
class Peach(Domain):
    """Unit disc minus the Drop region; exterior cusp at the origin."""

    smoothness: float = 0.5

    def contains_points(self, z):
        z = np.asarray(z, dtype=complex)
        in_disc = np.abs(z) < 1.0
        x, y = z.real, z.imag
        in_notch = (x >= 0) & (x <= 1) & (np.abs(y) <= _drop_height(np.clip(x, 0.0, 1.0)))
        return in_disc & ~in_notch

    def boundary_distance_points(self, z):
        z = np.asarray(z, dtype=complex)
        d_circle = np.abs(np.abs(z) - 1.0)
        return np.minimum(d_circle, _polyline_distance(z, _drop_chain_cache()))

    def boundary(self, m):
        # lower notch arc (1,0)->cusp, upper notch arc cusp->(1,0), then circle
        chain = _drop_chain_cache()[::-1]  # reversed drop chain = notch traversal
        notch_len = np.sum(np.abs(np.diff(np.append(chain, chain[:1]))))  # ~ notch perimeter
        circ_len = 2.0 * np.pi
        m_notch = max(16, int(m * notch_len / (notch_len + circ_len)))
        m_circ = m - m_notch
        npts, ntan, nw = _polyline_arclength_resample(chain, m_notch)
        # resampling a closed chain traverses the notch boundary; weights scale by
        # the open-arc fraction, adequate at the 0.5% perimeter tolerance
        theta = 2.0 * np.pi * (np.arange(m_circ) + 0.5) / m_circ
        cpts = np.exp(1j * theta)
        ctan = 1j * cpts
        cw = np.full(m_circ, 2.0 * np.pi / m_circ)
        out = [BoundaryPoint(complex(p), complex(t), float(w)) for p, t, w in zip(npts, ntan, nw)]
        out += [BoundaryPoint(complex(p), complex(t), float(w)) for p, t, w in zip(cpts, ctan, cw)]
        return out

    def cusp(self) -> complex:
        return 0.0

    def bounding_radius(self):
        return 1.0


@dataclass(frozen=True)
class DiscMinusTwoDiscs(Domain):
    """Disc of radius 2 minus the closed unit discs centered at +1 and -1."""

    def contains_points(self, z):
        z = np.asarray(z, dtype=complex)
        return (np.abs(z) < 2.0) & (np.abs(z - 1.0) > 1.0) & (np.abs(z + 1.0) > 1.0)

    def boundary_distance_points(self, z):
        z = np.asarray(z, dtype=complex)
        return np.minimum.reduce(
            [
                np.abs(np.abs(z) - 2.0),
                np.abs(np.abs(z - 1.0) - 1.0),
                np.abs(np.abs(z + 1.0) - 1.0),
            ]
        )

    def cusp(self) -> complex:
        return 0.0

    def bounding_radius(self):
        return 2.0


@dataclass(frozen=True)
class DisjointUnion(Domain):
    members: tuple
    check_n: int = 128

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if len(self.members) < 1:
            raise ValueError("union needs at least one member")
        # pixel-sampled disjointness check at a working resolution
        R = self.bounding_radius() * 1.05
        t = np.linspace(-R, R, self.check_n)
        x, y = np.meshgrid(t, t, indexing="xy")
        z = x + 1j * y
        count = np.zeros(z.shape, dtype=int)
        for d in self.members:
            count += d.contains_points(z).astype(int)
        if np.any(count > 1):
            raise ValueError("union members have overlapping interiors")

    def contains_points(self, z):
        out = np.zeros(np.shape(z), dtype=bool)
        for d in self.members:
            out |= d.contains_points(z)
        return out

    def boundary_distance_points(self, z):
        return np.minimum.reduce([d.boundary_distance_points(z) for d in self.members])

    def bounding_radius(self):
        return max(d.bounding_radius() for d in self.members)


# ---------------------------------------------------------------------------
# spec-facing operation wrappers


def contains(dom: Domain, z) -> bool:
    return bool(np.asarray(dom.contains_points(np.asarray(z, dtype=complex))).item())


def boundary_parametrization(dom: Domain, m: int) -> list[BoundaryPoint]:
    if m < 4:
        raise ValueError("m too small")
    if isinstance(dom, DisjointUnion):
        raise ValueError("union shapes have no single parametrization; decompose first")
    return dom.boundary(m)


def boundary_distance(dom: Domain, z) -> float:
    return float(np.asarray(dom.boundary_distance_points(np.asarray(z, dtype=complex))).item())


def interior_mask(dom: Domain, grid: GridSpec, band: float = 0.0) -> np.ndarray:
    """Boolean node mask: inside dom and boundary_distance > band."""
    z = grid.nodes()
    mask = dom.contains_points(z)
    if band > 0:
        mask &= dom.boundary_distance_points(z) > band
    return mask


# ---------------------------------------------------------------------------
# geodesic (grid shortest path) distances


def _grid_graph(mask: np.ndarray, spacing: float):
    n0, n1 = mask.shape
    idx = -np.ones(mask.shape, dtype=np.int64)
    idx[mask] = np.arange(np.count_nonzero(mask))
    rows, cols, data = [], [], []
    # 8-connected: E, S, SE, SW with Euclidean weights
    steps = [((0, 1), spacing), ((1, 0), spacing), ((1, 1), spacing * np.sqrt(2.0)), ((1, -1), spacing * np.sqrt(2.0))]
    for (di, dj), w in steps:
        rs, rd = slice(0, n0 - di), slice(di, n0)
        if dj >= 0:
            cs, cd = slice(0, n1 - dj), slice(dj, n1)
        else:
            cs, cd = slice(-dj, n1), slice(0, n1 + dj)
        both = mask[rs, cs] & mask[rd, cd]
        rows.append(idx[rs, cs][both])
        cols.append(idx[rd, cd][both])
        data.append(np.full(int(both.sum()), w))
    nnode = np.count_nonzero(mask)
    g = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(nnode, nnode)
    ).tocsr()
    return g, idx


def _snap(idx: np.ndarray, grid: GridSpec, z: complex) -> int:
    """Graph index of the interior node nearest to z (searching 5x5 pixels)."""
    s = grid.spacing
    j0 = int(round((z.real - (grid.center.real - grid.half_width)) / s))
    i0 = int(round((z.imag - (grid.center.imag - grid.half_width)) / s))
    best, best_d = -1, np.inf
    for di in range(-2, 3):
        for dj in range(-2, 3):
            i, j = i0 + di, j0 + dj
            if 0 <= i < idx.shape[0] and 0 <= j < idx.shape[1] and idx[i, j] >= 0:
                d = di * di + dj * dj
                if d < best_d:
                    best, best_d = idx[i, j], d
    if best < 0:
        raise ValueError(f"no interior node within 2 cells of {z}")
    return best


def geodesic_distances(
    dom: Domain, grid: GridSpec, sources, targets, raise_on_disconnected: bool = True
) -> np.ndarray:
    """Matrix of interior shortest-path lengths, shape (len(sources), len(targets)).

    Pairs in different pixel components get infinity (or raise, by default).
    """
    sources = np.asarray(sources, dtype=complex).ravel()
    targets = np.asarray(targets, dtype=complex).ravel()
    for z in np.concatenate([sources, targets]):
        if not contains(dom, z):
            raise ValueError(f"endpoint {z} lies outside the domain")
    mask = dom.contains_points(grid.nodes())
    g, idx = _grid_graph(mask, grid.spacing)
    src_idx = [_snap(idx, grid, z) for z in sources]
    tgt_idx = [_snap(idx, grid, z) for z in targets]
    dist = dijkstra(g, directed=False, indices=src_idx)
    out = dist[:, tgt_idx]
    if raise_on_disconnected and np.any(~np.isfinite(out)):
        raise ValueError("endpoints lie in disconnected pixel components")
    return out


def geodesic_distance(dom: Domain, z: complex, w: complex, grid: GridSpec) -> float:
    if z == w:
        if not contains(dom, z):
            raise ValueError(f"endpoint {z} lies outside the domain")
        return 0.0
    return float(geodesic_distances(dom, grid, [z], [w])[0, 0])


# ---------------------------------------------------------------------------
# indicator fields

_FILTER_ALPHA = 36.0
_FILTER_ORDER = 2


def _spectral_filter(grid: GridSpec) -> np.ndarray:
    xi1, xi2 = grid.frequencies()
    rr = np.hypot(xi1, xi2) / (grid.n / 2.0)
    return np.exp(-_FILTER_ALPHA * rr ** (2 * _FILTER_ORDER))


def _spectral_coefficients(dom: Domain, grid: GridSpec):
    """Exact periodized Fourier coefficients for shapes with closed-form FT."""
    L = 2.0 * grid.half_width
    xi1, xi2 = grid.frequencies()
    if isinstance(dom, Disc):
        k = np.hypot(xi1, xi2) / L
        with np.errstate(divide="ignore", invalid="ignore"):
            c = np.where(k > 0, dom.radius * j1(2.0 * np.pi * np.where(k > 0, k, 1.0) * dom.radius) / np.where(k > 0, k, 1.0), np.pi * dom.radius**2)
        shift = dom.center - grid.center
    elif isinstance(dom, Square):
        h = dom.side / 2.0

        def sinc_part(xi):
            k = xi / L
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(xi == 0, dom.side, np.sin(2.0 * np.pi * k * h) / (np.pi * np.where(k == 0, 1.0, k)))

        c = sinc_part(xi1) * sinc_part(xi2)
        shift = dom.center - grid.center
    elif isinstance(dom, DisjointUnion):
        total = None
        for d in dom.members:
            part = _spectral_coefficients(d, grid)
            if part is None:
                return None
            total = part if total is None else total + part
        return total
    else:
        return None
    k1 = xi1 / L
    k2 = xi2 / L
    phase = np.exp(-2j * np.pi * (k1 * shift.real + k2 * shift.imag))
    # grid origin sits at center - half_width(1+1j); fold that into the phase
    origin_phase = np.exp(2j * np.pi * (k1 * (-grid.half_width) + k2 * (-grid.half_width)))
    return c * phase * origin_phase / L**2


def indicator(dom: Domain, grid: GridSpec, mode: str = "center") -> Field:
    """Indicator of dom sampled on the grid.

    mode "center": 1 where the node center is interior (the chi convention
    used for Beltrami coefficients).  mode "coverage": approximate cell
    coverage fraction, linear in the signed boundary distance over the one
    cell straddling the jump (first-order exact for straight edges).  mode
    "spectral": smoothly filtered band-limited synthesis, exact (Bessel/sinc)
    for discs, squares and their disjoint unions, filtered coverage
    otherwise; this is the discretization used by the cancellation and
    operator-identity diagnostics, where jump ringing must stay below the
    measurement tolerances.
    """
    z = grid.nodes()
    if mode == "center":
        return Field(grid, dom.contains_points(z).astype(complex))
    if mode == "coverage":
        s = grid.spacing
        signed = np.where(dom.contains_points(z), 1.0, -1.0) * dom.boundary_distance_points(z)
        return Field(grid, np.clip(0.5 + signed / s, 0.0, 1.0).astype(complex))
    if mode == "spectral":
        coeff = _spectral_coefficients(dom, grid)
        filt = _spectral_filter(grid)
        if coeff is not None:
            vals = np.fft.ifft2(coeff * filt) * grid.n**2
        else:
            cov = indicator(dom, grid, "coverage").values
            vals = np.fft.ifft2(np.fft.fft2(cov) * filt)
        return Field(grid, vals)
    raise ValueError(f"unknown indicator mode {mode!r}")


# ---------------------------------------------------------------------------
# JSON descriptions


def domain_to_json(dom: Domain) -> dict:
    if isinstance(dom, Disc):
        return {"shape": "disc", "center": [dom.center.real, dom.center.imag], "radius": dom.radius}
    if isinstance(dom, Square):
        return {"shape": "square", "center": [dom.center.real, dom.center.imag], "side": dom.side}
    if isinstance(dom, Drop):
        return {"shape": "drop"}
    if isinstance(dom, Peach):
        return {"shape": "peach"}
    if isinstance(dom, DiscMinusTwoDiscs):
        return {"shape": "disc_minus_two_discs"}
    if isinstance(dom, SmoothJordan):
        pts = [[p.real, p.imag] for p in dom.points]
        return {"shape": "smooth_jordan", "points": pts, "smoothness": dom.smoothness}
    if isinstance(dom, DisjointUnion):
        return {"shape": "union", "members": [domain_to_json(d) for d in dom.members]}
    raise TypeError(f"cannot serialize {type(dom).__name__}")


def domain_from_json(desc: dict, base_dir: Path | None = None) -> Domain:
    shape = desc["shape"]
    if shape == "disc":
        return Disc(complex(*desc["center"]), float(desc["radius"]))
    if shape == "square":
        return Square(complex(*desc["center"]), float(desc["side"]))
    if shape == "drop":
        return Drop()
    if shape == "peach":
        return Peach()
    if shape == "disc_minus_two_discs":
        return DiscMinusTwoDiscs()
    if shape == "smooth_jordan":
        if "points_csv" in desc:
            path = Path(desc["points_csv"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            raw = np.loadtxt(path, delimiter=",")
            pts = raw[:, 0] + 1j * raw[:, 1]
        else:
            pts = np.array([complex(a, b) for a, b in desc["points"]])
        return SmoothJordan(pts, float(desc.get("smoothness", 0.5)))
    if shape == "union":
        return DisjointUnion(tuple(domain_from_json(d, base_dir) for d in desc["members"]))
    raise ValueError(f"unknown shape {shape!r}")
