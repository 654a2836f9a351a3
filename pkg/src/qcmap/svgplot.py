"""Hand-written SVG output: heatmaps (base64 PNG tiles) and log-log traces.

No plotting dependency: PNG scanlines are zlib-compressed directly and the
SVG is assembled as text.  Timestamps and any other nondeterministic metadata
are deliberately absent so identical inputs give identical bytes.
"""

from __future__ import annotations

import base64
import struct
import zlib

import numpy as np

__all__ = ["heatmap_svg", "loglog_svg"]


def _png_chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
    )


def _png_bytes(rgb: np.ndarray) -> bytes:
    h, w, _ = rgb.shape
    raw = b"".join(b"\x00" + rgb[i].tobytes() for i in range(h))
    return (
        b"\x89PNG\r\n\x1a\n"
        + _png_chunk(b"IHDR", struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0))
        + _png_chunk(b"IDAT", zlib.compress(raw, 6))
        + _png_chunk(b"IEND", b"")
    )


_STOPS = np.array(
    [[13, 8, 135], [126, 3, 168], [204, 71, 120], [248, 149, 64], [240, 249, 33]], dtype=float
)


def _colorize(a: np.ndarray) -> np.ndarray:
    lo, hi = float(np.min(a)), float(np.max(a))
    t = np.zeros_like(a) if hi <= lo else (a - lo) / (hi - lo)
    pos = t * (len(_STOPS) - 1)
    i = np.clip(pos.astype(int), 0, len(_STOPS) - 2)
    frac = (pos - i)[..., None]
    rgb = _STOPS[i] * (1 - frac) + _STOPS[i + 1] * frac
    return rgb.astype(np.uint8)


def heatmap_svg(a: np.ndarray, title: str = "", size: int = 640) -> str:
    """SVG with the array rendered as an embedded PNG tile (origin lower-left)."""
    rgb = _colorize(np.asarray(a, dtype=float)[::-1])  # flip so y grows upward
    data = base64.b64encode(_png_bytes(rgb)).decode("ascii")
    lo, hi = float(np.min(a)), float(np.max(a))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + 40}">'
        f'<text x="8" y="16" font-family="monospace" font-size="13">{title}</text>'
        f'<text x="8" y="{size + 34}" font-family="monospace" font-size="11">'
        f"min={lo:.4g} max={hi:.4g}</text>"
        f'<image x="0" y="24" width="{size}" height="{size}" preserveAspectRatio="none" '
        f'href="data:image/png;base64,{data}"/></svg>'
    )


def loglog_svg(traces: dict[str, list[tuple[float, float]]], title: str = "", size: int = 560) -> str:
    """Log-log polyline plot of named (x, y) traces."""
    pts = [(x, y) for tr in traces.values() for x, y in tr if x > 0 and y > 0]
    if not pts:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}"><text x="8" y="16">{title}: empty</text></svg>'
    xs = np.log10([p[0] for p in pts])
    ys = np.log10([p[1] for p in pts])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    x1 += 1e-9 + 0.05 * (x1 - x0)
    y1 += 1e-9 + 0.05 * (y1 - y0)
    pad, inner = 50, size - 80

    def sx(x):
        return pad + inner * (np.log10(x) - x0) / (x1 - x0)

    def sy(y):
        return pad + inner * (1 - (np.log10(y) - y0) / (y1 - y0))

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
        f'<text x="8" y="16" font-family="monospace" font-size="13">{title}</text>',
        f'<rect x="{pad}" y="{pad}" width="{inner}" height="{inner}" fill="none" stroke="#888"/>',
    ]
    for i, (name, tr) in enumerate(sorted(traces.items())):
        color = colors[i % len(colors)]
        path = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in tr if x > 0 and y > 0)
        parts.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{pad + 6}" y="{pad + 16 + 14 * i}" font-family="monospace" '
            f'font-size="11" fill="{color}">{name}</text>'
        )
    parts.append(
        f'<text x="{pad}" y="{size - 8}" font-family="monospace" font-size="10">'
        f"log10 x in [{x0:.2f}, {x1:.2f}], log10 y in [{y0:.2f}, {y1:.2f}]</text>"
    )
    parts.append("</svg>")
    return "".join(parts)
