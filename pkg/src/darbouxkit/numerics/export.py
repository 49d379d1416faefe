"""CSV and SVG export of trajectories."""

from __future__ import annotations

import csv
from pathlib import Path
from xml.sax.saxutils import escape

from .integrator import Trajectory

PLANES = {"xy": (0, 1), "xz": (0, 2), "yz": (1, 2)}
AXIS_NAMES = "xyz"


def parse_plane(text: str) -> tuple[int, int]:
    key = text.replace(",", "").replace("(", "").replace(")", "").replace(" ", "").lower()
    if key not in PLANES:
        raise ValueError(f"plane must be one of xy, xz, yz (got {text!r})")
    return PLANES[key]


def write_csv(traj: Trajectory, path: str | Path) -> None:
    """Header ``t,x,y,z``; floats in shortest round-trip form."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x", "y", "z"])
        for t, s in zip(traj.times, traj.states):
            w.writerow([repr(t)] + [repr(v) for v in s[:3]])


def read_csv(path: str | Path) -> Trajectory:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["t", "x", "y", "z"]:
        raise ValueError(f"{path}: expected header t,x,y,z")
    times = [float(r[0]) for r in rows[1:]]
    states = [tuple(float(v) for v in r[1:4]) for r in rows[1:]]
    return Trajectory(times, states)


def svg_projection(traj: Trajectory, plane: str | tuple[int, int], width: int = 800, height: int = 600) -> str:
    """Standalone SVG 1.1 document with one polyline of the chosen projection."""
    i, j = parse_plane(plane) if isinstance(plane, str) else plane
    us = [s[i] for s in traj.states]
    vs = [s[j] for s in traj.states]
    margin = 50
    if us:
        umin, umax, vmin, vmax = min(us), max(us), min(vs), max(vs)
    else:
        umin = vmin = -1.0
        umax = vmax = 1.0
    du = (umax - umin) or 1.0
    dv = (vmax - vmin) or 1.0
    sx = (width - 2 * margin) / du
    sy = (height - 2 * margin) / dv
    points = " ".join(
        f"{margin + (u - umin) * sx:.2f},{height - margin - (v - vmin) * sy:.2f}" for u, v in zip(us, vs)
    )
    hname, vname = AXIS_NAMES[i], AXIS_NAMES[j]
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'  <rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n'
        f'  <rect x="{margin}" y="{margin}" width="{width - 2 * margin}" height="{height - 2 * margin}" '
        'fill="none" stroke="#888" stroke-width="1"/>\n'
        f'  <polyline fill="none" stroke="#1f4e9c" stroke-width="0.6" points="{points}"/>\n'
        f'  <text x="{width / 2}" y="{height - 15}" text-anchor="middle" font-size="16">{escape(hname)}</text>\n'
        f'  <text x="15" y="{height / 2}" text-anchor="middle" font-size="16" '
        f'transform="rotate(-90 15 {height / 2})">{escape(vname)}</text>\n'
        f'  <text x="{margin}" y="{height - margin + 18}" font-size="11">{umin:.4g}</text>\n'
        f'  <text x="{width - margin}" y="{height - margin + 18}" text-anchor="end" font-size="11">{umax:.4g}</text>\n'
        f'  <text x="{margin - 4}" y="{height - margin}" text-anchor="end" font-size="11">{vmin:.4g}</text>\n'
        f'  <text x="{margin - 4}" y="{margin + 10}" text-anchor="end" font-size="11">{vmax:.4g}</text>\n'
        "</svg>\n"
    )


def write_svg(traj: Trajectory, plane: str | tuple[int, int], path: str | Path, width: int = 800, height: int = 600) -> None:
    Path(path).write_text(svg_projection(traj, plane, width, height))


def export_trajectory(traj: Trajectory, path: str | Path, fmt: str = "csv", plane: str = "xy") -> None:
    """Dispatch on ``fmt`` in {csv, svg}; I/O errors propagate as OSError."""
    if fmt == "csv":
        write_csv(traj, path)
    elif fmt == "svg":
        write_svg(traj, plane, path)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
