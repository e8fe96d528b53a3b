"""JSON and CSV interchange formats.

Box files are ``{"d": int, "p": [[[[...]]]]}`` indexed ``[x][y][a][b]``.
Wiring files are ``{"d": int, "fa": ..., "fb": ..., "ga": ..., "gb": ...}``
with every table indexed ``[input][first-box output]``.
"""
from __future__ import annotations

import csv
import json

import numpy as np

from .boxes import Box
from .wiring import WiringSpec

EFFICIENCY_HEADER = ("protocol", "d", "epsilon", "cglmp_initial", "cglmp_final")
REGION_HEADER = ("xi", "gamma", "d", "cglmp_initial", "cglmp_final", "works")
TRAJECTORY_HEADER = ("round", "epsilon", "cglmp", "copies", "oracle_residual")


def box_to_dict(box: Box) -> dict:
    return {"d": box.d, "p": box.p.tolist()}


def box_from_dict(data: dict) -> Box:
    try:
        return Box(int(data["d"]), np.asarray(data["p"], dtype=float))
    except KeyError as exc:
        raise ValueError(f"box JSON missing field {exc}") from None


def dump_box(box: Box, fp) -> None:
    json.dump(box_to_dict(box), fp)
    fp.write("\n")


def load_box(fp) -> Box:
    return box_from_dict(json.load(fp))


def wiring_to_dict(spec: WiringSpec) -> dict:
    return {"d": spec.d, **{k: getattr(spec, k).tolist() for k in ("fa", "fb", "ga", "gb")}}


def wiring_from_dict(data: dict) -> WiringSpec:
    try:
        return WiringSpec(int(data["d"]), *(np.asarray(data[k]) for k in ("fa", "fb", "ga", "gb")))
    except KeyError as exc:
        raise ValueError(f"wiring JSON missing field {exc}") from None


def fmt(value) -> str:
    """12 significant digits; infinite dimensions print as ``inf``."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def write_csv(fp, header, rows) -> None:
    """Stream rows (tuples of raw values) to ``fp``."""
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
