"""JSON and CSV formats for designs, partner potentials and tabulated data.

Floats are written with Python's shortest round-trip repr, so every value
reads back bit-for-bit. CSV files use a comma separator, ``\\n`` line endings
and a mandatory header row.
"""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import asdict, is_dataclass
from enum import Enum
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from .core import Boundary, PiecewiseLinearWave, UnitSystem, WellDomain
from .designer import ZcDesign, critical_strengths
from .errors import ZcDomainError
from .susy import PartnerPotential

UNITS_ENV = "ZCWELL_UNITS"


def _plain(obj: Any) -> Any:
    if is_dataclass(obj) and not isinstance(obj, type):
        return _plain(asdict(obj))
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON text; NaN is written as null."""
    def clean(v):
        if isinstance(v, float) and v != v:
            return None
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, list):
            return [clean(x) for x in v]
        return v
    return json.dumps(clean(_plain(obj)), indent=2, allow_nan=False) + "\n"


def units_override(environ: Optional[dict] = None) -> Optional[tuple[float, float, float]]:
    """Parse ``ZCWELL_UNITS=hbar,mass,a``; None when unset."""
    env = os.environ if environ is None else environ
    raw = env.get(UNITS_ENV, "").strip()
    if not raw:
        return None
    parts = raw.split(",")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise ZcDomainError(f"{UNITS_ENV} must be 'hbar,mass,a', got {raw!r}") from None
    if len(vals) != 3 or not all(v > 0 for v in vals):
        raise ZcDomainError(f"{UNITS_ENV} needs three positive numbers 'hbar,mass,a', got {raw!r}")
    return vals


def design_to_dict(design: ZcDesign) -> dict:
    wave = design.wave
    return {
        "a": wave.width,
        "hbar": design.units.hbar,
        "mass": design.units.mass,
        "boundary": wave.domain.boundary.value,
        "knots": [[float(x), float(p)] for x, p in zip(wave.x, wave.psi)],
        "spikes": [{"position": s.position, "strength": s.strength} for s in design.spikes],
    }


def design_from_dict(data: dict, units: UnitSystem | None = None) -> ZcDesign:
    """Rebuild a design from its JSON form; spikes are always recomputed.

    ``units`` overrides the file's ``hbar`` and ``mass``.
    """
    try:
        width = float(data.get("a", 1.0))
        if units is None:
            units = UnitSystem(float(data.get("hbar", 1.0)), float(data.get("mass", 1.0)))
        boundary = Boundary(data.get("boundary", "dirichlet"))
        knots = [(float(x), float(p)) for x, p in data["knots"]]
    except KeyError as exc:
        raise ZcDomainError(f"design file is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ZcDomainError(f"malformed design file: {exc}") from None
    wave = PiecewiseLinearWave(WellDomain(width, boundary), knots)
    return critical_strengths(wave, units)


def read_design(path: str, units: UnitSystem | None = None) -> ZcDesign:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ZcDomainError(f"{path} is not valid JSON: {exc}") from None
    return design_from_dict(data, units)


def partner_to_dict(partner: PartnerPotential) -> dict:
    smooth = []
    for seg in partner.smooth:
        if seg.zero:
            smooth.append({"interval": [seg.x_lo, seg.x_hi], "zero": True})
        else:
            smooth.append({"interval": [seg.x_lo, seg.x_hi], "pole": seg.pole, "K": seg.K})
    return {"spikes": [[s.position, s.strength] for s in partner.spikes], "smooth": smooth}


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
