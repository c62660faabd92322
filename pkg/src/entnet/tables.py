"""Deterministic serialization of tables, states, and matrices.

Identical inputs must serialize byte-identically: every float goes through
the same 12-significant-digit formatter, every collection is emitted in
canonical order, and state cells are rotated to a fixed global phase.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from typing import Iterable, Sequence

from .herald import DetectionPattern, ProjectionRow
from .interferometers import MultiportMatrix
from .states import QubitState

SIG_DIGITS = 12
RATIONAL_MAX_DEN = 1024
RATIONAL_TOL = 1e-9


def fmt(x: float) -> str:
    """Fixed formatting at 12 significant digits (no trailing junk)."""
    return f"{float(x):.{SIG_DIGITS}g}"


def rational_label(x: float, max_den: int = RATIONAL_MAX_DEN) -> str:
    """Nearest small rational when one is within tolerance, else ''."""
    frac = Fraction(x).limit_denominator(max_den)
    if abs(float(frac) - x) <= RATIONAL_TOL:
        return f"{frac.numerator}/{frac.denominator}"
    return ""


def probability_cell(p: float) -> tuple[str, str]:
    return fmt(p), rational_label(p)


def state_cell(state: QubitState) -> str:
    """``bits:re:im`` entries joined by ``;`` with a canonical global phase."""
    canon = state.phase_canonical()
    parts = []
    for bits, a in sorted(canon.amplitudes.items()):
        parts.append(f"{bits}:{fmt(a.real)}:{fmt(a.imag)}")
    return ";".join(parts)


ROW_FIELDS = ("pattern", "state", "probability", "probability_rational", "class")


def rows_to_records(rows: Sequence[ProjectionRow],
                    suppressed: Iterable[DetectionPattern] = ()) -> list[dict]:
    records = []
    for row in rows:
        dec, rat = probability_cell(row.probability)
        rec = {
            "pattern": row.pattern.label(),
            "state": state_cell(row.state),
            "probability": dec,
            "probability_rational": rat,
            "class": row.state_class(),
        }
        if row.dicke_fidelity is not None:
            rec["dicke_fidelity"] = fmt(row.dicke_fidelity)
        records.append(rec)
    for pat in suppressed:
        records.append({"pattern": pat.label(), "state": "", "probability": fmt(0.0),
                        "probability_rational": "0", "class": "suppressed"})
    return records


def records_to_csv(records: Sequence[dict], fieldnames: Sequence[str] | None = None) -> str:
    if fieldnames is None:
        fieldnames = list(records[0].keys()) if records else list(ROW_FIELDS)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, extrasaction="ignore",
                            lineterminator="\r\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(rec)
    return buf.getvalue()


def complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def matrix_to_doc(u: MultiportMatrix) -> dict:
    """Row-major JSON form with [re, im] entries."""
    return {
        "label": u.label,
        "dim": u.dim,
        "entries": [[complex_pair(z) for z in row] for row in u.entries],
    }


def state_to_doc(state: QubitState) -> dict:
    canon = state.phase_canonical()
    return {bits: complex_pair(a) for bits, a in sorted(canon.amplitudes.items())}
