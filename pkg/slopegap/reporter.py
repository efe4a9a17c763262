"""JSON and CSV payloads for every command."""

import csv
import io
import json
from typing import Any, Dict, Iterable, List, Optional, Sequence

import mpmath

from slopegap.closed_form import ClosedFormComparison
from slopegap.config import SurfaceConfig
from slopegap.distribution import Breakpoint, PiecewiseDistribution, VolumeResult
from slopegap.geometry import Vec2
from slopegap.oracle import EmpiricalGaps
from slopegap.realfield import FieldElement
from slopegap.subdivision import WinnerRegion
from slopegap.winners import WinnerRecord

DISTRIBUTION_COLUMNS = ("t", "pdf", "cdf")
GAP_COLUMNS = ("index", "slope", "gap")
HISTOGRAM_COLUMNS = ("bin_lo", "bin_hi", "density")


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2)


def element(e: FieldElement) -> Dict[str, Any]:
    return {"coefficients": e.as_strings(), "decimal": float(e)}


def vector(v: Vec2) -> Dict[str, Any]:
    return {"x": element(v.x), "y": element(v.y)}


def _mp(x, digits: int = 17) -> str:
    return mpmath.nstr(x, digits)


def winners_payload(config: SurfaceConfig, records: Sequence[WinnerRecord]) -> Dict[str, Any]:
    return {
        "surface": config.name,
        "top_edge": {"left": element(config.transversal.a_left), "right": element(config.transversal.a_right)},
        "winners": [
            {
                "index": r.index,
                "vector": vector(r.vector),
                "sheared": vector(r.sheared),
                "surface_vector": vector(r.surface_vector),
                "interval": {"open_left": element(r.a_next), "closed_right": element(r.a_cur)},
            }
            for r in records
        ],
    }


def regions_payload(config: SurfaceConfig, regions: Sequence[WinnerRegion]) -> Dict[str, Any]:
    return {
        "surface": config.name,
        "omega_area": element(config.transversal.area()),
        "regions": [
            {
                "index": region.record.index,
                "winner": vector(region.vector),
                "area": element(region.area()),
                "pieces": [[vector(v) for v in piece.vertices] for piece in region.pieces],
            }
            for region in regions
        ],
    }


def breakpoint_row(bp: Breakpoint, index: int) -> Dict[str, Any]:
    return {"index": index, "value": element(bp.value), "regions": list(bp.regions)}


def breakpoints_payload(config: SurfaceConfig, dist: PiecewiseDistribution) -> Dict[str, Any]:
    return {
        "surface": config.name,
        "count": len(dist.breakpoints),
        "breakpoints": [breakpoint_row(bp, i) for i, bp in enumerate(dist.breakpoints, 1)],
    }


def volume_payload(config: SurfaceConfig, result: VolumeResult) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "surface": config.name,
        "volume": _mp(result.value),
        "error_estimate": _mp(result.error, 3),
        "converged": result.converged,
        "divergent": result.divergent,
        "regions": [
            {"index": r.index, "volume": _mp(r.value), "error_estimate": _mp(r.error, 3)} for r in result.regions
        ],
    }
    expected = config.expected.volume
    if expected is not None and not result.divergent:
        data["expected"] = expected
        data["deviation"] = float(abs(result.value - expected))
    return data


def write_rows(header: Sequence[str], rows: Iterable[Sequence[Any]], out: Optional[io.TextIOBase] = None) -> str:
    """CSV with a header row; returns the text when `out` is None."""
    buffer = out if out is not None else io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue() if out is None else ""


def distribution_rows(grid: Sequence) -> List[List[str]]:
    return [[_mp(t, 12), "" if f is None else _mp(f, 15), _mp(c, 15)] for t, f, c in grid]


def gap_rows(emp: EmpiricalGaps) -> List[List[Any]]:
    return [[i, repr(float(s)), repr(float(g))] for i, (s, g) in enumerate(zip(emp.slopes[:-1], emp.gaps))]


def histogram_rows(densities, edges) -> List[List[Any]]:
    return [[repr(float(lo)), repr(float(hi)), repr(float(d))] for lo, hi, d in zip(edges[:-1], edges[1:], densities)]


def empirical_payload(config: SurfaceConfig, emp: EmpiricalGaps, ks: Optional[float]) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "surface": config.name,
        "radius": emp.radius,
        "connections": emp.connections,
        "slopes": int(emp.slopes.size),
        "min_gap": emp.min_gap,
        "max_gap": float(emp.gaps.max()),
        "mean_gap": float(emp.gaps.mean()),
    }
    if ks is not None:
        data["ks_distance"] = ks
    return data


def closed_form_payload(config: SurfaceConfig, report: ClosedFormComparison) -> Dict[str, Any]:
    return {
        "surface": config.name,
        "tolerance": report.tolerance,
        "total": {"max_deviation": report.total_max_deviation, "at_t": report.total_worst_t},
        "branches": [
            {
                "region": b.region,
                "case": b.case,
                "branch": b.label,
                "samples": b.samples,
                "max_deviation": b.max_deviation,
                "at_t": b.worst_t,
                "agrees": b.max_deviation <= report.tolerance,
            }
            for b in report.branches
        ],
        "located_discrepancies": [b.label for b in report.located],
    }


def checks_payload(config: SurfaceConfig, results) -> Dict[str, Any]:
    return {
        "surface": config.name,
        "passed": all(r.passed for r in results),
        "checks": [
            {"name": r.name, "passed": r.passed, "measured": r.measured, "target": r.target, "seconds": round(r.seconds, 2)}
            for r in results
        ],
    }
