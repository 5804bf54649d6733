"""Evaluate a scenario into a branch table and serialize it deterministically."""
from __future__ import annotations

import csv
import io
import json
import math
from itertools import product

from .entanglement import entanglement_entropy, spatial_entropy_ebits
from .fock import FockState, Spin
from .measurement import (
    COARSE_PATTERNS,
    FINE_PATTERNS,
    SX_VALUES,
    SZ_VALUES,
    project_path,
    sx_outcomes,
    project_sz_component,
)
from .scenarios import ScenarioSpec, output_state

PHASE_NOTE = "global phase is conventional (fixed mode order and beam-splitter row convention)"

# observable -> sectors, each sector one value per side; each observable is a completeness group
OBSERVABLES = {
    "sz_abs": list(product(SZ_VALUES, repeat=2)),
    "sx_total": list(product(SX_VALUES, repeat=2)),
    "path": list(product(FINE_PATTERNS, repeat=2)),
    "path_coarse": list(product(COARSE_PATTERNS, repeat=2)),
}

_PROJECTORS = {
    "sz_abs": project_sz_component,
    "path": project_path,
    "path_coarse": project_path,
}


def sector_name(sector) -> str:
    return "/".join(getattr(v, "value", str(v)) for v in sector)


def scenario_echo(spec: ScenarioSpec) -> dict:
    return {
        "statistics": spec.statistics.value,
        "signs": spec.signs,
        # + 0.0 turns -0.0 into 0.0
        "alpha": [spec.bs.alpha.real + 0.0, spec.bs.alpha.imag + 0.0],
        "beta": [spec.bs.beta.real + 0.0, spec.bs.beta.imag + 0.0],
    }


def _spatial(state: FockState):
    try:
        return spatial_entropy_ebits(state)
    except ValueError:
        return None


def branch_record(observable: str, sector, outcome) -> dict:
    state = outcome.state
    return {
        "observable": observable,
        "sector": sector_name(sector),
        "probability": outcome.probability,
        "post_state_entropy_ebits": None if state is None else entanglement_entropy(state),
        "spatial_entropy_ebits": None if state is None else _spatial(state),
    }


def term_records(state: FockState, component: str = "all") -> list[dict]:
    """Nonzero configurations of ``state`` in canonical order, optionally one |S_z| component."""
    if component not in ("all", "sz0", "sz1"):
        raise ValueError(f"component must be all, sz0 or sz1, got {component!r}")
    out = []
    for cfg, amp in state:
        if component != "all":
            ok = True
            for side in (1, 2):
                ups = sum(n for m, n in state.occupied(cfg) if m.side == side and m.spin is Spin.UP)
                dns = sum(n for m, n in state.occupied(cfg) if m.side == side and m.spin is Spin.DOWN)
                ok &= abs(ups - dns) == (0 if component == "sz0" else 2)
            if not ok:
                continue
        out.append({
            "amplitude_re": amp.real,
            "amplitude_im": amp.imag,
            "configuration": state.config_label(cfg),
        })
    return out


def build_report(spec: ScenarioSpec, terms: str | None = None) -> dict:
    """Full branch table for ``spec``; ``terms`` selects an optional term listing."""
    out = output_state(spec)
    branches = []
    for observable, sectors in OBSERVABLES.items():
        if observable == "sx_total":
            outcomes = sx_outcomes(out, sectors)
        else:
            outcomes = [_PROJECTORS[observable](out, sector) for sector in sectors]
        for sector, outcome in zip(sectors, outcomes):
            branches.append(branch_record(observable, sector, outcome))
    report = {
        "scenario": scenario_echo(spec),
        "total_entropy_ebits": entanglement_entropy(out),
        "branches": branches,
    }
    if terms is not None:
        report["phase_note"] = PHASE_NOTE
        report["terms"] = term_records(out, terms)
    return report


def find_branch(report: dict, observable: str, sector: str) -> dict:
    for b in report["branches"]:
        if b["observable"] == observable and b["sector"] == sector:
            return b
    raise KeyError(f"no branch {observable}:{sector}")


# --- serialization -------------------------------------------------------

def fmt_float(x: float) -> str:
    if x is None:
        return ""
    if x == 0:
        return "0"
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in report")
    return format(x, ".17g")


def _json(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_json(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(report: dict) -> str:
    """JSON with every float written to 17 significant digits."""
    return _json(report, 2, 0) + "\n"


BRANCH_COLUMNS = ("observable", "sector", "probability",
                  "post_state_entropy_ebits", "spatial_entropy_ebits")


def _cell(v) -> str:
    return fmt_float(v) if isinstance(v, float) or v is None else str(v)


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    sc = report["scenario"]
    head = ["statistics", "signs", "alpha_re", "alpha_im", "beta_re", "beta_im"]
    scen = [sc["statistics"], sc["signs"], *map(fmt_float, sc["alpha"]), *map(fmt_float, sc["beta"])]
    if "branches" in report:
        w.writerow(head + list(BRANCH_COLUMNS))
        w.writerow(scen + ["total", "all", "1", fmt_float(report["total_entropy_ebits"]), ""])
        for b in report["branches"]:
            w.writerow(scen + [_cell(b[c]) for c in BRANCH_COLUMNS])
    if "terms" in report:
        if "branches" in report:
            w.writerow([])
        w.writerow(head + ["amplitude_re", "amplitude_im", "configuration"])
        for t in report["terms"]:
            w.writerow(scen + [fmt_float(t["amplitude_re"]), fmt_float(t["amplitude_im"]),
                               " ".join(t["configuration"])])
    return buf.getvalue()


def _show(v) -> str:
    return "-" if v is None else f"{v:.6f}"


def to_text(report: dict) -> str:
    sc = report["scenario"]
    a, b = sc["alpha"], sc["beta"]
    lines = [
        f"statistics: {sc['statistics']}   signs: {sc['signs']}",
        f"alpha = {a[0]:+.6f}{a[1]:+.6f}i   beta = {b[0]:+.6f}{b[1]:+.6f}i",
    ]
    if "total_entropy_ebits" in report:
        lines.append(f"total entanglement: {report['total_entropy_ebits']:.6f} e-bits")
    if "branches" in report:
        lines.append("")
        lines.append(f"{'observable':<12} {'sector':<20} {'probability':>12} "
                     f"{'entropy':>10} {'spatial':>10}")
        for br in report["branches"]:
            lines.append(f"{br['observable']:<12} {br['sector']:<20} {br['probability']:>12.6f} "
                         f"{_show(br['post_state_entropy_ebits']):>10} "
                         f"{_show(br['spatial_entropy_ebits']):>10}")
    if "terms" in report:
        lines.append("")
        lines.append(f"terms ({PHASE_NOTE}):")
        for t in report["terms"]:
            lines.append(f"  {t['amplitude_re']:+.6f}{t['amplitude_im']:+.6f}i  "
                         + " ".join(t["configuration"]))
    return "\n".join(lines) + "\n"


FORMATTERS = {"json": to_json, "csv": to_csv, "text": to_text}
