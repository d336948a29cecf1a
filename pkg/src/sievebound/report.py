"""Reproduction rows and their JSON/Markdown rendering."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .optimizer import GSearchConfig, Objective, Range, SearchParams, search_G

# Published targets for the headline reproduction.
H_POINT = SearchParams(0.14, 0.23, 0.449, 0.011)
H_TARGET = 1.2471
OMEGA_TARGET = 11.4907
G_POINT = (0.431, 0.0219)
G_TARGET = 0.0376
THETA2_TARGET = 0.0219
VALUE_TOL = 0.002
OMEGA_TOL = 1e-4
CI_THETA2 = Range(0.020, 0.024)


@dataclass(frozen=True)
class ReproRow:
    name: str
    module: str
    value: float | None
    target: float
    tolerance: float
    settings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.value is not None and math.isfinite(self.value) and abs(self.value - self.target) <= self.tolerance

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def sig10(obj):
    """Round every float to 10 significant digits; non-finite floats become strings."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.10g}")
    if isinstance(obj, dict):
        return {k: sig10(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sig10(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return sig10(obj.item())
    return obj


def dumps(obj) -> str:
    return json.dumps(sig10(obj), indent=2, sort_keys=True)


def headline_repro(objective: Objective, full_search: bool = False, workers: int = 1) -> list[ReproRow]:
    h = objective.H(H_POINT)
    g = objective.g_terms(*G_POINT)
    h_settings = {"lambda": H_POINT.lam, "theta": H_POINT.theta, "theta1": H_POINT.theta1,
                  "theta2": H_POINT.theta2, "term_main": h.term_main, "term_switching": h.term_switching,
                  "term_weighted": h.term_weighted, "I": h.I_value}
    rows = [
        ReproRow("H(0.14, 0.23, 0.449, 0.011)", "optimizer.eval_H", h.H_value, H_TARGET, VALUE_TOL, h_settings),
        ReproRow("1/lambda + 1/theta", "optimizer.omega_bound", h.omega_bound, OMEGA_TARGET, OMEGA_TOL,
                 {"integer_bound": h.omega_integer_bound}),
        ReproRow("G(0.431, 0.0219)", "optimizer.eval_G", g.G_value, G_TARGET, VALUE_TOL,
                 {"term_main": g.term_main, "term_switching": g.term_switching, "f_combined": g.f_value}),
    ]
    cfg = GSearchConfig(theta2=GSearchConfig().theta2 if full_search else CI_THETA2, step=1e-4, workers=workers)
    res = search_G(cfg, objective)
    rows.append(ReproRow(
        "largest theta2 with G > 0 (step 1e-4)", "optimizer.search_G", res.theta2, THETA2_TARGET, 5e-5,
        {"theta1_range": str(cfg.theta1), "theta2_range": str(cfg.theta2), "found": res.found,
         "theta1_at_best": res.theta1, "G_at_best": res.G_value, "evaluations": res.evaluations},
    ))
    return rows


def render_markdown(rows: list[ReproRow], title: str = "Reproduction report") -> str:
    lines = [f"# {title}", ""]
    if not rows:
        lines.append("No results.")
        return "\n".join(lines) + "\n"
    lines += ["| quantity | producer | value | target | tolerance | status |", "|---|---|---|---|---|---|"]
    for r in rows:
        v = "n/a" if r.value is None else f"{r.value:.10g}"
        lines.append(f"| {r.name} | {r.module} | {v} | {r.target:.10g} | {r.tolerance:.3g} | "
                     f"{'PASS' if r.passed else 'FAIL'} |")
    lines.append("")
    for r in rows:
        if r.settings:
            lines.append(f"- {r.name}: " + ", ".join(f"{k}={sig10(v)}" for k, v in r.settings.items()))
    return "\n".join(lines) + "\n"


def emit_report(rows: list[ReproRow], out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jpath, mpath = out / "report.json", out / "report.md"
    jpath.write_text(dumps({"rows": [r.to_dict() for r in rows]}) + "\n")
    mpath.write_text(render_markdown(rows))
    return jpath, mpath
