"""Report sections as JSON-ready dicts, schema validation and a plain-text rendering."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema

from .charpoly import format_poly
from .chowring import (
    GradedRingPresentation,
    betti_bb,
    component_generators,
    congruence_system,
    gottsche_poincare,
)
from .fixedloci import components, fixed_point_data, relevant_subtori
from .linalg import GradedSubspace
from .toricfan import Fan


@lru_cache(maxsize=1)
def report_schema() -> dict:
    return json.loads(resources.files("equichow").joinpath("report_schema.json").read_text())


def validate_report(report: dict) -> None:
    """Raise jsonschema.ValidationError if the report does not match the schema."""
    jsonschema.validate(report, report_schema())


def fan_section(fan: Fan) -> dict:
    return {"name": fan.name, "rays": [list(r) for r in fan.rays]}


def fixed_points_section(fan: Fan, d: int) -> list:
    data = fixed_point_data(fan, d)
    out = []
    for p, z in enumerate(data.points):
        out.append({
            "index": p,
            "label": z.label(fan.name),
            "staircases": [list(lam) for lam in z.stairs],
            "tangent": [list(ch) for ch in data.all_tangent(p)],
        })
    return out


def _factor_json(f) -> dict:
    out = {"kind": f.kind, "site": f.site, "dimension": f.dimension}
    if f.kind == "graded":
        out["weights"] = list(f.weights)
    if f.kind == "line":
        out["blocks"] = [list(b) for b in f.blocks]
    return out


def subtori_section(fan: Fan, d: int, generators: bool = False, relations: bool = False) -> list:
    labels = fixed_point_data(fan, d).labels()
    out = []
    for w in relevant_subtori(fan, d):
        comps = []
        for c in components(fan, d, w):
            if c.dimension == 0:
                continue
            entry = {
                "points": [labels[p] for p in c.points],
                "dimension": c.dimension,
                "factors": [_factor_json(f) for f in c.factors],
                "euler": {labels[p]: format_poly(e) for p, e in c.euler().items()},
            }
            if generators:
                entry["generators"] = [{labels[p]: format_poly(v) for p, v in g.items()}
                                       for g in component_generators(fan, d, c)]
            if relations:
                entry["relations"] = [
                    {"coefficients": {labels[q]: format_poly(v) for q, v in rel.coeffs.items()},
                     "modulus": format_poly(rel.modulus_poly())}
                    for rel in congruence_system(fan, d, c)]
            comps.append(entry)
        out.append({"cocharacter": list(w), "components": comps})
    return out


def equivariant_basis_section(bases: list[GradedSubspace]) -> list:
    return [{"degree": b.degree, "dimension": b.dim,
             "basis": [[format_poly(v) for v in t] for t in b.basis_tuples()]} for b in bases]


def betti_section(fan: Fan, d: int) -> tuple[list, list]:
    return betti_bb(fan, d), gottsche_poincare(1, fan.r - 2, 1, d)[d]


def _rational(c) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def chow_section(ring: GradedRingPresentation) -> dict:
    return {
        "dims": list(ring.betti),
        "equivariant_dims": list(ring.equivariant_dims),
        "basis": [{"index": i, "degree": k, "values": [format_poly(v) for v in t]}
                  for i, (k, t) in enumerate(ring.basis)],
        "structure_constants": [
            {"left": i, "right": j, "terms": {str(m): _rational(c) for m, c in sorted(terms.items())}}
            for (i, j), terms in sorted(ring.constants.items())],
    }


# -- text -------------------------------------------------------------------

def render_text(report: dict) -> str:
    lines = []
    if "fan" in report:
        rays = " ".join(f"({a},{b})" for a, b in report["fan"]["rays"])
        lines.append(f"fan {report['fan']['name']}: rays {rays}")
    if "d" in report:
        lines.append(f"d = {report['d']}")
    if "fixed_points" in report:
        lines.append(f"{len(report['fixed_points'])} fixed points")
        for fp in report["fixed_points"]:
            tangent = " ".join(f"({a},{b})" for a, b in fp["tangent"])
            lines.append(f"  {fp['index']:>4}  {fp['label']}  tangent {tangent}")
    for sub in report.get("subtori", []):
        w = sub["cocharacter"]
        lines.append(f"subtorus w=({w[0]},{w[1]}): {len(sub['components'])} positive-dimensional components")
        for c in sub["components"]:
            kinds = ", ".join(f"{f['kind']}@{f['site']}" for f in c["factors"])
            lines.append(f"  dim {c['dimension']} [{kinds}] points {' '.join(c['points'])}")
            for p, e in c["euler"].items():
                lines.append(f"    e({p}) = {e}")
            for g in c.get("generators", []):
                lines.append("    gen " + "; ".join(f"{p}: {v}" for p, v in g.items()))
            for rel in c.get("relations", []):
                terms = " + ".join(f"({v})*[{p}]" for p, v in rel["coefficients"].items())
                lines.append(f"    {terms} = 0 mod ({rel['modulus']})")
    for piece in report.get("equivariant_basis", []):
        lines.append(f"A_T^{piece['degree']}: dimension {piece['dimension']}")
    if "betti" in report:
        lines.append("betti " + " ".join(map(str, report["betti"])))
    if "gottsche" in report:
        lines.append("gottsche " + " ".join(map(str, report["gottsche"])))
    if "chow" in report:
        ch = report["chow"]
        lines.append("chow dims " + " ".join(map(str, ch["dims"])))
        lines.append("equivariant dims " + " ".join(map(str, ch["equivariant_dims"])))
        for sc in ch["structure_constants"]:
            terms = " + ".join(f"{c}*e{m}" for m, c in sc["terms"].items())
            lines.append(f"  e{sc['left']} * e{sc['right']} = {terms}")
    if "verification" in report:
        v = report["verification"]
        lines.append(f"label map: {v['label_map']}")
        for a in v["array"]:
            lines.append(f"  array {a['point']}: {'PASS' if a['passed'] else 'FAIL'}")
        for rel in v["relations"]:
            lines.append(f"  {'PASS' if rel['passed'] else 'FAIL'}  {rel['relation']}  (orbit {rel['orbit_size']})")
            for f in rel["failures"]:
                lines.append(f"      fails: {f['relation']} on degree-{f['degree']} basis element {f['basis_index']}")
        for dm in v["dimensions"]:
            lines.append(f"  degree {dm['degree']}: solutions {dm['solution_dim']}, computed {dm['computed_dim']}, "
                         f"free {dm['freeness_dim']}  {'PASS' if dm['passed'] else 'FAIL'}")
        s = v["samples"]
        lines.append(f"  sampled products (seed {s['seed']}): {s['count'] - len(s['failures'])}/{s['count']} members")
        lines.append("PASS" if v["passed"] else "FAIL")
    return "\n".join(lines) + "\n"
