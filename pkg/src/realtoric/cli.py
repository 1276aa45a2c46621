"""Command-line front end.

Exit codes: 0 success, 2 invalid input or arguments, 3 polytope not Delzant,
4 involution index out of range, 5 del Pezzo table mismatch.
"""
from __future__ import annotations

import argparse
import json
import sys

from .invariants import SurfaceType, real_lagrangian_report
from .linalg import IntegerMatrix
from .obstructions import DelPezzoTarget, NonToricTarget, enumerate_candidates, surface_order
from .polytope import (
    NonPrimitiveNormal,
    PRESET_ALIASES,
    PRESET_HALFSPACES,
    PolytopeError,
    UnknownPreset,
    load_polytope,
    preset,
    validate_delzant,
)
from .symmetry import NotASymmetry, facet_permutation, involutions, symmetry_group

EXIT_OK, EXIT_INVALID, EXIT_NOT_DELZANT, EXIT_INDEX, EXIT_MISMATCH = 0, 2, 3, 4, 5

# realized surface types per toric del Pezzo surface, in display order
DEL_PEZZO_TABLE = {
    "S2xS2": ("S2", "T2"),
    "X0": ("RP2",),
    "X1": ("Klein",),
    "X2": ("RP2", "N3"),
    "X3": ("S2", "T2", "Klein", "N4"),
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(text)


def _fmt_matrix(m: IntegerMatrix) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in m.rows) + "]"


def _load(args):
    if (args.input is None) == (args.preset is None):
        raise CliError(EXIT_INVALID, "give exactly one of --input and --preset")
    try:
        if args.preset is not None:
            return preset(args.preset)
        return load_polytope(args.input)
    except NonPrimitiveNormal as exc:
        raise CliError(EXIT_NOT_DELZANT, str(exc)) from exc
    except UnknownPreset as exc:
        raise CliError(EXIT_INVALID, f"unknown preset {args.preset!r}") from exc
    except (PolytopeError, OSError) as exc:
        raise CliError(EXIT_INVALID, str(exc)) from exc


def _load_delzant(args):
    p = _load(args)
    if not validate_delzant(p).valid:
        raise CliError(EXIT_NOT_DELZANT, "polytope is not Delzant")
    return p


def cmd_presets(args) -> int:
    rows = []
    for name in PRESET_HALFSPACES:
        p = preset(name)
        aliases = [a for a, b in PRESET_ALIASES.items() if b == name]
        rows.append({"name": name, "aliases": aliases, "dim": p.dim, "facets": p.facet_count, "vertices": len(p.vertices)})
    text = "\n".join(
        f"{r['name']:<6} dim {r['dim']}  facets {r['facets']}  vertices {r['vertices']}"
        + (f"  (alias {', '.join(r['aliases'])})" if r["aliases"] else "")
        for r in rows
    )
    _emit(args, text, rows)
    return EXIT_OK


def cmd_validate(args) -> int:
    p = _load(args)
    report = validate_delzant(p)
    checks = [{"vertex": c.vertex_id, "facets": [i + 1 for i in c.active], "abs_det": c.abs_det} for c in report.checks]
    lines = [f"vertex {c['vertex']}: facets {c['facets']} |det| {c['abs_det']}" for c in checks]
    lines.append("Delzant" if report.valid else "NOT Delzant")
    _emit(args, "\n".join(lines), {"valid": report.valid, "vertices": checks})
    return EXIT_OK if report.valid else EXIT_NOT_DELZANT


def cmd_symmetries(args) -> int:
    p = _load_delzant(args)
    group = symmetry_group(p)
    text = f"order {len(group)}\n" + "\n".join(_fmt_matrix(s) for s in group)
    _emit(args, text, {"order": len(group), "elements": [s.tolist() for s in group]})
    return EXIT_OK


def cmd_involutions(args) -> int:
    p = _load_delzant(args)
    invs = involutions(symmetry_group(p))
    data = [
        {"index": i, "matrix": s.tolist(), "facet_permutation": facet_permutation(s, p).cycle_notation()}
        for i, s in enumerate(invs)
    ]
    text = "\n".join(f"{d['index']}: {_fmt_matrix(s)}  tau = {d['facet_permutation']}" for d, s in zip(data, invs))
    _emit(args, text, data)
    return EXIT_OK


def _report_text(label: str, r) -> str:
    verts = ", ".join("(" + ", ".join(str(c) for c in v) + ")" for v in r.moment_image.vertices)
    return "\n".join([
        label,
        f"  dim {r.dim}  components {r.components}  euler {r.euler}  z2_betti {r.z2_betti_total}",
        f"  real kernel {r.real_kernel.group.describe()}  real level dim {r.real_kernel.real_level_dim}",
        f"  moment image vertices {verts}",
        f"  surface {r.surface_type.display if r.surface_type else 'unclassified'}",
    ])


def _parse_matrix(text: str, n: int) -> IntegerMatrix:
    try:
        rows = json.loads(text)
        m = IntegerMatrix(rows)
    except (ValueError, TypeError) as exc:
        raise CliError(EXIT_INVALID, f"--matrix must be a JSON integer matrix: {exc}") from exc
    if m.shape != (n, n):
        raise CliError(EXIT_INVALID, f"--matrix must be {n}x{n}")
    return m


def cmd_real_lagrangian(args) -> int:
    p = _load_delzant(args)
    invs = involutions(symmetry_group(p))
    if args.matrix is not None:
        sigma = _parse_matrix(args.matrix, p.dim)
        if sigma not in invs:
            try:
                facet_permutation(sigma, p)
            except NotASymmetry as exc:
                raise CliError(EXIT_INVALID, str(exc)) from exc
            raise CliError(EXIT_INVALID, "matrix is not an involution")
        chosen = [invs.index(sigma)]
    elif args.all:
        chosen = list(range(len(invs)))
    else:
        if not 0 <= args.involution < len(invs):
            raise CliError(EXIT_INDEX, f"involution index {args.involution} out of range 0..{len(invs) - 1}")
        chosen = [args.involution]
    reports = [(i, real_lagrangian_report(invs[i], p)) for i in chosen]
    text = "\n".join(_report_text(f"involution {i}: {_fmt_matrix(invs[i])}", r) for i, r in reports)
    data = [r.to_json() for _, r in reports]
    _emit(args, text, data if args.all else data[0])
    return EXIT_OK


def del_pezzo_table() -> dict[str, dict[str, int]]:
    """For each toric del Pezzo preset: realized surface label -> first realizing involution."""
    out = {}
    for name in DEL_PEZZO_TABLE:
        p = preset(name)
        found: dict[str, int] = {}
        for i, s in enumerate(involutions(symmetry_group(p))):
            r = real_lagrangian_report(s, p)
            found.setdefault(r.surface_label, i)
        out[name] = dict(sorted(found.items(), key=lambda kv: surface_order(SurfaceType.from_label(kv[0]))))
    return out


def cmd_del_pezzo_table(args) -> int:
    table = del_pezzo_table()
    ok = all(tuple(table[name]) == expected for name, expected in DEL_PEZZO_TABLE.items())
    lines = []
    for name, found in table.items():
        cells = ", ".join(f"{SurfaceType.from_label(lab).display} (involution {i})" for lab, i in found.items())
        lines.append(f"{name:<6} {cells}")
    lines.append("PASS" if ok else "FAIL")
    data = {
        "rows": {name: [{"surface": lab, "involution": i} for lab, i in found.items()] for name, found in table.items()},
        "expected": {k: list(v) for k, v in DEL_PEZZO_TABLE.items()},
        "match": ok,
    }
    _emit(args, "\n".join(lines), data)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_obstructions(args) -> int:
    try:
        target = DelPezzoTarget.parse(args.target)
        report = enumerate_candidates(target, use_cited=not args.no_cited)
    except (NonToricTarget, ValueError) as exc:
        raise CliError(EXIT_INVALID, str(exc)) from exc
    rules = {r.name: r for r in report.rules}
    lines = [f"target {target.name}: candidates " + ", ".join(s.display for s in report.candidates)]
    for s, reasons in report.excluded:
        lines.append(f"  excluded {s.display}: " + "; ".join(f"{n} ({rules[n].provenance})" for n in reasons))
    data = {
        "target": target.name,
        "candidates": report.labels,
        "excluded": [{"surface": s.label, "rules": list(reasons)} for s, reasons in report.excluded],
        "rules": [{"name": r.name, "provenance": r.provenance, "computed": r.computed} for r in report.rules],
    }
    _emit(args, "\n".join(lines), data)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realtoric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, polytope=True, help=None):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if polytope:
            sp.add_argument("--input", help="polytope JSON file")
            sp.add_argument("--preset", help="preset name (see 'presets')")
        sp.set_defaults(func=func)
        return sp

    add("presets", cmd_presets, polytope=False, help="list preset polytopes")
    add("validate", cmd_validate, help="check the Delzant condition")
    add("symmetries", cmd_symmetries, help="lattice symmetry group of the polytope")
    add("involutions", cmd_involutions, help="indexed involutions (identity is 0)")
    rl = add("real-lagrangian", cmd_real_lagrangian, help="invariants of real Lagrangians")
    which = rl.add_mutually_exclusive_group(required=True)
    which.add_argument("--involution", type=int)
    which.add_argument("--matrix", help="involution as a JSON matrix, e.g. [[0,1],[1,0]]")
    which.add_argument("--all", action="store_true")
    add("del-pezzo-table", cmd_del_pezzo_table, polytope=False, help="realized surfaces in toric del Pezzo surfaces")
    ob = add("obstructions", cmd_obstructions, polytope=False, help="candidate surfaces and exclusion rules")
    ob.add_argument("--target", required=True, help="Q, X0, X1, X2 or X3")
    ob.add_argument("--no-cited", action="store_true", help="drop exclusions that are cited rather than computed")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
