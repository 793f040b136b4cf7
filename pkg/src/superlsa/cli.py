"""Command-line surface: verify, solve, iso, catalog, export.

Exit codes: 0 when every expectation holds (or a definitive certificate was
produced), 1 on a verification failure, 2 on unreadable input, 3 when the
result is inconclusive (stuck solver leaves, Inconclusive certificates).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import catalog, graded_core as gc, iso_lab
from .cartan_w import euler_element
from .exact_arith import ScalarSyntaxError, format_scalar, parse_scalar, specialize
from .structure_solver import (FreeParameterUnsupported, NoEvenRightIdentity, family_matches,
                               contradicting_pairs, solve_structures, verify_solution)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3
MAX_WN = 8
MAX_LISTED = 200


class InputError(Exception):
    pass


# reports ----------------------------------------------------------------------

@dataclass
class RunReport:
    command: list[str]
    inputs: dict = field(default_factory=dict)
    checks: list[dict] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def core(self) -> dict:
        return {"tool": "superlsa", "version": __version__, "command": self.command,
                "inputs": self.inputs, "checks": self.checks, "results": self.results, "notes": self.notes}

    def digest(self) -> str:
        return hashlib.sha256(_canonical(self.core()).encode()).hexdigest()

    def to_json(self) -> dict:
        out = self.core()
        out["report_sha256"] = self.digest()
        out["timings"] = self.timings
        return out

    def add_check(self, name: str, report: gc.CheckReport, expected: bool | None, seconds: float,
                  names=None, **extra) -> dict:
        entry = {"name": name, "verdict": report.verdict, "expected": expected,
                 "checked": report.checked, "violation_count": len(report.violations),
                 "violations": [_describe(v, names) for v in report.violations[:MAX_LISTED]]}
        entry.update(extra)
        self.checks.append(entry)
        self.timings[name] = round(seconds, 4)
        return entry

    def expectations_hold(self) -> bool:
        return all(c["verdict"] == c["expected"] for c in self.checks if c["expected"] is not None)


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _describe(v: gc.Violation, names) -> str:
    if isinstance(v.residual, list):
        idx = ", ".join(names[i] if names else str(i) for i in v.indices)
        return f"{v.identity}({idx}) -> {_render_matrix(v.residual)}"
    return v.describe(names)


def _render_matrix(m) -> str:
    return "[" + "; ".join(" ".join(format_scalar(x) for x in row) for row in m) + "]"


def algebra_digest(alg: gc.SuperAlgebra) -> str:
    return hashlib.sha256(_canonical(alg.to_json_dict()).encode()).hexdigest()


# input resolution ------------------------------------------------------------

def _alpha(text):
    if text is None:
        return None
    try:
        val = parse_scalar(text)
    except ScalarSyntaxError as exc:
        raise InputError(str(exc)) from exc
    if not isinstance(val, Fraction):
        raise InputError(f"alpha must be a rational number, got {text!r}")
    return val


def _wn_n(key: str, n):
    if key.startswith("Wn(") and key.endswith(")"):
        n = int(key[3:-1])
    if n is None:
        raise InputError("Wn needs --n")
    if not 1 <= n <= MAX_WN:
        raise InputError(f"--n must lie in 1..{MAX_WN}")
    return n


def resolve(key: str | None, file: str | None = None, alpha=None, n=None, as_printed: bool = False):
    """Return (algebra, underlying Lie algebra or None, inputs dict, catalog entry or None)."""
    if file is not None:
        try:
            data = Path(file).read_bytes()
            alg = gc.SuperAlgebra.from_json_dict(json.loads(data))
        except (OSError, ValueError, KeyError, TypeError, IndexError, ScalarSyntaxError) as exc:
            raise InputError(f"{file}: {exc}") from exc
        return alg, None, {"file": file, "file_sha256": hashlib.sha256(data).hexdigest()}, None
    if key is None:
        raise InputError("give a catalog key or --file")
    if key.endswith(".json") and Path(key).exists():
        return resolve(None, key)
    try:
        ent = catalog.entry(key)
    except catalog.UnknownKey as exc:
        raise InputError(f"unknown catalog key {key!r}") from exc
    a = _alpha(alpha)
    inputs = {"key": key}
    if ent.key == "Wn":
        n = _wn_n(key, n)
        alg = catalog.instantiate("Wn", n=n)
        lie = catalog.underlying_lie("Wn", n=n)
        inputs["n"] = n
    else:
        try:
            alg = catalog.instantiate(ent.key, alpha=a, patched=not as_printed)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        lie = catalog.underlying_lie(ent.key)
        if a is not None and lie is not None and lie.has_parameter():
            lie = lie.specialize(a)
        if a is not None:
            inputs["alpha"] = format_scalar(a)
        if as_printed:
            inputs["as_printed"] = True
    inputs["algebra_sha256"] = algebra_digest(alg)
    return alg, lie, inputs, ent


# verify -------------------------------------------------------------------------

def _timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


def _declared_identity(ent, alg, n, alpha):
    if ent is None or ent.right_identity is None:
        return None
    if ent.key == "Wn":
        return alg.element(euler_element(n))
    vec = catalog.parse_combination(ent.right_identity.replace("alpha", "a"), list(alg.names))
    if alpha is not None:
        vec = {k: specialize(c, alpha) for k, c in vec.items()}
    return alg.element(vec)


def right_identity_summary(alg: gc.SuperAlgebra) -> dict:
    sols = gc.find_right_identities(alg)
    even_id = iso_lab._even_right_identity(alg, sols)
    out = {
        "exists": bool(sols),
        "unique": len(sols) == 1,
        "particular": sols[0].render() if sols else None,
        "homogeneous_basis": [s.render() for s in sols[1:]],
        "all_even": all(s.parity() in (0, None) and not any(alg.parity[k] for k in s.vec) for s in sols),
        "unique_even": even_id.render() if even_id is not None else None,
    }
    return out


def _verify(alg, lie, ent, report: RunReport, n=None, alpha=None) -> None:
    names = list(alg.names)
    kind = ent.kind if ent is not None else ("lssa" if lie is not None else "algebra")
    is_lie = kind == "lie_superalgebra"

    r, dt = _timed(gc.check_left_symmetric, alg)
    report.add_check("left_symmetric", r, None if is_lie else True, dt, names)
    if is_lie:
        r, dt = _timed(gc.check_super_jacobi, alg)
        report.add_check("super_jacobi", r, True, dt, names)
    else:
        r, dt = _timed(lambda: gc.check_super_jacobi(gc.sub_adjacent(alg)))
        report.add_check("super_jacobi_of_sub_adjacent", r, True, dt, names)
    if lie is not None:
        r, dt = _timed(gc.check_compatible, alg, lie)
        report.add_check("compatible", r, True, dt, names)
        ops = [gc.left_mult_operator(alg, i) for i in range(alg.dim)]
        r, dt = _timed(gc.check_representation, lie, ops)
        report.add_check("representation", r, True, dt, names)
    r, dt = _timed(gc.check_associative, alg)
    report.add_check("associative", r, None, dt, names)
    r, dt = _timed(gc.check_novikov, alg)
    report.add_check("novikov", r, None, dt, names)

    t = time.perf_counter()
    summary = right_identity_summary(alg)
    declared = _declared_identity(ent, alg, n, alpha)
    violations = []
    if declared is not None:
        if summary["unique_even"] is None:
            violations.append(gc.Violation("right_identity", (), "no unique even right identity"))
        elif summary["unique_even"] != declared.render():
            violations.append(gc.Violation("right_identity", (), f"found {summary['unique_even']}"))
    rep = gc.CheckReport("right_identity", violations, alg.dim)
    report.add_check("right_identity", rep, True if declared is not None else None,
                     time.perf_counter() - t, names,
                     declared=declared.render() if declared is not None else None, **summary)
    if declared is not None and not summary["unique"] and summary["unique_even"] is not None:
        report.notes.append("the right identity is unique among even elements only; adding any "
                            "element of the listed homogeneous solutions gives another right identity")
    if not is_lie:
        report.results["simplicity_evidence"] = simplicity_evidence(alg)


def simplicity_evidence(alg: gc.SuperAlgebra) -> dict:
    """Ideal generated by each basis vector.  Necessary for simplicity, not sufficient:
    a proper ideal need not contain any basis vector."""
    dims = [len(gc.ideal_closure(alg, alg.basis(i))) for i in range(alg.dim)]
    return {"basis_ideal_dims": dims, "every_basis_vector_generates": all(d == alg.dim for d in dims),
            "status": "evidence only"}


def _transcription_section(key: str) -> dict | None:
    patch = catalog.load_patch(key)
    if patch is None:
        return None
    printed = catalog.instantiate(key, patched=False)
    lie = catalog.underlying_lie(key)
    rep = gc.check_compatible(printed, lie)
    return {
        "patch": patch,
        "printed_compatible": rep.verdict,
        "printed_violation_count": len(rep.violations),
        "printed_violations": [_describe(v, list(printed.names)) for v in rep.violations[:MAX_LISTED]],
    }


def cmd_verify(args) -> tuple[RunReport, int]:
    report = RunReport(_argv(args))
    alg, lie, inputs, ent = resolve(args.key, args.file, args.alpha, args.n, args.as_printed)
    if args.lie is not None:
        lie, _, _, _ = resolve(args.lie, alpha=args.alpha)
        inputs["lie"] = args.lie
    report.inputs = inputs
    report.results["dim"] = alg.dim
    report.results["parity"] = list(alg.parity)
    _verify(alg, lie, ent, report, inputs.get("n"), _alpha(args.alpha))
    if ent is not None:
        section = _transcription_section(ent.key)
        if section is not None:
            report.results["transcription"] = section
            if not section["printed_compatible"] and not args.as_printed:
                report.notes.append(f"{ent.key}: the printed transcription fails validation; the checks "
                                    f"above use the corrected entries listed under results.transcription")
    return report, EXIT_OK if report.expectations_hold() else EXIT_FAIL


# solve --------------------------------------------------------------------------

def _solve_candidates(lie_key: str, alpha) -> dict:
    if lie_key != "A01":
        return {}
    out = {"B1": catalog.instantiate("B1"), "B2tilde_m1": catalog.instantiate("B2tilde_m1")}
    out["B2alpha"] = catalog.instantiate("B2alpha", alpha=alpha)
    return out


def _stage_one_cases(tree, run=None, lie=None) -> list[dict]:
    cases = []

    def walk(node, stage1):
        if node.stage == 1:
            stage1 = True
        if stage1 and node.label is not None:
            outcome = [leaf.status for leaf in node.leaves()]
            cases.append({"label": node.label, "trail": node.trail, **node.assignments,
                          "outcome": "solution" if "solution" in outcome else
                          ("stuck" if any(s in ("unfactorable", "depth") for s in outcome) else "contradiction"),
                          "closing": [leaf.reason for leaf in node.leaves()
                                      if leaf.status in ("contradiction", "pruned")]})
            if run is not None and cases[-1]["outcome"] == "contradiction" and node.family is not None:
                names = lie.names
                cases[-1]["killed_by"] = [
                    {"pair": f"[L({names[i]}), L({names[j]})]", "equation": f"{eq} = 0"}
                    for (i, j), eq in contradicting_pairs(run, lie, node.family)]
            return
        for c in node.children:
            walk(c, stage1)

    walk(tree, False)
    return sorted(cases, key=lambda c: c["label"])


def cmd_solve(args) -> tuple[RunReport, int]:
    report = RunReport(_argv(args))
    even, _, inputs, _ = resolve(args.even, alpha=args.alpha)
    lie, _, lie_inputs, _ = resolve(args.lie)
    report.inputs = {"even": inputs, "lie": lie_inputs, "depth_cap": args.depth_cap}
    t = time.perf_counter()
    try:
        run = solve_structures(even, lie, args.depth_cap, strict=False)
    except NoEvenRightIdentity as exc:
        raise InputError(str(exc)) from exc
    report.timings["solve"] = round(time.perf_counter() - t, 4)
    candidates = _solve_candidates(args.lie, _alpha(args.alpha))
    fams = []
    for fam in run.families:
        entry = {"branch_trail": fam.branch_trail, "free": fam.free,
                 "assignments": {k: str(v) for k, v in sorted(fam.assignments.items()) if not v.is_zero()},
                 "catalog_matches": [k for k, c in candidates.items() if family_matches(run.ansatz, fam, c)]}
        try:
            rep, alg = verify_solution(run.ansatz, fam, lie)
            entry["verified"] = rep.verdict
            entry["algebra"] = alg.to_json_dict()
        except FreeParameterUnsupported as exc:
            entry["verified"] = None
            entry["note"] = str(exc)
        fams.append(entry)
    stuck = [{"branch_trail": f.branch_trail, "free": f.free,
              "residual": [str(e) for e in f.residual],
              "assignments": {k: str(v) for k, v in sorted(f.assignments.items()) if not v.is_zero()},
              "catalog_matches": [k for k, c in candidates.items() if family_matches(run.ansatz, f, c)]}
             for f in run.stuck]
    report.results = {
        "unknowns": len(run.ansatz.unknowns),
        "right_identity": run.right_identity.render(),
        "stage_sizes": [len(s) for s in run.stages],
        "cases": _stage_one_cases(run.tree, run, lie),
        "families": fams,
        "stuck": stuck,
    }
    if args.emit:
        _write_json(args.emit, {"unknowns": run.ansatz.unknowns, "blocks": run.ansatz.blocks,
                                "case_tree": run.tree.to_json()})
        report.results["case_tree_file"] = args.emit
    if args.lie != "A01" or args.even not in ("A1", "A2alpha", "A3"):
        report.notes.append("no classification claim is attached to this run")
    if any(f.get("verified") is False for f in fams):
        return report, EXIT_FAIL
    return report, EXIT_INCONCLUSIVE if stuck else EXIT_OK


# iso ------------------------------------------------------------------------------

def cmd_iso(args) -> tuple[RunReport, int]:
    report = RunReport(_argv(args))
    A, _, in_a, _ = resolve(args.key_a, alpha=args.alphaA)
    B, _, in_b, _ = resolve(args.key_b, alpha=args.alphaB)
    report.inputs = {"a": in_a, "b": in_b}
    t = time.perf_counter()
    cert = iso_lab.distinguish(A, B, args.depth_cap, letter=args.letter,
                               use_fingerprint=not args.no_fingerprint)
    report.timings["distinguish"] = round(time.perf_counter() - t, 4)
    t = time.perf_counter()
    replayed = iso_lab.verify_certificate(cert, A, B, args.depth_cap) if cert.definitive else None
    report.timings["replay"] = round(time.perf_counter() - t, 4)
    body = cert.to_json()
    report.results = {"kind": cert.kind, "isomorphic": cert.isomorphic, "replayed": replayed,
                      "fingerprints": {"a": iso_lab.fingerprint(A).to_json(),
                                       "b": iso_lab.fingerprint(B).to_json()}}
    for k in ("field", "value_a", "value_b", "matrix", "reason"):
        if k in body:
            report.results[k] = body[k]
    report.results["closed_branches"] = body.get("branches", [])
    if args.emit:
        _write_json(args.emit, body)
        report.results["certificate_file"] = args.emit
    if cert.definitive and replayed is False:
        return report, EXIT_FAIL
    return report, EXIT_OK if cert.definitive else EXIT_INCONCLUSIVE


# catalog / export ------------------------------------------------------------------

def cmd_catalog(args) -> tuple[RunReport, int]:
    report = RunReport(_argv(args))
    if args.action == "list":
        report.results["entries"] = catalog.list_entries()
    elif args.action == "families":
        report.results["families"] = [v.to_json() for v in catalog.families_table()]
    elif args.action == "family":
        if not args.key:
            raise InputError("catalog family needs a family name")
        try:
            params = [int(p) if "/" not in p else p for p in args.params]
            report.results["verdict"] = catalog.obstruction_report(args.key, params).to_json()
        except (catalog.ParameterOutOfRange, catalog.UnknownKey, ValueError) as exc:
            raise InputError(str(exc)) from exc
    elif args.action == "discrepancies":
        if not args.key:
            raise InputError("catalog discrepancies needs a key")
        section = _transcription_section(args.key)
        report.results["transcription"] = section
        if section is None:
            report.notes.append(f"no correction record for {args.key}")
    elif args.action == "export":
        return cmd_export(args)
    return report, EXIT_OK


def cmd_export(args) -> tuple[RunReport, int]:
    report = RunReport(_argv(args))
    if not args.key:
        raise InputError("export needs a catalog key")
    if not args.out:
        raise InputError("export needs --out")
    alg, _, inputs, _ = resolve(args.key, alpha=args.alpha, n=args.n, as_printed=args.as_printed)
    gc.dump_algebra(alg, args.out)
    report.inputs = inputs
    report.results = {"written": args.out, "dim": alg.dim}
    return report, EXIT_OK


# plumbing ---------------------------------------------------------------------------

def _argv(args) -> list[str]:
    return list(getattr(args, "_argv", []))


def _write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _text(report: RunReport, code: int) -> str:
    lines = [f"superlsa {__version__}: {' '.join(report.command)}"]
    for k, v in report.inputs.items():
        if not isinstance(v, dict):
            lines.append(f"  {k}: {v}")
    width = max((len(c["name"]) for c in report.checks), default=0)
    for c in report.checks:
        mark = {True: "pass", False: "FAIL"}[c["verdict"]]
        exp = "" if c["expected"] is None else ("  (expected)" if c["verdict"] == c["expected"] else "  (UNEXPECTED)")
        lines.append(f"  {c['name']:<{width}}  {mark}  {c['checked']} checked{exp}")
        for v in c["violations"][:10]:
            lines.append(f"      {v}")
        if c["name"] == "right_identity":
            lines.append(f"      solutions: {c['particular']}" +
                         (f" + span{{{', '.join(c['homogeneous_basis'])}}}" if c["homogeneous_basis"] else ""))
            lines.append(f"      unique even right identity: {c['unique_even']}")
    if report.results:
        lines.append(json.dumps(report.results, indent=1, sort_keys=True, default=str))
    for note in report.notes:
        lines.append(f"note: {note}")
    lines.append(f"exit {code}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superlsa", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"superlsa {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="text")
        sp.add_argument("--emit", default=None, help="write the JSON report or artifact here")

    v = sub.add_parser("verify", help="run every identity check on one algebra")
    v.add_argument("key", nargs="?")
    v.add_argument("--file")
    v.add_argument("--alpha")
    v.add_argument("--n", type=int)
    v.add_argument("--lie", help="catalog key of the Lie superalgebra to check compatibility against")
    v.add_argument("--as-printed", action="store_true", help="skip documented corrections")
    common(v)

    s = sub.add_parser("solve", help="enumerate compatible structures over a fixed even part")
    s.add_argument("--even", required=True)
    s.add_argument("--lie", default="A01")
    s.add_argument("--alpha")
    s.add_argument("--depth-cap", type=int, default=8)
    common(s)

    i = sub.add_parser("iso", help="certificate for (non-)isomorphism of two algebras")
    i.add_argument("key_a")
    i.add_argument("key_b")
    i.add_argument("--alphaA")
    i.add_argument("--alphaB")
    i.add_argument("--depth-cap", type=int, default=8)
    i.add_argument("--letter", default="p", help="name prefix of the unknown matrix entries")
    i.add_argument("--no-fingerprint", action="store_true", help="go straight to the constraint system")
    common(i)

    c = sub.add_parser("catalog", help="list entries, the obstruction table, or export")
    c.add_argument("action", choices=("list", "families", "family", "discrepancies", "export"))
    c.add_argument("key", nargs="?")
    c.add_argument("params", nargs="*")
    c.add_argument("--alpha")
    c.add_argument("--n", type=int)
    c.add_argument("--out")
    c.add_argument("--as-printed", action="store_true")
    common(c)

    e = sub.add_parser("export", help="write a catalog algebra in the JSON schema")
    e.add_argument("key")
    e.add_argument("--alpha")
    e.add_argument("--n", type=int)
    e.add_argument("--out", required=True)
    e.add_argument("--as-printed", action="store_true")
    common(e)
    return p


COMMANDS = {"verify": cmd_verify, "solve": cmd_solve, "iso": cmd_iso, "catalog": cmd_catalog,
            "export": cmd_export}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    try:
        report, code = COMMANDS[args.command](args)
    except (InputError, gc.GradingError, gc.DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    # solve and iso use --emit for their own artifact
    if args.emit and args.command not in ("solve", "iso"):
        _write_json(args.emit, report.to_json())
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=1, sort_keys=True))
    else:
        print(_text(report, code))
    return code


if __name__ == "__main__":
    sys.exit(main())
