"""Scenario runner: JSON problem descriptions in, certified reports out.

A scenario names a task (minimality certification, differentiability
detection, subgradient membership, KKT, or one of the lower-level checks),
a function from the expression grammar, an anchor point, and optionally a
feasible set, probes, witness directions, constraints, and parameters.
Scenario files are validated against the shipped JSON schema before
anything runs; unknown fields are rejected.

Reports go to stdout in human-readable form; --json writes a
machine-readable report whose bytes are deterministic for a fixed
scenario and seed (timing appears only in the human output for exactly
that reason).
"""

from __future__ import annotations

import argparse
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import jsonschema

from .certify import (
    Certificate,
    CertifyOptions,
    SeriesFamily,
    SetDescriptor,
    SetKind,
    certify_min,
    check_psc,
    check_qualification,
    family_from_json,
    gateaux_detect,
    kkt_certify,
    series_differentiate,
    set_from_json,
    subgradient_test,
)
from .derivative import DerivOptions, dir_deriv_profile
from .errors import ScenarioError, SeqcertError
from .funcs import FunctionExpr, evaluate, function_from_json
from .reduce import build_reduced, minimize_reduced
from .seqspace import (
    DualPoint,
    Point,
    SpaceDescriptor,
    dual_from_json,
    point_from_json,
    space_from_json,
)

TASKS = (
    "certify_min",
    "gateaux",
    "subgradient",
    "kkt",
    "psc",
    "qualification",
    "series_diff",
    "dir_profile",
)

_BETA_CAP = 2.0 / 3.0


# ---------------------------------------------------------------------------
# Scenario loading
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    name: str
    task: str
    space: SpaceDescriptor
    function: Optional[FunctionExpr] = None
    x_star: Optional[Point] = None
    feasible_set: SetDescriptor = SetDescriptor.whole_space()
    dual: Optional[DualPoint] = None
    probes: tuple[Point, ...] = ()
    directions: tuple[Point, ...] = ()
    inequalities: tuple[FunctionExpr, ...] = ()
    equalities: tuple[FunctionExpr, ...] = ()
    lam: tuple[float, ...] = ()
    nu: tuple[float, ...] = ()
    family: Optional[SeriesFamily] = None
    parameters: dict = field(default_factory=dict)
    expected: Optional[str] = None


def _schema_dir() -> Path:
    """Locate the shipped schema directory next to the source tree."""
    here = Path(__file__).resolve()
    for parent in here.parents:
        candidate = parent / "docs" / "scenario.schema.json"
        if candidate.is_file():
            return parent / "docs"
    raise ScenarioError(
        "docs/scenario.schema.json not found; run from a source checkout "
        "or editable install"
    )


def load_schema(name: str) -> dict:
    path = _schema_dir() / name
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def scenario_from_json(obj: dict) -> Scenario:
    """Validate against the shipped schema, then build through the strict
    constructors (which re-reject anything structurally off)."""
    schema = load_schema("scenario.schema.json")
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ScenarioError(f"scenario invalid at {where}: {exc.message}") from exc

    task = obj["task"]
    needs_function = task in (
        "certify_min", "gateaux", "subgradient", "kkt", "psc",
        "dir_profile",
    )
    if needs_function and "function" not in obj:
        raise ScenarioError(f"task {task} requires a function")
    if task != "qualification" and "x_star" not in obj:
        raise ScenarioError(f"task {task} requires x_star")
    if task == "qualification" and "x_star" not in obj:
        raise ScenarioError("task qualification requires x_star")
    if task == "subgradient" and "dual" not in obj:
        raise ScenarioError("task subgradient requires a dual point")
    if task == "series_diff" and "family" not in obj:
        raise ScenarioError("task series_diff requires a family")
    if task == "kkt" and "multipliers" not in obj:
        raise ScenarioError("task kkt requires multipliers")

    mult = obj.get("multipliers", {})
    try:
        return Scenario(
            name=obj["name"],
            task=task,
            space=space_from_json(obj["space"]),
            function=function_from_json(obj["function"]) if "function" in obj else None,
            x_star=point_from_json(obj["x_star"]) if "x_star" in obj else None,
            feasible_set=(
                set_from_json(obj["set"]) if "set" in obj else SetDescriptor.whole_space()
            ),
            dual=dual_from_json(obj["dual"]) if "dual" in obj else None,
            probes=tuple(point_from_json(p) for p in obj.get("probes", [])),
            directions=tuple(point_from_json(p) for p in obj.get("directions", [])),
            inequalities=tuple(function_from_json(g) for g in obj.get("inequalities", [])),
            equalities=tuple(function_from_json(h) for h in obj.get("equalities", [])),
            lam=tuple(float(v) for v in mult.get("lambda", [])),
            nu=tuple(float(v) for v in mult.get("nu", [])),
            family=family_from_json(obj["family"]) if "family" in obj else None,
            parameters=dict(obj.get("parameters", {})),
            expected=obj.get("expected"),
        )
    except (ValueError, SeqcertError) as exc:
        raise ScenarioError(f"scenario {obj.get('name', '?')!r}: {exc}") from exc


def load_scenarios(path: str) -> list[Scenario]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"
        ) from exc
    if isinstance(obj, dict) and "scenarios" in obj:
        unknown = set(obj) - {"scenarios"}
        if unknown:
            raise ScenarioError(f"batch file has unknown fields: {sorted(unknown)}")
        if not isinstance(obj["scenarios"], list):
            raise ScenarioError("'scenarios' must be a list")
        return [scenario_from_json(o) for o in obj["scenarios"]]
    if not isinstance(obj, dict):
        raise ScenarioError("scenario file must hold an object or a batch")
    return [scenario_from_json(obj)]


# ---------------------------------------------------------------------------
# Built-in scenarios
# ---------------------------------------------------------------------------


def _builtin_example1(beta: float) -> dict:
    return {
        "name": "example1",
        "task": "gateaux",
        "space": {"kind": "ellinf"},
        "function": {"kind": "limsup"},
        "x_star": {"prefix": [], "tail": {"kind": "zero"}},
        "directions": [{"prefix": [], "tail": {"kind": "const", "c": 1.0}}],
        "parameters": {"beta": beta},
        "expected": "fails",
    }


def _builtin_example3(beta: float) -> dict:
    return {
        "name": "example3",
        "task": "certify_min",
        "space": {"kind": "ellinf"},
        "function": {
            "kind": "sum",
            "terms": [
                {"kind": "limsup"},
                {
                    "kind": "separable",
                    "weight": {"kind": "geometric", "c": 1.0, "r": beta},
                    "inner": {
                        "kind": "affine_quad",
                        "a": 1.0,
                        "b": {"kind": "harmonic", "c": -1.0},
                    },
                },
            ],
        },
        "x_star": {"prefix": [], "tail": {"kind": "harmonic", "c": 0.5}},
        "set": {"kind": "whole_space"},
        "parameters": {"beta": beta},
        "expected": "holds",
    }


def _builtin_example4(beta: float) -> dict:
    return {
        "name": "example4",
        "task": "certify_min",
        "space": {"kind": "ell1"},
        "function": {
            "kind": "sum",
            "terms": [
                {"kind": "separable", "weight": 1.0, "inner": {"kind": "linear", "b": 1.0}},
                {
                    "kind": "separable",
                    "weight": {"kind": "geometric", "c": 1.0, "r": beta},
                    "inner": {"kind": "neg_sqrt", "c": 2.0},
                },
            ],
        },
        "x_star": {"prefix": [], "tail": {"kind": "geometric", "c": 1.0, "r": beta * beta}},
        "set": {"kind": "positive_cone_ell1"},
        "parameters": {"beta": beta},
        "expected": "holds",
    }


def _builtin_example5(beta: float) -> dict:
    return {
        "name": "example5",
        "task": "certify_min",
        "space": {"kind": "ellinf"},
        "function": {
            "kind": "sum",
            "terms": [
                {"kind": "limsup"},
                {
                    "kind": "separable",
                    "weight": {"kind": "geometric", "c": 1.0, "r": beta},
                    "inner": {"kind": "affine_quad", "a": 1.0, "b": -2.0},
                },
            ],
        },
        "x_star": {"prefix": [], "tail": {"kind": "const", "c": 1.0}},
        "probes": [{"prefix": [], "tail": {"kind": "const", "c": 0.5}}],
        "set": {"kind": "whole_space"},
        "parameters": {"beta": beta},
        "expected": "fails",
    }


def _builtin_l1norm(beta: float) -> dict:
    return {
        "name": "l1norm",
        "task": "gateaux",
        "space": {"kind": "ell1"},
        "function": {"kind": "separable", "weight": 1.0, "inner": {"kind": "abs"}},
        "x_star": {"prefix": [1.0], "tail": {"kind": "zero"}},
        "parameters": {"beta": beta},
        "expected": "fails",
    }


BUILTINS = {
    "example1": ("limsup seminorm on l-infinity: not differentiable at 0", _builtin_example1),
    "example3": ("weighted quadratic series plus limsup: certified minimum", _builtin_example3),
    "example4": ("weighted sqrt objective on positive cone", _builtin_example4),
    "example5": ("vanishing basis derivatives that do not certify a minimum", _builtin_example5),
    "l1norm": ("the l1 norm and its kink at a zero coordinate", _builtin_l1norm),
}


def list_builtins() -> list[tuple[str, str]]:
    """Names and one-line descriptions, in stable alphabetical order."""
    return [(name, BUILTINS[name][0]) for name in sorted(BUILTINS)]


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


@dataclass
class Report:
    name: str
    task: str
    verdict: Optional[str]
    grade: Optional[str]
    expected: Optional[str]
    passed: bool
    flags: list[str] = field(default_factory=list)
    table: list[dict] = field(default_factory=list)
    probe_log: list[dict] = field(default_factory=list)
    oracle: list[dict] = field(default_factory=list)
    certificate: Optional[dict] = None
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "task": self.task,
            "verdict": self.verdict,
            "grade": self.grade,
            "expected": self.expected,
            "passed": self.passed,
            "flags": self.flags,
            "table": self.table,
            "probe_log": self.probe_log,
            "oracle": self.oracle,
            "certificate": self.certificate,
            "notes": self.notes,
        }


def _sanitize(obj):
    """Make a report JSON-safe: non-finite floats become strings."""
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def _certify_table(cert: Certificate) -> list[dict]:
    rows = []
    stat = cert.evidence.get("stationarity", {})
    for row in stat.get("derivatives", []):
        value = row["analytic"] if row["analytic"] is not None else row["numeric"]
        method = "analytic" if row["analytic"] is not None else "numeric"
        rows.append({"n": row["n"], "value": value, "method": method})
    return rows


def _run_oracle(
    scn: Scenario, opts: CertifyOptions, ks: Sequence[int]
) -> list[dict]:
    rows = []
    f_star = evaluate(scn.function, scn.x_star)
    for k in ks:
        prob = build_reduced(scn.function, scn.feasible_set, scn.x_star, k)
        y, value, sweeps = minimize_reduced(prob)
        rows.append(
            {
                "k": k,
                "value": value.value,
                "gap_to_anchor": value.value - f_star.value,
                "minimizer": y,
                "sweeps": sweeps,
            }
        )
    return rows


def run_scenario(
    scn: Scenario, opts: CertifyOptions, oracle_k: Sequence[int] = ()
) -> Report:
    started = time.monotonic()
    flags = []
    beta = scn.parameters.get("beta")
    if beta is not None and beta >= _BETA_CAP:
        flags.append(
            f"beta={beta:g} does not satisfy the summability margin (needs beta < 2/3)"
        )

    verdict: Optional[str] = None
    grade: Optional[str] = None
    cert: Optional[Certificate] = None
    table: list[dict] = []
    probe_log: list[dict] = []
    notes: list[str] = []
    oracle_rows: list[dict] = []

    if scn.task == "certify_min":
        cert = certify_min(
            scn.function, scn.feasible_set, scn.x_star, opts,
            probes=scn.probes or None,
        )
        table = _certify_table(cert)
        probe_log = cert.evidence.get("probe_log", [])
        notes.append(f"f(x*) = {cert.evidence.get('f_at_anchor')!r}")
        if oracle_k:
            oracle_rows = _run_oracle(scn, opts, oracle_k)
    elif scn.task == "gateaux":
        cert, deriv = gateaux_detect(
            scn.function, scn.space, scn.x_star, opts,
            witness_directions=scn.directions,
        )
        if deriv is not None:
            method = "analytic" if deriv.tail is not None else "numeric"
            count = min(opts.coords, 16)
            table = [
                {"n": n, "value": deriv.coefficient(n), "method": method}
                for n in range(1, count + 1)
            ]
    elif scn.task == "subgradient":
        cert = subgradient_test(scn.function, scn.x_star, scn.dual, opts)
        table = [
            {"n": row["n"], "value": row["derivative"], "method": "analytic"}
            for row in cert.evidence.get("matches", [])[:16]
        ]
    elif scn.task == "kkt":
        cert = kkt_certify(
            scn.function, scn.inequalities, scn.equalities,
            scn.feasible_set, scn.x_star, scn.lam, scn.nu, opts,
        )
        table = [
            {"n": row["n"], "value": row["lagrangian_derivative"], "method": "analytic"}
            for row in cert.evidence.get("stationarity", [])
        ]
        if oracle_k:
            if scn.inequalities and scn.feasible_set.kind is SetKind.WHOLE_SPACE:
                notes.append(
                    "oracle reduces over the declared set only; describe the "
                    "constraint region as a box set for constrained cross-checks"
                )
            oracle_rows = _run_oracle(scn, opts, oracle_k)
    elif scn.task == "psc":
        cert = check_psc(
            scn.function, scn.feasible_set, scn.x_star,
            probes=scn.probes or None, depth=opts.psc_depth, tol=opts.tol,
        )
    elif scn.task == "qualification":
        cert = check_qualification(scn.feasible_set, scn.x_star, opts.coords)
    elif scn.task == "series_diff":
        cert, values = series_differentiate(scn.family, scn.x_star, opts=opts)
        table = [
            {"n": n, "value": v, "method": cert.grade.render().split("(")[0]}
            for n, v in enumerate(values, start=1)
        ][:16]
    elif scn.task == "dir_profile":
        results = dir_deriv_profile(scn.function, scn.x_star, opts.coords, opts.deriv)
        table = [
            {
                "n": n,
                "value": res.value,
                "method": res.method,
                "left": res.left,
                "right": res.right,
            }
            for n, res in enumerate(results, start=1)
        ]
        notes.append("profile task has no verdict; table lists per-direction results")
    else:
        raise ScenarioError(f"unknown task {scn.task!r}")

    if cert is not None:
        verdict = cert.verdict.value
        grade = cert.grade.render()

    passed = scn.expected is None or scn.expected == verdict
    return Report(
        name=scn.name,
        task=scn.task,
        verdict=verdict,
        grade=grade,
        expected=scn.expected,
        passed=passed,
        flags=flags,
        table=table,
        probe_log=probe_log,
        oracle=oracle_rows,
        certificate=cert.to_json() if cert is not None else None,
        notes=notes,
        elapsed=time.monotonic() - started,
    )


def render_human(report: Report) -> str:
    lines = [
        f"scenario: {report.name}",
        f"  task: {report.task}",
    ]
    if report.verdict is not None:
        lines.append(f"  verdict: {report.verdict} ({report.grade})")
    if report.expected is not None:
        mark = "PASS" if report.passed else "MISMATCH"
        lines.append(f"  expected: {report.expected} -> {mark}")
    for flag in report.flags:
        lines.append(f"  flag: {flag}")
    for note in report.notes:
        lines.append(f"  note: {note}")
    if report.certificate:
        reason = report.certificate.get("reason")
        if reason:
            lines.append(f"  reason: {reason}")
        witness = report.certificate.get("witness")
        if witness:
            lines.append(f"  witness: {json.dumps(_sanitize(witness), sort_keys=True)}")
    if report.table:
        lines.append("  derivative table (first rows):")
        for row in report.table[:8]:
            val = row.get("value")
            shown = "none" if val is None else f"{val:.6g}"
            lines.append(f"    n={row['n']:<3d} value={shown:<14s} method={row['method']}")
    if report.oracle:
        for row in report.oracle:
            lines.append(
                f"  oracle k={row['k']}: value={row['value']:.12g} "
                f"gap={row['gap_to_anchor']:.3e} sweeps={row['sweeps']}"
            )
    if report.probe_log:
        lines.append(f"  probes checked: {len(report.probe_log)}")
    lines.append(f"  time: {report.elapsed:.3f}s")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="seqcert",
        description="Certify optimality and differentiability claims on sequence spaces.",
    )
    p.add_argument(
        "target",
        nargs="?",
        help="builtin scenario name or path to a scenario JSON file",
    )
    p.add_argument("--list", action="store_true", help="list builtin scenarios and exit")
    p.add_argument("--json", metavar="PATH", help="write the JSON report to this path")
    p.add_argument("--seed", type=int, default=None, help="seed for random probes (default 42)")
    p.add_argument("--tol", type=float, default=None, help="decision tolerance (default 1e-7)")
    p.add_argument("--coords", type=int, default=None, help="basis directions to check (default 64)")
    p.add_argument("--psc-depth", type=int, default=None, help="truncation depth for psc probing")
    p.add_argument(
        "--oracle-k",
        metavar="LIST",
        help="comma-separated reduction dimensions to cross-check, e.g. 1,2,4,8",
    )
    p.add_argument("--deriv-t0", type=float, default=None, help="initial quotient step")
    p.add_argument("--deriv-steps", type=int, default=None, help="quotient halvings per side")
    p.add_argument("--deriv-tol", type=float, default=None, help="one-sided match tolerance")
    return p


def _opts_from_args(args, parameters: dict) -> CertifyOptions:
    # Explicit flags win, then scenario parameters, then library defaults.
    def pick(flag_value, key, fallback):
        if flag_value is not None:
            return flag_value
        if key in parameters:
            return parameters[key]
        return fallback

    deriv = DerivOptions(
        t0=args.deriv_t0,
        steps=args.deriv_steps if args.deriv_steps is not None else 40,
        tol_match=args.deriv_tol if args.deriv_tol is not None else 1e-7,
    )
    return CertifyOptions(
        coords=int(pick(args.coords, "coords", 64)),
        tol=float(pick(args.tol, "tol", 1e-7)),
        psc_depth=int(pick(args.psc_depth, "psc_depth", 32)),
        seed=int(pick(args.seed, "seed", 42)),
        deriv=deriv,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.list:
        for name, desc in list_builtins():
            print(f"{name}: {desc}")
        return 0
    if not args.target:
        parser.print_usage()
        print("error: give a builtin name or a scenario file (or --list)")
        return 2

    try:
        if args.target in BUILTINS:
            beta = 0.5
            raw = BUILTINS[args.target][1](beta)
            scenarios = [scenario_from_json(raw)]
        else:
            scenarios = load_scenarios(args.target)

        oracle_k: tuple[int, ...] = ()
        if args.oracle_k:
            try:
                oracle_k = tuple(int(tok) for tok in args.oracle_k.split(",") if tok)
            except ValueError as exc:
                raise ScenarioError(f"--oracle-k expects integers: {exc}") from exc
            if any(k < 1 for k in oracle_k):
                raise ScenarioError("--oracle-k entries must be >= 1")

        reports = []
        for scn in scenarios:
            params = dict(scn.parameters)
            if "oracle_k" in params and not oracle_k:
                ks = params["oracle_k"]
                oracle_for_this = tuple(int(k) for k in ks)
            else:
                oracle_for_this = oracle_k
            opts = _opts_from_args(args, params)
            reports.append(run_scenario(scn, opts, oracle_for_this))
    except SeqcertError as exc:
        print(f"error: {exc}")
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}")
        return 2

    for report in reports:
        print(render_human(report))

    if args.json:
        if len(reports) == 1:
            payload = _sanitize(reports[0].to_json())
        else:
            payload = {"reports": [_sanitize(r.to_json()) for r in reports]}
        schema = load_schema("report.schema.json")
        to_check = payload["reports"] if isinstance(payload, dict) and "reports" in payload else [payload]
        for item in to_check:
            jsonschema.validate(item, schema)
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)

    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    raise SystemExit(main())
