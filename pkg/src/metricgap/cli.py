"""Command-line front end.

Subcommands:

  gap     classify an input space and compute its gap constant
  oracle  regression-check the generic pipeline against the closed forms
  bench   timing and agreement table for the enumeration engines

Inputs are JSON documents or plain CSV matrices; see parse_input.  Exit
codes: 0 success, 2 malformed input, 3 metric axiom failure, 4 not of
negative type (no gap to compute), 5 instance too large for the requested
method, 6 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import closed_forms
from .errors import (
    AsymmetricInput,
    DimensionMismatch,
    DisconnectedGraph,
    InvalidSize,
    NegativeDistance,
    NonzeroDiagonal,
    NotATree,
    OracleMismatch,
    ParseError,
    PositiveDirectionMissing,
    SchemaError,
    TooLarge,
    TriangleViolation,
    ZeroFunctional,
)
from .gap import MAX_ENUM_N, _beta_naive, beta_hypercube, branch_and_bound, solve_gap
from .metric import (
    MetricSpace,
    WeightedGraph,
    gen_cycle,
    gen_discrete,
    gen_path,
    gen_random_tree,
    gen_tree,
    is_tree,
    path_metric,
    power_matrix,
    validate_metric,
)
from .negtype import (
    NEGATIVE_TYPE_NON_STRICT,
    NOT_NEGATIVE_TYPE,
    Tolerances,
    build_B,
    classify,
)

_METRIC_ERRORS = (
    AsymmetricInput,
    DimensionMismatch,
    NonzeroDiagonal,
    NegativeDistance,
    TriangleViolation,
    DisconnectedGraph,
    NotATree,
    InvalidSize,
    ZeroFunctional,
)

_GENERATOR_KEYS = ("discrete", "cycle", "path", "tree", "random_tree")


@dataclass(frozen=True)
class InputDocument:
    """Parsed but not yet realized input: what to build and from what."""

    kind: str  # "matrix", "edges", or "generator"
    payload: dict
    p: float = 1.0


def _parse_csv(text: str) -> InputDocument:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f for f in stripped.replace(",", " ").split() if f]
        try:
            rows.append(([float(f) for f in fields], lineno))
        except ValueError:
            raise ParseError(f"row {lineno}: not a number in {stripped!r}") from None
    if not rows:
        raise ParseError("no data rows")
    width = len(rows[0][0])
    for values, lineno in rows:
        if len(values) != width:
            raise ParseError(f"row {lineno}: expected {width} fields, got {len(values)}")
    if len(rows) != width:
        raise ParseError(f"matrix is {len(rows)} rows by {width} columns, must be square")
    return InputDocument(kind="matrix", payload={"distances": [r for r, _ in rows]})


def _require_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{what} must be an integer, got {value!r}")
    return value


def _parse_json(text: str) -> InputDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"top level must be an object, got {type(doc).__name__}")

    known = {"p", "n", "distances", "edges", *_GENERATOR_KEYS}
    for key in doc:
        if key not in known:
            raise SchemaError(f"unknown key {key!r}")

    p = doc.get("p", 1.0)
    if isinstance(p, bool) or not isinstance(p, (int, float)) or p < 0:
        raise SchemaError(f"p must be a nonnegative number, got {p!r}")

    main_keys = [k for k in ("distances", "edges", *_GENERATOR_KEYS) if k in doc]
    if len(main_keys) != 1:
        raise SchemaError(
            f"need exactly one of distances, edges, or a generator key; got {main_keys!r}"
        )
    key = main_keys[0]

    if key == "distances":
        rows = doc["distances"]
        if not isinstance(rows, list) or not rows:
            raise SchemaError("distances must be a nonempty list of rows")
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != len(rows):
                raise SchemaError(f"distances row {i}: expected {len(rows)} entries")
            for j, v in enumerate(row):
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise SchemaError(f"distances[{i}][{j}] is not a number: {v!r}")
        if "n" in doc and _require_int(doc["n"], "n") != len(rows):
            raise SchemaError(f"n = {doc['n']} but distances has {len(rows)} rows")
        return InputDocument(kind="matrix", payload={"distances": rows}, p=float(p))

    if key == "edges":
        edges = doc["edges"]
        if not isinstance(edges, list) or not edges:
            raise SchemaError("edges must be a nonempty list of [i, j, w] triples")
        triples = []
        for idx, e in enumerate(edges):
            if not isinstance(e, list) or len(e) != 3:
                raise SchemaError(f"edges[{idx}]: expected [i, j, w]")
            i = _require_int(e[0], f"edges[{idx}][0]")
            j = _require_int(e[1], f"edges[{idx}][1]")
            w = e[2]
            if isinstance(w, bool) or not isinstance(w, (int, float)):
                raise SchemaError(f"edges[{idx}][2] must be a number, got {w!r}")
            if i < 1 or j < 1:
                raise SchemaError(f"edges[{idx}]: vertices are 1-based, got ({i},{j})")
            triples.append((i - 1, j - 1, float(w)))
        n = doc.get("n")
        if n is not None:
            n = _require_int(n, "n")
        else:
            n = 1 + max(max(i, j) for i, j, _ in triples)
        return InputDocument(kind="edges", payload={"n": n, "edges": triples}, p=float(p))

    # Generator document.
    spec = doc[key]
    if "n" in doc:
        raise SchemaError("top-level n is not valid alongside a generator key")
    return InputDocument(kind="generator", payload={"name": key, "spec": spec}, p=float(p))


def parse_input(text: str, fmt: str = "auto") -> InputDocument:
    """Parse input text into an InputDocument.

    ``fmt`` is "json", "csv", or "auto" (JSON when the first nonblank
    character opens an object or array).
    """
    if fmt == "auto":
        stripped = text.lstrip()
        fmt = "json" if stripped[:1] in ("{", "[") else "csv"
    if fmt == "json":
        return _parse_json(text)
    if fmt == "csv":
        return _parse_csv(text)
    raise ParseError(f"unknown format {fmt!r}")


def _realize_generator(name: str, spec) -> tuple[MetricSpace, tuple | None]:
    if name == "discrete":
        n = _require_int(spec, "discrete")
        return gen_discrete(n), ("discrete", n)
    if name == "cycle":
        n = _require_int(spec, "cycle")
        return path_metric(gen_cycle(n)), ("cycle", n)
    if name == "path":
        if isinstance(spec, dict):
            n = _require_int(spec.get("n"), "path.n")
            g = gen_path(n, spec.get("weights"))
        else:
            g = gen_path(_require_int(spec, "path"))
        return path_metric(g), ("tree", g)
    if name == "tree":
        if not isinstance(spec, dict) or "edges" not in spec:
            raise SchemaError('tree generator needs {"edges": [[i, j, w], ...]}')
        edges = [(e[0] - 1, e[1] - 1, e[2]) for e in spec["edges"]]
        g = gen_tree(edges, n=spec.get("n"))
        return path_metric(g), ("tree", g)
    if name == "random_tree":
        if not isinstance(spec, dict) or "n" not in spec:
            raise SchemaError('random_tree generator needs {"n": ..., "seed": ...}')
        g = gen_random_tree(
            _require_int(spec["n"], "random_tree.n"),
            weight_range=tuple(spec.get("weight_range", (0.1, 10.0))),
            seed=_require_int(spec.get("seed", 0), "random_tree.seed"),
        )
        return path_metric(g), ("tree", g)
    raise SchemaError(f"unknown generator {name!r}")


def realize(doc: InputDocument) -> tuple[MetricSpace, tuple | None]:
    """Build the metric space an InputDocument describes.

    Also returns the family tag used for oracle cross-checks: one of
    ("discrete", n), ("cycle", n), ("tree", graph), or None when no closed
    form applies.
    """
    if doc.kind == "matrix":
        return validate_metric(np.array(doc.payload["distances"], dtype=float)), None
    if doc.kind == "edges":
        g = WeightedGraph(doc.payload["n"], tuple(doc.payload["edges"]))
        family = ("tree", g) if is_tree(g) else None
        return path_metric(g), family
    return _realize_generator(doc.payload["name"], doc.payload["spec"])


@dataclass(eq=False)
class Report:
    """Everything one gap run reports; serializable both ways."""

    verdict: str
    n: int
    p: float
    gamma: float | None = None
    beta: float | None = None
    s_star: list | None = None
    witness: list | None = None
    cross_checks: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    timing: float | None = None


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def emit_report(report: Report, mode: str = "text") -> str:
    """Render a report.

    Machine mode is canonical JSON (sorted keys, compact separators,
    shortest-roundtrip floats) and is byte-deterministic for a given
    result; timing is included only when set.  Text mode prints 6
    significant digits.
    """
    if mode == "machine":
        payload = {
            "verdict": report.verdict,
            "n": report.n,
            "p": report.p,
            "gamma": report.gamma,
            "beta": report.beta,
            "s_star": report.s_star,
            "witness": report.witness,
            "cross_checks": report.cross_checks,
            "diagnostics": report.diagnostics,
        }
        if report.timing is not None:
            payload["timing"] = report.timing
        return json.dumps(_plain(payload), sort_keys=True, separators=(",", ":")) + "\n"

    def num(v):
        return "none" if v is None else f"{v:.6g}"

    lines = [
        f"verdict:  {report.verdict}",
        f"n:        {report.n}",
        f"p:        {num(report.p)}",
        f"gamma:    {num(report.gamma)}",
        f"beta:     {num(report.beta)}",
    ]
    if report.s_star is not None:
        lines.append("s_star:   " + " ".join("+" if v > 0 else "-" for v in report.s_star))
    if report.witness is not None:
        lines.append("witness:  " + " ".join(f"{v:.6g}" for v in report.witness))
    for label, value in sorted(report.cross_checks.items()):
        lines.append(f"check {label}: {value if isinstance(value, str) else num(value)}")
    for label, value in sorted(report.diagnostics.items()):
        if isinstance(value, float):
            value = num(value)
        lines.append(f"{label}: {value}")
    if report.timing is not None:
        lines.append(f"wall_time: {report.timing:.3f} s")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Report:
    """Inverse of machine-mode emit_report."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(payload, dict) or "verdict" not in payload:
        raise SchemaError("not a gap report")
    return Report(**payload)


def _relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def run_gap(doc: InputDocument, args) -> tuple[Report, int]:
    """Classify, compute, cross-check.  Returns the report and exit code."""
    t0 = time.perf_counter()
    space, family = realize(doc)
    p = args.p if args.p is not None else doc.p
    tols = Tolerances(eig=args.tol, strict=args.tol, factor_pivot=args.tol) if args.tol else None
    ntm = power_matrix(space, p)
    verdict_report = classify(ntm, tols=tols)

    report = Report(
        verdict=verdict_report.verdict,
        n=space.n,
        p=p,
        diagnostics={
            "projected_spectrum": _plain(verdict_report.projected_spectrum),
            "marginal": verdict_report.marginal,
            "notes": list(verdict_report.notes),
        },
    )
    if space.merged:
        report.diagnostics["merged_points"] = _plain(space.merged)

    if verdict_report.verdict == NOT_NEGATIVE_TYPE:
        if args.timing:
            report.timing = time.perf_counter() - t0
        return report, 4

    if verdict_report.verdict == NEGATIVE_TYPE_NON_STRICT:
        report.gamma = 0.0
        if family is not None and p == 1.0:
            report.cross_checks.update(_oracle_check(family, 0.0))
        if args.timing:
            report.timing = time.perf_counter() - t0
        return report, 0

    methods = {
        "gray": ("enumerate",),
        "opnorm": ("opnorm",),
        "binary": ("binary",),
        "all": ("enumerate", "opnorm", "binary"),
    }[args.method]
    result = solve_gap(
        ntm,
        tols=tols,
        methods=methods,
        max_enum_n=args.max_n,
        use_bnb=args.bnb,
        bnb_budget=args.bnb_budget,
        partition_bits=args.partition_bits,
        workers=args.workers,
        compute_witness=args.witness,
    )
    report.gamma = result.gamma
    report.beta = result.beta
    report.diagnostics["M"] = verdict_report.M
    report.diagnostics["method"] = result.method
    if result.bnb_certified is not None:
        report.diagnostics["bnb_certified"] = result.bnb_certified
        report.diagnostics["bnb_nodes"] = result.nodes_expanded
    if result.s_star is not None:
        report.s_star = _plain(result.s_star)
    if args.witness and result.witness_y0 is not None:
        report.witness = _plain(result.witness_y0)
    if result.beta_by_opnorm is not None:
        report.cross_checks["beta_opnorm"] = result.beta_by_opnorm
        report.cross_checks["beta_opnorm_rel_err"] = _relative_error(
            result.beta_by_opnorm, result.beta
        )
    if result.beta_by_binary is not None:
        report.cross_checks["beta_binary"] = result.beta_by_binary
        report.cross_checks["beta_binary_rel_err"] = _relative_error(
            result.beta_by_binary, result.beta
        )
    if family is not None and p == 1.0:
        report.cross_checks.update(_oracle_check(family, result.gamma))
    if args.timing:
        report.timing = time.perf_counter() - t0
    return report, 0


def _oracle_check(family: tuple, gamma: float) -> dict:
    kind = family[0]
    if kind == "discrete":
        oracle = closed_forms.gamma_discrete(family[1])
    elif kind == "cycle":
        oracle = closed_forms.gamma_cycle(family[1])
    else:
        oracle = closed_forms.gamma_tree(family[1])
    if oracle.gamma == 0.0:
        return {"oracle_family": kind, "oracle_gamma": 0.0, "oracle_abs_err": abs(gamma)}
    return {
        "oracle_family": kind,
        "oracle_gamma": oracle.gamma,
        "oracle_rel_err": _relative_error(gamma, oracle.gamma),
    }


def run_oracle_suite(args) -> tuple[bool, list[dict]]:
    """Pipeline-versus-closed-form sweep over the three solved families.

    With --inject-fault the first tree comparison is knocked off by 1e-3
    to prove the comparator can fail; the suite then reports a mismatch.
    """
    rows = []
    ok = True
    rel_tol = 1e-9

    def check(family: str, n: int, gamma_pipeline: float, gamma_oracle: float):
        nonlocal ok
        err = _relative_error(gamma_pipeline, gamma_oracle)
        good = err <= rel_tol
        ok = ok and good
        rows.append(
            {
                "family": family,
                "n": n,
                "gamma": gamma_pipeline,
                "oracle": gamma_oracle,
                "rel_err": err,
                "ok": good,
            }
        )

    for n in range(2, 13):
        res = solve_gap(gen_discrete(n), compute_witness=False, methods=("enumerate",))
        check("discrete", n, res.gamma, closed_forms.gamma_discrete(n).gamma)

    for n in range(3, 16):
        space = path_metric(gen_cycle(n))
        if n % 2 == 0:
            verdict = classify(power_matrix(space, 1.0)).verdict
            good = verdict == NEGATIVE_TYPE_NON_STRICT
            ok = ok and good
            rows.append(
                {
                    "family": "cycle",
                    "n": n,
                    "gamma": 0.0,
                    "oracle": 0.0,
                    "rel_err": 0.0,
                    "ok": good,
                    "verdict": verdict,
                }
            )
        else:
            res = solve_gap(space, compute_witness=False, methods=("enumerate",))
            check("cycle", n, res.gamma, closed_forms.gamma_cycle(n).gamma)

    rng = np.random.default_rng(args.seed)
    for i in range(args.trees):
        n = int(rng.integers(2, 13))
        tree = gen_random_tree(n, seed=args.seed + 1000 + i)
        res = solve_gap(path_metric(tree), compute_witness=False, methods=("enumerate",))
        oracle_gamma = closed_forms.gamma_tree(tree).gamma
        if args.inject_fault and i == 0:
            oracle_gamma *= 1.0 + 1e-3
        check("tree", n, res.gamma, oracle_gamma)

    return ok, rows


def run_bench(args) -> list[dict]:
    """Timing table for the scan engines on random trees."""
    rows = []
    for n in args.sizes:
        tree = gen_random_tree(n, seed=args.seed)
        space = path_metric(tree)
        gm = build_B(power_matrix(space, 1.0))
        t0 = time.perf_counter()
        beta, s_star = beta_hypercube(
            gm.B, partition_bits=args.partition_bits, workers=args.workers
        )
        gray_time = time.perf_counter() - t0
        row = {"n": n, "beta": beta, "gray_seconds": gray_time}
        if n <= 14:
            t0 = time.perf_counter()
            naive_beta, naive_s = _beta_naive(gm.B)
            row["naive_seconds"] = time.perf_counter() - t0
            row["agrees_exactly"] = bool(
                naive_beta == beta and np.array_equal(naive_s, s_star)
            )
        if args.bnb:
            t0 = time.perf_counter()
            r = branch_and_bound(gm.B, budget=args.bnb_budget)
            row["bnb_seconds"] = time.perf_counter() - t0
            row["bnb_certified"] = r.certified
            row["bnb_nodes"] = r.nodes_expanded
            row["bnb_beta"] = r.beta
        rows.append(row)
    return rows


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metricgap",
        description="Classify finite metric spaces by negative type and "
        "compute the gap constant exactly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gap = sub.add_parser("gap", help="compute the gap of one input space")
    gap.add_argument("input", help="path to a JSON or CSV input, or - for stdin")
    gap.add_argument("--format", choices=("auto", "json", "csv"), default="auto")
    gap.add_argument("--p", type=float, default=None, help="metric exponent (default 1)")
    gap.add_argument(
        "--method", choices=("gray", "opnorm", "binary", "all"), default="all"
    )
    gap.add_argument("--max-n", type=int, default=MAX_ENUM_N, help="enumeration cutoff")
    gap.add_argument("--tol", type=float, default=None, help="override zero-test tolerances")
    gap.add_argument("--report", choices=("text", "machine"), default="text")
    gap.add_argument("--witness", action="store_true", help="include the extremal witness")
    gap.add_argument("--bnb", action="store_true", help="run branch-and-bound")
    gap.add_argument("--bnb-budget", type=int, default=2_000_000, help="node budget")
    gap.add_argument("--partition-bits", type=int, default=0)
    gap.add_argument("--workers", type=int, default=1)
    gap.add_argument("--timing", action="store_true", help="include wall time in the report")

    oracle = sub.add_parser("oracle", help="check the pipeline against closed forms")
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--trees", type=int, default=20, help="random tree instances")
    oracle.add_argument("--report", choices=("text", "machine"), default="text")
    oracle.add_argument(
        "--inject-fault",
        action="store_true",
        help="deliberately skew one comparison to prove the suite can fail",
    )

    bench = sub.add_parser("bench", help="time the enumeration engines")
    bench.add_argument("--sizes", type=lambda s: [int(v) for v in s.split(",")],
                       default=[12, 16, 20])
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--partition-bits", type=int, default=0)
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--bnb", action="store_true")
    bench.add_argument("--bnb-budget", type=int, default=2_000_000)
    bench.add_argument("--report", choices=("text", "machine"), default="text")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "gap":
            doc = parse_input(_read_source(args.input), args.format)
            report, code = run_gap(doc, args)
            sys.stdout.write(emit_report(report, args.report))
            return code

        if args.command == "oracle":
            ok, rows = run_oracle_suite(args)
            if args.report == "machine":
                sys.stdout.write(
                    json.dumps(_plain({"ok": ok, "rows": rows}), sort_keys=True,
                               separators=(",", ":")) + "\n"
                )
            else:
                for row in rows:
                    status = "ok " if row["ok"] else "BAD"
                    sys.stdout.write(
                        f"{status} {row['family']:<8} n={row['n']:<3} "
                        f"gamma={row['gamma']:.12g} oracle={row['oracle']:.12g} "
                        f"rel_err={row['rel_err']:.3e}\n"
                    )
                verdict = "all checks passed" if ok else "MISMATCH"
                sys.stdout.write(f"oracle suite: {verdict} ({len(rows)} comparisons)\n")
            if not ok:
                raise OracleMismatch("pipeline disagrees with a closed form")
            return 0

        if args.command == "bench":
            rows = run_bench(args)
            if args.report == "machine":
                sys.stdout.write(
                    json.dumps(_plain({"rows": rows}), sort_keys=True,
                               separators=(",", ":")) + "\n"
                )
            else:
                for row in rows:
                    parts = [f"n={row['n']:<3} beta={row['beta']:.9g}",
                             f"gray={row['gray_seconds']:.3f}s"]
                    if "naive_seconds" in row:
                        parts.append(f"naive={row['naive_seconds']:.3f}s")
                        parts.append(f"agree={row['agrees_exactly']}")
                    if "bnb_seconds" in row:
                        parts.append(
                            f"bnb={row['bnb_seconds']:.3f}s certified={row['bnb_certified']} "
                            f"nodes={row['bnb_nodes']}"
                        )
                    sys.stdout.write("  ".join(parts) + "\n")
            return 0

        raise AssertionError(f"unhandled command {args.command!r}")

    except (ParseError, SchemaError) as e:
        sys.stderr.write(f"input error: {e}\n")
        return 2
    except _METRIC_ERRORS as e:
        sys.stderr.write(f"not a usable metric: {e}\n")
        return 3
    except PositiveDirectionMissing as e:
        sys.stderr.write(f"classification refused: {e}\n")
        return 4
    except TooLarge as e:
        sys.stderr.write(f"too large: {e}\n")
        return 5
    except OracleMismatch as e:
        sys.stderr.write(f"oracle mismatch: {e}\n")
        return 6


if __name__ == "__main__":
    raise SystemExit(main())
