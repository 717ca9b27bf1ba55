"""Command-line front end: decompose, validate, sweep and export systems.

Inputs are addressed as ``file:PATH`` (distribution text format) or
``example:NAME`` / ``example:NAME:c=VALUE`` (built-in corpus). Human tables
print 4 decimals; CSV prints 17 significant digits so values reparse to the
same doubles. Identical invocations produce byte-identical output.

Exit status: 0 on success, 1 on usage or input errors, 2 when ``validate``
finds identities outside tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import random
import sys

from . import __version__
from .corpus import SWEEP_FAMILIES, list_examples, make_example, sweep
from .decomposition import (
    CheckRow,
    ORDER_SIGNATURES,
    combination_check,
    compute_ped,
    marginalization_check,
    mi_identities,
    order_summary,
    permute_variables,
    pid_full,
    pid_mono,
    pure_mi,
    pure_mi_pid,
)
from .dist import (
    SourceSet,
    entropy,
    format_distribution_text,
    load_distribution_file,
    mutual_information,
)
from .errors import IpfConvergenceError, PedkitError
from .lattice import downset_sums, parse_node
from .maxent import IPF_MAX_CYCLES, IPF_TOL
from .redundancy import positive_negative_split

_METHODS = ("full", "mono", "pure")

# Tolerances for the validate verb: identities that bypass the iterative
# fitting are held to 1e-9; anything routed through a three-source node to
# 1e-6.
ALGEBRAIC_TOL = 1e-9
IPF_IDENTITY_TOL = 1e-6


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; this tool reserves 2 for
    # validation failures.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt4(value: float) -> str:
    # Anything below display resolution prints as an unsigned zero.
    if abs(value) < 5e-5:
        value = 0.0
    return f"{value:.4f}"


def _fmt17(value: float) -> str:
    if value == 0.0:
        value = 0.0  # normalize -0.0
    return f"{value:.17g}"


def _render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(),
        "  ".join("-" * widths[i] for i in range(len(headers))),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _render_csv(headers: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(out, headers, str_rows, fmt):
    if fmt == "csv":
        out.write(_render_csv(headers, str_rows))
    else:
        out.write(_render_table(headers, str_rows))


def _load_input(address: str):
    """Resolve a ``file:`` or ``example:`` input address."""
    if address.startswith("file:"):
        path = address[len("file:"):]
        d = load_distribution_file(path)
        return d, path
    if address.startswith("example:"):
        rest = address[len("example:"):]
        name, _, param_text = rest.partition(":")
        params = {}
        if param_text:
            for item in param_text.split(","):
                key, eq, value = item.partition("=")
                if not eq:
                    raise PedkitError(f"bad example parameter {item!r}; use key=value")
                try:
                    params[key] = float(value)
                except ValueError:
                    raise PedkitError(f"bad numeric value in {item!r}") from None
        ex = make_example(name, **params)
        label = ex.name if not ex.params else (
            ex.name + ":" + ",".join(f"{k}={v:g}" for k, v in sorted(ex.params.items()))
        )
        return ex.distribution, label
    raise PedkitError(
        f"input {address!r} must start with 'file:' or 'example:'"
    )


def _value_tuple_text(values) -> str:
    return ";".join(" ".join(str(x) for x in v) for v in values)


def _emit_traces(out, ped) -> None:
    for node in ped.lattice.nodes:
        ev = ped.evaluations.get(node)
        if ev is None or ev.pointwise_terms is None:
            continue
        out.write(f"# trace {node.name}\n")
        rows = [
            [
                _value_tuple_text(term.values),
                _fmt17(term.weight),
                _fmt17(term.coinformation),
                _fmt17(term.contribution),
            ]
            for term in ev.pointwise_terms
        ]
        out.write(
            _render_csv(["tuple", "weight", "local_coinformation", "contribution"], rows)
        )


def _cmd_ped(args, out) -> int:
    d, label = _load_input(args.input)
    ped = compute_ped(
        d,
        system_label=label,
        ipf_tol=args.ipf_tol,
        ipf_max_cycles=args.ipf_max_cycles,
        trace=args.trace,
    )
    fmt = _fmt17 if args.format == "csv" else _fmt4
    rows = [
        [node.name, fmt(ped.lattice.redundancy[node]), fmt(ped.lattice.partial[node])]
        for node in ped.lattice.nodes
    ]
    _emit(out, ["node", "redundancy_bits", "partial_bits"], rows, args.format)
    if args.trace:
        _emit_traces(out, ped)
    return 0


def _cmd_pid(args, out) -> int:
    d, label = _load_input(args.input)
    compute = {"full": pid_full, "mono": pid_mono, "pure": pure_mi_pid}[args.method]
    pid = compute(
        d, args.target, ipf_tol=args.ipf_tol, ipf_max_cycles=args.ipf_max_cycles
    )
    source, mech = pid.redundancy_split
    fmt = _fmt17 if args.format == "csv" else _fmt4
    rows = [
        ["redundant", fmt(pid.atoms["redundant"]), fmt(source), fmt(mech)],
        ["unique_1", fmt(pid.atoms["unique_1"]), "", ""],
        ["unique_2", fmt(pid.atoms["unique_2"]), "", ""],
        ["synergy", fmt(pid.atoms["synergy"]), "", ""],
    ]
    _emit(out, ["atom", "bits", "source_bits", "mech_bits"], rows, args.format)
    if args.format == "table":
        total = sum(pid.atoms.values())
        out.write(
            f"method={pid.method} target={pid.target} system={label} "
            f"atoms_sum={_fmt4(total)}\n"
        )
    return 0


def _cmd_pure_mi(args, out) -> int:
    d, label = _load_input(args.input)
    groups = (parse_node(args.group_a), parse_node(args.group_b))
    if any(len(g.sources) != 1 for g in groups):
        raise PedkitError("pure-mi takes one {..} group per side")
    a, b = (g.sources[0] for g in groups)
    value = pure_mi(d, a, b, ipf_tol=args.ipf_tol, ipf_max_cycles=args.ipf_max_cycles)
    mi = mutual_information(d, a, b)
    fmt = _fmt17 if args.format == "csv" else _fmt4
    rows = [
        ["pure_mutual_information", fmt(value)],
        ["mutual_information", fmt(mi)],
        ["synergistic_entropy", fmt(value - mi)],
    ]
    _emit(out, ["quantity", "bits"], rows, args.format)
    return 0


def _cmd_order_summary(args, out) -> int:
    d, label = _load_input(args.input)
    ped = compute_ped(
        d, system_label=label, ipf_tol=args.ipf_tol, ipf_max_cycles=args.ipf_max_cycles
    )
    summary = order_summary(ped)
    fmt = _fmt17 if args.format == "csv" else _fmt4
    rows = [
        ["(" + ",".join(str(s) for s in sig) + ")", fmt(summary.values[sig])]
        for sig in ORDER_SIGNATURES
    ]
    _emit(out, ["signature", "bits"], rows, args.format)
    return 0


def _cmd_sweep(args, out) -> int:
    grid = _parse_grid(args.grid)
    rows = sweep(
        args.family, grid, ipf_tol=args.ipf_tol, ipf_max_cycles=args.ipf_max_cycles
    )
    headers = list(rows[0]) if rows else ["c"]
    str_rows = [[_fmt17(row[h]) for h in headers] for row in rows]
    out.write(_render_csv(headers, str_rows))
    return 0


def _parse_grid(text: str) -> list[float]:
    """Either comma-separated values or an inclusive start:stop:step range."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise PedkitError(f"bad grid {text!r}; use start:stop:step or v1,v2,...")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise PedkitError("grid step must be positive")
        n = int(round((stop - start) / step))
        grid = [start + i * step for i in range(n + 1)]
        return [min(c, stop) for c in grid if c <= stop + 1e-12]
    try:
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise PedkitError(f"bad grid {text!r}") from None


def _cmd_example(args, out) -> int:
    params = {}
    for item in args.param or []:
        key, eq, value = item.partition("=")
        if not eq:
            raise PedkitError(f"bad parameter {item!r}; use key=value")
        params[key] = float(value)
    ex = make_example(args.name, **params)
    text = format_distribution_text(ex.distribution)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def _cmd_list_examples(args, out) -> int:
    rows = [
        [r["name"], str(r["n_vars"]), r["alphabet"], r["params"], r["golden"], r["note"]]
        for r in list_examples()
    ]
    _emit(out, ["name", "n_vars", "alphabet", "params", "golden", "note"], rows, args.format)
    return 0


def _validation_rows(d, seed, ipf_tol, ipf_max_cycles) -> list[tuple[CheckRow, float]]:
    """All identity diagnostics for one system, each with its tolerance."""
    rows: list[tuple[CheckRow, float]] = []
    ped = compute_ped(d, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
    total = sum(ped.lattice.partial[n] for n in ped.lattice.nodes)
    rows.append(
        (CheckRow("atoms sum to joint entropy", total, entropy(d), abs(total - entropy(d))),
         ALGEBRAIC_TOL)
    )
    worst = 0.0
    sums = downset_sums(ped.lattice.partial)
    for node in ped.lattice.nodes:
        worst = max(worst, abs(sums[node] - ped.lattice.redundancy[node]))
    rows.append((CheckRow("moebius round trip", worst, 0.0, worst), ALGEBRAIC_TOL))

    if d.n_vars == 2:
        pos, neg = positive_negative_split(d, SourceSet.of(1), SourceSet.of(2))
        mi = mutual_information(d, SourceSet.of(1), SourceSet.of(2))
        rows.append(
            (CheckRow("positive minus negative local MI", pos - neg, mi, abs(pos - neg - mi)),
             ALGEBRAIC_TOL)
        )
        bound = ped.partial("{1}{2}") - ped.partial("{12}")
        rows.append(
            (CheckRow("redundant >= synergistic", bound, 0.0, max(0.0, -bound)),
             ALGEBRAIC_TOL)
        )
        return rows

    for drop in (1, 2, 3):
        for row in marginalization_check(
            d, drop, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles
        ):
            rows.append(
                (CheckRow(f"drop X{drop}: {row.name}", row.lhs, row.rhs, row.diff),
                 IPF_IDENTITY_TOL)
            )
    for row in combination_check(d, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles):
        rows.append((row, IPF_IDENTITY_TOL))
    for target in (1, 2, 3):
        for row in mi_identities(
            d, target, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles
        ):
            rows.append(
                (CheckRow(f"target {target}: {row.name}", row.lhs, row.rhs, row.diff),
                 IPF_IDENTITY_TOL)
            )
    for target in (1, 2, 3):
        pid = pid_full(d, target, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
        others = [v for v in (1, 2, 3) if v != target]
        joint = mutual_information(
            d, SourceSet.of(*others), SourceSet.of(target)
        )
        total = sum(pid.atoms.values())
        rows.append(
            (CheckRow(f"target {target}: full atoms sum to I(predictors;target)",
                      total, joint, abs(total - joint)), ALGEBRAIC_TOL)
        )
        for slot, predictor in enumerate(others, start=1):
            lhs = pid.atoms["redundant"] + pid.atoms[f"unique_{slot}"]
            mi = mutual_information(d, SourceSet.of(predictor), SourceSet.of(target))
            rows.append(
                (CheckRow(
                    f"target {target}: redundant + unique_{slot} = I(X{predictor};X{target})",
                    lhs, mi, abs(lhs - mi)), ALGEBRAIC_TOL)
            )
        mono = pid_mono(d, target, ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles)
        mono_total = sum(mono.atoms.values())
        rows.append(
            (CheckRow(f"target {target}: mono atoms sum to I(predictors;target)",
                      mono_total, joint, abs(mono_total - joint)), ALGEBRAIC_TOL)
        )

    rng = random.Random(seed)
    perm = list(range(1, 4))
    rng.shuffle(perm)
    permuted = compute_ped(
        permute_variables(d, perm), ipf_tol=ipf_tol, ipf_max_cycles=ipf_max_cycles
    )
    base_atoms = sorted(ped.lattice.partial[n] for n in ped.lattice.nodes)
    perm_atoms = sorted(permuted.lattice.partial[n] for n in permuted.lattice.nodes)
    worst = max(abs(a - b) for a, b in zip(base_atoms, perm_atoms))
    rows.append(
        (CheckRow(f"relabeling invariance under permutation {tuple(perm)}",
                  worst, 0.0, worst), IPF_IDENTITY_TOL)
    )
    return rows


def _cmd_validate(args, out) -> int:
    d, label = _load_input(args.input)
    failures = 0
    for row, tol in _validation_rows(d, args.seed, args.ipf_tol, args.ipf_max_cycles):
        ok = row.diff <= tol
        failures += 0 if ok else 1
        status = "PASS" if ok else "FAIL"
        out.write(
            f"{status} {row.name}: lhs={_fmt17(row.lhs)} rhs={_fmt17(row.rhs)} "
            f"diff={row.diff:.3e} tol={tol:g}\n"
        )
    out.write(f"{label}: {failures} failed check(s)\n")
    return 2 if failures else 0


def _add_common(parser, with_format=True):
    parser.add_argument(
        "--ipf-tol", type=float, default=IPF_TOL,
        help="pairwise-marginal convergence tolerance for the maxent projection",
    )
    parser.add_argument(
        "--ipf-max-cycles", type=int, default=IPF_MAX_CYCLES,
        help="cycle cap for the maxent projection",
    )
    if with_format:
        parser.add_argument(
            "--format", choices=("table", "csv"), default="table",
            help="human table (4 decimals) or CSV (full precision)",
        )


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="pedkit",
        description="Partial entropy decompositions of small discrete systems.",
    )
    parser.add_argument("--version", action="version", version=f"pedkit {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("ped", help="full entropy decomposition of a system")
    p.add_argument("input", help="file:PATH or example:NAME[:c=VALUE]")
    p.add_argument("--trace", action="store_true", help="emit pointwise terms per node")
    _add_common(p)
    p.set_defaults(func=_cmd_ped)

    p = sub.add_parser("pid", help="information decomposition about a target")
    p.add_argument("input")
    p.add_argument("--method", choices=_METHODS, required=True)
    p.add_argument("--target", type=int, required=True, help="target variable (1-based)")
    _add_common(p)
    p.set_defaults(func=_cmd_pid)

    p = sub.add_parser("pure-mi", help="shared-entropy-only mutual information")
    p.add_argument("input")
    p.add_argument("group_a", help="first variable group, e.g. '{1}'")
    p.add_argument("group_b", help="second variable group, e.g. '{23}'")
    _add_common(p)
    p.set_defaults(func=_cmd_pure_mi)

    p = sub.add_parser("order-summary", help="atoms condensed by source-size signature")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(func=_cmd_order_summary)

    p = sub.add_parser("validate", help="run the identity checks on a system")
    p.add_argument("input")
    p.add_argument("--seed", type=int, default=0, help="seed for the relabeling spot check")
    _add_common(p, with_format=False)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("sweep", help="evaluate a parametric family over a c grid")
    p.add_argument("family", choices=SWEEP_FAMILIES)
    p.add_argument(
        "--grid", default="0:0.25:0.005",
        help="comma-separated values or inclusive start:stop:step",
    )
    _add_common(p, with_format=False)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("example", help="export a built-in example distribution")
    p.add_argument("name", help="example name; see list-examples")
    p.add_argument("-p", "--param", action="append", help="family parameter, e.g. c=0.16")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")
    p.set_defaults(func=_cmd_example)

    p = sub.add_parser("list-examples", help="catalog of built-in systems")
    p.add_argument(
        "--format", choices=("table", "csv"), default="table"
    )
    p.set_defaults(func=_cmd_list_examples)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except FileNotFoundError as exc:
        print(f"pedkit: error: {exc}", file=sys.stderr)
        return 1
    except IpfConvergenceError as exc:
        r = exc.report
        print(
            f"pedkit: error: {exc} "
            f"[iterations={r.iterations} max_marginal_error={r.max_marginal_error:.3e} "
            f"converged={r.converged} entropy_in={r.entropy_in:.6f} "
            f"entropy_out={r.entropy_out:.6f}]",
            file=sys.stderr,
        )
        return 1
    except (PedkitError, ValueError, KeyError) as exc:
        print(f"pedkit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
