"""Command-line front end: verify / search / bound / sweep.

Every run is reproducible from its flags alone: all randomness is seeded,
output files embed the parsed configuration and the library version, and
identical invocations produce byte-identical files. Exit codes: 0 success,
1 a checked bound or identity failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from typing import Sequence

from ._version import __version__
from .models import (
    LinearMap,
    Model,
    classical_model,
    coherence_projector,
    interference_order,
    quantum_model,
    sign_flip_oracle,
    synthetic_model,
    verify_oracle,
    coherence_completeness_defect,
    coherence_orthogonality_defects,
)
from .search import (
    ProgressReport,
    check_lower_bound,
    check_upper_bound,
    default_k_max,
    default_strategy,
    make_schedule,
    progress_measures,
    quantum_grover_report,
    reports_to_json,
    run_search,
    scaling_sweep,
    sweep_to_json,
    write_report_csv,
    write_sweep_csv,
    QUANTUM_DENSE_LIMIT,
)
from .subsets import (
    SignedSubsetCombination,
    SlitSet,
    coherence_expansion,
    enumerate_sectors,
    identity_decomposition,
    signed_pairing_count,
    signed_pairing_count_closed,
)

USAGE_ERROR = 2
CHECK_FAILED = 1


class UsageError(Exception):
    """Raised for semantically invalid flag combinations."""


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from exc


def _parse_seeds(text: str) -> list[int]:
    values = _parse_int_list(text)
    if len(values) == 1 and "," not in text:
        count = values[0]
        if count < 1:
            raise UsageError(f"seed count must be >= 1, got {count}")
        return list(range(count))
    return values


def _build_model(kind: str, n: int, order: int | None) -> Model:
    if kind == "classical":
        if order not in (None, 1):
            raise UsageError("the classical model has order 1; omit --h")
        return classical_model(n)
    if kind == "quantum":
        if order not in (None, 2):
            raise UsageError("the quantum model has order 2; omit --h")
        return quantum_model(n)
    if kind == "synthetic":
        h = 3 if order is None else order
        if h > n:
            raise UsageError(f"h exceeds N: h={h}, N={n}")
        return synthetic_model(n, h)
    raise UsageError(f"unknown model kind {kind!r}")


def _single_n(values: list[int], command: str) -> int:
    if len(values) != 1:
        raise UsageError(f"`{command}` takes a single --n value, got {values}")
    return values[0]


def _config_dict(args: argparse.Namespace) -> dict:
    # the destination path is not part of the experiment: identical runs
    # written to different files must stay byte-identical
    skip = {"func", "out"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = value
    return out


def _write_output(args: argparse.Namespace, writer_csv, to_json) -> None:
    if not args.out:
        return
    config = _config_dict(args)
    if args.format == "csv":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer_csv(fh, config)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(to_json(config))
            fh.write("\n")
    print(f"wrote {args.format} to {args.out}")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _corrupted_family(model: Model) -> list[LinearMap]:
    family = [coherence_projector(model, s) for s in model.space.sectors]
    mat = family[0].matrix.copy()
    mat[0, -1] += 1e-3
    family[0] = LinearMap(model.space, mat)
    return family


def _verify_exact_cell(n: int, h: int) -> tuple[bool, str]:
    total = SignedSubsetCombination()
    for sector in enumerate_sectors(n, h):
        total = total + coherence_expansion(sector)
    expected = SignedSubsetCombination(identity_decomposition(h, n))
    ok = total == expected
    return ok, "formal expansion == identity decomposition" if ok else "expansion mismatch"


def _verify_pairing_cell(universe: int) -> tuple[bool, str]:
    slits = range(universe)
    mismatches = 0
    checked = 0
    subsets = [
        SlitSet(combo, universe)
        for size in range(universe + 1)
        for combo in itertools.combinations(slits, size)
    ]
    for left in subsets:
        for right in subsets:
            for meet in left.intersection(right).subsets(include_empty=True):
                checked += 1
                if signed_pairing_count(left, right, meet) != signed_pairing_count_closed(
                    left, right, meet
                ):
                    mismatches += 1
    return mismatches == 0, f"{checked} triples checked, {mismatches} mismatches"


def _verify_model_cell(
    model: Model, label: str, tol: float, corrupt: bool
) -> list[tuple[str, bool, str]]:
    family = _corrupted_family(model) if corrupt else None
    rows = []
    defect = coherence_completeness_defect(model, family)
    rows.append((f"{label} completeness", defect < tol, f"defect {defect:.2e}"))
    pair, pyth = coherence_orthogonality_defects(model, family)
    rows.append(
        (
            f"{label} orthogonality",
            pair < tol and pyth < tol,
            f"pair {pair:.2e}, pythagoras {pyth:.2e}",
        )
    )
    if not corrupt:
        detected = interference_order(model, tol=tol)
        rows.append(
            (
                f"{label} detected order",
                detected == model.order,
                f"detected {detected}, built {model.order}",
            )
        )
        checks = [
            verify_oracle(model, sign_flip_oracle(model, x).map, x, tol=tol)
            for x in (0, model.n_slits - 1)
        ]
        worst = max(
            max(c.fixed_sector_defect, c.commutation_defect, c.orthogonality_defect)
            for c in checks
        )
        rows.append(
            (f"{label} oracle axioms", all(c.passed for c in checks), f"defect {worst:.2e}")
        )
    return rows


def cmd_verify(args: argparse.Namespace) -> int:
    tol = args.tol
    rows: list[tuple[str, bool, str]] = []
    if args.n is not None:
        n = _single_n(_parse_int_list(args.n), "verify --n")
        h = args.h if args.h is not None else min(n, 3)
        if h > n:
            raise UsageError(f"h exceeds N: h={h}, N={n}")
        rows.append(("exact identities N=%d h=%d" % (n, h),) + _verify_exact_cell(n, h))
        rows.extend(_verify_model_cell(synthetic_model(n, h), f"synthetic N={n} h={h}", tol, args.corrupt))
    else:
        n_max = args.n_max
        if n_max < 1:
            raise UsageError(f"--n-max must be >= 1, got {n_max}")
        exact_ok = True
        for n in range(1, n_max + 1):
            for h in range(1, n + 1):
                ok, msg = _verify_exact_cell(n, h)
                if not ok:
                    exact_ok = False
                    rows.append((f"exact identities N={n} h={h}", ok, msg))
        rows.append(
            (
                "exact identities N<=%d" % n_max,
                exact_ok,
                "all (N,h) formal expansions match" if exact_ok else "mismatches above",
            )
        )
        pair_universe = min(n_max, 5)
        ok, msg = _verify_pairing_cell(pair_universe)
        rows.append((f"pairing counts universe<={pair_universe}", ok, msg))
        for n in range(1, n_max + 1):
            rows.extend(_verify_model_cell(classical_model(n), f"classical N={n}", tol, args.corrupt))
            if n >= 2:
                rows.extend(_verify_model_cell(quantum_model(n), f"quantum N={n}", tol, args.corrupt))
            for h in (3, 4):
                if h <= n:
                    rows.extend(
                        _verify_model_cell(synthetic_model(n, h), f"synthetic N={n} h={h}", tol, args.corrupt)
                    )

    width = max(len(r[0]) for r in rows)
    all_ok = True
    for name, ok, detail in rows:
        status = "pass" if ok else "FAIL"
        all_ok = all_ok and ok
        print(f"{name:<{width}}  {status}  {detail}")
    print(f"verify: {'all checks passed' if all_ok else 'CHECKS FAILED'}")
    return 0 if all_ok else CHECK_FAILED


# ---------------------------------------------------------------------------
# search / bound
# ---------------------------------------------------------------------------

def _run_one(
    kind: str,
    n: int,
    order: int | None,
    strategy: str,
    seed: int,
    k_max: int,
    tol: float,
) -> ProgressReport:
    if kind == "quantum" and strategy == "grover" and n > QUANTUM_DENSE_LIMIT:
        return quantum_grover_report(n, k_max)
    model = _build_model(kind, n, order)
    schedule = make_schedule(model, strategy, seed)
    return progress_measures(model, run_search(model, schedule, k_max, tol=tol))


def cmd_search(args: argparse.Namespace) -> int:
    n = _single_n(_parse_int_list(args.n), "search")
    strategy = args.strategy or default_strategy(args.model)
    seeds = _parse_seeds(args.seeds)
    k_max = args.k_max if args.k_max is not None else default_k_max(n)
    report = _run_one(args.model, n, args.h, strategy, seeds[0], k_max, args.tol)

    print(f"model={args.model} N={n} h={report.order} strategy={report.strategy} k_max={k_max}")
    print(f"{'k':>4}  {'success_mean':>12}  {'success_min':>12}  {'D_k':>12}  {'4hk^2':>10}")
    mean, low = report.success_mean, report.success_min
    for i, k in enumerate(report.k):
        print(
            f"{int(k):>4}  {mean[i]:>12.6f}  {low[i]:>12.6f}  "
            f"{report.divergence[i]:>12.6f}  {report.upper_bound[i]:>10.1f}"
        )
    crossing = report.first_crossing()
    if crossing is None:
        print(f"k*: saturated (success never reached 1/2 within k_max={k_max})")
    else:
        print(f"k* (first per-item success >= 1/2): {crossing}")
    _write_output(
        args,
        lambda fh, cfg: write_report_csv(report, fh, config=cfg),
        lambda cfg: reports_to_json(report, config=cfg),
    )
    return 0


def cmd_bound(args: argparse.Namespace) -> int:
    n = _single_n(_parse_int_list(args.n), "bound")
    strategy = args.strategy or default_strategy(args.model)
    seeds = _parse_seeds(args.seeds)
    if strategy != "random":
        seeds = seeds[:1]
    k_max = args.k_max if args.k_max is not None else default_k_max(n)

    reports = []
    all_ok = True
    for seed in seeds:
        report = _run_one(args.model, n, args.h, strategy, seed, k_max, args.tol)
        reports.append(report)
        upper = check_upper_bound(report)
        lower = check_lower_bound(report)
        ok = upper.holds and lower.holds
        all_ok = all_ok and ok
        crossing = f"k={lower.crossing_k}" if lower.crossed else "no crossing"
        print(
            f"seed={seed}: upper {'ok' if upper.holds else 'VIOLATED'} "
            f"(max D_k - 4hk^2 = {upper.max_excess:.3e}); "
            f"lower {'ok' if lower.holds else 'VIOLATED'} "
            f"({crossing}, floor {lower.floor:.4f})"
        )
    print(f"bound: {'all bounds hold' if all_ok else 'BOUND VIOLATED'}")
    _write_output(
        args,
        lambda fh, cfg: write_report_csv(reports, fh, config=cfg),
        lambda cfg: reports_to_json(reports, config=cfg),
    )
    return 0 if all_ok else CHECK_FAILED


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def cmd_sweep(args: argparse.Namespace) -> int:
    ns = _parse_int_list(args.n)
    if not ns:
        raise UsageError("sweep needs at least one N in --n")
    strategy = args.strategy or default_strategy(args.model)
    seeds = _parse_seeds(args.seeds)
    result = scaling_sweep(
        args.model,
        ns,
        strategy,
        order=args.h,
        seed=seeds[0],
        k_max=args.k_max,
        tol=args.tol,
    )
    print(
        f"{'N':>6}  {'k*':>6}  {'k_peak':>6}  {'success@k*':>11}  "
        f"{'floor':>8}  saturated"
    )
    for row in result.rows:
        k_star = "-" if row.k_star is None else str(row.k_star)
        succ = "-" if row.success_at_k_star is None else f"{row.success_at_k_star:.4f}"
        print(
            f"{row.n_slits:>6}  {k_star:>6}  {row.k_peak:>6}  {succ:>11}  "
            f"{row.floor:>8.3f}  {'yes' if row.saturated else 'no'}"
        )
    for stat in ("crossing", "peak"):
        exp = result.exponent(stat)
        print(f"exponent ({stat}): {'n/a' if exp is None else f'{exp:.4f}'}")
    _write_output(
        args,
        lambda fh, cfg: write_sweep_csv(result, fh, config=cfg),
        lambda cfg: sweep_to_json(result, config=cfg),
    )
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser, *, needs_n: bool) -> None:
    parser.add_argument(
        "--model",
        choices=["classical", "quantum", "synthetic"],
        default="quantum",
        help="model family",
    )
    parser.add_argument(
        "--n",
        required=needs_n,
        help="number of list items / slits (comma list for sweep)",
    )
    parser.add_argument(
        "--h",
        type=int,
        default=None,
        help="interference order for synthetic models (default 3)",
    )
    parser.add_argument(
        "--strategy",
        choices=["grover", "reflect", "random"],
        default=None,
        help="schedule strategy (default: grover for quantum, reflect otherwise)",
    )
    parser.add_argument(
        "--seeds",
        default="1",
        help="seed count (e.g. 20 -> seeds 0..19) or explicit comma list",
    )
    parser.add_argument("--k-max", type=int, default=None, help="step budget (default ceil(4 sqrt N))")
    parser.add_argument("--tol", type=float, default=1e-9, help="numeric tolerance")
    parser.add_argument("--out", default=None, help="output file path")
    parser.add_argument(
        "--format", choices=["csv", "json"], default="csv", help="output format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hoisearch",
        description=(
            "Sector-decomposed models with bounded interference order: "
            "verify the projector algebra, run marked-item searches, and "
            "check the query-count bounds."
        ),
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"hoisearch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser(
        "verify",
        help="exact subset identities and numeric projector/oracle checks",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p_verify.add_argument("--n-max", type=int, default=6, help="grid upper bound for N")
    p_verify.add_argument("--n", default=None, help="verify a single N instead of the grid")
    p_verify.add_argument("--h", type=int, default=None, help="order for the single-N cell")
    p_verify.add_argument("--tol", type=float, default=1e-9, help="numeric tolerance")
    p_verify.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p_verify.set_defaults(func=cmd_verify)

    p_search = sub.add_parser(
        "search",
        help="run one search experiment and report per-query success",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_common(p_search, needs_n=True)
    p_search.set_defaults(func=cmd_search)

    p_bound = sub.add_parser(
        "bound",
        help="check the progress-measure bounds over a seed set",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_common(p_bound, needs_n=True)
    p_bound.set_defaults(func=cmd_bound)

    p_sweep = sub.add_parser(
        "sweep",
        help="query counts against list size, with the scaling floor",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_common(p_sweep, needs_n=True)
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
