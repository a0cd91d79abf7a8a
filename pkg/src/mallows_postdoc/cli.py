"""Command-line interface.

Subcommands:

  exact     solve a finite game (prefix-tree DP or level recurrences)
  closed    evaluate one closed-form weighted count
  optimize  regime dispatch for a theta
  tables    reproduce the published optimum tables as CSV (gt1 / mid)
  simulate  seeded Monte Carlo estimate for a strategy
  oracle    exact win probability of a strategy by exhaustive enumeration
  sweep     theta sweep of the optimal probability as CSV

theta is exact when written as "a/b" or an integer, float when written as a
decimal literal; --float forces float mode. Probabilities are serialized as
{"rational": "a/b", "float": x} in exact mode and {"float": x} otherwise.

Exit codes: 0 success, 2 usage or strategy-spec parse errors, 3 domain
errors (reported as one JSON object with an "error" field on stdout).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .closedform import t1, t1_two, t2, w1_star, w1_total, w1_two, w2
from .engine import (
    StrikeSet,
    StrikeSetError,
    ThresholdReport,
    level_recurrence,
    positivity_thresholds,
    tree_dp,
)
from .optimizer import GT1_HORIZON, RegimeResult, dispatch, optimize_gt1, optimize_mid
from .scalars import Scalar, format_rational, parse_theta, to_float
from .simulate import monte_carlo
from .strategies import (
    ExplicitStrikeSet,
    Strategy,
    TwoThreshold,
    Type1ThresholdLastAccept,
    Type2Threshold,
    oracle_exact,
)

# theta grids of the two published tables, kept as literal column text
GT1_THETAS = (
    [f"1.0{d}" for d in range(1, 10)]
    + ["1.10"]
    + [f"1.{d}" for d in range(2, 10)]
    + [str(v) for v in range(2, 11)]
)
MID_THETAS = [f"0.{c}" for c in range(51, 100)]


class StrategySpecError(ValueError):
    pass


class UsageError(ValueError):
    pass


def parse_strategy_spec(text: str) -> tuple[Strategy, list[str]]:
    """Parse a strategy spec string; returns (strategy, notices).

    Grammar: "type2:k=<int>" | "type1last:k=<int>" | "two:k1=<int>,k2=<int>"
    | "strikeset:<path to JSON list of integer-array patterns>".
    """
    if not text:
        raise StrategySpecError("empty strategy spec")
    head, sep, rest = text.partition(":")
    if not sep:
        raise StrategySpecError(f"strategy spec {text!r} is missing ':'")
    notices: list[str] = []

    def int_field(item: str, name: str) -> int:
        key, sep2, val = item.partition("=")
        if not sep2 or key != name:
            raise StrategySpecError(f"expected {name}=<int>, got {item!r}")
        try:
            return int(val)
        except ValueError:
            raise StrategySpecError(f"bad integer {val!r} for {name}") from None

    if head == "type2":
        k = int_field(rest, "k")
        if k == 0:
            notices.append("type2 k=0 normalized to k=1 (identical win probability)")
            k = 1
        return Type2Threshold(k), notices
    if head == "type1last":
        return Type1ThresholdLastAccept(int_field(rest, "k")), notices
    if head == "two":
        parts = rest.split(",")
        if len(parts) != 2:
            raise StrategySpecError(f"expected k1=<int>,k2=<int>, got {rest!r}")
        k1 = int_field(parts[0], "k1")
        k2 = int_field(parts[1], "k2")
        if k1 > k2:
            raise StrategySpecError("k1 must be <= k2")
        return TwoThreshold(k1, k2), notices
    if head == "strikeset":
        return _load_strike_set_file(rest), notices
    raise StrategySpecError(f"unknown strategy kind {head!r}")


def _load_strike_set_file(path_text: str) -> ExplicitStrikeSet:
    path = Path(path_text)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise StrategySpecError(f"cannot read strike set file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise StrategySpecError(f"strike set file is not valid JSON: {exc}") from None
    if not isinstance(raw, list) or not all(
        isinstance(row, list) and all(isinstance(v, int) for v in row) for row in raw
    ):
        raise StrategySpecError("strike set file must be a JSON list of integer arrays")
    if not raw:
        raise StrategySpecError("strike set file is empty")
    # host_length is provisional; the game size rebinds it (see _bind_strategy)
    host = max(len(row) for row in raw)
    strike = StrikeSet(frozenset(tuple(row) for row in raw), host_length=host)
    return ExplicitStrikeSet(strike)


def _bind_strategy(strategy: Strategy, n: int) -> Strategy:
    """Attach the game size to a loaded strike set and validate it.

    Eligibility and minimality are enforced. Completeness is checked when
    affordable; a set that only misses losing full-length patterns behaves
    identically (uncovered permutations are no-pick losses), so gaps are
    reported as a notice rather than rejected.
    """
    if not isinstance(strategy, ExplicitStrikeSet):
        return strategy
    strike = StrikeSet(strategy.strike_set.patterns, host_length=n)
    strike.validate()
    if n <= 9 and not strike.is_complete():
        print(
            "note: strike set does not cover every permutation; uncovered "
            "orders count as no-pick losses",
            file=sys.stderr,
        )
    return ExplicitStrikeSet(strike)


def _prob_payload(value: Scalar) -> dict:
    rational = format_rational(value)
    payload = {"float": to_float(value)}
    if rational is not None:
        payload["rational"] = rational
    return payload


def _threshold_payload(report: ThresholdReport) -> dict:
    return {
        "k1": report.k1,
        "k2": report.k2,
        "ties": [{"type": t, "length": k} for (t, k) in report.ties],
        "violations": list(report.violations),
    }


def _emit_json(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def emit_sweep(rows: Sequence[tuple[str, ...]], header: str) -> str:
    """CSV bytes for a sweep-style table: UTF-8, LF endings, 8-decimal p."""
    lines = [header]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _fmt_p(p: float) -> str:
    return f"{p:.8f}"


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_exact(args: argparse.Namespace) -> int:
    theta = parse_theta(args.theta, force_float=args.float)
    report = positivity_thresholds(args.n, theta)
    out = {
        "theta": args.theta,
        "n": args.n,
        "method": args.method,
        **_threshold_payload(report),
    }
    if args.method == "tree":
        solution = tree_dp(args.n, theta)
        out["win_probability"] = _prob_payload(solution.win_probability)
        out["strike_set"] = sorted(
            (list(pat) for pat in solution.strike_set.patterns),
            key=lambda row: (len(row), row),
        )
    else:
        table = level_recurrence(args.n, theta, "finite")
        out["win_probability"] = _prob_payload(table.win_probability())
    _emit_json(out)
    return 0


_CLOSED_FORMS = {
    "t1": (t1, ("n", "k")),
    "t2": (t2, ("n", "k")),
    "w1star": (w1_star, ("n", "k")),
    "w1": (w1_total, ("n", "k")),
    "w2": (w2, ("n", "k")),
    "t1two": (t1_two, ("n", "k1", "k2")),
    "w1two": (w1_two, ("n", "k1", "k2")),
}


def _cmd_closed(args: argparse.Namespace) -> int:
    theta = parse_theta(args.theta, force_float=args.float)
    fn, fields = _CLOSED_FORMS[args.quantity]
    call_args = []
    for name in fields:
        value = getattr(args, name)
        if value is None:
            raise UsageError(f"--{name} is required for quantity {args.quantity}")
        call_args.append(value)
    value = fn(*call_args, theta)
    _emit_json(
        {
            "quantity": args.quantity,
            "theta": args.theta,
            "args": dict(zip(fields, call_args)),
            "value": _prob_payload(value),
        }
    )
    return 0


def _regime_payload(result: RegimeResult) -> dict:
    return {
        "regime": result.regime,
        "strategy": {
            "kind": result.strategy.kind,
            "params": dict(result.strategy.params),
            "description": result.strategy.description,
        },
        "win_probability": _prob_payload(result.win_probability),
        "indifference_notes": list(result.indifference_notes),
    }


def _cmd_optimize(args: argparse.Namespace) -> int:
    theta = parse_theta(args.theta, force_float=args.float)
    result = dispatch(theta, grid_max=args.grid_max, k_max=args.k_max)
    _emit_json({"theta": args.theta, **_regime_payload(result)})
    return 0


def _cmd_tables(args: argparse.Namespace) -> int:
    if args.which == "gt1":
        rows = []
        for text in GT1_THETAS:
            k, p = optimize_gt1(float(text), args.k_max, horizon=GT1_HORIZON)
            rows.append((text, str(k), _fmt_p(p)))
        sys.stdout.write(emit_sweep(rows, "theta,k,p"))
    else:
        rows = []
        for text in MID_THETAS:
            x, y, p = optimize_mid(float(text), args.grid_max)
            rows.append((text, str(x), str(y), _fmt_p(p)))
        sys.stdout.write(emit_sweep(rows, "theta,x,y,p"))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    strategy, notices = parse_strategy_spec(args.strategy)
    for note in notices:
        print(f"note: {note}", file=sys.stderr)
    strategy = _bind_strategy(strategy, args.n)
    theta = to_float(parse_theta(args.theta))
    result = monte_carlo(args.n, theta, strategy, args.trials, args.seed)
    _emit_json(
        {
            "estimate": result.estimate,
            "stderr": result.stderr,
            "trials": result.trials,
            "seed": result.seed,
        }
    )
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    strategy, notices = parse_strategy_spec(args.strategy)
    for note in notices:
        print(f"note: {note}", file=sys.stderr)
    strategy = _bind_strategy(strategy, args.n)
    theta = parse_theta(args.theta, force_float=args.float)
    value = oracle_exact(args.n, theta, strategy)
    _emit_json({"win_probability": _prob_payload(value)})
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    start, end, step = args.theta_start, args.theta_end, args.theta_step
    if step <= 0:
        raise ValueError(f"theta step must be positive, got {step}")
    if start <= 0:
        raise ValueError(f"theta grid must be positive, starts at {start}")
    rows = []
    theta = start
    index = 0
    while theta <= end + 1e-12:
        result = dispatch(theta)
        rows.append((f"{theta:.6g}", result.regime, _fmt_p(to_float(result.win_probability))))
        index += 1
        theta = start + index * step
    sys.stdout.write(emit_sweep(rows, "theta,regime,p"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mallows-postdoc",
        description="Second-best stopping under Mallows interview orders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_theta(p: argparse.ArgumentParser) -> None:
        p.add_argument("--theta", required=True, help='"a/b" (exact) or decimal (float)')
        p.add_argument(
            "--float", action="store_true", help="force float mode for rational theta"
        )

    p = sub.add_parser("exact", help="solve a finite game exactly")
    p.add_argument("--n", type=int, required=True)
    add_common_theta(p)
    p.add_argument("--method", choices=("tree", "levels"), default="levels")
    p.set_defaults(handler=_cmd_exact)

    p = sub.add_parser("closed", help="evaluate one closed-form weighted count")
    p.add_argument("--quantity", choices=sorted(_CLOSED_FORMS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--k1", type=int)
    p.add_argument("--k2", type=int)
    add_common_theta(p)
    p.set_defaults(handler=_cmd_closed)

    p = sub.add_parser("optimize", help="regime dispatch for a theta")
    add_common_theta(p)
    p.add_argument("--grid-max", type=int, default=100)
    p.add_argument("--k-max", type=int, default=200)
    p.set_defaults(handler=_cmd_optimize)

    p = sub.add_parser("tables", help="published optimum tables as CSV")
    p.add_argument("--which", choices=("gt1", "mid"), required=True)
    p.add_argument("--grid-max", type=int, default=100)
    p.add_argument("--k-max", type=int, default=200)
    p.set_defaults(handler=_cmd_tables)

    p = sub.add_parser("simulate", help="seeded Monte Carlo estimate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("oracle", help="exact strategy win probability")
    p.add_argument("--n", type=int, required=True)
    add_common_theta(p)
    p.add_argument("--strategy", required=True)
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("sweep", help="theta sweep of the optimal probability")
    p.add_argument("--theta-start", type=float, required=True)
    p.add_argument("--theta-end", type=float, required=True)
    p.add_argument("--theta-step", type=float, required=True)
    p.set_defaults(handler=_cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except StrategySpecError as exc:
        print(f"strategy spec error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except StrikeSetError as exc:
        _emit_json({"error": f"invalid strike set: {exc}"})
        return 3
    except (ValueError, ArithmeticError, OverflowError) as exc:
        _emit_json({"error": str(exc)})
        return 3


if __name__ == "__main__":
    sys.exit(main())
