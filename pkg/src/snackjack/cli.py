"""Command line front end.

Subcommands: ``tables`` (exact strategy tables), ``sweep`` (expectation
surface as CSV plus a heatmap figure), ``simulate`` (circuit Monte
Carlo with an optional report figure), ``verify`` (acceptance gate)
and ``serve`` (HTTP session API).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import acceptance, circuit, formats, oracle
from .oracle import GameParams, StrategyOp


def _angle(token: str) -> float:
    try:
        return formats.parse_angle(token)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _params_from(args: argparse.Namespace) -> GameParams:
    return GameParams(args.gamma, args.theta)


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _sibling_figure(path: Optional[str]) -> Optional[str]:
    if path is None or path == "-":
        return None
    return str(Path(path).with_suffix(".png"))


def cmd_tables(args: argparse.Namespace) -> int:
    params = None if args.classical else _params_from(args)
    if args.format == "text":
        out = formats.render_table_text(params)
    elif args.format == "csv":
        out = formats.render_table_csv(params)
    else:
        out = json.dumps(formats.table_json(params), indent=2) + "\n"
    _write_output(out, args.output)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    n = args.resolution
    if n < 2:
        print("resolution must be at least 2", file=sys.stderr)
        return 2
    gammas = [i * (math.pi / 2) / (n - 1) for i in range(n)]
    thetas = list(gammas)
    grid = oracle.sweep(gammas, thetas)
    _write_output(formats.render_sweep_csv(gammas, thetas, grid), args.output)
    figure = args.figure or (None if args.no_figure else _sibling_figure(args.output))
    if figure:
        from . import plots

        plots.sweep_heatmap(gammas, thetas, grid, figure)
        print(f"wrote figure {figure}", file=sys.stderr)
    return 0


def _resolve_strategy(tag: str):
    if tag == "H":
        from .ewl import HADAMARD

        return HADAMARD
    return StrategyOp(tag)


def cmd_simulate(args: argparse.Namespace) -> int:
    params = _params_from(args)
    config = circuit.GameConfig(
        params=params,
        strategy=_resolve_strategy(args.strategy),
        mode=args.mode,
        seed=args.seed,
        row=args.row,
    )
    result = circuit.monte_carlo(config, args.hands)
    payload = {
        "gamma": params.gamma,
        "theta": params.theta,
        "strategy": args.strategy,
        "mode": args.mode,
        "row": args.row,
        "hands": result.n,
        "mean": result.mean,
        "stderr": result.stderr,
        "payoff_counts": {str(k): v for k, v in sorted(result.payoff_counts.items())},
    }
    if result.per_row:
        payload["per_row"] = {
            str(row): {"hands": cnt, "mean": mean}
            for row, (cnt, mean) in result.per_row.items()
        }
    if args.format == "json":
        out = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [
            f"hands: {result.n}",
            f"mean payoff: {result.mean:.6f} +- {result.stderr:.6f}",
            "payoff counts: " + ", ".join(
                f"{k:+d}: {v}" for k, v in sorted(result.payoff_counts.items())
            ),
        ]
        if result.per_row:
            lines.append("per-row means:")
            for row, (cnt, mean) in result.per_row.items():
                lines.append(f"  row {row:2d}: {mean:+.4f} over {cnt} hands")
        out = "\n".join(lines) + "\n"
    _write_output(out, args.output)
    figure = args.figure or (None if args.no_figure else _sibling_figure(args.output))
    if figure:
        from . import plots

        oracle_rows = None
        if args.row is None and isinstance(config.strategy, StrategyOp):
            payoffs = [
                oracle.ewl_payoffs(q, params)[config.strategy]
                for q in oracle.quadruples()
            ]
            oracle_rows = {i + 1: float(v) for i, v in enumerate(payoffs)}
        plots.simulation_report(result, oracle_rows, figure)
        print(f"wrote figure {figure}", file=sys.stderr)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    results = acceptance.run_all()
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snackjack",
        description="Quantized snackjack: exact tables, sweeps, circuit simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="print the per-class strategy table")
    p.add_argument("--classical", action="store_true", help="stand/hit only")
    p.add_argument("--gamma", type=_angle, default=math.pi / 2,
                   help="entangling angle (number or pi token like pi/2)")
    p.add_argument("--theta", type=_angle, default=math.pi / 2)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("-o", "--output", default=None, help="file path, - for stdout")
    p.set_defaults(fn=cmd_tables)

    p = sub.add_parser("sweep", help="expectation surface over both angles")
    p.add_argument("--resolution", type=int, default=65,
                   help="grid points per axis over [0, pi/2]")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--figure", default=None,
                   help="heatmap path (default: alongside -o)")
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo over the game circuit")
    p.add_argument("--gamma", type=_angle, default=0.0)
    p.add_argument("--theta", type=_angle, default=0.0)
    p.add_argument("--strategy", choices=("I", "X", "Y", "Z", "H"), default="I")
    p.add_argument("--mode", choices=(circuit.FAITHFUL, circuit.EARLY_COLLAPSE),
                   default=circuit.EARLY_COLLAPSE)
    p.add_argument("--hands", type=int, default=100_000)
    p.add_argument("--row", type=int, choices=range(1, 17), default=None,
                   help="pin the deal to one initial class")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--figure", default=None)
    p.add_argument("--no-figure", action="store_true")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="run the acceptance gate")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("serve", help="serve the HTTP session API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
