from __future__ import annotations
from pathlib import Path
from typing import List, Optional
import argparse
import sys

from apps.metapop_cli.commands import EXIT_INPUT, RunConfig, cmd_analyze, cmd_simulate, cmd_sweep


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 1); exit 2 is reserved for failed cross-checks."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True, type=Path, help="Model document (JSON)")
    p.add_argument("--env", type=Path, default=None, help="Environment document (JSON)")
    p.add_argument("--out", type=Path, default=Path("out"), help="Output directory (default: out)")
    p.add_argument("--config", type=Path, default=None, help="Tolerance table (YAML)")
    p.add_argument("--seed", type=int, default=None, help="Master seed for every random stream")
    p.add_argument("--threads", type=int, default=None, help="Worker threads (default: METAPOP_THREADS)")
    p.add_argument("--source", type=int, default=None, help="Reference source patch (1-based)")


def _simulation(p: argparse.ArgumentParser) -> None:
    p.add_argument("--generations", type=int, default=100)
    p.add_argument("--replicates", type=int, default=200)
    p.add_argument("--law", choices=["poisson", "geometric", "bernoulli_pair"], default="poisson")
    p.add_argument("--population-cap", type=int, default=None, help="Default: METAPOP_POPULATION_CAP")


def _analysis(p: argparse.ArgumentParser) -> None:
    p.add_argument("--simulate", action="store_true", help="Add Monte Carlo routes to the report")
    p.add_argument("--lyapunov-horizon", type=int, default=10_000)
    p.add_argument("--lyapunov-replicates", type=int, default=20)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="metapop", description="Persistence and growth of source-sink metapopulations")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_analyze = sub.add_parser("analyze", help="Run every analytic route and write report.json / report.csv")
    _common(p_analyze)
    _simulation(p_analyze)
    _analysis(p_analyze)

    p_sim = sub.add_parser("simulate", help="Simulate the branching process; needs --seed")
    _common(p_sim)
    _simulation(p_sim)

    p_sweep = sub.add_parser("sweep", help="Analyze over a parameter grid and write sweep.csv")
    _common(p_sweep)
    _simulation(p_sweep)
    _analysis(p_sweep)
    p_sweep.add_argument("--sweep", required=True, help="path[,path...]=start:stop:steps")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        model_path=args.model,
        env_path=args.env,
        out_dir=args.out,
        config_path=args.config,
        seed=args.seed,
        generations=args.generations,
        replicates=args.replicates,
        law=args.law,
        population_cap=args.population_cap,
        source=args.source,
        simulate=getattr(args, "simulate", False),
        lyapunov_horizon=getattr(args, "lyapunov_horizon", 10_000),
        lyapunov_replicates=getattr(args, "lyapunov_replicates", 20),
        threads=args.threads,
        sweep=getattr(args, "sweep", None),
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    if config.command == "analyze":
        return cmd_analyze(config)
    if config.command == "simulate":
        return cmd_simulate(config)
    return cmd_sweep(config)


if __name__ == "__main__":
    sys.exit(main())
