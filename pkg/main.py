#!/usr/bin/env python3
"""
Command-line entry point for the stochastic Navier-Stokes regularity engine
"""

import sys
import argparse
from typing import List, Optional
from dotenv import load_dotenv

from src.application import ExperimentRunner, WorkflowResult, WORKFLOWS
from src.core.config import ExperimentConfig, load_config
from src.core.exceptions import SimulationError

load_dotenv()


class CLI:
    """Command Line Interface for the experiment runner"""

    def __init__(self):
        self.runner: Optional[ExperimentRunner] = None
        self.parser = self._create_parser()

    def _create_parser(self) -> argparse.ArgumentParser:
        """Create argument parser"""
        parser = argparse.ArgumentParser(
            description="Stochastic 3D Navier-Stokes - Galerkin simulation and invariant-measure statistics",
            formatter_class=argparse.RawDescriptionHelpFormatter
        )

        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--config', help='Config file with dotted key = value lines')
        common.add_argument('--seed', type=int, help='Override rng.seed')
        common.add_argument('--output', help='Output directory (overrides output.dir)')
        common.add_argument('--resume', metavar='CHECKPOINT', help='Continue member 0 from a checkpoint')
        common.add_argument('--checkpoint', metavar='PATH', help='Write the final state to this checkpoint')
        common.add_argument('--threads', type=int, help='Worker threads for ensemble members')
        common.add_argument('--progress', action='store_true', help='Show progress bars')

        subparsers = parser.add_subparsers(dest='command', help='Available workflows')
        descriptions = {
            'simulate': 'Run trajectories and record functionals and spectra',
            'ou-validate': 'Validate the engine against the exact linear references',
            'moments': 'Sobolev moment tables and energy balance',
            'gevrey': 'Stopping times, analyticity radius, budget and interpolation checks',
            'kolmogorov': 'Stationarity residual of the Kolmogorov operator',
            'dissipation': 'Spectrum and dissipation-scale fit',
        }
        for command in WORKFLOWS:
            subparsers.add_parser(command, parents=[common], help=descriptions[command])
        return parser

    def _load_experiment(self, args: argparse.Namespace) -> ExperimentConfig:
        experiment = load_config(args.config)
        return experiment.with_overrides(seed=args.seed, output_dir=args.output, threads=args.threads)

    def run(self, args: argparse.Namespace) -> int:
        """Run the CLI with given arguments and return the exit status"""
        if args.command not in WORKFLOWS:
            self.parser.print_help()
            return 2

        try:
            self.runner = ExperimentRunner(self._load_experiment(args), progress=args.progress)
            self.runner.initialize()
            print("✓ Configuration loaded\n")
        except SimulationError as e:
            print(f"✗ Invalid configuration: {e}")
            return 1

        try:
            result = self.runner.run(args.command, resume=args.resume, checkpoint=args.checkpoint)
        except SimulationError as e:
            print(f"✗ Workflow '{args.command}' failed: {e}")
            return 1
        self._print_result(result)
        return result.exit_code

    def _print_result(self, result: WorkflowResult) -> None:
        print("=" * 60)
        print(result.report.to_report())
        print("=" * 60)
        if result.blow_up:
            print("✗ A trajectory blew up")
        for path in result.files:
            print(f"  - {path}")
        mark = "✓" if result.passed else "✗"
        print(f"\n{mark} {result.workflow}: {'PASS' if result.passed else 'FAIL'}")


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    cli = CLI()
    args = cli.parser.parse_args(argv)

    try:
        return cli.run(args)
    except KeyboardInterrupt:
        print("\n\nInterrupted by user")
        return 130


if __name__ == "__main__":
    sys.exit(main())
