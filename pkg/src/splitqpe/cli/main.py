import argparse
import logging
import sys
from typing import List, Optional

from ..errors import AcceptanceError, SplitQPEError
from .commands import cmd_build, cmd_scan, cmd_simulate
from .config import BuildConfig, ScanCommandConfig, SimulateConfig, VerifyConfig, load_config, parse_overrides
from .verify import list_checks, run_checks

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_ACCEPTANCE = 2

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]

COMMANDS = {
    "build": (BuildConfig, "build an ethylene phase-estimation circuit and its metric summary"),
    "simulate": (SimulateConfig, "exact phase marginal or sampled shots with post-selection"),
    "scan": (ScanCommandConfig, "resource scan over a DF coefficient file or a synthetic sweep"),
    "verify": (VerifyConfig, "run the acceptance checks"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitqpe",
        description="Split-evolution phase estimation: circuits, simulation and resource estimates",
        epilog="Any config key can be overridden with --key value, e.g. --m 6 --tau 8",
    )
    parser.add_argument("--log-level", default="WARNING", choices=LOG_LEVELS, help="logging level (default WARNING)")
    # same flag after the subcommand; SUPPRESS keeps it from resetting a level given before
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=argparse.SUPPRESS, choices=LOG_LEVELS, help="logging level")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.add_argument("--config", default=None, help="JSON config file")
        if name == "verify":
            p.add_argument("--list", action="store_true", help="print check IDs without running them")
    return parser


def _verify(cfg: VerifyConfig) -> int:
    results = run_checks(cfg)
    width = max(len(r.id) for r in results) if results else 0
    for r in results:
        print(f"{r.id.ljust(width)}  {'PASS' if r.passed else 'FAIL'}  {r.detail}")
    failed = [r.id for r in results if not r.passed]
    if failed:
        raise AcceptanceError(failed)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args, rest = parser.parse_known_args(argv)
    logging.basicConfig(level=args.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify" and args.list:
            for check_id, description in list_checks():
                print(f"{check_id}  {description}")
            return EXIT_OK
        cls, _ = COMMANDS[args.command]
        cfg = load_config(cls, args.config, parse_overrides(rest))
        if args.command == "build":
            cmd_build(cfg)
        elif args.command == "simulate":
            cmd_simulate(cfg)
        elif args.command == "scan":
            cmd_scan(cfg)
        else:
            return _verify(cfg)
    except AcceptanceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ACCEPTANCE
    except SplitQPEError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
