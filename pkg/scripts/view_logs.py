#!/usr/bin/env python3
"""View failed lab runs and test failures from the error log."""
import argparse
import json
import shlex
import sys
from pathlib import Path
from typing import List, Optional

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from eldb_core.error_logger import get_error_logger


def rerun_hint(error_data: dict) -> Optional[str]:
    """Command that repeats the failed run, when the record allows it."""
    command = error_data.get("command", "")
    context = error_data.get("context", {})
    if command.startswith("test:"):
        return f"uv run pytest scripts -k {command[len('test:'):]}"
    argv = context.get("argv")
    if argv:
        return "uv run python main.py " + shlex.join(str(a) for a in argv)
    return None


def format_error(error_data: dict, brief: bool = False) -> str:
    """Format one record, either in full or as a single line."""
    if brief:
        message = (error_data.get("error_message") or "").split("\n", 1)[0]
        return (
            f"{error_data.get('error_id', 'N/A')}  {error_data.get('command', 'unknown'):<20} "
            f"{error_data.get('error_type', 'N/A')}: {message[:100]}"
        )

    lines = [
        f"Error ID: {error_data.get('error_id', 'N/A')}",
        f"Timestamp: {error_data.get('timestamp', 'N/A')}",
        f"Command: {error_data.get('command', 'N/A')}",
        f"Type: {error_data.get('error_type', 'N/A')}",
        f"Message: {error_data.get('error_message', 'N/A')}",
    ]
    context = {k: v for k, v in error_data.get("context", {}).items() if k != "argv"}
    if context:
        lines.append(f"Context: {json.dumps(context, indent=2, default=str)}")
    hint = rerun_hint(error_data)
    if hint:
        lines.append(f"Rerun: {hint}")

    traceback = error_data.get("traceback", "")
    if traceback:
        lines.append(f"\nTraceback:\n{traceback}")

    lines.append("=" * 80)
    return "\n".join(lines)


def print_stats(stats: dict) -> None:
    print("\n" + "=" * 80)
    print("ERROR STATISTICS")
    print("=" * 80)
    print(f"Total Errors: {stats['total_errors']}")
    print("\nErrors by Type:")
    for error_type, count in sorted(stats["errors_by_type"].items(), key=lambda x: -x[1]):
        print(f"  {error_type}: {count}")
    print("\nErrors by Command:")
    for command, count in sorted(stats["errors_by_command"].items(), key=lambda x: -x[1]):
        print(f"  {command}: {count}")
    if stats["failing_tests"]:
        print("\nFailing Tests:")
        for name in stats["failing_tests"]:
            print(f"  {name}")
    if stats["latest_error"]:
        print("\nLatest Error:")
        print(f"  ID: {stats['latest_error'].get('error_id')}")
        print(f"  Command: {stats['latest_error'].get('command')}")
        print(f"  Type: {stats['latest_error'].get('error_type')}")
        print(f"  Time: {stats['latest_error'].get('timestamp')}")
    print("=" * 80 + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="View the lab error log")
    parser.add_argument("-n", "--number", type=int, default=10, help="Number of recent errors to show (default: 10)")
    parser.add_argument("--all", action="store_true", help="Show every matching error")
    parser.add_argument("--stats", action="store_true", help="Show counts by type, command and failing test")
    parser.add_argument("--id", type=str, help="Show one error by ID")
    parser.add_argument("--command", type=str, help="Only errors of this command, e.g. sweep, solve or test")
    parser.add_argument("--type", type=str, dest="error_type", help="Only errors of this type, e.g. ConfigError")
    parser.add_argument("--brief", action="store_true", help="One line per error")
    args = parser.parse_args(argv)
    logger = get_error_logger()

    if args.stats:
        print_stats(logger.get_log_stats())
        return 0

    if args.id:
        found = [e for e in logger.get_recent_errors(limit=10000) if e.get("error_id") == args.id]
        if not found:
            print(f"Error with ID '{args.id}' not found.")
            return 1
        print(format_error(found[0]))
        return 0

    limit = 10000 if args.all else args.number
    errors = logger.find_errors(command=args.command, error_type=args.error_type, limit=limit)
    if not errors:
        print("No matching errors in the log.")
        return 0

    print(f"\nShowing {len(errors)} error(s):\n")
    for i, error_data in enumerate(errors, 1):
        if args.brief:
            print(format_error(error_data, brief=True))
            continue
        print(f"[{i}/{len(errors)}]")
        print(format_error(error_data))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
