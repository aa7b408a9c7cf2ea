#!/usr/bin/env python3
"""Clear the lab error log, entirely or for one command or error type."""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from eldb_core.error_logger import get_error_logger


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Clear the lab error log")
    parser.add_argument("--confirm", action="store_true", help="Skip confirmation prompt")
    parser.add_argument("--command", type=str, help="Only drop errors of this command, e.g. sweep or test")
    parser.add_argument("--type", type=str, dest="error_type", help="Only drop errors of this type")
    args = parser.parse_args(argv)
    logger = get_error_logger()
    selective = args.command is not None or args.error_type is not None

    if selective:
        matching = logger.find_errors(command=args.command, error_type=args.error_type)
        what = f"{len(matching)} matching error(s)"
    else:
        what = "all run error logs"

    if not args.confirm:
        response = input(f"Clear {what}? (yes/no): ")
        if response.lower() != "yes":
            print("Cancelled.")
            return 0

    if selective:
        removed = logger.remove_errors(command=args.command, error_type=args.error_type)
        print(f"✓ Removed {removed} error(s).")
        return 0

    if logger.clear_logs():
        print("✓ Error logs cleared.")
        return 0
    print("✗ Failed to clear error logs. Check permissions.")
    return 1


if __name__ == "__main__":
    sys.exit(main())
