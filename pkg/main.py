"""Main entry point for eldb-lab."""
# Run with: python main.py <command> [options]
# Or: uv run python main.py sweep --suite cycles

import sys

from eldb_core.cli import main

if __name__ == "__main__":
    sys.exit(main())
