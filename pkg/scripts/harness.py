"""Standalone runner shared by the scripts/test_*.py files.

Each test module ends with

    if __name__ == "__main__":
        sys.exit(run_tests("Title", globals()))

so `python scripts/test_solver.py [--test NAME]` prints a pass/fail summary
while `pytest scripts/` collects the same functions.
"""
import argparse
import sys
import traceback
from pathlib import Path
from typing import Callable, Dict, List, Optional

sys.path.insert(0, str(Path(__file__).parent.parent))

from eldb_core.error_logger import log_run_error


def collect_tests(namespace: Dict) -> Dict[str, Callable[[], None]]:
    """Module-level test_* functions keyed by name without the prefix."""
    return {
        name[len("test_"):]: fn
        for name, fn in namespace.items()
        if name.startswith("test_") and callable(fn)
    }


def run_tests(title: str, namespace: Dict, argv: Optional[List[str]] = None) -> int:
    """Run the collected tests and return a process exit code."""
    parser = argparse.ArgumentParser(description=f"Run {title} tests")
    parser.add_argument("--test", type=str, help="Run specific test by name")
    args = parser.parse_args(argv)

    tests = collect_tests(namespace)
    if args.test:
        key = args.test.lower().replace(" ", "_").removeprefix("test_")
        if key not in tests:
            print(f"❌ Unknown test: {args.test}")
            print(f"Available tests: {', '.join(tests)}")
            return 1
        tests = {key: tests[key]}

    print("=" * 50)
    print(f"Testing {title}")
    print("=" * 50)

    results = {}
    for name, fn in tests.items():
        try:
            fn()
            results[name] = True
            print(f"✓ {name}")
        except Exception as e:
            results[name] = False
            print(f"❌ {name}: {type(e).__name__}: {e}")
            traceback.print_exc()
            log_run_error(e, command=f"test:{name}", suite=title)

    print("\n" + "=" * 50)
    print("Test Results:")
    for name, ok in results.items():
        print(f"  {name}: {'✓ PASS' if ok else '❌ FAIL'}")
    passed = sum(results.values())
    print(f"\n{passed}/{len(results)} passed")
    print("=" * 50)
    return 0 if all(results.values()) else 1
