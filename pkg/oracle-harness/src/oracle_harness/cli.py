"""Command-line entry point: ``oracle-harness --out DIR``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .build import ToolkitVersionError, build_fixtures


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="oracle-harness",
        description="Generate golden classification fixtures with the pinned "
        "reference toolkit.",
    )
    parser.add_argument(
        "--out", type=Path, required=True, help="directory to write fixtures into"
    )
    args = parser.parse_args(argv)
    try:
        written = build_fixtures(args.out)
    except ToolkitVersionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
