#!/usr/bin/env python3
"""Regenerate the fixture JSON files shipped under bnexplain/data.

The in-code builders are authoritative; this script serializes them so the
same networks can be loaded by path (or by other tools). Run it after any
builder change and commit the result.
"""

import os
import sys

from bnexplain import bench
from bnexplain.model import serialize_network


def main() -> int:
    os.environ.pop("MRE_FIXTURE_DIR", None)  # always export the embedded builders
    bench.DATA_DIR.mkdir(parents=True, exist_ok=True)
    for fixture_id in bench.FIXTURE_IDS:
        path = bench.DATA_DIR / f"{fixture_id}.json"
        path.write_text(serialize_network(bench.fixture(fixture_id)) + "\n")
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
