#!/usr/bin/env python3
"""Regenerate src/detic/data/layouts.json from the role-inference search.

The file is checked in for reproducibility; tests assert that re-deriving
every layout reproduces it.
"""

from __future__ import annotations

import json
from pathlib import Path

from detic.exactmath import format_rat
from detic.regions import load_region_table
from detic.scheme import infer_roles, interior_sample

OUT = Path(__file__).resolve().parent.parent / "src" / "detic" / "data" / "layouts.json"


def main() -> None:
    entries = []
    for spec in load_region_table():
        layout = infer_roles(spec)
        eps, delta = interior_sample(spec)
        entry = layout.to_json_dict()
        entry["interior"] = [format_rat(eps), format_rat(delta)]
        entries.append(entry)
        print(f"{spec.id}: {[r.to_string() for _, r in layout.blocks]}")
    OUT.write_text(json.dumps(entries, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
