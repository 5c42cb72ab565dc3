#!/usr/bin/env python3
"""Compare result documents against the golden table files.

    compare_golden.py GOLDEN_DIR OUT_DIR

Each ``golden/tableN.json`` lists the CLI invocation that produces it and a
set of checks. A check addresses a value in the result document with a
dotted field (``final.h_star`` or ``tables.sweep.skin_friction``), an
optional ``index``, and compares against ``expected`` within ``atol`` (or
``rtol``). A list-valued ``expected`` is compared element-wise against the
leading entries of the column. Exit status 1 if any check fails.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path


def lookup(doc: dict, field: str, index=None):
    node = doc
    for part in field.split("."):
        node = node[part]
    return node if index is None else node[index]


def close(actual, expected, atol=None, rtol=None) -> bool:
    if isinstance(expected, (bool, str)) or expected is None:
        return actual == expected
    if not isinstance(actual, (int, float)) or math.isnan(actual):
        return False
    limit = (atol or 0.0) + (rtol or 0.0) * abs(expected)
    return abs(actual - expected) <= limit


def check_document(golden: dict, doc: dict) -> list[tuple[bool, str]]:
    lines = []
    for chk in golden["checks"]:
        field, index = chk["field"], chk.get("index")
        actual = lookup(doc, field, index)
        expected = chk["expected"]
        atol, rtol = chk.get("atol"), chk.get("rtol")
        label = field + (f"[{index}]" if index is not None else "")
        if isinstance(expected, list):
            pairs = list(zip(actual, expected))
            ok = len(actual) >= len(expected) and all(close(a, e, atol, rtol) for a, e in pairs)
            worst = max((abs(a - e) for a, e in pairs if isinstance(a, (int, float))), default=math.nan)
            lines.append((ok, f"{label}: {len(expected)} entries, max |diff| = {worst:.2e}"))
        else:
            ok = close(actual, expected, atol, rtol)
            diff = abs(actual - expected) if isinstance(actual, (int, float)) and not isinstance(expected, bool) else 0.0
            lines.append((ok, f"{label}: got {actual!r}, expected {expected!r} (|diff| = {diff:.2e})"))
    return lines


def compare_dirs(golden_dir, out_dir) -> bool:
    all_ok = True
    for path in sorted(Path(golden_dir).glob("table*.json")):
        golden = json.loads(path.read_text())
        produced = Path(out_dir) / f"{path.stem}.json"
        if not produced.exists():
            print(f"FAIL {path.stem}: {produced} missing")
            all_ok = False
            continue
        doc = json.loads(produced.read_text())
        for ok, text in check_document(golden, doc):
            print(f"{'PASS' if ok else 'FAIL'} {path.stem} {text}")
            all_ok &= ok
    return all_ok


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    sys.exit(0 if compare_dirs(sys.argv[1], sys.argv[2]) else 1)
