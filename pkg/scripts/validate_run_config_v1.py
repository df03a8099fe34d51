#!/usr/bin/env python3
from __future__ import annotations

import argparse
import json
from pathlib import Path

from fracmap.run_config import validate_run_config_v1


def main() -> int:
    ap = argparse.ArgumentParser(description="Validate run_config.v1 JSON")
    ap.add_argument("--path", required=True)
    args = ap.parse_args()

    try:
        doc = json.loads(Path(args.path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        print(f"ERR: cannot read {args.path}: {e}")
        return 1

    errors = validate_run_config_v1(doc)
    if errors:
        print("ERR: run_config.v1 validation failed:")
        for e in errors:
            print(f"- {e}")
        return 1

    print("OK: run_config.v1 valid")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
