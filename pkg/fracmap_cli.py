#!/usr/bin/env python3
"""Run the fracmap CLI from a source checkout: python fracmap_cli.py orbit ..."""

from __future__ import annotations

from fracmap.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
