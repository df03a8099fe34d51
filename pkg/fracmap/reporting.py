"""
reporting.py

Console output for the CLI, on stderr via Rich. Data only ever goes to files
(or stdout when explicitly asked for with --out -).
"""

from __future__ import annotations

import os
from typing import Iterable, Optional, Sequence

from rich import box
from rich.console import Console
from rich.markup import escape
from rich.table import Table

_QUIET = {"on": False}

FORCE_COLOR = bool(
    os.environ.get("FRACMAP_FORCE_COLOR") or os.environ.get("FORCE_COLOR")
)

console = Console(
    stderr=True, force_terminal=True if FORCE_COLOR else None, highlight=False
)


def set_quiet(quiet: bool) -> None:
    _QUIET["on"] = bool(quiet)


def ok(msg: str) -> None:
    if not _QUIET["on"]:
        console.print(f"[green]OK:[/green] {escape(msg)}", markup=True, soft_wrap=True)


def warn(msg: str) -> None:
    console.print(f"[yellow]WARN:[/yellow] {escape(msg)}", markup=True, soft_wrap=True)


def err(msg: str) -> None:
    console.print(
        f"[bold red]ERR:[/bold red] {escape(msg)}", markup=True, soft_wrap=True
    )


def summary_table(
    title: str,
    columns: Sequence[str],
    rows: Iterable[Sequence[object]],
    *,
    caption: Optional[str] = None,
) -> None:
    if _QUIET["on"]:
        return
    t = Table(title=title, box=box.SIMPLE_HEAVY, caption=caption)
    for c in columns:
        t.add_column(c)
    for r in rows:
        t.add_row(*(_cell(v) for v in r))
    console.print(t)


def _cell(v: object) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if v is None:
        return "-"
    return str(v)
