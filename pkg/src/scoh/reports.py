"""Deterministic two-section reports: human lines, then key=value lines.

Identical inputs must give byte-identical reports, so nothing here may
depend on timing, worker counts, or unsorted containers.
"""

from __future__ import annotations

from .descriptors import Verdict


def render_report(human: list[str], machine: list[tuple[str, str]]) -> str:
    lines = list(human) + ["---"] + [f"{k}={v}" for k, v in machine]
    return "\n".join(lines) + "\n"


def verdict_str(v: Verdict | None) -> str:
    return "none" if v is None else str(v.answer)
