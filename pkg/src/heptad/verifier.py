"""Independent certification of decompositions.

Nothing here trusts how a design was built: host arcs are recomputed from the
host description, and block classes are read off each block's arcs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .catalog import CLASS_ARCS, classify_many
from .design import Decomposition, UBlock
from .hosts import HostSpec

Pair = tuple[int, int]


@dataclass
class Report:
    missing_arcs: list[Pair] = field(default_factory=list)
    duplicated_arcs: list[Pair] = field(default_factory=list)
    foreign_arcs: list[Pair] = field(default_factory=list)
    bad_blocks: list[tuple[int, str]] = field(default_factory=list)
    n_blocks: int = 0
    n_arcs: int = 0
    directed: bool = True

    @property
    def ok(self) -> bool:
        return not (self.missing_arcs or self.duplicated_arcs or self.foreign_arcs or self.bad_blocks)

    def __bool__(self) -> bool:
        return self.ok


def _block_arcs(blocks: np.ndarray, classes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    tails = np.empty_like(blocks)
    heads = np.empty_like(blocks)
    for c in np.unique(classes):
        rows = classes == c
        if int(c) not in CLASS_ARCS:
            continue
        pattern = np.array(CLASS_ARCS[int(c)])
        tails[rows] = blocks[rows][:, pattern[:, 0]]
        heads[rows] = blocks[rows][:, pattern[:, 1]]
    return tails, heads


def _compare(counts: np.ndarray, expected: np.ndarray, n: int, report: Report) -> None:
    def pairs(mask):
        idx = np.flatnonzero(mask)
        return list(zip((idx // n).tolist(), (idx % n).tolist()))

    report.missing_arcs = pairs(expected & (counts == 0))
    report.duplicated_arcs = pairs(counts > 1)
    report.foreign_arcs = pairs(~expected & (counts > 0))


def verify(d: Decomposition) -> Report:
    host = d.host
    n = host.order
    blocks = np.asarray(d.blocks, dtype=np.int64).reshape(-1, 7)
    classes = np.asarray(d.classes, dtype=np.int64)
    report = Report(n_blocks=len(blocks), n_arcs=int(host.adjacency().sum()) if host.directed else 0)
    if not host.directed:
        report.bad_blocks.append((-1, f"host {host.kind} is undirected"))
        return report

    in_range = np.all((blocks >= 0) & (blocks < n), axis=1)
    known = np.isin(classes, list(CLASS_ARCS))
    usable = in_range & known
    tails, heads = _block_arcs(blocks[usable], classes[usable])
    found = np.zeros(len(blocks), dtype=np.int64)
    found[usable] = classify_many(tails, heads, blocks[usable])
    for i in np.flatnonzero(~in_range).tolist():
        report.bad_blocks.append((i, "label out of range"))
    for i in np.flatnonzero(in_range & ~known).tolist():
        report.bad_blocks.append((i, f"unknown class id {int(classes[i])}"))
    for i in np.flatnonzero(usable & (found == 0)).tolist():
        report.bad_blocks.append((i, "not an oriented heptagon (repeated label)"))
    for i in np.flatnonzero(usable & (found != 0) & (found != d.cls)).tolist():
        report.bad_blocks.append((i, f"block is D{int(found[i])}, expected D{d.cls}"))
    report.bad_blocks.sort()

    codes = (tails * n + heads).ravel()
    counts = np.bincount(codes, minlength=n * n)
    _compare(counts, host.adjacency().ravel(), n, report)
    return report


def verify_undirected(blocks: Iterable[UBlock], host: HostSpec) -> Report:
    blocks = list(blocks)
    n = host.order
    report = Report(n_blocks=len(blocks), directed=False)
    if host.directed:
        report.bad_blocks.append((-1, f"host {host.kind} is directed"))
        return report
    codes = []
    for i, b in enumerate(blocks):
        if len(set(b.labels)) != len(b.labels):
            report.bad_blocks.append((i, f"{b.kind} has a repeated vertex"))
            continue
        if min(b.labels) < 0 or max(b.labels) >= n:
            report.bad_blocks.append((i, "label out of range"))
            continue
        codes.extend(a * n + c for a, c in b.edges())
    counts = np.bincount(np.asarray(codes, dtype=np.int64), minlength=n * n)
    expected = np.triu(host.adjacency()).ravel()
    report.n_arcs = int(expected.sum())
    _compare(counts, expected, n, report)
    return report


def diagnose(target: Decomposition | Report, limit: int = 20) -> str:
    """One-line verdict, followed by sorted problem listings when not ok."""
    report = verify(target) if isinstance(target, Decomposition) else target
    unit = "arcs" if report.directed else "edges"
    if report.ok:
        return f"OK: {report.n_blocks} blocks, {report.n_arcs} {unit}"
    lines = [f"FAIL: {report.n_blocks} blocks, {report.n_arcs} {unit}"]
    for label, items in (
        (f"missing {unit}", report.missing_arcs),
        (f"duplicated {unit}", report.duplicated_arcs),
        (f"foreign {unit}", report.foreign_arcs),
    ):
        if items:
            shown = " ".join(f"({a},{b})" for a, b in sorted(items)[:limit])
            more = f" ... (+{len(items) - limit})" if len(items) > limit else ""
            lines.append(f"  {len(items)} {label}: {shown}{more}")
    for i, reason in report.bad_blocks[:limit]:
        lines.append(f"  bad block {i}: {reason}")
    return "\n".join(lines)
