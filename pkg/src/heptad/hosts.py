"""Host graphs: K*_v, symmetric multipartite digraphs, and their undirected cousins.

Labels are ``0 .. N-1``. Multipartite parts are either label ranges (part ``j``
holds ``s*j .. s*j+s-1``) or residue classes (part ``i`` holds labels congruent
to ``i`` modulo the number of parts).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidHost, UnsupportedBlock

DIRECTED_KINDS = ("Kstar", "KstarMultipartite", "KstarEvenMinusFactor")
UNDIRECTED_KINDS = ("K", "KMinusFactor", "KMultipartite")


@dataclass(frozen=True)
class HostSpec:
    kind: str
    v: int = 0
    parts: tuple[int, ...] = ()
    x: int = 0
    factor: tuple[tuple[int, int], ...] = ()
    layout: str = "ranges"

    def __post_init__(self):
        if self.kind not in DIRECTED_KINDS + UNDIRECTED_KINDS:
            raise InvalidHost(f"unknown host kind {self.kind!r}")
        if self.layout not in ("ranges", "residues"):
            raise InvalidHost(f"unknown layout {self.layout!r}")
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "factor", tuple(tuple(sorted(e)) for e in self.factor))
        if self.kind in ("KstarMultipartite", "KMultipartite"):
            if not self.parts or min(self.parts) < 1:
                raise InvalidHost(f"part sizes must be positive, got {self.parts}")
            if self.layout == "residues" and len(set(self.parts)) != 1:
                raise InvalidHost("residue layout needs equal part sizes")
            object.__setattr__(self, "v", sum(self.parts))
        elif self.kind == "KstarEvenMinusFactor":
            if self.x < 1:
                raise InvalidHost("KstarEvenMinusFactor needs x >= 1")
            object.__setattr__(self, "parts", (7,) * (2 * self.x))
            object.__setattr__(self, "v", 14 * self.x)
        elif self.v < 0:
            raise InvalidHost(f"negative order {self.v}")
        if self.kind == "KMinusFactor":
            _check_one_factor(self.factor, self.v)

    # constructors named after the graphs they describe
    @classmethod
    def complete_sym(cls, v: int) -> "HostSpec":
        return cls("Kstar", v=v)

    @classmethod
    def sym_multipartite(cls, r: int, s: int = 7, layout: str = "ranges") -> "HostSpec":
        return cls("KstarMultipartite", parts=(s,) * r, layout=layout)

    @classmethod
    def sym_minus_factor(cls, x: int) -> "HostSpec":
        return cls("KstarEvenMinusFactor", x=x)

    @classmethod
    def complete(cls, v: int) -> "HostSpec":
        return cls("K", v=v)

    @classmethod
    def complete_minus_factor(cls, v: int, factor: Iterable[tuple[int, int]]) -> "HostSpec":
        return cls("KMinusFactor", v=v, factor=tuple(factor))

    @classmethod
    def multipartite(cls, r: int, s: int = 7, layout: str = "ranges") -> "HostSpec":
        return cls("KMultipartite", parts=(s,) * r, layout=layout)

    @property
    def directed(self) -> bool:
        return self.kind in DIRECTED_KINDS

    @property
    def order(self) -> int:
        return self.v

    def part_of(self) -> np.ndarray:
        """Part index of every label; all-distinct for complete hosts."""
        n = self.v
        if not self.parts:
            return np.arange(n)
        if self.layout == "residues":
            return np.arange(n) % len(self.parts)
        return np.repeat(np.arange(len(self.parts)), self.parts)

    def adjacency(self) -> np.ndarray:
        """Boolean ``N x N`` matrix; entry ``[a, b]`` marks arc (or edge) ``a -> b``."""
        part = self.part_of()
        adj = part[:, None] != part[None, :]
        if self.kind == "KstarEvenMinusFactor":
            pair = part // 2
            adj &= pair[:, None] != pair[None, :]
        elif self.kind == "KMinusFactor":
            for a, b in self.factor:
                adj[a, b] = adj[b, a] = False
        return adj

    def size(self) -> int:
        count = int(self.adjacency().sum())
        return count if self.directed else count // 2

    def to_json(self) -> dict:
        out: dict = {"host": self.kind}
        if self.kind in ("Kstar", "K", "KMinusFactor"):
            out["v"] = self.v
        if self.kind in ("KstarMultipartite", "KMultipartite"):
            out["parts"] = list(self.parts)
        if self.kind == "KstarEvenMinusFactor":
            out["x"] = self.x
        if self.kind == "KMinusFactor":
            out["factor"] = [list(e) for e in self.factor]
        out["layout"] = self.layout
        return out

    @classmethod
    def from_json(cls, data: dict) -> "HostSpec":
        try:
            kind = data["host"]
            return cls(
                kind,
                v=int(data.get("v", 0)),
                parts=tuple(int(p) for p in data.get("parts", ())),
                x=int(data.get("x", 0)),
                factor=tuple(tuple(e) for e in data.get("factor", ())),
                layout=data.get("layout", "ranges"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidHost(f"malformed host description {data!r}") from exc

    def describe(self) -> str:
        if self.kind in ("Kstar", "K"):
            return f"{'K*' if self.directed else 'K'}_{self.v}"
        if self.kind in ("KstarMultipartite", "KMultipartite"):
            r, s = len(self.parts), self.parts[0]
            return f"{'K*' if self.directed else 'K'}_{{{r}x{s}}}"
        if self.kind == "KstarEvenMinusFactor":
            return f"K*_{{{2 * self.x}x7}} - {self.x}K*_{{7,7}}"
        return f"K_{self.v} - I"


def _check_one_factor(factor: Sequence[tuple[int, int]], v: int) -> None:
    seen = [p for e in factor for p in e]
    if v % 2 or sorted(seen) != list(range(v)):
        raise InvalidHost(f"factor is not a perfect matching of {v} points")


@dataclass(frozen=True)
class OneFactor:
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(tuple(sorted(e)) for e in self.edges)))
        points = [p for e in self.edges for p in e]
        if len(points) != len(set(points)):
            raise InvalidHost("factor edges are not disjoint")

    def covers(self, points: Iterable[int]) -> bool:
        return sorted(p for e in self.edges for p in e) == sorted(points)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)


@dataclass(frozen=True)
class GroupLayout:
    """Disjoint label groups ``H_1 .. H_m``, plus an optional extra point."""

    groups: tuple[tuple[int, ...], ...]
    infinity: int | None = None
    sizes: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(tuple(g) for g in self.groups))
        flat = [p for g in self.groups for p in g]
        if self.infinity is not None:
            flat.append(self.infinity)
        if len(flat) != len(set(flat)):
            raise InvalidHost("groups overlap")
        if self.sizes and tuple(len(g) for g in self.groups) != tuple(self.sizes):
            raise InvalidHost("group sizes differ from the declared sizes")

    def arcs(self) -> list[tuple[int, int]]:
        """Cross-group arcs: the symmetric multipartite digraph on these groups."""
        out = []
        for i, gi in enumerate(self.groups):
            for j, gj in enumerate(self.groups):
                if i != j:
                    out.extend((a, b) for a in gi for b in gj)
        return sorted(out)


def ranges_layout(m: int, size: int = 7, with_infinity: bool = False) -> GroupLayout:
    groups = tuple(tuple(range(size * j, size * j + size)) for j in range(m))
    return GroupLayout(groups, size * m if with_infinity else None, (size,) * m)


def arcs_of_host(host: HostSpec) -> list[tuple[int, int]]:
    if not host.directed:
        raise InvalidHost(f"{host.kind} is undirected; use edges_of_host")
    tails, heads = np.nonzero(host.adjacency())
    return list(zip(tails.tolist(), heads.tolist()))


def edges_of_host(host: HostSpec) -> list[tuple[int, int]]:
    if host.directed:
        raise InvalidHost(f"{host.kind} is directed; use arcs_of_host")
    a, b = np.nonzero(np.triu(host.adjacency()))
    return list(zip(a.tolist(), b.tolist()))


def inflate(blocks: Iterable, n: int, weight: int = 7) -> list[GroupLayout]:
    """Blow each quotient point up into ``weight`` labels.

    Every K3 or K5 block on quotient points ``0 .. n-1`` becomes the symmetric
    complete multipartite digraph on the corresponding label groups.
    """
    out = []
    for block in blocks:
        points = tuple(getattr(block, "labels", block))
        if len(points) not in (3, 5) or len(set(points)) != len(points):
            raise UnsupportedBlock(f"only triangles and 5-cliques inflate, got {points}")
        if min(points) < 0 or max(points) >= n:
            raise UnsupportedBlock(f"block {points} leaves the quotient 0..{n - 1}")
        groups = tuple(tuple(range(weight * p, weight * p + weight)) for p in points)
        out.append(GroupLayout(groups, None, (weight,) * len(points)))
    return out
