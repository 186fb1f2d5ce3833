"""Decompositions, undirected blocks, construction traces, and certificate I/O."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .catalog import Block, get_class
from .errors import HeptadError, InvalidHost
from .hosts import HostSpec

UBLOCK_KINDS = {"K3": 3, "K5": 5, "C7": 7, "I": 2}


class MalformedCertificate(HeptadError):
    pass


@dataclass(frozen=True)
class UBlock:
    """An undirected block: triangle, 5-clique, 7-cycle (in cyclic order) or factor edge."""

    kind: str
    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(p) for p in self.labels))
        if self.kind not in UBLOCK_KINDS:
            raise ValueError(f"unknown undirected block kind {self.kind!r}")
        if len(self.labels) != UBLOCK_KINDS[self.kind]:
            raise ValueError(f"{self.kind} needs {UBLOCK_KINDS[self.kind]} labels, got {self.labels}")

    def edges(self) -> list[tuple[int, int]]:
        lab = self.labels
        if self.kind == "C7":
            pairs = [(lab[j], lab[(j + 1) % 7]) for j in range(7)]
        else:
            pairs = list(combinations(lab, 2))
        return [(min(a, b), max(a, b)) for a, b in pairs]

    def to_json(self) -> list:
        return [self.kind, list(self.labels)]


def triangle(*p: int) -> UBlock:
    return UBlock("K3", p)


@dataclass
class PlanNode:
    step: str
    params: dict = field(default_factory=dict)
    children: list["PlanNode"] = field(default_factory=list)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"step": self.step}
        if self.params:
            out["params"] = self.params
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PlanNode":
        return cls(data["step"], dict(data.get("params", {})),
                   [cls.from_json(c) for c in data.get("children", [])])

    def render(self, indent: int = 0) -> str:
        extra = ""
        if self.params:
            extra = " " + " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        lines = ["  " * indent + self.step + extra]
        lines += [c.render(indent + 1) for c in self.children]
        return "\n".join(lines)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class Decomposition:
    """A host plus a ``(B, 7)`` label array of heptagon blocks.

    ``classes`` holds each block's own class id; ``cls`` is the class the
    design claims to be built from.
    """

    host: HostSpec
    cls: int
    blocks: np.ndarray
    classes: np.ndarray | None = None
    trace: PlanNode | None = None

    def __post_init__(self):
        self.blocks = np.asarray(self.blocks, dtype=np.int64).reshape(-1, 7)
        if self.classes is None:
            self.classes = np.full(len(self.blocks), self.cls, dtype=np.int64)
        else:
            self.classes = np.asarray(self.classes, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_list(self) -> list[Block]:
        return [Block(int(c), tuple(int(x) for x in row)) for c, row in zip(self.classes, self.blocks)]

    @property
    def class_name(self) -> str:
        return get_class(self.cls).name

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "host": self.host.to_json(),
            "class": self.class_name,
            "blocks": self.blocks.tolist(),
        }
        if np.any(self.classes != self.cls):
            out["classes"] = [f"D{c}" for c in self.classes.tolist()]
        if self.trace is not None:
            out["trace"] = self.trace.to_json()
        return out

    def to_text(self) -> str:
        lines = [f"{_host_header(self.host)} class {self.class_name}"]
        lines += [" ".join(map(str, row)) for row in self.blocks.tolist()]
        return "\n".join(lines) + "\n"


def _host_header(host: HostSpec) -> str:
    data = host.to_json()
    kind = data.pop("host")
    fields = []
    for key, val in data.items():
        if key == "parts":
            val = ",".join(map(str, val))
        elif key == "factor":
            val = ",".join(f"{a}-{b}" for a, b in val)
        fields.append(f"{key}={val}")
    return " ".join(["host", kind] + fields)


def _parse_host_header(tokens: Sequence[str]) -> HostSpec:
    if len(tokens) < 2 or tokens[0] != "host":
        raise MalformedCertificate("text certificate must start with 'host <kind>'")
    data: dict[str, Any] = {"host": tokens[1]}
    for tok in tokens[2:]:
        key, sep, val = tok.partition("=")
        if not sep:
            raise MalformedCertificate(f"bad header field {tok!r}")
        if key == "parts":
            data[key] = [int(p) for p in val.split(",")]
        elif key == "factor":
            data[key] = [tuple(int(p) for p in e.split("-")) for e in val.split(",") if e]
        elif key == "layout":
            data[key] = val
        else:
            data[key] = int(val)
    return HostSpec.from_json(data)


def ublocks_to_json(host: HostSpec, blocks: Iterable[UBlock]) -> dict:
    return {"host": host.to_json(), "ublocks": [b.to_json() for b in blocks]}


def ublocks_to_text(host: HostSpec, blocks: Iterable[UBlock]) -> str:
    lines = [_host_header(host)]
    lines += [" ".join([b.kind, *map(str, b.labels)]) for b in blocks]
    return "\n".join(lines) + "\n"


def dump_certificate(obj: Decomposition | dict, fmt: str = "json") -> str:
    if isinstance(obj, Decomposition):
        return obj.to_text() if fmt == "text" else json.dumps(obj.to_json(), separators=(",", ":")) + "\n"
    if fmt == "text":
        host = HostSpec.from_json(obj["host"])
        return ublocks_to_text(host, [UBlock(k, lab) for k, lab in obj["ublocks"]])
    return json.dumps(obj, separators=(",", ":")) + "\n"


def parse_certificate(text: str) -> Decomposition | tuple[HostSpec, list[UBlock]]:
    """Parse a JSON or text certificate.

    Directed certificates come back as a :class:`Decomposition`; undirected ones
    as ``(host, ublocks)``.
    """
    stripped = text.lstrip()
    try:
        if stripped.startswith("{"):
            return _parse_json(json.loads(text))
        return _parse_text(stripped)
    except MalformedCertificate:
        raise
    except (ValueError, KeyError, TypeError, IndexError, InvalidHost) as exc:
        raise MalformedCertificate(str(exc)) from exc


def _parse_json(data: dict):
    host = HostSpec.from_json(data["host"])
    if "ublocks" in data:
        return host, [UBlock(kind, labels) for kind, labels in data["ublocks"]]
    cls = get_class(data["class"]).id
    blocks = np.asarray(data["blocks"], dtype=np.int64)
    if blocks.size and (blocks.ndim != 2 or blocks.shape[1] != 7):
        raise MalformedCertificate("blocks must be lists of 7 labels")
    classes = None
    if "classes" in data:
        classes = [get_class(c).id for c in data["classes"]]
        if len(classes) != len(blocks):
            raise MalformedCertificate("classes and blocks differ in length")
    trace = PlanNode.from_json(data["trace"]) if "trace" in data else None
    return Decomposition(host, cls, blocks.reshape(-1, 7), classes, trace)


def _parse_text(text: str):
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedCertificate("empty certificate")
    header = lines[0]
    if "class" in header:
        at = header.index("class")
        host = _parse_host_header(header[:at])
        cls = get_class(header[at + 1]).id
        rows = [[int(t) for t in ln] for ln in lines[1:]]
        if any(len(r) != 7 for r in rows):
            raise MalformedCertificate("every block line needs 7 labels")
        return Decomposition(host, cls, np.asarray(rows, dtype=np.int64).reshape(-1, 7))
    host = _parse_host_header(header)
    return host, [UBlock(ln[0], [int(t) for t in ln[1:]]) for ln in lines[1:]]


def read_certificate(path: str | Path):
    return parse_certificate(Path(path).read_text())
