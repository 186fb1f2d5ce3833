"""Recursive constructions of D_i-decompositions of K*_v for every admissible v.

Hosts are assembled from groups of seven labels: group ``H_j`` holds
``7j .. 7j+6`` and the extra point, when there is one, is ``v - 1``. Small
complete hosts are filled with base designs; the arcs between groups come
from a multipartite skeleton built over a {K3, K5} quotient design.

Every construction returns its block array together with the trace node
that describes it. With ``dry=True`` only the trace is built, which is how
:func:`plan` reports exactly what :func:`generate` would do.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .base_designs import EXAMPLE_HOSTS, base_design, fixture_source
from .catalog import Block, get_class, reversal_map, reverse_class
from .design import Decomposition, PlanNode, UBlock
from .errors import HeptadError, NoFixture, NotAdmissible, NotSelfReverse
from .hosts import HostSpec
from .ingredients import c7_complete, c7_multipartite, k3k5_even, pbd35
from .verifier import diagnose, verify

SELF_REVERSE = {1, 2, 3, 4, 5, 6, 7, 10}
Built = tuple[np.ndarray | None, PlanNode]


class ConstructionFailed(HeptadError):
    """An assembled design did not pass verification."""


def admissibility(v: int) -> str | None:
    """Why ``K*_v`` has no heptagon decomposition, or ``None`` when it is admissible."""
    if v < 7:
        return f"v < 7: K*_{v} is too small to hold a 7-cycle"
    if v * (v - 1) % 7:
        return f"7 ∤ v(v−1): {v}·{v - 1} = {v * (v - 1)} not ≡ 0 mod 7"
    return None


def _require(v: int) -> None:
    reason = admissibility(v)
    if reason:
        raise NotAdmissible(reason)


# ---------------------------------------------------------------- doubling

def double_cycle(cycle, cls) -> tuple[Block, Block]:
    """Two blocks of ``cls`` on a 7-cycle that together use both directions of each edge."""
    cid = get_class(cls).id
    if cid not in SELF_REVERSE:
        raise NotSelfReverse(f"D{cid} is not its own reverse, so a 7-cycle does not double into it")
    labels = tuple(getattr(cycle, "labels", cycle))
    if len(labels) != 7:
        raise ValueError(f"a 7-cycle needs 7 labels, got {labels}")
    p = reversal_map(cid, cid)
    return Block(cid, labels), Block(cid, tuple(labels[i] for i in p))


def _double_rows(cycles: np.ndarray, cid: int) -> np.ndarray:
    p = list(reversal_map(cid, cid))
    return np.stack([cycles, cycles[:, p]], axis=1).reshape(-1, 7)


def _cycle_array(cycles: list[UBlock]) -> np.ndarray:
    return np.array([c.labels for c in cycles], dtype=np.int64).reshape(-1, 7)


@lru_cache(maxsize=None)
def _c7_complete_rows(v: int) -> np.ndarray:
    return _cycle_array(c7_complete(v))


@lru_cache(maxsize=None)
def _c7_multipartite_rows(n: int) -> np.ndarray:
    return _cycle_array(c7_multipartite(n))


def _doubled_complete(v: int, cid: int, dry: bool) -> Built:
    node = PlanNode(f"double(c7_complete({v}))", {"class": f"D{cid}"})
    return (None if dry else _double_rows(_c7_complete_rows(v), cid)), node


# ---------------------------------------------------------------- base designs

def _fixture(host: HostSpec, cid: int, dry: bool) -> Built:
    source = fixture_source(host, f"D{cid}")
    params = {"class": f"D{cid}"}
    if not source.startswith("Ex"):
        params["extension"] = "search-derived"
    node = PlanNode(f"fixture:{source}", params)
    return (None if dry else base_design(host, cid).blocks), node


def _has_fixture(host: HostSpec, cid: int) -> bool:
    try:
        fixture_source(host, f"D{cid}")
    except NoFixture:
        return False
    return True


# ---------------------------------------------------------------- skeletons

@lru_cache(maxsize=None)
def _piece_rows(k: int, cid: int) -> np.ndarray:
    """Blocks of ``K*_{k x 7}`` on the ranges layout (part ``j`` = labels ``7j .. 7j+6``)."""
    if cid in SELF_REVERSE:
        return _double_rows(_c7_multipartite_rows(k), cid)
    example = {3: "2.8", 5: "2.9"}[k]
    rows = base_design(EXAMPLE_HOSTS[example], cid).blocks
    return 7 * (rows % k) + rows // k  # residue layout to ranges layout


def _piece_node(k: int, cid: int) -> PlanNode:
    if cid in SELF_REVERSE:
        return PlanNode(f"double(c7_multipartite({k}))", {"class": f"D{cid}"})
    return PlanNode(f"fixture:Ex{ {3: '2.8', 5: '2.9'}[k] }", {"class": f"D{cid}"})


def _fill_pieces(quotient: list[UBlock], cid: int, dry: bool) -> tuple[list[np.ndarray], list[PlanNode]]:
    rows, nodes = [], []
    for block in quotient:
        k = len(block.labels)
        nodes.append(_piece_node(k, cid))
        if not dry:
            local = _piece_rows(k, cid)
            lut = np.array([7 * block.labels[p // 7] + p % 7 for p in range(7 * k)], dtype=np.int64)
            rows.append(lut[local])
    return rows, nodes


def _skeleton_class(cls) -> int:
    cid = get_class(cls).id
    if cid == 9:
        raise NotSelfReverse("D9 skeletons are obtained by reversing D8 ones")
    return cid


def _skeleton_even(x: int, cid: int, dry: bool) -> Built:
    if x < 3:
        raise NotAdmissible(f"x = {x}: K_{2 * x} - I has no {{K3,K5}}-decomposition below 6 points")
    blocks, factor = k3k5_even(2 * x)
    # relabel the quotient so the factor is {0,1}, {2,3}, ...
    sigma = {}
    for t, (a, b) in enumerate(factor):
        sigma[a], sigma[b] = 2 * t, 2 * t + 1
    quotient = [UBlock(b.kind, tuple(sigma[p] for p in b.labels)) for b in blocks]
    rows, children = _fill_pieces(quotient, cid, dry)
    node = PlanNode(f"Lemma3.1(x={x})", {"class": f"D{cid}"},
                    [PlanNode(f"k3k5_even({2 * x})")] + children)
    return (None if dry else _concat(rows)), node


def _skeleton_odd(n: int, cid: int, dry: bool) -> Built:
    if n < 3 or n % 2 == 0:
        raise NotAdmissible(f"K*_{{{n}x7}} skeletons need odd n >= 3")
    rows, children = _fill_pieces(pbd35(n), cid, dry)
    node = PlanNode(f"Lemma3.4(n={n})", {"class": f"D{cid}"}, [PlanNode(f"pbd35({n})")] + children)
    return (None if dry else _concat(rows)), node


def skeleton_even(x: int, cls) -> Decomposition:
    """D_i-decomposition of ``K*_{(2x) x 7} - x K*_{7,7}`` (parts ``2t`` and ``2t+1`` unjoined)."""
    cid = _skeleton_class(cls)
    rows, node = _skeleton_even(x, cid, False)
    return Decomposition(HostSpec.sym_minus_factor(x), cid, rows, trace=node)


def skeleton_odd(n: int, cls) -> Decomposition:
    """D_i-decomposition of ``K*_{n x 7}`` on the ranges layout, ``n`` odd."""
    cid = _skeleton_class(cls)
    rows, node = _skeleton_odd(n, cid, False)
    return Decomposition(HostSpec.sym_multipartite(n, 7), cid, rows, trace=node)


def _concat(rows: list[np.ndarray]) -> np.ndarray:
    return np.concatenate(rows) if rows else np.empty((0, 7), dtype=np.int64)


# ---------------------------------------------------------------- assembly by residue

def _fill_groups(small: HostSpec, cid: int, copies: int, lut_of, dry: bool) -> tuple[list, list[PlanNode]]:
    rows, nodes = [], []
    for j in range(copies):
        block_rows, node = _fixture(small, cid, dry)
        nodes.append(node)
        if not dry:
            rows.append(lut_of(j)[block_rows])
    return rows, nodes


def _build(v: int, cid: int, dry: bool) -> Built:
    host = HostSpec.complete_sym(v)
    if _has_fixture(host, cid):
        return _fixture(host, cid, dry)
    r = v % 14
    if cid in SELF_REVERSE and r in (1, 7):
        return _doubled_complete(v, cid, dry)
    if r == 0:
        # pairs of groups carry K*_14; the skeleton joins different pairs
        x = v // 14
        lemma = "Lemma3.2"
        rows, nodes = _fill_groups(HostSpec.complete_sym(14), cid, x,
                                   lambda t: np.arange(14 * t, 14 * t + 14), dry)
        skel_rows, skel = _skeleton_even(x, cid, dry)
    elif r == 1:
        x = v // 14
        lemma = "Lemma3.3"
        inf = v - 1
        rows, nodes = _fill_groups(HostSpec.complete_sym(15), cid, x,
                                   lambda t: np.array(list(range(14 * t, 14 * t + 14)) + [inf]), dry)
        skel_rows, skel = _skeleton_even(x, cid, dry)
    elif r == 7:
        n = v // 7
        lemma = "Lemma3.5"
        rows, nodes = _fill_groups(HostSpec.complete_sym(7), cid, n,
                                   lambda j: np.arange(7 * j, 7 * j + 7), dry)
        skel_rows, skel = _skeleton_odd(n, cid, dry)
    else:
        n = v // 7
        lemma = "Lemma3.6"
        inf = v - 1
        rows, nodes = _fill_groups(HostSpec.complete_sym(8), cid, n,
                                   lambda j: np.array(list(range(7 * j, 7 * j + 7)) + [inf]), dry)
        skel_rows, skel = _skeleton_odd(n, cid, dry)
    param = f"x={v // 14}" if r in (0, 1) else f"x={(v // 7 - 1) // 2}"
    node = PlanNode(f"{lemma}({param})", {"class": f"D{cid}"}, nodes + [skel])
    return (None if dry else _concat(rows + [skel_rows])), node


def assemble(v: int, cls) -> Decomposition:
    """D_i-decomposition of ``K*_v`` for any class except D9."""
    _require(v)
    cid = get_class(cls).id
    if cid == 9:
        raise NotSelfReverse("D9 designs come from reversing D8 designs")
    rows, node = _build(v, cid, False)
    return Decomposition(HostSpec.complete_sym(v), cid, rows, trace=node)


def reverse_decomposition(d: Decomposition) -> Decomposition:
    """Reverse every arc; each block moves to the reverse class on the same labels."""
    if not d.host.directed:
        raise HeptadError("only directed hosts can be reversed")
    blocks = d.blocks.copy()
    classes = d.classes.copy()
    for c in np.unique(d.classes).tolist():
        rc = reverse_class(c).id
        rows = d.classes == c
        blocks[rows] = d.blocks[rows][:, list(reversal_map(c, rc))]
        classes[rows] = rc
    trace = PlanNode("reverse", {"class": reverse_class(d.cls).name},
                     [d.trace] if d.trace is not None else [])
    return Decomposition(d.host, reverse_class(d.cls).id, blocks, classes, trace)


def _plan_or_build(v: int, cid: int, dry: bool) -> Built:
    if cid == 9:
        rows, inner = _build(v, 8, dry)
        node = PlanNode("reverse", {"class": "D9"}, [inner])
        if not dry:
            rows = rows[:, list(reversal_map(8, 9))]
        return rows, node
    return _build(v, cid, dry)


def plan(v: int, cls) -> PlanNode:
    """The construction tree :func:`generate` follows for ``(v, cls)``."""
    _require(v)
    return _plan_or_build(v, get_class(cls).id, True)[1]


def generate(v: int, cls, check: bool = True) -> Decomposition:
    """A verified D_i-decomposition of ``K*_v``; raises :class:`NotAdmissible` when none exists."""
    _require(v)
    cid = get_class(cls).id
    rows, node = _plan_or_build(v, cid, False)
    d = Decomposition(HostSpec.complete_sym(v), cid, rows, trace=node)
    if check:
        report = verify(d)
        if not report.ok:
            raise ConstructionFailed(diagnose(report))
    return d


def spectrum(limit: int) -> list[int]:
    """Orders ``v <= limit`` for which every heptagon class decomposes ``K*_v``."""
    return [v for v in range(limit + 1) if admissibility(v) is None]
