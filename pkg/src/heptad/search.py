"""Backtracking searches: starter sets by difference classes, and small exact covers.

Every result is verified before it is returned.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterator

from .base_designs import DERIVED_FIXTURES, INF, FixtureRecord, Starter, StarterSet, develop
from .catalog import CLASS_ARCS, Block, arcs_of_block, get_class
from .design import Decomposition, UBlock
from .errors import Exhausted, HostTooLarge, InvalidHost
from .hosts import HostSpec, arcs_of_host, edges_of_host
from .verifier import verify, verify_undirected

DEFAULT_NODES = 10**7
MAX_COVER_SIZE = 2000
MAX_CANDIDATES = 200_000
CYCLE_EDGES = tuple((j, (j + 1) % 7) for j in range(7))


@dataclass(frozen=True)
class SearchBudget:
    nodes: int = DEFAULT_NODES
    seconds: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.nodes <= 0 or (self.seconds is not None and self.seconds <= 0):
            raise ValueError("search limits must be positive")


@dataclass(frozen=True)
class OrbitProfile:
    """Orbit lengths of the starters to search for.

    Points are ``Z_modulus x {0 .. levels-1}`` (plus ``inf``); orbits are full
    (length ``modulus``) or fixed (length 1).
    """

    modulus: int
    has_infinity: bool
    orbits: tuple[int, ...]
    levels: int = 1

    def __post_init__(self):
        object.__setattr__(self, "orbits", tuple(self.orbits))
        if any(o not in (1, self.modulus) for o in self.orbits):
            raise ValueError("only full and fixed (length 1) orbits are searched")
        if self.has_infinity and self.levels != 1:
            raise ValueError("inf is only supported over a single level")


class _Meter:
    def __init__(self, budget: SearchBudget):
        self.limit = budget.nodes
        self.nodes = 0
        self.deadline = None if budget.seconds is None else time.monotonic() + budget.seconds

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise Exhausted(f"node budget of {self.limit} exhausted")
        if self.deadline is not None and not self.nodes % 4096 and time.monotonic() > self.deadline:
            raise Exhausted("time budget exhausted")


def _pattern(cls: str) -> tuple[tuple[int, int], ...]:
    return CYCLE_EDGES if cls == "C7" else CLASS_ARCS[get_class(cls).id]


def _order(key) -> tuple:
    return (isinstance(key[0], str), key)


class _StarterProblem:
    """Difference-class bookkeeping.

    A finite class is ``(from_level, to_level, d)``: all arcs from
    ``(from_level, x)`` to ``(to_level, x + d)``. Undirected classes are stored
    in their lesser orientation. ``("in", 0)`` and ``("out", 0)`` are the arcs
    into and out of ``inf``.
    """

    def __init__(self, host: HostSpec, cls: str, profile: OrbitProfile):
        n, s = profile.modulus, profile.levels
        if host.order != n * s + (1 if profile.has_infinity else 0):
            raise InvalidHost(f"profile over Z_{n} x {s} does not match {host.describe()}")
        if host.kind in ("KstarEvenMinusFactor", "KMinusFactor"):
            raise InvalidHost(f"no cyclic search for {host.kind}")
        parts = len(host.parts)
        if parts and (host.layout != "residues" or profile.has_infinity or s != 1):
            raise InvalidHost("multipartite searches need the residue layout over Z_N")
        if (cls == "C7") == host.directed:
            raise InvalidHost(f"class {cls} does not match host {host.kind}")
        self.n, self.levels = n, s
        self.inf = n * s
        self.directed = host.directed
        self.pattern = _pattern(cls)
        free = set()
        for la in range(s):
            for lb in range(s):
                for d in range(n):
                    if la == lb and (d == 0 or (parts and d % parts == 0)):
                        continue
                    free.add(self._norm((la, lb, d)))
        if profile.has_infinity:
            free |= {("in", 0), ("out", 0)}
        self.free = free

    def _norm(self, key):
        if self.directed:
            return key
        la, lb, d = key
        return min(key, (lb, la, (-d) % self.n))

    def key(self, a, b):
        if a == INF or a == self.inf:
            return ("out", 0)
        if b == INF or b == self.inf:
            return ("in", 0)
        n = self.n
        return self._norm((a // n, b // n, (b - a) % n))

    def fixed_blocks(self) -> list[tuple[tuple[int, ...], tuple]]:
        """Labelings invariant under ``+1``; only possible when a block fills one level of ``Z_7``."""
        if self.n != 7:
            return []
        out = []
        for lvl in range(self.levels):
            for d in range(1, 7):
                labels = tuple(7 * lvl + d * j % 7 for j in range(7))
                arcs = {(labels[t], labels[h]) for t, h in self.pattern}
                moved = {(a - a % 7 + (a + 1) % 7, b - b % 7 + (b + 1) % 7) for a, b in arcs}
                if moved == arcs:
                    keys = {self.key(a, b) for a, b in arcs}
                    if len(keys) == 1:
                        out.append((labels, keys.pop()))
        return out

    def walks(self, inf_at: int | None, meter: _Meter) -> Iterator[tuple]:
        """Labelings of one full-orbit starter using only free classes, each at most once.

        The walk starts at ``x = 0`` right after the ``inf`` position (if any),
        so ``inf`` is placed last.
        """
        start = 0 if inf_at is None else inf_at + 1
        order = [(start + j) % 7 for j in range(7)]
        where = {p: i for i, p in enumerate(order)}
        arcs = [(where[t], where[h]) for t, h in self.pattern]
        closing: list[list[tuple[int, int]]] = [[] for _ in range(7)]
        step_dir = [0] * 7  # +1: arc from i-1 to i, -1: arc from i to i-1
        for t, h in arcs:
            hi, lo = max(t, h), min(t, h)
            closing[hi].append((t, h))
            if hi - lo == 1:
                step_dir[hi] = 1 if t == lo else -1
        n, free, directed = self.n, self.free, self.directed
        lab: list = []

        def rec(i: int):
            meter.tick()
            if i == 7:
                yield tuple(INF if x == self.inf else x for x in (lab[where[p]] for p in range(7)))
                return
            if i == 0:
                cands = [n * lvl for lvl in range(self.levels)]
            elif i == 6 and inf_at is not None:
                cands = [self.inf]
            else:
                prev = lab[i - 1]
                lvl, x = divmod(prev, n)
                cands = []
                for k in sorted((k for k in free if not isinstance(k[0], str)), key=_order):
                    la, lb, d = k
                    if (directed and step_dir[i] > 0 or not directed) and la == lvl:
                        cands.append(lb * n + (x + d) % n)
                    if (directed and step_dir[i] < 0 or not directed) and lb == lvl:
                        cands.append(la * n + (x - d) % n)
            for y in dict.fromkeys(cands):
                if y in lab:
                    continue
                lab.append(y)
                keys = [self.key(lab[t], lab[h]) for t, h in closing[i]]
                if len(set(keys)) == len(keys) and all(k in free for k in keys):
                    free.difference_update(keys)
                    yield from rec(i + 1)
                    free.update(keys)
                lab.pop()

        yield from rec(0)

    def closable(self) -> bool:
        """Can the free classes alone form one finite starter?

        Around the cycle, forward arcs add their difference and backward arcs
        subtract it, and the total must vanish mod n.
        """
        if len(self.free) != 7 or any(isinstance(k[0], str) for k in self.free):
            return False
        ds = sorted(k[2] for k in self.free)
        total = sum(ds)
        if self.directed:
            n_back = sum(1 for t, h in self.pattern if h != (t + 1) % 7)
            sizes = [n_back]
        else:
            sizes = range(8)
        return any((total - 2 * sum(b)) % self.n == 0 for r in sizes for b in combinations(ds, r))

    def inf_positions(self) -> list[int]:
        return [p for p in range(7)
                if sum(h == p for _, h in self.pattern) == 1 and sum(t == p for t, _ in self.pattern) == 1]


def find_starters(host: HostSpec, cls, profile: OrbitProfile, budget: SearchBudget = SearchBudget(),
                  keep: tuple[Starter, ...] = ()) -> StarterSet:
    """Search for starters of ``cls`` whose development decomposes ``host``.

    ``keep`` lists full-orbit starters that are taken as given; the search
    fills in the rest of ``profile``. Raises :class:`Exhausted` when the
    budget runs out or the whole space has been searched without success.
    """
    name = cls if cls == "C7" else get_class(cls).name
    prob = _StarterProblem(host, name, profile)
    n = profile.modulus
    if sum(profile.orbits) * 7 != host.size():
        raise Exhausted(f"orbits {profile.orbits} give {sum(profile.orbits) * 7} arcs, host has {host.size()}")
    for st in keep:
        keys = [prob.key(st.labels[t], st.labels[h]) for t, h in prob.pattern]
        if st.orbit != n or len(set(keys)) != 7 or not set(keys) <= prob.free:
            raise InvalidHost(f"kept starter {st.labels} does not fit the difference classes")
        prob.free.difference_update(keys)
    reason = _infeasible(name, profile) if not keep else None
    if reason:
        raise Exhausted(reason)
    meter = _Meter(budget)
    n_fixed = sum(1 for o in profile.orbits if o == 1)
    n_full = len(profile.orbits) - n_fixed - len(keep)
    with_inf = 1 if ("in", 0) in prob.free else 0

    all_forward = prob.directed and not with_inf and all(h == (t + 1) % 7 for t, h in prob.pattern)

    def fixed(count: int, start: int):
        if count == 0:
            # a directed-cycle starter's differences sum to 0, so the leftover classes must too
            if not all_forward or sum(k[2] for k in prob.free) % n == 0:
                yield []
            return
        options = prob.fixed_blocks()
        for idx in range(start, len(options)):
            labels, key = options[idx]
            if key in prob.free:
                prob.free.discard(key)
                for rest in fixed(count - 1, idx + 1):
                    yield [Starter(labels, 1)] + rest
                prob.free.add(key)

    def full(count: int, inf_left: int):
        if count == 0:
            if not prob.free:
                yield []
            return
        if count == inf_left:
            # the inf starter goes last: it has no closing-sum condition, so it fills in easily
            for p in prob.inf_positions():
                for labels in prob.walks(p, meter):
                    for rest in full(count - 1, inf_left - 1):
                        yield [Starter(labels, n)] + rest
            return
        if count == 1 and not prob.closable():
            return
        target = min((k for k in prob.free if not isinstance(k[0], str)), key=_order)
        for labels in prob.walks(None, meter):
            # starters are interchangeable, so the smallest open class goes to this one
            if target in prob.free:
                continue
            for rest in full(count - 1, inf_left):
                yield [Starter(labels, n)] + rest

    for fixed_part in fixed(n_fixed, 0):
        for found in full(n_full, with_inf):
            result = StarterSet(name, n, profile.has_infinity,
                                tuple(keep) + tuple(fixed_part) + tuple(found), profile.levels)
            if _check(result, host):
                return result
    raise Exhausted(f"no {name} starters over Z_{n}{' + inf' if profile.has_infinity else ''} "
                    f"with orbits {profile.orbits} ({meter.nodes} nodes)")


def _check(s: StarterSet, host: HostSpec) -> bool:
    built = develop(s, host if host.directed else None)
    return (verify(built) if host.directed else verify_undirected(built, host)).ok


def candidate_profiles(host: HostSpec) -> list[OrbitProfile]:
    """Profiles tried by :func:`derive_fixture`, in order."""
    N = host.order
    blocks = host.size() // 7
    out = []
    if blocks % N == 0:
        out.append(OrbitProfile(N, False, (N,) * (blocks // N)))
    if host.kind != "Kstar":
        return out
    m = N - 1
    if blocks % m == 0:
        out.append(OrbitProfile(m, True, (m,) * (blocks // m)))
    if m == 7:
        out.append(OrbitProfile(7, True, (7,) * (blocks // 7) + (1,) * (blocks % 7)))
    if N % 7 == 0 and N > 7:
        # Z_7 on N/7 levels. With 3+ levels every pure class can be a fixed
        # constant-difference cycle; two levels leave a bipartite remainder,
        # so some pure classes must stay in full orbits.
        s = N // 7
        fixed = 6 * s if s >= 3 else max(f for f in range(6 * s) if (f + s) % 7 == 0)
        out.append(OrbitProfile(7, False, (7,) * ((blocks - fixed) // 7) + (1,) * fixed, s))
    return out


def _infeasible(cls: str, profile: OrbitProfile) -> str | None:
    """Reason a profile cannot work, for the cases settled by a counting argument."""
    m = profile.modulus
    if cls == "D10" and profile.levels == 1 and all(o == m for o in profile.orbits):
        # each finite directed-cycle starter has difference sum 0 mod m; the
        # differences 1..m-1 sum to m(m-1)/2
        total = m * (m - 1) // 2 % m
        if not profile.has_infinity and total:
            return f"directed cycle starters over Z_{m} need differences summing to 0, but 1+...+{m - 1} = {total} mod {m}"
        if profile.has_infinity and not total:
            return f"the inf starter over Z_{m} would need a 5-arc path with difference sum 0 mod {m}"
    return None


def derive_fixture(host: HostSpec, cls, budget: SearchBudget = SearchBudget()) -> FixtureRecord:
    name = cls if cls == "C7" else get_class(cls).name
    if (host, name) not in DERIVED_FIXTURES.values():
        raise InvalidHost(f"({host.describe()}, {name}) is not a declared derived fixture")
    for profile in candidate_profiles(host):
        try:
            starters = find_starters(host, name, profile, budget)
        except Exhausted:
            continue
        return FixtureRecord(host, name, starters, "search")
    raise Exhausted(f"no orbit profile yields a {name} design on {host.describe()}")


# ---------------------------------------------------------------- exact cover

def algorithm_x(columns: list, rows: dict, meter: _Meter) -> list | None:
    """First exact cover of ``columns`` by ``rows`` (name -> column list).

    Columns are chosen by fewest candidates, ties by column order; rows are
    tried in insertion order.
    """
    col_order = {c: i for i, c in enumerate(columns)}
    X: dict = {c: [] for c in columns}
    for r, cols in rows.items():
        for c in cols:
            X[c].append(r)
    X = {c: dict.fromkeys(rs) for c, rs in X.items()}
    solution: list = []

    def select(r):
        removed = []
        for j in rows[r]:
            for i in X[j]:
                for k in rows[i]:
                    if k != j:
                        X[k].pop(i, None)
            removed.append((j, X.pop(j)))
        return removed

    def deselect(r, removed):
        for j, col in reversed(removed):
            X[j] = col
            for i in col:
                for k in rows[i]:
                    if k != j:
                        X[k][i] = None

    order = {r: i for i, r in enumerate(rows)}

    def rec():
        meter.tick()
        if not X:
            return True
        c = min(X, key=lambda c: (len(X[c]), col_order[c]))
        for r in sorted(X[c], key=order.__getitem__):
            solution.append(r)
            removed = select(r)
            if rec():
                return True
            deselect(r, removed)
            solution.pop()
        return False

    return list(solution) if rec() else None


def exact_cover_small(host: HostSpec, kinds, budget: SearchBudget = SearchBudget()):
    """Decompose a small host by exact cover over every labeled candidate block.

    ``kinds`` is a heptagon class for directed hosts, or a collection of
    ``"K3" | "K5" | "C7"`` for undirected ones. Returns a verified
    :class:`Decomposition` or list of :class:`UBlock`.
    """
    size = host.size()
    if size > MAX_COVER_SIZE:
        raise HostTooLarge(f"{host.describe()} has {size} arcs/edges (limit {MAX_COVER_SIZE})")
    N = host.order
    meter = _Meter(budget)
    rows: dict = {}
    if host.directed:
        cls = get_class(kinds).id
        columns = arcs_of_host(host)
        allowed = set(columns)
        _guard(N, 7, ordered=True)
        for labels in permutations(range(N), 7):
            arcs = arcs_of_block(Block(cls, labels))
            if arcs <= allowed:
                rows.setdefault(tuple(sorted(arcs)), labels)
        table = {labels: list(arcs) for arcs, labels in rows.items()}
    else:
        columns = edges_of_host(host)
        allowed = set(columns)
        table = {}
        for kind in sorted(set(kinds), key=["K3", "K5", "C7"].index):
            size_ = {"K3": 3, "K5": 5, "C7": 7}[kind]
            _guard(N, size_, ordered=False)
            for pts in combinations(range(N), size_):
                if kind == "C7":
                    shapes = [(pts[0],) + rest for rest in permutations(pts[1:]) if rest[0] < rest[-1]]
                else:
                    shapes = [pts]
                for lab in shapes:
                    b = UBlock(kind, lab)
                    edges = b.edges()
                    if set(edges) <= allowed:
                        table[b] = edges
    chosen = algorithm_x(columns, table, meter)
    if chosen is None:
        raise Exhausted(f"no exact cover of {host.describe()} ({meter.nodes} nodes)")
    if host.directed:
        result = Decomposition(host, cls, sorted(chosen))
        assert verify(result).ok
        return result
    assert verify_undirected(chosen, host).ok
    return chosen


def _guard(N: int, k: int, ordered: bool):
    from math import comb, perm
    count = perm(N, k) if ordered else comb(N, k)
    if count > MAX_CANDIDATES * (50 if ordered else 1):
        raise HostTooLarge(f"{count} candidate placements on {N} points")
