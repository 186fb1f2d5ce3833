"""Undirected building blocks: triple systems, {3,5}-designs, one-factors and 7-cycle systems.

Every provider checks its own output with :func:`verify_undirected` before
returning it.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations, product
from math import gcd

from .base_designs import derived_record
from .design import UBlock
from .errors import Exhausted, NotAdmissible, NotSplittable, UnsatisfiableWithinBudget
from .hosts import HostSpec, OneFactor
from .search import SearchBudget, _Meter, exact_cover_small
from .verifier import verify_undirected

DiffTriple = tuple[int, int, int]


def _checked(blocks: list[UBlock], host: HostSpec, what: str) -> tuple[UBlock, ...]:
    report = verify_undirected(blocks, host)
    if not report.ok:
        raise AssertionError(f"{what} failed verification: {report}")
    return tuple(blocks)


# ---------------------------------------------------------------- triple systems

def sts(n: int) -> list[UBlock]:
    """Steiner triple system on ``0 .. n-1`` (Bose for n = 3 mod 6, Skolem for n = 1 mod 6)."""
    if n < 3 or n % 6 not in (1, 3):
        raise NotAdmissible(f"STS({n}) needs n = 1 or 3 (mod 6), n >= 3")
    return list(_sts(n))


@lru_cache(maxsize=None)
def _sts(n: int) -> tuple[UBlock, ...]:
    blocks = _bose(n) if n % 6 == 3 else _skolem(n)
    return _checked(blocks, HostSpec.complete(n), f"STS({n})")


def _bose(n: int) -> list[UBlock]:
    m = n // 3
    half = (m + 1) // 2

    def pt(x, i):
        return (i % 3) * m + x

    out = [UBlock("K3", (pt(x, 0), pt(x, 1), pt(x, 2))) for x in range(m)]
    for x, y in combinations(range(m), 2):
        z = (x + y) * half % m
        out += [UBlock("K3", (pt(x, i), pt(y, i), pt(z, i + 1))) for i in range(3)]
    return out


def _skolem(n: int) -> list[UBlock]:
    t = (n - 1) // 6
    m = 2 * t
    inf = n - 1

    def op(x, y):
        s = (x + y) % m
        return s // 2 if s % 2 == 0 else t + (s - 1) // 2

    def pt(x, i):
        return (i % 3) * m + x

    out = [UBlock("K3", (pt(x, 0), pt(x, 1), pt(x, 2))) for x in range(t)]
    for x in range(t):
        out += [UBlock("K3", (inf, pt(x + t, i), pt(x, i + 1))) for i in range(3)]
    for x, y in combinations(range(m), 2):
        out += [UBlock("K3", (pt(x, i), pt(y, i), pt(op(x, y), i + 1))) for i in range(3)]
    return out


# ---------------------------------------------------------------- difference methods

def difference_triples(D, m: int, budget: SearchBudget = SearchBudget()) -> list[DiffTriple]:
    """Partition ``D`` into triples with ``a + b = c`` or ``a + b + c = m``."""
    return _triples(D, m, _Meter(budget))


def _triples(D, m: int, meter: _Meter) -> list[DiffTriple]:
    rest = sorted(set(D))
    if len(rest) % 3:
        raise UnsatisfiableWithinBudget(f"{len(rest)} differences do not split into triples")
    if m % 2 == 0 and m // 2 in rest:
        raise UnsatisfiableWithinBudget(f"the half difference {m // 2} cannot sit in a triple")
    if m % 2 == 0 and sum(rest) % 2:
        # every triple sums to 2c or to m, both even
        raise UnsatisfiableWithinBudget(f"differences {rest} have an odd total")
    free = set(rest)
    out: list[DiffTriple] = []

    def rec() -> bool:
        # the largest open difference has the fewest ways to be completed
        meter.tick()
        if not free:
            return True
        c = max(free)
        free.discard(c)
        for a in sorted(free):
            for b in dict.fromkeys((c - a, m - c - a)):
                if a < b < c and b in free:
                    free.difference_update((a, b))
                    out.append((a, b, c))
                    if rec():
                        return True
                    out.pop()
                    free.update((a, b))
        free.add(c)
        return False

    try:
        found = rec()
    except Exhausted as exc:
        raise UnsatisfiableWithinBudget(str(exc)) from exc
    if not found:
        raise UnsatisfiableWithinBudget(f"no triple partition of {rest} mod {m}")
    return out


def one_factor_split(d: int, m: int) -> list[OneFactor]:
    """The half-difference factor, or the two alternating factors of difference ``d`` in ``Z_m``."""
    if m % 2 or not 0 < d < m:
        raise NotSplittable(f"difference {d} mod {m} does not give one-factors")
    if 2 * d == m:
        return [OneFactor(tuple((x, x + d) for x in range(d)))]
    g = gcd(d, m)
    length = m // g
    if length % 2:
        raise NotSplittable(f"difference {d} mod {m} forms cycles of odd length {length}")
    halves: list[list[tuple[int, int]]] = [[], []]
    for s in range(g):
        cyc = [(s + j * d) % m for j in range(length)]
        for j in range(length):
            halves[j % 2].append((cyc[j], cyc[(j + 1) % length]))
    return [OneFactor(tuple(h)) for h in halves]


# ---------------------------------------------------------------- {3,5}-designs

def pbd35(n: int) -> list[UBlock]:
    """{K3, K5}-decomposition of ``K_n`` for odd ``n``.

    For ``n = 5 (mod 6)`` there is exactly one 5-clique, on labels ``0 .. 4``.
    """
    if n < 3 or n % 2 == 0:
        raise NotAdmissible(f"a {{K3,K5}}-decomposition of K_{n} needs n odd, n >= 3")
    return list(_pbd35(n))


@lru_cache(maxsize=None)
def _pbd35(n: int) -> tuple[UBlock, ...]:
    if n % 6 in (1, 3):
        return _sts(n)
    if n == 5:
        return (UBlock("K5", range(5)),)
    try:
        blocks = _hole_design(n)
    except UnsatisfiableWithinBudget:
        blocks = _cover_with_clique(n)
    return _checked(blocks, HostSpec.complete(n), f"{{K3,K5}}-design of K_{n}")


def _prism_factors(d: int, m: int) -> list[OneFactor]:
    """Three one-factors covering the half difference and difference ``d`` of ``Z_m``.

    When ``d`` generates odd cycles, the two classes form prisms ``C_L x K_2``;
    each prism has a Hamiltonian cycle of even length, and what the cycle
    misses is a third perfect matching.
    """
    h = m // 2
    L = m // gcd(d, m)
    if L % 2 == 0 or L < 3:
        raise NotSplittable(f"difference {d} mod {m} does not form odd prisms with the half difference")
    factors: list[list[tuple[int, int]]] = [[], [], []]
    seen: set[int] = set()
    for c in range(m):
        if c in seen:
            continue
        top = [(c + j * d) % m for j in range(L)]
        bottom = [(x + h) % m for x in top]
        seen.update(top + bottom)
        tour = top + bottom[::-1]
        for j in range(2 * L):
            factors[j % 2].append((tour[j], tour[(j + 1) % (2 * L)]))
        factors[2] += [(top[-1], top[0]), (bottom[-1], bottom[0])]
        factors[2] += [(top[j], bottom[j]) for j in range(1, L - 1)]
    return [OneFactor(tuple(f)) for f in factors]


def _hole_factor_choices(m: int):
    """Ways to cut five one-factors of ``K_m`` out of whole difference classes."""
    half = m // 2
    split = [d for d in range(1, half) if (m // gcd(d, m)) % 2 == 0]
    for d1, d2 in combinations(split, 2):
        yield (d1, d2), lambda d1=d1, d2=d2: (
            one_factor_split(half, m) + one_factor_split(d1, m) + one_factor_split(d2, m))
    odd_cycles = [d for d in range(1, half) if (m // gcd(d, m)) % 2 == 1]
    for d1 in split:
        for d2 in odd_cycles:
            yield (d1, d2), lambda d1=d1, d2=d2: _prism_factors(d2, m) + one_factor_split(d1, m)


def _hole_design(n: int) -> list[UBlock]:
    # a K5 on 0..4, and Z_m on 5..n-1; each hole point takes the triangles
    # over one one-factor of K_m, and difference triples cover the rest
    m = n - 5
    half = m // 2
    meter = _Meter(SearchBudget())
    for used, make_factors in _hole_factor_choices(m):
        rest = [d for d in range(1, half) if d not in used]
        try:
            triples = _triples(rest, m, meter)
        except UnsatisfiableWithinBudget:
            if meter.nodes > meter.limit:
                raise
            continue
        out = [UBlock("K5", range(5))]
        for k, factor in enumerate(make_factors()):
            out += [UBlock("K3", (k, 5 + a, 5 + b)) for a, b in factor]
        for a, b, _ in triples:
            out += [UBlock("K3", (5 + x, 5 + (x + a) % m, 5 + (x + a + b) % m)) for x in range(m)]
        return out
    raise UnsatisfiableWithinBudget(f"no hole construction for n={n}")


def _cover_with_clique(n: int) -> list[UBlock]:
    found = exact_cover_small(HostSpec.complete(n), ("K3", "K5"))
    clique = next(b for b in found if b.kind == "K5")
    others = [p for p in range(n) if p not in clique.labels]
    relabel = {p: i for i, p in enumerate(list(clique.labels) + others)}
    return [UBlock(b.kind, tuple(relabel[p] for p in b.labels)) for b in found]


def k3k5_even(n: int) -> tuple[list[UBlock], OneFactor]:
    """{K3, K5}-decomposition of ``K_n - I`` for even ``n >= 6``, with its factor ``I``."""
    if n < 6 or n % 2:
        raise NotAdmissible(f"K_{n} - I has a {{K3,K5}}-decomposition only for even n >= 6")
    blocks, factor = _k3k5_even(n)
    return list(blocks), factor


@lru_cache(maxsize=None)
def _k3k5_even(n: int) -> tuple[tuple[UBlock, ...], OneFactor]:
    blocks, edges = [], []
    for b in _pbd35(n + 1):
        if n in b.labels:
            if b.kind != "K3":
                raise AssertionError("the deleted point must avoid the 5-clique")
            edges.append(tuple(p for p in b.labels if p != n))
        else:
            blocks.append(b)
    factor = OneFactor(tuple(edges))
    host = HostSpec.complete_minus_factor(n, factor.edges)
    full = blocks + [UBlock("I", e) for e in factor]
    _checked(full, HostSpec.complete(n), f"K_{n} - I with its factor")
    _checked(blocks, host, f"K_{n} - I")
    return tuple(blocks), factor


# ---------------------------------------------------------------- 7-cycle systems

def walecki(n: int) -> list[tuple[int, ...]]:
    """Hamiltonian decomposition of ``K_n`` (n odd) into ``(n-1)/2`` cycles."""
    if n < 3 or n % 2 == 0:
        raise NotAdmissible(f"Walecki needs odd n >= 3, got {n}")
    m = n - 1
    zigzag = [0] + [(j + 1) // 2 if j % 2 else m - j // 2 for j in range(1, m)]
    return [tuple([n - 1] + [(z + i) % m for z in zigzag]) for i in range(m // 2)]


def c7_complete(v: int) -> list[UBlock]:
    """7-cycle system of ``K_v``, ``v = 1 or 7 (mod 14)``."""
    if v < 7 or v % 14 not in (1, 7):
        raise NotAdmissible(f"K_{v} has a 7-cycle decomposition only for v = 1, 7 (mod 14)")
    return list(_c7_complete(v))


@lru_cache(maxsize=None)
def _c7_complete(v: int) -> tuple[UBlock, ...]:
    if v % 14 == 7:
        q = v // 7
        out = []
        for j in range(q):
            out += [UBlock("C7", [7 * j + p for p in c]) for c in walecki(7)]
        if q > 1:
            out += _c7_multipartite(q)
    else:
        out = [UBlock("C7", [(x + s) % v for x in base]) for base in _cyclic_bases(v) for s in range(v)]
    return _checked(out, HostSpec.complete(v), f"7-cycle system of K_{v}")


def _cyclic_bases(v: int) -> list[tuple[int, ...]]:
    # Each base cycle takes one difference triple (a + b = c, or a + b + c = v)
    # and two pairs of consecutive differences, so its signed steps sum to
    # 0 mod v. Triples live in 1..3k and the pairs fill one run above them;
    # when 1 + ... + 3k is odd a wrap-around triple (2, 7k-1, 7k) fixes parity.
    k = (v - 1) // 14
    top = 7 * k
    if k % 4 in (0, 1):
        triples = _triples(range(1, 3 * k + 1), v, _Meter(SearchBudget()))
        run = range(3 * k + 1, top + 1)
    else:
        small = [d for d in range(1, 3 * k - 1) if d != 2]
        triples = _triples(small, v, _Meter(SearchBudget())) + [(2, top - 1, top)]
        run = range(3 * k - 1, top - 1)
    pairs = [(run[j], run[j + 1]) for j in range(0, len(run), 2)]
    bases = []
    for (a, b, c), p, q in zip(triples, pairs[0::2], pairs[1::2]):
        third = c if (a + b + c) % v == 0 else -c
        bases.append(_order_steps((a, b, third, p[1], -p[0], -q[1], q[0]), v))
    return bases


def _order_steps(steps: tuple[int, ...], v: int) -> tuple[int, ...]:
    """Arrange signed steps (summing to 0 mod v) so the 7 partial sums are distinct mod v.

    Steps 3-4 and 5-6 are consecutive pairs whose signs may be swapped together.
    """
    for f, g in product((1, -1), repeat=2):
        signed = steps[:3] + (f * steps[3], f * steps[4], g * steps[5], g * steps[6])
        for perm in permutations(signed[1:]):
            pts, acc = [0], 0
            for s in (signed[0],) + perm[:-1]:
                acc = (acc + s) % v
                pts.append(acc)
            if len(set(pts)) == 7:
                return tuple(pts)
    raise UnsatisfiableWithinBudget(f"steps {steps} admit no 7-cycle ordering mod {v}")


def c7_multipartite(n: int) -> list[UBlock]:
    """7-cycle system of ``K_{n x 7}`` on the ranges layout (part ``j`` = labels ``7j .. 7j+6``)."""
    if n < 3 or n % 2 == 0:
        raise NotAdmissible(f"K_{{{n}x7}} is decomposed here only for odd n >= 3")
    return list(_c7_multipartite(n))


def _residue_to_ranges(label: int, n: int) -> int:
    return 7 * (label % n) + label // n


@lru_cache(maxsize=None)
def _c7_multipartite(n: int) -> tuple[UBlock, ...]:
    if n in (3, 5):
        cycles = derived_record(f"K{n}x7-C7").develop()
        out = [UBlock("C7", [_residue_to_ranges(p, n) for p in c.labels]) for c in cycles]
    else:
        out = []
        for block in _pbd35(n):
            pieces = _c7_multipartite(len(block.labels))
            for c in pieces:
                out.append(UBlock("C7", [7 * block.labels[p // 7] + p % 7 for p in c.labels]))
    return _checked(out, HostSpec.multipartite(n, 7), f"7-cycle system of K_{{{n}x7}}")
