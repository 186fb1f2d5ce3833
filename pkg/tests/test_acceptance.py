"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line."""
import json
import os
import random
import subprocess
import sys
from collections import Counter
from pathlib import Path

import pytest

from heptad.assembly import admissibility, generate, plan
from heptad.base_designs import DERIVED_FIXTURES, EXAMPLE_HOSTS, EXAMPLE_STARTERS, develop, fixture_dir
from heptad.catalog import CLASSES, canonical_word, reverse_class
from heptad.design import dump_certificate, parse_certificate
from heptad.errors import NotAdmissible
from heptad.ingredients import c7_complete, c7_multipartite, k3k5_even, pbd35, sts
from heptad.verifier import verify

from conftest import as_pairs, oracle_directed_ok, oracle_pairs_ok

HERE = Path(__file__).parent
ADMISSIBLE = [v for v in range(7, 211) if v % 7 in (0, 1)]
N_DESIGNS = 10 * len(ADMISSIBLE)


@pytest.fixture
def report(capsys):
    def say(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return say


def _run_sweep():
    env = dict(os.environ, PYTHONHASHSEED="0")
    out = subprocess.run([sys.executable, str(HERE / "sweep.py")], capture_output=True,
                         text=True, env=env, check=True)
    return json.loads(out.stdout)


@pytest.fixture(scope="module")
def sweeps():
    return _run_sweep(), _run_sweep()


def test_criterion_1_spectrum_sweep(report, sweeps):
    first, _ = sweeps
    designs = first["designs"]
    want = {f"{v}/D{c}": v * (v - 1) // 7 for v in ADMISSIBLE for c in range(1, 11)}
    wrong_count = [k for k, n in want.items() if k not in designs or designs[k][0] != n]
    rejected = [k for k, (_, ok, _) in designs.items() if not ok]
    secs = first["seconds"]
    ok = len(designs) == N_DESIGNS and not wrong_count and not rejected and secs < 60
    report(1, ok, f"{len(designs)} designs, {len(wrong_count)} wrong block counts, "
                  f"{len(rejected)} rejected, {secs:.1f}s (limit 60s)")


def test_criterion_1_independent_oracle(report):
    # arc-exact check with the test-side oracle and a certificate round trip
    bad = []
    for v in ADMISSIBLE:
        for c in range(1, 11):
            d = parse_certificate(dump_certificate(generate(v, f"D{c}")))
            if not (verify(d).ok and oracle_directed_ok(v, d.blocks.tolist(), d.classes.tolist())
                    and set(d.classes.tolist()) == {c}):
                bad.append((v, c))
    report(1, not bad, f"oracle re-check of {N_DESIGNS} parsed certificates, failures: {bad[:5]}")


def test_criterion_2_necessity(report):
    false_accept, false_reject, bad_reason = [], [], []
    for v in range(2, 211):
        closed_form = v >= 7 and v * (v - 1) % 7 == 0
        reason = admissibility(v)
        if closed_form and reason is not None:
            false_reject.append(v)
        if not closed_form:
            for c in range(1, 11):
                try:
                    generate(v, f"D{c}")
                    false_accept.append((v, c))
                except NotAdmissible as exc:
                    if not ("7 ∤ v(v−1)" in exc.reason or exc.reason.startswith("v < 7")):
                        bad_reason.append((v, exc.reason))
        else:
            for c in range(1, 11):
                try:
                    plan(v, f"D{c}")
                except NotAdmissible:
                    false_reject.append((v, c))
    ok = not (false_accept or false_reject or bad_reason)
    report(2, ok, f"v in 2..210: {len(false_accept)} false accepts, {len(false_reject)} false rejects, "
                  f"{len(bad_reason)} refusals without the divisibility reason")


def test_criterion_3_example_fixtures(report):
    expected = {"2.1": 6, "2.2": 8, "2.3": 26, "2.4": 30, "2.5": 108, "2.6": 116, "2.8": 42, "2.9": 140}
    parts = {"2.8": lambda x: x % 3, "2.9": lambda x: x % 5}
    seen, bad = Counter(), []
    for (example, cls), starters in EXAMPLE_STARTERS.items():
        d = develop(starters, EXAMPLE_HOSTS[example])
        n = EXAMPLE_HOSTS[example].order
        seen[example] += 1
        if len(d) != expected[example] or not verify(d).ok or \
                not oracle_directed_ok(n, d.blocks.tolist(), d.classes.tolist(), parts.get(example)):
            bad.append((example, cls))
    ok = not bad and set(seen) == set(expected) and sum(seen.values()) == 29
    report(3, ok, f"{sum(seen.values())} starter sets over {len(seen)} hosts, failures: {bad}")


def test_criterion_4_catalog(report):
    words = [format(i, "07b") for i in range(128)]
    n_classes = len({canonical_word(w) for w in words})
    pairs = {frozenset((c.id, reverse_class(c).id)) for c in CLASSES.values() if reverse_class(c).id != c.id}
    fixed = {c.id for c in CLASSES.values() if reverse_class(c).id == c.id}
    ok = n_classes == 10 and pairs == {frozenset((8, 9))} and fixed == {1, 2, 3, 4, 5, 6, 7, 10}
    report(4, ok, f"{n_classes} canonical classes, reverse pairs {[sorted(p) for p in pairs]}, "
                  f"fixed points {sorted(fixed)}")


def test_criterion_5_ingredients(report):
    bad = []
    for n in range(3, 100):
        if n % 6 in (1, 3):
            b = sts(n)
            if len(b) != n * (n - 1) // 6 or not oracle_pairs_ok(n, as_pairs(b)):
                bad.append(f"sts({n})")
    for n in range(3, 96, 2):
        b = pbd35(n)
        kinds = Counter(x.kind for x in b)
        k5 = 1 if n % 6 == 5 else 0
        if kinds["K5"] != k5 or 3 * kinds["K3"] + 10 * k5 != n * (n - 1) // 2 or \
                not oracle_pairs_ok(n, as_pairs(b)):
            bad.append(f"pbd35({n})")
    for n in range(6, 97, 2):
        b, factor = k3k5_even(n)
        if len(factor) != n // 2 or not factor.covers(range(n)) or \
                not oracle_pairs_ok(n, as_pairs(b), missing=factor.edges):
            bad.append(f"k3k5_even({n})")
    for v in range(7, 212):
        if v % 14 in (1, 7):
            b = c7_complete(v)
            if len(b) != v * (v - 1) // 14 or not oracle_pairs_ok(v, as_pairs(b)):
                bad.append(f"c7_complete({v})")
    for n in range(3, 16, 2):
        b = c7_multipartite(n)
        if len(b) != 7 * n * (n - 1) // 2 or not oracle_pairs_ok(7 * n, as_pairs(b), part=lambda x: x // 7):
            bad.append(f"c7_multipartite({n})")
    report(5, not bad, f"sts n<=99, pbd35 n<=95, k3k5_even 6..96, c7_complete v<=211, "
                       f"c7_multipartite 3..15; failures: {bad}")


def _mutate(cert: dict, rng: random.Random, n: int) -> tuple[str, dict]:
    cert = json.loads(json.dumps(cert))
    blocks = cert["blocks"]
    i = rng.randrange(len(blocks))
    kind = rng.choice(["drop", "duplicate", "relabel", "swap", "class-swap"])
    if kind == "drop":
        blocks.pop(i)
    elif kind == "duplicate":
        blocks.insert(rng.randrange(len(blocks) + 1), list(blocks[i]))
    elif kind == "relabel":
        j = rng.randrange(7)
        blocks[i][j] = rng.choice([x for x in range(n) if x != blocks[i][j]])
    elif kind == "swap":
        j, k = rng.sample(range(7), 2)
        blocks[i][j], blocks[i][k] = blocks[i][k], blocks[i][j]
    else:
        classes = [cert["class"]] * len(blocks)
        classes[i] = rng.choice([f"D{c}" for c in range(1, 11) if f"D{c}" != cert["class"]])
        cert["classes"] = classes
    return kind, cert


def test_criterion_6_fault_injection(report):
    rng = random.Random(20261018)
    kinds, missed = Counter(), []
    for _ in range(100):
        v = rng.choice([v for v in ADMISSIBLE if v <= 64])
        cls = f"D{rng.randint(1, 10)}"
        original = generate(v, cls).to_json()
        kind, mutated = _mutate(original, rng, v)
        kinds[kind] += 1
        d = parse_certificate(json.dumps(mutated))
        if verify(d).ok:
            missed.append((v, cls, kind))
    report(6, not missed and sum(kinds.values()) == 100,
           f"100 mutations {dict(sorted(kinds.items()))}, accepted by mistake: {missed}")


def test_criterion_7_determinism(report, sweeps):
    first, second = sweeps
    a = {k: d[2] for k, d in first["designs"].items()}
    b = {k: d[2] for k, d in second["designs"].items()}
    differ = [k for k in a if a[k] != b.get(k)]
    ok = len(a) == N_DESIGNS and a.keys() == b.keys() and not differ
    report(7, ok, f"two independent sweeps, {len(a)} certificates, {len(differ)} differ")


def test_criterion_8_fixture_regeneration(report):
    stored = {}
    for name in DERIVED_FIXTURES:
        stored[name] = json.loads((fixture_dir() / f"{name}.json").read_text())["sha256"]
    out = subprocess.run([sys.executable, "-m", "heptad", "fixtures", "--regen"],
                         capture_output=True, text=True)
    got = {}
    for line in out.stdout.splitlines():
        name, _, rest = line.partition(": ")
        if rest.startswith("reproduced "):
            got[name] = rest.split()[1]
    ok = out.returncode == 0 and got == stored and len(got) == 6
    report(8, ok, f"fixtures --regen exit {out.returncode}, {len(got)}/6 checksums reproduced")
