import numpy as np

from heptad.base_designs import EXAMPLE_STARTERS, develop
from heptad.design import Decomposition, UBlock
from heptad.hosts import HostSpec
from heptad.ingredients import sts
from heptad.verifier import diagnose, verify, verify_undirected


def _ex22_d7():
    return develop(EXAMPLE_STARTERS[("2.2", "D7")])


def test_ex22_d7_ok():
    assert verify(_ex22_d7()).ok


def test_drop_one_block():
    d = _ex22_d7()
    bad = Decomposition(d.host, d.cls, d.blocks[1:])
    report = verify(bad)
    assert not report.ok and len(report.missing_arcs) == 7
    assert not report.duplicated_arcs and not report.foreign_arcs


def test_repeat_one_block():
    d = _ex22_d7()
    bad = Decomposition(d.host, d.cls, np.vstack([d.blocks, d.blocks[:1]]))
    report = verify(bad)
    assert len(report.duplicated_arcs) == 7 and not report.missing_arcs


def test_wrong_class_block():
    d = _ex22_d7()
    classes = d.classes.copy()
    classes[2] = 6
    report = verify(Decomposition(d.host, d.cls, d.blocks, classes))
    assert not report.ok
    assert any("D6" in reason for _, reason in report.bad_blocks)


def test_repeated_label_block():
    d = _ex22_d7()
    blocks = d.blocks.copy()
    blocks[0, 1] = blocks[0, 0]
    report = verify(Decomposition(d.host, d.cls, blocks))
    assert any("repeated" in reason for _, reason in report.bad_blocks)


def test_out_of_range_label():
    d = _ex22_d7()
    blocks = d.blocks.copy()
    blocks[0, 0] = 99
    report = verify(Decomposition(d.host, d.cls, blocks))
    assert report.bad_blocks == [(0, "label out of range")]


def test_diagnose_ok_line():
    d = develop(EXAMPLE_STARTERS[("2.3", "D6")])
    assert diagnose(d) == "OK: 26 blocks, 182 arcs"


def test_diagnose_lists_missing_sorted():
    d = _ex22_d7()
    text = diagnose(Decomposition(d.host, d.cls, d.blocks[1:]))
    assert text.startswith("FAIL")
    listed = text.splitlines()[1]
    assert listed.startswith("  7 missing arcs:")
    pairs = [tuple(map(int, p.strip("()").split(","))) for p in listed.split(": ")[1].split()]
    assert pairs == sorted(pairs)


def test_foreign_arc_in_multipartite_host():
    host = HostSpec.sym_multipartite(3, 7)
    # labels 0 and 1 share a part
    d = Decomposition(host, 10, [[0, 1, 7, 14, 8, 15, 9]])
    report = verify(d)
    assert (0, 1) in report.foreign_arcs
    assert "foreign arcs" in diagnose(report)


def test_sts9_ok():
    assert verify_undirected(sts(9), HostSpec.complete(9)).ok


def test_k6_minus_factor():
    tri = [UBlock("K3", t) for t in [(0, 2, 4), (0, 3, 5), (1, 2, 5), (1, 3, 4)]]
    factor = [(0, 1), (2, 3), (4, 5)]
    assert verify_undirected(tri, HostSpec.complete_minus_factor(6, factor)).ok
    assert verify_undirected(tri + [UBlock("I", e) for e in factor], HostSpec.complete(6)).ok


def test_repeated_vertex_triangle():
    report = verify_undirected([UBlock("K3", (0, 0, 1))], HostSpec.complete(3))
    assert report.bad_blocks and report.bad_blocks[0][0] == 0


def test_undirected_host_rejected_by_verify():
    assert not verify(Decomposition(HostSpec.complete(7), 1, np.empty((0, 7)))).ok
