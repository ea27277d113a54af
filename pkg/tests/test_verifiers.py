import pytest

from conftest import NONCONFLUENT_TEXT
from plainrws.cayley import build_ball
from plainrws.errors import PreconditionError
from plainrws.graph_metrics import SimpleGraph, blocks
from plainrws.presentations import cyclic_group, gen_finite_group, gen_plain, parse_factors
from plainrws.rewrite_core import parse_system
from plainrws.verifiers import (
    RULE_CHECK_FACTORS,
    SUITES,
    Outcome,
    binary_tree,
    broomlike_parameter,
    complete_graph,
    cycle_graph,
    geodetic_corpus,
    glue,
    petersen_graph,
    plainness_evidence,
    run_suite,
    verify_broomlike,
    verify_apex_circuits,
    verify_block_circuits,
    verify_circuit_rules,
    verify_stemple,
    verify_circuit_diameter,
)


def test_circuit_diameter_examples():
    pet = verify_circuit_diameter(petersen_graph(), "Petersen")
    assert pet.outcome is Outcome.PASS
    assert pet.details["max_iec"] == 5 and pet.details["max_circuit_diameter"] == 2
    c7 = verify_circuit_diameter(cycle_graph(7), "C7")
    assert c7.outcome is Outcome.HYPOTHESES_NOT_MET
    assert c7.details["failed_hypothesis"] == "max_iec<=5"
    assert c7.details["max_circuit_diameter"] == 3
    k5 = verify_circuit_diameter(complete_graph(5))
    assert k5.passed and k5.details["max_iec"] == 3 and k5.details["max_circuit_diameter"] == 1
    c4 = verify_circuit_diameter(cycle_graph(4))
    assert c4.outcome is Outcome.HYPOTHESES_NOT_MET
    assert c4.details["failed_hypothesis"] == "geodetic"


def test_apex_circuit_examples():
    k3 = verify_apex_circuits(complete_graph(3))
    assert k3.passed and k3.details["configurations"] == 3
    pet = verify_apex_circuits(petersen_graph())
    # each of the 10 apexes sees 6 opposite edges at distance 2 with distinct first steps
    assert pet.passed and pet.details["configurations"] == 60 and pet.details["exhaustive"]
    tree = verify_apex_circuits(binary_tree(3))
    assert tree.passed and tree.details["configurations"] == 0
    sampled = verify_apex_circuits(petersen_graph(), samples=5, seed=3)
    assert sampled.passed and sampled.details["checked"] == 5 and not sampled.details["exhaustive"]


def test_broomlike_parameter():
    assert [broomlike_parameter(m) for m in (2, 3, 5, 7, 9)] == [1, 1, 2, 3, 4]


def test_broomlike_and_stemple_verifiers():
    assert verify_broomlike(petersen_graph()).passed
    assert verify_broomlike(cycle_graph(7)).details["s"] == 3
    forced = verify_broomlike(cycle_graph(7), s=2)
    assert forced.outcome is Outcome.HYPOTHESES_NOT_MET
    k4 = verify_stemple(complete_graph(4))
    assert k4.passed and k4.details["four_circuits"] == 3


def test_block_circuit_cross_check():
    assert verify_block_circuits(glue(cycle_graph(5), 0, complete_graph(3), 0)).passed
    big = verify_block_circuits(binary_tree(3))
    assert big.outcome is Outcome.HYPOTHESES_NOT_MET


def test_corpus_contents():
    corpus = geodetic_corpus("all", seed=0)
    names = {c.name for c in corpus}
    assert {"K1", "K6", "C5", "C7", "C9", "Petersen"} <= names
    pet = next(c for c in corpus if c.name == "Petersen")
    assert (pet.graph.n, pet.graph.edge_count) == (10, 15)
    glued = [c for c in corpus if c.provenance == "glued"]
    assert len(glued) >= 20
    assert any(c.provenance == "cayley-ball" for c in corpus)
    bowtie = next(c for c in corpus if c.name == "glue(K3,K3)")
    assert bowtie.graph.n == 5 and len(blocks(bowtie.graph).blocks) == 2


def test_corpus_is_seeded():
    a = [c.name for c in geodetic_corpus("glued", seed=4)]
    b = [c.name for c in geodetic_corpus("glued", seed=4)]
    c = [c.name for c in geodetic_corpus("glued", seed=5)]
    assert a == b and a != c
    with pytest.raises(ValueError):
        geodetic_corpus("weird")


def test_corpus_rejects_non_geodetic():
    from plainrws.verifiers import CorpusGraph

    with pytest.raises(ValueError):
        CorpusGraph("C4", cycle_graph(4), "builtin")


def test_circuit_rules_c2c3_triangle(c2c3):
    ball = build_ball(c2c3, 4)
    rep = verify_circuit_rules(c2c3, ball, scope="origin")
    assert rep.passed
    assert rep.details["iec_lengths"] == [3]
    assert rep.details["certified_iecs"] == 1


def test_circuit_rules_z_is_vacuous(z_system):
    rep = verify_circuit_rules(z_system, build_ball(z_system, 5))
    assert rep.passed and rep.details["certified_iecs"] == 0


def test_circuit_rules_c4_reads_rules():
    rws = gen_finite_group(cyclic_group(4, "c"))
    rep = verify_circuit_rules(rws, build_ball(rws, 2))
    assert rep.passed and rep.details["iec_lengths"] == [3]
    assert rep.details["readings"] > 0 and not rep.witnesses
    cc = (rws.alphabet.index["c"],) * 2
    assert (cc, (rws.alphabet.index["c2"],)) in rws.rule_set


def test_circuit_rules_triangle_reading(c2c3):
    from plainrws.verifiers import _candidate_rule, _circuit_labels

    ball = build_ball(c2c3, 3)
    tri = [ball.vertex(w) for w in ("λ", "b", "B")]
    labels = _circuit_labels(ball, tri)
    assert c2c3.format_word(labels) == "bbb"
    lhs, rhs = _candidate_rule(ball, labels)
    assert (c2c3.format_word(lhs), c2c3.format_word(rhs)) == ("bb", "B")
    assert (lhs, rhs) in c2c3.rule_set


def test_circuit_rules_preconditions(c2c3, z_system):
    with pytest.raises(PreconditionError):
        verify_circuit_rules(parse_system(NONCONFLUENT_TEXT), build_ball(c2c3, 1))
    with pytest.raises(PreconditionError):
        verify_circuit_rules(c2c3, build_ball(z_system, 1))


def test_plainness_evidence():
    ev = plainness_evidence(gen_plain(parse_factors("C2,C3")), 6, from_gen_plain=True)
    assert ev.geodetic and ev.consistent_with_plain
    assert (ev.max_iec, ev.max_lhs, ev.max_block_diameter) == (3, 2, 1)
    z = plainness_evidence(gen_plain(parse_factors("Z")), 6, from_gen_plain=True)
    assert z.consistent_with_plain and z.max_iec == 2 and z.max_block_diameter == 1


def test_plainness_gate_runs_before_graph_work(monkeypatch):
    import plainrws.verifiers as v

    def boom(*args, **kwargs):
        raise AssertionError("ball construction should not start")

    monkeypatch.setattr(v, "build_ball", boom)
    bad = parse_system("letters: a b\ninverses: a=a b=b\nrule: a a ->\nrule: b b ->\nrule: a b -> b\n")
    with pytest.raises(PreconditionError):
        v.plainness_evidence(bad, 3)


def test_run_suite_sorted_and_deterministic():
    a = run_suite("theoremB", "builtin")
    b = run_suite("theoremB", "builtin")
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]
    assert [r.subject for r in a] == sorted(r.subject for r in a)
    with pytest.raises(ValueError):
        run_suite("nope")
    assert "corpus" in SUITES


def test_run_suite_all_has_no_failures():
    reports = run_suite("all", "all", seed=0)
    assert not [r.to_dict() for r in reports if r.failed]
    rule_reports = [r for r in reports if r.name == "lemma8"]
    assert len(rule_reports) == len(RULE_CHECK_FACTORS)


def test_verifiers_ignore_disconnected_graph_gracefully():
    g = SimpleGraph.from_edges(2, [])
    with pytest.raises(PreconditionError):
        verify_circuit_diameter(g)
