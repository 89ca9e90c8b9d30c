"""Program transforms: golden outputs, lifts, projections, invariants."""

import programs
from conftest import answer_names, interp_names
from dlbridge.dleval import classify, get_context
from dlbridge.generator import GeneratorConfig, instance_stream
from dlbridge.parser import parse_program, serialize_program
from dlbridge.semantics import enumerate_answer_sets
from dlbridge.syntax import RuleAtom
from dlbridge.transforms import lift_pi, lift_sigma, pi, pi_prime, pi_star, project, sigma

PA = RuleAtom("p", ("a",))


def lines(program):
    return serialize_program(program).splitlines()


def test_pi_neg_constraint():
    res = pi(programs.neg_constraint())
    assert lines(res.program) == [
        "p(a) :- not DL[S -= __pi_p ; !S](a).",
        "__pi_p(a) :- not p(a).",
    ]
    assert res.symbol_map == {"__pi_p": ("predicate", "p")}


def test_pi_neg_constraint_taut():
    res = pi(programs.neg_constraint_taut())
    assert lines(res.program) == [
        "p(a) :- not DL[S -= __pi_p, Sp -= q, Sp -= __pi_q ; (!S & !Sp)](a).",
        "__pi_p(a) :- not p(a).",
        "__pi_q(a) :- not q(a).",
    ]


def test_pi_positive_nonmonotonic_gets_proxy():
    res = pi(programs.constraint_self_support())
    assert lines(res.program) == [
        "p(a) :- not __pi_dl_0.",
        "__pi_dl_0 :- not DL[S += p, Sp -= __pi_q ; (S & !Sp)](a).",
        "__pi_q(a) :- not q(a).",
    ]
    assert answer_names(enumerate_answer_sets(res.program, "strong")) == [
        ["__pi_dl_0", "__pi_q(a)"],
        ["__pi_q(a)", "p(a)"],
    ]


def test_pi_identity_on_canonical_programs():
    prog = programs.self_support()
    res = pi(prog)
    assert res.program.rules == prog.rules
    assert res.symbol_map == {}


def test_pi_leaves_monotonic_constraint_atoms_alone():
    prog = programs.mono_with_constraint()
    res = pi(prog)
    assert res.program.rules == prog.rules
    loop = programs.tautology_loop()
    assert pi(loop).program.rules == loop.rules


def test_pi_output_has_no_nonmonotonic_atoms():
    for build in (
        programs.neg_constraint,
        programs.neg_constraint_taut,
        programs.constraint_self_support,
        programs.chained_constraint,
    ):
        res = pi(build())
        assert not classify(get_context(res.program)).report.nonmonotonic_atoms


def test_pi_star_uniform_treatment():
    res = pi_star(programs.tautology_loop())
    assert lines(res.program) == [
        "p(a) :- not __pi_dl_0.",
        "__pi_dl_0 :- not DL[S -= p, S -= __pi_p ; !S](a).",
        "__pi_p(a) :- not p(a).",
    ]
    assert answer_names(enumerate_answer_sets(res.program, "weak")) == [["p(a)"]]


def test_pi_star_identity_without_dl_atoms():
    prog = parse_program("p(a) :- not q(a).")
    res = pi_star(prog)
    assert res.program.rules == prog.rules


def test_pi_star_double_negates_monotonic_atom():
    res = pi_star(programs.self_support())
    assert lines(res.program) == [
        "p(a) :- not __pi_dl_0.",
        "__pi_dl_0 :- not DL[S += p ; Sp](a).",
    ]
    # weak answer sets still project to those of the original
    direct = enumerate_answer_sets(programs.self_support(), "weak")
    transformed = enumerate_answer_sets(res.program, "weak")
    assert {project(i, programs.self_support().herbrand_base) for i in transformed} == set(
        direct
    )


def test_sigma_golden():
    res = sigma(programs.pos_self_feed())
    assert lines(res.program) == [
        "p(a) :- not __sigma_dl_0.",
        "__sigma_dl_0 :- not DL[S += p ; S](a).",
    ]
    assert answer_names(enumerate_answer_sets(res.program, "weak")) == [
        ["__sigma_dl_0"],
        ["p(a)"],
    ]


def test_sigma_identity_without_dl_atoms():
    prog = parse_program("p(a) :- not q(a).")
    assert sigma(prog).program.rules == prog.rules


def test_sigma_shares_proxy_for_duplicate_atoms():
    prog = programs.case_split()
    res = sigma(prog)
    proxies = [s for s in res.symbol_map if s.startswith("__sigma")]
    assert len(proxies) == 1


def test_pi_prime_loses_an_answer_set():
    res = pi_prime(programs.constraint_self_support())
    assert lines(res.program) == [
        "p(a) :- DL[S += p, !Sp += __pi_q ; (S & !Sp)](a).",
        "__pi_q(a) :- not DL[__C_0 += q ; __C_0](a).",
    ]
    transformed = enumerate_answer_sets(res.program, "strong")
    assert answer_names(transformed) == [["__pi_q(a)"]]
    # {p(a)} is a strong answer set of the source with no counterpart
    assert answer_names(enumerate_answer_sets(programs.constraint_self_support(), "strong")) == [
        [],
        ["p(a)"],
    ]


def test_pi_prime_retains_non_well_supported_set():
    res = pi_prime(programs.neg_constraint())
    strong = enumerate_answer_sets(res.program, "strong")
    assert answer_names(strong) == [["__pi_p(a)"], ["p(a)"]]
    projections = {project(i, programs.neg_constraint().herbrand_base) for i in strong}
    assert projections == {frozenset(), frozenset({PA})}
    # extra FLP answer set appears under pi_prime
    assert answer_names(enumerate_answer_sets(res.program, "flp")) == [
        ["__pi_p(a)"],
        ["p(a)"],
    ]
    assert answer_names(enumerate_answer_sets(programs.neg_constraint(), "flp")) == [[]]


def test_pi_prime_can_remove_well_supported_sets():
    res = pi_prime(programs.tautology_loop())
    assert enumerate_answer_sets(res.program, "strong") == ()
    assert answer_names(enumerate_answer_sets(programs.tautology_loop(), "wws")) == [
        ["p(a)"]
    ]


def test_lift_pi_examples():
    prog = programs.neg_constraint()
    res = pi(prog)
    assert interp_names(lift_pi(frozenset(), prog, res)) == ["__pi_p(a)"]
    taut = programs.neg_constraint_taut()
    res2 = pi(taut)
    assert interp_names(lift_pi(frozenset(), taut, res2)) == ["__pi_p(a)", "__pi_q(a)"]
    guard = programs.constraint_self_support()
    res3 = pi(guard)
    assert interp_names(lift_pi(frozenset(), guard, res3)) == ["__pi_dl_0", "__pi_q(a)"]


def test_lift_sigma():
    prog = programs.pos_self_feed()
    res = sigma(prog)
    assert interp_names(lift_sigma(frozenset(), prog, res)) == ["__sigma_dl_0"]
    assert interp_names(lift_sigma(frozenset({PA}), prog, res)) == ["p(a)"]


def test_project():
    hb = programs.neg_constraint().herbrand_base
    assert project({RuleAtom("__pi_p", ("a",))}, hb) == frozenset()
    assert project({RuleAtom("__pi_q", ("a",)), PA}, hb) == frozenset({PA})
    assert project({PA}, hb) == frozenset({PA})


def test_transforms_modular_over_disjoint_rule_sets():
    left = parse_program("p(a) :- not DL[S ?= p ; !S](a).")
    right = parse_program("q(a) :- not DL[S ?= q ; !S](a).")
    both = parse_program(
        "p(a) :- not DL[S ?= p ; !S](a).\nq(a) :- not DL[S ?= q ; !S](a)."
    )
    combined = pi(both).program
    merged_rules = set(pi(left).program.rules) | set(pi(right).program.rules)
    assert set(combined.rules) == merged_rules


def test_pi_prime_probe_breaks_under_equality():
    """With a == b in the ontology, the fresh-concept probe no longer
    tests literal membership of p(x), so pi_prime can introduce a strong
    answer set and the projection direction fails.  The plain pi
    transform's complement rule is a plain rule atom and is unaffected."""
    from dlbridge.parser import parse_ontology

    onto = parse_ontology(
        "concept S1, S2.\nindividual a, b.\naxiom S2 [= S1.\naxiom a == b.\n"
    )
    prog = parse_program(
        "p(b).\np(a) :- DL[S2 -= q, S1 ?= p ; (!S2 | !S1)](b).", ontology=onto
    )
    assert enumerate_answer_sets(prog, "strong") == ()
    res = pi_prime(prog)
    introduced = enumerate_answer_sets(res.program, "strong")
    assert {project(i, prog.herbrand_base) for i in introduced} == {
        frozenset({RuleAtom("p", ("b",))})
    }
    # pi's complement rule is a plain rule atom, so it stays faithful
    res_pi = pi(prog)
    assert enumerate_answer_sets(res_pi.program, "strong") == ()


def test_pi_correspondence_random():
    for _, prog in instance_stream(GeneratorConfig(seed=101), 40):
        ctx = get_context(prog)
        res = pi(ctx)
        new_ctx = get_context(res.program)
        for kind in ("strong", "weak"):
            direct = enumerate_answer_sets(ctx, kind)
            transformed = enumerate_answer_sets(new_ctx, kind)
            assert {lift_pi(i, ctx, res) for i in direct} == set(transformed)
            assert {project(i, ctx.hb) for i in transformed} == set(direct)
