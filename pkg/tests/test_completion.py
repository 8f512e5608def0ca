from uncprover.terms import Var, variables, substitute, canonical_renaming
from uncprover.trs import (
    TRS,
    RewriteRule,
    bounded_conversions,
    is_normal_form,
    trace_valid,
)
from uncprover.completion import (
    DEVELOPMENT_CLOSED,
    STRONGLY_CLOSED,
    direct_sum_decompose,
    disprove_search,
    rule_reverse,
    rule_reverse_mapped,
    translate_trace,
    unc_complete,
    validate_witness,
)
from uncprover.config import Budgets

from conftest import a, b, c, d, f, g, h, random_term, x

COPS_254 = TRS.of([RewriteRule(a, f(c)), RewriteRule(a, f(h(c))),
                   RewriteRule(f(x), h(f(x)))])


# --- completion ----------------------------------------------------------------


def test_completion_cops254_strongly_closed():
    verdict = unc_complete(COPS_254, STRONGLY_CLOSED, max_rounds=3)
    assert verdict.status == "UNC"
    assert verdict.rounds == 2
    assert verdict.added_rules == (RewriteRule(f(h(c)), f(c)),)


def test_completion_disproves_two_constants():
    R = TRS.of([RewriteRule(a, b), RewriteRule(a, c)])
    verdict = unc_complete(R, STRONGLY_CLOSED)
    assert verdict.status == "NOT_UNC"
    assert {verdict.witness.s, verdict.witness.t} == {b, c}
    assert validate_witness(R, verdict.witness)


def test_completion_orthogonal_immediate():
    verdict = unc_complete(TRS.of([RewriteRule(f(x), x)]), STRONGLY_CLOSED)
    assert verdict.status == "UNC" and verdict.rounds == 1
    assert verdict.added_rules == ()


def test_completion_two_normal_form_exit_with_variables():
    # both critical pair sides are normal forms, so the two-normal-form
    # exit fires with the pair itself
    R = TRS.of([RewriteRule(f(x), c), RewriteRule(f(x), g(x))])
    verdict = unc_complete(R, STRONGLY_CLOSED)
    assert verdict.status == "NOT_UNC"
    assert validate_witness(R, verdict.witness)


def test_completion_variable_escape_exit():
    # the normal form g(x) carries a variable absent from the reducible
    # side h(c), so the escape exit manufactures a renamed twin of g(x)
    R = TRS.of([RewriteRule(f(x), g(x)), RewriteRule(f(x), h(c)),
                RewriteRule(h(c), h(h(c)))])
    verdict = unc_complete(R, STRONGLY_CLOSED)
    assert verdict.status == "NOT_UNC"
    assert "variable" in verdict.reason
    assert validate_witness(R, verdict.witness)
    w = verdict.witness
    assert substitute(w.s, canonical_renaming([w.s])) \
        == substitute(w.t, canonical_renaming([w.t]))


def test_completion_added_rules_replay_over_original(rng):
    # conservativity: every added rule comes with a conversion over the
    # original system, and its lhs was reducible when added
    systems = [
        COPS_254,
        TRS.of([RewriteRule(a, g(c)), RewriteRule(a, g(g(c))), RewriteRule(g(x), g(g(x)))]),
        TRS.of([RewriteRule(f(x), g(x)), RewriteRule(f(x), g(g(x))),
                RewriteRule(g(g(x)), g(x))]),
    ]
    for R in systems:
        for pred in (STRONGLY_CLOSED, DEVELOPMENT_CLOSED):
            verdict = unc_complete(R, pred, max_rounds=3)
            grown = R
            for rule, trace in zip(verdict.added_rules, verdict.added_traces):
                assert trace_valid(R, trace)
                assert trace[0].src == rule.lhs and trace[-1].dst == rule.rhs
                assert not is_normal_form(grown, rule.lhs)
                grown = TRS(grown.signature, grown.rules + (rule,))


def test_completion_round_budget():
    # the g/h divergence produces fresh unclosable critical pairs forever
    R = TRS.of([RewriteRule(f(x), g(f(x))), RewriteRule(f(x), h(f(x)))])
    verdict = unc_complete(R, STRONGLY_CLOSED, max_rounds=2)
    assert verdict.status == "MAYBE" and "round budget" in verdict.reason


def test_completion_respects_deadline():
    import time
    verdict = unc_complete(COPS_254, STRONGLY_CLOSED, deadline=time.monotonic() - 1)
    assert verdict.status == "MAYBE" and "timeout" in verdict.reason


# --- rule reversing --------------------------------------------------------------


def test_rule_reverse_example():
    R = TRS.of([RewriteRule(a, f(a)), RewriteRule(h(c, a), b),
                RewriteRule(h(a, x), h(x, f(x)))])
    Rp = rule_reverse(R)
    assert Rp.rules == (RewriteRule(a, a), RewriteRule(f(a), a),
                        RewriteRule(h(c, a), b), RewriteRule(h(a, x), h(x, f(x))))


def test_rule_reverse_identity_when_rhs_normal():
    R = TRS.of([RewriteRule(a, b), RewriteRule(g(x), x)])
    assert rule_reverse(R) is not None
    assert rule_reverse(R).rules == R.rules


def test_rule_reverse_keeps_needed_identity_rule():
    R = TRS.of([RewriteRule(a, f(a)), RewriteRule(f(x), g(x))])
    Rp = rule_reverse(R)
    # a -> a stays: nothing else reduces a
    assert RewriteRule(a, a) in Rp.rules
    assert RewriteRule(f(a), a) in Rp.rules
    assert RewriteRule(f(x), g(x)) in Rp.rules


def test_rule_reverse_drops_redundant_identity_rule():
    R = TRS.of([RewriteRule(g(a), f(g(a))), RewriteRule(g(x), x)])
    Rp = rule_reverse(R)
    # g(a) -> g(a) is redundant: g(x) -> x reduces g(a)
    assert RewriteRule(g(a), g(a)) not in Rp.rules
    assert RewriteRule(f(g(a)), g(a)) in Rp.rules


def test_rule_reverse_preserves_conversions_and_normal_forms(rng):
    violations = 0
    for _ in range(60):
        rules = []
        for _ in range(rng.randint(1, 3)):
            lhs = random_term(rng, depth=2)
            while isinstance(lhs, Var):
                lhs = random_term(rng, depth=2)
            rhs = random_term(rng, depth=2)
            if variables(rhs) - variables(lhs):
                rhs = b
            rules.append(RewriteRule(lhs, rhs))
        R = TRS.of(rules)
        Rp = rule_reverse(R)
        for _ in range(5):
            t = random_term(rng, depth=2)
            keep = frozenset(variables(t))
            canon = lambda S: {substitute(u, canonical_renaming([u], keep))
                               for u in bounded_conversions(S, t, 3, size_cap=30)}
            if canon(R) != canon(Rp):
                violations += 1
            if is_normal_form(R, t) != is_normal_form(Rp, t):
                violations += 1
    assert violations == 0


def test_translate_trace_maps_reversed_witness():
    R = TRS.of([RewriteRule(a, f(a)), RewriteRule(f(x), g(x))])
    Rp, origin = rule_reverse_mapped(R)
    w = disprove_search(Rp)
    if w is not None:
        from uncprover.completion import Witness
        translated = Witness(w.s, w.t, translate_trace(w.trace, origin))
        assert validate_witness(R, translated)


# --- disproof search -------------------------------------------------------------


def test_disprove_two_constants():
    R = TRS.of([RewriteRule(a, b), RewriteRule(a, c)])
    w = disprove_search(R)
    assert w is not None and {w.s, w.t} == {b, c}
    assert validate_witness(R, w)


def test_disprove_variable_escape():
    R = TRS.of([RewriteRule(f(x), c), RewriteRule(f(x), g(x))])
    w = disprove_search(R)
    assert w is not None
    assert validate_witness(R, w)
    # route: a normal form with an escaping variable, so the witnesses are
    # renamings of one another
    assert substitute(w.s, canonical_renaming([w.s])) \
        == substitute(w.t, canonical_renaming([w.t]))


def test_disprove_orthogonal_silent():
    assert disprove_search(TRS.of([RewriteRule(f(x), x)])) is None


def test_disprove_witnesses_always_validate(rng):
    bad = 0
    for _ in range(120):
        rules = []
        for _ in range(rng.randint(1, 3)):
            lhs = random_term(rng, depth=2)
            while isinstance(lhs, Var):
                lhs = random_term(rng, depth=2)
            rhs = random_term(rng, depth=1)
            if variables(rhs) - variables(lhs):
                rhs = a
            rules.append(RewriteRule(lhs, rhs))
        R = TRS.of(rules)
        w = disprove_search(R, Budgets(conv_depth=3, size_cap=20, max_class=300))
        if w is not None and not validate_witness(R, w):
            bad += 1
    assert bad == 0


# --- direct-sum decomposition ------------------------------------------------------


def test_decompose_disjoint():
    R = TRS.of([RewriteRule(a, b), RewriteRule(f(x), g(x))])
    comps = direct_sum_decompose(R)
    assert [c_.rules for c_ in comps] == [(RewriteRule(a, b),),
                                          (RewriteRule(f(x), g(x)),)]


def test_decompose_shared_symbol():
    R = TRS.of([RewriteRule(a, b), RewriteRule(f(a), b)])
    assert len(direct_sum_decompose(R)) == 1


def test_decompose_three_rules():
    R = TRS.of([RewriteRule(a, b), RewriteRule(c, d), RewriteRule(f(c), c)])
    comps = direct_sum_decompose(R)
    assert [set(c_.rules) for c_ in comps] == [
        {RewriteRule(a, b)}, {RewriteRule(c, d), RewriteRule(f(c), c)}]


def test_decompose_components_partition_symbols(rng):
    for _ in range(60):
        rules = []
        for _ in range(rng.randint(1, 4)):
            lhs = random_term(rng, depth=2)
            while isinstance(lhs, Var):
                lhs = random_term(rng, depth=2)
            rhs = random_term(rng, depth=1)
            if variables(rhs) - variables(lhs):
                rhs = a
            rules.append(RewriteRule(lhs, rhs))
        R = TRS.of(rules)
        comps = direct_sum_decompose(R)
        all_rules = [r for c_ in comps for r in c_.rules]
        assert sorted(map(repr, all_rules)) == sorted(map(repr, R.rules))
        for i, c1_ in enumerate(comps):
            for c2_ in comps[i + 1:]:
                assert not (c1_.symbols() & c2_.symbols())


def test_unc_verdict_recheck_on_final_system():
    # soundness hook: rebuild the completed system and re-run the guard
    # and the pair test independently
    verdict = unc_complete(COPS_254, STRONGLY_CLOSED, max_rounds=3)
    assert verdict.status == "UNC"
    final = TRS(COPS_254.signature, COPS_254.rules + verdict.added_rules)
    assert STRONGLY_CLOSED.guard(final)
    from uncprover.trs import critical_pairs
    from uncprover.config import DEFAULT_BUDGETS
    for cp in critical_pairs(final):
        assert STRONGLY_CLOSED.pair_closed(final, cp, DEFAULT_BUDGETS)
