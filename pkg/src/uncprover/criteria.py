"""Direct UNC criteria.

Two families:

* overlap tests (strong non-overlap, non-omega-overlap) and right
  reducibility, which are plain decision procedures on the TRS;

* closure conditions on conditional critical pairs of a linearization
  (parallel closed, strongly closed, weight-decreasing joinability).
  Condition entailment is approximated by congruence closure, and the
  weight-decreasing check works with ranked conversion sets: states pair a
  multiset of still-usable assumption equations with a term, one rewrite
  step costs one rank unit, and equations are consumed one use each.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

from .config import Budgets, DEFAULT_BUDGETS
from .ctrs import (
    CTRS,
    ConditionalRule,
    CongruenceClosure,
    Equation,
    conditional_critical_pairs,
    conditional_linearize,
    lr_separated_linearize,
)
from .terms import (
    Term,
    Var,
    match,
    term_size,
    renaming_apart,
    replace_at,
    substitute,
    subterms,
    unifiable_rational,
    variables,
)
from .trs import TRS, fn_subterms, is_normal_form

Multiset = tuple[Equation, ...]


def multiset(eqs: Iterable[Equation]) -> Multiset:
    return tuple(sorted(eqs, key=repr))


@dataclass(frozen=True)
class SimState:
    """A still-usable condition multiset together with a term."""

    remaining: Multiset
    value: Term

    def __repr__(self) -> str:
        return f"<{{{', '.join(map(repr, self.remaining))}}}, {self.value!r}>"


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    holds: bool
    details: tuple[str, ...] = ()
    failure: Optional[str] = None
    truncated: bool = False


# ---------------------------------------------------------------------------
# overlap-based criteria


def strongly_non_overlapping(R: TRS) -> bool:
    """No conditional critical pair survives conditional linearization."""
    return not conditional_critical_pairs(conditional_linearize(R))


def non_omega_overlapping(R: TRS) -> bool:
    """No two rule lhs's overlap even over infinite (rational) trees."""
    for oi, outer in enumerate(R.rules):
        used = variables(outer.lhs) | variables(outer.rhs)
        for ii, inner0 in enumerate(R.rules):
            ren = renaming_apart(
                sorted(variables(inner0.lhs) | variables(inner0.rhs)), set(used))
            inner = inner0.rename(ren)
            for pos, sub in fn_subterms(outer.lhs):
                if pos == () and ii == oi:
                    continue
                if unifiable_rational(inner.lhs, sub):
                    return False
    return True


def right_reducible(R: TRS) -> bool:
    """Every rule's right-hand side is reducible."""
    return all(not is_normal_form(R, r.rhs) for r in R.rules)


# ---------------------------------------------------------------------------
# conditional rewriting under an entailment oracle (congruence closure)

Entails = Callable[[Term, Term], bool]


def conditional_one_step(C: CTRS, t: Term, holds: Entails,
                         ) -> list[tuple[tuple[int, ...], int, Term]]:
    out = []
    for pos, sub in subterms(t):
        for i, rule in enumerate(C.rules):
            sigma = match(rule.lhs, sub)
            if sigma is None:
                continue
            if all(holds(substitute(c.lhs, sigma), substitute(c.rhs, sigma))
                   for c in rule.conditions):
                out.append((pos, i, replace_at(t, pos, substitute(rule.rhs, sigma))))
    return out


def _disjoint(p, q) -> bool:
    n = min(len(p), len(q))
    return p[:n] != q[:n]


def conditional_parallel(C: CTRS, t: Term, holds: Entails,
                         ) -> dict[Term, tuple[tuple[tuple[int, ...], int], ...]]:
    """Parallel-step reducts with one witnessing redex set each."""
    by_pos: dict[tuple[int, ...], list[tuple[int, Term]]] = {}
    for pos, i, u in conditional_one_step(C, t, holds):
        sub = u
        for k in pos:
            sub = sub.args[k - 1]
        by_pos.setdefault(pos, []).append((i, sub))
    positions = sorted(by_pos)
    out: dict[Term, tuple] = {t: ()}

    def go(i: int, chosen: list) -> None:
        if i == len(positions):
            for combo in product(*[by_pos[p] for p in chosen]):
                u = t
                for p, (ri, s) in zip(chosen, combo):
                    u = replace_at(u, p, s)
                out.setdefault(u, tuple((p, ri) for p, (ri, _) in zip(chosen, combo)))
            return
        go(i + 1, chosen)
        p = positions[i]
        if all(_disjoint(p, q) for q in chosen):
            go(i + 1, chosen + [p])

    go(0, [])
    return out


def conditional_reach(C: CTRS, t: Term, holds: Entails, depth: int,
                      size_cap: int = 0, max_terms: int = 0,
                      ) -> tuple[set[Term], bool]:
    """Terms reachable in at most `depth` conditional steps, plus a flag
    telling whether the search was cut off with the frontier still open."""
    seen = {t}
    frontier = [t]
    for _ in range(depth):
        nxt = []
        for u in frontier:
            for _, _, v in conditional_one_step(C, u, holds):
                if size_cap and term_size(v) > size_cap:
                    continue
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
                if max_terms and len(seen) >= max_terms:
                    return seen, True
        if not nxt:
            return seen, False
        frontier = nxt
    return seen, bool(frontier)


def parallel_closed_check(C: CTRS, budgets: Budgets = DEFAULT_BUDGETS) -> CriterionReport:
    """Closure of every conditional critical pair by a parallel step.

    Inner-outer pairs must close by one parallel step from the inner
    result to the outer result; overlays must meet in a common reduct of a
    parallel step from the left and many steps from the right.  Condition
    entailment is decided by congruence closure of the pair's conditions.
    """
    name = "parallel-closed"
    if not (C.left_linear and C.type1):
        return CriterionReport(name, False, failure="not a left-linear type-1 CTRS")
    details = []
    truncated = False
    for ccp in conditional_critical_pairs(C):
        cc = CongruenceClosure(ccp.conditions)
        holds = cc.entails
        par = conditional_parallel(C, ccp.left, holds)
        if not ccp.overlay:
            if ccp.right in par:
                redexes = par[ccp.right]
                details.append(f"{ccp!r}: parallel step {list(redexes)}")
                continue
            return CriterionReport(name, False, tuple(details),
                                   failure=f"unclosed critical pair {ccp!r}")
        reach, trunc = conditional_reach(C, ccp.right, holds, budgets.conv_depth,
                                         budgets.size_cap, budgets.max_class)
        meet = sorted((w for w in par if w in reach), key=repr)
        if meet:
            details.append(f"{ccp!r}: joined at {meet[0]!r}")
            continue
        truncated = truncated or trunc
        return CriterionReport(name, False, tuple(details),
                               failure=f"unclosed critical pair {ccp!r}",
                               truncated=trunc)
    return CriterionReport(name, True, tuple(details), truncated=truncated)


def strongly_closed_check(C: CTRS, budgets: Budgets = DEFAULT_BUDGETS) -> CriterionReport:
    """Both strong-closure joins for every conditional critical pair:
    many steps from the left meeting at most one step from the right, and
    at most one step from the left meeting many steps from the right."""
    name = "strongly-closed"
    if not C.linear:
        return CriterionReport(name, False, failure="CTRS is not linear")
    details = []
    for ccp in conditional_critical_pairs(C):
        cc = CongruenceClosure(ccp.conditions)
        holds = cc.entails
        u, v = ccp.left, ccp.right
        reach_u, tr1 = conditional_reach(C, u, holds, budgets.conv_depth,
                                         budgets.size_cap, budgets.max_class)
        reach_v, tr2 = conditional_reach(C, v, holds, budgets.conv_depth,
                                         budgets.size_cap, budgets.max_class)
        one_u = {u} | {w for _, _, w in conditional_one_step(C, u, holds)}
        one_v = {v} | {w for _, _, w in conditional_one_step(C, v, holds)}
        a = sorted(reach_u & one_v, key=repr)
        b = sorted(one_u & reach_v, key=repr)
        if a and b:
            details.append(f"{ccp!r}: joins at {a[0]!r} / {b[0]!r}")
            continue
        return CriterionReport(name, False, tuple(details),
                               failure=f"unclosed critical pair {ccp!r}",
                               truncated=tr1 or tr2)
    return CriterionReport(name, True, tuple(details))


# ---------------------------------------------------------------------------
# ranked conversion sets


@lru_cache(maxsize=16384)
def _eq_states_cached(gamma: Multiset, value: Term) -> frozenset[SimState]:
    start = SimState(gamma, value)
    seen = {start}
    work = [start]
    while work:
        st = work.pop()
        for idx, e in enumerate(st.remaining):
            if idx > 0 and st.remaining[idx - 1] == e:
                continue
            rem = st.remaining[:idx] + st.remaining[idx + 1:]
            for here, there in ((e.lhs, e.rhs), (e.rhs, e.lhs)):
                for pos, sub in subterms(st.value):
                    if sub == here:
                        ns = SimState(rem, replace_at(st.value, pos, there))
                        if ns not in seen:
                            seen.add(ns)
                            work.append(ns)
    return frozenset(seen)


def eq_states(gamma: Iterable[Equation], value: Term) -> frozenset[SimState]:
    """All states reachable from `value` by swapping one literal occurrence
    of an equation side for the other side, consuming that equation.

    This is the rank-0 conversion set: the reflexive state is always a
    member, each equation is usable once, and no rewrite rule is applied.
    """
    return _eq_states_cached(multiset(gamma), value)


def _tuple_remainders(gamma: Multiset, xs: Sequence[Term], ys: Sequence[Term],
                      ) -> set[Multiset]:
    """Remainders of rank-0 conversions relating the tuples componentwise."""
    rems = {gamma}
    for x, y in zip(xs, ys):
        nxt: set[Multiset] = set()
        for rem in rems:
            for st in _eq_states_cached(rem, x):
                if st.value == y:
                    nxt.add(st.remaining)
        if not nxt:
            return set()
        rems = nxt
    return rems


def _subterm_pool(gamma: Multiset, seed: Term) -> set[Term]:
    return {s for st in _eq_states_cached(gamma, seed) for _, s in subterms(st.value)}


_MAX_ASSIGNMENTS = 4096

_HOLE = Var("\x00ctx")


def _maybe_subterm(t: Term, pos) -> Optional[Term]:
    for i in pos:
        if isinstance(t, Var) or len(t.args) < i:
            return None
        t = t.args[i - 1]
    return t


def _rule_matches(C: CTRS, gamma: Multiset, s: Term, t: Optional[Term]):
    """Rule matches of `s` at some position, constrained to share the
    surrounding context with `t` when `t` is given.

    Rules are renamed apart from the query first.  Yields
    (pos, rule, theta, rule_vars) where `theta` binds the rule lhs (and,
    for constrained matches, the rhs against `t`), and `rule_vars` is the
    renamed rule's variable set (so unbound rule variables can be told
    apart from query variables).
    """
    used = variables(s) | (variables(t) if t is not None else set())
    for e in gamma:
        used |= variables(e.lhs) | variables(e.rhs)
    for pos, sub in subterms(s):
        t_sub = None
        if t is not None:
            t_sub = _maybe_subterm(t, pos)
            if t_sub is None or replace_at(s, pos, _HOLE) != replace_at(t, pos, _HOLE):
                continue
        for rule0 in C.rules:
            ren = renaming_apart(sorted(rule0.all_variables()), set(used))
            rule = rule0.rename(ren)
            theta = match(rule.lhs, sub)
            if theta is None:
                continue
            theta = dict(theta)
            if t is not None:
                sr = match(rule.rhs, t_sub)
                if sr is None:
                    continue
                consistent = True
                for k, v in sr.items():
                    if theta.setdefault(k, v) != v:
                        consistent = False
                        break
                if not consistent:
                    continue
            yield pos, rule, theta, rule.all_variables()


def _condition_vectors(rule: ConditionalRule, theta, rule_vars: set[str],
                       ) -> Optional[tuple[list[Term], list[Term], list[str]]]:
    """Instantiated condition sides plus the rule variables still unbound
    in the rhs sides.  None when a condition lhs stays unbound (outside
    the LR-separated fragment: handled conservatively by giving up)."""
    lhs_vec = [substitute(c.lhs, theta) for c in rule.conditions]
    rhs_vec = [substitute(c.rhs, theta) for c in rule.conditions]
    for x in lhs_vec:
        if variables(x) & rule_vars - set(theta):
            return None
    free: set[str] = set()
    for x in rhs_vec:
        free |= variables(x) & rule_vars
    return lhs_vec, rhs_vec, sorted(free - set(theta))


def _fillings(gamma: Multiset, rule: ConditionalRule, lhs_vec, rhs_vec,
              free: list[str], extra_pool: Optional[Callable[[Term], set[Term]]] = None):
    """Candidate substitutions for unbound condition rhs variables.

    Candidates come from the rank-0 conversion closures of the paired
    condition lhs instances (extended by `extra_pool` for higher ranks);
    values outside those closures cannot satisfy the condition tuple.
    """
    if not free:
        yield {}
        return
    pools: dict[str, set[Term]] = {w: set() for w in free}
    for i, c in enumerate(rule.conditions):
        names = variables(c.rhs)
        for w in free:
            if w in names:
                pools[w] |= _subterm_pool(gamma, lhs_vec[i])
                if extra_pool is not None:
                    pools[w] |= extra_pool(lhs_vec[i])
    ordered = [sorted(pools[w], key=repr) for w in free]
    total = 1
    for cand in ordered:
        total *= max(1, len(cand))
        if total > _MAX_ASSIGNMENTS:
            return
    for values in product(*ordered):
        yield dict(zip(free, values))


def step1_remainders(C: CTRS, gamma: Iterable[Equation], s: Term, t: Term,
                     ) -> set[Multiset]:
    """Remainders after one rewrite step from `s` to `t` whose condition
    tuple is settled by rank-0 conversions (a rank-1 step)."""
    g = multiset(gamma)
    out: set[Multiset] = set()
    for pos, rule, theta, rule_vars in _rule_matches(C, g, s, t):
        vecs = _condition_vectors(rule, theta, rule_vars)
        if vecs is None:
            continue
        lhs_vec, rhs_vec, free = vecs
        for fill in _fillings(g, rule, lhs_vec, rhs_vec, free):
            ys = [substitute(x, fill) for x in rhs_vec]
            out |= _tuple_remainders(g, lhs_vec, ys)
    return out


def step1_reducts(C: CTRS, gamma: Iterable[Equation], s: Term,
                  ) -> set[tuple[Multiset, Term]]:
    """All (remainder, reduct) pairs of rank-1 steps from `s`."""
    g = multiset(gamma)
    out: set[tuple[Multiset, Term]] = set()
    for pos, rule, theta, rule_vars in _rule_matches(C, g, s, None):
        vecs = _condition_vectors(rule, theta, rule_vars)
        if vecs is None:
            continue
        lhs_vec, rhs_vec, free = vecs
        rhs_free = sorted((variables(rule.rhs) & rule_vars) - set(theta))
        free = sorted(set(free) | set(rhs_free))
        for fill in _fillings(g, rule, lhs_vec, rhs_vec, free):
            if any(w not in fill for w in rhs_free):
                continue
            ys = [substitute(x, fill) for x in rhs_vec]
            for rem in _tuple_remainders(g, lhs_vec, ys):
                reduct = replace_at(s, pos, substitute(rule.rhs, {**theta, **fill}))
                out.add((rem, reduct))
    return out


def _step_sandwich(C: CTRS, gamma: Multiset, s: Term, t: Term) -> set[Multiset]:
    """Remainders of rank-0 conversion, one rank-1 step, rank-0 conversion
    leading from `s` to `t`."""
    out: set[Multiset] = set()
    for st1 in _eq_states_cached(gamma, s):
        for st2 in _eq_states_cached(st1.remaining, t):
            out |= step1_remainders(C, st2.remaining, st1.value, st2.value)
    return out


def conv1_remainders(C: CTRS, gamma: Iterable[Equation], s: Term, t: Term,
                     ) -> set[Multiset]:
    """Remainders of rank-1 conversions between `s` and `t` (exactly one
    rewrite step somewhere inside the conversion)."""
    g = multiset(gamma)
    return _step_sandwich(C, g, s, t) | _step_sandwich(C, g, t, s)


def _tuple_conv1_remainders(C: CTRS, gamma: Multiset, xs: Sequence[Term],
                            ys: Sequence[Term]) -> set[Multiset]:
    """Tuple conversion of total rank 1: one designated component converts
    at rank 1, the others at rank 0."""
    out: set[Multiset] = set()
    for j in range(len(xs)):
        rems = {gamma}
        for i, (x, y) in enumerate(zip(xs, ys)):
            nxt: set[Multiset] = set()
            for rem in rems:
                if i == j:
                    nxt |= conv1_remainders(C, rem, x, y)
                else:
                    nxt |= {st.remaining for st in _eq_states_cached(rem, x)
                            if st.value == y}
            if not nxt:
                break
            rems = nxt
        else:
            out |= rems
    return out


def _sim1_pool(C: CTRS, gamma: Multiset) -> Callable[[Term], set[Term]]:
    def pool(seed: Term) -> set[Term]:
        out: set[Term] = set()
        for st in _eq_states_cached(gamma, seed):
            for rem, v in step1_reducts(C, st.remaining, st.value):
                for st2 in _eq_states_cached(rem, v):
                    out |= {sub for _, sub in subterms(st2.value)}
        return out
    return pool


def step2_remainders(C: CTRS, gamma: Iterable[Equation], s: Term, t: Term,
                     ) -> set[Multiset]:
    """Remainders after one rewrite step from `s` to `t` whose condition
    tuple is settled by a rank-1 tuple conversion (a rank-2 step)."""
    g = multiset(gamma)
    out: set[Multiset] = set()
    for pos, rule, theta, rule_vars in _rule_matches(C, g, s, t):
        vecs = _condition_vectors(rule, theta, rule_vars)
        if vecs is None:
            continue
        lhs_vec, rhs_vec, free = vecs
        for fill in _fillings(g, rule, lhs_vec, rhs_vec, free,
                              extra_pool=_sim1_pool(C, g)):
            ys = [substitute(x, fill) for x in rhs_vec]
            out |= _tuple_conv1_remainders(C, g, lhs_vec, ys)
    return out


# ---------------------------------------------------------------------------
# weight-decreasing joinability


def wd_ccp_satisfied(C: CTRS, gamma: Iterable[Equation], s: Term, t: Term,
                     ) -> Optional[str]:
    """The satisfied weight-decreasing closure clause for the pair, if any:
    a conversion of rank at most one, a single rank-2 step either way, or a
    step followed by a conversion in both directions (total rank <= 2)."""
    g = multiset(gamma)
    if any(st.value == t for st in _eq_states_cached(g, s)):
        return "rank-0 conversion"
    if conv1_remainders(C, g, s, t):
        return "rank-1 conversion"
    if step2_remainders(C, g, s, t) or step2_remainders(C, g, t, s):
        return "rank-2 step"
    if _step_then_conv(C, g, s, t) and _step_then_conv(C, g, t, s):
        return "step then conversion, both directions"
    return None


def _step_then_conv(C: CTRS, g: Multiset, s: Term, t: Term) -> bool:
    for st in _eq_states_cached(g, t):
        if step1_remainders(C, st.remaining, s, st.value):
            return True
        if step2_remainders(C, st.remaining, s, st.value):
            return True
    for rem, s2 in step1_reducts(C, g, s):
        if conv1_remainders(C, rem, s2, t):
            return True
    return False


def weight_decreasing_unc(R: TRS) -> CriterionReport:
    """UNC via weight-decreasing joinability of the left-right separated
    linearization; only applicable to non-duplicating systems.  The check
    is exact (the ranked conversion sets are finite), so no budget."""
    name = "weight-decreasing"
    if not R.non_duplicating:
        return CriterionReport(name, False, failure="TRS is duplicating")
    C = lr_separated_linearize(R)
    details = []
    for ccp in conditional_critical_pairs(C):
        clause = wd_ccp_satisfied(C, ccp.conditions, ccp.left, ccp.right)
        if clause is None:
            return CriterionReport(name, False, tuple(details),
                                   failure=f"unclosed critical pair {ccp!r}")
        details.append(f"{ccp!r}: {clause}")
    return CriterionReport(name, True, tuple(details))
