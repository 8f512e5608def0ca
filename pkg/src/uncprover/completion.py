"""UNC completion, rule reversing, disproof search, and direct-sum
decomposition.

The completion loop adds rules connecting critical-pair sides until a
confluence predicate certifies the grown system; every added rule is
conversion-derivable over the original system and keeps the normal forms
unchanged, so UNC transfers back.  Disproofs exhibit two distinct
convertible normal forms together with a replayable conversion trace over
the original rules.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .config import Budgets, DEFAULT_BUDGETS
from .terms import (
    Term,
    Var,
    canonical_renaming,
    fn_subterms,
    fresh_name,
    match,
    mgu,
    renaming_apart,
    replace_at,
    substitute,
    subterm_at,
    term_size,
    variables,
)
from .trs import (
    TRS,
    ConvStep,
    CriticalPair,
    RewriteRule,
    bounded_reducts,
    conversion_class,
    critical_pairs,
    development_reducts_with_paths,
    development_step_reducts,
    is_normal_form,
    reducts,
    replay_path,
    rewrite_steps,
    trace_valid,
)

Trace = tuple[ConvStep, ...]


@dataclass(frozen=True)
class Witness:
    """Two distinct normal forms joined by a conversion trace."""

    s: Term
    t: Term
    trace: Trace


@dataclass(frozen=True)
class Verdict:
    status: str  # "UNC" | "NOT_UNC" | "MAYBE"
    reason: str = ""
    witness: Optional[Witness] = None
    added_rules: tuple[RewriteRule, ...] = ()
    #: conversion traces over the original system, one per added rule
    added_traces: tuple[Trace, ...] = ()
    rounds: int = 0

    @property
    def decided(self) -> bool:
        return self.status in ("UNC", "NOT_UNC")


@dataclass(frozen=True)
class ConfluencePredicate:
    """Rule-shape guard plus critical-pair closure test.

    Contract: if the guard holds for a TRS and the pair test holds for all
    its critical pairs, the TRS is confluent.
    """

    name: str
    guard: Callable[[TRS], bool]
    pair_closed: Callable[[TRS, CriticalPair, Budgets], bool]


def _strongly_closed_pair(S: TRS, cp: CriticalPair, budgets: Budgets) -> bool:
    u, v = cp.left, cp.right
    reach_u = bounded_reducts(S, u, budgets.conv_depth, budgets.size_cap,
                              budgets.max_class)
    reach_v = bounded_reducts(S, v, budgets.conv_depth, budgets.size_cap,
                              budgets.max_class)
    one_u = {u} | reducts(S, u)
    one_v = {v} | reducts(S, v)
    return bool(reach_u & one_v) and bool(one_u & reach_v)


def _development_closed_pair(S: TRS, cp: CriticalPair, budgets: Budgets) -> bool:
    devs, _ = development_step_reducts(S, cp.left, budgets.dev_cap)
    if not cp.overlay:
        return cp.right in devs
    reach_v = bounded_reducts(S, cp.right, budgets.conv_depth, budgets.size_cap,
                              budgets.max_class)
    return bool(devs & reach_v)


STRONGLY_CLOSED = ConfluencePredicate(
    "strongly-closed", lambda S: S.linear, _strongly_closed_pair)

DEVELOPMENT_CLOSED = ConfluencePredicate(
    "development-closed", lambda S: S.left_linear, _development_closed_pair)


def _term_key(t: Term) -> str:
    return repr(substitute(t, canonical_renaming([t], prefix="\x00v")))


def _rule_key(rule: RewriteRule) -> tuple[str, str]:
    ren = canonical_renaming([rule.lhs, rule.rhs], prefix="\x00v")
    return (repr(substitute(rule.lhs, ren)), repr(substitute(rule.rhs, ren)))


def _expand_trace(steps: Iterable[ConvStep], n_original: int,
                  rule_traces: dict[int, Trace]) -> Trace:
    """Rewrite trace steps that use added rules into original-rule segments.

    Stored segments connect an added rule's lhs to its rhs over original
    rules only, so one expansion level suffices.
    """
    out: list[ConvStep] = []
    for step in steps:
        if step.rule < n_original:
            out.append(step)
            continue
        seg = rule_traces[step.rule]
        src = step.src if step.forward else step.dst
        lhs_instance = subterm_at(src, step.pos)
        seg_vars: set[str] = set()
        for s in seg:
            seg_vars |= variables(s.src) | variables(s.dst)
        ren = renaming_apart(sorted(seg_vars - variables(seg[0].src)),
                             set(variables(src)) | seg_vars)
        seg = tuple(s.subst(ren) for s in seg)
        sigma = match(seg[0].src, lhs_instance)
        if sigma is None:
            raise ValueError("stored rule trace does not match its instance")
        expanded = [
            ConvStep(replace_at(src, step.pos, substitute(s.src, sigma)),
                     replace_at(src, step.pos, substitute(s.dst, sigma)),
                     s.rule, step.pos + s.pos, s.forward)
            for s in seg
        ]
        if not step.forward:
            expanded = [s.reversed_() for s in reversed(expanded)]
        out.extend(expanded)
    return tuple(out)


def _peak_trace(S: TRS, cp: CriticalPair) -> Optional[Trace]:
    """Conversion left <- peak -> right, reconstructed from the sources.

    Replays the same renaming and unification as the critical pair
    computation, so the terms line up with the stored pair.
    """
    outer = S.rules[cp.outer]
    inner0 = S.rules[cp.inner]
    used = variables(outer.lhs) | variables(outer.rhs)
    ren = renaming_apart(
        sorted(variables(inner0.lhs) | variables(inner0.rhs)), set(used))
    inner = inner0.rename(ren)
    sigma = mgu(inner.lhs, subterm_at(outer.lhs, cp.pos))
    if sigma is None:
        return None
    peak = substitute(outer.lhs, sigma)
    left = substitute(replace_at(outer.lhs, cp.pos, inner.rhs), sigma)
    right = substitute(outer.rhs, sigma)
    if left != cp.left or right != cp.right:
        return None
    return (ConvStep(cp.left, peak, cp.inner, cp.pos, False),
            ConvStep(peak, cp.right, cp.outer, (), True))


def _escape_witness(trace_s_to_t: Trace, s: Term, t: Term) -> Witness:
    """Second normal form obtained by renaming a variable of `t` that does
    not occur in `s`; the witness trace runs through `s`."""
    x = sorted(variables(t) - variables(s))[0]
    pool = set(variables(s) | variables(t))
    for st in trace_s_to_t:
        pool |= variables(st.src) | variables(st.dst)
    y = fresh_name(x, pool)
    ren = {x: Var(y)}
    t2 = substitute(t, ren)
    renamed = tuple(st.subst(ren) for st in trace_s_to_t)
    full = tuple(st.reversed_() for st in reversed(renamed)) + tuple(trace_s_to_t)
    return Witness(t2, t, full)


def _pick_join(S: TRS, u: Term, v: Term, budgets: Budgets):
    """Smallest multistep reduct of either side usable as a new rule's rhs.

    Candidates pair a reduct w of u with rule v -> w and a reduct w of v
    with rule u -> w; the smallest w wins, ties broken lexicographically.
    Returns (lhs, w, path_start, path) or None.
    """
    candidates = []
    for branch, (lhs, other) in enumerate(((v, u), (u, v))):
        if S.left_linear:
            dev = development_reducts_with_paths(S, other)
        else:
            dev = {w: None
                   for w in development_step_reducts(S, other, budgets.dev_cap)[0]}
        for w in sorted(dev, key=repr):
            if w == lhs or variables(w) - variables(lhs):
                continue
            candidates.append((term_size(w), repr(w), branch, lhs, w, other, dev[w]))
    if not candidates:
        return None
    candidates.sort(key=lambda c: c[:3])
    _, _, _, lhs, w, start, path = candidates[0]
    if path is None:
        path = _find_path(S, start, w, budgets)
        if path is None:
            return None
    return lhs, w, start, path


def _find_path(S: TRS, start: Term, goal: Term, budgets: Budgets):
    """BFS for a single-step path start ->* goal (non-left-linear case)."""
    parents: dict[Term, tuple[Term, tuple, int]] = {}
    depth = {start: 0}
    q = deque([start])
    limit = budgets.dev_cap * 4 + 4
    explored = 0
    while q:
        cur = q.popleft()
        if cur == goal:
            path = []
            while cur != start:
                prev, pos, ri = parents[cur]
                path.append((pos, ri))
                cur = prev
            return tuple(reversed(path))
        if depth[cur] >= limit:
            continue
        explored += 1
        if explored > budgets.max_class:
            return None
        for pos, i, nxt in rewrite_steps(S, cur):
            if nxt not in depth:
                depth[nxt] = depth[cur] + 1
                parents[nxt] = (cur, pos, i)
                q.append(nxt)
    return None


def unc_complete(R: TRS, pred: ConfluencePredicate, max_rounds: int = 3,
                 budgets: Budgets = DEFAULT_BUDGETS,
                 deadline: Optional[float] = None) -> Verdict:
    """Grow `R` with conversion-derivable rules until the confluence
    predicate certifies the result, a disproof witness appears, or the
    round budget runs out.

    Addition invariant: each added rule l -> r has l convertible to r over
    the *original* system (a trace is kept) and l was reducible when
    added, so the normal forms never change.
    """
    n_original = len(R.rules)
    current = R
    rule_traces: dict[int, Trace] = {}
    added: list[RewriteRule] = []
    added_traces: list[Trace] = []
    for round_no in range(1, max_rounds + 1):
        if deadline is not None and time.monotonic() > deadline:
            return Verdict("MAYBE", "timeout", rounds=round_no - 1,
                           added_rules=tuple(added), added_traces=tuple(added_traces))
        cps = critical_pairs(current)
        closed = {}
        for cp in cps:
            if deadline is not None and time.monotonic() > deadline:
                return Verdict("MAYBE", "timeout", rounds=round_no - 1,
                               added_rules=tuple(added),
                               added_traces=tuple(added_traces))
            closed[cp] = pred.pair_closed(current, cp, budgets)
        if pred.guard(current) and all(closed.values()):
            return Verdict("UNC", f"completion success with {pred.name} predicate",
                           rounds=round_no, added_rules=tuple(added),
                           added_traces=tuple(added_traces))
        new_rules: list[tuple[RewriteRule, Trace]] = []
        handled_overlays: set[frozenset[str]] = set()
        known = {_rule_key(r) for r in current.rules}
        for cp in cps:
            if deadline is not None and time.monotonic() > deadline:
                return Verdict("MAYBE", "timeout", rounds=round_no - 1,
                               added_rules=tuple(added),
                               added_traces=tuple(added_traces))
            if closed[cp] or cp.left == cp.right:
                continue
            if cp.overlay:
                key = frozenset((_term_key(cp.left), _term_key(cp.right)))
                if key in handled_overlays:
                    continue
                handled_overlays.add(key)
            base = _peak_trace(current, cp)
            if base is None:
                continue
            u, v = cp.left, cp.right
            u_nf, v_nf = is_normal_form(current, u), is_normal_form(current, v)
            if u_nf and v_nf:
                trace = _expand_trace(base, n_original, rule_traces)
                return Verdict("NOT_UNC", "two distinct convertible normal forms",
                               witness=Witness(u, v, trace), rounds=round_no,
                               added_rules=tuple(added),
                               added_traces=tuple(added_traces))
            if v_nf and not u_nf:
                if variables(v) - variables(u):
                    expanded = _expand_trace(base, n_original, rule_traces)
                    w = _escape_witness(expanded, u, v)
                    return Verdict("NOT_UNC", "normal form drops a variable",
                                   witness=w, rounds=round_no,
                                   added_rules=tuple(added),
                                   added_traces=tuple(added_traces))
                _add_rule(new_rules, known, RewriteRule(u, v), base)
                continue
            if u_nf and not v_nf:
                if variables(u) - variables(v):
                    rev = tuple(s.reversed_() for s in reversed(base))
                    expanded = _expand_trace(rev, n_original, rule_traces)
                    w = _escape_witness(expanded, v, u)
                    return Verdict("NOT_UNC", "normal form drops a variable",
                                   witness=w, rounds=round_no,
                                   added_rules=tuple(added),
                                   added_traces=tuple(added_traces))
                rev = tuple(s.reversed_() for s in reversed(base))
                _add_rule(new_rules, known, RewriteRule(v, u), rev)
                continue
            choice = _pick_join(current, u, v, budgets)
            if choice is None:
                continue
            lhs, w, start, path = choice
            fwd = tuple(replay_path(current, start, path))
            if lhs == v:
                # v <- peak -> u ->* w, oriented v -> w
                rev = tuple(s.reversed_() for s in reversed(base))
                trace = rev + fwd
            else:
                trace = tuple(base) + fwd
            _add_rule(new_rules, known, RewriteRule(lhs, w), trace)
        if not new_rules:
            return Verdict("MAYBE", "completion failed: no progress possible",
                           rounds=round_no, added_rules=tuple(added),
                           added_traces=tuple(added_traces))
        for rule, trace in new_rules:
            expanded = _expand_trace(trace, n_original, rule_traces)
            idx = len(current.rules)
            current = TRS(current.signature, current.rules + (rule,))
            rule_traces[idx] = expanded
            added.append(rule)
            added_traces.append(expanded)
    return Verdict("MAYBE", f"round budget of {max_rounds} exhausted",
                   rounds=max_rounds, added_rules=tuple(added),
                   added_traces=tuple(added_traces))


def _add_rule(new_rules, known, rule: RewriteRule, trace: Trace) -> None:
    key = _rule_key(rule)
    if key in known:
        return
    known.add(key)
    new_rules.append((rule, trace))


# ---------------------------------------------------------------------------
# rule reversing


def rule_reverse(R: TRS) -> TRS:
    return rule_reverse_mapped(R)[0]


def rule_reverse_mapped(R: TRS) -> tuple[TRS, tuple[tuple[str, int], ...]]:
    """Reverse rules with reducible right-hand sides and drop redundant
    identity rules; returns the new system plus per-rule provenance.

    A rule l -> r is reversed (into l -> l and r -> l) only when r is
    reducible, r -> l is well-formed, and l is strictly smaller than r.
    An identity rule l -> l is dropped when the remaining rules still
    reduce l.  Provenance tags: ("kept", i), ("loop", i), ("flip", i)
    with i the original rule index.
    """
    rules: list[RewriteRule] = list(R.rules)
    origin: list[tuple[str, int]] = [("kept", i) for i in range(len(rules))]
    changed = True
    while changed:
        changed = False
        cur = TRS(R.signature, tuple(rules))
        for i, rule in enumerate(rules):
            tag, orig = origin[i]
            if tag != "kept" or rule.lhs == rule.rhs:
                continue
            if term_size(rule.lhs) >= term_size(rule.rhs):
                continue
            if isinstance(rule.rhs, Var) or variables(rule.lhs) - variables(rule.rhs):
                continue
            if is_normal_form(cur, rule.rhs):
                continue
            rules[i:i + 1] = [RewriteRule(rule.lhs, rule.lhs),
                              RewriteRule(rule.rhs, rule.lhs)]
            origin[i:i + 1] = [("loop", orig), ("flip", orig)]
            changed = True
            break
        if changed:
            continue
        for i, rule in enumerate(rules):
            if rule.lhs != rule.rhs:
                continue
            rest = TRS(R.signature, tuple(r for j, r in enumerate(rules) if j != i))
            if not is_normal_form(rest, rule.lhs):
                del rules[i]
                del origin[i]
                changed = True
                break
    deduped: list[RewriteRule] = []
    deduped_origin: list[tuple[str, int]] = []
    for rule, org in zip(rules, origin):
        if rule not in deduped:
            deduped.append(rule)
            deduped_origin.append(org)
    return TRS(R.signature, tuple(deduped)), tuple(deduped_origin)


def translate_trace(steps: Iterable[ConvStep], origin: tuple[tuple[str, int], ...],
                    ) -> Trace:
    """Map a conversion trace over a reversed system back to the original.

    Flipped rules swap step direction, identity rules vanish, kept rules
    map straight through.
    """
    out: list[ConvStep] = []
    for step in steps:
        tag, i = origin[step.rule]
        if tag == "kept":
            out.append(ConvStep(step.src, step.dst, i, step.pos, step.forward))
        elif tag == "flip":
            out.append(ConvStep(step.src, step.dst, i, step.pos, not step.forward))
        elif step.src != step.dst:
            raise ValueError("identity rule step changed the term")
    return tuple(out)


# ---------------------------------------------------------------------------
# disproof search


def validate_witness(R: TRS, w: Witness) -> bool:
    if w.s == w.t:
        return False
    if not (is_normal_form(R, w.s) and is_normal_form(R, w.t)):
        return False
    if not w.trace:
        return False
    if w.trace[0].src != w.s or w.trace[-1].dst != w.t:
        return False
    return trace_valid(R, w.trace)


def disprove_search(R: TRS, budgets: Budgets = DEFAULT_BUDGETS,
                    deadline: Optional[float] = None) -> Optional[Witness]:
    """Bounded conversion search for a UNC counterexample.

    Seeds are critical-pair sides and rule right-hand sides.  Each class
    is scanned first for a normal form carrying a variable absent from a
    convertible term (a second witness then arises by renaming), then for
    two distinct normal forms in the class.
    """
    seeds: list[Term] = []
    for cp in critical_pairs(R):
        seeds.extend([cp.left, cp.right])
    seeds.extend(r.rhs for r in R.rules)
    seen_keys: set[str] = set()
    for seed in seeds:
        if deadline is not None and time.monotonic() > deadline:
            return None
        k = _term_key(seed)
        if k in seen_keys:
            continue
        seen_keys.add(k)
        cls = conversion_class(R, seed, budgets.conv_depth, budgets.size_cap,
                               budgets.max_class)
        members = sorted(cls.members, key=repr)
        nfs = [t for t in members if is_normal_form(R, t)]
        for t in nfs:
            for s in members:
                if s == t or not variables(t) - variables(s):
                    continue
                w = _escape_witness(_connect(cls, s, t), s, t)
                if validate_witness(R, w):
                    return w
        for i, t1 in enumerate(nfs):
            for t2 in nfs[i + 1:]:
                w = Witness(t1, t2, _connect(cls, t1, t2))
                if validate_witness(R, w):
                    return w
    return None


def _connect(cls, a: Term, b: Term) -> Trace:
    """Conversion a ~* b inside a class, shared path segments trimmed."""
    pa = cls.path_from_seed(a)
    pb = cls.path_from_seed(b)
    k = 0
    while k < len(pa) and k < len(pb) and pa[k] == pb[k]:
        k += 1
    back = tuple(st.reversed_() for st in reversed(pa[k:]))
    return back + tuple(pb[k:])


# ---------------------------------------------------------------------------
# direct-sum decomposition


def direct_sum_decompose(R: TRS) -> tuple[TRS, ...]:
    """Finest partition of the rules into systems over disjoint signatures."""
    if not R.rules:
        return (R,)
    parent: dict[str, str] = {}

    def find(a: str) -> str:
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    rule_syms: list[list[str]] = []
    for rule in R.rules:
        syms = sorted({s.sym for _, s in fn_subterms(rule.lhs)} |
                      {s.sym for _, s in fn_subterms(rule.rhs)})
        rule_syms.append(syms)
        for a, b in zip(syms, syms[1:]):
            parent[find(a)] = find(b)
    groups: dict[str, list[RewriteRule]] = {}
    order: list[str] = []
    for rule, syms in zip(R.rules, rule_syms):
        root = find(syms[0])
        if root not in groups:
            groups[root] = []
            order.append(root)
        groups[root].append(rule)
    out = []
    for root in order:
        rules = tuple(groups[root])
        syms = {s.sym for r in rules for _, s in fn_subterms(r.lhs)}
        syms |= {s.sym for r in rules for _, s in fn_subterms(r.rhs)}
        out.append(TRS(R.signature.restrict(syms), rules))
    return tuple(out)
