"""Unconditional rewrite systems: rewriting, closures of steps, critical pairs.

All operations are pure; step budgets are per call.  Result sets are
deduplicated literally except for critical pairs, which are identified up to
renaming.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional

from .terms import (
    App,
    Position,
    Signature,
    Term,
    Var,
    canonical_renaming,
    count_var,
    fn_subterms,
    infer_signature,
    is_linear,
    match,
    mgu,
    renaming_apart,
    replace_at,
    substitute,
    subterms,
    term_size,
    variables,
    well_formed,
)


@dataclass(frozen=True)
class RewriteRule:
    lhs: Term
    rhs: Term

    def __post_init__(self) -> None:
        if isinstance(self.lhs, Var):
            raise ValueError(f"rule lhs is a variable: {self.lhs!r}")
        extra = variables(self.rhs) - variables(self.lhs)
        if extra:
            raise ValueError(
                f"rule {self.lhs!r} -> {self.rhs!r} introduces variables {sorted(extra)}")

    def __repr__(self) -> str:
        return f"{self.lhs!r} -> {self.rhs!r}"

    @property
    def left_linear(self) -> bool:
        return is_linear(self.lhs)

    @property
    def right_linear(self) -> bool:
        return is_linear(self.rhs)

    @property
    def linear(self) -> bool:
        return self.left_linear and self.right_linear

    @property
    def non_duplicating(self) -> bool:
        return all(count_var(self.lhs, x) >= count_var(self.rhs, x)
                   for x in variables(self.lhs))

    def rename(self, sigma) -> "RewriteRule":
        return RewriteRule(substitute(self.lhs, sigma), substitute(self.rhs, sigma))


@dataclass(frozen=True)
class TRS:
    signature: Signature
    rules: tuple[RewriteRule, ...]

    @staticmethod
    def of(rules: Iterable[RewriteRule], signature: Optional[Signature] = None) -> "TRS":
        deduped: list[RewriteRule] = []
        for r in rules:
            if r not in deduped:
                deduped.append(r)
        if signature is None:
            signature = infer_signature(
                [t for r in deduped for t in (r.lhs, r.rhs)])
        for r in deduped:
            if not (well_formed(r.lhs, signature) and well_formed(r.rhs, signature)):
                raise ValueError(f"rule {r!r} not well-formed over the signature")
        return TRS(signature, tuple(deduped))

    @property
    def left_linear(self) -> bool:
        return all(r.left_linear for r in self.rules)

    @property
    def right_linear(self) -> bool:
        return all(r.right_linear for r in self.rules)

    @property
    def linear(self) -> bool:
        return all(r.linear for r in self.rules)

    @property
    def non_duplicating(self) -> bool:
        return all(r.non_duplicating for r in self.rules)

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for r in self.rules:
            for _, s in fn_subterms(r.lhs):
                out.add(s.sym)
            for _, s in fn_subterms(r.rhs):
                out.add(s.sym)
        return out


@dataclass(frozen=True)
class CriticalPair:
    """Pair <outer-lhs-with-inner-reduct, outer-rhs> from a unifiable overlap.

    `left` is the result of the inner step, `right` the result of the outer
    (root) step; `pos` is the overlap position inside the outer lhs.
    """

    left: Term
    right: Term
    overlay: bool
    outer: int
    inner: int
    pos: Position

    @property
    def kind(self) -> str:
        return "overlay" if self.overlay else "inner-outer"

    def __repr__(self) -> str:
        return f"<{self.left!r}, {self.right!r}> [{self.kind}]"


def rewrite_steps(R: TRS, t: Term) -> list[tuple[Position, int, Term]]:
    """All one-step reducts of `t` with redex position and rule index."""
    out = []
    for pos, sub in subterms(t):
        for i, rule in enumerate(R.rules):
            sigma = match(rule.lhs, sub)
            if sigma is not None:
                out.append((pos, i, replace_at(t, pos, substitute(rule.rhs, sigma))))
    return out


def reducts(R: TRS, t: Term) -> set[Term]:
    return {u for _, _, u in rewrite_steps(R, t)}


def is_normal_form(R: TRS, t: Term) -> bool:
    for _, sub in subterms(t):
        for rule in R.rules:
            if match(rule.lhs, sub) is not None:
                return False
    return True


def bounded_reducts(R: TRS, t: Term, depth: int, size_cap: int = 0,
                    max_terms: int = 0) -> set[Term]:
    """Terms reachable from `t` in at most `depth` rewrite steps.

    `size_cap` drops oversized reducts, `max_terms` stops the exploration
    once that many terms were found; both keep the result a sound subset
    of the reachable terms.
    """
    seen = {t}
    frontier = [t]
    for _ in range(depth):
        nxt = []
        for u in frontier:
            for v in reducts(R, u):
                if size_cap and term_size(v) > size_cap:
                    continue
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
                if max_terms and len(seen) >= max_terms:
                    return seen
        if not nxt:
            break
        frontier = nxt
    return seen


def _disjoint(p: Position, q: Position) -> bool:
    n = min(len(p), len(q))
    return p[:n] != q[:n]


def parallel_step_reducts(R: TRS, t: Term) -> set[Term]:
    """Reducts of `t` under one parallel step (any set of disjoint redexes).

    The empty redex set is allowed, so `t` itself is always included.
    """
    by_pos: dict[Position, list[Term]] = {}
    for pos, sub in subterms(t):
        for rule in R.rules:
            sigma = match(rule.lhs, sub)
            if sigma is not None:
                by_pos.setdefault(pos, []).append(substitute(rule.rhs, sigma))
    positions = sorted(by_pos)
    out: set[Term] = set()

    def go(i: int, chosen: list[Position]) -> None:
        if i == len(positions):
            options = [by_pos[p] for p in chosen]
            for combo in product(*options):
                u = t
                for p, s in zip(chosen, combo):
                    u = replace_at(u, p, s)
                out.add(u)
            return
        go(i + 1, chosen)
        p = positions[i]
        if all(_disjoint(p, q) for q in chosen):
            go(i + 1, chosen + [p])

    go(0, [])
    return out


#: Serialisation of a multistep: (redex position, rule index) to apply in order.
DevPath = tuple[tuple[Position, int], ...]


def _multistep(R: TRS, t: Term, memo: dict[Term, dict[Term, DevPath]],
               ) -> dict[Term, DevPath]:
    """Reducts of one multistep from `t`, each with a serialising path."""
    if t in memo:
        return memo[t]
    if isinstance(t, Var):
        memo[t] = {t: ()}
        return memo[t]
    out: dict[Term, DevPath] = {}
    arg_maps = [_multistep(R, a, memo) for a in t.args]
    for combo in product(*[sorted(m, key=repr) for m in arg_maps]):
        u = App(t.sym, combo)
        path: list[tuple[Position, int]] = []
        for i, new_arg in enumerate(combo):
            path.extend(((i + 1,) + p, ri) for p, ri in arg_maps[i][new_arg])
        out.setdefault(u, tuple(path))
    for ri, rule in enumerate(R.rules):
        sigma = match(rule.lhs, t)
        if sigma is None:
            continue
        names = sorted(variables(rule.rhs))
        value_maps = {n: _multistep(R, sigma.get(n, Var(n)), memo) for n in names}
        var_slots = [(p, s.name) for p, s in subterms(rule.rhs) if isinstance(s, Var)]
        for values in product(*[sorted(value_maps[n], key=repr) for n in names]):
            tau = dict(zip(names, values))
            path = [((), ri)]
            for p, name in var_slots:
                path.extend((p + q, rj) for q, rj in value_maps[name][tau[name]])
            out.setdefault(substitute(rule.rhs, tau), tuple(path))
    memo[t] = out
    return out


def subterm_at_safe(t: Term, pos: Position) -> Term:
    for i in pos:
        t = t.args[i - 1]
    return t


def development_reducts_with_paths(R: TRS, t: Term) -> dict[Term, DevPath]:
    """One multistep from `t`; each reduct carries a single-step path."""
    return dict(_multistep(R, t, {}))


def replay_path(R: TRS, start: Term, path: DevPath) -> list["ConvStep"]:
    """Turn a (position, rule) path into concrete forward conversion steps."""
    steps: list[ConvStep] = []
    cur = start
    for pos, ri in path:
        rule = R.rules[ri]
        sigma = match(rule.lhs, subterm_at_safe(cur, pos))
        if sigma is None:
            raise ValueError("path does not replay")
        nxt = replace_at(cur, pos, substitute(rule.rhs, sigma))
        steps.append(ConvStep(cur, nxt, ri, pos, True))
        cur = nxt
    return steps


def development_step_reducts(R: TRS, t: Term, cap: int = 3,
                             max_terms: int = 4096) -> tuple[set[Term], bool]:
    """Multistep reducts of `t`, with a truncation flag.

    For left-linear systems this is one exact multistep.  Otherwise the
    multistep is over-approximated by up to `cap` iterated parallel steps,
    still a sound subset of many-step rewriting.
    """
    if R.left_linear:
        out = set(development_reducts_with_paths(R, t))
        return out, len(out) > max_terms
    seen = {t}
    frontier = [t]
    truncated = False
    for _ in range(cap):
        nxt = []
        for u in frontier:
            for v in parallel_step_reducts(R, u):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
                if len(seen) > max_terms:
                    return seen, True
        if not nxt:
            break
        frontier = nxt
    else:
        truncated = bool(frontier)
    return seen, truncated


def _pair_key(left: Term, right: Term, overlay: bool) -> tuple:
    ren = canonical_renaming([left, right])
    return (overlay, repr(substitute(left, ren)), repr(substitute(right, ren)))


def critical_pairs(R: TRS) -> tuple[CriticalPair, ...]:
    """All critical pairs of `R`, deduplicated up to renaming.

    Every ordered rule pair is overlapped, including a rule with its own
    renamed copy; the root overlap of a rule with itself is excluded.
    """
    out: list[CriticalPair] = []
    seen: set[tuple] = set()
    for oi, outer in enumerate(R.rules):
        used = variables(outer.lhs) | variables(outer.rhs)
        for ii, inner0 in enumerate(R.rules):
            ren = renaming_apart(
                sorted(variables(inner0.lhs) | variables(inner0.rhs)), set(used))
            inner = inner0.rename(ren)
            for pos, sub in fn_subterms(outer.lhs):
                if pos == () and ii == oi:
                    continue
                sigma = mgu(inner.lhs, sub)
                if sigma is None:
                    continue
                left = substitute(replace_at(outer.lhs, pos, inner.rhs), sigma)
                right = substitute(outer.rhs, sigma)
                key = _pair_key(left, right, pos == ())
                if key in seen:
                    continue
                seen.add(key)
                out.append(CriticalPair(left, right, pos == (), oi, ii, pos))
    return tuple(out)


@dataclass(frozen=True)
class ConvStep:
    """One conversion edge: src -> dst if forward, else dst -> src."""

    src: Term
    dst: Term
    rule: int
    pos: Position
    forward: bool

    def reversed_(self) -> "ConvStep":
        return ConvStep(self.dst, self.src, self.rule, self.pos, not self.forward)

    def subst(self, sigma) -> "ConvStep":
        return ConvStep(substitute(self.src, sigma), substitute(self.dst, sigma),
                        self.rule, self.pos, self.forward)


def step_valid(R: TRS, step: ConvStep) -> bool:
    src, dst = (step.src, step.dst) if step.forward else (step.dst, step.src)
    try:
        sub = subterm_at_safe(src, step.pos)
    except (IndexError, AttributeError):
        return False
    rule = R.rules[step.rule]
    sigma = match(rule.lhs, sub)
    if sigma is None:
        return False
    return replace_at(src, step.pos, substitute(rule.rhs, sigma)) == dst


def trace_valid(R: TRS, trace: Iterable[ConvStep]) -> bool:
    steps = list(trace)
    for a, b in zip(steps, steps[1:]):
        if a.dst != b.src:
            return False
    return all(step_valid(R, s) for s in steps)


def expansion_steps(R: TRS, t: Term, used_names: set[str],
                    size_cap: int = 0) -> Iterator[tuple[Position, int, Term]]:
    """Predecessors of `t`: terms u with u -> t in one step.

    Rule variables absent from the rhs are instantiated with fresh
    variables, giving the most general predecessor at each position.
    """
    for pos, sub in subterms(t):
        for i, rule in enumerate(R.rules):
            sigma = match(rule.rhs, sub)
            if sigma is None:
                continue
            sigma = dict(sigma)
            pool = set(used_names)
            for x in sorted(variables(rule.lhs) - set(sigma) - variables(rule.rhs)):
                holes = pool | {n for u in sigma.values() for n in variables(u)}
                k = 1
                while f"w{k}" in holes:
                    k += 1
                sigma[x] = Var(f"w{k}")
                pool.add(f"w{k}")
            u = replace_at(t, pos, substitute(rule.lhs, sigma))
            if size_cap and term_size(u) > size_cap:
                continue
            yield pos, i, u


@dataclass
class ConversionClass:
    """Bounded conversion neighbourhood of a seed term, with parent edges."""

    seed: Term
    members: list[Term] = field(default_factory=list)
    parent: dict[Term, ConvStep] = field(default_factory=dict)

    def path_from_seed(self, t: Term) -> list[ConvStep]:
        steps: list[ConvStep] = []
        while t != self.seed:
            step = self.parent[t]
            steps.append(step)
            t = step.src
        steps.reverse()
        return steps


def conversion_class(R: TRS, seed: Term, depth: int, size_cap: int = 40,
                     max_class: int = 2000) -> ConversionClass:
    """BFS over the symmetric rewrite relation, both directions bounded.

    Fresh variables introduced by reverse steps are deduplicated up to
    renaming (variables of the seed are kept fixed).
    """
    keep = frozenset(variables(seed))

    def key(t: Term) -> str:
        return repr(substitute(t, canonical_renaming([t], keep, prefix="@")))

    cls = ConversionClass(seed, [seed])
    seen = {key(seed)}
    frontier = [seed]
    for _ in range(depth):
        nxt: list[Term] = []
        for u in frontier:
            candidates: list[ConvStep] = []
            for pos, i, v in rewrite_steps(R, u):
                candidates.append(ConvStep(u, v, i, pos, True))
            names = keep | {n for m in cls.members for n in variables(m)}
            for pos, i, v in expansion_steps(R, u, set(names), size_cap):
                candidates.append(ConvStep(u, v, i, pos, False))
            for step in candidates:
                v = step.dst
                if size_cap and term_size(v) > size_cap:
                    continue
                k = key(v)
                if k in seen:
                    continue
                seen.add(k)
                cls.members.append(v)
                cls.parent[v] = step
                nxt.append(v)
                if len(cls.members) >= max_class:
                    return cls
        if not nxt:
            break
        frontier = nxt
    return cls


def bounded_conversions(R: TRS, s: Term, depth: int, size_cap: int = 40,
                        max_class: int = 2000) -> set[Term]:
    """Terms reachable from `s` by at most `depth` conversion steps."""
    cls = conversion_class(R, s, depth, size_cap, max_class)
    return set(cls.members)
