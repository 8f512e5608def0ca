"""First-order terms over a fixed-arity signature.

Terms are immutable values; variables are identified by name and names are
disjoint from function symbols.  Positions are tuples of 1-based argument
indices, the empty tuple being the root.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

#: Reserved hole symbol for contexts; never part of a user signature.
HOLE = "\x00hole"


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    sym: str
    args: tuple["Term", ...] = ()

    def __repr__(self) -> str:
        if not self.args:
            return self.sym
        return f"{self.sym}({','.join(map(repr, self.args))})"


Term = Union[Var, App]

Subst = Mapping[str, Term]
Position = tuple[int, ...]


@dataclass(frozen=True)
class Signature:
    """Immutable map from function symbol to arity."""

    entries: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        table = {}
        for sym, ar in self.entries:
            if sym == HOLE:
                raise ValueError("hole symbol is reserved")
            if ar < 0:
                raise ValueError(f"negative arity for {sym}")
            if sym in table and table[sym] != ar:
                raise ValueError(f"conflicting arities for {sym}")
            table[sym] = ar
        object.__setattr__(self, "_table", table)

    @staticmethod
    def of(mapping: Mapping[str, int]) -> "Signature":
        return Signature(tuple(sorted(mapping.items())))

    def arity(self, sym: str) -> int:
        return self._table[sym]

    def __contains__(self, sym: str) -> bool:
        return sym in self._table

    def symbols(self) -> tuple[str, ...]:
        return tuple(sorted(self._table))

    def as_dict(self) -> dict[str, int]:
        return dict(self._table)

    def restrict(self, syms: Iterable[str]) -> "Signature":
        keep = set(syms)
        return Signature(tuple((s, a) for s, a in sorted(self._table.items()) if s in keep))

    def merge(self, other: "Signature") -> "Signature":
        table = self.as_dict()
        for sym, ar in other.entries:
            if table.setdefault(sym, ar) != ar:
                raise ValueError(f"conflicting arities for {sym}")
        return Signature.of(table)


def well_formed(t: Term, sig: Signature) -> bool:
    """True iff every symbol of `t` is declared with matching arity."""
    if isinstance(t, Var):
        return True
    if t.sym not in sig or sig.arity(t.sym) != len(t.args):
        return False
    return all(well_formed(a, sig) for a in t.args)


def infer_signature(terms: Iterable[Term]) -> Signature:
    """Signature read off from symbol uses; raises on arity conflicts."""
    table: dict[str, int] = {}
    stack = list(terms)
    while stack:
        t = stack.pop()
        if isinstance(t, App):
            if table.setdefault(t.sym, len(t.args)) != len(t.args):
                raise ValueError(f"conflicting arities for {t.sym}")
            stack.extend(t.args)
    return Signature.of(table)


def subterms(t: Term) -> Iterator[tuple[Position, Term]]:
    """All (position, subterm) pairs of `t`, root first, left to right."""
    yield (), t
    if isinstance(t, App):
        for i, a in enumerate(t.args, 1):
            for p, s in subterms(a):
                yield (i,) + p, s


def fn_subterms(t: Term) -> Iterator[tuple[Position, Term]]:
    """Like `subterms` but restricted to non-variable subterms."""
    for p, s in subterms(t):
        if isinstance(s, App):
            yield p, s


def subterm_at(t: Term, pos: Position) -> Term:
    for i in pos:
        if isinstance(t, Var) or not 1 <= i <= len(t.args):
            raise IndexError(f"position {pos} not in term")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, pos: Position, s: Term) -> Term:
    if not pos:
        return s
    if isinstance(t, Var):
        raise IndexError(f"position {pos} not in term")
    i = pos[0]
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], pos[1:], s)
    return App(t.sym, tuple(args))


def variables(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.add(u.name)
        else:
            stack.extend(u.args)
    return out


def var_occurrences(t: Term) -> list[str]:
    """Variable names of `t` in left-to-right occurrence order."""
    if isinstance(t, Var):
        return [t.name]
    out: list[str] = []
    for a in t.args:
        out.extend(var_occurrences(a))
    return out


def count_var(t: Term, name: str) -> int:
    return var_occurrences(t).count(name)


def is_linear(t: Term) -> bool:
    occs = var_occurrences(t)
    return len(occs) == len(set(occs))


def term_size(t: Term) -> int:
    """Number of symbol and variable occurrences."""
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def substitute(t: Term, sigma: Subst) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    return App(t.sym, tuple(substitute(a, sigma) for a in t.args))


def compose(first: Subst, second: Subst) -> dict[str, Term]:
    """Substitution equal to applying `first` then `second`."""
    out: dict[str, Term] = {}
    for x, t in first.items():
        u = substitute(t, second)
        if u != Var(x):
            out[x] = u
    for x, t in second.items():
        if x not in first and t != Var(x):
            out[x] = t
    return out


def match(pattern: Term, subject: Term) -> Optional[dict[str, Term]]:
    """Minimal substitution with pattern*sigma == subject, or None."""
    binding: dict[str, Term] = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            seen = binding.setdefault(p.name, s)
            if seen != s:
                return None
        elif isinstance(s, Var) or p.sym != s.sym or len(p.args) != len(s.args):
            return None
        else:
            stack.extend(zip(p.args, s.args))
    return {x: t for x, t in binding.items() if t != Var(x)}


def mgu(s: Term, t: Term) -> Optional[dict[str, Term]]:
    """Idempotent most general unifier of `s` and `t`, or None.

    Occurs check included; on a variable/variable equation the left
    variable is eliminated.
    """
    subst: dict[str, Term] = {}
    queue = [(s, t)]
    while queue:
        a, b = queue.pop(0)
        a, b = substitute(a, subst), substitute(b, subst)
        if a == b:
            continue
        if isinstance(b, Var) and not isinstance(a, Var):
            a, b = b, a
        if isinstance(a, Var):
            if a.name in variables(b):
                return None
            one = {a.name: b}
            subst = compose(subst, one)
            subst[a.name] = b
        else:
            assert isinstance(b, App)
            if a.sym != b.sym or len(a.args) != len(b.args):
                return None
            queue.extend(zip(a.args, b.args))
    return subst


def unifiable_rational(s: Term, t: Term) -> bool:
    """Unifiability of `s` and `t` over infinite (rational) trees.

    Syntactic unification without the occurs check: a union-find over the
    subterm equations detects symbol clashes, cycles are permitted.
    """
    parent: dict[Term, Term] = {}

    def find(u: Term) -> Term:
        while parent.get(u, u) != u:
            parent[u] = parent.get(parent[u], parent[u])
            u = parent[u]
        return u

    pairs = [(s, t)]
    while pairs:
        a, b = pairs.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if isinstance(ra, App) and isinstance(rb, App):
            if ra.sym != rb.sym or len(ra.args) != len(rb.args):
                return False
            parent[rb] = ra
            pairs.extend(zip(ra.args, rb.args))
        elif isinstance(ra, App):
            parent[rb] = ra
        else:
            parent[ra] = rb
    return True


def fresh_name(base: str, used: set[str]) -> str:
    """First name of the form base, base1, base2, ... not in `used`."""
    if base not in used:
        return base
    k = 1
    while f"{base}{k}" in used:
        k += 1
    return f"{base}{k}"


def renaming_apart(names: Iterable[str], used: set[str]) -> dict[str, Term]:
    """Rename `names` away from `used`, extending `used` as it goes."""
    out: dict[str, Term] = {}
    for n in names:
        if n in used:
            m = fresh_name(n, used)
            out[n] = Var(m)
            used.add(m)
        else:
            used.add(n)
    return out


def canonical_renaming(ts: Iterable[Term], keep: frozenset[str] = frozenset(),
                       prefix: str = "V") -> dict[str, Term]:
    """Renaming of the variables of `ts` (except `keep`) to V1, V2, ...

    Numbering follows first occurrence over the term sequence, so terms
    equal up to renaming of non-kept variables get equal images.
    """
    out: dict[str, Term] = {}
    k = 0
    for t in ts:
        for name in var_occurrences(t):
            if name in keep or name in out:
                continue
            k += 1
            while f"{prefix}{k}" in keep:
                k += 1
            out[name] = Var(f"{prefix}{k}")
    return out


def canonical_term(t: Term, keep: frozenset[str] = frozenset()) -> Term:
    return substitute(t, canonical_renaming([t], keep))
