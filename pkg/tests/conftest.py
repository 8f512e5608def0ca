import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from uncprover.terms import App, Term, Var

settings.register_profile(
    "det", derandomize=True, max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("det")


# term builders shared by the whole suite
def f(*args):
    return App("f", args)


def g(*args):
    return App("g", args)


def h(*args):
    return App("h", args)


def c1(*args):
    return App("c", args)


x, y, z = Var("x"), Var("y"), Var("z")
a, b, c, d = App("a"), App("b"), App("c"), App("d")


@pytest.fixture
def rng():
    return random.Random(20240817)


def leaf_terms(var_names=("x", "y")):
    return st.sampled_from([Var(v) for v in var_names] + [App("a"), App("b")])


def term_strategy(var_names=("x", "y"), max_leaves=6):
    return st.recursive(
        leaf_terms(var_names),
        lambda kids: st.one_of(
            st.builds(lambda l, r: App("f", (l, r)), kids, kids),
            st.builds(lambda t: App("g", (t,)), kids)),
        max_leaves=max_leaves)


def random_term(rnd: random.Random, var_names=("x", "y"), depth=2) -> Term:
    syms = [("f", 2), ("g", 1), ("a", 0), ("b", 0)]
    if depth == 0 or rnd.random() < 0.35:
        if var_names and rnd.random() < 0.5:
            return Var(rnd.choice(var_names))
        return App(rnd.choice(["a", "b"]))
    sym, ar = rnd.choice(syms)
    return App(sym, tuple(random_term(rnd, var_names, depth - 1) for _ in range(ar)))
