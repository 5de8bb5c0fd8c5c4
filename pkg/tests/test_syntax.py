"""Core syntax: shift, subst, sort subsumption, structural alpha-equality."""

import random

from hypothesis import given, strategies as st

from tltt import syntax as S
from tltt.syntax import (Sort, Var, Lam, App, Pi, Const, Star, Nat, Zero,
                         combine_sorts, fibrant, shift, sort_sub, strict, subst)

# -- a tiny named-variable reference implementation (the oracle for the
#    de Bruijn operations on the lambda/pi fragment)

_FRESH = [0]


def _fresh() -> str:
    _FRESH[0] += 1
    return f"v{_FRESH[0]}"


def to_named(t, scope):
    match t:
        case S.Var(index=i):
            return ("var", scope[-1 - i])
        case S.Lam(body=b):
            x = _fresh()
            return ("lam", x, to_named(b, scope + [x]))
        case S.Pi(dom=d, cod=c):
            x = _fresh()
            return ("pi", x, to_named(d, scope), to_named(c, scope + [x]))
        case S.App(fn=f, arg=a):
            return ("app", to_named(f, scope), to_named(a, scope))
        case _:
            return ("atom", t)


def from_named(n, scope):
    match n:
        case ("var", x):
            return Var(scope[::-1].index(x))
        case ("lam", x, b):
            return Lam(from_named(b, scope + [x]))
        case ("pi", x, d, c):
            return Pi(from_named(d, scope), from_named(c, scope + [x]))
        case ("app", f, a):
            return App(from_named(f, scope), from_named(a, scope))
        case ("atom", t):
            return t


def named_subst(n, x, repl):
    match n:
        case ("var", y):
            return repl if y == x else n
        case ("lam", y, b):
            return ("lam", y, named_subst(b, x, repl))
        case ("pi", y, d, c):
            return ("pi", y, named_subst(d, x, repl), named_subst(c, x, repl))
        case ("app", f, a):
            return ("app", named_subst(f, x, repl), named_subst(a, x, repl))
        case _:
            return n


def _lam_fragment(rng, depth, size):
    if size <= 1:
        if depth and rng.random() < 0.7:
            return Var(rng.randrange(depth))
        return rng.choice([Star(), Nat(), Zero(), Const("c")])
    pick = rng.randrange(4)
    half = max(1, size // 2)
    if pick == 0:
        return Lam(_lam_fragment(rng, depth + 1, size - 1))
    if pick == 1:
        return Pi(_lam_fragment(rng, depth, half), _lam_fragment(rng, depth + 1, half))
    return App(_lam_fragment(rng, depth, half), _lam_fragment(rng, depth, half))


# -- shift ---------------------------------------------------------------------

def test_shift_free_variable():
    assert shift(Var(0), 1, 0) == Var(1)


def test_shift_bound_variable_fixed():
    assert shift(Lam(Var(0)), 5, 0) == Lam(Var(0))


def test_shift_free_under_binder_against_named_reference():
    # the same term seen through named variables: \x. a  with a free
    t = Lam(Var(1))
    named = to_named(t, ["a"])
    assert from_named(named, ["a", "new"]) == shift(t, 1, 0) == Lam(Var(2))


def test_shift_zero_is_identity_sampled():
    rng = random.Random(7)
    for _ in range(300):
        t = _lam_fragment(rng, 3, rng.randrange(1, 10))
        assert shift(t, 0, rng.randrange(3)) == t


def test_shift_against_named_reference_sampled():
    rng = random.Random(8)
    for _ in range(300):
        t = _lam_fragment(rng, 2, rng.randrange(1, 10))
        named = to_named(t, ["a", "b"])
        assert from_named(named, ["a", "b", "new"]) == shift(t, 1, 0)


# -- subst --------------------------------------------------------------------

def test_subst_variable():
    assert subst(Var(0), 0, Star()) == Star()


def test_subst_under_binder():
    t = Lam(App(Var(1), Var(0)))
    assert subst(t, 0, Const("f")) == Lam(App(Const("f"), Var(0)))


def test_subst_dependent_pi_against_named_reference():
    t = Pi(Var(0), Var(1))
    got = subst(t, 0, Nat())
    assert got == Pi(Nat(), Nat())
    named = named_subst(to_named(t, ["a"]), "a", ("atom", Nat()))
    assert from_named(named, []) == got


def test_subst_of_shifted_variable_is_identity_sampled():
    rng = random.Random(9)
    for _ in range(300):
        t = _lam_fragment(rng, 2, rng.randrange(1, 10))
        u = _lam_fragment(rng, 2, rng.randrange(1, 6))
        assert subst(shift(t, 1, 0), 0, u) == t


def test_subst_against_named_reference_sampled():
    rng = random.Random(10)
    for _ in range(300):
        body = _lam_fragment(rng, 2, rng.randrange(1, 10))
        repl = _lam_fragment(rng, 1, rng.randrange(1, 6))
        # body under ["a", "x"]; substitute x := repl (scoped under ["a"])
        named = named_subst(to_named(body, ["a", "x"]), "x", to_named(repl, ["a"]))
        assert from_named(named, ["a"]) == subst(body, 0, repl)


# -- sorts --------------------------------------------------------------------

def test_sort_sub_examples():
    assert sort_sub(fibrant(0), strict(0))
    assert not sort_sub(strict(0), fibrant(0))
    assert not sort_sub(fibrant(1), fibrant(0))
    assert sort_sub(fibrant(0), fibrant(2))
    assert sort_sub(strict(1), strict(3))


sorts = st.builds(Sort,
                  st.sampled_from([S.FIBRANT, S.STRICT]),
                  st.integers(min_value=0, max_value=5))


@given(sorts)
def test_sort_sub_reflexive(a):
    assert sort_sub(a, a)


@given(sorts, sorts, sorts)
def test_sort_sub_transitive(a, b, c):
    if sort_sub(a, b) and sort_sub(b, c):
        assert sort_sub(a, c)


@given(sorts, sorts)
def test_sort_sub_antisymmetric(a, b):
    if sort_sub(a, b) and sort_sub(b, a):
        assert a == b


@given(sorts, sorts)
def test_combine_is_upper_bound(a, b):
    c = combine_sorts(a, b)
    assert sort_sub(a, c) or not a.is_fibrant
    assert c.level == max(a.level, b.level)
    assert c.is_fibrant == (a.is_fibrant and b.is_fibrant)


# -- structural equality is alpha-equality -------------------------------------

def test_alpha_equality_ignores_hints_spans_and_annotations():
    sp = S.Span("f", 1, 1, 1, 2)
    assert Lam(Var(0), hint="x") == Lam(Var(0), hint="y")
    assert Var(0, span=sp) == Var(0)
    assert S.Id(Nat(), Zero(), Zero()) == S.Id(None, Zero(), Zero())
    assert Lam(Var(0), ann=Nat()) == Lam(Var(0))
    assert hash(Var(0, span=sp)) == hash(Var(0))


def test_alpha_equality_is_structural():
    assert Lam(Lam(Var(1))) != Lam(Lam(Var(0)))
    assert Pi(Nat(), Var(0)) != Pi(Nat(), Nat())
