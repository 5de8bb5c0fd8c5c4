"""Seeded random generators for well-scoped and well-typed terms.

Well-typed generation is rule-directed: a simple type is generated first
and an inhabitant is built for it, so every emitted term checks by
construction.  Types are represented as terms; context entries are shifted
when binders are crossed.
"""

from __future__ import annotations

import random

from tltt import syntax as S
from tltt.syntax import Term, shift


def rand_scoped(rng: random.Random, depth: int = 0, size: int = 6) -> Term:
    """An arbitrary well-scoped term (not necessarily well-typed)."""
    atoms = [S.Star(), S.Zero(), S.ZeroS(), S.Unit(), S.Nat(), S.NatS(),
             S.Empty(), S.EmptyS(), S.Refl(), S.ReflS(),
             S.Univ(S.fibrant(rng.randrange(3))), S.Univ(S.strict(rng.randrange(3)))]
    if size <= 1:
        if depth and rng.random() < 0.5:
            return S.Var(rng.randrange(depth))
        return rng.choice(atoms)
    part = lambda k=2: max(1, (size - 1) // k)
    pick = rng.randrange(14)
    if pick == 0:
        return S.Lam(rand_scoped(rng, depth + 1, size - 1), hint="x")
    if pick == 1:
        return S.Pi(rand_scoped(rng, depth, part()),
                    rand_scoped(rng, depth + 1, part()), hint="a")
    if pick == 2:
        return S.Sigma(rand_scoped(rng, depth, part()),
                       rand_scoped(rng, depth + 1, part()), hint="b")
    if pick == 3:
        return S.App(rand_scoped(rng, depth, part()), rand_scoped(rng, depth, part()))
    if pick == 4:
        return S.Pair(rand_scoped(rng, depth, part()), rand_scoped(rng, depth, part()))
    if pick == 5:
        return rng.choice([S.Fst, S.Snd])(rand_scoped(rng, depth, size - 1))
    if pick == 6:
        return rng.choice([S.Succ, S.SuccS])(rand_scoped(rng, depth, size - 1))
    if pick == 7:
        return rng.choice([S.Sum, S.SumS])(rand_scoped(rng, depth, part()),
                                           rand_scoped(rng, depth, part()))
    if pick == 8:
        return rng.choice([S.Inl, S.Inr, S.InlS, S.InrS])(
            rand_scoped(rng, depth, size - 1))
    if pick == 9:
        mk = rng.choice([S.Id, S.IdS])
        return mk(None, rand_scoped(rng, depth, part()),
                  rand_scoped(rng, depth, part()))
    if pick == 10:
        mk = rng.choice([S.NatElim, S.NatElimS])
        return mk(*(rand_scoped(rng, depth, part(4)) for _ in range(4)))
    if pick == 11:
        mk = rng.choice([S.SumElim, S.SumElimS])
        return mk(*(rand_scoped(rng, depth, part(4)) for _ in range(4)))
    if pick == 12:
        mk = rng.choice([S.IdElim, S.IdElimS])
        return mk(*(rand_scoped(rng, depth, part(5)) for _ in range(5)))
    return S.UipS(rand_scoped(rng, depth, part()), rand_scoped(rng, depth, part()))


# -- well-typed generation ---------------------------------------------------
# Contexts are lists of type terms, innermost last, each scoped at its own
# binding depth (entry i is well-scoped under i binders).

def _ctx_types(ctx: list[Term]) -> list[tuple[int, Term]]:
    """(de Bruijn index, type shifted to current depth) for each entry."""
    out = []
    depth = len(ctx)
    for i, ty in enumerate(ctx):
        index = depth - 1 - i
        out.append((index, shift(ty, index + 1)))
    return out


def gen_type(rng: random.Random, ctx: list[Term], size: int) -> Term:
    """A closed-form inhabited fibrant-or-strict simple type in context."""
    if size <= 1:
        return rng.choice([S.Unit(), S.Nat(), S.NatS()])
    pick = rng.randrange(8)
    part = max(1, size // 2)
    if pick == 0:
        dom = gen_type(rng, ctx, part)
        cod = gen_type(rng, ctx + [dom], part)
        return S.Pi(dom, cod, hint="x")
    if pick == 1:
        fst = gen_type(rng, ctx, part)
        snd = gen_type(rng, ctx + [fst], part)
        return S.Sigma(fst, snd, hint="p")
    if pick == 2:
        return S.Sum(_fibrant_type(rng, ctx, part), _fibrant_type(rng, ctx, part))
    if pick == 3:
        carrier = _fibrant_type(rng, ctx, part)
        endpoint = gen_term(rng, ctx, carrier, part)
        return S.Id(carrier, endpoint, endpoint)
    if pick == 4:
        carrier = gen_type(rng, ctx, part)
        endpoint = gen_term(rng, ctx, carrier, part)
        return S.IdS(carrier, endpoint, endpoint)
    return rng.choice([S.Unit(), S.Nat(), S.NatS()])


def _fibrant_type(rng: random.Random, ctx: list[Term], size: int) -> Term:
    while True:
        ty = gen_type(rng, ctx, size)
        if not isinstance(ty, (S.NatS, S.IdS)) and not S.strict_constructors(ty):
            return ty


def gen_term(rng: random.Random, ctx: list[Term], ty: Term, size: int) -> Term:
    """An inhabitant of `ty` (as produced by gen_type) in `ctx`."""
    if size > 1 and rng.random() < 0.12:
        # wrap in an ascribed beta redex, preserving the type
        inner = gen_term(rng, ctx, ty, size - 1)
        return S.App(S.Lam(S.Var(0), ann=ty, hint="x"), inner)
    if rng.random() < 0.3:
        for index, entry_ty in _ctx_types(ctx):
            if entry_ty == ty:
                return S.Var(index)
    match ty:
        case S.Unit():
            return S.Star()
        case S.Nat() | S.NatS():
            strict = isinstance(ty, S.NatS)
            zero, succ = (S.ZeroS(), S.SuccS) if strict else (S.Zero(), S.Succ)
            n = rng.randrange(max(size, 1))
            t: Term = zero
            for _ in range(n):
                t = succ(t)
            if size > 2 and rng.random() < 0.2:
                # eliminate a smaller numeral instead of writing one directly
                mk = S.NatElimS if strict else S.NatElim
                motive = S.Lam(shift(ty, 1), ann=ty, hint="n")
                stp = S.Lam(S.Lam(succ(S.Var(0)), hint="r"),
                            ann=ty, hint="n")
                return mk(motive, t, stp, gen_term(rng, ctx, ty, size // 2))
            return t
        case S.Pi(dom=dom, cod=cod):
            body = gen_term(rng, ctx + [dom], cod, max(1, size - 1))
            return S.Lam(body, hint="x")
        case S.Sigma(fst=fst, snd=snd):
            a = gen_term(rng, ctx, fst, max(1, size // 2))
            return S.Pair(a, gen_term(rng, ctx, S.subst(snd, 0, a), max(1, size // 2)))
        case S.Sum(left=l, right=r):
            if rng.random() < 0.5:
                return S.Inl(gen_term(rng, ctx, l, max(1, size - 1)))
            return S.Inr(gen_term(rng, ctx, r, max(1, size - 1)))
        case S.Id() | S.IdS():
            return S.ReflS() if isinstance(ty, S.IdS) else S.Refl()
    raise AssertionError(f"no inhabitant strategy for {ty}")


def gen_well_typed(rng: random.Random, size: int = 5) -> tuple[Term, Term]:
    """A closed well-typed (term, type-term) pair."""
    ty = gen_type(rng, [], size)
    return gen_term(rng, [], ty, size), ty
