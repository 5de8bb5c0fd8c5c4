"""Bidirectional elaboration with fibrancy tracking.

Type inference returns the least sort of every type expression; check mode
applies cumulative subsumption (fibrant universes embed in strict ones,
levels rise).  Inner equality, sums, naturals and the empty type insist on
fibrant data; their strict twins accept any pretype.  Eliminator motives
into the inner layer must land in a fibrant universe unless the strict
eliminator is used (or, for the merged formers, strong mode is on).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

from tltt import nbe
from tltt import syntax as S
from tltt import diagnostics as D
from tltt.diagnostics import CheckError, fail
from tltt.printer import pretty_print
from tltt.syntax import Sort, Span, Term, combine_sorts, fibrant, sort_sub, strict


@dataclass(frozen=True)
class Flags:
    strong: bool = False
    strict_pi: bool = False
    trace: bool = False


@dataclass(frozen=True)
class Entry:
    name: Optional[str]
    ty: object  # Value
    sort: Optional[Sort]


class Context:
    """Telescope of binder entries over a global signature."""

    def __init__(self, sig, flags: Flags = Flags(), entries: tuple = (), env=None):
        self.sig = sig
        self.flags = flags
        self.entries = entries
        self.env = env if env is not None else nbe.empty_env(sig)

    @property
    def depth(self) -> int:
        return len(self.entries)

    @property
    def strict_pi(self) -> bool:
        return self.flags.strict_pi

    def extend(self, name: Optional[str], ty, sort: Optional[Sort]) -> "Context":
        var = nbe.fresh_var(self.depth, ty)
        return Context(self.sig, self.flags, self.entries + (Entry(name, ty, sort),),
                       nbe.extend(self.env, var))

    def lookup(self, index: int) -> Entry:
        return self.entries[-1 - index]

    def var_value(self, index: int):
        return self.env.lookup(index)

    def names(self) -> list[str]:
        return [e.name or "_" for e in self.entries]

    def show(self, v) -> str:
        return pretty_print(nbe.quote(self.depth, v), self.names())

    def show_term(self, t: Term) -> str:
        return pretty_print(t, self.names())


def new_context(flags: Flags = Flags(), budget: Optional[int] = None) -> Context:
    sig = nbe.Signature([budget] if budget is not None else None)
    return Context(sig, flags)


# -- strong mode: merge the strict formers into the fibrant ones ----------------

_MERGE = {
    S.NatS: S.Nat, S.ZeroS: S.Zero, S.EmptyS: S.Empty,
}


def merge_strict_formers(t: Term) -> Term:
    """Strong-mode identification of NatS/ZeroS/SuccS, EmptyS, SumS (and their
    eliminators) with the fibrant formers.  Strict equality is untouched."""
    cls = type(t)
    if cls in _MERGE:
        return _MERGE[cls](span=t.span)
    if cls is S.SuccS:
        return S.Succ(merge_strict_formers(t.pred), span=t.span)
    if cls is S.NatElimS:
        return S.NatElim(*(merge_strict_formers(getattr(t, f))
                           for f in ("motive", "base", "step", "target")), span=t.span)
    if cls is S.EmptyElimS:
        return S.EmptyElim(merge_strict_formers(t.motive),
                           merge_strict_formers(t.target), span=t.span)
    if cls is S.SumS:
        return S.Sum(merge_strict_formers(t.left), merge_strict_formers(t.right),
                     span=t.span)
    if cls is S.InlS:
        return S.Inl(merge_strict_formers(t.value), span=t.span)
    if cls is S.InrS:
        return S.Inr(merge_strict_formers(t.value), span=t.span)
    if cls is S.SumElimS:
        return S.SumElim(*(merge_strict_formers(getattr(t, f))
                           for f in ("motive", "on_inl", "on_inr", "target")),
                         span=t.span)
    changes = {}
    for name, child, _ in S.term_children(t):
        new = merge_strict_formers(child)
        if new is not child:
            changes[name] = new
    return dataclasses.replace(t, **changes) if changes else t


# -- inference ------------------------------------------------------------------

def infer(ctx: Context, t: Term) -> tuple[Term, object]:
    """Elaborate `t`, returning the completed term and its inferred type value."""
    match t:
        case S.Var(index=i):
            if not 0 <= i < ctx.depth:
                raise fail(D.UNBOUND_VARIABLE, f"variable index {i} out of scope", t.span)
            return t, ctx.lookup(i).ty
        case S.Const(name=n):
            entry = ctx.sig.lookup(n)
            if entry is None:
                raise fail(D.UNBOUND_VARIABLE, f"unknown constant {n}", t.span)
            return t, entry.ty
        case S.Univ(sort=s):
            return t, nbe.VUniv(Sort(s.fragment, s.level + 1))
        case S.Pi(dom=dom, cod=cod):
            dom2, s1 = infer_universe(ctx, dom)
            inner = ctx.extend(t.hint, nbe.eval_in(ctx, dom2), s1)
            cod2, s2 = infer_universe(inner, cod)
            return (S.Pi(dom2, cod2, hint=t.hint, span=t.span),
                    nbe.VUniv(combine_sorts(s1, s2)))
        case S.Sigma(fst=fst, snd=snd):
            fst2, s1 = infer_universe(ctx, fst)
            inner = ctx.extend(t.hint, nbe.eval_in(ctx, fst2), s1)
            snd2, s2 = infer_universe(inner, snd)
            return (S.Sigma(fst2, snd2, hint=t.hint, span=t.span),
                    nbe.VUniv(combine_sorts(s1, s2)))
        case S.Lam(body=body, ann=ann):
            if ann is None:
                raise fail(D.INFERENCE_FAILURE,
                           "cannot infer the type of an unannotated lambda", t.span)
            ann2, s = infer_universe(ctx, ann)
            dom_v = nbe.eval_in(ctx, ann2)
            inner = ctx.extend(t.hint, dom_v, s)
            body2, body_ty = infer(inner, body)
            cod_term = nbe.quote(inner.depth, body_ty)
            return (S.Lam(body2, ann=ann2, hint=t.hint, span=t.span),
                    nbe.VPi(dom_v, nbe.Closure(ctx.env, cod_term), t.hint))
        case S.App(fn=fn, arg=arg):
            fn2, fn_ty = infer(ctx, fn)
            if not isinstance(fn_ty, nbe.VPi):
                raise fail(D.CONVERSION_FAILURE, "application of a non-function",
                           t.span, expected="a function type", actual=ctx.show(fn_ty))
            arg2 = check(ctx, arg, fn_ty.dom)
            return (S.App(fn2, arg2, span=t.span),
                    nbe.inst(fn_ty.cod, nbe.eval_in(ctx, arg2)))
        case S.Pair():
            raise fail(D.INFERENCE_FAILURE,
                       "cannot infer the type of a bare pair; ascribe it", t.span)
        case S.Fst(pair=p):
            p2, p_ty = infer(ctx, p)
            if not isinstance(p_ty, nbe.VSigma):
                raise fail(D.CONVERSION_FAILURE, "first projection of a non-pair",
                           t.span, expected="a pair type", actual=ctx.show(p_ty))
            return S.Fst(p2, span=t.span), p_ty.fst
        case S.Snd(pair=p):
            p2, p_ty = infer(ctx, p)
            if not isinstance(p_ty, nbe.VSigma):
                raise fail(D.CONVERSION_FAILURE, "second projection of a non-pair",
                           t.span, expected="a pair type", actual=ctx.show(p_ty))
            return (S.Snd(p2, span=t.span),
                    nbe.inst(p_ty.snd, nbe.do_fst(nbe.eval_in(ctx, p2))))
        case S.Unit() | S.Nat() | S.Empty():
            return t, nbe.VUniv(fibrant(0))
        case S.NatS() | S.EmptyS():
            return t, nbe.VUniv(strict(0))
        case S.Star():
            return t, nbe.UNIT
        case S.Zero():
            return t, nbe.NAT
        case S.ZeroS():
            return t, nbe.NAT_S
        case S.Succ(pred=p):
            return S.Succ(check(ctx, p, nbe.NAT), span=t.span), nbe.NAT
        case S.SuccS(pred=p):
            return S.SuccS(check(ctx, p, nbe.NAT_S), span=t.span), nbe.NAT_S
        case S.Sum(left=l, right=r):
            l2, s1 = infer_universe(ctx, l)
            r2, s2 = infer_universe(ctx, r)
            if not ctx.flags.strong:
                for side, s in ((l, s1), (r, s2)):
                    if not s.is_fibrant:
                        raise fail(D.FIBRANCY_VIOLATION,
                                   "sum formation requires fibrant summands",
                                   side.span or t.span, expected="a fibrant type",
                                   actual=ctx.show_term(side))
                sort = fibrant(max(s1.level, s2.level))
            else:
                sort = combine_sorts(s1, s2)
            return S.Sum(l2, r2, span=t.span), nbe.VUniv(sort)
        case S.SumS(left=l, right=r):
            l2, s1 = infer_universe(ctx, l)
            r2, s2 = infer_universe(ctx, r)
            return (S.SumS(l2, r2, span=t.span),
                    nbe.VUniv(strict(max(s1.level, s2.level))))
        case S.Inl() | S.Inr() | S.InlS() | S.InrS():
            raise fail(D.INFERENCE_FAILURE,
                       "cannot infer the type of an injection; ascribe it", t.span)
        case S.Id(ty=ty, lhs=lhs, rhs=rhs):
            return _infer_equality(ctx, t, ty, lhs, rhs, is_strict=False)
        case S.IdS(ty=ty, lhs=lhs, rhs=rhs):
            return _infer_equality(ctx, t, ty, lhs, rhs, is_strict=True)
        case S.Refl() | S.ReflS():
            raise fail(D.INFERENCE_FAILURE,
                       "cannot infer the endpoints of a reflexivity proof", t.span)
        case S.NatElim() | S.NatElimS():
            return _infer_natelim(ctx, t)
        case S.SumElim() | S.SumElimS():
            return _infer_sumelim(ctx, t)
        case S.EmptyElim() | S.EmptyElimS():
            return _infer_emptyelim(ctx, t)
        case S.IdElim() | S.IdElimS():
            return _infer_idelim(ctx, t)
        case S.UipS(p=p, q=q):
            p2, p_ty = infer(ctx, p)
            if not (isinstance(p_ty, nbe.VId) and p_ty.strict):
                raise fail(D.CONVERSION_FAILURE,
                           "Ks expects proofs of a strict equality", t.span,
                           expected="a strict equality type", actual=ctx.show(p_ty))
            q2 = check(ctx, q, p_ty)
            return (S.UipS(p2, q2, span=t.span),
                    nbe.VId(p_ty, nbe.eval_in(ctx, p2), nbe.eval_in(ctx, q2), True))
    raise fail(D.INFERENCE_FAILURE, f"cannot infer {type(t).__name__}", t.span)


def infer_universe(ctx: Context, t: Term) -> tuple[Term, Sort]:
    """Elaborate a term expected to be a type; returns it with its least sort."""
    t2, ty = infer(ctx, t)
    if isinstance(ty, nbe.VUniv):
        return t2, ty.sort
    raise fail(D.UNIVERSE_ERROR, "expected a type", t.span,
               expected="an element of some universe", actual=ctx.show(ty))


def classify(ctx: Context, type_term: Term) -> Sort:
    """Least sort classifying `type_term`; fibrancy is `classify(...).is_fibrant`."""
    return infer_universe(ctx, type_term)[1]


def value_sort(ctx: Context, ty, depth: Optional[int] = None, span=None) -> Sort:
    """Least sort of a type value, mirroring inference on the value level.

    Neutrals rely on the type annotations threaded through evaluation; a
    variable X : U i classifies as Fibrant i, X : Us i as Strict i.
    """
    if depth is None:
        depth = ctx.depth
    if isinstance(ty, nbe.VUniv):
        return Sort(ty.sort.fragment, ty.sort.level + 1)
    if isinstance(ty, nbe.VPi):
        s1 = value_sort(ctx, ty.dom, depth, span)
        s2 = value_sort(ctx, nbe.inst(ty.cod, nbe.fresh_var(depth, ty.dom)),
                        depth + 1, span)
        return combine_sorts(s1, s2)
    if isinstance(ty, nbe.VSigma):
        s1 = value_sort(ctx, ty.fst, depth, span)
        s2 = value_sort(ctx, nbe.inst(ty.snd, nbe.fresh_var(depth, ty.fst)),
                        depth + 1, span)
        return combine_sorts(s1, s2)
    if isinstance(ty, (nbe.VUnit, nbe.VStar)):
        return fibrant(0)
    if isinstance(ty, (nbe.VNat, nbe.VEmpty)):
        return strict(0) if ty.strict else fibrant(0)
    if isinstance(ty, nbe.VSum):
        s1 = value_sort(ctx, ty.left, depth, span)
        s2 = value_sort(ctx, ty.right, depth, span)
        level = max(s1.level, s2.level)
        return strict(level) if ty.strict else fibrant(level)
    if isinstance(ty, nbe.VId):
        level = value_sort(ctx, ty.ty, depth, span).level if ty.ty is not None else 0
        return strict(level) if ty.strict else fibrant(level)
    if isinstance(ty, nbe.VNeutral):
        ann = ty.ty
        if ann is None and isinstance(ty.head, nbe.HVar) and not ty.spine:
            if ty.head.level < ctx.depth:
                ann = ctx.entries[ty.head.level].ty
        if isinstance(ann, nbe.VUniv):
            return ann.sort
        raise fail(D.UNIVERSE_ERROR,
                   "cannot determine the universe of a neutral type", span)
    raise fail(D.UNIVERSE_ERROR, "expected a type value", span)


def _infer_equality(ctx, t, ty, lhs, rhs, *, is_strict):
    former = "strict equality" if is_strict else "equality"
    if ty is None:
        try:
            lhs2, carrier = infer(ctx, lhs)
        except CheckError as err:
            if err.diagnostic.code == D.INFERENCE_FAILURE:
                raise fail(D.INFERENCE_FAILURE,
                           f"cannot infer the carrier type of an {former}; "
                           "ascribe one endpoint", t.span)
            raise
        ty2 = nbe.quote(ctx.depth, carrier)
        sort = value_sort(ctx, carrier, span=t.span)
    else:
        ty2, sort = infer_universe(ctx, ty)
        carrier = nbe.eval_in(ctx, ty2)
        lhs2 = check(ctx, lhs, carrier)
    if not is_strict and not sort.is_fibrant:
        raise fail(D.NON_FIBRANT_EQUALITY_FORMATION,
                   "the inner equality can only be formed over a fibrant type",
                   t.span, expected="a fibrant type",
                   actual=f"{ctx.show_term(ty2)} : {sort}")
    rhs2 = check(ctx, rhs, carrier)
    mk = S.IdS if is_strict else S.Id
    result_sort = strict(sort.level) if is_strict else fibrant(sort.level)
    return mk(ty2, lhs2, rhs2, span=t.span), nbe.VUniv(result_sort)


# -- eliminators ------------------------------------------------------------------

def _infer_motive(ctx: Context, motive: Term, dom_builders) -> tuple[Term, object]:
    """Infer an eliminator motive.  Bare lambdas are allowed: the eliminator
    dictates the family's domains, so only the codomain needs inference.
    `dom_builders` produce each domain value from the context extended with
    the preceding motive variables."""
    if not (isinstance(motive, S.Lam) and motive.ann is None and dom_builders):
        return infer(ctx, motive)
    dom_v = dom_builders[0](ctx)
    inner = ctx.extend(motive.hint, dom_v, _sort_of_type_value(ctx, dom_v))
    body2, body_ty = _infer_motive(inner, motive.body, dom_builders[1:])
    cod_term = nbe.quote(inner.depth, body_ty)
    return (S.Lam(body2, ann=None, hint=motive.hint, span=motive.span),
            nbe.VPi(dom_v, nbe.Closure(ctx.env, cod_term), motive.hint))


def _motive_waived(ctx: Context, is_strict: bool) -> bool:
    return is_strict or ctx.flags.strong


def _expect_universe_value(ctx, v, span, what):
    if isinstance(v, nbe.VUniv):
        return v.sort
    raise fail(D.UNIVERSE_ERROR, f"{what} must land in a universe", span,
               expected="a universe", actual=ctx.show(v))


def _check_motive_sort(ctx, sort: Sort, eliminator: str, span) -> None:
    if not sort.is_fibrant:
        raise fail(D.NON_FIBRANT_MOTIVE,
                   f"{eliminator} can only eliminate into families of fibrant types; "
                   f"the motive lands in {sort}", span)


def check_motive_fibrancy(ctx: Context, eliminator: str, motive: Term) -> None:
    """Reject non-fibrant motives for the inner eliminators (J, natElim,
    sumElim, emptyElim).  Strict eliminators bypass the check, as do the
    merged formers in strong mode."""
    arity = {"J": 3, "NatElim": 1, "SumElim": 1, "EmptyElim": 1}[eliminator]
    _, m_ty = infer(ctx, motive)
    sort = _peel_motive(ctx, m_ty, arity, motive.span)
    _check_motive_sort(ctx, sort, eliminator, motive.span)


def _peel_motive(ctx, m_ty, arity, span) -> Sort:
    depth = ctx.depth
    for _ in range(arity):
        if not isinstance(m_ty, nbe.VPi):
            raise fail(D.UNIVERSE_ERROR, "motive has too few arguments", span,
                       expected="a family over the eliminated data",
                       actual=ctx.show(m_ty))
        m_ty = nbe.inst(m_ty.cod, nbe.fresh_var(depth, m_ty.dom))
        depth += 1
    return _expect_universe_value(ctx, m_ty, span, "the motive")


def _infer_natelim(ctx, t):
    is_strict = isinstance(t, S.NatElimS)
    nat = nbe.NAT_S if is_strict else nbe.NAT
    motive2, m_ty = _infer_motive(ctx, t.motive, [lambda c: nat])
    if not (isinstance(m_ty, nbe.VPi)
            and nbe.conv(ctx.depth, m_ty.dom, nat, None, ctx.strict_pi)):
        raise fail(D.CONVERSION_FAILURE, "the motive must be a family over the naturals",
                   t.motive.span or t.span,
                   expected=("NatS -> ..." if is_strict else "Nat -> ..."),
                   actual=ctx.show(m_ty))
    sort = _peel_motive(ctx, m_ty, 1, t.motive.span or t.span)
    if not _motive_waived(ctx, is_strict):
        _check_motive_sort(ctx, sort, "natElim", t.motive.span or t.span)
    m_v = nbe.eval_in(ctx, motive2)
    zero = nbe.ZERO_S if is_strict else nbe.ZERO
    base2 = check(ctx, t.base, nbe.apply_value(m_v, zero))
    step_ty = nbe.VPi(nat, nbe.HostClosure(
        lambda n: nbe.VPi(nbe.apply_value(m_v, n), nbe.HostClosure(
            lambda _r: nbe.apply_value(m_v, nbe.VSucc(n, is_strict))))))
    step2 = check(ctx, t.step, step_ty)
    target2 = check(ctx, t.target, nat)
    mk = S.NatElimS if is_strict else S.NatElim
    return (mk(motive2, base2, step2, target2, span=t.span),
            nbe.apply_value(m_v, nbe.eval_in(ctx, target2)))


def _infer_sumelim(ctx, t):
    is_strict = isinstance(t, S.SumElimS)
    builders = []
    if isinstance(t.motive, S.Lam) and t.motive.ann is None:
        # a bare-lambda motive: read the family's domain off the target
        _, target_ty = infer(ctx, t.target)
        if not (isinstance(target_ty, nbe.VSum) and target_ty.strict == is_strict):
            raise fail(D.CONVERSION_FAILURE, "sum elimination of a non-sum",
                       t.target.span or t.span, actual=ctx.show(target_ty))
        builders = [lambda c: target_ty]
    motive2, m_ty = _infer_motive(ctx, t.motive, builders)
    if not (isinstance(m_ty, nbe.VPi) and isinstance(m_ty.dom, nbe.VSum)
            and m_ty.dom.strict == is_strict):
        raise fail(D.CONVERSION_FAILURE, "the motive must be a family over a sum type",
                   t.motive.span or t.span,
                   expected="(... +s ...) -> ..." if is_strict else "(... + ...) -> ...",
                   actual=ctx.show(m_ty))
    sort = _peel_motive(ctx, m_ty, 1, t.motive.span or t.span)
    if not _motive_waived(ctx, is_strict):
        _check_motive_sort(ctx, sort, "sumElim", t.motive.span or t.span)
    m_v = nbe.eval_in(ctx, motive2)
    sum_ty = m_ty.dom
    on_inl2 = check(ctx, t.on_inl, nbe.VPi(sum_ty.left, nbe.HostClosure(
        lambda a: nbe.apply_value(m_v, nbe.VInj(a, True, is_strict)))))
    on_inr2 = check(ctx, t.on_inr, nbe.VPi(sum_ty.right, nbe.HostClosure(
        lambda b: nbe.apply_value(m_v, nbe.VInj(b, False, is_strict)))))
    target2 = check(ctx, t.target, sum_ty)
    mk = S.SumElimS if is_strict else S.SumElim
    return (mk(motive2, on_inl2, on_inr2, target2, span=t.span),
            nbe.apply_value(m_v, nbe.eval_in(ctx, target2)))


def _infer_emptyelim(ctx, t):
    is_strict = isinstance(t, S.EmptyElimS)
    empty = nbe.EMPTY_S if is_strict else nbe.EMPTY
    motive2, m_ty = _infer_motive(ctx, t.motive, [lambda c: empty])
    if not (isinstance(m_ty, nbe.VPi)
            and nbe.conv(ctx.depth, m_ty.dom, empty, None, ctx.strict_pi)):
        raise fail(D.CONVERSION_FAILURE,
                   "the motive must be a family over the empty type",
                   t.motive.span or t.span,
                   expected="EmptyS -> ..." if is_strict else "Empty -> ...",
                   actual=ctx.show(m_ty))
    sort = _peel_motive(ctx, m_ty, 1, t.motive.span or t.span)
    if not _motive_waived(ctx, is_strict):
        _check_motive_sort(ctx, sort, "emptyElim", t.motive.span or t.span)
    m_v = nbe.eval_in(ctx, motive2)
    target2 = check(ctx, t.target, empty)
    mk = S.EmptyElimS if is_strict else S.EmptyElim
    return (mk(motive2, target2, span=t.span),
            nbe.apply_value(m_v, nbe.eval_in(ctx, target2)))


def _infer_idelim(ctx, t):
    is_strict = isinstance(t, S.IdElimS)
    name = "Js" if is_strict else "J"
    builders = []
    if isinstance(t.motive, S.Lam) and t.motive.ann is None:
        # a bare-lambda motive: the endpoints dictate the family's carrier
        _, carrier_pre = infer(ctx, t.lhs)
        builders = [lambda c: carrier_pre, lambda c: carrier_pre,
                    lambda c: nbe.VId(carrier_pre, c.var_value(1), c.var_value(0),
                                      is_strict)]
    motive2, m_ty = _infer_motive(ctx, t.motive, builders)
    d = ctx.depth
    if not isinstance(m_ty, nbe.VPi):
        raise fail(D.CONVERSION_FAILURE, f"the {name} motive must abstract both "
                   "endpoints and the proof", t.motive.span or t.span,
                   actual=ctx.show(m_ty))
    carrier = m_ty.dom
    x1 = nbe.fresh_var(d, carrier)
    ty1 = nbe.inst(m_ty.cod, x1)
    if not (isinstance(ty1, nbe.VPi)
            and nbe.conv(d + 1, ty1.dom, carrier, None, ctx.strict_pi)):
        raise fail(D.CONVERSION_FAILURE, f"the {name} motive must take two endpoints "
                   "of the same type", t.motive.span or t.span, actual=ctx.show(m_ty))
    x2 = nbe.fresh_var(d + 1, carrier)
    ty2 = nbe.inst(ty1.cod, x2)
    eq_ok = (isinstance(ty2, nbe.VPi) and isinstance(ty2.dom, nbe.VId)
             and ty2.dom.strict == is_strict
             and nbe.conv(d + 2, ty2.dom.lhs, x1, carrier, ctx.strict_pi)
             and nbe.conv(d + 2, ty2.dom.rhs, x2, carrier, ctx.strict_pi))
    if not eq_ok:
        raise fail(D.CONVERSION_FAILURE,
                   f"the {name} motive must abstract a proof between its endpoints",
                   t.motive.span or t.span, actual=ctx.show(m_ty))
    cod = nbe.inst(ty2.cod, nbe.fresh_var(d + 2, ty2.dom))
    sort = _expect_universe_value(ctx, cod, t.motive.span or t.span, "the motive")
    if not is_strict:
        # J's motive restriction is never waived, even in strong mode.
        _check_motive_sort(ctx, sort, "J", t.motive.span or t.span)
    m_v = nbe.eval_in(ctx, motive2)
    refl = nbe.REFL_S if is_strict else nbe.REFL
    refl_case2 = check(ctx, t.refl_case, nbe.VPi(carrier, nbe.HostClosure(
        lambda x: nbe.apply_many(m_v, x, x, refl))))
    lhs2 = check(ctx, t.lhs, carrier)
    rhs2 = check(ctx, t.rhs, carrier)
    lhs_v = nbe.eval_in(ctx, lhs2)
    rhs_v = nbe.eval_in(ctx, rhs2)
    proof2 = check(ctx, t.proof, nbe.VId(carrier, lhs_v, rhs_v, is_strict))
    mk = S.IdElimS if is_strict else S.IdElim
    return (mk(motive2, refl_case2, lhs2, rhs2, proof2, span=t.span),
            nbe.apply_many(m_v, lhs_v, rhs_v, nbe.eval_in(ctx, proof2)))


# -- checking ----------------------------------------------------------------------

def check(ctx: Context, t: Term, expected) -> Term:
    """Check `t` against the type value `expected`, elaborating as needed."""
    match t:
        case S.Lam(body=body, ann=ann):
            if not isinstance(expected, nbe.VPi):
                raise fail(D.CONVERSION_FAILURE, "lambda checked at a non-function type",
                           t.span, expected=ctx.show(expected), actual="a lambda")
            if ann is not None:
                ann2, _ = infer_universe(ctx, ann)
                ann_v = nbe.eval_in(ctx, ann2)
                if not nbe.conv(ctx.depth, ann_v, expected.dom, None, ctx.strict_pi):
                    raise fail(D.CONVERSION_FAILURE,
                               "lambda annotation does not match the expected domain",
                               t.span, expected=ctx.show(expected.dom),
                               actual=ctx.show(ann_v))
            dom_sort = _sort_of_type_value(ctx, expected.dom)
            inner = ctx.extend(t.hint, expected.dom, dom_sort)
            var = inner.var_value(0)
            body2 = check(inner, body, nbe.inst(expected.cod, var))
            return S.Lam(body2, ann=ann, hint=t.hint, span=t.span)
        case S.Pair(fst=fst, snd=snd):
            if not isinstance(expected, nbe.VSigma):
                raise fail(D.CONVERSION_FAILURE, "pair checked at a non-pair type",
                           t.span, expected=ctx.show(expected), actual="a pair")
            fst2 = check(ctx, fst, expected.fst)
            snd2 = check(ctx, snd, nbe.inst(expected.snd, nbe.eval_in(ctx, fst2)))
            return S.Pair(fst2, snd2, span=t.span)
        case S.Refl() | S.ReflS():
            is_strict = isinstance(t, S.ReflS)
            word = "refls" if is_strict else "refl"
            if not (isinstance(expected, nbe.VId) and expected.strict == is_strict):
                raise fail(D.CONVERSION_FAILURE,
                           f"{word} checked at a non-matching type", t.span,
                           expected=ctx.show(expected), actual=word)
            if not nbe.conv_in(ctx, expected.lhs, expected.rhs, expected.ty):
                raise fail(D.CONVERSION_FAILURE,
                           f"{word} requires definitionally equal endpoints", t.span,
                           expected=ctx.show(expected.lhs),
                           actual=ctx.show(expected.rhs))
            return t
        case S.Inl(value=v) | S.Inr(value=v) | S.InlS(value=v) | S.InrS(value=v):
            is_strict = isinstance(t, (S.InlS, S.InrS))
            is_left = isinstance(t, (S.Inl, S.InlS))
            if not (isinstance(expected, nbe.VSum) and expected.strict == is_strict):
                raise fail(D.CONVERSION_FAILURE, "injection checked at a non-sum type",
                           t.span, expected=ctx.show(expected), actual="an injection")
            side = expected.left if is_left else expected.right
            v2 = check(ctx, v, side)
            return dataclasses.replace(t, value=v2)
    t2, actual = infer(ctx, t)
    _subsume(ctx, actual, expected, t.span)
    return t2


def _subsume(ctx: Context, actual, expected, span) -> None:
    if isinstance(actual, nbe.VUniv) and isinstance(expected, nbe.VUniv):
        if sort_sub(actual.sort, expected.sort):
            return
        if actual.sort.level <= expected.sort.level:
            raise fail(D.FIBRANCY_VIOLATION,
                       "a pretype cannot be used where a fibrant type is required",
                       span, expected=str(expected.sort), actual=str(actual.sort))
        raise fail(D.UNIVERSE_ERROR, "universe level too large", span,
                   expected=str(expected.sort), actual=str(actual.sort))
    if not nbe.conv(ctx.depth, actual, expected, None, ctx.strict_pi):
        raise fail(D.CONVERSION_FAILURE, "type mismatch", span,
                   expected=ctx.show(expected), actual=ctx.show(actual))


def _sort_of_type_value(ctx: Context, ty) -> Optional[Sort]:
    try:
        return value_sort(ctx, ty)
    except (CheckError, nbe.EvalError):
        return None


# -- declarations ---------------------------------------------------------------

@dataclass(frozen=True)
class CheckedDecl:
    name: str
    ty: Term
    body: Optional[Term]  # None for axioms
    is_axiom: bool
    span: Optional[Span] = None


def check_declaration(ctx: Context, decl) -> CheckedDecl:
    """Check one Definition or Axiom and extend the signature.  The context
    must be top level (empty telescope)."""
    if decl.name in ctx.sig:
        raise fail(D.DUPLICATE_NAME, f"{decl.name} is already declared", decl.span)
    ty = merge_strict_formers(decl.ty) if ctx.flags.strong else decl.ty
    ty2, _sort = infer_universe(ctx, ty)
    ty_v = nbe.eval_in(ctx, ty2)
    if isinstance(decl, S.Axiom):
        ctx.sig.define(decl.name, ty_v, None, is_axiom=True)
        return CheckedDecl(decl.name, ty2, None, True, decl.span)
    body = merge_strict_formers(decl.body) if ctx.flags.strong else decl.body
    body2 = check(ctx, body, ty_v)
    body_v = nbe.eval_in(ctx, body2)
    ctx.sig.define(decl.name, ty_v, body_v, is_axiom=False)
    return CheckedDecl(decl.name, ty2, body2, False, decl.span)
