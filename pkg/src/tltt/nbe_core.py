"""Normalization by evaluation: semantic values, evaluation, read-back, conversion.

This module is the checker's hot loop.  It is written in the restricted
style that Cython's pure-Python mode can compile (isinstance dispatch, no
structural pattern matching); the build optionally compiles it to the
extension module ``tltt._nbe_compiled`` and ``tltt.nbe`` picks whichever
is available at import time.

Evaluation is fragment-blind: strict eliminators compute exactly like the
fibrant ones.  Fibrancy is enforced by the typechecker, never here.
"""

from tltt import syntax as S


class EvalError(Exception):
    """Raised on ill-typed redexes or an exhausted unfold budget."""


# -- signature ----------------------------------------------------------------

class SigEntry:
    __slots__ = ("ty", "body", "is_axiom")

    def __init__(self, ty, body, is_axiom):
        self.ty = ty          # Value: the declared type
        self.body = body      # Value or None: evaluated definition body
        self.is_axiom = is_axiom


class Signature:
    """Global signature of checked declarations plus the unfold budget."""

    __slots__ = ("entries", "budget")

    def __init__(self, budget=None):
        self.entries = {}
        self.budget = budget  # None (unlimited) or [remaining]

    def define(self, name, ty, body, is_axiom=False):
        self.entries[name] = SigEntry(ty, body, is_axiom)

    def lookup(self, name):
        return self.entries.get(name)

    def __contains__(self, name):
        return name in self.entries


# -- environments and closures --------------------------------------------------

class Env:
    """Persistent environment: a cons list of values, threaded with the signature."""

    __slots__ = ("value", "parent", "sig", "length")

    def __init__(self, value, parent, sig):
        self.value = value
        self.parent = parent
        self.sig = sig
        self.length = (parent.length + 1) if parent is not None else 1

    def lookup(self, index):
        node = self
        while index > 0:
            node = node.parent
            index -= 1
        return node.value


def empty_env(sig):
    return _EmptyEnv(sig)


class _EmptyEnv:
    __slots__ = ("sig", "length")

    def __init__(self, sig):
        self.sig = sig
        self.length = 0

    def lookup(self, index):
        raise EvalError("variable out of range")


def extend(env, value):
    parent = env if isinstance(env, Env) else None
    return Env(value, parent, env.sig)


class Closure:
    """A suspended body under one binder, closed over its environment."""

    __slots__ = ("env", "body")

    def __init__(self, env, body):
        self.env = env
        self.body = body


class HostClosure:
    """Closure given by a host-language function; used for synthesized types."""

    __slots__ = ("fn",)

    def __init__(self, fn):
        self.fn = fn


def inst(closure, value):
    if isinstance(closure, HostClosure):
        return closure.fn(value)
    return evaluate(closure.body, extend(closure.env, value))


# -- values --------------------------------------------------------------------

class Value:
    __slots__ = ()


class VUniv(Value):
    __slots__ = ("sort",)

    def __init__(self, sort):
        self.sort = sort


class VPi(Value):
    __slots__ = ("dom", "cod", "hint")

    def __init__(self, dom, cod, hint=None):
        self.dom = dom
        self.cod = cod
        self.hint = hint


class VLam(Value):
    __slots__ = ("closure", "hint")

    def __init__(self, closure, hint=None):
        self.closure = closure
        self.hint = hint


class VSigma(Value):
    __slots__ = ("fst", "snd", "hint")

    def __init__(self, fst, snd, hint=None):
        self.fst = fst
        self.snd = snd
        self.hint = hint


class VPair(Value):
    __slots__ = ("fst", "snd")

    def __init__(self, fst, snd):
        self.fst = fst
        self.snd = snd


class VUnit(Value):
    __slots__ = ()


class VStar(Value):
    __slots__ = ()


class VNat(Value):
    __slots__ = ("strict",)

    def __init__(self, strict):
        self.strict = strict


class VZero(Value):
    __slots__ = ("strict",)

    def __init__(self, strict):
        self.strict = strict


class VSucc(Value):
    __slots__ = ("pred", "strict")

    def __init__(self, pred, strict):
        self.pred = pred
        self.strict = strict


class VEmpty(Value):
    __slots__ = ("strict",)

    def __init__(self, strict):
        self.strict = strict


class VSum(Value):
    __slots__ = ("left", "right", "strict")

    def __init__(self, left, right, strict):
        self.left = left
        self.right = right
        self.strict = strict


class VInj(Value):
    __slots__ = ("value", "is_left", "strict")

    def __init__(self, value, is_left, strict):
        self.value = value
        self.is_left = is_left
        self.strict = strict


class VId(Value):
    __slots__ = ("ty", "lhs", "rhs", "strict")

    def __init__(self, ty, lhs, rhs, strict):
        self.ty = ty  # Value or None (pre-elaboration / read back)
        self.lhs = lhs
        self.rhs = rhs
        self.strict = strict


class VRefl(Value):
    __slots__ = ("strict",)

    def __init__(self, strict):
        self.strict = strict


# neutral heads

class HVar:
    __slots__ = ("level", "ty")

    def __init__(self, level, ty=None):
        self.level = level
        self.ty = ty


class HConst:
    __slots__ = ("name", "ty")

    def __init__(self, name, ty=None):
        self.name = name
        self.ty = ty


class HUip:
    __slots__ = ("p", "q")

    def __init__(self, p, q):
        self.p = p
        self.q = q


# elimination frames

class FApp:
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg


class FFst:
    __slots__ = ()


class FSnd:
    __slots__ = ()


class FNatElim:
    __slots__ = ("motive", "base", "step", "strict")

    def __init__(self, motive, base, step, strict):
        self.motive = motive
        self.base = base
        self.step = step
        self.strict = strict


class FSumElim:
    __slots__ = ("motive", "on_inl", "on_inr", "strict")

    def __init__(self, motive, on_inl, on_inr, strict):
        self.motive = motive
        self.on_inl = on_inl
        self.on_inr = on_inr
        self.strict = strict


class FEmptyElim:
    __slots__ = ("motive", "strict")

    def __init__(self, motive, strict):
        self.motive = motive
        self.strict = strict


class FIdElim:
    __slots__ = ("motive", "refl_case", "lhs", "rhs", "strict")

    def __init__(self, motive, refl_case, lhs, rhs, strict):
        self.motive = motive
        self.refl_case = refl_case
        self.lhs = lhs
        self.rhs = rhs
        self.strict = strict


class VNeutral(Value):
    """A stuck value: a head under an ordered spine of eliminations."""

    __slots__ = ("head", "spine", "ty")

    def __init__(self, head, spine, ty=None):
        self.head = head
        self.spine = spine  # tuple of frames, innermost first
        self.ty = ty


UNIT = VUnit()
STAR = VStar()
NAT = VNat(False)
NAT_S = VNat(True)
ZERO = VZero(False)
ZERO_S = VZero(True)
EMPTY = VEmpty(False)
EMPTY_S = VEmpty(True)
REFL = VRefl(False)
REFL_S = VRefl(True)


def fresh_var(level, ty=None):
    return VNeutral(HVar(level, ty), (), ty)


# -- eliminators ----------------------------------------------------------------

def _push(neutral, frame, ty=None):
    return VNeutral(neutral.head, neutral.spine + (frame,), ty)


def apply_value(fn, arg):
    if isinstance(fn, VLam):
        return inst(fn.closure, arg)
    if isinstance(fn, VNeutral):
        ty = fn.ty
        res_ty = inst(ty.cod, arg) if isinstance(ty, VPi) else None
        return _push(fn, FApp(arg), res_ty)
    raise EvalError("application of a non-function value")


def apply_many(fn, *args):
    for a in args:
        fn = apply_value(fn, a)
    return fn


def do_fst(v):
    if isinstance(v, VPair):
        return v.fst
    if isinstance(v, VNeutral):
        ty = v.ty
        res_ty = ty.fst if isinstance(ty, VSigma) else None
        return _push(v, FFst(), res_ty)
    raise EvalError("first projection of a non-pair value")


def do_snd(v):
    if isinstance(v, VPair):
        return v.snd
    if isinstance(v, VNeutral):
        ty = v.ty
        res_ty = inst(ty.snd, do_fst(v)) if isinstance(ty, VSigma) else None
        return _push(v, FSnd(), res_ty)
    raise EvalError("second projection of a non-pair value")


def do_natelim(motive, base, step, target, strict):
    if isinstance(target, VZero):
        return base
    if isinstance(target, VSucc):
        pred = target.pred
        return apply_value(apply_value(step, pred),
                           do_natelim(motive, base, step, pred, strict))
    if isinstance(target, VNeutral):
        return _push(target, FNatElim(motive, base, step, strict),
                     apply_value(motive, target))
    raise EvalError("natural-number elimination of a non-numeral")


def do_sumelim(motive, on_inl, on_inr, target, strict):
    if isinstance(target, VInj):
        return apply_value(on_inl if target.is_left else on_inr, target.value)
    if isinstance(target, VNeutral):
        return _push(target, FSumElim(motive, on_inl, on_inr, strict),
                     apply_value(motive, target))
    raise EvalError("sum elimination of a non-injection")


def do_emptyelim(motive, target, strict):
    if isinstance(target, VNeutral):
        return _push(target, FEmptyElim(motive, strict),
                     apply_value(motive, target))
    raise EvalError("empty elimination of a canonical value")


def do_idelim(motive, refl_case, lhs, rhs, proof, strict):
    if isinstance(proof, VRefl):
        return apply_value(refl_case, lhs)
    if isinstance(proof, VNeutral):
        return _push(proof, FIdElim(motive, refl_case, lhs, rhs, strict),
                     apply_many(motive, lhs, rhs, proof))
    raise EvalError("equality elimination of a non-proof")


# -- evaluation -------------------------------------------------------------------

def evaluate(t, env):
    """Weak-head evaluate a well-scoped term in `env` (beta, projections, iota)."""
    cls = type(t)
    if cls is S.Var:
        return env.lookup(t.index)
    if cls is S.App:
        return apply_value(evaluate(t.fn, env), evaluate(t.arg, env))
    if cls is S.Lam:
        return VLam(Closure(env, t.body), t.hint)
    if cls is S.Const:
        entry = env.sig.lookup(t.name)
        if entry is None:
            raise EvalError(f"undeclared constant {t.name}")
        if entry.body is None:
            return VNeutral(HConst(t.name, entry.ty), (), entry.ty)
        budget = env.sig.budget
        if budget is not None:
            if budget[0] <= 0:
                raise EvalError("unfold budget exhausted")
            budget[0] -= 1
        return entry.body
    if cls is S.Pi:
        return VPi(evaluate(t.dom, env), Closure(env, t.cod), t.hint)
    if cls is S.Sigma:
        return VSigma(evaluate(t.fst, env), Closure(env, t.snd), t.hint)
    if cls is S.Pair:
        return VPair(evaluate(t.fst, env), evaluate(t.snd, env))
    if cls is S.Fst:
        return do_fst(evaluate(t.pair, env))
    if cls is S.Snd:
        return do_snd(evaluate(t.pair, env))
    if cls is S.Univ:
        return VUniv(t.sort)
    if cls is S.Unit:
        return UNIT
    if cls is S.Star:
        return STAR
    if cls is S.Nat:
        return NAT
    if cls is S.NatS:
        return NAT_S
    if cls is S.Zero:
        return ZERO
    if cls is S.ZeroS:
        return ZERO_S
    if cls is S.Succ:
        return VSucc(evaluate(t.pred, env), False)
    if cls is S.SuccS:
        return VSucc(evaluate(t.pred, env), True)
    if cls is S.NatElim or cls is S.NatElimS:
        return do_natelim(evaluate(t.motive, env), evaluate(t.base, env),
                          evaluate(t.step, env), evaluate(t.target, env),
                          cls is S.NatElimS)
    if cls is S.Empty:
        return EMPTY
    if cls is S.EmptyS:
        return EMPTY_S
    if cls is S.EmptyElim or cls is S.EmptyElimS:
        return do_emptyelim(evaluate(t.motive, env), evaluate(t.target, env),
                            cls is S.EmptyElimS)
    if cls is S.Sum:
        return VSum(evaluate(t.left, env), evaluate(t.right, env), False)
    if cls is S.SumS:
        return VSum(evaluate(t.left, env), evaluate(t.right, env), True)
    if cls is S.Inl:
        return VInj(evaluate(t.value, env), True, False)
    if cls is S.Inr:
        return VInj(evaluate(t.value, env), False, False)
    if cls is S.InlS:
        return VInj(evaluate(t.value, env), True, True)
    if cls is S.InrS:
        return VInj(evaluate(t.value, env), False, True)
    if cls is S.SumElim or cls is S.SumElimS:
        return do_sumelim(evaluate(t.motive, env), evaluate(t.on_inl, env),
                          evaluate(t.on_inr, env), evaluate(t.target, env),
                          cls is S.SumElimS)
    if cls is S.Id:
        return VId(evaluate(t.ty, env) if t.ty is not None else None,
                   evaluate(t.lhs, env), evaluate(t.rhs, env), False)
    if cls is S.IdS:
        return VId(evaluate(t.ty, env) if t.ty is not None else None,
                   evaluate(t.lhs, env), evaluate(t.rhs, env), True)
    if cls is S.Refl:
        return REFL
    if cls is S.ReflS:
        return REFL_S
    if cls is S.IdElim or cls is S.IdElimS:
        return do_idelim(evaluate(t.motive, env), evaluate(t.refl_case, env),
                         evaluate(t.lhs, env), evaluate(t.rhs, env),
                         evaluate(t.proof, env), cls is S.IdElimS)
    if cls is S.UipS:
        return VNeutral(HUip(evaluate(t.p, env), evaluate(t.q, env)), ())
    raise EvalError(f"cannot evaluate {cls.__name__}")


# -- read-back ---------------------------------------------------------------------

def quote(depth, v):
    """Read a value back as a beta-iota-normal term at binding depth `depth`."""
    if isinstance(v, VNeutral):
        return _quote_neutral(depth, v)
    if isinstance(v, VLam):
        return S.Lam(quote(depth + 1, inst(v.closure, fresh_var(depth))), hint=v.hint)
    if isinstance(v, VPi):
        return S.Pi(quote(depth, v.dom),
                    quote(depth + 1, inst(v.cod, fresh_var(depth, v.dom))),
                    hint=v.hint)
    if isinstance(v, VSigma):
        return S.Sigma(quote(depth, v.fst),
                       quote(depth + 1, inst(v.snd, fresh_var(depth, v.fst))),
                       hint=v.hint)
    if isinstance(v, VPair):
        return S.Pair(quote(depth, v.fst), quote(depth, v.snd))
    if isinstance(v, VUniv):
        return S.Univ(v.sort)
    if isinstance(v, VUnit):
        return S.Unit()
    if isinstance(v, VStar):
        return S.Star()
    if isinstance(v, VNat):
        return S.NatS() if v.strict else S.Nat()
    if isinstance(v, VZero):
        return S.ZeroS() if v.strict else S.Zero()
    if isinstance(v, VSucc):
        p = quote(depth, v.pred)
        return S.SuccS(p) if v.strict else S.Succ(p)
    if isinstance(v, VEmpty):
        return S.EmptyS() if v.strict else S.Empty()
    if isinstance(v, VSum):
        l, r = quote(depth, v.left), quote(depth, v.right)
        return S.SumS(l, r) if v.strict else S.Sum(l, r)
    if isinstance(v, VInj):
        val = quote(depth, v.value)
        if v.is_left:
            return S.InlS(val) if v.strict else S.Inl(val)
        return S.InrS(val) if v.strict else S.Inr(val)
    if isinstance(v, VId):
        l, r = quote(depth, v.lhs), quote(depth, v.rhs)
        return S.IdS(None, l, r) if v.strict else S.Id(None, l, r)
    if isinstance(v, VRefl):
        return S.ReflS() if v.strict else S.Refl()
    raise EvalError(f"cannot quote {type(v).__name__}")


def _quote_neutral(depth, v):
    head = v.head
    if isinstance(head, HVar):
        if head.level >= depth:
            raise EvalError("variable level out of range during read-back")
        acc = S.Var(depth - 1 - head.level)
    elif isinstance(head, HConst):
        acc = S.Const(head.name)
    elif isinstance(head, HUip):
        acc = S.UipS(quote(depth, head.p), quote(depth, head.q))
    else:
        raise EvalError("unknown neutral head")
    for frame in v.spine:
        if isinstance(frame, FApp):
            acc = S.App(acc, quote(depth, frame.arg))
        elif isinstance(frame, FFst):
            acc = S.Fst(acc)
        elif isinstance(frame, FSnd):
            acc = S.Snd(acc)
        elif isinstance(frame, FNatElim):
            mk = S.NatElimS if frame.strict else S.NatElim
            acc = mk(quote(depth, frame.motive), quote(depth, frame.base),
                     quote(depth, frame.step), acc)
        elif isinstance(frame, FSumElim):
            mk = S.SumElimS if frame.strict else S.SumElim
            acc = mk(quote(depth, frame.motive), quote(depth, frame.on_inl),
                     quote(depth, frame.on_inr), acc)
        elif isinstance(frame, FEmptyElim):
            mk = S.EmptyElimS if frame.strict else S.EmptyElim
            acc = mk(quote(depth, frame.motive), acc)
        elif isinstance(frame, FIdElim):
            mk = S.IdElimS if frame.strict else S.IdElim
            acc = mk(quote(depth, frame.motive), quote(depth, frame.refl_case),
                     quote(depth, frame.lhs), quote(depth, frame.rhs), acc)
        else:
            raise EvalError("unknown spine frame")
    return acc


# -- conversion ----------------------------------------------------------------------

def conv(depth, a, b, ty, strict_pi=False):
    """Definitional equality of values `a` and `b` at type `ty`.

    Type-directed at Pi (eta), Sigma (eta), Unit (all inhabitants equal) and,
    under the proof-irrelevance flag, at strict equality types.  `ty` may be
    None inside neutral spines, where comparison falls back to structural
    form with untyped eta-expansion on lambda/pair mismatches.
    """
    if ty is not None:
        if isinstance(ty, VPi):
            x = fresh_var(depth, ty.dom)
            return conv(depth + 1, apply_value(a, x), apply_value(b, x),
                        inst(ty.cod, x), strict_pi)
        if isinstance(ty, VSigma):
            fa = do_fst(a)
            if not conv(depth, fa, do_fst(b), ty.fst, strict_pi):
                return False
            return conv(depth, do_snd(a), do_snd(b), inst(ty.snd, fa), strict_pi)
        if isinstance(ty, VUnit):
            return True
        if strict_pi and isinstance(ty, VId) and ty.strict:
            return True
    return _conv_whnf(depth, a, b, strict_pi)


def _conv_whnf(depth, a, b, strict_pi):
    # eta: a lambda or pair meets a neutral of the corresponding shape
    if isinstance(a, VLam) or isinstance(b, VLam):
        x = fresh_var(depth)
        return conv(depth + 1, apply_value(a, x), apply_value(b, x), None, strict_pi)
    if isinstance(a, VPair) or isinstance(b, VPair):
        return (conv(depth, do_fst(a), do_fst(b), None, strict_pi)
                and conv(depth, do_snd(a), do_snd(b), None, strict_pi))
    if strict_pi and _has_strict_id_annotation(a) and _has_strict_id_annotation(b):
        return True
    if isinstance(a, VUniv):
        return isinstance(b, VUniv) and a.sort == b.sort
    if isinstance(a, VPi):
        if not (isinstance(b, VPi) and conv(depth, a.dom, b.dom, None, strict_pi)):
            return False
        x = fresh_var(depth, a.dom)
        return conv(depth + 1, inst(a.cod, x), inst(b.cod, x), None, strict_pi)
    if isinstance(a, VSigma):
        if not (isinstance(b, VSigma) and conv(depth, a.fst, b.fst, None, strict_pi)):
            return False
        x = fresh_var(depth, a.fst)
        return conv(depth + 1, inst(a.snd, x), inst(b.snd, x), None, strict_pi)
    if isinstance(a, VUnit):
        return isinstance(b, VUnit)
    if isinstance(a, VStar):
        return isinstance(b, VStar)
    if isinstance(a, VNat):
        return isinstance(b, VNat) and a.strict == b.strict
    if isinstance(a, VZero):
        return isinstance(b, VZero) and a.strict == b.strict
    if isinstance(a, VSucc):
        return (isinstance(b, VSucc) and a.strict == b.strict
                and conv(depth, a.pred, b.pred, None, strict_pi))
    if isinstance(a, VEmpty):
        return isinstance(b, VEmpty) and a.strict == b.strict
    if isinstance(a, VSum):
        return (isinstance(b, VSum) and a.strict == b.strict
                and conv(depth, a.left, b.left, None, strict_pi)
                and conv(depth, a.right, b.right, None, strict_pi))
    if isinstance(a, VInj):
        return (isinstance(b, VInj) and a.is_left == b.is_left
                and a.strict == b.strict
                and conv(depth, a.value, b.value, None, strict_pi))
    if isinstance(a, VId):
        if not (isinstance(b, VId) and a.strict == b.strict):
            return False
        at = a.ty if a.ty is not None else b.ty
        if a.ty is not None and b.ty is not None:
            if not conv(depth, a.ty, b.ty, None, strict_pi):
                return False
        return (conv(depth, a.lhs, b.lhs, at, strict_pi)
                and conv(depth, a.rhs, b.rhs, at, strict_pi))
    if isinstance(a, VRefl):
        return isinstance(b, VRefl) and a.strict == b.strict
    if isinstance(a, VNeutral):
        return (isinstance(b, VNeutral)
                and _conv_head(depth, a.head, b.head, strict_pi)
                and _conv_spine(depth, a.spine, b.spine, strict_pi))
    raise EvalError(f"cannot compare {type(a).__name__}")


def _has_strict_id_annotation(v):
    return (isinstance(v, VNeutral) and isinstance(v.ty, VId) and v.ty.strict) \
        or (isinstance(v, VRefl) and v.strict)


def _conv_head(depth, h1, h2, strict_pi):
    if isinstance(h1, HVar):
        return isinstance(h2, HVar) and h1.level == h2.level
    if isinstance(h1, HConst):
        return isinstance(h2, HConst) and h1.name == h2.name
    if isinstance(h1, HUip):
        return (isinstance(h2, HUip)
                and conv(depth, h1.p, h2.p, None, strict_pi)
                and conv(depth, h1.q, h2.q, None, strict_pi))
    return False


def _conv_spine(depth, s1, s2, strict_pi):
    if len(s1) != len(s2):
        return False
    for f1, f2 in zip(s1, s2):
        if type(f1) is not type(f2):
            return False
        if isinstance(f1, FApp):
            if not conv(depth, f1.arg, f2.arg, None, strict_pi):
                return False
        elif isinstance(f1, (FFst, FSnd)):
            pass
        elif isinstance(f1, FNatElim):
            if f1.strict != f2.strict:
                return False
            if not (conv(depth, f1.motive, f2.motive, None, strict_pi)
                    and conv(depth, f1.base, f2.base, None, strict_pi)
                    and conv(depth, f1.step, f2.step, None, strict_pi)):
                return False
        elif isinstance(f1, FSumElim):
            if f1.strict != f2.strict:
                return False
            if not (conv(depth, f1.motive, f2.motive, None, strict_pi)
                    and conv(depth, f1.on_inl, f2.on_inl, None, strict_pi)
                    and conv(depth, f1.on_inr, f2.on_inr, None, strict_pi)):
                return False
        elif isinstance(f1, FEmptyElim):
            if f1.strict != f2.strict:
                return False
            if not conv(depth, f1.motive, f2.motive, None, strict_pi):
                return False
        elif isinstance(f1, FIdElim):
            if f1.strict != f2.strict:
                return False
            if not (conv(depth, f1.motive, f2.motive, None, strict_pi)
                    and conv(depth, f1.refl_case, f2.refl_case, None, strict_pi)
                    and conv(depth, f1.lhs, f2.lhs, None, strict_pi)
                    and conv(depth, f1.rhs, f2.rhs, None, strict_pi)):
                return False
        else:
            return False
    return True
