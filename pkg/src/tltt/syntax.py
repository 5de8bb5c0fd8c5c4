"""Core term language: sorts, de Bruijn terms, declarations, substitution.

Terms are immutable dataclasses compared structurally; with de Bruijn
indices, structural equality *is* alpha-equality.  Fields that carry no
semantic content (source spans, binder-name hints, inferable type
annotations) are excluded from comparison so that equality stays alpha.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional


FIBRANT = "fibrant"
STRICT = "strict"


@dataclass(frozen=True)
class Sort:
    """Universe classifier: fragment (fibrant or strict) crossed with a level."""

    fragment: str
    level: int

    def __post_init__(self) -> None:
        if self.fragment not in (FIBRANT, STRICT):
            raise ValueError(f"bad fragment {self.fragment!r}")
        if self.level < 0:
            raise ValueError("universe level must be non-negative")

    @property
    def is_fibrant(self) -> bool:
        return self.fragment == FIBRANT

    def __str__(self) -> str:
        return ("U " if self.is_fibrant else "Us ") + str(self.level)


def fibrant(level: int) -> Sort:
    return Sort(FIBRANT, level)


def strict(level: int) -> Sort:
    return Sort(STRICT, level)


def sort_sub(a: Sort, b: Sort) -> bool:
    """Cumulative subsumption: levels rise, and fibrant embeds into strict."""
    if a.level > b.level:
        return False
    return a.fragment == b.fragment or (a.is_fibrant and not b.is_fibrant)


def combine_sorts(a: Sort, b: Sort) -> Sort:
    """Least sort of a Pi/Sigma built from pieces of sorts `a` and `b`."""
    frag = FIBRANT if (a.is_fibrant and b.is_fibrant) else STRICT
    return Sort(frag, max(a.level, b.level))


@dataclass(frozen=True)
class Span:
    """Source location: half-open in columns, 1-based lines and columns."""

    path: str
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.path}:{self.line}:{self.col}"


_SPAN = dict(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Term:
    span: Optional[Span] = field(**_SPAN)


# -- variables, universes, functions, pairs ---------------------------------

@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Univ(Term):
    sort: Sort


@dataclass(frozen=True)
class Pi(Term):
    dom: Term
    cod: Term
    hint: Optional[str] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Lam(Term):
    body: Term
    ann: Optional[Term] = field(default=None, compare=False, repr=False)
    hint: Optional[str] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Sigma(Term):
    fst: Term
    snd: Term
    hint: Optional[str] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Fst(Term):
    pair: Term


@dataclass(frozen=True)
class Snd(Term):
    pair: Term


# -- unit --------------------------------------------------------------------

@dataclass(frozen=True)
class Unit(Term):
    pass


@dataclass(frozen=True)
class Star(Term):
    pass


# -- natural numbers, fibrant and strict -------------------------------------

@dataclass(frozen=True)
class Nat(Term):
    pass


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Succ(Term):
    pred: Term


@dataclass(frozen=True)
class NatElim(Term):
    motive: Term
    base: Term
    step: Term
    target: Term


@dataclass(frozen=True)
class NatS(Term):
    pass


@dataclass(frozen=True)
class ZeroS(Term):
    pass


@dataclass(frozen=True)
class SuccS(Term):
    pred: Term


@dataclass(frozen=True)
class NatElimS(Term):
    motive: Term
    base: Term
    step: Term
    target: Term


# -- empty types --------------------------------------------------------------

@dataclass(frozen=True)
class Empty(Term):
    pass


@dataclass(frozen=True)
class EmptyElim(Term):
    motive: Term
    target: Term


@dataclass(frozen=True)
class EmptyS(Term):
    pass


@dataclass(frozen=True)
class EmptyElimS(Term):
    motive: Term
    target: Term


# -- sums ---------------------------------------------------------------------

@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Inl(Term):
    value: Term


@dataclass(frozen=True)
class Inr(Term):
    value: Term


@dataclass(frozen=True)
class SumElim(Term):
    motive: Term
    on_inl: Term
    on_inr: Term
    target: Term


@dataclass(frozen=True)
class SumS(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class InlS(Term):
    value: Term


@dataclass(frozen=True)
class InrS(Term):
    value: Term


@dataclass(frozen=True)
class SumElimS(Term):
    motive: Term
    on_inl: Term
    on_inr: Term
    target: Term


# -- equality, fibrant and strict ----------------------------------------------
# The carrier type of an equality is inferable from its endpoints, so the
# parser leaves it as None and elaboration completes it; it is excluded from
# structural comparison for the same reason.

@dataclass(frozen=True)
class Id(Term):
    ty: Optional[Term] = field(compare=False, repr=False)
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Refl(Term):
    pass


@dataclass(frozen=True)
class IdElim(Term):
    motive: Term
    refl_case: Term
    lhs: Term
    rhs: Term
    proof: Term


@dataclass(frozen=True)
class IdS(Term):
    ty: Optional[Term] = field(compare=False, repr=False)
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class ReflS(Term):
    pass


@dataclass(frozen=True)
class IdElimS(Term):
    motive: Term
    refl_case: Term
    lhs: Term
    rhs: Term
    proof: Term


@dataclass(frozen=True)
class UipS(Term):
    p: Term
    q: Term


@dataclass(frozen=True)
class Const(Term):
    name: str


# Fields that live under one extra binder.
_BINDER_FIELDS = {
    Pi: ("cod",),
    Lam: ("body",),
    Sigma: ("snd",),
}

_ATOMS = (Univ, Unit, Star, Nat, Zero, NatS, ZeroS, Empty, EmptyS, Refl, ReflS, Const)


def term_children(t: Term) -> list[tuple[str, Term, bool]]:
    """(field name, child, crosses-a-binder) for every Term-valued child."""
    under = _BINDER_FIELDS.get(type(t), ())
    out = []
    for f in dataclasses.fields(t):
        if f.name in ("span", "hint"):
            continue
        child = getattr(t, f.name)
        if isinstance(child, Term):
            out.append((f.name, child, f.name in under))
    return out


def _rebuild(t: Term, changes: dict[str, Term]) -> Term:
    return dataclasses.replace(t, **changes) if changes else t


def shift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Displace all free indices >= cutoff by `amount`; bound indices untouched."""
    if isinstance(t, Var):
        return Var(t.index + amount, span=t.span) if t.index >= cutoff else t
    if isinstance(t, _ATOMS):
        return t
    changes = {}
    for name, child, under in term_children(t):
        new = shift(child, amount, cutoff + 1 if under else cutoff)
        if new is not child:
            changes[name] = new
    return _rebuild(t, changes)


def subst(t: Term, index: int, replacement: Term) -> Term:
    """Capture-avoiding substitution of `replacement` for Var(index) in `t`."""
    if isinstance(t, Var):
        if t.index == index:
            return shift(replacement, index)
        if t.index > index:
            return Var(t.index - 1, span=t.span)
        return t
    if isinstance(t, _ATOMS):
        return t
    changes = {}
    for name, child, under in term_children(t):
        new = subst(child, index + 1 if under else index, replacement)
        if new is not child:
            changes[name] = new
    return _rebuild(t, changes)


def max_free_index(t: Term, depth: int = 0) -> int:
    """Largest free de Bruijn index in `t` (-1 if closed at `depth`)."""
    if isinstance(t, Var):
        return t.index - depth if t.index >= depth else -1
    best = -1
    for _, child, under in term_children(t):
        best = max(best, max_free_index(child, depth + 1 if under else depth))
    return best


def strict_constructors(t: Term) -> set[str]:
    """Names of strict-fragment constructors occurring anywhere in `t`."""
    strict_kinds = (NatS, ZeroS, SuccS, NatElimS, EmptyS, EmptyElimS,
                    SumS, InlS, InrS, SumElimS, IdS, ReflS, IdElimS, UipS)
    found = set()

    def go(u: Term) -> None:
        if isinstance(u, strict_kinds):
            found.add(type(u).__name__)
        if isinstance(u, Univ) and not u.sort.is_fibrant:
            found.add("UnivS")
        for _, child, _ in term_children(u):
            go(child)

    go(t)
    return found


def mentions_inner_id(t: Term) -> bool:
    """True if the fibrant equality former (or its intro/elim) occurs in `t`."""
    if isinstance(t, (Id, Refl, IdElim)):
        return True
    return any(mentions_inner_id(c) for _, c, _ in term_children(t))


# -- declarations and modules --------------------------------------------------

@dataclass(frozen=True)
class Definition:
    name: str
    ty: Term
    body: Term
    span: Optional[Span] = field(**_SPAN)


@dataclass(frozen=True)
class Axiom:
    name: str
    ty: Term
    span: Optional[Span] = field(**_SPAN)


CHECK, INFER, NORMALIZE, CONV, FAIL = "check", "infer", "normalize", "conv", "fail"


@dataclass(frozen=True)
class Pragma:
    kind: str
    payload: tuple  # terms, or the wrapped item for #fail
    expect_code: Optional[str] = None  # pinned diagnostic code for #fail[CODE]
    span: Optional[Span] = field(**_SPAN)


Declaration = Definition | Axiom | Pragma


@dataclass(frozen=True)
class Module:
    decls: tuple[Declaration, ...]
    path: str
