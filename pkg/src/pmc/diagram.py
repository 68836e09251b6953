"""String-diagram terms and their kernel semantics.

Terms are a free syntax over generators, structural maps, and an
explicit observation node.  evaluate interprets any well-typed term as
a subdistribution kernel.  normal_form factors a term built from total
generators and observations into a pair (g, h): a total kernel g giving
the outcome distribution where the term can succeed, and a total
Boolean kernel h giving the success probability, so that the term's
semantics is pointwise g * h(yes).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernel as K
from .errors import IllTyped, NonTotalGenerator
from .kernel import Alphabet, Obj, Outcome, Row, SubKernel, UNIT, _as_outcome


@dataclass(frozen=True)
class Gen:
    """A named generator carrying its kernel."""

    name: str
    kernel: SubKernel


@dataclass(frozen=True)
class Id:
    obj: Obj


@dataclass(frozen=True)
class Compose:
    """first ; second, in diagrammatic order."""

    first: "Term"
    second: "Term"


@dataclass(frozen=True)
class Tensor:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Copy:
    obj: Obj


@dataclass(frozen=True)
class Discard:
    obj: Obj


@dataclass(frozen=True)
class Swap:
    left: Obj
    right: Obj


@dataclass(frozen=True)
class Compare:
    obj: Obj


@dataclass(frozen=True)
class Observe:
    """Constrain a wire to a single outcome, consuming it."""

    obj: Obj
    point: Outcome

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "point", _as_outcome(self.point, self.obj, "point")
        )


Term = Gen | Id | Compose | Tensor | Copy | Discard | Swap | Compare | Observe


def infer_type(term: Term) -> tuple[Obj, Obj]:
    """Return (dom, cod) or raise IllTyped naming the offending subterm."""
    return _infer(term, "t")


def _infer(term: Term, path: str) -> tuple[Obj, Obj]:
    match term:
        case Gen(_, k):
            return k.dom, k.cod
        case Id(x):
            return x, x
        case Copy(x):
            return x, x.tensor(x)
        case Discard(x):
            return x, UNIT
        case Swap(x, y):
            return x.tensor(y), y.tensor(x)
        case Compare(x):
            return x.tensor(x), x
        case Observe(x, _):
            return x, UNIT
        case Compose(a, b):
            da, ca = _infer(a, path + ".first")
            db, cb = _infer(b, path + ".second")
            if ca != db:
                raise IllTyped(
                    f"at {path}: cannot compose {ca!r} into {db!r}"
                )
            return da, cb
        case Tensor(a, b):
            da, ca = _infer(a, path + ".left")
            db, cb = _infer(b, path + ".right")
            return da.tensor(db), ca.tensor(cb)
    raise IllTyped(f"at {path}: not a term: {term!r}")


def observe_kernel(at: Obj, point) -> SubKernel:
    """The costate at -> I succeeding exactly on the given outcome."""
    out = _as_outcome(point, at, "point")
    return SubKernel(at, UNIT, {out: {(): Fraction(1)}})


def evaluate(term: Term) -> SubKernel:
    """Interpret a well-typed term as a kernel."""
    match term:
        case Gen(_, k):
            return k
        case Id(x):
            return K.identity(x)
        case Copy(x):
            return K.copy(x)
        case Discard(x):
            return K.discard(x)
        case Swap(x, y):
            return K.swap(x, y)
        case Compare(x):
            return K.compare(x)
        case Observe(x, point):
            return observe_kernel(x, point)
        case Compose(a, b):
            return K.compose(evaluate(a), evaluate(b))
        case Tensor(a, b):
            return K.tensor(evaluate(a), evaluate(b))
    raise IllTyped(f"not a term: {term!r}")


def observe_as_comparator(at: Obj, point) -> Term:
    """Express observation through the comparator: pair the wire with the
    expected point, compare, then discard the surviving wire."""
    out = _as_outcome(point, at, "point")
    point_gen = Gen("point:" + ",".join(out), K.dirac(at, out))
    return Compose(
        Compose(Tensor(Id(at), point_gen), Compare(at)),
        Discard(at),
    )


BOOL = Alphabet("bool", ("t", "f"))
BOOL_OBJ = Obj((BOOL,))
YES: Outcome = ("t",)
NO: Outcome = ("f",)


@dataclass(frozen=True)
class NormalForm:
    """A factored term: outcome kernel g, success predicate h, both total.

    The represented kernel sends x to g(- | x) scaled by h(t | x); on
    inputs where success is impossible, g holds an arbitrary default
    distribution that the scaling wipes out.
    """

    g: SubKernel
    h: SubKernel

    def __post_init__(self) -> None:
        if self.h.cod != BOOL_OBJ or self.h.dom != self.g.dom:
            raise IllTyped("normal form parts must share a domain; h is Boolean")
        if not (K.is_total(self.g) and K.is_total(self.h)):
            raise NonTotalGenerator("normal form parts must be total")


def _const_yes(dom: Obj) -> SubKernel:
    return SubKernel(
        dom, BOOL_OBJ, {x: {YES: Fraction(1)} for x in dom.outcomes()}
    )


def _indicator(at: Obj, point: Outcome) -> SubKernel:
    rows = {
        x: {YES if x == point else NO: Fraction(1)} for x in at.outcomes()
    }
    return SubKernel(at, BOOL_OBJ, rows)


def _success_probs(h: SubKernel) -> dict[Outcome, Fraction]:
    return {x: row.get(YES, Fraction(0)) for x, row in h.rows.items()}


def _bool_kernel(dom: Obj, probs: dict[Outcome, Fraction]) -> SubKernel:
    rows: dict[Outcome, Row] = {}
    for x in dom.outcomes():
        s = probs.get(x, Fraction(0))
        row: Row = {}
        if s:
            row[YES] = s
        if s != 1:
            row[NO] = 1 - s
        rows[x] = row
    return SubKernel(dom, BOOL_OBJ, rows)


def _uniform_row(cod: Obj) -> Row:
    n = cod.size
    return {y: Fraction(1, n) for y in cod.outcomes()}


def normal_form(term: Term) -> NormalForm:
    """Factor a constrained-process term into (g, h) by induction.

    Accepts terms whose generators are all total and whose only partial
    node is Observe; a comparator or a non-total generator raises
    NonTotalGenerator.  Raises IllTyped on type errors.
    """
    infer_type(term)
    return _nf(term)


def _nf(term: Term) -> NormalForm:
    match term:
        case Gen(name, k):
            if not K.is_total(k):
                raise NonTotalGenerator(f"generator {name!r} is not total")
            return NormalForm(k, _const_yes(k.dom))
        case Id(x) | Copy(x) | Discard(x):
            k = evaluate(term)
            return NormalForm(k, _const_yes(x))
        case Swap(x, y):
            k = evaluate(term)
            return NormalForm(k, _const_yes(x.tensor(y)))
        case Compare(_):
            raise NonTotalGenerator("comparator is not a constrained process")
        case Observe(x, point):
            return NormalForm(K.discard(x), _indicator(x, point))
        case Tensor(a, b):
            na, nb = _nf(a), _nf(b)
            sa, sb = _success_probs(na.h), _success_probs(nb.h)
            dom = na.g.dom.tensor(nb.g.dom)
            probs = {
                xa + xb: pa * pb
                for xa, pa in sa.items()
                for xb, pb in sb.items()
            }
            return NormalForm(K.tensor(na.g, nb.g), _bool_kernel(dom, probs))
        case Compose(a, b):
            return _nf_compose(_nf(a), _nf(b))
    raise IllTyped(f"not a term: {term!r}")


def _nf_compose(first: NormalForm, second: NormalForm) -> NormalForm:
    """Combine normal forms along a composition.

    The success probability through the middle object m is
    t(x) = sum_m g1(m | x) s2(m); where it is positive the outcome
    distribution is the t-weighted average of g2's rows, and the overall
    success probability is s1(x) * t(x).  Where t(x) = 0 the outcome row
    defaults to uniform to keep g total.
    """
    s1 = _success_probs(first.h)
    s2 = _success_probs(second.h)
    dom, cod = first.g.dom, second.g.cod
    g_rows: dict[Outcome, Row] = {}
    probs: dict[Outcome, Fraction] = {}
    for x, g1row in first.g.rows.items():
        t = Fraction(0)
        acc: Row = {}
        for m, p in g1row.items():
            w = p * s2[m]
            if not w:
                continue
            t += w
            for z, q in second.g.rows[m].items():
                acc[z] = acc.get(z, Fraction(0)) + w * q
        if t:
            g_rows[x] = {z: v / t for z, v in acc.items()}
        else:
            g_rows[x] = _uniform_row(cod)
        probs[x] = s1[x] * t
    return NormalForm(SubKernel(dom, cod, g_rows), _bool_kernel(dom, probs))


def eval_normal_form(nf: NormalForm) -> SubKernel:
    """The kernel a normal form denotes: copy ; (g (x) (h ; observe yes))."""
    restrict = K.compose(nf.h, observe_kernel(BOOL_OBJ, YES))
    return K.compose(K.copy(nf.g.dom), K.tensor(nf.g, restrict))
