"""Marginals, conditionals, normalisation, and Bayesian inversion.

All operations are exact.  Conditioning on an outcome of probability
zero never invents numbers: the affected row is simply all-fail, except
for the two update rules, which raise ImpossibleEvidence when the whole
posterior would be undefined.
"""

from __future__ import annotations

from fractions import Fraction

from . import kernel as K
from .errors import BadSplit, ImpossibleEvidence, NotTotal, TypeMismatch
from .kernel import Obj, Outcome, Row, SubKernel, UNIT


def _check_split(f: SubKernel, split: int) -> None:
    if not 0 <= split <= len(f.cod.factors):
        raise BadSplit(
            f"split {split} outside 0..{len(f.cod.factors)} for codomain {f.cod!r}"
        )


def marginal(f: SubKernel, split: int) -> SubKernel:
    """Project the codomain onto its first `split` factors by summation.

    Equals f ; (id (x) discard) on the dropped factors; split 0 gives the
    success-mass kernel, split len(cod) gives f itself.
    """
    _check_split(f, split)
    rows: dict[Outcome, Row] = {}
    for x, row in f.rows.items():
        acc: Row = {}
        for y, p in row.items():
            a = y[:split]
            acc[a] = acc.get(a, Fraction(0)) + p
        rows[x] = acc
    return SubKernel(f.dom, Obj(f.cod.factors[:split]), rows)


def conditional(f: SubKernel, split: int) -> SubKernel:
    """The canonical conditional of f at the given codomain split.

    For f : X -> A (x) B (A the first `split` factors) this returns
    c : A (x) X -> B with c(b | a, x) = f(a, b | x) / marginal(a | x).
    Inputs whose marginal is zero get an all-fail row, which makes the
    conditional quasi-total.
    """
    _check_split(f, split)
    a_obj = Obj(f.cod.factors[:split])
    b_obj = Obj(f.cod.factors[split:])
    rows: dict[Outcome, Row] = {}
    for x, row in f.rows.items():
        masses: dict[Outcome, Fraction] = {}
        groups: dict[Outcome, Row] = {}
        for y, p in row.items():
            a, b = y[:split], y[split:]
            masses[a] = masses.get(a, Fraction(0)) + p
            groups.setdefault(a, {})[b] = p
        for a, m in masses.items():
            rows[a + x] = {b: p / m for b, p in groups[a].items()}
    return SubKernel(Obj(a_obj.factors + f.dom.factors), b_obj, rows)


def cond_compose(m: SubKernel, c: SubKernel) -> SubKernel:
    """Recombine a marginal m : X -> A with a conditional c : A (x) X -> B
    into the joint X -> A (x) B with value m(a | x) * c(b | a, x)."""
    if c.dom.factors != m.cod.factors + m.dom.factors:
        raise TypeMismatch(
            f"conditional domain {c.dom!r} is not {m.cod!r} (x) {m.dom!r}"
        )
    rows: dict[Outcome, Row] = {}
    for x, mrow in m.rows.items():
        acc: Row = {}
        for a, p in mrow.items():
            crow = c.rows.get(a + x)
            if not crow:
                continue
            for b, q in crow.items():
                acc[a + b] = p * q
        if acc:
            rows[x] = acc
    return SubKernel(m.dom, m.cod.tensor(c.cod), rows)


def normalise(f: SubKernel) -> SubKernel:
    """Divide every row by its mass; all-fail rows stay all-fail.

    The result is quasi-total and normalisation is idempotent.
    """
    rows: dict[Outcome, Row] = {}
    for x, row in f.rows.items():
        m = sum(row.values(), Fraction(0))
        rows[x] = {y: p / m for y, p in row.items()}
    return SubKernel(f.dom, f.cod, rows)


def bayes_invert(channel: SubKernel, prior: SubKernel) -> SubKernel:
    """Bayesian inversion of channel : X -> Y with respect to a prior
    state on X: the kernel Y -> X with

        inv(x | y) = channel(y | x) * prior(x) / pushforward(y),

    where pushforward = prior ; channel.  Outputs y outside the support
    of the pushforward get an all-fail row.
    """
    if prior.dom != UNIT or prior.cod != channel.dom:
        raise TypeMismatch(
            f"prior must be a state on {channel.dom!r}, got "
            f"{prior.dom!r} -> {prior.cod!r}"
        )
    joint: dict[Outcome, Row] = {}
    push: dict[Outcome, Fraction] = {}
    for x, px in prior.rows.get((), {}).items():
        for y, q in channel.rows.get(x, {}).items():
            w = px * q
            joint.setdefault(y, {})[x] = w
            push[y] = push.get(y, Fraction(0)) + w
    rows = {
        y: {x: w / push[y] for x, w in row.items()} for y, row in joint.items()
    }
    return SubKernel(channel.cod, channel.dom, rows)


def pearl_update(
    prior: SubKernel, channel: SubKernel, predicate: SubKernel
) -> SubKernel:
    """Condition the prior on a soft predicate over the channel output.

    predicate : Y -> I assigns each outcome a success probability; the
    posterior is prior(x) * sum_y channel(y | x) predicate(y), renormalised.
    Raises ImpossibleEvidence when the total weight is zero.
    """
    if prior.dom != UNIT or prior.cod != channel.dom:
        raise TypeMismatch("prior must be a state on the channel domain")
    if predicate.dom != channel.cod or predicate.cod != UNIT:
        raise TypeMismatch("predicate must map the channel codomain to scalars")
    weights: Row = {}
    for x, px in prior.rows.get((), {}).items():
        w = Fraction(0)
        for y, q in channel.rows.get(x, {}).items():
            w += q * predicate.rows.get(y, {}).get((), Fraction(0))
        if w:
            weights[x] = px * w
    total = sum(weights.values(), Fraction(0))
    if total == 0:
        raise ImpossibleEvidence(
            "predicate has zero probability under prior and channel"
        )
    return SubKernel(
        UNIT, prior.cod, {(): {x: w / total for x, w in weights.items()}}
    )


def jeffrey_update(
    prior: SubKernel, channel: SubKernel, evidence: SubKernel
) -> SubKernel:
    """Replace the pushforward with a target distribution on outputs.

    evidence : I -> Y must be total; the posterior is
    sum_y evidence(y) * inv(x | y) with inv the Bayesian inversion.
    Raises ImpossibleEvidence if evidence charges an output with zero
    pushforward probability (its inversion row is all-fail).
    """
    if evidence.dom != UNIT or evidence.cod != channel.cod:
        raise TypeMismatch("evidence must be a state on the channel codomain")
    if not K.is_total(evidence):
        raise NotTotal("evidence state must be total")
    inv = bayes_invert(channel, prior)
    acc: Row = {}
    for y, t in evidence.rows.get((), {}).items():
        row = inv.rows.get(y)
        if row is None:
            raise ImpossibleEvidence(
                f"evidence outcome {y!r} has zero pushforward probability"
            )
        for x, p in row.items():
            acc[x] = acc.get(x, Fraction(0)) + t * p
    return SubKernel(UNIT, prior.cod, {(): acc})
