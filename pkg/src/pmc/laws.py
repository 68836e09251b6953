"""Seeded random instances and a registry of exactly checked laws.

Every law is a function from a deterministic RNG to either None (the
instance passed) or a JSON-serializable counterexample payload holding
the generated data and both sides of the failed equation.  check_law
runs a law over derived per-case seeds, so identical (law, instances,
seed) triples produce byte-identical reports.

Randomness only ever flows through Random.random(), whose sequence is
guaranteed stable across CPython versions; all other draws are derived
from it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Callable, Optional

from . import conditioning as C
from . import diagram as D
from . import kernel as K
from .errors import BadDensity, ImpossibleEvidence, UnknownLaw
from .kernel import Alphabet, Obj, SubKernel, UNIT

MAX_DENOMINATOR = 64
DEFAULT_SEED = 7
DEFAULT_CASES = 200

_LABELS = ("a", "b", "c", "d")


def _stable_rng(*parts) -> Random:
    text = "|".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return Random(int.from_bytes(digest[:8], "big"))


def _rand_int(rng: Random, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi], derived from rng.random() only."""
    if hi <= lo:
        return lo
    return lo + int(rng.random() * (hi - lo + 1))


def _choice(rng: Random, seq):
    return seq[_rand_int(rng, 0, len(seq) - 1)]


def _describe_obj(o: Obj) -> str:
    return ";".join(f"{a.name}:{','.join(a.labels)}" for a in o.factors)


def _composition(rng: Random, total: int, parts: int) -> list[int]:
    """`parts` positive integers summing to `total` (requires total >= parts)."""
    out = []
    remaining = total
    for i in range(parts - 1):
        hi = remaining - (parts - 1 - i)
        w = _rand_int(rng, 1, hi)
        out.append(w)
        remaining -= w
    out.append(remaining)
    return out


def _rows(rng: Random, dom: Obj, cod: Obj, density: Fraction) -> dict:
    rows: dict = {}
    outcomes = list(cod.outcomes())
    for x in dom.outcomes():
        included = [y for y in outcomes if rng.random() < density]
        if not included:
            continue
        n = len(included)
        den = _rand_int(rng, max(2, n), MAX_DENOMINATOR)
        total = den if rng.random() < 0.5 else _rand_int(rng, n, den)
        weights = _composition(rng, total, n)
        rows[x] = {y: Fraction(w, den) for y, w in zip(included, weights)}
    return rows


def random_kernel(seed: int, dom: Obj, cod: Obj, density) -> SubKernel:
    """A reproducible random subdistribution kernel.

    Deterministic in (seed, dom, cod, density); each row mass is a
    rational <= 1 with denominator <= 64, and roughly a `density`
    fraction of all entries is nonzero.
    """
    density = Fraction(density)
    if not 0 <= density <= 1:
        raise BadDensity(f"density {density} outside [0, 1]")
    rng = _stable_rng(
        "kernel", seed, _describe_obj(dom), _describe_obj(cod), density
    )
    return SubKernel(dom, cod, _rows(rng, dom, cod, density))


def _rand_kernel(
    rng: Random, dom: Obj, cod: Obj, density: Optional[Fraction] = None
) -> SubKernel:
    if density is None:
        density = Fraction(_rand_int(rng, 4, 10), 10)
    return SubKernel(dom, cod, _rows(rng, dom, cod, density))


def _rand_total_kernel(rng: Random, dom: Obj, cod: Obj) -> SubKernel:
    """A random kernel with every row mass exactly one."""
    rows: dict = {}
    outcomes = list(cod.outcomes())
    for x in dom.outcomes():
        included = [y for y in outcomes if rng.random() < 0.7]
        if not included:
            included = [_choice(rng, outcomes)]
        n = len(included)
        den = _rand_int(rng, max(2, n), MAX_DENOMINATOR)
        weights = _composition(rng, den, n)
        rows[x] = {y: Fraction(w, den) for y, w in zip(included, weights)}
    return SubKernel(dom, cod, rows)


def _rand_deterministic(
    rng: Random, dom: Obj, cod: Obj, partial: bool = False
) -> SubKernel:
    rows: dict = {}
    outcomes = list(cod.outcomes())
    for x in dom.outcomes():
        if partial and rng.random() < 0.3:
            continue
        rows[x] = {_choice(rng, outcomes): Fraction(1)}
    return SubKernel(dom, cod, rows)


def _rand_alphabet(rng: Random, index: int, max_size: int = 4) -> Alphabet:
    size = _rand_int(rng, 1, max_size)
    return Alphabet(f"A{index}", _LABELS[:size])


def _rand_obj(rng: Random, index: int, max_size: int = 4) -> Obj:
    """Mostly one alphabet of size <= max_size, occasionally two small
    ones or the unit, so edge cases stay represented."""
    r = rng.random()
    if r < 0.08:
        return UNIT
    if r < 0.25:
        return Obj(
            (
                _rand_alphabet(rng, index, min(2, max_size)),
                _rand_alphabet(rng, index + 1, min(2, max_size)),
            )
        )
    return Obj((_rand_alphabet(rng, index, max_size),))


def _rand_point(rng: Random, at: Obj) -> tuple[str, ...]:
    return tuple(_choice(rng, a.labels) for a in at.factors)


# -- counterexample payloads -------------------------------------------------


def _as_payload(value):
    from . import codec  # local import: codec depends on other modules only

    if isinstance(value, SubKernel):
        return codec.kernel_to_json(value)
    if isinstance(value, Fraction):
        return codec.format_fraction(value)
    if isinstance(value, Obj):
        return codec.obj_to_json(value)
    if isinstance(value, tuple):
        return list(value)
    return value


def _mismatch(equation: str, **data) -> dict:
    return {"equation": equation, **{k: _as_payload(v) for k, v in data.items()}}


def _eq(equation: str, lhs: SubKernel, rhs: SubKernel, **data) -> Optional[dict]:
    if lhs == rhs:
        return None
    return _mismatch(equation, lhs=lhs, rhs=rhs, **data)


def _first(*results: Optional[dict]) -> Optional[dict]:
    for r in results:
        if r is not None:
            return r
    return None


# -- registry ----------------------------------------------------------------

LawFn = Callable[[Random], Optional[dict]]
REGISTRY: dict[str, LawFn] = {}


def law(name: str) -> Callable[[LawFn], LawFn]:
    def register(fn: LawFn) -> LawFn:
        REGISTRY[name] = fn
        return fn

    return register


@dataclass(frozen=True)
class Report:
    law: str
    instances: int
    passes: int
    failures: int
    counterexample: Optional[dict]


def check_law(name: str, instances: int, seed: int = DEFAULT_SEED) -> Report:
    """Run one registered law over `instances` derived cases.

    The counterexample, if any, is the lowest-index failing case with
    all generated kernels serialized in the CLI kernel schema.
    """
    if name not in REGISTRY:
        raise UnknownLaw(f"unknown law {name!r}; known: {sorted(REGISTRY)}")
    fn = REGISTRY[name]
    failures = 0
    counterexample: Optional[dict] = None
    for case in range(instances):
        payload = fn(_stable_rng("law", name, seed, case))
        if payload is not None:
            failures += 1
            if counterexample is None:
                counterexample = {"case": case, **payload}
    return Report(name, instances, instances - failures, failures, counterexample)


def check_all(instances: int, seed: int = DEFAULT_SEED) -> list[Report]:
    return [check_law(name, instances, seed) for name in REGISTRY]


# -- kernel category laws ----------------------------------------------------


@law("category")
def _law_category(rng: Random) -> Optional[dict]:
    x, y = _rand_obj(rng, 0), _rand_obj(rng, 2)
    z, w = _rand_obj(rng, 4), _rand_obj(rng, 6)
    f = _rand_kernel(rng, x, y)
    g = _rand_kernel(rng, y, z)
    h = _rand_kernel(rng, z, w)
    return _first(
        _eq(
            "(f;g);h = f;(g;h)",
            K.compose(K.compose(f, g), h),
            K.compose(f, K.compose(g, h)),
            f=f, g=g, h=h,
        ),
        _eq("id;f = f", K.compose(K.identity(x), f), f, f=f),
        _eq("f;id = f", K.compose(f, K.identity(y)), f, f=f),
    )


@law("comonoid")
def _law_comonoid(rng: Random) -> Optional[dict]:
    x = _rand_obj(rng, 0)
    cp, ident = K.copy(x), K.identity(x)
    return _first(
        _eq(
            "copy;(copy (x) id) = copy;(id (x) copy)",
            K.compose(cp, K.tensor(cp, ident)),
            K.compose(cp, K.tensor(ident, cp)),
            at=x,
        ),
        _eq(
            "copy;(discard (x) id) = id",
            K.compose(cp, K.tensor(K.discard(x), ident)),
            ident,
            at=x,
        ),
        _eq(
            "copy;(id (x) discard) = id",
            K.compose(cp, K.tensor(ident, K.discard(x))),
            ident,
            at=x,
        ),
        _eq("copy;swap = copy", K.compose(cp, K.swap(x, x)), cp, at=x),
    )


@law("uniformity")
def _law_uniformity(rng: Random) -> Optional[dict]:
    # Single-factor pieces keep the doubled comparator domains small.
    x = Obj((_rand_alphabet(rng, 0),)) if rng.random() < 0.9 else UNIT
    y = Obj((_rand_alphabet(rng, 1),)) if rng.random() < 0.9 else UNIT
    xy = x.tensor(y)
    mid_copy = K.tensor(K.identity(x), K.tensor(K.swap(x, y), K.identity(y)))
    mid_cmp = K.tensor(K.identity(x), K.tensor(K.swap(y, x), K.identity(y)))
    return _first(
        _eq(
            "copy(X(x)Y) = (copy X (x) copy Y);(id (x) swap (x) id)",
            K.copy(xy),
            K.compose(K.tensor(K.copy(x), K.copy(y)), mid_copy),
            at=xy,
        ),
        _eq(
            "discard(X(x)Y) = discard X (x) discard Y",
            K.discard(xy),
            K.tensor(K.discard(x), K.discard(y)),
            at=xy,
        ),
        _eq(
            "compare(X(x)Y) = (id (x) swap (x) id);(compare X (x) compare Y)",
            K.compare(xy),
            K.compose(mid_cmp, K.tensor(K.compare(x), K.compare(y))),
            at=xy,
        ),
        _eq("copy(I) = id(I)", K.copy(UNIT), K.identity(UNIT)),
        _eq("compare(I) = id(I)", K.compare(UNIT), K.identity(UNIT)),
    )


@law("frobenius")
def _law_frobenius(rng: Random) -> Optional[dict]:
    x = _rand_obj(rng, 0, max_size=3)
    cp, cmp_, ident = K.copy(x), K.compare(x), K.identity(x)
    return _first(
        _eq(
            "(copy (x) id);(id (x) compare) = compare;copy",
            K.compose(K.tensor(cp, ident), K.tensor(ident, cmp_)),
            K.compose(cmp_, cp),
            at=x,
        ),
        _eq(
            "(id (x) copy);(compare (x) id) = compare;copy",
            K.compose(K.tensor(ident, cp), K.tensor(cmp_, ident)),
            K.compose(cmp_, cp),
            at=x,
        ),
        _eq("copy;compare = id", K.compose(cp, cmp_), ident, at=x),
        _eq(
            "(compare (x) id);compare = (id (x) compare);compare",
            K.compose(K.tensor(cmp_, ident), cmp_),
            K.compose(K.tensor(ident, cmp_), cmp_),
            at=x,
        ),
        _eq("swap;compare = compare", K.compose(K.swap(x, x), cmp_), cmp_, at=x),
    )


@law("interchange")
def _law_interchange(rng: Random) -> Optional[dict]:
    a, b, c = _rand_obj(rng, 0), _rand_obj(rng, 2), _rand_obj(rng, 4)
    d, e, w = _rand_obj(rng, 6), _rand_obj(rng, 8), _rand_obj(rng, 10)
    f = _rand_kernel(rng, a, b)
    g = _rand_kernel(rng, c, d)
    h = _rand_kernel(rng, b, e)
    k = _rand_kernel(rng, d, w)
    return _eq(
        "(f (x) g);(h (x) k) = (f;h) (x) (g;k)",
        K.compose(K.tensor(f, g), K.tensor(h, k)),
        K.tensor(K.compose(f, h), K.compose(g, k)),
        f=f, g=g, h=h, k=k,
    )


@law("swap-naturality")
def _law_swap_naturality(rng: Random) -> Optional[dict]:
    a, b = _rand_obj(rng, 0), _rand_obj(rng, 2)
    c, d = _rand_obj(rng, 4), _rand_obj(rng, 6)
    f = _rand_kernel(rng, a, b)
    g = _rand_kernel(rng, c, d)
    return _eq(
        "(f (x) g);swap = swap;(g (x) f)",
        K.compose(K.tensor(f, g), K.swap(b, d)),
        K.compose(K.swap(a, c), K.tensor(g, f)),
        f=f, g=g,
    )


# -- conditioning laws -------------------------------------------------------


def _rand_joint(rng: Random) -> tuple[SubKernel, int]:
    """A random kernel with a multi-factor codomain plus a split point."""
    x = _rand_obj(rng, 0, max_size=3)
    n_cod = _choice(rng, (1, 2, 2, 3))
    cod = Obj(
        tuple(_rand_alphabet(rng, 10 + i, max_size=3) for i in range(n_cod))
    )
    f = _rand_kernel(rng, x, cod)
    split = _rand_int(rng, 0, n_cod)
    return f, split


@law("splitting")
def _law_splitting(rng: Random) -> Optional[dict]:
    f, split = _rand_joint(rng)
    m = C.marginal(f, split)
    c = C.conditional(f, split)
    return _eq(
        "cond_compose(marginal, conditional) = f",
        C.cond_compose(m, c),
        f,
        f=f, split=split, marginal=m, conditional=c,
    )


@law("quasi-total-conditional")
def _law_quasi_total_conditional(rng: Random) -> Optional[dict]:
    f, split = _rand_joint(rng)
    c = C.conditional(f, split)
    if not K.is_quasi_total(c):
        return _mismatch(
            "conditional is quasi-total", f=f, split=split, conditional=c
        )
    bad = [
        list(x)
        for x, row in c.rows.items()
        if sum(row.values(), Fraction(0)) != 1
    ]
    if bad:
        return _mismatch(
            "every conditional row has mass 0 or 1",
            f=f, split=split, conditional=c, rows=bad,
        )
    return None


@law("marginal-by-discard")
def _law_marginal_by_discard(rng: Random) -> Optional[dict]:
    f, split = _rand_joint(rng)
    kept = Obj(f.cod.factors[:split])
    dropped = Obj(f.cod.factors[split:])
    return _eq(
        "marginal(f, k) = f;(id (x) discard)",
        C.marginal(f, split),
        K.compose(f, K.tensor(K.identity(kept), K.discard(dropped))),
        f=f, split=split,
    )


@law("normalisation-equation")
def _law_normalisation_equation(rng: Random) -> Optional[dict]:
    x = _rand_obj(rng, 0)
    f = _rand_kernel(rng, x, _rand_obj(rng, 2))
    return _eq(
        "f = copy;(normalise(f) (x) (f;discard))",
        f,
        K.compose(
            K.copy(x), K.tensor(C.normalise(f), K.failure_probability(f))
        ),
        f=f,
    )


@law("normalisation-idempotent")
def _law_normalisation_idempotent(rng: Random) -> Optional[dict]:
    f = _rand_kernel(rng, _rand_obj(rng, 0), _rand_obj(rng, 2))
    nf = C.normalise(f)
    return _eq("normalise(normalise(f)) = normalise(f)", C.normalise(nf), nf, f=f)


@law("prop30-conditional-of-normalisation")
def _law_prop30(rng: Random) -> Optional[dict]:
    f, split = _rand_joint(rng)
    return _first(
        _eq(
            "conditional(normalise(f), k) = conditional(f, k)",
            C.conditional(C.normalise(f), split),
            C.conditional(f, split),
            f=f, split=split,
        ),
        _eq(
            "cond_compose(marginal(f, k), conditional(normalise(f), k)) = f",
            C.cond_compose(
                C.marginal(f, split), C.conditional(C.normalise(f), split)
            ),
            f,
            f=f, split=split,
        ),
    )


@law("bayes-inversion-equation")
def _law_bayes_inversion(rng: Random) -> Optional[dict]:
    x = Obj((_rand_alphabet(rng, 0),))
    y = Obj((_rand_alphabet(rng, 1),))
    prior = _rand_kernel(rng, UNIT, x)
    channel = _rand_kernel(rng, x, y)
    inv = C.bayes_invert(channel, prior)
    lhs = K.compose(
        K.compose(prior, K.copy(x)), K.tensor(K.identity(x), channel)
    )
    push = K.compose(prior, channel)
    rhs = K.compose(
        K.compose(push, K.copy(y)), K.tensor(inv, K.identity(y))
    )
    return _eq(
        "prior;copy;(id (x) c) = prior;c;copy;(inv (x) id)",
        lhs,
        rhs,
        prior=prior, channel=channel, inversion=inv,
    )


@law("compositional-inversion")
def _law_compositional_inversion(rng: Random) -> Optional[dict]:
    x = Obj((_rand_alphabet(rng, 0, max_size=3),))
    y = Obj((_rand_alphabet(rng, 1, max_size=3),))
    z = Obj((_rand_alphabet(rng, 2, max_size=3),))
    prior = _rand_kernel(rng, UNIT, x)
    c = _rand_kernel(rng, x, y)
    d = _rand_kernel(rng, y, z)
    cd = K.compose(c, d)
    # Composite candidate inverse: invert d against the pushed prior,
    # then invert c against the original prior.
    h = K.compose(C.bayes_invert(d, K.compose(prior, c)), C.bayes_invert(c, prior))
    lhs = K.compose(K.compose(prior, K.copy(x)), K.tensor(K.identity(x), cd))
    push = K.compose(prior, cd)
    rhs = K.compose(K.compose(push, K.copy(z)), K.tensor(h, K.identity(z)))
    return _eq(
        "inversion of c;d factors as inversion(d);inversion(c)",
        lhs,
        rhs,
        prior=prior, c=c, d=d, composite_inverse=h,
    )


@law("synthetic-bayes")
def _law_synthetic_bayes(rng: Random) -> Optional[dict]:
    x = Obj((_rand_alphabet(rng, 0),))
    y = Obj((_rand_alphabet(rng, 1),))
    prior = _rand_kernel(rng, UNIT, x)
    channel = _rand_kernel(rng, x, y)
    point = _rand_point(rng, y)
    term = D.Compose(
        D.Gen("prior", prior),
        D.Compose(
            D.Copy(x),
            D.Tensor(
                D.Id(x),
                D.Compose(D.Gen("channel", channel), D.Observe(y, point)),
            ),
        ),
    )
    constrained = D.evaluate(term)
    scalar = K.compose(prior, channel).prob((), point)
    inv_row = C.bayes_invert(channel, prior).rows.get(point, {})
    expected_row = {xo: scalar * p for xo, p in inv_row.items() if scalar * p}
    expected = SubKernel(UNIT, x, {(): expected_row} if expected_row else {})
    return _eq(
        "constrained state = scalar * inversion row",
        constrained,
        expected,
        prior=prior, channel=channel, point=point, scalar=scalar,
    )


@law("pearl-equals-jeffrey")
def _law_pearl_equals_jeffrey(rng: Random) -> Optional[dict]:
    x = Obj((_rand_alphabet(rng, 0),))
    y = Obj((_rand_alphabet(rng, 1),))
    prior = _rand_kernel(rng, UNIT, x)
    channel = _rand_kernel(rng, x, y)
    point = _rand_point(rng, y)
    predicate = D.observe_kernel(y, point)
    evidence = K.dirac(y, point)
    try:
        via_pearl = C.pearl_update(prior, channel, predicate)
    except ImpossibleEvidence:
        via_pearl = None
    try:
        via_jeffrey = C.jeffrey_update(prior, channel, evidence)
    except ImpossibleEvidence:
        via_jeffrey = None
    if (via_pearl is None) != (via_jeffrey is None):
        return _mismatch(
            "ImpossibleEvidence fires on both update rules together",
            prior=prior, channel=channel, point=point,
            pearl_defined=via_pearl is not None,
            jeffrey_defined=via_jeffrey is not None,
        )
    if via_pearl is None:
        return None
    return _eq(
        "pearl update = jeffrey update on deterministic evidence",
        via_pearl,
        via_jeffrey,
        prior=prior, channel=channel, point=point,
    )


@law("quasi-total-iff-deterministic-failure")
def _law_quasi_total_iff(rng: Random) -> Optional[dict]:
    x, y = _rand_obj(rng, 0), _rand_obj(rng, 2)
    f = _rand_kernel(rng, x, y)
    candidates = (f, C.normalise(f), _rand_deterministic(rng, x, y, partial=True))
    for g in candidates:
        qt = K.is_quasi_total(g)
        det_failure = K.is_deterministic(K.failure_probability(g))
        if qt != det_failure:
            return _mismatch(
                "quasi-total iff failure probability deterministic",
                kernel=g, quasi_total=qt, deterministic_failure=det_failure,
            )
    return None


# -- predicate and determinism laws -----------------------------------------


@law("predicate-diagram-agreement")
def _law_predicate_diagram(rng: Random) -> Optional[dict]:
    x, y = _rand_obj(rng, 0), _rand_obj(rng, 2)
    f = _rand_kernel(rng, x, y)
    for g in (f, C.normalise(f), _rand_total_kernel(rng, x, y)):
        total_eq = K.failure_probability(g) == K.discard(g.dom)
        if K.is_total(g) != total_eq:
            return _mismatch(
                "is_total agrees with f;discard = discard",
                kernel=g, predicate=K.is_total(g), diagram=total_eq,
            )
        det_eq = K.compose(g, K.copy(g.cod)) == K.compose(
            K.copy(g.dom), K.tensor(g, g)
        )
        if K.is_deterministic(g) != det_eq:
            return _mismatch(
                "is_deterministic agrees with f;copy = copy;(f (x) f)",
                kernel=g, predicate=K.is_deterministic(g), diagram=det_eq,
            )
        qt_eq = g == K.compose(
            K.copy(g.dom), K.tensor(g, K.failure_probability(g))
        )
        if K.is_quasi_total(g) != qt_eq:
            return _mismatch(
                "is_quasi_total agrees with copy;(f (x) (f;discard)) = f",
                kernel=g, predicate=K.is_quasi_total(g), diagram=qt_eq,
            )
    return None


@law("deterministic-copyable")
def _law_deterministic_copyable(rng: Random) -> Optional[dict]:
    x, y = _rand_obj(rng, 0), _rand_obj(rng, 2)
    for partial in (False, True):
        f = _rand_deterministic(rng, x, y, partial=partial)
        result = _eq(
            "f;copy = copy;(f (x) f) for deterministic f",
            K.compose(f, K.copy(y)),
            K.compose(K.copy(x), K.tensor(f, f)),
            f=f,
        )
        if result is not None:
            return result
    return None


# -- diagram laws ------------------------------------------------------------


@law("observe-axiom")
def _law_observe_axiom(rng: Random) -> Optional[dict]:
    y = _rand_obj(rng, 0)
    point = _rand_point(rng, y)
    hit = _eq(
        "dirac(y);observe(y) = id(I)",
        K.compose(K.dirac(y, point), D.observe_kernel(y, point)),
        K.identity(UNIT),
        at=y, point=point,
    )
    if hit is not None:
        return hit
    if y.size > 1:
        other = next(o for o in y.outcomes() if o != point)
        return _eq(
            "dirac(z);observe(y) = 0 for z != y",
            K.compose(K.dirac(y, other), D.observe_kernel(y, point)),
            SubKernel(UNIT, UNIT, {}),
            at=y, point=point, other=other,
        )
    return None


@law("embedding-faithfulness")
def _law_embedding_faithfulness(rng: Random) -> Optional[dict]:
    y = _rand_obj(rng, 0)
    point = _rand_point(rng, y)
    direct = D.evaluate(D.Observe(y, point))
    encoded = D.evaluate(D.observe_as_comparator(y, point))
    result = _eq(
        "observe = (id (x) point);compare;discard",
        direct,
        encoded,
        at=y, point=point,
    )
    if result is not None:
        return result
    if y.size > 1:
        other = next(o for o in y.outcomes() if o != point)
        if D.evaluate(D.Observe(y, other)) == direct:
            return _mismatch(
                "distinct points give distinct observations",
                at=y, point=point, other=other,
            )
    return None


# -- random constrained-process terms ---------------------------------------


def _alphabet_pool(rng: Random) -> list[Alphabet]:
    pool = []
    for i in range(3):
        size = _rand_int(rng, 1, 3)
        pool.append(Alphabet(f"T{i}", _LABELS[:size]))
    return pool


def _pool_obj(rng: Random, pool, max_width: int = 3, allow_unit: bool = True):
    weights = (0, 1, 1, 1, 2, 2) if allow_unit else (1, 1, 1, 2, 2)
    n = min(_choice(rng, weights), max_width)
    return Obj(tuple(_choice(rng, pool) for _ in range(n)))


def _rand_leaf(rng: Random, dom: Obj, pool, counter) -> tuple[D.Term, Obj]:
    options = ["gen", "gen", "id", "discard", "observe"]
    if 2 * len(dom.factors) <= 3:
        options.append("copy")
    if len(dom.factors) >= 2:
        options.append("swap")
    choice = _choice(rng, options)
    if choice == "gen":
        cod = _pool_obj(rng, pool, max_width=2)
        counter[0] += 1
        k = _rand_total_kernel(rng, dom, cod)
        return D.Gen(f"g{counter[0]}", k), cod
    if choice == "id":
        return D.Id(dom), dom
    if choice == "discard":
        return D.Discard(dom), UNIT
    if choice == "observe":
        return D.Observe(dom, _rand_point(rng, dom)), UNIT
    if choice == "copy":
        return D.Copy(dom), dom.tensor(dom)
    split = _rand_int(rng, 1, len(dom.factors) - 1)
    left, right = Obj(dom.factors[:split]), Obj(dom.factors[split:])
    return D.Swap(left, right), right.tensor(left)


def _rand_term(
    rng: Random, depth: int, dom: Optional[Obj], pool, counter
) -> tuple[D.Term, Obj]:
    if dom is None:
        dom = _pool_obj(rng, pool)
    if depth <= 0:
        return _rand_leaf(rng, dom, pool, counter)
    r = rng.random()
    if r < 0.45:
        first, mid = _rand_term(rng, depth - 1, dom, pool, counter)
        second, cod = _rand_term(rng, depth - 1, mid, pool, counter)
        return D.Compose(first, second), cod
    if r < 0.7 and len(dom.factors) >= 1:
        split = _rand_int(rng, 0, len(dom.factors))
        left, cl = _rand_term(
            rng, depth - 1, Obj(dom.factors[:split]), pool, counter
        )
        right, cr = _rand_term(
            rng, depth - 1, Obj(dom.factors[split:]), pool, counter
        )
        if len(cl.factors) + len(cr.factors) <= 3:
            return D.Tensor(left, right), cl.tensor(cr)
    return _rand_leaf(rng, dom, pool, counter)


def random_cproc_term(seed: int, depth: int = 5) -> D.Term:
    """A reproducible random constrained-process term: total generators,
    structural maps, and observations; never a comparator."""
    rng = _stable_rng("term", seed, depth)
    term, _ = _rand_term(rng, depth, None, _alphabet_pool(rng), [0])
    return term


@law("normal-form-soundness")
def _law_normal_form(rng: Random) -> Optional[dict]:
    pool = _alphabet_pool(rng)
    depth = _rand_int(rng, 1, 4)
    term, _ = _rand_term(rng, depth, None, pool, [0])
    nf = D.normal_form(term)
    direct = D.evaluate(term)
    result = _eq(
        "eval_normal_form(normal_form(t)) = evaluate(t)",
        D.eval_normal_form(nf),
        direct,
        g=nf.g, h=nf.h,
    )
    if result is not None:
        return result
    norm = C.normalise(direct)
    for x, hrow in nf.h.rows.items():
        if hrow.get(D.YES, Fraction(0)) > 0 and nf.g.rows[x] != norm.rows.get(x):
            return _mismatch(
                "g matches normalise(evaluate(t)) on positive-success rows",
                g=nf.g, h=nf.h, normalised=norm, at_input=x,
            )
    return None
