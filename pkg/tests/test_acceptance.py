"""Acceptance gate: headline guarantees, one printed line per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as the
criteria execute.  Every check is exact — no tolerances anywhere — and
the two stress criteria carry wall-clock budgets.
"""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from fractions import Fraction as F

from pmc import codec, edt, laws
from pmc import cli
from pmc import conditioning as C
from pmc import diagram as D
from pmc import kernel as K
from pmc.errors import ImpossibleEvidence
from pmc.kernel import Alphabet, UNIT, obj

X = Alphabet("x", ("x1", "x2"))
Y = Alphabet("y", ("y1", "y2", "y3"))
XO, YO = obj(X), obj(Y)


@contextmanager
def criterion(number: int, text: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number}: FAIL - {text}")
        raise
    print(f"ACCEPTANCE {number}: PASS - {text}")


def test_01_law_suite_exact_and_fast():
    with criterion(1, "all registered laws, 200 cases, seed 7, under 30 s"):
        start = time.monotonic()
        reports = laws.check_all(200, 7)
        elapsed = time.monotonic() - start
        assert len(reports) >= 18
        bad = [r.law for r in reports if r.failures]
        assert not bad, f"failing laws: {bad}"
        assert all(r.instances == 200 for r in reports)
        assert len(laws._LABELS) <= 4  # alphabets stay at size <= 4
        assert elapsed < 30, f"law suite took {elapsed:.1f} s"


def test_02_synthetic_bayes_200_instances():
    with criterion(
        2,
        "200 instances: constrained state = scalar x inversion row, "
        "scalar-zero included",
    ):
        zeros = 0
        for i in range(200):
            prior = laws.random_kernel(1000 + i, UNIT, XO, F(1, 2))
            channel = laws.random_kernel(2000 + i, XO, YO, F(1, 2))
            point = (Y.labels[i % 3],)
            term = D.Compose(
                D.Gen("prior", prior),
                D.Compose(
                    D.Copy(XO),
                    D.Tensor(
                        D.Id(XO),
                        D.Compose(D.Gen("channel", channel), D.Observe(YO, point)),
                    ),
                ),
            )
            constrained = D.evaluate(term)
            scalar = K.compose(prior, channel).prob((), point)
            inv_row = C.bayes_invert(channel, prior).rows.get(point, {})
            row = {x: scalar * p for x, p in inv_row.items() if scalar * p}
            expected = K.SubKernel(UNIT, XO, {(): row} if row else {})
            assert constrained == expected, f"instance {i}"
            if scalar == 0:
                zeros += 1
        assert 0 < zeros < 200, f"scalar-zero coverage: {zeros}/200"


def test_03_pearl_equals_jeffrey_100_instances():
    with criterion(
        3,
        "100 deterministic-evidence instances: pearl = jeffrey exactly, "
        "impossible evidence raised on both sides together",
    ):
        defined = impossible = 0
        for i in range(100):
            prior = laws.random_kernel(3000 + i, UNIT, XO, F(2, 3))
            channel = laws.random_kernel(4000 + i, XO, YO, F(2, 3))
            point = (Y.labels[i % 3],)
            predicate = D.observe_kernel(YO, point)
            evidence = K.dirac(YO, point)
            try:
                via_pearl = C.pearl_update(prior, channel, predicate)
            except ImpossibleEvidence:
                via_pearl = None
            try:
                via_jeffrey = C.jeffrey_update(prior, channel, evidence)
            except ImpossibleEvidence:
                via_jeffrey = None
            assert (via_pearl is None) == (via_jeffrey is None), f"instance {i}"
            if via_pearl is None:
                impossible += 1
            else:
                defined += 1
                assert via_pearl == via_jeffrey, f"instance {i}"
        assert defined > 0 and impossible > 0, (defined, impossible)


def test_04_normal_form_soundness_100_terms():
    with criterion(
        4,
        "100 random constrained-process terms, depth <= 5: "
        "normal form evaluates back exactly, under 10 s",
    ):
        start = time.monotonic()
        for seed in range(100):
            term = laws.random_cproc_term(seed, depth=5)
            nf = D.normal_form(term)
            direct = D.evaluate(term)
            assert D.eval_normal_form(nf) == direct, f"seed {seed}"
            norm = C.normalise(direct)
            for x, row in nf.h.rows.items():
                if row.get(D.YES, F(0)) > 0:
                    assert nf.g.rows[x] == norm.rows.get(x), f"seed {seed}"
        elapsed = time.monotonic() - start
        assert elapsed < 10, f"normal-form sweep took {elapsed:.1f} s"


def test_05_newcomb_via_cli(tmp_path, capsys):
    with criterion(
        5, "newcomb solved through the command line: one-box, table 1000 vs 1"
    ):
        assert cli.main(["corpus", "newcomb"]) == 0
        problem_doc = capsys.readouterr().out
        path = tmp_path / "newcomb.json"
        path.write_text(problem_doc)
        assert cli.main(["solve", str(path)]) == 0
        assert capsys.readouterr().out == (
            "one-box\t1/2\t1000\n"
            "two-box\t1/2\t1\n"
            "prescribed:\tone-box\n"
        )


def test_06_monty_hall():
    with criterion(6, "monty hall: switch, 2000/3 against 1000/3"):
        pres = edt.solve(edt.monty_hall())
        values = {v.action: v.expected_utility for v in pres.table}
        assert values == {"switch": F(2000, 3), "stay": F(1000, 3)}
        assert pres.chosen == "switch"


def test_07_death_in_damascus():
    with criterion(
        7,
        "death in damascus: stay (0 against -1); "
        "fair-coin variant values use-coin at 999/2",
    ):
        pres = edt.solve(edt.death_in_damascus())
        values = {v.action: v.expected_utility for v in pres.table}
        assert values == {"stay": F(0), "flee": F(-1)}
        assert pres.chosen == "stay"

        coin = edt.solve(edt.death_in_damascus_coin())
        coin_values = {v.action: v.expected_utility for v in coin.table}
        assert coin_values["use-coin"] == F(999, 2)
        assert coin.chosen == "use-coin"


def test_08_smoking_lesion():
    with criterion(
        8,
        "smoking lesion: refrain by default; "
        "independent action flips the prescription to smoke",
    ):
        pres = edt.solve(edt.smoking_lesion())
        values = {v.action: v.expected_utility for v in pres.table}
        assert values == {"smoke": F(-819), "refrain": F(-180)}
        assert pres.chosen == "refrain"

        flipped = edt.solve(
            edt.smoking_lesion(
                smoke_given_desire=F(1, 2), smoke_given_no_desire=F(1, 2)
            )
        )
        flipped_values = {v.action: v.expected_utility for v in flipped.table}
        assert flipped_values == {"smoke": F(-499), "refrain": F(-500)}
        assert flipped.chosen == "smoke"


def test_09_serialization_round_trips():
    with criterion(
        9,
        "100 random kernels and every built-in problem re-emit "
        "byte-identically",
    ):
        a2 = Alphabet("a2", ("a", "b"))
        a3 = Alphabet("a3", ("x", "y", "z"))
        shapes = [
            (UNIT, obj(a2)),
            (obj(a2), obj(a3)),
            (obj(a3), obj(a2, a3)),
            (obj(a2, a2), obj(a3)),
        ]
        for seed in range(100):
            dom, cod = shapes[seed % len(shapes)]
            density = F(seed % 6, 5)  # sweeps 0, 1/5, ..., 1
            k = laws.random_kernel(seed, dom, cod, density)
            text = codec.to_text(codec.kernel_to_json(k))
            reparsed = codec.kernel_from_json(json.loads(text))
            assert reparsed == k
            assert codec.to_text(codec.kernel_to_json(reparsed)) == text
        for build in edt.CORPUS.values():
            problem = build()
            text = codec.to_text(codec.problem_to_json(problem))
            reparsed = codec.problem_from_json(json.loads(text))
            assert codec.to_text(codec.problem_to_json(reparsed)) == text
