"""Command-line interface: exit codes, output bytes, and option handling."""

from __future__ import annotations

import json
from fractions import Fraction

from pmc import cli, codec, edt, laws
from pmc import kernel as K
from pmc.kernel import Alphabet, UNIT, obj, state

B = Alphabet("bool", ("t", "f"))
BO = obj(B)


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def coin_kernel():
    return state(BO, {"t": Fraction(1, 2), "f": Fraction(1, 2)})


def coin_env(tmp_path):
    return write_json(
        tmp_path / "env.json",
        codec.env_to_json({"bool": B}, {"coin": coin_kernel()}),
    )


def observe_term(tmp_path):
    doc = {
        "op": "compose",
        "terms": [
            {"op": "gen", "name": "coin"},
            {"op": "copy", "obj": ["bool"]},
            {
                "op": "tensor",
                "terms": [
                    {"op": "id", "obj": ["bool"]},
                    {"op": "observe", "obj": ["bool"], "point": ["t"]},
                ],
            },
        ],
    }
    return write_json(tmp_path / "term.json", doc)


# -- eval --------------------------------------------------------------------


def test_eval_outputs_kernel_json(tmp_path, capsys):
    code = cli.main(["eval", observe_term(tmp_path), "--env", coin_env(tmp_path)])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    k = codec.kernel_from_json(doc)
    assert k.prob((), "t") == Fraction(1, 2)
    assert k.mass(()) == Fraction(1, 2)


def test_eval_ill_typed_exits_1(tmp_path, capsys):
    term = write_json(
        tmp_path / "bad.json",
        {
            "op": "compose",
            "terms": [
                {"op": "copy", "obj": ["bool"]},
                {"op": "copy", "obj": ["bool"]},
            ],
        },
    )
    code = cli.main(["eval", term, "--env", coin_env(tmp_path)])
    assert code == 1
    assert capsys.readouterr().err.startswith("error: IllTyped:")


def test_eval_bad_kernel_exits_1(tmp_path, capsys):
    env = write_json(
        tmp_path / "env.json",
        {
            "kernels": {
                "bad": {
                    "dom": [],
                    "cod": [{"name": "b", "labels": ["t", "f"]}],
                    "rows": [{"in": [], "out": [{"val": ["t"], "p": "5/4"}]}],
                }
            }
        },
    )
    term = write_json(tmp_path / "t.json", {"op": "gen", "name": "bad"})
    assert cli.main(["eval", term, "--env", env]) == 1
    assert "RowMassExceedsOne" in capsys.readouterr().err


def test_eval_missing_file_exits_1(tmp_path, capsys):
    code = cli.main(["eval", str(tmp_path / "absent.json")])
    assert code == 1
    assert "SchemaError" in capsys.readouterr().err


# -- normalise / invert / update --------------------------------------------


def test_normalise_command(tmp_path, capsys):
    k = state(BO, {"t": Fraction(1, 4), "f": Fraction(1, 4)})
    path = write_json(tmp_path / "k.json", codec.kernel_to_json(k))
    assert cli.main(["normalise", path]) == 0
    out = codec.kernel_from_json(json.loads(capsys.readouterr().out))
    assert out.prob((), "t") == Fraction(1, 2)
    assert out.mass(()) == 1


def invert_files(tmp_path):
    x = Alphabet("x", ("x1", "x2"))
    y = Alphabet("y", ("y1", "y2"))
    prior = state(obj(x), {"x1": Fraction(1, 2), "x2": Fraction(1, 2)})
    channel = K.make_kernel(
        obj(x),
        obj(y),
        {
            "x1": {"y1": Fraction(2, 3), "y2": Fraction(1, 3)},
            "x2": {"y1": Fraction(1, 3), "y2": Fraction(2, 3)},
        },
    )
    return (
        write_json(tmp_path / "prior.json", codec.kernel_to_json(prior)),
        write_json(tmp_path / "channel.json", codec.kernel_to_json(channel)),
    )


def test_invert_command(tmp_path, capsys):
    prior, channel = invert_files(tmp_path)
    assert cli.main(["invert", "--channel", channel, "--prior", prior]) == 0
    inv = codec.kernel_from_json(json.loads(capsys.readouterr().out))
    assert inv.prob(("y1",), "x1") == Fraction(2, 3)
    assert inv.prob(("y2",), "x1") == Fraction(1, 3)


def test_update_pearl(tmp_path, capsys):
    prior, channel = invert_files(tmp_path)
    # Hard evidence "output was y1" as an effect: y -> success probability.
    evidence = write_json(
        tmp_path / "ev.json",
        codec.kernel_to_json(
            K.make_kernel(
                obj(Alphabet("y", ("y1", "y2"))), UNIT, {"y1": {(): 1}}
            )
        ),
    )
    code = cli.main(
        [
            "update",
            "--rule",
            "pearl",
            "--prior",
            prior,
            "--channel",
            channel,
            "--evidence",
            evidence,
        ]
    )
    assert code == 0
    posterior = codec.kernel_from_json(json.loads(capsys.readouterr().out))
    assert posterior.prob((), "x1") == Fraction(2, 3)
    assert posterior.prob((), "x2") == Fraction(1, 3)


def test_update_jeffrey(tmp_path, capsys):
    prior, channel = invert_files(tmp_path)
    target = write_json(
        tmp_path / "target.json",
        codec.kernel_to_json(state(obj(Alphabet("y", ("y1", "y2"))), {"y1": 1})),
    )
    code = cli.main(
        [
            "update",
            "--rule",
            "jeffrey",
            "--prior",
            prior,
            "--channel",
            channel,
            "--evidence",
            target,
        ]
    )
    assert code == 0
    posterior = codec.kernel_from_json(json.loads(capsys.readouterr().out))
    assert posterior.prob((), "x1") == Fraction(2, 3)


def test_update_impossible_evidence_exits_2(tmp_path, capsys):
    x = Alphabet("x", ("x1",))
    y = Alphabet("y", ("y1", "y2"))
    prior = write_json(
        tmp_path / "p.json", codec.kernel_to_json(state(obj(x), {"x1": 1}))
    )
    channel = write_json(
        tmp_path / "c.json",
        codec.kernel_to_json(K.make_kernel(obj(x), obj(y), {"x1": {"y1": 1}})),
    )
    evidence = write_json(
        tmp_path / "e.json",
        codec.kernel_to_json(
            K.make_kernel(obj(y), UNIT, {"y2": {(): 1}})
        ),
    )
    code = cli.main(
        [
            "update",
            "--rule",
            "pearl",
            "--prior",
            prior,
            "--channel",
            channel,
            "--evidence",
            evidence,
        ]
    )
    assert code == 2
    assert "ImpossibleEvidence" in capsys.readouterr().err


def test_update_missing_required_flag_exits_1(tmp_path, capsys):
    prior, channel = invert_files(tmp_path)
    code = cli.main(["update", "--rule", "jeffrey", "--prior", prior, "--channel", channel])
    assert code == 1
    assert "--evidence" in capsys.readouterr().err


# -- solve / corpus ----------------------------------------------------------


def test_solve_tsv_bytes(tmp_path, capsys):
    path = write_json(tmp_path / "newcomb.json", codec.problem_to_json(edt.newcomb()))
    assert cli.main(["solve", path]) == 0
    assert capsys.readouterr().out == (
        "one-box\t1/2\t1000\n"
        "two-box\t1/2\t1\n"
        "prescribed:\tone-box\n"
    )


def test_solve_json_format_stable(tmp_path, capsys):
    path = write_json(tmp_path / "newcomb.json", codec.problem_to_json(edt.newcomb()))
    outs = []
    for _ in range(2):
        assert cli.main(["solve", path, "--format", "json"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert doc["prescribed"] == ["one-box"]
    assert doc["chosen"] == "one-box"
    assert doc["table"][0] == {
        "action": "one-box",
        "mass": "1/2",
        "expected_utility": "1000",
    }


def test_corpus_emits_and_solves(tmp_path, capsys):
    for name in edt.CORPUS:
        assert cli.main(["corpus", name]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["name"] == name
        path = write_json(tmp_path / f"{name}.json", doc)
        assert cli.main(["solve", path]) == 0
        out = capsys.readouterr().out
        assert out.endswith(f"prescribed:\t{edt.solve(edt.CORPUS[name]()).chosen}\n")


def test_corpus_unknown_name(capsys):
    assert cli.main(["corpus", "nopesville"]) == 1
    err = capsys.readouterr().err
    assert "SchemaError" in err
    assert "newcomb" in err  # lists the known names


def test_corpus_printed_table_variant(tmp_path, capsys):
    assert cli.main(["corpus", "death-in-damascus", "--printed-table"]) == 0
    doc = json.loads(capsys.readouterr().out)
    path = write_json(tmp_path / "dd.json", doc)
    assert cli.main(["solve", path]) == 0
    assert capsys.readouterr().out.endswith("prescribed:\tflee\n")


def test_corpus_printed_table_misuse(capsys):
    assert cli.main(["corpus", "newcomb", "--printed-table"]) == 1
    assert "SchemaError" in capsys.readouterr().err


# -- laws --------------------------------------------------------------------


def test_laws_single_law(capsys):
    assert cli.main(["laws", "--law", "comonoid", "--cases", "5"]) == 0
    assert capsys.readouterr().out == "comonoid: pass (5/5)\n"


def test_laws_unknown_law(capsys):
    assert cli.main(["laws", "--law", "flux-capacitance"]) == 1
    assert "UnknownLaw" in capsys.readouterr().err


def test_laws_seed_sources(capsys, monkeypatch):
    monkeypatch.setenv("PMC_SEED", "not-a-number")
    assert cli.main(["laws", "--law", "comonoid", "--cases", "2"]) == 1
    assert "SchemaError" in capsys.readouterr().err

    monkeypatch.setenv("PMC_SEED", "11")
    assert cli.main(["laws", "--law", "comonoid", "--cases", "2"]) == 0
    capsys.readouterr()

    # explicit flag wins over the environment variable
    monkeypatch.setenv("PMC_SEED", "not-a-number")
    assert cli.main(["laws", "--law", "comonoid", "--cases", "2", "--seed", "3"]) == 0
    capsys.readouterr()


def test_laws_all_json(capsys):
    assert cli.main(["laws", "--cases", "2", "--format", "json"]) == 0
    docs = json.loads(capsys.readouterr().out)
    assert [d["law"] for d in docs] == list(laws.REGISTRY)
    assert all(d["failures"] == 0 for d in docs)


def test_laws_failure_exit_code(capsys, monkeypatch):
    def broken(_rng):
        return {"equation": "x = y", "note": "forced failure"}

    monkeypatch.setitem(laws.REGISTRY, "comonoid", broken)
    assert cli.main(["laws", "--law", "comonoid", "--cases", "3"]) == 1
    out = capsys.readouterr().out
    assert "comonoid: FAIL (3/3 failing)" in out
    assert '"case": 0' in out


# -- argument handling -------------------------------------------------------


def test_no_command_exits_1(capsys):
    assert cli.main([]) == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_help_exits_0(capsys):
    assert cli.main(["--help"]) == 0
    assert "usage" in capsys.readouterr().out.lower()
