"""Canonical JSON formats for kernels, diagrams, problems, and reports.

Emission is canonical — factors in declared order, rows and outputs in
lexicographic label order, rationals as reduced "num/den" (plain
integers allowed) — so emit -> parse -> emit is byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from . import diagram as D
from . import edt as E
from .errors import SchemaError
from .kernel import Alphabet, Obj, SubKernel, make_kernel


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational: {value!r}") from exc
    raise SchemaError(f"not a rational: {value!r}")


def to_text(payload: Any) -> str:
    """Render a JSON payload in the one true output style."""
    return json.dumps(payload, indent=2) + "\n"


def _require(doc: Any, key: str, kind, where: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        names = (
            "/".join(k.__name__ for k in kind)
            if isinstance(kind, tuple)
            else kind.__name__
        )
        raise SchemaError(
            f"{where}.{key}: expected {names}, got {type(value).__name__}"
        )
    return value


def _str_list(value: Any, where: str) -> list[str]:
    if not isinstance(value, list) or any(
        not isinstance(v, str) for v in value
    ):
        raise SchemaError(f"{where}: expected a list of strings")
    return value


# -- alphabets and objects --------------------------------------------------


def alphabet_to_json(a: Alphabet) -> dict:
    return {"name": a.name, "labels": list(a.labels)}


def alphabet_from_json(doc: Any, where: str = "alphabet") -> Alphabet:
    name = _require(doc, "name", str, where)
    labels = _str_list(_require(doc, "labels", list, where), where + ".labels")
    return Alphabet(name, tuple(labels))


def obj_to_json(o: Obj) -> list[dict]:
    return [alphabet_to_json(a) for a in o.factors]


def obj_from_json(doc: Any, where: str = "obj") -> Obj:
    if not isinstance(doc, list):
        raise SchemaError(f"{where}: expected a list of alphabets")
    return Obj(
        tuple(
            alphabet_from_json(a, f"{where}[{i}]") for i, a in enumerate(doc)
        )
    )


# -- kernels ----------------------------------------------------------------


def kernel_to_json(k: SubKernel) -> dict:
    rows = []
    for x in sorted(k.rows):
        row = k.rows[x]
        rows.append(
            {
                "in": list(x),
                "out": [
                    {"val": list(y), "p": format_fraction(row[y])}
                    for y in sorted(row)
                ],
            }
        )
    return {
        "dom": obj_to_json(k.dom),
        "cod": obj_to_json(k.cod),
        "rows": rows,
    }


def kernel_from_json(doc: Any, where: str = "kernel") -> SubKernel:
    dom = obj_from_json(_require(doc, "dom", list, where), where + ".dom")
    cod = obj_from_json(_require(doc, "cod", list, where), where + ".cod")
    rows_doc = _require(doc, "rows", list, where)
    table: dict = {}
    for i, row_doc in enumerate(rows_doc):
        rw = f"{where}.rows[{i}]"
        x = tuple(_str_list(_require(row_doc, "in", list, rw), rw + ".in"))
        if x in table:
            raise SchemaError(f"{rw}: duplicate input {x!r}")
        row: dict = {}
        for j, out_doc in enumerate(_require(row_doc, "out", list, rw)):
            ow = f"{rw}.out[{j}]"
            y = tuple(_str_list(_require(out_doc, "val", list, ow), ow + ".val"))
            p = parse_fraction(_require(out_doc, "p", (str, int), ow))
            row[y] = row.get(y, Fraction(0)) + p
        table[x] = row
    return make_kernel(dom, cod, table)


# -- environments and diagram terms ----------------------------------------


def env_to_json(
    alphabets: Mapping[str, Alphabet], kernels: Mapping[str, SubKernel]
) -> dict:
    return {
        "alphabets": [
            alphabet_to_json(alphabets[n]) for n in sorted(alphabets)
        ],
        "kernels": {n: kernel_to_json(kernels[n]) for n in sorted(kernels)},
    }


def env_from_json(doc: Any) -> tuple[dict[str, Alphabet], dict[str, SubKernel]]:
    alphabets: dict[str, Alphabet] = {}

    def record(a: Alphabet) -> None:
        seen = alphabets.get(a.name)
        if seen is not None and seen != a:
            raise SchemaError(
                f"alphabet {a.name!r} declared twice with different labels"
            )
        alphabets[a.name] = a

    for i, a_doc in enumerate(doc.get("alphabets", []) if isinstance(doc, dict) else ()):
        record(alphabet_from_json(a_doc, f"env.alphabets[{i}]"))
    kernels: dict[str, SubKernel] = {}
    kernels_doc = doc.get("kernels", {}) if isinstance(doc, dict) else {}
    if not isinstance(kernels_doc, dict):
        raise SchemaError("env.kernels: expected an object")
    for name, k_doc in kernels_doc.items():
        k = kernel_from_json(k_doc, f"env.kernels[{name}]")
        for a in k.dom.factors + k.cod.factors:
            record(a)
        kernels[name] = k
    return alphabets, kernels


def _obj_names(o: Obj) -> list[str]:
    return [a.name for a in o.factors]


def _resolve_obj(
    names: Any, alphabets: Mapping[str, Alphabet], where: str
) -> Obj:
    factors = []
    for n in _str_list(names, where):
        if n not in alphabets:
            raise SchemaError(f"{where}: unknown alphabet {n!r}")
        factors.append(alphabets[n])
    return Obj(tuple(factors))


def term_to_json(term: D.Term) -> dict:
    match term:
        case D.Gen(name, _):
            return {"op": "gen", "name": name}
        case D.Id(x):
            return {"op": "id", "obj": _obj_names(x)}
        case D.Copy(x):
            return {"op": "copy", "obj": _obj_names(x)}
        case D.Discard(x):
            return {"op": "discard", "obj": _obj_names(x)}
        case D.Compare(x):
            return {"op": "compare", "obj": _obj_names(x)}
        case D.Swap(x, y):
            return {"op": "swap", "left": _obj_names(x), "right": _obj_names(y)}
        case D.Observe(x, point):
            return {"op": "observe", "obj": _obj_names(x), "point": list(point)}
        case D.Compose():
            parts: list[D.Term] = []

            def flat_c(t: D.Term) -> None:
                if isinstance(t, D.Compose):
                    flat_c(t.first)
                    flat_c(t.second)
                else:
                    parts.append(t)

            flat_c(term)
            return {"op": "compose", "terms": [term_to_json(p) for p in parts]}
        case D.Tensor():
            parts = []

            def flat_t(t: D.Term) -> None:
                if isinstance(t, D.Tensor):
                    flat_t(t.left)
                    flat_t(t.right)
                else:
                    parts.append(t)

            flat_t(term)
            return {"op": "tensor", "terms": [term_to_json(p) for p in parts]}
    raise SchemaError(f"not a term: {term!r}")


def term_from_json(
    doc: Any,
    alphabets: Mapping[str, Alphabet],
    kernels: Mapping[str, SubKernel],
    where: str = "diagram",
) -> D.Term:
    op = _require(doc, "op", str, where)
    if op == "gen":
        name = _require(doc, "name", str, where)
        if name not in kernels:
            raise SchemaError(f"{where}: unknown kernel {name!r}")
        return D.Gen(name, kernels[name])
    if op in ("id", "copy", "discard", "compare"):
        x = _resolve_obj(
            _require(doc, "obj", list, where), alphabets, where + ".obj"
        )
        return {
            "id": D.Id,
            "copy": D.Copy,
            "discard": D.Discard,
            "compare": D.Compare,
        }[op](x)
    if op == "swap":
        left = _resolve_obj(
            _require(doc, "left", list, where), alphabets, where + ".left"
        )
        right = _resolve_obj(
            _require(doc, "right", list, where), alphabets, where + ".right"
        )
        return D.Swap(left, right)
    if op == "observe":
        x = _resolve_obj(
            _require(doc, "obj", list, where), alphabets, where + ".obj"
        )
        point = _str_list(_require(doc, "point", list, where), where + ".point")
        return D.Observe(x, tuple(point))
    if op in ("compose", "tensor"):
        terms_doc = _require(doc, "terms", list, where)
        if not terms_doc:
            raise SchemaError(f"{where}: empty {op!r} term list")
        parts = [
            term_from_json(t, alphabets, kernels, f"{where}.terms[{i}]")
            for i, t in enumerate(terms_doc)
        ]
        out = parts[0]
        ctor = D.Compose if op == "compose" else D.Tensor
        for p in parts[1:]:
            out = ctor(out, p)
        return out
    raise SchemaError(f"{where}: unknown op {op!r}")


# -- decision problems ------------------------------------------------------


def problem_to_json(p: E.DecisionProblem) -> dict:
    return {
        "name": p.name,
        "actions": alphabet_to_json(p.actions),
        "environment": kernel_to_json(p.environment),
        "agent": kernel_to_json(p.agent),
        "consequence": kernel_to_json(p.consequence),
        "utilities": {
            u: format_fraction(p.utilities[u])
            for u in p.consequence.cod.factors[0].labels
        },
    }


def problem_from_json(doc: Any) -> E.DecisionProblem:
    where = "problem"
    name = _require(doc, "name", str, where)
    actions = alphabet_from_json(
        _require(doc, "actions", dict, where), where + ".actions"
    )
    environment = kernel_from_json(
        _require(doc, "environment", dict, where), where + ".environment"
    )
    agent = kernel_from_json(
        _require(doc, "agent", dict, where), where + ".agent"
    )
    consequence = kernel_from_json(
        _require(doc, "consequence", dict, where), where + ".consequence"
    )
    utilities_doc = _require(doc, "utilities", dict, where)
    utilities = {
        label: parse_fraction(value) for label, value in utilities_doc.items()
    }
    return E.DecisionProblem(
        name, actions, environment, agent, consequence, utilities
    )


# -- prescriptions ----------------------------------------------------------


def prescription_to_json(p: E.Prescription) -> dict:
    return {
        "problem": p.problem,
        "table": [
            {
                "action": v.action,
                "mass": format_fraction(v.mass),
                "expected_utility": (
                    None
                    if v.expected_utility is None
                    else format_fraction(v.expected_utility)
                ),
            }
            for v in p.table
        ],
        "prescribed": list(p.prescribed),
        "chosen": p.chosen,
    }


def prescription_to_tsv(p: E.Prescription) -> str:
    lines = []
    for v in p.table:
        eu = (
            "undef"
            if v.expected_utility is None
            else format_fraction(v.expected_utility)
        )
        lines.append(f"{v.action}\t{format_fraction(v.mass)}\t{eu}")
    lines.append(f"prescribed:\t{p.chosen}")
    return "\n".join(lines) + "\n"


# -- law reports ------------------------------------------------------------


def report_to_json(r) -> dict:
    """Serialize a laws.Report (duck-typed to avoid an import cycle)."""
    return {
        "law": r.law,
        "instances": r.instances,
        "passes": r.passes,
        "failures": r.failures,
        "counterexample": r.counterexample,
    }


def report_to_text(r) -> str:
    if r.failures == 0:
        return f"{r.law}: pass ({r.passes}/{r.instances})\n"
    head = f"{r.law}: FAIL ({r.failures}/{r.instances} failing)\n"
    return head + "counterexample: " + json.dumps(r.counterexample, indent=2) + "\n"
