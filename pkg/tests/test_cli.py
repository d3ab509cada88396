import io
import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from relik.cli import COMMANDS, EXIT_ERROR, EXIT_FALSE, EXIT_TRUE, load_schema, run
from relik.formulas import parse_l
from relik.semantics import parse_structure, sat

GOLDEN = Path(__file__).parent / "golden"
INPUTS = GOLDEN / "inputs"
CASES = json.loads((GOLDEN / "cases.json").read_text())


def argv_for(case):
    return [a.replace("{inputs}", str(INPUTS)) for a in case["argv"]]


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def report(argv):
    code, out, _ = invoke(list(argv) + ["--json"])
    return code, json.loads(out)


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden_case(case):
    code, got = report(argv_for(case))
    assert code == case["exit"]
    expected = json.loads((GOLDEN / "expected" / f"{case['name']}.json").read_text())
    assert got == expected
    schema = load_schema("error" if "error" in got else got["command"])
    jsonschema.validate(got, schema)


def golden(name):
    return json.loads((GOLDEN / "expected" / f"{name}.json").read_text())


def test_key_golden_facts():
    assert golden("incomparable_succ_prime")["result"] is True
    assert golden("incomparable_succ_s")["result"] is False
    assert golden("incomparable_succ_s_naive")["result"] is False
    assert golden("incomparable_dominates")["result"] is True
    assert golden("chain_lift4")["result"] is False
    props = golden("props_orderly_not_qualitative")["properties"]
    assert props["orderly"]["holds"] and props["union"]["holds"] and props["strict_partial_order"]["holds"]
    assert props["qualitative"] == {"holds": False, "witness": [["a"], ["b"], ["c"]]}
    assert golden("props_incomparable_succ_prime")["properties"]["union"]["holds"] is False
    assert golden("two_cover_check_sat")["verdict"] == "SAT"
    assert golden("two_cover_check_sat")["model_verified"] is True
    assert golden("two_cover_check_sat_total")["verdict"] == "UNSAT"
    assert golden("two_cover_brute_force_one_copy")["verdict"] == "UNSAT"
    assert golden("two_cover_brute_force_two_copies")["verdict"] == "SAT"
    assert golden("two_cover_brute_force_single_notp_q")["verdict"] == "UNSAT"
    assert golden("two_cover_model_check")["result"] is True
    assert golden("self_comparison_unsat")["verdict"] == "UNSAT"
    assert golden("realize_three_atoms")["worlds"] == 5
    assert golden("three_atoms_singletons_disagree")["agreement"] is False
    assert golden("wide_c_literal_disagrees")["witness"] == [["a", "b"], ["c", "d"]]
    assert golden("wide_c_swapped_agrees")["agreement"] is True
    assert golden("modularity_fails_on_partial_structure")["result"] is False
    assert golden("nested_likelihood_rejected")["error"]["type"] == "ParseError"


def test_every_command_has_a_schema():
    for name in COMMANDS:
        assert load_schema(name)["type"] == "object"
    assert load_schema("error")["required"]


def test_check_sat_model_out(tmp_path):
    target = tmp_path / "model.struct"
    formula = (INPUTS / "two_cover.formula").read_text().strip()
    code, out, _ = invoke(["check-sat", formula, "--model-out", str(target)])
    assert code == EXIT_TRUE and "SAT" in out
    assert sat(parse_structure(target.read_text()), parse_l(formula))


def test_formula_from_file():
    code, rep = report(["check-sat", "@" + str(INPUTS / "two_cover.formula"), "--total"])
    assert code == EXIT_FALSE and rep["verdict"] == "UNSAT"


def test_realize_writes_structure_text():
    code, out, _ = invoke(["realize", str(INPUTS / "three_atoms.rel")])
    assert code == EXIT_TRUE
    M = parse_structure(out)
    assert len(M.worlds) == 5


def test_translate_round_trip_text():
    code, out, _ = invoke(["translate", "--to", "arrow", "p >> q", "--variant", "tprime"])
    assert code == EXIT_TRUE and "=>" in out
    code, out2, _ = invoke(["translate", "--to", "gg", out.strip()])
    assert code == EXIT_TRUE and ">>" in out2


def test_errors_exit_two():
    code, rep = report(["model-check", str(INPUTS / "missing.struct"), "p >> q"])
    assert code == EXIT_ERROR and rep["error"]["type"] in ("FileNotFoundError", "OSError")
    code, rep = report(["eval-order", str(INPUTS / "incomparable.struct"), "--rel", "succ_s", "w9", "w1"])
    assert code == EXIT_ERROR and rep["error"]["type"] == "UsageError"
    code, _, err = invoke(["check-sat", "p >>"])
    assert code == EXIT_ERROR and err
    with pytest.raises(SystemExit) as info:
        invoke(["no-such-command"])
    assert info.value.code == 2


def test_resource_limit_exit_code():
    code, rep = report(["check-sat", "(a >> b) & (c >> d)"])
    assert code == EXIT_ERROR


@pytest.mark.skipif(shutil.which("relik") is None, reason="console script not installed")
def test_console_script_smoke():
    proc = subprocess.run(
        ["relik", "eval-order", str(INPUTS / "incomparable.struct"), "--rel", "succ_prime", "w1,w2", "w1", "--json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"] is True


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "relik", "translate", "--to", "gg", "q => p"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and ">>" in proc.stdout
