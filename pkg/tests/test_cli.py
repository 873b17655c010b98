import json
from dataclasses import replace

import pytest

from m2pddl.cli import main
from m2pddl.fixtures import SCOPE_ROOT, write_aircraft_fixture
from m2pddl.model import Element, StereotypeApplication, load_model, save_model

from conftest import GOLDEN_DOMAIN, GOLDEN_PROBLEM
from faults import ALL_CODES, seed_fault


def error_lines(text):
    return [l for l in text.splitlines() if l.startswith("ERROR ")]


@pytest.fixture
def inputs(tmp_path):
    return write_aircraft_fixture(tmp_path / "in", 4, 2)


# -- validate --------------------------------------------------------------


def test_validate_conformant(inputs, capsys):
    assert main(["validate", str(inputs["model"]), "--scope", SCOPE_ROOT]) == 0
    assert capsys.readouterr().err == ""


def test_validate_seeded_undeclared_predicate(inputs, capsys):
    model = load_model(inputs["model"].read_text())
    extra = Element("act-move-pre-x", "constraint", "holding", (StereotypeApplication("pddl-precondition", {"literal": "(holding ?r)"}),), "act-move")
    model = replace(model, elements=model.elements + (extra,))
    inputs["model"].write_text(save_model(model))
    assert main(["validate", str(inputs["model"])]) == 1
    (line,) = error_lines(capsys.readouterr().err)
    assert "undeclared-predicate" in line and "act-move-pre-x" in line


def test_validate_missing_file(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "nope.sysmodel")]) == 2


def test_missing_argument_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["validate"])
    assert exc.value.code == 2


# -- generate --------------------------------------------------------------


def test_generate_matches_goldens(inputs, tmp_path, capsys):
    out = tmp_path / "out"
    argv = ["generate", str(inputs["model"]), str(inputs["product"]), str(inputs["rules"]), "--out", str(out), "--name", "aircraft-4", "--scope", SCOPE_ROOT]
    assert main(argv) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["diagnostics"] == []
    assert (out / "aircraft-4.domain.pddl").read_bytes() == GOLDEN_DOMAIN.read_bytes()
    assert (out / "aircraft-4.problem.pddl").read_bytes() == GOLDEN_PROBLEM.read_bytes()


def test_generate_missing_column(inputs, tmp_path, capsys):
    inputs["rules"].write_text(inputs["rules"].read_text().replace('"rivet-type"', '"diameter"', 1))
    argv = ["generate", str(inputs["model"]), str(inputs["product"]), str(inputs["rules"]), "--out", str(tmp_path / "o"), "--name", "x"]
    assert main(argv) == 1
    (line,) = error_lines(capsys.readouterr().err)
    assert "template-column-missing" in line and "[annotate]" in line


def test_generate_unwritable_output(inputs, tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    argv = ["generate", str(inputs["model"]), str(inputs["product"]), str(inputs["rules"]), "--out", str(blocker), "--name", "x"]
    assert main(argv) == 1
    (line,) = error_lines(capsys.readouterr().err)
    assert "io-error" in line and "[render]" in line


def test_generate_bad_name_is_usage_error(inputs, tmp_path):
    argv = ["generate", str(inputs["model"]), str(inputs["product"]), str(inputs["rules"]), "--out", str(tmp_path), "--name", "Bad Name"]
    assert main(argv) == 2


# -- plan ------------------------------------------------------------------


def test_plan_goldens(tmp_path, manifest, capsys):
    out = tmp_path / "aircraft.plan"
    assert main(["plan", str(GOLDEN_DOMAIN), str(GOLDEN_PROBLEM), "--strategy", "bfs", "--out", str(out)]) == 0
    expected = manifest["expected"]["plan_length_bfs"]["value"]
    assert capsys.readouterr().out.strip() == f"plan length {expected}"
    assert len(out.read_text().splitlines()) == expected


def _write(tmp_path, domain_text, problem_text):
    d, p = tmp_path / "d.pddl", tmp_path / "p.pddl"
    d.write_text(domain_text)
    p.write_text(problem_text)
    return str(d), str(p)


def test_plan_trivial_goal(tmp_path, capsys):
    problem = GOLDEN_PROBLEM.read_text().replace("(fastened r1)", "(hand-empty ur10)")
    for r in ("r2", "r3", "r4"):
        problem = problem.replace(f"    (fastened {r})\n", "")
    d, p = _write(tmp_path, GOLDEN_DOMAIN.read_text(), problem)
    out = tmp_path / "empty.plan"
    assert main(["plan", d, p, "--out", str(out)]) == 0
    assert out.read_text() == ""
    assert "plan length 0" in capsys.readouterr().out


def test_plan_unsolvable(tmp_path, capsys):
    # no end-effector matches type-b rivets once its ee-matches-type atom is gone
    problem = GOLDEN_PROBLEM.read_text().replace("    (ee-matches-type ee-b type-b)\n", "")
    d, p = _write(tmp_path, GOLDEN_DOMAIN.read_text(), problem)
    assert main(["plan", d, p]) == 1
    assert "unsolvable" in capsys.readouterr().err


def test_plan_node_cap(monkeypatch, capsys):
    monkeypatch.setenv("M2PDDL_NODE_CAP", "2")
    assert main(["plan", str(GOLDEN_DOMAIN), str(GOLDEN_PROBLEM)]) == 3
    assert "resource-limit" in capsys.readouterr().err


@pytest.mark.parametrize("code", ALL_CODES)
def test_plan_rejects_seeded_fault(tmp_path, capsys, code):
    d, p = _write(tmp_path, *seed_fault(code, GOLDEN_DOMAIN.read_text(), GOLDEN_PROBLEM.read_text()))
    assert main(["plan", d, p]) == 1
    lines = error_lines(capsys.readouterr().err)
    assert {l.split()[1] for l in lines} == {code}


# -- check-plan ------------------------------------------------------------


def _solve_to(tmp_path, capsys):
    plan = tmp_path / "a.plan"
    assert main(["plan", str(GOLDEN_DOMAIN), str(GOLDEN_PROBLEM), "--out", str(plan)]) == 0
    capsys.readouterr()
    return plan


def test_check_solver_plan(tmp_path, capsys):
    plan = _solve_to(tmp_path, capsys)
    assert main(["check-plan", str(GOLDEN_DOMAIN), str(GOLDEN_PROBLEM), str(plan)]) == 0
    assert capsys.readouterr().out.strip() == "VALID"


def test_check_swapped_plan(tmp_path, capsys):
    plan = _solve_to(tmp_path, capsys)
    lines = plan.read_text().splitlines()
    i = next(i for i, l in enumerate(lines) if l.startswith("(screw"))
    lines[i - 1], lines[i] = lines[i], lines[i - 1]
    plan.write_text("\n".join(lines) + "\n")
    assert main(["check-plan", str(GOLDEN_DOMAIN), str(GOLDEN_PROBLEM), str(plan)]) == 1
    assert capsys.readouterr().out.strip() == f"INVALID at step {i - 1}: precondition-violated"


def test_check_empty_plan_on_satisfied_goal(tmp_path, capsys):
    problem = GOLDEN_PROBLEM.read_text().replace("(fastened r1)", "(hand-empty ur10)")
    for r in ("r2", "r3", "r4"):
        problem = problem.replace(f"    (fastened {r})\n", "")
    d, p = _write(tmp_path, GOLDEN_DOMAIN.read_text(), problem)
    empty = tmp_path / "empty.plan"
    empty.write_text("")
    assert main(["check-plan", d, p, str(empty)]) == 0
    assert capsys.readouterr().out.strip() == "VALID"


def test_check_malformed_plan(tmp_path, capsys):
    bad = tmp_path / "bad.plan"
    bad.write_text("move ur10\n")
    assert main(["check-plan", str(GOLDEN_DOMAIN), str(GOLDEN_PROBLEM), str(bad)]) == 1


# -- roundtrip -------------------------------------------------------------


def test_roundtrip_golden(capsys):
    assert main(["roundtrip", str(GOLDEN_DOMAIN)]) == 0
    assert "input is canonical" in capsys.readouterr().out


def test_roundtrip_unsupported_requirement(tmp_path, capsys):
    f = tmp_path / "d.pddl"
    f.write_text("(define (domain d) (:requirements :durative-actions))")
    assert main(["roundtrip", str(f)]) == 1
    assert "unsupported-requirement" in capsys.readouterr().err


def test_roundtrip_canonical_output_refed(tmp_path, capsys):
    f = tmp_path / "p.pddl"
    f.write_text(GOLDEN_PROBLEM.read_text().upper().replace("\n", " ; noise\n"))
    assert main(["roundtrip", str(f)]) == 0
    assert "differs" in capsys.readouterr().out
    from m2pddl.pddl import parse_problem, print_problem

    f.write_text(print_problem(parse_problem(f.read_text())) + "\n")
    assert f.read_text() == GOLDEN_PROBLEM.read_text()
    assert main(["roundtrip", str(f)]) == 0
    assert "input is canonical" in capsys.readouterr().out
