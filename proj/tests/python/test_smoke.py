"""End-to-end smoke tests for the python bindings and the CLI binary."""

import json
import os
import pathlib
import subprocess

import pytest

import epddl

DATA = pathlib.Path(os.environ["EPDDL_DATA"])


@pytest.fixture(scope="module")
def problem():
    domain = epddl.parse_domain((DATA / "coin_domain.epddl").read_text())
    instance = epddl.parse_instance((DATA / "coin_instance.epddl").read_text())
    return epddl.validate(domain, instance)


def test_parse_and_validate(problem):
    assert problem.domain.name == "coininthebox"
    assert problem.instance.agents == ["a", "b", "c"]
    assert problem.instance.depth == 2
    assert problem.warnings == []


def test_parse_error_reports_diagnostics():
    with pytest.raises(ValueError) as err:
        epddl.parse_domain("(define (domain d) (:action a")
    assert "E_" in str(err.value)


def test_ground_and_solve(problem):
    grounded = epddl.ground(problem)
    assert len(grounded.actions) == 9
    assert len(grounded.fluents) == 8
    result = epddl.bfs_plan(grounded, max_len=4)
    assert result["status"] == "found"
    assert result["plan"] == ["open_a", "peek_a"]


def test_oracle_entailment(problem):
    grounded = epddl.ground(problem)
    state = epddl.initial_state(grounded)
    tails = epddl.Formula.atom(epddl.Fluent("tails"))
    b_a_tails = epddl.Formula.believes(epddl.Term.constant("a"), tails)
    assert not state.entails(b_a_tails)
    open_a = next(a for a in grounded.actions if a.name == "open_a")
    peek_a = next(a for a in grounded.actions if a.name == "peek_a")
    after = epddl.apply(epddl.apply(state, open_a), peek_a)
    assert after.entails(b_a_tails)


def test_expand_common_counts():
    f = epddl.Formula.atom(epddl.Fluent("f"))
    agents = [epddl.Term.constant(x) for x in ("a", "b")]
    chains = epddl.expand_common(epddl.Formula.common(agents, f), 2)
    assert len(chains) == 6


def test_translate_artifacts(problem):
    pdkb = epddl.emit_pdkb(problem, listing_faithful=True)
    assert "(:depth 2)" in pdkb.instance_text
    assert "(looking $agent$)" in pdkb.domain_text
    mar = epddl.emit_mar(epddl.ground(problem), rename={"looking": "look"})
    assert "peek_a determines tails if look_a;" in mar.text
    reread = epddl.read_mar(mar.text)
    assert len(reread.actions) == 9


def test_cli_validate_translate_solve(tmp_path):
    cli = os.environ["EPDDL_CLI"]
    dom = str(DATA / "coin_domain.epddl")
    ins = str(DATA / "coin_instance.epddl")

    run = subprocess.run([cli, "validate", dom, ins], capture_output=True, text=True)
    assert run.returncode == 0

    run = subprocess.run(
        [cli, "validate", dom, ins, "--json"], capture_output=True, text=True
    )
    assert run.returncode == 0
    assert json.loads(run.stdout)["ok"] is True

    run = subprocess.run(
        [cli, "translate", dom, ins, "--target", "pdkb", "--target", "mar",
         "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert run.returncode == 0, run.stderr
    assert (tmp_path / "toyinstance.pdkb-domain.pddl").exists()
    assert (tmp_path / "toyinstance.pdkb-problem.pddl").exists()
    assert (tmp_path / "toyinstance.mar").exists()
    manifest = json.loads((tmp_path / "toyinstance.manifest.json").read_text())
    assert manifest["depth"] == 2
    assert len(manifest["outputs"]) == 2

    run = subprocess.run(
        [cli, "translate", dom, ins, "--target", "pdkb", "--out", str(tmp_path / "lf"),
         "--listing-faithful"],
        capture_output=True, text=True,
    )
    assert run.returncode == 0, run.stderr
    faithful = (tmp_path / "lf" / "toyinstance.pdkb-domain.pddl").read_text()
    assert ":derive       (looking $agent$)" in faithful
    assert "(= $agent$ ?i)" not in faithful

    run = subprocess.run(
        [cli, "solve", dom, ins, "--max-len", "4"], capture_output=True, text=True
    )
    assert run.returncode == 0
    assert run.stdout.split() == ["open_a", "peek_a"]

    run = subprocess.run(
        [cli, "solve", dom, ins, "--max-len", "1"], capture_output=True, text=True
    )
    assert run.returncode == 0
    assert "NO PLAN within 1" in run.stdout

    run = subprocess.run(
        [cli, "features", dom, ins, "--json"], capture_output=True, text=True
    )
    assert run.returncode == 0
    report = json.loads(run.stdout)
    assert report["agents"] == 3
    assert report["has_partial_observers"] is True
    assert report["recommendation"] == "MAR"

    run = subprocess.run(
        [cli, "validate", str(DATA / "missing.epddl"), ins],
        capture_output=True, text=True,
    )
    assert run.returncode == 2


def test_translate_is_byte_deterministic(tmp_path, problem):
    cli = os.environ["EPDDL_CLI"]
    dom = str(DATA / "coin_domain.epddl")
    ins = str(DATA / "coin_instance.epddl")
    outputs = []
    for sub in ("one", "two"):
        out = tmp_path / sub
        run = subprocess.run(
            [cli, "translate", dom, ins, "--target", "pdkb", "--target", "mar",
             "--out", str(out)],
            capture_output=True, text=True,
        )
        assert run.returncode == 0, run.stderr
        outputs.append({
            p.name: p.read_bytes() for p in sorted(out.iterdir())
        })
    assert outputs[0] == outputs[1]


def test_cli_batch(tmp_path):
    cli = os.environ["EPDDL_CLI"]
    dom = str(DATA / "coin_domain.epddl")
    ins = str(DATA / "coin_instance.epddl")
    batch = tmp_path / "batch.txt"
    batch.write_text(f"{dom} {ins}\n{dom} {ins}\n")
    run = subprocess.run(
        [cli, "features", "--batch", str(batch)], capture_output=True, text=True
    )
    assert run.returncode == 0
    assert run.stdout.count("recommendation: MAR") == 2


def test_translate_failure_writes_nothing(tmp_path):
    cli = os.environ["EPDDL_CLI"]
    dom = DATA / "coin_domain.epddl"
    ins = tmp_path / "imply_goal.epddl"
    ins.write_text(
        "(define (problem badgoal) (:domain coininthebox) (:agent a b c) (:depth 2)\n"
        " (:init (tails) ([a b c](tails)))\n"
        " (:goal (imply (tails) ([a](tails)))))\n"
    )
    out = tmp_path / "out"
    run = subprocess.run(
        [cli, "translate", str(dom), str(ins), "--target", "mar", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert run.returncode == 1
    assert "E_UNSUPPORTED_GOAL" in run.stderr
    assert not (out / "badgoal.mar").exists()
    assert not list(out.glob("*.tmp")) if out.exists() else True


def test_oracle_error_maps_to_python(problem):
    grounded = epddl.ground(problem)
    state = epddl.initial_state(grounded)
    peek_a = next(a for a in grounded.actions if a.name == "peek_a")
    with pytest.raises(epddl.OracleError):
        epddl.apply(state, peek_a)  # box still closed


def test_derive_explicit_updates_binding(problem):
    grounded = epddl.ground(problem)
    peek_a = next(a for a in grounded.actions if a.name == "peek_a")
    updates = epddl.derive_explicit_updates(peek_a, 2)
    rendered = {str(u.formula) for u in updates}
    assert "[a](tails)" in rendered
    assert "[b][a](or (tails) (not (tails)))" in rendered
    deduped = epddl.derive_explicit_updates(peek_a, 2, dedupe_chains=True)
    assert len(deduped) < len(updates)


def test_diagnostic_coloring_env():
    cli = os.environ["EPDDL_CLI"]
    ins = str(DATA / "coin_instance.epddl")
    env = dict(os.environ, EPDDL_COLOR="1")
    run = subprocess.run(
        [cli, "validate", ins, ins], capture_output=True, text=True, env=env
    )
    assert run.returncode == 1  # a problem file is not a domain
    assert "\033[31m" in run.stderr

    env["EPDDL_COLOR"] = "0"
    run = subprocess.run(
        [cli, "validate", ins, ins], capture_output=True, text=True, env=env
    )
    assert "\033[" not in run.stderr
