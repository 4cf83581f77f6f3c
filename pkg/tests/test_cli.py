import io
import json
import shutil

import jsonschema
import pydot
import pytest

from tracekit.cli import main
from tracekit.report import load_schema


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def paths(fixtures_dir):
    return {name: str(fixtures_dir / f"{name}.sreq") for name in ("clean", "findings", "syntax_error", "chain", "covers")}


class TestCheck:
    def test_clean(self, paths):
        code, out, _ = run("check", paths["clean"])
        assert code == 0
        assert out.startswith("0 errors, 0 warnings\n")
        assert "  risk coverage: 100.0%" in out

    def test_findings(self, paths):
        code, out, _ = run("check", paths["findings"])
        assert code == 1
        assert "R5" in out and "1 error, 0 warnings" in out

    def test_syntax_error(self, paths):
        code, out, err = run("check", paths["syntax_error"])
        assert (code, out) == (2, "")
        lines = err.strip().splitlines()
        assert len(lines) == 2 and all("error[P010]" in line for line in lines)
        assert lines[0].startswith(paths["syntax_error"] + ":")

    @pytest.mark.parametrize("argv", [["check"], ["frobnicate"], ["check", "x.sreq", "--format", "yaml"], []])
    def test_usage_errors(self, argv):
        assert run(*argv)[0] == 3

    def test_missing_file(self, tmp_path):
        code, _, err = run("check", str(tmp_path / "absent.sreq"))
        assert code == 3 and "cannot read" in err

    def test_fail_on(self, paths):
        assert run("check", paths["findings"], "--fail-on", "never")[0] == 0
        assert run("check", paths["chain"])[0] == 0
        assert run("check", paths["chain"], "--fail-on", "warning")[0] == 1

    def test_severity_and_disable(self, paths):
        assert run("check", paths["findings"], "--disable", "R5")[0] == 0
        assert run("check", paths["findings"], "--severity", "R5=warning")[0] == 0
        assert run("check", paths["findings"], "--disable", "R42")[0] == 3
        assert run("check", paths["findings"], "--severity", "R5")[0] == 3

    def test_json_matches_schema(self, paths):
        schema = load_schema()
        for name in ("clean", "findings", "chain"):
            _, out, _ = run("check", paths[name], "--format", "json")
            payload = json.loads(out)
            jsonschema.validate(payload, schema)
            assert payload["schema_version"] == "1"
        finding = json.loads(run("check", paths["findings"], "--format", "json")[1])["findings"][0]
        assert finding["rule_id"] == "R5" and finding["severity"] == "error"


class TestConfigFile:
    def test_auto_loaded_and_flags_win(self, paths, tmp_path):
        model = tmp_path / "m.sreq"
        shutil.copy(paths["findings"], model)
        (tmp_path / "tracekit.conf").write_text("# local policy\nfail-on = never\n", encoding="utf-8")
        assert run("check", str(model))[0] == 0
        assert run("check", str(model), "--fail-on", "error")[0] == 1

    def test_explicit_and_bad(self, paths, tmp_path):
        good = tmp_path / "a.conf"
        good.write_text("disable = R5\n", encoding="utf-8")
        assert run("check", paths["findings"], "--config", str(good))[0] == 0
        bad = tmp_path / "b.conf"
        bad.write_text("colour = blue\n", encoding="utf-8")
        assert run("check", paths["findings"], "--config", str(bad))[0] == 3


class TestImpact:
    def test_text(self, paths):
        code, out, _ = run("impact", paths["chain"], "--changed", "AR-1")
        assert code == 0
        assert "    C-1  d=2  via AR-1 -> STR-1 -> C-1" in out
        assert out.endswith("stale test cases: TC-1\n")

    def test_unknown_entity(self, paths):
        code, _, err = run("impact", paths["chain"], "--changed", "NOPE")
        assert code == 3 and "unknown entity 'NOPE'" in err

    def test_covers_off(self, paths):
        _, out, _ = run("impact", paths["covers"], "--changed", "STR-9")
        assert "!!" in out and "UNACCEPTABLE" in out
        _, out, _ = run("impact", paths["covers"], "--changed", "STR-9", "--propagate.covers=off")
        assert "no downstream impact" in out and "challenged risks: none" in out

    def test_json(self, paths):
        code, out, _ = run("impact", paths["chain"], "--changed", "AR-1,C-1", "--format", "json")
        payload = json.loads(out)
        jsonschema.validate(payload, load_schema())
        assert payload["impact"]["changed"] == ["AR-1", "C-1"]

    def test_bad_direction(self, paths):
        assert run("impact", paths["chain"], "--changed", "AR-1", "--propagate.derive", "up")[0] == 3


class TestOtherCommands:
    def test_matrix(self, paths):
        code, out, _ = run("matrix", paths["chain"], "--rows", "acquirer", "--cols", "technical", "--relation", "derive")
        assert code == 0 and "1×1 matrix" in out and "x" in out
        code, out, _ = run("matrix", paths["chain"], "--rows", "testcase", "--cols", "any",
                           "--relation", "verify,derive:reverse", "--transitive", "--format", "json")
        assert code == 0 and json.loads(out)["rows"] == ["TC-1"]
        assert run("matrix", paths["chain"], "--rows", "widget", "--cols", "any", "--relation", "derive")[0] == 3
        assert run("matrix", paths["chain"], "--rows", "any", "--cols", "any", "--relation", "derive:up")[0] == 3

    def test_stats(self, paths):
        code, out, _ = run("stats", paths["clean"], "--format", "json")
        assert code == 0 and json.loads(out)["coverage"]["risk_coverage"] == 100.0
        assert run("stats", paths["clean"])[0] == 0

    def test_export_dot_parses(self, paths):
        code, out, _ = run("export-dot", paths["clean"])
        assert code == 0 and out.startswith("digraph trace {")
        (graph,) = pydot.graph_from_dot_data(out)
        nodes = {n.get_name().strip('"') for n in graph.get_nodes()} - {"node", "edge", "graph"}
        assert len(nodes) == 14
        assert len(graph.get_edges()) == 15 + 1  # links plus one parent edge
