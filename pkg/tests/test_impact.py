import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import models
from tracekit import Direction, LinkKind, build_graph, default_propagation, impact, impact_report, load_file
from tracekit.errors import EmptyChangeSet, UnknownReference
from tracekit.impact import PropagationTable


def test_chain_example(chain_model, chain_graph):
    result = impact(chain_model, chain_graph, ["AR-1"])
    assert [(i.id, i.distance) for i in result.impacted] == [("STR-1", 1), ("C-1", 2), ("TC-1", 2)]
    assert result.impacted[1].path == ("AR-1", "STR-1", "C-1")
    assert result.stale_testcases == ("TC-1",)
    assert result.challenged_risks == ()


def test_errors(chain_model, chain_graph):
    with pytest.raises(EmptyChangeSet):
        impact(chain_model, chain_graph, [])
    with pytest.raises(UnknownReference, match="NOPE"):
        impact(chain_model, chain_graph, ["AR-1", "NOPE"])


def test_changed_test_case_is_not_stale_by_itself(chain_model, chain_graph):
    result = impact(chain_model, chain_graph, ["TC-1"])
    assert result.impacted == () and result.stale_testcases == ()


def test_covers_toggle(fixtures_dir):
    model = load_file(fixtures_dir / "covers.sreq")
    graph = build_graph(model)
    assert impact(model, graph, ["STR-9"]).challenged_risks == ("RK-1",)
    off = default_propagation().override({"covers": "off"})
    result = impact(model, graph, ["STR-9"], off)
    assert result.challenged_risks == () and result.impacted == ()


def test_override_validation():
    table = default_propagation().override({"satisfy": "both", "parent": "off"})
    assert table.direction(LinkKind.SATISFY) is Direction.BOTH
    assert table.direction(LinkKind.PARENT) is None
    with pytest.raises(ValueError, match="unknown link kind"):
        table.override({"bogus": "forward"})
    with pytest.raises(ValueError, match="forward, reverse, both or off"):
        table.override({"derive": "sideways"})


def test_default_table_covers_every_edge_kind():
    assert set(default_propagation().entries) == set(LinkKind)


def test_report(clean_model):
    result = impact(clean_model, build_graph(clean_model), ["OS-1"])
    report = impact_report(result, clean_model)
    assert report["changed"] == ["OS-1"]
    assert list(report["impacted"]) == ["technical", "specified", "physical", "testcase", "risk"]
    assert [r["id"] for r in report["challenged_risks"]] == ["RK-1", "RK-2"]
    assert [r["unacceptable"] for r in report["challenged_risks"]] == [False, True]
    assert report["stale_testcases"] == ["TC-1", "TC-2"]


def test_report_without_impact(chain_model, chain_graph):
    report = impact_report(impact(chain_model, chain_graph, ["TC-1"]), chain_model)
    assert report["summary"] == "no downstream impact" and report["impacted"] == {}


@settings(max_examples=150, deadline=None)
@given(models(), st.data())
def test_result_invariants(model, data):
    if not len(model):
        return
    graph = build_graph(model)
    changed = data.draw(st.sets(st.sampled_from(model.ids()), min_size=1, max_size=3))
    result = impact(model, graph, changed)
    assert set(result.changed) == changed
    assert not set(result.impacted_ids()) & changed
    keys = [(i.distance, i.id) for i in result.impacted]
    assert keys == sorted(keys) and all(d >= 1 for d, _ in keys)
    assert all(model.get(r).kind.value == "risk" for r in result.challenged_risks)
    assert all(model.get(t).kind.value == "testcase" for t in result.stale_testcases)
    # with every kind off nothing propagates and no risk is challenged
    silent = impact(model, graph, changed, PropagationTable())
    assert silent.impacted == () and silent.challenged_risks == ()


@settings(max_examples=100, deadline=None)
@given(models(), st.data())
def test_widening_a_direction_never_shrinks(model, data):
    if not len(model):
        return
    graph = build_graph(model)
    changed = data.draw(st.sets(st.sampled_from(model.ids()), min_size=1, max_size=3))
    kind = data.draw(st.sampled_from([k.value for k in LinkKind]))
    narrow = impact(model, graph, changed)
    wide = impact(model, graph, changed, default_propagation().override({kind: "both"}))
    assert set(narrow.impacted_ids()) <= set(wide.impacted_ids())
    assert set(narrow.challenged_risks) <= set(wide.challenged_risks)
