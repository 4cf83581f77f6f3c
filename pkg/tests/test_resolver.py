import pytest

from tracekit import Criticality, Likelihood, TestMethod, load_text
from tracekit.errors import DslError


def diags(text):
    with pytest.raises(DslError) as info:
        load_text(text, "r.sreq")
    return info.value.diagnostics


def test_attributes_resolve(clean_model):
    str3 = clean_model.get("STR-3")
    assert (str3.sil, str3.mtbf_hours, str3.failure_rate_per_hour) == (3, 100000.0, 1e-7)
    assert str3.criticality is Criticality.CATASTROPHIC and str3.parent == "STR-2"
    assert clean_model.get("RK-2").likelihood is Likelihood.EXTREMELY_REMOTE
    assert clean_model.get("I-1").connects == ("P-1", "P-2")


def test_enum_names_case_insensitive():
    model = load_text("testcase T { method: Model_Checking }")
    assert model.testcases[0].method is TestMethod.MODEL_CHECKING


def test_source_locations(clean_model):
    assert clean_model.location("AR-1").line == 3
    assert clean_model.location(0).line == clean_model.location(1).line - 1


@pytest.mark.parametrize(
    "text, code",
    [
        ('requirement A : acquirer { text: 3 }', "P020"),
        ('requirement A : acquirer { text: "t" safety: yes }', "P020"),
        ('requirement A : acquirer { text: "t" sil: 1.5 }', "P020"),
        ("testcase T { method: guessing }", "P020"),
        ('element P : physical { name: "p" connects: [Q, R] }', "P021"),
        ('requirement A : acquirer { text: "t" safety: true }', "P021"),
        ('requirement A : acquirer { text: "t" }\nrequirement A : technical { text: "u" }', "P030"),
        ('requirement A : acquirer { text: "t" parent: Z }', "P031"),
        ('requirement A : acquirer { text: "t" }\nrequirement B : technical { text: "t" }\n'
         "link derive A -> B\nlink derive A -> B", "P032"),
        ('requirement A : acquirer { text: "t" parent: B }\nrequirement B : acquirer { text: "t" parent: A }', "P033"),
        ('testcase T { method: test }\nrequirement A : acquirer { text: "t" parent: T }', "P034"),
        ('testcase T { method: test }\nlink verify T -> T', "P021"),
    ],
)
def test_semantic_errors(text, code):
    assert [d.code for d in diags(text)] == [code]


def test_invariant_points_at_attribute():
    (d,) = diags('requirement A : acquirer {\n  text: "t"\n  sil: 2\n}')
    assert (d.span.line, d.span.column) == (3, 3)
    assert d.render().startswith("r.sreq:3:3: error[P021]: requirement A: sil is only allowed")


def test_dangling_link_points_at_endpoint():
    (d,) = diags('testcase T { method: test }\nlink verify T -> NOPE')
    assert (d.span.line, d.span.column) == (2, 18)
    assert "unknown entity 'NOPE'" in d.message


def test_broken_entity_does_not_cascade():
    found = diags('requirement A : acquirer { text: 1 }\ntestcase T { method: test }\nlink verify T -> A')
    assert [d.code for d in found] == ["P020"]


def test_all_errors_reported_together():
    found = diags('testcase T { method: nope }\nrisk K { description: 1 severity: minor likelihood: remote '
                  "tolerability: acceptable }\nlink verify T -> Q")
    assert [d.code for d in found] == ["P020", "P020", "P031"]


def test_suppressions_recorded():
    model = load_text("// tracekit:allow(R4)\ntestcase T { method: test }\n"
                      'requirement A : acquirer { text: "t" }\nlink verify T -> A // tracekit:allow(R7)')
    assert model.suppressions == {"T": {"R4"}, 0: {"R7"}}
