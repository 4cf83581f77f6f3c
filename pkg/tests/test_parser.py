import pytest

from tracekit.dsl import EntityDecl, LinkDecl, lex, parse
from tracekit.errors import DslError


def tree(text):
    return parse(lex(text, "m.sreq"))


def codes(text):
    with pytest.raises(DslError) as info:
        tree(text)
    return [d.code for d in info.value.diagnostics]


def test_entity_and_link():
    t = tree('requirement STR-1 : technical { text: "x" sil: 2 }\nlink derive A-1 -> STR-1\n'
             'element I : interface { name: "i" connects: [A, B] }')
    req, link, elem = t.declarations
    assert isinstance(req, EntityDecl) and req.category == "technical"
    assert [a.name for a in req.attributes] == ["text", "sil"]
    assert elem.attribute("connects").value.value == ("A", "B")
    assert isinstance(link, LinkDecl) and (link.kind, link.source, link.target) == ("derive", "A-1", "STR-1")
    assert link.target_span.column == 20


def test_keywords_as_ids():
    t = tree('risk link { description: "" severity: minor likelihood: remote tolerability: acceptable }'
             "\nlink verify true -> covers")
    assert t.declarations[0].id == "link"
    assert (t.declarations[1].source, t.declarations[1].target) == ("true", "covers")


def test_unknown_missing_duplicate_attributes():
    assert codes('testcase T { method: test bogus: 1 }') == ["P011"]
    assert codes("testcase T { }") == ["P012"]
    assert codes("testcase T { method: test method: review }") == ["P013"]
    assert codes('risk R { description: "d" }') == ["P012"] * 3


def test_recovery_reports_every_broken_declaration():
    text = (
        "requirement A : nonsense { }\n"
        'testcase T { method: test }\n'
        "link derive A B\n"
        "element E : logical { name \"n\" }\n"
    )
    with pytest.raises(DslError) as info:
        tree(text)
    lines = [d.span.line for d in info.value.diagnostics]
    assert lines == [1, 3, 4]
    assert info.value.diagnostics[0].render().startswith("m.sreq:1:17: error[P010]: expected a requirement class")


def test_garbage_at_top_level():
    assert codes("} } testcase T { method: test }") == ["P010"]


def test_unclosed_block_at_eof():
    with pytest.raises(DslError) as info:
        tree('testcase T { method: test')
    assert "end of file" in info.value.diagnostics[0].message


class TestPragmas:
    def test_same_line_and_next_line(self):
        t = tree(
            "link derive A -> B // tracekit:allow(R7)\n"
            "// tracekit:allow(R4, R11)\n"
            "testcase T { method: test }\n"
        )
        assert t.declarations[0].allow == {"R7"}
        assert t.declarations[1].allow == {"R4", "R11"}
        assert t.diagnostics == ()

    def test_warnings(self):
        t = tree("// tracekit:allow(R99)\n\ntestcase T { method: test }\n// tracekit:allow(R1)")
        assert sorted(d.code for d in t.diagnostics) == ["P040", "P041", "P041"]
        assert all(d.severity.value == "warning" for d in t.diagnostics)
