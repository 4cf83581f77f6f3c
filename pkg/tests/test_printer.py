from hypothesis import given, settings

from strategies import models
from tracekit import load_text, print_canonical
from tracekit.model import build_model


@settings(max_examples=150, deadline=None)
@given(models())
def test_round_trip(model):
    text = print_canonical(model)
    again = load_text(text)
    assert again == model
    assert print_canonical(again) == text


def test_empty_model():
    assert print_canonical(build_model()) == ""
    assert load_text("") == build_model()


CHAIN_CANONICAL = """\
requirement AR-1 : acquirer {
  text: "The vehicle shall stop within 50 m"
  safety: false
}

requirement STR-1 : technical {
  text: "Braking deceleration shall exceed 6 m/s2"
  safety: false
}

element C-1 : physical {
  name: "Brake controller"
}

testcase TC-1 {
  method: test
  description: "Track braking test"
}

link derive AR-1 -> STR-1
link satisfy C-1 -> STR-1
link verify TC-1 -> STR-1
"""


def test_layout(chain_model):
    assert print_canonical(chain_model) == CHAIN_CANONICAL


def test_reals_print_positionally():
    model = load_text(
        'requirement S : technical { text: "t" safety: true criticality: low '
        "failure_rate_per_hour: 0.000000001 mtbf_hours: 123456789012.5 }"
    )
    text = print_canonical(model)
    assert "failure_rate_per_hour: 0.000000001\n" in text
    assert "mtbf_hours: 123456789012.5\n" in text
    assert "e" not in text.split("failure_rate_per_hour:")[1].split("\n")[0]


def test_escapes():
    model = load_text('testcase T { method: review description: "say \\"hi\\" \\\\ ok" }')
    assert model.testcases[0].description == 'say "hi" \\ ok'
    assert 'description: "say \\"hi\\" \\\\ ok"' in print_canonical(model)
