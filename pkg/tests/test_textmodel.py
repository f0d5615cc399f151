import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from patdist.textmodel import (
    ModelError,
    SumNotOneError,
    TextModel,
    Transition,
    exact_string_probability,
    iid_model,
    load_model,
    make_model,
    markov_model,
    model_from_json,
    string_probability,
    validate,
)

from conftest import AB, DNA, strings


def hmm_model():
    """Two hidden states; the next hidden state is not a function of the symbol."""
    return make_model(
        "AB",
        ["X", "Y"],
        "X",
        [
            ("X", "A", "X", 0.3), ("X", "A", "Y", 0.2), ("X", "B", "Y", 0.5),
            ("Y", "A", "X", 0.1), ("Y", "B", "Y", 0.6), ("Y", "B", "X", 0.3),
        ],
    )


def test_iid_uniform():
    m = iid_model(DNA)
    assert m.n_contexts == 1
    for a in range(4):
        assert m.phi(0, a, 0) == 0.25
    assert string_probability(m, DNA.encode("ACG")) == pytest.approx(1 / 64)
    assert string_probability(m, DNA.encode("ACGTA")) == pytest.approx(4.0**-5)
    assert string_probability(m, ()) == 1.0


def test_iid_sum_not_one():
    with pytest.raises(SumNotOneError) as exc:
        iid_model(AB, (0.5, 0.6))
    assert "SUM_NOT_ONE" in str(exc.value)


def test_markov_order1_example():
    m = markov_model(AB, 1, {"": {"A": 0.5, "B": 0.5}, "A": {"A": 0.9, "B": 0.1}, "B": {"A": 0.2, "B": 0.8}})
    assert m.n_contexts == 1 + 2
    assert string_probability(m, AB.encode("AA")) == pytest.approx(0.45)
    assert string_probability(m, AB.encode("BA")) == pytest.approx(0.5 * 0.2)


def test_markov_order0_is_iid():
    m0 = markov_model(DNA, 0, {"": {"A": 0.1, "C": 0.2, "G": 0.3, "T": 0.4}})
    m = iid_model(DNA, (0.1, 0.2, 0.3, 0.4))
    for s in strings(DNA, 3):
        assert string_probability(m0, s) == pytest.approx(string_probability(m, s))


def test_markov_sum_not_one_names_context():
    with pytest.raises(SumNotOneError) as exc:
        markov_model(AB, 1, {"": {"A": 1.0}, "A": {"A": 0.5, "B": 0.4}, "B": {"A": 1.0}})
    assert "'A'" in str(exc.value)


def test_markov_missing_reachable_context_is_dead():
    with pytest.raises(ModelError):
        markov_model(AB, 1, {"": {"A": 0.5, "B": 0.5}, "A": {"A": 1.0}})


def test_validate_diagnostics():
    assert validate(iid_model(DNA)).ok
    bad = TextModel(AB, ("x",), 0, (Transition(0, 0, 0, 0.49), Transition(0, 1, 0, 0.5)))
    diag = validate(bad)
    assert not diag.ok
    assert diag.residuals["x"] == pytest.approx(0.01)
    lonely = TextModel(
        AB, ("x", "y"), 0,
        (Transition(0, 0, 0, 0.5), Transition(0, 1, 0, 0.5), Transition(1, 0, 1, 1.0)),
    )
    diag = validate(lonely)
    assert diag.unreachable == ["y"]
    assert any("unreachable" in msg for msg in diag.messages())


def test_make_model_prunes_unreachable(caplog):
    m = make_model("AB", ["x", "y"], "x", [("x", "A", "x", 0.5), ("x", "B", "x", 0.5), ("y", "A", "y", 1.0)])
    assert m.contexts == ("x",)
    assert "unreachable" in caplog.text


def test_make_model_rejects_bad_probability():
    with pytest.raises(ModelError):
        make_model("AB", ["x"], "x", [("x", "A", "x", 1.5), ("x", "B", "x", -0.5)])


@given(st.integers(0, 8))
def test_probabilities_sum_to_one_over_length(n):
    m = hmm_model()
    total = math.fsum(string_probability(m, s) for s in itertools.product(range(2), repeat=n))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_exact_probability_matches_float():
    m = hmm_model()
    for s in strings(AB, 5):
        assert float(exact_string_probability(m, s)) == pytest.approx(string_probability(m, s), abs=1e-15)
    assert exact_string_probability(m, AB.encode("AB")) == Fraction(3, 10) * Fraction(5, 10) + Fraction(2, 10) * Fraction(9, 10)


def test_json_round_trip(tmp_path):
    m = hmm_model()
    path = tmp_path / "m.json"
    path.write_text(json.dumps(m.to_json()))
    m2 = load_model(path)
    for s in strings(AB, 4):
        assert string_probability(m2, s) == string_probability(m, s)
    mk = model_from_json({"alphabet": "AB", "order": 1, "probs": {"": {"A": 1.0}, "A": {"A": 0.5, "B": 0.5}, "B": {"B": 1.0}}})
    assert mk.n_contexts == 3
    with pytest.raises(ModelError):
        model_from_json({"contexts": []})


def test_sampling_is_deterministic_and_follows_model():
    m = markov_model(AB, 1, {"": {"A": 0.5, "B": 0.5}, "A": {"A": 0.9, "B": 0.1}, "B": {"A": 0.2, "B": 0.8}})
    a = m.sample(20, 1000, np.random.default_rng(7))
    b = m.sample(20, 1000, np.random.default_rng(7))
    assert np.array_equal(a, b)
    big = m.sample(2, 200_000, np.random.default_rng(1))
    freq_aa = np.mean((big[:, 0] == 0) & (big[:, 1] == 0))
    assert abs(freq_aa - 0.45) < 5 * math.sqrt(0.45 * 0.55 / 200_000)
