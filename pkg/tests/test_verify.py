from patdist.matchers import Pattern, WindowAnalysis, horspool_analysis
from patdist.textmodel import iid_model
from patdist.verify import verify_all, verify_analysis

from conftest import AC, pat


def corrupted_horspool(p: Pattern) -> WindowAnalysis:
    good = horspool_analysis(p)

    def examine(w):
        cost, shift = good.examine(w)
        return cost, max(1, shift - 1) if w[-1] == 0 else shift

    return WindowAnalysis(p, "horspool", examine)


def test_verify_small_space_passes():
    rep = verify_all(AC, 2, 6)
    assert rep.passed
    assert rep.checks > 0
    assert rep.max_deviation < 1e-9


def test_verify_difference_small_space_passes():
    rep = verify_all(AC, 2, 5, difference=True)
    assert rep.passed


def test_corrupted_shift_is_caught():
    p = pat("ACA", AC)
    rep = verify_analysis(corrupted_horspool(p), iid_model(AC), 8)
    assert not rep.passed
    ce = rep.failures[0]
    assert ce.algorithm == "horspool" and ce.pattern == "ACA"
    assert ce.expected != ce.got
    assert "expected" in str(ce)
