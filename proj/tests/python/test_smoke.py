"""Smoke tests of the Python module against independent references."""

import itertools
import math
from fractions import Fraction

import pytest
from mpmath import mp, mpf, log, nsum, inf

import munormal as mn

mp.dps = 30


def gauss_cylinder(digits):
    p0, q0, p, q = 1, 0, 0, 1
    for a in digits:
        p0, q0, p, q = p, q, a * p + p0, a * q + q0
    x, y = mpf(p) / q, mpf(p + p0) / (q + q0)
    lo, hi = min(x, y), max(x, y)
    return log((1 + hi) / (1 + lo)) / log(2)


def test_presets_listed():
    names = mn.presets()
    for name in ("qary-b2", "qary-b2-desk", "beta-golden-desk", "cf", "cf-desk", "lueroth-desk"):
        assert name in names


def test_qary_and_lueroth_values():
    mu = mn.measure("qary:3")
    assert mu([0, 2, 1]) == pytest.approx(1 / 27)
    assert mu.exact([0, 2, 1]) == "1/27"
    lu = mn.measure("lueroth")
    # 1/(a(a-1)) per digit
    assert lu([2, 3]) == pytest.approx(1 / 2 * 1 / 6)
    assert Fraction(lu.exact([4, 2])) == Fraction(1, 12) * Fraction(1, 2)


def test_gauss_matches_mpmath_cylinders():
    mu = mn.measure("gauss")
    for word in ([1], [2, 3], [1, 1, 1], [5, 1, 7], [3, 9, 2, 4]):
        assert mu(word) == pytest.approx(float(gauss_cylinder(word)), rel=1e-13)


def test_truncated_gauss_interior_collapse_against_nsum():
    # nu_8 folds every digit >= 8 into the symbol 8; an interior 8 is a full sum
    nu = mn.measure("gauss:8")
    ref = nsum(lambda a: gauss_cylinder([1, int(a), 3]), [8, inf], method="richardson")
    assert nu([1, 8, 3]) == pytest.approx(float(ref), rel=1e-12)
    inner = lambda a: nsum(lambda d: gauss_cylinder([1, int(a), 1, int(d), 1]), [8, inf], method="richardson")
    ref2 = nsum(inner, [8, inf], method="richardson")
    assert nu([1, 8, 1, 8, 1]) == pytest.approx(float(ref2), rel=1e-12)


def test_golden_shift_counts_are_fibonacci():
    lang = mn.beta_shift("11")
    fib = [1, 2]
    for _ in range(12):
        fib.append(fib[-1] + fib[-2])
    for n in range(1, 13):
        assert mn.count_admissible(lang, n) == fib[n]
    assert not lang.admissible([1, 0, 0, 1, 1, 0, 1, 0])
    assert lang.padding([1], [1]) == [0]


def test_parry_measure_of_zero():
    beta = (1 + math.sqrt(5)) / 2
    assert mn.measure("beta:11")([0]) == pytest.approx(beta**2 / (1 + beta**2), rel=1e-12)


def test_block_is_normal_to_its_certificate():
    lang = mn.full_shift(0, 1)
    mu = mn.measure("qary:2")
    blk = mn.build_block(lang, mu, 2, 4, 16.0, k=2)
    word = blk["word"]
    assert len(word) == 64
    assert mn.check_normal(word, blk["epsilon"], 2, mu, lang)["pass"]
    # brute-force recount of every 2-block
    for b in itertools.product((0, 1), repeat=2):
        direct = sum(1 for i in range(len(word) - 1) if tuple(word[i:i + 2]) == b)
        assert mn.count_blocks(word, [list(b)], len(word))[0] == direct


def test_counting_independent_of_chunks():
    s = mn.Schedule.load("qary-b2-desk")
    prefix = s.prefix(100000)
    targets = [[0], [1, 0], [1, 1, 1], [0, 1, 0, 1]]
    ref = [sum(1 for i in range(len(prefix) - len(t) + 1) if prefix[i:i + len(t)] == t) for t in targets]
    for chunks in (1, 4, 16):
        assert mn.count_blocks(prefix, targets, len(prefix), chunks) == ref


def test_schedule_random_access_matches_prefix():
    s = mn.Schedule.load("beta-golden-desk")
    prefix = s.prefix(30000)
    for n in (1, 2, 214, 215, 10758, 10759, 29999, 30000):
        assert s.digit_at(n) == prefix[n - 1]
    i, m, x, y = s.locate(s.L(2) + 1)
    assert i == 2 and m == 1


def test_schedule_check_reports():
    assert mn.schedule_check("cf")["pass"] is True
    bad = '{"system": "qary", "q": 2, "symbolic": {"epsilon": "constant", "epsilon_value": 0.25}}'
    assert mn.schedule_check(bad)["failing"] == ["good1"]


def test_numeral_values():
    v = mn.qary_value([0, 1], 2, 64)
    assert Fraction(v["lo"]) <= Fraction(1, 4) <= Fraction(v["hi"])
    v = mn.cf_value([1, 1, 1, 1, 1], 64)
    assert Fraction(v["lo"]) <= Fraction(5, 8) <= Fraction(v["hi"])
