from fractions import Fraction

import numpy as np
import pytest

from localarc.bounds import (
    NegativeRadicand,
    NotPrimePower,
    UndefinedCase,
    compare_upper_bounds,
    eml_upper,
    fftc_upper,
    is_prime_power,
    lower_exponent,
    prime_powers,
    quasiarc_upper,
    trivial_upper,
)
from localarc.plane import make_plane


def test_prime_power_recognition():
    assert prime_powers(32) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]
    assert not is_prime_power(1)
    assert not is_prime_power(12)


def test_trivial_upper_values():
    assert trivial_upper(2).sets == 5
    assert trivial_upper(4).sets == 13
    assert trivial_upper(9).sets == 37
    with pytest.raises(NotPrimePower):
        trivial_upper(6)


def test_fftc_values():
    expect = {2: 1, 3: 2, 4: 2, 5: 3, 7: 5, 8: 7, 9: 8, 11: 10, 13: 13, 16: 17}
    for q, sets in expect.items():
        rep = fftc_upper(q)
        assert rep.sets == sets and rep.points == 4 * sets
    with pytest.raises(NegativeRadicand):
        fftc_upper(1)
    with pytest.raises(NotPrimePower):
        fftc_upper(6)


def test_eml_values():
    cells = {
        (2, 2): 3,
        (2, 3): 4,
        (2, 4): 7,
        (2, 5): 9,
        (3, 4): 4,
        (3, 5): 5,
        (3, 7): 8,
        (3, 8): 9,
        (4, 7): 5,
        (4, 16): 17,
    }
    for (k, q), sets in cells.items():
        rep = eml_upper(k, q)
        assert rep.sets == sets, (k, q)
        assert rep.points == k * sets
    with pytest.raises(ValueError):
        eml_upper(1, 5)
    with pytest.raises(NegativeRadicand):
        eml_upper(5, 2)
    with pytest.raises(NotPrimePower):
        eml_upper(3, 6)


def test_eml_never_beats_trivial_for_k_at_least_3():
    pps = prime_powers(1024)
    for k in (3, 4, 5, 8):
        for q in pps:
            try:
                e = eml_upper(k, q).sets
            except NegativeRadicand:
                continue
            assert e <= trivial_upper(q).sets, (k, q)


def test_quasiarc_values():
    rep = quasiarc_upper(5, 2, 2)
    assert rep.points == 12 and rep.exact == 12
    rep = quasiarc_upper(7, 3, 2)
    assert rep.exact == Fraction(41, 2) and rep.points == 20
    q, k = 9, 4
    rep = quasiarc_upper(q, k, q * (q + 1 - k))
    assert rep.points == k + 1 and rep.exact == k + 1
    with pytest.raises(ValueError):
        quasiarc_upper(5, 7, 1)
    with pytest.raises(ValueError):
        quasiarc_upper(5, 2, 0)


def test_lower_exponent_piecewise():
    assert lower_exponent(1) == 1.2334
    assert lower_exponent(2) == 1.1167
    assert lower_exponent(3) == 1.1167 - 0.3833 / 3
    assert lower_exponent(5) == 1.1167 - 0.3833 / 5
    assert abs(lower_exponent(6) - 1.2472333333) < 1e-9
    assert lower_exponent(8) == 1.25 - 0.7666 / 8
    assert lower_exponent(12) == 1.25 - 0.7666 / 12
    with pytest.raises(UndefinedCase):
        lower_exponent(4)
    with pytest.raises(ValueError):
        lower_exponent(0)


def test_compare_upper_bounds_exception_set():
    cmp4 = compare_upper_bounds(4, 1024)
    assert cmp4.exceptions == (2, 4, 5, 7, 11, 16)
    by_q = {q: (f, e, strict) for q, f, e, strict in cmp4.rows}
    assert by_q[3] == (8, 4, True)
    assert by_q[7] == (20, 20, False)
    assert by_q[8][2] and by_q[9][2] and by_q[13][2]


@pytest.mark.parametrize("q", [2, 3])
def test_incidence_graph_square_is_qI_plus_J(q):
    plane = make_plane(q, "homogeneous")
    n = plane.n_points
    N = np.zeros((n, n), dtype=int)
    for p in range(n):
        for l in range(n):
            N[p, l] = plane.incident(p, l)
    A = np.block([[np.zeros((n, n), int), N], [N.T, np.zeros((n, n), int)]])
    sq = A @ A
    expected = q * np.eye(n, dtype=int) + np.ones((n, n), dtype=int)
    assert (sq[:n, :n] == expected).all()
    assert (sq[n:, n:] == expected).all()
    assert (sq[:n, n:] == 0).all() and (sq[n:, :n] == 0).all()
