import pytest

import corpus
from wreathtree import (
    AutomatonError,
    BadComponentError,
    DimensionMismatchError,
    EventuallyPeriodicStream,
    IncidenceMatrix,
    IntPolynomial,
    IterationCapError,
    ModVector,
    NonUnitConstantTermError,
    RationalSeries,
    abelian_vector,
    coefficient_stream,
    det_poly,
    incidence_matrix,
    series_expand,
    validate_cyclic,
)


# ---------- incidence matrices ----------


def test_incidence_examples(odometer, lamp_b):
    assert incidence_matrix(lamp_b.automaton).rows == ((1, 1), (1, 1))
    assert incidence_matrix(odometer.automaton).rows == ((1, 1), (0, 2))
    assert incidence_matrix(corpus.identity_machine(3).automaton).rows == ((3,),)


def test_incidence_rows_sum_to_k(rng):
    for _ in range(40):
        k = rng.choice([2, 3, 4, 6])
        g = corpus.random_invertible(rng, k)
        for row in incidence_matrix(g.automaton).rows:
            assert sum(row) == k


def test_incidence_matrix_guards():
    with pytest.raises(DimensionMismatchError):
        IncidenceMatrix(((1, 2),))
    with pytest.raises(AutomatonError):
        IncidenceMatrix(((1, 1), (0, 3)))
    with pytest.raises(AutomatonError):
        IncidenceMatrix(((-1, 3), (1, 1)))


# ---------- label vectors ----------


def test_abelian_vector_picks_component(lamp_b):
    labels = validate_cyclic(lamp_b.automaton)
    v = abelian_vector(labels, 0)
    assert v.modulus == 2
    assert v.residues == (0, 1)
    with pytest.raises(BadComponentError):
        abelian_vector(labels, 1)
    with pytest.raises(BadComponentError):
        abelian_vector(labels, -1)


def test_mod_vector_guards():
    with pytest.raises(AutomatonError):
        ModVector(1, (0,))
    with pytest.raises(AutomatonError):
        ModVector(3, (0, 3))


# ---------- streams ----------


def test_stream_odometer(odometer):
    labels = validate_cyclic(odometer.automaton)
    stream = coefficient_stream(
        incidence_matrix(odometer.automaton), abelian_vector(labels, 0), odometer.initial
    )
    assert stream.preperiod == ()
    assert stream.period == (1,)
    assert stream.terms(5) == [1, 1, 1, 1, 1]


def test_stream_lamplighter(lamp_a, lamp_b):
    matrix = incidence_matrix(lamp_b.automaton)
    vector = abelian_vector(validate_cyclic(lamp_b.automaton), 0)
    stream_b = coefficient_stream(matrix, vector, lamp_b.initial)
    assert stream_b.preperiod == (1, 1)
    assert stream_b.period == (0,)
    stream_a = coefficient_stream(matrix, vector, lamp_a.initial)
    assert stream_a.term(0) == 0


def test_stream_zero_labels(lamp_b):
    matrix = incidence_matrix(lamp_b.automaton)
    stream = coefficient_stream(matrix, ModVector(2, (0, 0)), 0)
    assert stream.preperiod == ()
    assert stream.period == (0,)


def test_stream_term_crosses_the_period_boundary():
    s = EventuallyPeriodicStream(5, (4, 3), (1, 2))
    assert s.terms(8) == [4, 3, 1, 2, 1, 2, 1, 2]


def test_stream_guards():
    with pytest.raises(AutomatonError):
        EventuallyPeriodicStream(2, (0,), ())
    with pytest.raises(AutomatonError):
        EventuallyPeriodicStream(2, (2,), (0,))


def test_stream_matches_direct_matrix_powers(rng):
    # closed form vs. freshly recomputed iterates, well past one period
    for _ in range(40):
        k = rng.choice([2, 3, 4, 6])
        g = corpus.random_cyclic(rng, k)
        matrix = incidence_matrix(g.automaton)
        vector = abelian_vector(validate_cyclic(g.automaton), 0)
        stream = coefficient_stream(matrix, vector, g.initial)
        count = len(stream.preperiod) + 2 * len(stream.period) + 4
        w = vector.residues
        for j in range(count):
            assert stream.term(j) == w[g.initial]
            w = matrix.matvec_mod(w, k)
        n = g.automaton.n_states
        assert len(stream.preperiod) + len(stream.period) <= k**n


def test_stream_shape_guards(odometer):
    matrix = incidence_matrix(odometer.automaton)
    with pytest.raises(DimensionMismatchError):
        coefficient_stream(matrix, ModVector(2, (1,)), 0)
    with pytest.raises(DimensionMismatchError):
        coefficient_stream(matrix, ModVector(2, (1, 0)), 2)


def test_stream_visit_cap(lamp_b):
    matrix = incidence_matrix(lamp_b.automaton)
    vector = abelian_vector(validate_cyclic(lamp_b.automaton), 0)
    with pytest.raises(IterationCapError):
        coefficient_stream(matrix, vector, lamp_b.initial, cap=2)


# ---------- integer polynomials ----------


def test_polynomial_canonical_form():
    assert IntPolynomial((1, 2, 0, 0)).coeffs == (1, 2)
    assert IntPolynomial((0, 0)).coeffs == ()
    assert not IntPolynomial(())
    assert IntPolynomial((0, 1)).degree == 1
    assert IntPolynomial(()).degree == -1


def test_polynomial_arithmetic():
    p = IntPolynomial((1, 2))  # 1 + 2t
    q = IntPolynomial((3, 0, 1))  # 3 + t^2
    assert (p + q).coeffs == (4, 2, 1)
    assert (q - p).coeffs == (2, -2, 1)
    assert (p * q).coeffs == (3, 6, 1, 2)
    assert (p * IntPolynomial()).coeffs == ()
    assert p(2) == 5 and q(3) == 12


def test_polynomial_exact_division():
    p = IntPolynomial((1, 2))
    q = IntPolynomial((3, 0, 1))
    assert (p * q).exact_div(p) == q
    assert (p * q).exact_div(q) == p
    assert IntPolynomial().exact_div(p) == IntPolynomial()
    with pytest.raises(ArithmeticError):
        IntPolynomial((1, 1, 1)).exact_div(IntPolynomial((1, 1)))
    with pytest.raises(ArithmeticError):
        IntPolynomial((1,)).exact_div(IntPolynomial((2,)))
    with pytest.raises(ZeroDivisionError):
        p.exact_div(IntPolynomial())


def test_polynomial_mod_reduction():
    assert IntPolynomial((1, -3, 2)).mod_coeffs(2) == (1, 1)
    assert IntPolynomial((1, -2)).mod_coeffs(2) == (1,)
    assert IntPolynomial((4, 2)).mod_coeffs(2) == ()


# ---------- determinants ----------


def _cofactor_det(matrix):
    n = len(matrix)
    if n == 0:
        return IntPolynomial.constant(1)
    if n == 1:
        return matrix[0][0]
    total = IntPolynomial()
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = matrix[0][j] * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def test_det_examples(odometer):
    one = IntPolynomial((1,))
    t = IntPolynomial((0, 1))
    m = [
        [one - t, -t],
        [IntPolynomial(), one - IntPolynomial((2,)) * t],
    ]
    assert det_poly(m).coeffs == (1, -3, 2)
    assert det_poly([[IntPolynomial((1, -3))]]).coeffs == (1, -3)
    assert det_poly([]) == IntPolynomial((1,))
    assert det_poly([[one, t], [one, t]]) == IntPolynomial()
    # a zero pivot forces a row swap and a sign flip
    assert det_poly([[0, 1], [1, 0]]).coeffs == (-1,)


def test_det_accepts_plain_integers():
    assert det_poly([[2, 1], [1, 2]]).coeffs == (3,)


def test_det_matches_cofactor_expansion(rng):
    for _ in range(60):
        n = rng.randint(1, 4)
        matrix = [
            [
                IntPolynomial(tuple(rng.randint(-3, 3) for _ in range(rng.randint(0, 3))))
                for _ in range(n)
            ]
            for _ in range(n)
        ]
        assert det_poly(matrix) == _cofactor_det(matrix)


def test_det_rejects_ragged_matrix():
    with pytest.raises(DimensionMismatchError):
        det_poly([[IntPolynomial((1,))], [IntPolynomial(), IntPolynomial()]])


# ---------- rational series ----------


def test_rational_series_normalizes():
    s = RationalSeries(2, (1, -3, 2), (3, 4))
    assert s.numerator == (1, 1)
    assert s.denominator == (1,)


def test_series_expand_examples():
    assert series_expand(RationalSeries(2, (1,), (1, 1)), 5) == [1, 1, 1, 1, 1]
    assert series_expand(RationalSeries(3, (1, 1), (1,)), 4) == [1, 1, 0, 0]
    # geometric series mod 5: 1/(1-t)
    assert series_expand(RationalSeries(5, (1,), (1, 4)), 4) == [1, 1, 1, 1]


def test_series_expand_times_denominator_returns_numerator(rng):
    for _ in range(30):
        m = rng.choice([2, 3, 4, 5, 9])
        num = tuple(rng.randrange(m) for _ in range(rng.randint(0, 4)))
        den = (rng.choice([u for u in range(1, m) if _coprime(u, m)]),) + tuple(
            rng.randrange(m) for _ in range(rng.randint(0, 3))
        )
        series = RationalSeries(m, num, den)
        count = 12
        c = series_expand(series, count)
        for j in range(count - len(series.denominator)):
            conv = sum(
                series.denominator[i] * c[j - i]
                for i in range(len(series.denominator))
                if 0 <= j - i
            )
            want = series.numerator[j] if j < len(series.numerator) else 0
            assert conv % m == want % m


def _coprime(a, b):
    while b:
        a, b = b, a % b
    return a == 1


def test_series_expand_rejects_non_unit_constant():
    with pytest.raises(NonUnitConstantTermError):
        series_expand(RationalSeries(4, (1,), (2, 1)), 3)
    with pytest.raises(NonUnitConstantTermError):
        series_expand(RationalSeries(2, (1,), ()), 3)
