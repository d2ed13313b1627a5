import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyproof.ffield import PrimeField
from polyproof.mpoly import MissingAssignment, MPoly, NotDivisible

X1 = MPoly.var(1)
X2 = MPoly.var(2)


def poly_from_terms(terms):
    """Build an MPoly from [(coeff, {var: exp, ...}), ...] term lists."""
    result = MPoly.zero()
    for coeff, powers in terms:
        term = MPoly.const(coeff)
        for v, e in powers.items():
            term = term * MPoly.var(v, e)
        result = result + term
    return result


# Random polynomials with <= 5 variables and degree <= 6.
monomials = st.dictionaries(st.integers(0, 4), st.integers(1, 2), max_size=3)
polys = st.builds(
    poly_from_terms,
    st.lists(st.tuples(st.integers(-9, 9), monomials), max_size=5),
)


def test_add_identity():
    assert X1 + MPoly.zero() == X1


def test_add_cancellation():
    assert (X1 + MPoly.one()) + (X1 - MPoly.one()) == MPoly.const(2) * X1


def test_add_commutative_monomials():
    assert X1 * X2 + X2 * X1 == MPoly.const(2) * X1 * X2


def test_mul_identity():
    assert X1 * MPoly.one() == X1


def test_difference_of_squares():
    assert (X1 + MPoly.one()) * (X1 - MPoly.one()) == X1 * X1 - MPoly.one()


def test_mul_canonical_exponent_list():
    prod = X1 * X2
    ((mono, coeff),) = [prod.single_monomial()]
    assert mono == ((1, 1), (2, 1))
    assert coeff == 1


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_div_exact_factor_out():
    a = X1 * X2 + X1 * X1
    assert a.div_exact_by_var(1) == X2 + X1


def test_div_exact_zero():
    assert MPoly.zero().div_exact_by_var(3) == MPoly.zero()


def test_div_exact_blocked():
    with pytest.raises(NotDivisible):
        (X1 + X2).div_exact_by_var(1)


@given(polys, st.integers(0, 4))
def test_div_mul_roundtrip(a, v):
    assert (a * MPoly.var(v)).div_exact_by_var(v) == a


def test_eval_linear():
    f = PrimeField(101)
    assert (X1 + MPoly.one()).eval({1: f.elem(2)}, f).value == 3


def test_eval_product():
    f = PrimeField(101)
    assert (X1 * X2).eval({1: f.elem(7), 2: f.elem(11)}, f).value == 77


def test_eval_square_minus_one():
    # 10**2 - 1 = 99 mod 101
    f = PrimeField(101)
    assert (X1 * X1 - MPoly.one()).eval({1: f.elem(10)}, f).value == 99


def test_eval_missing_assignment():
    f = PrimeField(101)
    with pytest.raises(MissingAssignment):
        (X1 + X2).eval({1: f.elem(3)}, f)


@given(polys, polys, st.lists(st.integers(0, 100), min_size=5, max_size=5))
def test_eval_is_homomorphism(a, b, point):
    f = PrimeField(101)
    asg = {v: f.elem(val) for v, val in enumerate(point)}
    lhs = (a * b + a).eval(asg, f)
    rhs = a.eval(asg, f) * b.eval(asg, f) + a.eval(asg, f)
    assert lhs == rhs


def test_degree():
    assert (MPoly.var(1, 2) * X2 + MPoly.var(3)).degree() == 3
    assert MPoly.const(5).degree() == 0
    assert MPoly.zero().degree() == -1


def test_render_ordering():
    p = MPoly.const(2) * MPoly.var(3, 2) * MPoly.var(5) + MPoly.var(1) - MPoly.const(4)
    assert p.render() == "2*X3^2*X5 + X1 - 4"


def test_render_zero():
    assert MPoly.zero().render() == "0"


@given(polys)
def test_parse_render_roundtrip(p):
    assert MPoly.parse(p.render()) == p


def test_parse_custom_names():
    names = {}
    p = MPoly.parse("U*V + 2*U - 1", names, allow_new=True)
    assert names == {"U": 0, "V": 1}
    assert p == MPoly.var(0) * MPoly.var(1) + MPoly.const(2) * MPoly.var(0) - MPoly.one()


def test_parse_rejects_unknown_names():
    with pytest.raises(ValueError):
        MPoly.parse("Q + 1")
