import pytest
from hypothesis import assume, given, settings

from boundext.linalg import QQ
from boundext.modules import (ExceedsBound, Nilpotent, NotNilpotentUpTo, direct_sum, enveloping_algebra,
                              forget_left, forget_right, global_dimension, left_env, projective_cover,
                              projective_dimension, regular_bimodule, simple_module, tensor_over,
                              tensor_power_nilpotency)
from boundext.quiver import Arrow, Quiver, QuiverAlgebra, lincomb

from conftest import load
from test_quiver import bounded_quivers, linear, loop


def dual_numbers():
    q = loop()
    return QuiverAlgebra(q, [lincomb(q, [(1, "xx", None)])])


def a3_rad_square_zero():
    q = linear(3)
    return QuiverAlgebra(q, [lincomb(q, [(1, ["x2", "x1"], None)])])


def test_enveloping_algebra():
    A = a3_rad_square_zero()
    E = enveloping_algebra(A)
    assert E.dim == A.dim ** 2
    assert E.is_associative()


@pytest.mark.parametrize("alg", [dual_numbers, a3_rad_square_zero, lambda: QuiverAlgebra(linear(4))])
def test_regular_bimodule_and_tensor_identity(alg):
    A = alg()
    M = regular_bimodule(A)
    assert M.is_module() and M.dim == A.dim
    assert tensor_over(M, M).dim == A.dim
    assert forget_right(M).dim == forget_left(M).dim == A.dim


def test_projective_dimensions_of_env_projectives():
    A = a3_rad_square_zero()
    E = enveloping_algebra(A)
    for v in E.vertices:
        P = E.projective(v)
        x, y = v
        left = sum(1 for w in A.words if w.source == x)
        right = sum(1 for w in A.words if w.target == y)
        assert P.module.dim == left * right
        assert projective_dimension(P.module) == 0


def test_cover_is_surjective():
    A = a3_rad_square_zero()
    E = left_env(A)
    for v in E.vertices:
        S = simple_module(E, v)
        cov = projective_cover(S)
        assert cov.P.dim - cov.syzygy.dim == S.dim
        assert len(cov.summands) == 1


@pytest.mark.parametrize("alg, expected", [
    (lambda: QuiverAlgebra(Quiver("12", [])), 0),
    (lambda: QuiverAlgebra(linear(4)), 1),
    (a3_rad_square_zero, 2),
])
def test_global_dimension(alg, expected):
    A = alg()
    assert global_dimension(A) == expected
    assert global_dimension(A, side="right") == expected
    assert projective_dimension(regular_bimodule(A)) == expected


def test_self_injective_has_infinite_global_dimension():
    assert global_dimension(dual_numbers(), bound=6) == ExceedsBound(6)


def test_direct_sum_dimension():
    A = a3_rad_square_zero()
    E = left_env(A)
    S = [simple_module(E, v) for v in E.vertices]
    assert direct_sum(E, S).dim == 3


def test_fixture_tensor_nilpotency():
    assert tensor_power_nilpotency(load("ex6_1").quotient_bimodule()) == Nilpotent(2, (27, 0))
    r = tensor_power_nilpotency(load("rea").quotient_bimodule(), 6)
    assert r == NotNilpotentUpTo(6, (4,) * 6)


@settings(max_examples=15, deadline=None)
@given(bounded_quivers())
def test_left_and_right_global_dimension_agree(data):
    q, gens = data
    A = QuiverAlgebra(q, gens, QQ)
    assume(A.dim <= 10)
    left, right = global_dimension(A, 5), global_dimension(A, 5, "right")
    assert left == right
    # over a perfect field pd of A over its enveloping algebra is gldim A
    assert projective_dimension(regular_bimodule(A), 5) == left
