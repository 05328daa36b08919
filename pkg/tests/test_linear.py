from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prelie_posets import FormalSum, TensorSum, class_key, connected_keys, kernel_basis, tensor
from prelie_posets.linear import Subspace, extend_bilinear, flip12, matrix_of, nullspace, preimage, rank, rref
from prelie_posets.operations import _delta_k, _prelie_k

from shapes import C2, C3, DOT, V, W

A, B, C = class_key(DOT), class_key(C2), class_key(W)


def test_zero_coefficients_are_dropped():
    x = FormalSum({A: 1, B: 0})
    assert len(x) == 1
    assert x + (-x) == 0
    assert not (x - x)


def test_equality_is_map_equality():
    assert FormalSum({A: Fraction(2, 4)}) == FormalSum({A: Fraction(1, 2)})
    assert FormalSum({A: 1}) != FormalSum({A: 1, B: 1})


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        FormalSum({A: 0.5})
    with pytest.raises(TypeError):
        FormalSum({A: 1}) * 0.5


def test_flip12():
    t = TensorSum({(A, B, C): 3})
    assert flip12(t) == TensorSum({(B, A, C): 3})


def test_tensor_bilinear():
    assert tensor(FormalSum({A: 2}), FormalSum({B: 1})) == TensorSum({(A, B): 2})
    t3 = tensor(tensor(FormalSum({A: 1}), FormalSum({B: 1})), FormalSum({C: 1}))
    assert t3.arity == 3


def test_extend_bilinear_linearity():
    lin = extend_bilinear(_prelie_k)
    x = FormalSum({A: 1, B: 1})
    y = FormalSum({A: 1})
    assert lin(x, y) == _prelie_k(A, A) + _prelie_k(B, A)
    assert lin(x * 3, y) == lin(x, y) * 3


def test_grade():
    assert FormalSum({C: 1, class_key(V): 2}).grade() == 3
    assert FormalSum({A: 1, B: 1}).grade() is None
    assert TensorSum({(A, B): 1}).grade() == 3


def test_iteration_is_sorted():
    x = FormalSum({C: 1, A: 1, B: 1})
    assert list(x) == sorted([A, B, C])


# -- exact elimination ------------------------------------------------------

matrices = st.integers(1, 5).flatmap(
    lambda cols: st.lists(st.lists(st.integers(-3, 3).map(Fraction), min_size=cols, max_size=cols),
                          min_size=1, max_size=5).map(lambda rows: (rows, cols)))


@given(matrices)
def test_nullspace_vectors_are_annihilated(data):
    rows, cols = data
    basis = nullspace(rows, cols)
    for v in basis:
        for r in rows:
            assert sum(a * b for a, b in zip(r, v)) == 0
    red, pivots = rref(rows, cols)
    assert len(pivots) + len(basis) == cols


@given(matrices)
def test_rref_rows_have_unit_pivots(data):
    rows, cols = data
    red, pivots = rref(rows, cols)
    for i, (row, pc) in enumerate(zip(red, pivots)):
        assert row[pc] == 1
        assert all(red[j][pc] == 0 for j in range(len(red)) if j != i)


def test_kernel_on_small_grades():
    assert kernel_basis(connected_keys(1), _delta_k) == [FormalSum({A: 1})]
    assert kernel_basis(connected_keys(2), _delta_k) == []
    assert kernel_basis(connected_keys(3), _delta_k) == [FormalSum({C: 1})]


def test_rank_nullity_for_delta():
    for n in range(1, 6):
        dom = connected_keys(n)
        assert rank(dom, _delta_k) + len(kernel_basis(dom, _delta_k)) == len(dom)


def test_matrix_of_shape():
    rows, codomain = matrix_of(connected_keys(3), _delta_k)
    assert len(rows) == len(codomain)
    assert all(len(r) == 3 for r in rows)


def test_subspace_membership():
    s = Subspace([FormalSum({A: 1, B: 1}), FormalSum({B: 1, C: 1})])
    assert s.dim == 2
    assert s.contains(FormalSum({A: 1, C: -1}))
    assert not s.contains(FormalSum({A: 1}))
    assert not s.contains(FormalSum({class_key(C3): 1}))


def test_preimage_of_zero_is_kernel():
    dom = connected_keys(4)
    pre = preimage(dom, _delta_k, Subspace([]))
    assert Subspace(pre).dim == len(kernel_basis(dom, _delta_k))
