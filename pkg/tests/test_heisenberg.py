import numpy as np
import pytest

from gqlab.algebra.forms import commutator_form, verify_commutator_form
from gqlab.algebra.groups import cyclic, direct_product, is_special_pgroup, nilpotency_class_two
from gqlab.catalog import generalized_quaternion
from gqlab.constructions import heisenberg, heisenberg_element
from gqlab.errors import CenterNotElementaryAbelian, CenterNotFieldSized, NotClassTwo, SizeBudgetExceeded

CASES = [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3)]


@pytest.mark.parametrize("n,q", CASES)
def test_heisenberg_structure(n, q):
    H = heisenberg(n, q)
    p = 2 if q % 2 == 0 else q
    assert H.n == q ** (2 * n + 1)
    assert H.exponent == (4 if q % 2 == 0 else p)
    Z, Phi, D = H.center, H.frattini, H.derived_subgroup
    assert len(Z) == q
    assert Z.members == Phi.members == D.members
    assert nilpotency_class_two(H)


@pytest.mark.parametrize("n,q", CASES)
def test_commutator_form(n, q):
    H = heisenberg(n, q)
    form = commutator_form(H, q)
    assert form.dimension == 2 * n
    assert form.alternating and form.nonsingular
    assert verify_commutator_form(H, form)


@pytest.mark.parametrize("q", [2, 3])
def test_h2_is_special(q):
    rep = is_special_pgroup(heisenberg(2, q), q)
    assert rep.ok, rep.failed()


def test_multiplication_rule():
    H = heisenberg(2, 3)
    a = heisenberg_element(H, [1, 2], 0, [0, 1])
    b = heisenberg_element(H, [2, 0], 1, [1, 1])
    # c = 0 + 1 + (1*1 + 2*1) = 1 (mod 3), alpha = (0, 2), beta = (1, 2)
    assert H.mul[a, b] == heisenberg_element(H, [0, 2], 1, [1, 2])


def test_size_budget():
    with pytest.raises(SizeBudgetExceeded):
        heisenberg(3, 4)


def test_abelian_group_gets_singular_zero_form():
    form = commutator_form(direct_product(cyclic(3), cyclic(3)))
    assert form.alternating and not form.nonsingular
    assert not np.asarray(form.matrix).any()


def test_form_errors():
    from gqlab.algebra.groups import group_from_permutations

    S3, _ = group_from_permutations([np.array([1, 2, 0]), np.array([1, 0, 2])])
    with pytest.raises(NotClassTwo):
        commutator_form(S3)
    with pytest.raises(CenterNotElementaryAbelian):
        commutator_form(direct_product(cyclic(4), generalized_quaternion(8)))
    with pytest.raises(CenterNotFieldSized):
        commutator_form(direct_product(heisenberg(1, 3), cyclic(3)), q=3)
