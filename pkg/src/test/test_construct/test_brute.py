import pytest

from chebquad.bounds.certificate import certificate_lower_bound
from chebquad.bounds.kane import kane_sup
from chebquad.construct.brute import brute_force_min_N
from chebquad.construct.quadrature import verify
from chebquad.construct.solver import solve_quadrature
from chebquad.errors import PreconditionError
from chebquad.weight.spec import WeightSpec


@pytest.mark.parametrize("n, expected", [(1, 2), (2, 3)])
def test_constant_weight(constant_circle: WeightSpec, n: int, expected: int) -> None:
    result = brute_force_min_N(constant_circle, n, n_max=4, grid=16)
    assert result.min_nodes == expected
    assert len(result.best_residuals) == expected
    assert result.best_residuals[-1] <= result.tol
    assert all(r > result.tol for r in result.best_residuals[:-1])


def test_none_when_cap_too_small(constant_circle: WeightSpec) -> None:
    result = brute_force_min_N(constant_circle, 2, n_max=2, grid=8)
    assert result.min_nodes is None
    assert len(result.best_residuals) == 2


def test_abs_sin_not_below_degree_plus_one(abs_sin: WeightSpec) -> None:
    result = brute_force_min_N(abs_sin, 1, n_max=5, grid=16)
    assert result.min_nodes is not None
    assert result.min_nodes >= 2


@pytest.mark.parametrize("n, n_max, grid", [(4, 4, 8), (1, 9, 8), (1, 4, 65), (0, 4, 8)])
def test_caps(constant_circle: WeightSpec, n: int, n_max: int, grid: int) -> None:
    with pytest.raises(PreconditionError):
        brute_force_min_N(constant_circle, n, n_max, grid)


def test_requires_circle(constant_interval: WeightSpec) -> None:
    with pytest.raises(PreconditionError):
        brute_force_min_N(constant_interval, 1, 2, 8)


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
def test_never_exceeds_node_bound(doubling_weight: tuple[WeightSpec, float], n: int) -> None:
    w, _ = doubling_weight
    bound = kane_sup(w, n).node_bound
    result = brute_force_min_N(w, n, n_max=8, grid=32)
    if result.min_nodes is not None:
        assert result.min_nodes <= bound


@pytest.mark.slow
def test_certificate_never_rules_out_a_constructed_rule(doubling_weight: tuple[WeightSpec, float]) -> None:
    # ell = 1 at n = 4 gives m = 1, the smallest degree where the certificate is not void.
    w, doubling_constant = doubling_weight
    q = solve_quadrature(w, 4, kane_sup(w, 4).node_bound)
    assert verify(q, w).accepted
    certificate = certificate_lower_bound(w, 4, doubling_constant, q.node_count, ell=1)
    assert certificate.m == 1
    assert not certificate.certified
