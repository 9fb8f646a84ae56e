"""Coideal subalgebras, the subspace-system bijection, and the Galois lattice."""

import itertools

import numpy as np
import pytest

from kacgalois import algebra as ag
from kacgalois import coideals as ci
from kacgalois import linalg as la

from conftest import ALGEBRA_NAMES


def brute_force_s3_subgroup_orders():
    """Independent oracle: enumerate subgroups of the permutations of 3 points.

    Works directly on permutation tuples with composition — no group-table
    code from the package is involved.
    """
    perms = list(itertools.permutations(range(3)))
    identity = (0, 1, 2)

    def compose(p, q):
        return tuple(p[q[i]] for i in range(3))

    subgroups = set()
    for r in range(1, len(perms) + 1):
        for cand in itertools.combinations(perms, r):
            s = set(cand)
            if identity not in s:
                continue
            if all(compose(a, b) in s for a in s for b in s):
                subgroups.add(frozenset(s))
    return sorted(len(s) for s in subgroups)


def test_s3_function_algebra_has_exactly_the_coset_coideals(algebras):
    orders = brute_force_s3_subgroup_orders()
    assert orders == [1, 2, 2, 2, 3, 6]  # the oracle itself is checked once
    out = ci.enumerate_coideals_group_case(algebras["s3_function"])
    # one coideal of functions on cosets per subgroup: dimension 6/|H|
    assert sorted(c.dim for c in out["coideals"]) == sorted(6 // o for o in orders)
    assert len(out["coideals"]) == len(orders)
    assert out["complete"]
    assert out["completeness_residual"] < 1e-8


def test_s3_group_algebra_coideals_are_subgroup_spans(algebras):
    orders = brute_force_s3_subgroup_orders()
    out = ci.enumerate_coideals_group_case(algebras["s3_group"])
    assert sorted(c.dim for c in out["coideals"]) == orders
    assert out["complete"]


@pytest.mark.parametrize(
    "name,dims",
    [
        ("q8_group", [1, 2, 4, 4, 4, 8]),
        ("q8_function", [1, 2, 2, 2, 4, 8]),
        ("z4_group", [1, 2, 4]),
        ("z2xz2_function", [1, 2, 2, 2, 4]),
    ],
)
def test_enumeration_dimensions(algebras, name, dims):
    out = ci.enumerate_coideals_group_case(algebras[name])
    assert sorted(c.dim for c in out["coideals"]) == dims
    assert out["complete"]


def test_enumeration_requires_group_origin(kp8):
    with pytest.raises(ValueError):
        ci.enumerate_coideals_group_case(kp8)


def test_certificates_and_unit_membership(algebras):
    out = ci.enumerate_coideals_group_case(algebras["s3_function"])
    for coid in out["coideals"]:
        assert coid.certificate < 1e-9
        assert coid.mm.contains_unit


def test_coideal_closure_of_group_element(algebras):
    kac = algebras["q8_group"]
    c = np.zeros(8)
    c[1] = 1.0  # a non-identity basis element
    closed = ci.coideal_closure(kac, [kac.op(c)], side="left")
    assert closed.certificate < 1e-9
    assert closed.dim in (2, 4, 8)


@pytest.mark.parametrize("name", ALGEBRA_NAMES)
def test_subspace_system_round_trip(algebras, coreps_of, name):
    kac = algebras[name]
    coreps = coreps_of(kac)
    out = ci.enumerate_coideals_group_case(kac)
    for coid in out["coideals"]:
        sys = ci.subspace_system_from_coideal(kac, coid, coreps)
        assert sys.weighted_dim() == coid.dim
        back = ci.coideal_from_subspace_system(kac, coreps, sys)
        assert ci.span_projector_distance(coid.mm, back.mm) < 1e-9
        assert back.certificate < 1e-9


def test_subspace_system_closure_certificate(algebras, coreps_of, dual_of):
    kac = algebras["s3_function"]
    coreps = coreps_of(kac)
    out = ci.enumerate_coideals_group_case(kac)
    for coid in out["coideals"]:
        sys = ci.subspace_system_from_coideal(kac, coid, coreps)
        closure = ci.check_system_closure(kac, coreps, sys)
        assert max(
            v for k, v in closure.items() if isinstance(v, float)
        ) < 1e-8, closure


@pytest.mark.parametrize("name", ALGEBRA_NAMES)
def test_galois_lattice_report(algebras, lattice_of, name):
    report = lattice_of(name)
    assert report["passed"], {k: v for k, v in report.items() if k != "rows"}
    assert report["max_residual"] < 1e-8
    n = algebras[name].dim
    for row in report["rows"]:
        assert row["dim"] * row["tilde_dim"] == n
        assert row["dim_product_exact"]
        assert row["tilde_involution"] < 1e-9
        assert row["tilde_route_distance"] < 1e-9
        assert row["bicommutant"] < 1e-9
        assert row["jones_max"] < 1e-9
    assert report["order_reversal_ok"]
    assert report["tilde_injective"]
    assert report["dim_products_exact"]


def test_lattice_dims_anti_correspond(lattice_of):
    report = lattice_of("s3_function")
    assert sorted(report["dims"]) == [1, 2, 3, 3, 3, 6]
    assert sorted(report["tilde_dims"]) == [1, 2, 2, 2, 3, 6]
    pair_map = sorted((r["dim"], r["tilde_dim"]) for r in report["rows"])
    assert pair_map == [(1, 6), (2, 3), (3, 2), (3, 2), (3, 2), (6, 1)]


def test_tilde_lands_in_dual_and_is_right_coideal(algebras, dual_of):
    kac = algebras["z4_group"]
    dd = dual_of(kac)
    out = ci.enumerate_coideals_group_case(kac)
    for coid in out["coideals"]:
        td = ci.tilde(kac, coid, dd)
        assert td.home == "dual"
        assert td.certificate < 1e-9
        assert td.dim * coid.dim == kac.dim
        # independent route: antipode image of the relative commutant in the dual
        route = ci.tilde_via_commutant(kac, coid, dd)
        assert ci.span_projector_distance(route["mm"], td.mm) < 1e-9
        assert route["intersection_right_coideal"] < 1e-9
        both = ci.bicommutant_check(kac, coid, dd)
        assert both["distance"] < 1e-9 and both["dim"] == coid.dim


def test_jones_projection_weight_identities(algebras, dual_of):
    for name in ("s3_function", "z4_group"):
        kac = algebras[name]
        dd = dual_of(kac)
        out = ci.enumerate_coideals_group_case(kac)
        for coid in out["coideals"]:
            rep = ci.jones_projection_coideal(kac, coid, dd)
            assert rep["dual_haar_value"] < 1e-9
            assert rep["counit_of_projected_integral"] < 1e-9
            assert rep["scaled_dual_expectation"] < 1e-9
            assert rep["idempotent"] < 1e-9
            assert rep["dual_membership"] < 1e-9


def test_fingerprints_distinguish_distinct_coideals(algebras):
    kac = algebras["s3_function"]
    out = ci.enumerate_coideals_group_case(kac)
    digests = {ci.coideal_digest(kac, c.mm) for c in out["coideals"]}
    assert len(digests) == len(out["coideals"])


def test_subgroup_recovery_from_subspace_system(algebras, coreps_of):
    kac = algebras["s3_function"]
    coreps = coreps_of(kac)
    out = ci.enumerate_coideals_group_case(kac)
    for sub, coid in zip(out["subgroups"], out["coideals"]):
        sys = ci.subspace_system_from_coideal(kac, coid, coreps)
        recovered = ci.subgroup_from_system(kac, coreps, sys)
        assert recovered["is_subgroup"]
        assert sorted(recovered["subgroup"]) == sorted(sub)
        assert recovered["system_rederivation"] < 1e-8
        assert recovered["representation_residual"] < 1e-8
