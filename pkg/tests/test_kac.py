"""Kac algebra constructors, the axiom validator, and JSON round trips."""

import numpy as np
import pytest

from kacgalois import kac as kc

from conftest import ALGEBRA_NAMES


@pytest.mark.parametrize("name", ALGEBRA_NAMES)
def test_axioms_hold_on_group_derived_algebras(algebras, name):
    report = kc.validate_kac(algebras[name])
    assert report["passed"]
    assert report["max_residual"] < 1e-10


def test_axioms_hold_on_tensor_products(algebras, tensor_algebras):
    for name, prod in tensor_algebras.items():
        left, right = name.split("*")
        assert prod.dim == algebras[left].dim * algebras[right].dim
        report = kc.validate_kac(prod)
        assert report["passed"], (name, report["max_residual"])
        assert report["max_residual"] < 1e-10


def test_bundled_eight_dimensional_algebra_validates(kp8):
    assert kp8.dim == 8
    report = kc.validate_kac(kp8)
    assert report["passed"]
    assert report["max_residual"] < 1e-10


def test_function_algebra_is_commutative_group_algebra_matches_group(groups):
    for name, g in groups.items():
        fn = kc.function_algebra(g)
        assert np.abs(fn.mult - fn.mult.transpose(1, 0, 2)).max() < 1e-12
        ga = kc.group_algebra(g)
        commutative = np.abs(ga.mult - ga.mult.transpose(1, 0, 2)).max() < 1e-12
        assert commutative == g.is_abelian()


def test_group_algebra_antipode_is_inversion(groups):
    g = groups["s3"]
    ga = kc.group_algebra(g)
    for x in range(g.order):
        e_x = np.zeros(g.order)
        e_x[x] = 1.0
        image = ga.antipode.T @ e_x
        expect = np.zeros(g.order)
        expect[g.inverse[x]] = 1.0
        np.testing.assert_allclose(image, expect, atol=1e-12)


def test_haar_is_uniform_on_function_algebra(groups):
    fn = kc.function_algebra(groups["z4"])
    np.testing.assert_allclose(fn.haar, np.full(4, 0.25), atol=1e-12)


@pytest.mark.parametrize("name", ["s3_function", "q8_group"])
def test_save_load_round_trip(tmp_path, algebras, name):
    kac = algebras[name]
    path = tmp_path / f"{name}.json"
    kc.save_kac(kac, str(path))
    back = kc.load_kac(str(path))
    np.testing.assert_allclose(back.mult, kac.mult, atol=1e-12)
    np.testing.assert_allclose(back.delta, kac.delta, atol=1e-12)
    np.testing.assert_allclose(back.antipode, kac.antipode, atol=1e-12)
    np.testing.assert_allclose(back.star, kac.star, atol=1e-12)
    np.testing.assert_allclose(back.counit, kac.counit, atol=1e-12)
    np.testing.assert_allclose(back.haar, kac.haar, atol=1e-12)
    assert back.labels == kac.labels
    assert back.origin == kac.origin
    assert back.group is not None
    np.testing.assert_array_equal(back.group.table, kac.group.table)


def test_load_accepts_parsed_document(algebras):
    doc = algebras["z3_group"].to_json()
    back = kc.load_kac(doc)
    assert back.dim == 3


@pytest.mark.parametrize(
    "field,index",
    [("mult", (0, 0, 0)), ("delta", (0, 0, 0)), ("antipode", (0, 0)), ("star", (1, 0))],
)
def test_loader_rejects_corrupted_structure(algebras, field, index):
    doc = algebras["z3_group"].to_json()
    cell = doc[field]
    for i in index[:-1]:
        cell = cell[i]
    cell[index[-1]] = [cell[index[-1]][0] + 0.3, cell[index[-1]][1]]
    with pytest.raises(kc.AxiomError):
        kc.load_kac(doc)


def test_loader_rejects_missing_field_and_bad_shape(algebras):
    doc = algebras["z2_group"].to_json()
    del doc["antipode"]
    with pytest.raises(kc.AxiomError):
        kc.load_kac(doc)
    doc2 = algebras["z2_group"].to_json()
    doc2["haar"] = doc2["haar"][:1]
    with pytest.raises(kc.AxiomError):
        kc.load_kac(doc2)


def test_loader_rejects_non_group_table(algebras):
    doc = algebras["z4_group"].to_json()
    doc["group"]["mult"][0][0] = 3  # identity row broken
    with pytest.raises(kc.AxiomError):
        kc.load_kac(doc)


def test_validator_flags_broken_coassociativity(algebras):
    kac = algebras["z3_group"]
    delta = kac.delta.copy()
    delta[0, 0, 0] += 0.05
    report_ok = kc.validate_kac(kac)
    assert report_ok["coproduct_coassociative"] < 1e-12
    try:
        broken = kc.kac_from_structure(
            list(kac.labels), kac.mult, delta, kac.counit,
            kac.antipode, kac.star, kac.haar,
        )
    except kc.AxiomError:
        return  # rejected at construction: acceptable
    report = kc.validate_kac(broken)
    assert not report["passed"]


def test_group_table_validation(groups):
    for g in groups.values():
        rep = g.validate()
        assert rep["passed"]
    bad = kc.GroupTable(order=3, table=np.zeros((3, 3), dtype=int), labels=("a", "b", "c"))
    assert not bad.validate()["passed"]


@pytest.mark.parametrize(
    "name,orders",
    [
        ("z4", [1, 2, 4]),
        ("s3", [1, 2, 2, 2, 3, 6]),
        ("q8", [1, 2, 4, 4, 4, 8]),
        ("z2xz2", [1, 2, 2, 2, 4]),
    ],
)
def test_subgroup_enumeration_orders(groups, name, orders):
    subs = groups[name].subgroups()
    assert sorted(len(s) for s in subs) == orders


def test_direct_product_group_structure():
    z6 = kc.direct_product_group(kc.cyclic_group(2), kc.cyclic_group(3))
    assert z6.order == 6
    assert z6.validate()["passed"]
    assert z6.is_abelian()


def test_coefficient_operator_round_trip(algebras):
    kac = algebras["q8_function"]
    rng = np.random.default_rng(3)
    c = rng.standard_normal(kac.dim) + 1j * rng.standard_normal(kac.dim)
    np.testing.assert_allclose(kac.coeffs_of(kac.op(c)), c, atol=1e-9)
