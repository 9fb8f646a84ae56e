"""Shared session fixtures: the standard test algebras and cached heavy objects.

The dual construction, corepresentation extraction, and Galois lattice are
the expensive steps, so each is computed once per algebra for the whole run.
"""

import pytest
from importlib import resources

from kacgalois import coideals as ci
from kacgalois import coreps as cr
from kacgalois import duality as du
from kacgalois import kac as kc

GROUP_BUILDERS = (
    ("z2", lambda: kc.cyclic_group(2)),
    ("z3", lambda: kc.cyclic_group(3)),
    ("z4", lambda: kc.cyclic_group(4)),
    ("z2xz2", kc.klein_group),
    ("s3", kc.symmetric_group_3),
    ("q8", kc.quaternion_group),
)

GROUP_NAMES = tuple(name for name, _ in GROUP_BUILDERS)
ALGEBRA_NAMES = tuple(
    f"{name}_{kind}" for name, _ in GROUP_BUILDERS for kind in ("group", "function")
)


@pytest.fixture(scope="session")
def groups():
    return {name: build() for name, build in GROUP_BUILDERS}


@pytest.fixture(scope="session")
def algebras(groups):
    out = {}
    for name, g in groups.items():
        out[f"{name}_group"] = kc.group_algebra(g)
        out[f"{name}_function"] = kc.function_algebra(g)
    return out


@pytest.fixture(scope="session")
def kp8():
    path = resources.files("kacgalois").joinpath("fixtures/kp8.json")
    return kc.load_kac(str(path))


TENSOR_COMBOS = (
    ("z2_group", "z2_group"),
    ("z2_group", "z3_function"),
    ("z4_group", "z3_group"),
    ("s3_function", "z2_group"),
)


@pytest.fixture(scope="session")
def tensor_algebras(algebras):
    return {
        f"{left}*{right}": kc.tensor_kac(algebras[left], algebras[right])
        for left, right in TENSOR_COMBOS
    }


@pytest.fixture(scope="session")
def dual_of():
    cache = {}

    def get(kac):
        key = id(kac)
        if key not in cache:
            cache[key] = du.dual_kac(kac)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def coreps_of(dual_of):
    cache = {}

    def get(kac):
        key = id(kac)
        if key not in cache:
            dd = dual_of(kac)
            cache[key] = cr.irreducible_coreps(kac, dd.v, dd.hat)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def lattice_of(algebras):
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = ci.galois_lattice_report(algebras[name])
        return cache[name]

    return get
