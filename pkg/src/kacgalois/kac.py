"""Finite-dimensional Kac algebras from structure tensors.

A Kac algebra is specified here by dense coefficient tensors over a fixed
basis b₀…b_{n-1}: a product tensor, a coproduct tensor, a counit vector, an
antipode matrix, a star matrix, and the Haar state vector.  The constructor
materializes the algebra as concrete matrices acting on the GNS space of the
Haar state, which is where all duality computations happen.

Conventions
-----------
``mult[i, j, k]``    coefficient of b_k in bᵢ·bⱼ
``delta[k, i, j]``   coefficient of bᵢ⊗bⱼ in the coproduct of b_k
``counit[i]``        value of the counit on bᵢ
``antipode[i, j]``   coefficient of bⱼ in the antipode of bᵢ
``star[i, j]``       coefficient of bⱼ in bᵢ*
``haar[i]``          value of the Haar state on bᵢ
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .linalg import DEFAULT_TOL, dagger, frob


class AxiomError(ValueError):
    """Structure tensors fail the defining axioms; carries the residual report."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


# ---------------------------------------------------------------------------
# Group tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupTable:
    """A finite group as a multiplication table over indices 0…n-1.

    Index 0 is the identity.  ``table[i, j]`` is the index of gᵢ·gⱼ.
    """

    order: int
    table: np.ndarray
    labels: tuple

    @property
    def inverse(self) -> np.ndarray:
        inv = np.zeros(self.order, dtype=int)
        for i in range(self.order):
            js = np.where(self.table[i] == 0)[0]
            inv[i] = int(js[0])
        return inv

    def validate(self) -> dict:
        t = self.table
        n = self.order
        assoc = bool(np.array_equal(t[t, :], t[:, t]))
        ident = bool(np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n)))
        inv_ok = all((t[i] == 0).sum() == 1 for i in range(n))
        return {"associative": assoc, "identity": ident, "inverses": inv_ok,
                "passed": assoc and ident and inv_ok}

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def subgroups(self) -> list[tuple[int, ...]]:
        """All subgroups, as sorted index tuples, found by closure search.

        Every subgroup arises from some smaller one by adjoining a single
        element and closing, so a breadth-first search from the trivial
        subgroup is exhaustive.
        """
        t = self.table

        def close(elems: frozenset) -> frozenset:
            cur = set(elems)
            frontier = list(cur)
            while frontier:
                new = set()
                for a in list(cur):
                    for b in frontier:
                        new.add(int(t[a, b]))
                        new.add(int(t[b, a]))
                new -= cur
                cur |= new
                frontier = list(new)
            return frozenset(cur)

        found = {frozenset({0})}
        frontier = [frozenset({0})]
        while frontier:
            nxt = []
            for h in frontier:
                for g in range(self.order):
                    if g in h:
                        continue
                    h2 = close(h | {g})
                    if h2 not in found:
                        found.add(h2)
                        nxt.append(h2)
            frontier = nxt
        return sorted(tuple(sorted(h)) for h in found)


def cyclic_group(n: int) -> GroupTable:
    """The cyclic group of order n."""
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    labels = tuple(["e"] + [f"g^{i}" if i > 1 else "g" for i in range(1, n)])
    return GroupTable(order=n, table=table, labels=labels)


def symmetric_group_3() -> GroupTable:
    """The symmetric group on three letters (order 6)."""
    perms = [
        (0, 1, 2),  # e
        (1, 0, 2),  # (12)
        (2, 1, 0),  # (13)
        (0, 2, 1),  # (23)
        (1, 2, 0),  # (123): 1->2->3->1
        (2, 0, 1),  # (132)
    ]
    labels = ("e", "(12)", "(13)", "(23)", "(123)", "(132)")
    n = len(perms)
    table = np.zeros((n, n), dtype=int)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            comp = tuple(p[q[x]] for x in range(3))  # apply q first, then p
            table[i, j] = perms.index(comp)
    return GroupTable(order=n, table=table, labels=labels)


def quaternion_group() -> GroupTable:
    """The quaternion group Q₈ = {±1, ±i, ±j, ±k}."""
    # Element index: 2·unit + (1 if negative), units ordered 1, i, j, k.
    unit_mul = {}  # (u, v) -> (sign, w)
    for u in range(4):
        unit_mul[(0, u)] = (1, u)
        unit_mul[(u, 0)] = (1, u)
    for u in (1, 2, 3):
        unit_mul[(u, u)] = (-1, 0)
    cyc = {(1, 2): 3, (2, 3): 1, (3, 1): 2}
    for (u, v), w in cyc.items():
        unit_mul[(u, v)] = (1, w)
        unit_mul[(v, u)] = (-1, w)
    n = 8
    table = np.zeros((n, n), dtype=int)
    for a in range(n):
        for b in range(n):
            ua, sa = a // 2, -1 if a % 2 else 1
            ub, sb = b // 2, -1 if b % 2 else 1
            s, w = unit_mul[(ua, ub)]
            s *= sa * sb
            table[a, b] = 2 * w + (1 if s < 0 else 0)
    labels = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    return GroupTable(order=n, table=table, labels=labels)


def direct_product_group(a: GroupTable, b: GroupTable) -> GroupTable:
    """The direct product, indexed as i_a·|b| + i_b."""
    na, nb = a.order, b.order
    table = np.zeros((na * nb, na * nb), dtype=int)
    for ia in range(na):
        for ib in range(nb):
            for ja in range(na):
                for jb in range(nb):
                    table[ia * nb + ib, ja * nb + jb] = a.table[ia, ja] * nb + b.table[ib, jb]
    labels = tuple(f"({la_},{lb_})" for la_ in a.labels for lb_ in b.labels)
    return GroupTable(order=na * nb, table=table, labels=labels)


def klein_group() -> GroupTable:
    """The Klein four-group as ℤ₂ × ℤ₂."""
    return direct_product_group(cyclic_group(2), cyclic_group(2))


# ---------------------------------------------------------------------------
# Kac algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KacAlgebra:
    """A Kac algebra with structure tensors and its Haar-GNS materialization.

    The concrete side lives on ℂⁿ (the GNS space of the Haar state): ``lmats``
    are the left-multiplication operators of the basis, ``omega`` the cyclic
    vector, ``coord`` the coefficient-to-GNS coordinate map, and ``mj`` the
    linear part of the modular conjugation (x Ω ↦ x* Ω, which is already
    antiunitary because the Haar state is a trace).
    """

    dim: int
    labels: tuple
    mult: np.ndarray
    delta: np.ndarray
    counit: np.ndarray
    antipode: np.ndarray
    star: np.ndarray
    haar: np.ndarray
    unit_coeffs: np.ndarray
    lmats: tuple
    omega: np.ndarray
    coord: np.ndarray
    coord_inv: np.ndarray
    mj: np.ndarray
    origin: str = "custom"
    group: GroupTable | None = None

    # -- coefficient/operator translation ---------------------------------

    def op(self, coeffs: np.ndarray) -> np.ndarray:
        """The operator Σ cᵢ·L(bᵢ) on the GNS space."""
        return np.tensordot(np.asarray(coeffs, dtype=complex), np.stack(self.lmats), axes=(0, 0))

    def coeffs_of(self, x: np.ndarray) -> np.ndarray:
        """Basis coefficients of an operator in the algebra (via x·Ω)."""
        return self.coord_inv @ (x @ self.omega)

    @property
    def unit_op(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    # -- structure maps on operators --------------------------------------

    def delta_op(self, x: np.ndarray) -> np.ndarray:
        """Coproduct of an algebra operator, as an n²×n² matrix."""
        c = self.coeffs_of(x)
        w = np.tensordot(c, self.delta, axes=(0, 0))  # (n, n) weights over bᵢ⊗bⱼ
        stack = np.stack(self.lmats)
        out = np.einsum("ij,iac,jbe->abce", w, stack, stack, optimize=True)
        n = self.dim
        return out.reshape(n * n, n * n)

    def kappa_op(self, x: np.ndarray) -> np.ndarray:
        """Antipode of an algebra operator."""
        return self.op(self.antipode.T @ self.coeffs_of(x))

    def counit_of(self, x: np.ndarray) -> complex:
        return complex(self.counit @ self.coeffs_of(x))

    def haar_of(self, x: np.ndarray) -> complex:
        """Haar state, evaluated as the Ω-expectation on the GNS space."""
        return complex(np.vdot(self.omega, x @ self.omega))

    def star_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        """Coefficients of x* given those of x (antilinear)."""
        return self.star.T @ np.conj(np.asarray(coeffs, dtype=complex))

    def as_mm(self):
        """The materialized algebra as an :class:`~kacgalois.algebra.MMAlgebra`."""
        from . import algebra as ag

        return ag.from_span(list(self.lmats), self.dim)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        def c(z: complex) -> list:
            return [float(np.real(z)), float(np.imag(z))]

        doc = {
            "dim": self.dim,
            "basis_labels": list(self.labels),
            "mult": [[[c(self.mult[i, j, k]) for k in range(self.dim)]
                      for j in range(self.dim)] for i in range(self.dim)],
            "delta": [[[c(self.delta[k, i, j]) for j in range(self.dim)]
                       for i in range(self.dim)] for k in range(self.dim)],
            "counit": [c(v) for v in self.counit],
            "antipode": [[c(v) for v in row] for row in self.antipode],
            "star": [[c(v) for v in row] for row in self.star],
            "haar": [c(v) for v in self.haar],
        }
        if self.origin != "custom":
            doc["origin"] = self.origin
        if self.group is not None:
            doc["group"] = {
                "order": self.group.order,
                "mult": [[int(v) for v in row] for row in self.group.table],
                "labels": list(self.group.labels),
            }
        return doc


def _as_complex_tensor(doc, shape, name: str) -> np.ndarray:
    arr = np.asarray(doc, dtype=float)
    if arr.shape != shape + (2,):
        raise AxiomError(f"field '{name}' has shape {arr.shape}, expected {shape + (2,)}")
    return arr[..., 0] + 1j * arr[..., 1]


def kac_from_structure(
    labels,
    mult,
    delta,
    counit,
    antipode,
    star,
    haar,
    origin: str = "custom",
    group: GroupTable | None = None,
    tol: float = DEFAULT_TOL,
) -> KacAlgebra:
    """Build a :class:`KacAlgebra` from structure tensors.

    Solves for the unit, checks the Haar Gram matrix is positive definite
    (existence of the GNS space), and materializes the left regular action.
    Axioms are *not* fully verified here — run :func:`validate_kac`.
    """
    mult = np.asarray(mult, dtype=complex)
    delta = np.asarray(delta, dtype=complex)
    counit = np.asarray(counit, dtype=complex)
    antipode = np.asarray(antipode, dtype=complex)
    star = np.asarray(star, dtype=complex)
    haar = np.asarray(haar, dtype=complex)
    n = mult.shape[0]
    if mult.shape != (n, n, n) or delta.shape != (n, n, n):
        raise AxiomError("product/coproduct tensors must be n×n×n")
    for name, arr, shape in (
        ("counit", counit, (n,)),
        ("antipode", antipode, (n, n)),
        ("star", star, (n, n)),
        ("haar", haar, (n,)),
    ):
        if arr.shape != shape:
            raise AxiomError(f"field '{name}' has shape {arr.shape}, expected {shape}")

    # Unit coefficients: Σⱼ uⱼ·(bᵢ bⱼ) = bᵢ and Σⱼ uⱼ·(bⱼ bᵢ) = bᵢ.
    eye = np.eye(n, dtype=complex)
    lhs = np.concatenate(
        [mult.transpose(0, 2, 1).reshape(n * n, n), mult.transpose(1, 2, 0).reshape(n * n, n)]
    )
    rhs = np.concatenate([eye.reshape(-1), eye.reshape(-1)])
    unit_coeffs, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    unit_res = float(np.linalg.norm(lhs @ unit_coeffs - rhs))
    if unit_res > tol * n:
        raise AxiomError(f"no two-sided unit in the span (residual {unit_res:.3e})")

    # Haar Gram matrix h(bᵢ* bⱼ) and GNS coordinates.
    gram = np.einsum("ip,pjk,k->ij", star, mult, haar, optimize=True)
    gram = (gram + dagger(gram)) / 2.0
    w, u = np.linalg.eigh(gram)
    if w.min() < tol:
        raise AxiomError(
            f"haar functional is not faithful and positive (Gram eigenvalue {w.min():.3e})"
        )
    coord = (u * np.sqrt(w)) @ dagger(u)
    coord_inv = (u / np.sqrt(w)) @ dagger(u)

    lmats = tuple(coord @ mult[i].T @ coord_inv for i in range(n))
    omega = coord @ unit_coeffs
    ms = coord @ star.T @ np.conj(coord_inv)

    return KacAlgebra(
        dim=n,
        labels=tuple(labels),
        mult=mult,
        delta=delta,
        counit=counit,
        antipode=antipode,
        star=star,
        haar=haar,
        unit_coeffs=unit_coeffs,
        lmats=lmats,
        omega=omega,
        coord=coord,
        coord_inv=coord_inv,
        mj=ms,
        origin=origin,
        group=group,
    )


# ---------------------------------------------------------------------------
# Axiom validation
# ---------------------------------------------------------------------------


def validate_kac(kac: KacAlgebra, tol: float = 1e-10) -> dict:
    """Residuals for every defining axiom, at the coefficient-tensor level.

    Returns a dict mapping axiom names to non-negative residuals (operator
    norms over coefficient tensors), plus ``max_residual`` and ``passed``.
    A representation-level spot check (the GNS action is a *-representation)
    is included so that tensor-level and operator-level data stay in sync.
    """
    m, d = kac.mult, kac.delta
    eps, s, st, h = kac.counit, kac.antipode, kac.star, kac.haar
    u = kac.unit_coeffs
    n = kac.dim
    res: dict = {}

    res["product_associative"] = float(
        np.abs(np.einsum("ijk,klr->ijlr", m, m) - np.einsum("jlk,ikr->ijlr", m, m)).max()
    )
    res["coproduct_coassociative"] = float(
        np.abs(np.einsum("kac,aef->kefc", d, d) - np.einsum("kea,afc->kefc", d, d)).max()
    )
    res["counit_left"] = float(np.abs(np.einsum("kij,i->kj", d, eps) - np.eye(n)).max())
    res["counit_right"] = float(np.abs(np.einsum("kij,j->ki", d, eps) - np.eye(n)).max())

    # Coproduct is an algebra map: the expensive check, contracted per index.
    hom = 0.0
    for i in range(n):
        lhs = np.einsum("jk,kef->jef", m[i], d)
        t1 = np.einsum("ab,ace->bce", d[i], m)  # Σ_a d[i,a,b] m[a,c,e]
        mid = np.einsum("bce,jcq->bejq", t1, d)  # contract over c
        rhs = np.einsum("bejq,bqf->jef", mid, m)  # contract over b, q
        hom = max(hom, float(np.abs(lhs - rhs).max()))
    res["coproduct_multiplicative"] = hom
    res["coproduct_unital"] = float(
        np.abs(np.einsum("k,kij->ij", u, d) - np.outer(u, u)).max()
    )
    res["coproduct_star"] = float(
        np.abs(
            np.einsum("ip,pab->iab", st, d)
            - np.einsum("iab,ap,bq->ipq", np.conj(d), st, st)
        ).max()
    )

    res["counit_multiplicative"] = float(
        np.abs(np.einsum("ijk,k->ij", m, eps) - np.outer(eps, eps)).max()
    )
    res["counit_unital"] = float(np.abs(u @ eps - 1.0))
    res["counit_star"] = float(np.abs(st @ eps - np.conj(eps)).max())

    eps_u = np.outer(eps, u)
    res["antipode_left"] = float(
        np.abs(np.einsum("kab,ap,pbr->kr", d, s, m) - eps_u).max()
    )
    res["antipode_right"] = float(
        np.abs(np.einsum("kab,bp,apr->kr", d, s, m) - eps_u).max()
    )
    res["antipode_antimultiplicative"] = float(
        np.abs(
            np.einsum("ijk,kr->ijr", m, s) - np.einsum("ja,ib,abr->ijr", s, s, m)
        ).max()
    )
    res["antipode_involutive"] = float(np.abs(s @ s - np.eye(n)).max())
    res["antipode_star_commute"] = float(
        np.abs(np.conj(s) @ st - st @ s).max()
    )

    hm = np.einsum("ijk,k->ij", m, h)
    res["haar_tracial"] = float(np.abs(hm - hm.T).max())
    res["haar_unital"] = float(np.abs(u @ h - 1.0))
    res["haar_left_invariant"] = float(
        np.abs(np.einsum("kab,a->kb", d, h) - np.outer(h, u)).max()
    )
    res["haar_right_invariant"] = float(
        np.abs(np.einsum("kab,b->ka", d, h) - np.outer(h, u)).max()
    )
    gram = np.einsum("ip,pjk,k->ij", st, m, h, optimize=True)
    gram = (gram + dagger(gram)) / 2.0
    res["haar_positive_faithful"] = float(max(0.0, tol - np.linalg.eigvalsh(gram).min()))

    res["star_involutive"] = float(np.abs(np.conj(st) @ st - np.eye(n)).max())
    star_anti = np.einsum("ijk,kr->ijr", np.conj(m), st) - np.einsum(
        "jq,ip,qpr->ijr", st, st, m
    )
    res["star_antimultiplicative"] = float(np.abs(star_anti).max())

    rep_res = 0.0
    for i in range(min(n, 8)):
        want = kac.op(st[i])
        rep_res = max(rep_res, frob(dagger(kac.lmats[i]) - want))
    res["representation_star"] = rep_res

    res["max_residual"] = max(v for k, v in res.items())
    res["passed"] = res["max_residual"] < tol
    return res


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def group_algebra(g: GroupTable) -> KacAlgebra:
    """The group algebra ℂ[G]: basis λ_g, coproduct λ_g ↦ λ_g⊗λ_g."""
    n = g.order
    t = g.table
    inv = g.inverse
    mult = np.zeros((n, n, n), dtype=complex)
    delta = np.zeros((n, n, n), dtype=complex)
    antipode = np.zeros((n, n), dtype=complex)
    for i in range(n):
        delta[i, i, i] = 1.0
        antipode[i, inv[i]] = 1.0
        for j in range(n):
            mult[i, j, t[i, j]] = 1.0
    counit = np.ones(n, dtype=complex)
    star = antipode.copy()  # λ_g* = λ_{g⁻¹}
    haar = np.zeros(n, dtype=complex)
    haar[0] = 1.0
    return kac_from_structure(
        [f"λ[{lbl}]" for lbl in g.labels], mult, delta, counit, antipode, star, haar,
        origin="group_algebra", group=g,
    )


def function_algebra(g: GroupTable) -> KacAlgebra:
    """The function algebra C(G): basis of point indicators δ_g."""
    n = g.order
    t = g.table
    inv = g.inverse
    mult = np.zeros((n, n, n), dtype=complex)
    delta = np.zeros((n, n, n), dtype=complex)
    antipode = np.zeros((n, n), dtype=complex)
    star = np.zeros((n, n), dtype=complex)
    for i in range(n):
        mult[i, i, i] = 1.0
        antipode[i, inv[i]] = 1.0
        star[i, i] = 1.0
        for j in range(n):
            delta[t[i, j], i, j] = 1.0
    counit = np.zeros(n, dtype=complex)
    counit[0] = 1.0
    haar = np.full(n, 1.0 / n, dtype=complex)
    return kac_from_structure(
        [f"δ[{lbl}]" for lbl in g.labels], mult, delta, counit, antipode, star, haar,
        origin="function_algebra", group=g,
    )


def tensor_kac(a: KacAlgebra, b: KacAlgebra) -> KacAlgebra:
    """Tensor product Kac algebra, indexed as i_a·dim(b) + i_b."""
    na, nb = a.dim, b.dim
    n = na * nb
    mult = np.einsum("ijk,pqr->ipjqkr", a.mult, b.mult).reshape(n, n, n)
    delta = np.einsum("kij,rpq->kripjq", a.delta, b.delta).reshape(n, n, n)
    counit = np.kron(a.counit, b.counit)
    antipode = np.kron(a.antipode, b.antipode)
    star = np.kron(a.star, b.star)
    haar = np.kron(a.haar, b.haar)
    labels = [f"{la_}⊗{lb_}" for la_ in a.labels for lb_ in b.labels]
    return kac_from_structure(
        labels, mult, delta, counit, antipode, star, haar, origin="tensor"
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def save_kac(kac: KacAlgebra, path: str) -> None:
    """Write the structure tensors as JSON."""
    with open(path, "w") as fh:
        json.dump(kac.to_json(), fh, sort_keys=True)
        fh.write("\n")


def load_kac(source, validate: bool = True, tol: float = 1e-10) -> KacAlgebra:
    """Load a Kac algebra from a JSON path or an already-parsed document.

    Runs the full axiom validator by default and raises :class:`AxiomError`
    with the residual report if any axiom fails.
    """
    if isinstance(source, (str, bytes)):
        with open(source) as fh:
            doc = json.load(fh)
    else:
        doc = source
    try:
        n = int(doc["dim"])
        labels = [str(x) for x in doc["basis_labels"]]
        if len(labels) != n:
            raise AxiomError(f"{len(labels)} labels for dimension {n}")
        mult = _as_complex_tensor(doc["mult"], (n, n, n), "mult")
        delta = _as_complex_tensor(doc["delta"], (n, n, n), "delta")
        counit = _as_complex_tensor(doc["counit"], (n,), "counit")
        antipode = _as_complex_tensor(doc["antipode"], (n, n), "antipode")
        star = _as_complex_tensor(doc["star"], (n, n), "star")
        haar = _as_complex_tensor(doc["haar"], (n,), "haar")
    except KeyError as exc:
        raise AxiomError(f"missing required field {exc}") from exc
    origin = str(doc.get("origin", "custom"))
    group = None
    if "group" in doc:
        gdoc = doc["group"]
        table = np.asarray(gdoc["mult"], dtype=int)
        order = int(gdoc["order"])
        glabels = tuple(
            str(x) for x in gdoc.get("labels", [str(i) for i in range(order)])
        )
        group = GroupTable(order=order, table=table, labels=glabels)
        gval = group.validate()
        if not gval["passed"]:
            raise AxiomError(f"embedded group table is not a group: {gval}")
    kac = kac_from_structure(
        labels, mult, delta, counit, antipode, star, haar,
        origin=origin, group=group,
    )
    if validate:
        report = validate_kac(kac, tol=tol)
        if not report["passed"]:
            bad = {k: v for k, v in report.items()
                   if isinstance(v, float) and v >= tol}
            raise AxiomError(f"axiom violations: {sorted(bad)}", report)
    return kac
