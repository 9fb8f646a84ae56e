"""Command-line interface: load, validate, compute, and report.

This is the only process boundary of the artifact.  Every command reads a
JSON input (except ``selftest``), runs the corresponding computations, and
emits a report document.  JSON is the canonical format (deterministic:
sorted keys, fixed indentation); ``--format text`` renders the same
document for human reading.

Exit codes: 0 when every check in the report passed, 1 when some check
failed, 2 on parse or validation errors (with a machine-readable error
document on standard output).
"""

from __future__ import annotations

import os

# Pin BLAS threading before numpy loads anywhere in this process: report
# bytes must be identical across identical invocations, and threaded
# reductions are the one source of run-to-run float jitter.
for _var in (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
):
    os.environ.setdefault(_var, "1")

import argparse
import hashlib
import json
import sys
from importlib import resources

import numpy as np

from . import __version__
from . import algebra as ag
from . import coideals as ci
from . import coreps as cr
from . import duality as du
from . import jones as jn
from . import kac as kc
from .algebra import SubalgebraError
from .jones import InclusionError
from .kac import AxiomError

GROUP_BUILDERS = (
    ("Z2", lambda: kc.cyclic_group(2)),
    ("Z3", lambda: kc.cyclic_group(3)),
    ("Z4", lambda: kc.cyclic_group(4)),
    ("Z2xZ2", kc.klein_group),
    ("S3", kc.symmetric_group_3),
    ("Q8", kc.quaternion_group),
)

INPUT_ERRORS = (
    AxiomError,
    InclusionError,
    SubalgebraError,
    ValueError,
    KeyError,
    TypeError,
    RuntimeError,
    json.JSONDecodeError,
    OSError,
)


# ---------------------------------------------------------------------------
# Report plumbing
# ---------------------------------------------------------------------------


def _jsonify(obj):
    """Recursively convert report values into canonical JSON-safe types."""
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if not np.isfinite(f):
            return repr(f)
        return f
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [_jsonify(z.real), _jsonify(z.imag)]
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    return obj


def canonical_json(doc: dict) -> str:
    return json.dumps(_jsonify(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def render_text(obj, indent: int = 0) -> list[str]:
    """Human-readable rendering of the canonical JSON document."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            lines.append(pad + "[" + ", ".join(_scalar_text(v) for v in obj) + "]")
        else:
            for v in obj:
                lines.append(f"{pad}-")
                lines.extend(render_text(v, indent + 1))
    else:
        lines.append(pad + _scalar_text(obj))
    return lines


def _scalar_text(v) -> str:
    if isinstance(v, float):
        return format(v, ".6g")
    if isinstance(v, list):
        return "[]" if not v else json.dumps(v)
    if isinstance(v, dict):
        return "{}"
    return str(v)


def check(value: float, limit: float) -> dict:
    value = float(value)
    return {"value": value, "limit": float(limit), "ok": bool(value < limit)}


def check_true(flag: bool) -> dict:
    return {"value": bool(flag), "ok": bool(flag)}


def _all_ok(checks: dict) -> bool:
    return all(c["ok"] for c in checks.values())


def _max_float(d: dict) -> float:
    worst = 0.0
    for v in d.values():
        if isinstance(v, (float, int)) and not isinstance(v, bool):
            worst = max(worst, abs(float(v)))
        elif isinstance(v, dict):
            worst = max(worst, _max_float(v))
    return worst


# ---------------------------------------------------------------------------
# Input parsing (matrices are lists of rows of [re, im] pairs)
# ---------------------------------------------------------------------------


def parse_complex_matrix(doc, name: str) -> np.ndarray:
    arr = np.asarray(doc, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(
            f"field '{name}' must be a square matrix of [re, im] pairs, "
            f"got shape {arr.shape}"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def parse_inclusion(doc: dict) -> jn.Inclusion:
    """Build and validate an inclusion from its JSON document."""
    d = int(doc["ambient_dim"])
    m_mats = [parse_complex_matrix(m, "M_basis") for m in doc["M_basis"]]
    n_mats = [parse_complex_matrix(m, "N_basis") for m in doc["N_basis"]]
    for mats, nm in ((m_mats, "M_basis"), (n_mats, "N_basis")):
        for m in mats:
            if m.shape != (d, d):
                raise ValueError(f"'{nm}' entries must be {d}x{d}")
    e_arr = np.asarray(doc["E_matrix"], dtype=float)
    if e_arr.shape == (d * d, d * d):
        e_mat = e_arr.astype(complex)
    elif e_arr.shape == (d * d, d * d, 2):
        e_mat = e_arr[..., 0] + 1j * e_arr[..., 1]
    else:
        raise ValueError(
            f"'E_matrix' must be {d * d}x{d * d} (real or [re, im]), got {e_arr.shape}"
        )
    omega = parse_complex_matrix(doc["omega_density"], "omega_density")
    big = ag.from_span(m_mats, d)
    small = ag.from_span(n_mats, d)
    return jn.make_inclusion(big, small, e_mat, omega, label="cli_input")


# ---------------------------------------------------------------------------
# Command handlers: each returns (report_dict, passed)
# ---------------------------------------------------------------------------


def run_validate(kac: kc.KacAlgebra, tol: float | None) -> tuple[dict, bool]:
    lim = tol if tol is not None else 1e-10
    rep = kc.validate_kac(kac, tol=lim)
    residuals = {
        k: v for k, v in rep.items() if isinstance(v, float) and k != "max_residual"
    }
    checks = {k: check(v, lim) for k, v in residuals.items()}
    report = {
        "dim": kac.dim,
        "origin": kac.origin,
        "residuals": residuals,
        "max_residual": rep["max_residual"],
        "checks": checks,
        "passed": _all_ok(checks),
    }
    return report, report["passed"]


def run_dual(kac: kc.KacAlgebra, tol: float | None) -> tuple[dict, bool]:
    lim_tight = tol if tol is not None else 1e-10
    lim_loose = tol if tol is not None else 1e-8
    v = du.multiplicative_unitary(kac)
    hat = du.hat_algebra(kac, v)
    ints = du.integrals(kac, hat)
    hu = du.hat_unitaries(kac, v, hat)
    dd = du.dual_kac(kac)
    bid = du.bidual_check(kac)
    heis = du.heisenberg_identities(kac)

    checks = {
        "pentagon": check(_max_float(v.residuals), lim_tight),
        "integrals": check(_max_float(ints.residuals), lim_tight),
        "hat_unitaries": check(_max_float(hu.residuals), lim_tight),
        "dual_reconstruction": check(_max_float(dd.residuals), lim_tight),
        "dual_axioms": check(dd.axiom_report["max_residual"], lim_tight),
        "biduality": check(bid["max_residual"], lim_loose),
        "dual_pairing_identities": check(
            heis["compressed_product"], lim_tight
        ),
        "dual_pairing_contracted": check(
            heis["coproduct_contracted"], lim_tight
        ),
    }
    report = {
        "dim": kac.dim,
        "pentagon": v.residuals,
        "integrals": ints.residuals,
        "hat_unitaries": hu.residuals,
        "dual_reconstruction": dd.residuals,
        "dual_axioms_max": dd.axiom_report["max_residual"],
        "biduality": bid,
        "commutation_cells": heis,
    }
    if kac.origin == "group_algebra" and kac.group is not None:
        gd = du.group_dual_check(kac)
        report["group_dual"] = gd
        checks["group_dual_is_function_algebra"] = check(
            gd["max_residual"], lim_tight
        )
    report["checks"] = checks
    report["passed"] = _all_ok(checks)
    return report, report["passed"]


def run_coreps(
    kac: kc.KacAlgebra, tol: float | None, seed: int, trials: int = 100
) -> tuple[dict, bool]:
    lim_tight = tol if tol is not None else 1e-10
    lim_mid = tol if tol is not None else 1e-9
    v = du.multiplicative_unitary(kac)
    hat = du.hat_algebra(kac, v)
    ints = du.integrals(kac, hat)
    coreps = cr.irreducible_coreps(kac, v, hat)
    dims = cr.dimension_count(kac, coreps)
    orth = cr.orthogonality_check(kac, coreps)
    four = cr.fourier_round_trip(kac, coreps, count=trials, seed=seed)
    pw = cr.peter_weyl_resolution(kac, coreps, ints.e_hat)

    checks = {
        "corep_certificates": check(
            max(_max_float(c.residuals) for c in coreps), lim_tight
        ),
        "dimension_sum_exact": check_true(dims["exact"]),
        "orthogonality": check(orth["orthogonality"], lim_tight),
        "fourier_round_trip": check(four["round_trip"], lim_mid),
        "fourier_basis_cardinality": check_true(four["basis_cardinality_exact"]),
        "peter_weyl": check(pw["residual"], lim_mid),
    }
    report = {
        "dim": kac.dim,
        "corep_dims": [c.dim for c in coreps],
        "dimension_count": dims,
        "orthogonality": orth,
        "fourier": four,
        "peter_weyl": {k: v for k, v in pw.items() if k != "constant"},
        "checks": checks,
        "passed": _all_ok(checks),
    }
    return report, report["passed"]


def run_galois(
    kac: kc.KacAlgebra, tol: float | None, seed: int
) -> tuple[dict, bool]:
    lim = tol if tol is not None else 1e-8
    rep = ci.galois_lattice_report(kac, side="left", seed=seed)
    coideal_docs = [
        {"dim": row["dim"], "projector_fingerprint": row["fingerprint"]}
        for row in rep["rows"]
    ]
    tilde_pairs = [
        {"dim": row["dim"], "tilde_dim": row["tilde_dim"]} for row in rep["rows"]
    ]
    checks = {
        "lattice_residual": check(rep["max_residual"], lim),
        "completeness": check(rep["completeness_residual"], lim),
        "order_reversal": check_true(rep["order_reversal_ok"]),
        "tilde_injective": check_true(rep["tilde_injective"]),
        "dim_products_exact": check_true(rep["dim_products_exact"]),
    }
    report = {
        "coideals": coideal_docs,
        "tilde_pairs": tilde_pairs,
        "checks": checks,
        "details": {
            "dims": rep["dims"],
            "tilde_dims": rep["tilde_dims"],
            "order_reversal_residual": rep["order_reversal_residual"],
            "max_residual": rep["max_residual"],
            "per_coideal": [
                {
                    k: row[k]
                    for k in (
                        "dim",
                        "tilde_dim",
                        "fingerprint",
                        "tilde_route_distance",
                        "tilde_involution",
                        "bicommutant",
                        "jones_max",
                    )
                }
                for row in rep["rows"]
            ],
        },
        "passed": _all_ok(checks),
    }
    return report, report["passed"]


def _jones_pipeline(
    inc: jn.Inclusion, tol: float | None
) -> tuple[dict, bool]:
    lim8 = tol if tol is not None else 1e-8
    lim9 = tol if tol is not None else 1e-9
    bc = jn.basic_extension(inc)
    dw = jn.dual_weight(bc)
    rep = jn.relcomm_report(bc, dw)
    ext = jn.extremality(bc, dw, rep)

    index_eigs = np.sort(np.linalg.eigvalsh(dw.index_element))
    r = rep.residuals
    checks = {
        "three_way_extension": check(bc.residuals["three_way_max"], lim8),
        "e_implements_expectation": check(bc.residuals["e_vector"], lim9),
        "e_compression": check(bc.residuals["e_compress"], lim9),
        "e_commutes_with_small": check(bc.residuals["e_commutes_small"], lim9),
        "conjugation_fixes_e": check(bc.residuals["j_fixes_e"], lim9),
        "weight_pin_consistent": check(dw.residuals["pin_consistency"], lim9),
        "weight_unit_from_e": check(dw.residuals["unit_from_e"], lim9),
        "index_in_big": check(dw.residuals["index_in_big"], lim9),
        "index_central": check(dw.residuals["index_central"], lim9),
        "push_down": check(dw.residuals["push_down"], lim9),
        "weight_range_in_big": check(dw.residuals["range_in_big"], lim9),
        "weight_adjoint_compatible": check(
            dw.residuals["adjoint_compatible"], lim9
        ),
        "weight_bimodule": check(dw.residuals["bimodule"], lim9),
        "weight_positive": check(-dw.residuals["min_positivity_eig"], lim9),
        "mirror_preserves_relcomm": check(r["mirror_preserves"], lim8),
        "mirror_involutive": check(r["mirror_involution"], lim8),
        "mirror_antimultiplicative": check(r["mirror_antimultiplicative"], lim8),
        "mirror_pairing": check(r["mirror_pair_match"], lim8),
        "mirror_pairing_involutive": check(r["mirror_pairing_involutive"], lim8),
        "generator_trace_balance": check(r["trace_transport"], lim8),
        "generator_positive": check(-r["generator_min_eig"], lim9),
        "extremality_criteria_agree": check_true(ext["criteria_agree"]),
    }
    report = {
        "inclusion": {
            "dim_big": inc.big.dim,
            "dim_small": inc.small.dim,
            "ambient_dim": inc.big.ambient_dim,
            "label": inc.label,
        },
        "extension": {
            "gns_dim": bc.gns.space_dim,
            "m1_dim": bc.m1.dim,
            "residuals": bc.residuals,
        },
        "dual_weight": {
            "index_trace": float(np.trace(dw.index_element).real),
            "index_eigenvalues": [float(x) for x in index_eigs],
            "residuals": dw.residuals,
        },
        "relative_commutant": {
            "dim": rep.algebra.dim,
            "summands": [
                {
                    "block": list(s["block"]),
                    "rank": s["rank"],
                    "generator_spectrum": s["spectrum"],
                    "generator_squared_spectrum": s["squared_spectrum"],
                    "mirror_mate": s["mate"],
                }
                for s in rep.summands
            ],
            "mirror_pairs": list(rep.mirror_pairs),
            "four_part": rep.four_part,
        },
        "j_action": {
            "preserves_relative_commutant": r["mirror_preserves"],
            "involution": r["mirror_involution"],
            "antimultiplicative": r["mirror_antimultiplicative"],
            "pairing": list(rep.mirror_pairs),
        },
        "flow_generators": {
            "times": list(rep.flow_times),
            "assembled_spectrum": [
                float(x) for x in jn.flow_spectrum(rep)
            ],
            "flow_match": r["flow_match"],
            "flow_identity_defect": r["flow_identity_defect"],
            "mirror_commutes_with_flow": r["mirror_commutes_with_flow"],
            "state_density_min_eig": r["flow_density_min_eig"],
        },
        "extremal": rep.extremal,
        "extremality": ext,
        "checks": checks,
        "passed": _all_ok(checks),
    }
    return report, report["passed"]


def run_jones(doc: dict, tol: float | None) -> tuple[dict, bool]:
    inc = parse_inclusion(doc)
    return _jones_pipeline(inc, tol)


# ---------------------------------------------------------------------------
# Selftest
# ---------------------------------------------------------------------------


def _selftest_algebra(
    kac: kc.KacAlgebra, tol: float | None, seed: int
) -> tuple[dict, bool]:
    """The per-algebra slice of the built-in suite (duality + coreps + galois)."""
    lim_tight = tol if tol is not None else 1e-10
    lim_mid = tol if tol is not None else 1e-9
    lim_loose = tol if tol is not None else 1e-8

    vrep = kc.validate_kac(kac, tol=lim_tight)
    v = du.multiplicative_unitary(kac)
    hat = du.hat_algebra(kac, v)
    ints = du.integrals(kac, hat)
    dd = du.dual_kac(kac)
    bid = du.bidual_check(kac)
    coreps = cr.irreducible_coreps(kac, v, hat)
    dims = cr.dimension_count(kac, coreps)
    orth = cr.orthogonality_check(kac, coreps)
    four = cr.fourier_round_trip(kac, coreps, count=10, seed=seed)
    pw = cr.peter_weyl_resolution(kac, coreps, ints.e_hat)
    gal = ci.galois_lattice_report(kac, side="left", seed=seed)

    checks = {
        "axioms": check(vrep["max_residual"], lim_tight),
        "pentagon": check(_max_float(v.residuals), lim_tight),
        "dual_axioms": check(dd.axiom_report["max_residual"], lim_tight),
        "biduality": check(bid["max_residual"], lim_loose),
        "corep_dims_exact": check_true(dims["exact"]),
        "orthogonality": check(orth["orthogonality"], lim_tight),
        "fourier_round_trip": check(four["round_trip"], lim_mid),
        "peter_weyl": check(pw["residual"], lim_mid),
        "galois_lattice": check(gal["max_residual"], lim_loose),
        "galois_structure": check_true(
            gal["order_reversal_ok"]
            and gal["tilde_injective"]
            and gal["dim_products_exact"]
        ),
    }
    if kac.origin == "group_algebra" and kac.group is not None:
        gd = du.group_dual_check(kac)
        checks["group_dual_is_function_algebra"] = check(
            gd["max_residual"], lim_mid
        )
    doc = {
        "dim": kac.dim,
        "corep_dims": [c.dim for c in coreps],
        "coideal_dims": gal["dims"],
        "checks": checks,
        "passed": _all_ok(checks),
    }
    return doc, doc["passed"]


def _selftest_fixture_inclusion(
    inc: jn.Inclusion,
    tol: float | None,
    expect: dict,
) -> tuple[dict, bool]:
    doc, ok = _jones_pipeline(inc, tol)
    lim = tol if tol is not None else 1e-9
    checks = doc["checks"]
    if "index_trace" in expect:
        checks["index_trace_expected"] = check(
            abs(doc["dual_weight"]["index_trace"] - expect["index_trace"]), lim
        )
    if "index_eigenvalues" in expect:
        got = np.asarray(doc["dual_weight"]["index_eigenvalues"])
        want = np.asarray(expect["index_eigenvalues"], dtype=float)
        checks["index_eigenvalues_expected"] = check(
            float(np.abs(got - want).max()) if got.shape == want.shape else 1.0,
            lim,
        )
    if "squared_spectrum" in expect:
        got = np.sort(
            np.concatenate(
                [
                    s["generator_squared_spectrum"]
                    for s in doc["relative_commutant"]["summands"]
                ]
            )
        )
        want = np.sort(np.asarray(expect["squared_spectrum"], dtype=float))
        checks["generator_squared_spectrum_expected"] = check(
            float(np.abs(got - want).max()) if got.shape == want.shape else 1.0,
            lim,
        )
    if "extremal" in expect:
        checks["extremal_expected"] = check_true(
            doc["extremal"] == expect["extremal"]
        )
    if "markov_index" in expect and inc.bratteli is not None:
        oracle = jn.bratteli_norm_sq(inc.bratteli)
        eigs = np.asarray(doc["dual_weight"]["index_eigenvalues"])
        checks["markov_index_oracle"] = check(
            float(np.abs(eigs - oracle).max()),
            tol if tol is not None else 1e-8,
        )
    doc["checks"] = checks
    doc["passed"] = _all_ok(checks)
    return doc, doc["passed"]


def run_selftest(tol: float | None, seed: int) -> tuple[dict, bool]:
    report: dict = {"groups": {}, "inclusion_fixtures": {}, "random_inclusions": {}}
    ok = True

    for name, builder in GROUP_BUILDERS:
        g = builder()
        ga_doc, ga_ok = _selftest_algebra(kc.group_algebra(g), tol, seed)
        fa_doc, fa_ok = _selftest_algebra(kc.function_algebra(g), tol, seed)
        report["groups"][name] = {
            "group_algebra": ga_doc,
            "function_algebra": fa_doc,
        }
        ok = ok and ga_ok and fa_ok

    kp_doc = json.loads(
        resources.files("kacgalois").joinpath("fixtures/kp8.json").read_text()
    )
    kp = kc.load_kac(kp_doc, validate=False)
    lim_tight = tol if tol is not None else 1e-10
    kp_val = kc.validate_kac(kp, tol=lim_tight)
    v = du.multiplicative_unitary(kp)
    hat = du.hat_algebra(kp, v)
    coreps = cr.irreducible_coreps(kp, v, hat)
    kp_checks = {
        "axioms": check(kp_val["max_residual"], lim_tight),
        "pentagon": check(_max_float(v.residuals), lim_tight),
        "corep_dims_exact": check_true(
            sorted(c.dim for c in coreps) == [1, 1, 1, 1, 2]
        ),
    }
    report["kac_paljutkin"] = {
        "dim": kp.dim,
        "corep_dims": sorted(c.dim for c in coreps),
        "checks": kp_checks,
        "passed": _all_ok(kp_checks),
    }
    ok = ok and report["kac_paljutkin"]["passed"]

    fixtures = [
        (
            "scaled_pair_third",
            jn.fixture_scaled_pair(1.0 / 3.0),
            {
                "index_trace": 4.5,
                "index_eigenvalues": [1.5, 3.0],
                "squared_spectrum": [0.5, 2.0],
                "extremal": False,
            },
        ),
        (
            "scaled_pair_half",
            jn.fixture_scaled_pair(0.5),
            {"index_trace": 4.0, "extremal": True},
        ),
        (
            "point_in_full",
            jn.fixture_point_in_full(),
            {"extremal": True, "markov_index": True},
        ),
        ("pinch", jn.fixture_pinch(), {"extremal": True, "markov_index": True}),
        (
            "markov_chain",
            jn.fixture_markov_chain(),
            {"extremal": True, "markov_index": True},
        ),
    ]
    for name, inc, expect in fixtures:
        doc, f_ok = _selftest_fixture_inclusion(inc, tol, expect)
        report["inclusion_fixtures"][name] = doc
        ok = ok and f_ok

    lim8 = tol if tol is not None else 1e-8
    for draw in (2 * seed, 2 * seed + 1):
        inc = jn.random_inclusion(draw)
        doc, r_ok = _jones_pipeline(inc, tol)
        doc["checks"]["flow_matches_generator_orbit"] = check(
            doc["flow_generators"]["flow_match"], lim8
        )
        var = jn.omega_variation(inc, draw + 1)
        bc2 = jn.basic_extension(var)
        dw2 = jn.dual_weight(bc2)
        rep2 = jn.relcomm_report(bc2, dw2)
        spec_dist = float(
            np.abs(
                jn.flow_spectrum(rep2)
                - np.asarray(doc["flow_generators"]["assembled_spectrum"])
            ).max()
        )
        doc["checks"]["state_independent_spectrum"] = check(spec_dist, lim8)
        doc["checks"]["state_independent_flow"] = check(
            rep2.residuals["flow_match"], lim8
        )
        doc["passed"] = _all_ok(doc["checks"])
        report["random_inclusions"][f"seed_{draw}"] = doc
        ok = ok and doc["passed"]

    report["passed"] = ok
    return report, ok


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kacgalois",
        description=(
            "Finite-dimensional Kac algebra duality, coideal Galois lattices, "
            "and Jones basic constructions."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, needs_input: bool, help_text: str):
        p = sub.add_parser(name, help=help_text)
        if needs_input:
            p.add_argument("input", help="path to the input JSON document")
        p.add_argument(
            "--tolerance",
            type=float,
            default=None,
            help="override every check limit with this value (> 0)",
        )
        p.add_argument(
            "--seed", type=int, default=7, help="seed for randomized suites"
        )
        p.add_argument(
            "--format",
            choices=("json", "text"),
            default="json",
            help="output format (JSON is canonical)",
        )
        p.add_argument(
            "--output", default=None, help="write the report here instead of stdout"
        )
        return p

    add("validate", True, "check every Kac axiom of a KacAlgebra JSON file")
    add("dual", True, "multiplicative unitary, dual algebra, biduality")
    add("check-duality", True, "alias of 'dual'")
    add("coreps", True, "irreducible corepresentations, Fourier, Peter-Weyl")
    add("coideals", True, "coideal lattice and Galois report (alias of 'galois')")
    add("galois", True, "coideal lattice and Galois anti-isomorphism report")
    add("jones", True, "basic construction and dual weight of an inclusion JSON")
    add("selftest", False, "run the full built-in suite on bundled fixtures")
    return parser


def _sha256_file(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _bundled_hash() -> str:
    root = resources.files("kacgalois").joinpath("fixtures")
    digest = hashlib.sha256()
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            digest.update(entry.name.encode())
            digest.update(entry.read_bytes())
    return digest.hexdigest()


def _emit(doc: dict, fmt: str, output: str | None) -> None:
    if fmt == "json":
        payload = canonical_json(doc)
    else:
        payload = "\n".join(render_text(_jsonify(doc))) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.tolerance is not None and not args.tolerance > 0:
        print("error: --tolerance must be positive", file=sys.stderr)
        return 2

    command = args.command
    envelope = {
        "tool": "kacgalois",
        "version": __version__,
        "command": command,
        "seed": args.seed,
        "tolerance": args.tolerance,
        "format": args.format,
    }

    try:
        if command == "selftest":
            envelope["input_sha256"] = _bundled_hash()
            report, passed = run_selftest(args.tolerance, args.seed)
        else:
            envelope["input_sha256"] = _sha256_file(args.input)
            with open(args.input) as fh:
                doc = json.load(fh)
            if command == "jones":
                report, passed = run_jones(doc, args.tolerance)
            else:
                kac = kc.load_kac(doc, validate=False)
                if command == "validate":
                    report, passed = run_validate(kac, args.tolerance)
                elif command in ("dual", "check-duality"):
                    report, passed = run_dual(kac, args.tolerance)
                elif command == "coreps":
                    report, passed = run_coreps(
                        kac, args.tolerance, args.seed
                    )
                else:  # coideals / galois
                    report, passed = run_galois(kac, args.tolerance, args.seed)
    except INPUT_ERRORS as exc:
        envelope["error"] = {
            "type": type(exc).__name__,
            "message": str(exc),
        }
        envelope["passed"] = False
        _emit(envelope, args.format, args.output)
        return 2

    envelope["report"] = report
    envelope["passed"] = bool(passed)
    _emit(envelope, args.format, args.output)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
