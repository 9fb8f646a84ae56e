"""Smoke test for coreps.py + heisenberg identities across algebras."""
import time

import numpy as np

from kacgalois import coreps as cr
from kacgalois import duality as du
from kacgalois import kac as kx


def run(name, kac, fusion_pairs=()):
    t0 = time.time()
    v = du.multiplicative_unitary(kac)
    hat = du.hat_algebra(kac, v)
    ints = du.integrals(kac, hat)
    cs = cr.irreducible_coreps(kac, v=v, hat=hat)
    dims = [c.dim for c in cs]
    worst = max(max(c.residuals.values()) for c in cs)
    dc = cr.dimension_count(kac, cs)
    assert dc["exact"], dc
    orth = cr.orthogonality_check(kac, cs)
    ft = cr.fourier_round_trip(kac, cs, count=25)
    assert ft["basis_cardinality_exact"]
    pw = cr.peter_weyl_resolution(kac, cs, ints.e_hat)
    conj = cr.conjugation_involution(kac, cs)
    assert conj["involution_exact"], conj
    assert conj["schur_dimension_defect"] == 0.0, conj
    hb = du.heisenberg_identities(kac)
    print(
        f"[{name}] dims={dims} corep_res={worst:.2e} orth={orth['orthogonality']:.2e} "
        f"fourier={ft['round_trip']:.2e} pw={pw['residual']:.2e} |c-1|={pw['constant_minus_one']:.2e}"
    )
    print(
        f"   conj pairs={conj['pairs']} proj={conj['central_projection_transport']:.2e} "
        f"intw={conj['intertwiner_residual']:.2e}"
    )
    print(
        f"   heisenberg: compressed={hb['compressed_product']:.2e} "
        f"contracted={hb['coproduct_contracted']:.2e} vexp={hb['v_expansion']:.2e} "
        f"cells={hb['cells_per_block']}"
    )
    for a, b in fusion_pairs:
        fus = cr.decompose_tensor_product(kac, cs, a, b)
        mults = [(s["index"], s["multiplicity"]) for s in fus["summands"]]
        r = fus["residuals"]
        print(
            f"   fusion {a}x{b}: {mults} intw={r['intertwining']:.2e} iso={r['isometry']:.2e} "
            f"comp={r['completeness']:.2e} ortho={r['isometry_orthogonality']:.2e} "
            f"dims_ok={r['dimension_count_exact']}"
        )
        assert r["dimension_count_exact"]
        assert max(r["intertwining"], r["isometry"], r["completeness"],
                   r["isometry_orthogonality"]) < 1e-9
    assert worst < 1e-10
    assert orth["orthogonality"] < 1e-10
    assert ft["round_trip"] < 1e-9
    assert pw["residual"] < 1e-9
    assert max(hb["compressed_product"], hb["coproduct_contracted"],
               hb["v_expansion"]) < 1e-9, hb
    print(f"   ({time.time()-t0:.1f}s)")


z3 = kx.cyclic_group(3)
s3 = kx.symmetric_group_3()
q8 = kx.quaternion_group()

run("group[Z3]", kx.group_algebra(z3))
run("fun[Z3]", kx.function_algebra(z3))
run("group[S3]", kx.group_algebra(s3), fusion_pairs=[(1, 2)])
run("fun[S3]", kx.function_algebra(s3), fusion_pairs=[(2, 2), (1, 2)])
run("group[Q8]", kx.group_algebra(q8))
run("fun[Q8]", kx.function_algebra(q8), fusion_pairs=[(4, 4)])
kp8 = kx.load_kac("/root/pkg/src/kacgalois/fixtures/kp8.json")
run("KP8", kp8, fusion_pairs=[(4, 4)])
print("ALL COREPS SMOKE OK")
