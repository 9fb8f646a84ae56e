"""Smoke test for duality.py across group/function algebras and KP8."""
import time

import numpy as np

from kacgalois import duality as du
from kacgalois import kac as kx


def flatmax(d):
    out = 0.0
    for v in d.values():
        if isinstance(v, dict):
            out = max(out, flatmax(v))
        elif isinstance(v, (int, float)):
            out = max(out, float(v))
    return out


def run(name, kac):
    t0 = time.time()
    v = du.multiplicative_unitary(kac)
    hat = du.hat_algebra(kac, v)
    ints = du.integrals(kac, hat)
    hu = du.hat_unitaries(kac, v, hat)
    pf = du.pairing(kac, v, hat, ints)
    dk = du.dual_kac(kac)
    worsts = {
        "V": max(v.residuals.values()),
        "hat": max(hat.residuals.values()),
        "ints": max(ints.residuals.values()),
        "hatU": max(hu.residuals.values()),
        "pair": max(pf.residuals.values()),
        "dualkac": max(dk.residuals.values()),
        "dual_axioms": dk.axiom_report["max_residual"],
    }
    print(f"[{name}] n={kac.dim}  " + "  ".join(f"{k}={v:.2e}" for k, v in worsts.items())
          + f"  ({time.time()-t0:.1f}s)")
    assert max(worsts.values()) < 1e-10, (name, worsts)
    return dk


z2 = kx.cyclic_group(2)
z3 = kx.cyclic_group(3)
s3 = kx.symmetric_group_3()
q8 = kx.quaternion_group()

for name, g in [("Z2", z2), ("Z3", z3), ("S3", s3), ("Q8", q8)]:
    ka = kx.group_algebra(g)
    dk = run(f"group[{name}]", ka)
    # dual of group algebra: commutative, and = C(G) through the pairing
    gd = du.group_dual_check(ka)
    print(f"   group_dual_check[{name}]: max={gd['max_residual']:.2e}")
    assert gd["max_residual"] < 1e-10
    kf = kx.function_algebra(g)
    dkf = run(f"fun[{name}]", kf)
    if name == "S3":
        # dual of C(S3) is the noncommutative C[S3]
        ys = list(dkf.hat.onb)
        comm = max(np.abs(a @ b - b @ a).max() for a in ys for b in ys)
        print(f"   dual of C(S3) noncommutativity witness: {comm:.3f} (should be >0.1)")
        assert comm > 0.1
        blocks = dkf.hat.mm.block_dims
        print(f"   dual of C(S3) blocks: {blocks}")

kp8 = kx.load_kac("/root/pkg/src/kacgalois/fixtures/kp8.json")
run("KP8", kp8)

print("\nbidual checks:")
for name, ka in [("group[S3]", kx.group_algebra(s3)),
                 ("fun[S3]", kx.function_algebra(s3)),
                 ("KP8", kp8)]:
    t0 = time.time()
    bd = du.bidual_check(ka)
    print(f"  {name}: max={bd['max_residual']:.2e} ({time.time()-t0:.1f}s)")
    assert bd["max_residual"] < 1e-8, bd

print("\nheisenberg (needs coreps — skipped until coreps.py exists)")
print("ALL DUALITY SMOKE OK")
