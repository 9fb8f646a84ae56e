"""Smoke test for coideals.py: systems, dictionaries, Galois lattice."""
import time

import numpy as np

from kacgalois import algebra as ag
from kacgalois import coideals as ci
from kacgalois import coreps as cr
from kacgalois import duality as du
from kacgalois import kac as kx

s3 = kx.symmetric_group_3()
z4 = kx.cyclic_group(4)

# --- basic recognition on function_algebra(S3) -----------------------------
kf = kx.function_algebra(s3)
triv = ci.is_coideal(kf, [np.eye(6, dtype=complex)])
full = ci.is_coideal(kf, list(kf.lmats))
print(f"trivial coideal dim={triv.dim} cert={triv.certificate:.2e}")
print(f"full coideal dim={full.dim} cert={full.certificate:.2e}")
assert triv.dim == 1 and full.dim == 6

# right-H-invariant functions for H = <(12)> (index 1 in labels): C(S3/H) dim 3
h12 = (0, 1)
b3 = ci.is_coideal(kf, ci._coset_coideal(kf, h12))
print(f"C(S3/<(12)>) dim={b3.dim} cert={b3.certificate:.2e}")
assert b3.dim == 3

# --- closure: function_algebra(Z4), {d0+d2} -> dim 2 -----------------------
kz4 = kx.function_algebra(z4)
x = kz4.op(np.array([1.0, 0, 1.0, 0], dtype=complex))
cl = ci.coideal_closure(kz4, [x])
print(f"closure of d0+d2 in C(Z4): dim={cl.dim} (want 2)")
assert cl.dim == 2
cl0 = ci.coideal_closure(kz4, [])
assert cl0.dim == 1
rng = np.random.default_rng(3)
gen = kz4.op(rng.standard_normal(4) + 1j * rng.standard_normal(4))
assert ci.coideal_closure(kz4, [gen]).dim == 4

# --- subspace systems -------------------------------------------------------
coreps = cr.irreducible_coreps(kf)
print("corep dims:", [c.dim for c in coreps])
# B = C(S3/A3), A3 = {e,(123),(132)} = indices (0,4,5)
a3 = (0, 4, 5)
b2 = ci.is_coideal(kf, ci._coset_coideal(kf, a3))
assert b2.dim == 2
sysb2 = ci.subspace_system_from_coideal(kf, b2, coreps)
print("system of C(S3/A3): mults =", sysb2.multiplicities,
      "weighted:", sysb2.weighted_dim())
assert sysb2.weighted_dim() == b2.dim
cls = ci.check_system_closure(kf, coreps, sysb2)
print("closure check:", {k: v for k, v in cls.items() if k != 'failures'})
assert cls["passed"]
back = ci.coideal_from_subspace_system(kf, coreps, sysb2)
dist = ci.span_projector_distance(back.mm, b2.mm)
print(f"round trip projector distance: {dist:.2e}")
assert dist < 1e-9

# subgroup recovery
rec = ci.subgroup_from_system(kf, coreps, sysb2)
print("recovered subgroup:", rec["subgroup"], "report:",
      {k: v for k, v in rec.items() if k != 'subgroup'})
assert rec["subgroup"] == a3
assert rec["is_subgroup"] and rec["system_rederivation"] < 1e-9

# full-space and trivial systems
sys_triv = ci.subspace_system_from_coideal(kf, triv, coreps)
assert sys_triv.multiplicities == (1, 0, 0) or sum(sys_triv.multiplicities) == 1
rec2 = ci.subgroup_from_system(kf, coreps, sys_triv)
assert rec2["subgroup"] == tuple(range(6))
sys_full = ci.subspace_system_from_coideal(kf, full, coreps)
assert all(m == d for m, d in zip(sys_full.multiplicities, sys_full.corep_dims))
rec3 = ci.subgroup_from_system(kf, coreps, sys_full)
assert rec3["subgroup"] == (0,)

# --- enumeration ------------------------------------------------------------
t0 = time.time()
enum = ci.enumerate_coideals_group_case(kf)
print(f"C(S3) coideal dims: {enum['dims']} complete={enum['complete']} "
      f"({enum['completeness_residual']:.2e}) [{time.time()-t0:.1f}s]")
assert sorted(enum["dims"]) == [1, 2, 3, 3, 3, 6]
assert enum["complete"]

enum4 = ci.enumerate_coideals_group_case(kz4)
print(f"C(Z4) coideal dims: {enum4['dims']} complete={enum4['complete']}")
assert sorted(enum4["dims"]) == [1, 2, 4]

kg = kx.group_algebra(s3)
enumg = ci.enumerate_coideals_group_case(kg)
print(f"C[S3] coideal dims: {enumg['dims']} complete={enumg['complete']}")
assert sorted(enumg["dims"]) == [1, 2, 2, 2, 3, 6]
assert enumg["complete"]

# --- tilde / Galois ---------------------------------------------------------
dd = du.dual_kac(kf)
bt = ci.tilde(kf, b2, dd)
print(f"tilde of C(S3/A3): dim={bt.dim} cert={bt.certificate:.2e} (want 3)")
assert bt.dim == 3 and b2.dim * bt.dim == 6

via = ci.tilde_via_commutant(kf, b2, dd)
d_routes = ci.span_projector_distance(bt.mm, via["mm"])
print(f"tilde two routes distance: {d_routes:.2e}  "
      f"intersection right-coideal cert: {via['intersection_right_coideal']:.2e}")
assert d_routes < 1e-9

backmm = ci.tilde_back(kf, bt, dd)
inv_dist = ci.span_projector_distance(backmm, b2.mm)
print(f"tilde involution distance: {inv_dist:.2e}")
assert inv_dist < 1e-9

bic = ci.bicommutant_check(kf, b2, dd)
print(f"bicommutant: dim={bic['dim']} dist={bic['distance']:.2e}")
assert bic["distance"] < 1e-9

jp = ci.jones_projection_coideal(kf, b2, dd)
print("jones projection report:",
      {k: (f"{v:.2e}" if isinstance(v, float) else v) for k, v in jp.items()})
assert jp["max_residual"] < 1e-9

# --- full lattice reports ----------------------------------------------------
for name, ka in [("C(S3)", kf), ("C[S3]", kg), ("C(Z4)", kz4)]:
    t0 = time.time()
    rep = ci.galois_lattice_report(ka)
    print(f"galois[{name}]: dims={rep['dims']} tilde_dims={rep['tilde_dims']} "
          f"max={rep['max_residual']:.2e} order_ok={rep['order_reversal_ok']} "
          f"passed={rep['passed']} [{time.time()-t0:.1f}s]")
    assert rep["passed"]

print("ALL COIDEALS SMOKE OK")
