"""Developer smoke checks for the basic-construction module."""

import time

import numpy as np

from kacgalois import algebra as ag
from kacgalois import jones as jn
from kacgalois import linalg as la


def banner(name):
    print(f"--- {name} ---")


def run(inc, want_flow=True):
    bc = jn.basic_extension(inc)
    dw = jn.dual_weight(bc)
    rep = jn.relcomm_report(bc, dw)
    ext = jn.extremality(bc, dw, rep)
    return bc, dw, rep, ext


banner("witness: scaled pair weight=1/3")
inc = jn.fixture_scaled_pair(1.0 / 3.0)
bc, dw, rep, ext = run(inc)
print("three-way:", bc.residuals["three_way_max"], "e_vec:", bc.residuals["e_vector"])
print("j fixes e:", bc.residuals["j_fixes_e"])
print("dw residuals:", {k: round(v, 14) if isinstance(v, float) else v for k, v in dw.residuals.items()})
idx = dw.index_element
print("index trace:", np.trace(idx).real, "eigs:", np.round(np.linalg.eigvalsh(idx), 10))
print("summands:", [(s["block"], s["rank"]) for s in rep.summands])
print("density spectrum:", [s["spectrum"] for s in rep.summands])
print("a^2 spectra:", [s["squared_spectrum"] for s in rep.summands])
print("extremal:", rep.extremal, "margin:", rep.extremal_margin)
print("ext report:", ext)
print("flow_match:", rep.residuals["flow_match"], "(expected NONZERO for the witness)")
print("mirror defect:", rep.mirror_defect)
print("transport:", rep.residuals["trace_transport"])

banner("scaled pair weight=1/2 (symmetric)")
inc = jn.fixture_scaled_pair(0.5)
bc, dw, rep, ext = run(inc)
print("index trace:", np.trace(dw.index_element).real)
print("a spectra:", [s["spectrum"] for s in rep.summands])
print("extremal:", rep.extremal, "agree:", ext["criteria_agree"], "flow:", rep.residuals["flow_match"])
print("markov expected:", jn.bratteli_norm_sq(inc.bratteli))

banner("point in full (C in M2, trace E)")
inc = jn.fixture_point_in_full()
bc, dw, rep, ext = run(inc)
print("three-way:", bc.residuals["three_way_max"])
print("index eigs:", np.round(np.linalg.eigvalsh(dw.index_element), 10), "(expect 4)")
print("summands:", [(s["block"], s["rank"]) for s in rep.summands])
print("extremal:", rep.extremal, "agree:", ext["criteria_agree"])
print("flow_match:", rep.residuals["flow_match"])
print("markov expected:", jn.bratteli_norm_sq(inc.bratteli), "(expect 4)")

banner("pinch (diag in M2)")
inc = jn.fixture_pinch()
bc, dw, rep, ext = run(inc)
print("index eigs:", np.round(np.linalg.eigvalsh(dw.index_element), 10), "(expect 2)")
print("summands:", [(s["block"], s["rank"]) for s in rep.summands])
print("extremal:", rep.extremal, "agree:", ext["criteria_agree"], "flow:", rep.residuals["flow_match"])
print("markov expected:", jn.bratteli_norm_sq(inc.bratteli), "(expect 2)")

banner("markov chain (C in C+M2)")
inc = jn.fixture_markov_chain()
bc, dw, rep, ext = run(inc)
print("index eigs:", np.round(np.linalg.eigvalsh(dw.index_element), 10), "(expect 5)")
print("markov expected:", jn.bratteli_norm_sq(inc.bratteli), "(expect 5)")
print("three-way:", bc.residuals["three_way_max"], "push:", jn.push_down_check(bc, dw))
print("extremal:", rep.extremal, "agree:", ext["criteria_agree"], "flow:", rep.residuals["flow_match"])
print("a spectra:", [np.round(s["spectrum"], 8) for s in rep.summands])

banner("pinch with non-uniform omega (flow nontrivial on M1, trivial on relcomm)")
inc = jn.omega_variation(jn.fixture_pinch(), seed=11)
bc, dw, rep, ext = run(inc)
print("flow_match:", rep.residuals["flow_match"], "extremal:", rep.extremal)
print("flow density min eig:", rep.residuals["flow_density_min_eig"])

banner("omega independence of spectra (pinch)")
r1 = jn.relcomm_report(*(lambda b: (b, jn.dual_weight(b)))(jn.basic_extension(jn.omega_variation(jn.fixture_pinch(), 3))))
r2 = jn.relcomm_report(*(lambda b: (b, jn.dual_weight(b)))(jn.basic_extension(jn.omega_variation(jn.fixture_pinch(), 4))))
print("spectra dist:", np.linalg.norm(jn.flow_spectrum(r1) - jn.flow_spectrum(r2)))

banner("e_n independence via canonical identification (random inclusion)")
base = jn.random_inclusion(6)
alt = jn.omega_variation(base, seed=77)
b1 = jn.basic_extension(base)
b2 = jn.basic_extension(alt)
u, ures = jn.gns_intertwiner(b1.gns, b2.gns)
print("intertwiner residuals:", ures)
print("e_n transport:", la.opnorm(u @ b1.e_n @ la.dagger(u) - b2.e_n))

banner("random family scan")
t0 = time.time()
worst = {"three": 0.0, "push": 0.0, "unit": 0.0, "central": 0.0, "flow": 0.0,
         "agree_fail": [], "skew_flow": 0.0, "transport": 0.0,
         "trace_vs_scalar_fail": [], "flow_id": 0.0}
n_extremal = 0
n_skew = 0
for seed in range(50):
    inc = jn.random_inclusion(seed)
    bc = jn.basic_extension(inc)
    dw = jn.dual_weight(bc)
    rep = jn.relcomm_report(bc, dw)
    ext = jn.extremality(bc, dw, rep)
    worst["three"] = max(worst["three"], bc.residuals["three_way_max"])
    worst["push"] = max(worst["push"], jn.push_down_check(bc, dw))
    worst["unit"] = max(worst["unit"], dw.residuals["unit_from_e"])
    worst["central"] = max(worst["central"], dw.residuals["index_central"])
    worst["transport"] = max(worst["transport"], rep.residuals["trace_transport"])
    worst["flow_id"] = max(worst["flow_id"], rep.residuals["flow_identity_defect"])
    skewed = bool(seed % 2)
    n_skew += int(skewed)
    n_extremal += int(rep.extremal)
    if skewed:
        worst["skew_flow"] = max(worst["skew_flow"], rep.residuals["flow_match"])
    else:
        worst["flow"] = max(worst["flow"], rep.residuals["flow_match"])
    if not ext["criteria_agree"]:
        worst["agree_fail"].append((seed, skewed, ext["generator_margin"],
                                    ext["direct_residual"]))
    td = rep.residuals["weight_trace_defect"]
    sd = rep.residuals["generator_scalar_defect"]
    if (td < 1e-8) != (sd < 1e-8):
        worst["trace_vs_scalar_fail"].append((seed, td, sd))
    if seed < 4:
        print(f"seed {seed}: dims N={inc.small.dim} M={inc.big.dim} M1={bc.m1.dim}",
              f"relcomm={rep.algebra.dim} extremal={rep.extremal}",
              f"index_tr={np.trace(dw.index_element).real:.4f}")
print("worst:", {k: (round(v, 12) if isinstance(v, float) else v) for k, v in worst.items()})
print(f"extremal {n_extremal}/50, skewed {n_skew}/50")
print(f"elapsed: {time.time()-t0:.1f}s")

banner("verify_extension_model: identity triple")
inc = jn.fixture_point_in_full()
bc = jn.basic_extension(inc)
dw = jn.dual_weight(bc)
out = jn.verify_extension_model(bc, dw, bc.m1, bc.e_n, dw.apply)
print({k: round(v, 12) if isinstance(v, float) else v for k, v in out["report"].items()})

banner("verify_extension_model: rotated copy")
rng = np.random.default_rng(9)
k = bc.gns.space_dim
comm = ag.commutant(bc.big_rep)
x = comm.project(rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))
h = (x + la.dagger(x)) / 2.0
u_rot = la.herm_power(
    np.eye(k, dtype=complex) + 0j, 1.0
)
w, v = np.linalg.eigh(h)
u_rot = v @ np.diag(np.exp(1j * w)) @ la.dagger(v)
model = ag.from_span([u_rot @ m @ la.dagger(u_rot) for m in bc.m1.onb()], k)
e_rot = u_rot @ bc.e_n @ la.dagger(u_rot)


def t_rot(z):
    return dw.apply(la.dagger(u_rot) @ z @ u_rot)


out = jn.verify_extension_model(bc, dw, model, e_rot, t_rot)
print({k2: round(v, 12) if isinstance(v, float) else v for k2, v in out["report"].items()})

print("ALL JONES SMOKE DONE")
