"""Probe: what is the density of the composite weight on the extension?"""

import numpy as np

from kacgalois import algebra as ag
from kacgalois import jones as jn
from kacgalois import linalg as la


def probe(inc, tag):
    bc = jn.basic_extension(inc)
    dw = jn.dual_weight(bc)
    g = bc.gns
    m1_onb = bc.m1.onb()
    omega_vec = g.cyclic
    d1 = np.zeros((g.space_dim, g.space_dim), dtype=complex)
    for m in m1_onb:
        d1 += complex(np.vdot(omega_vec, dw.apply(m) @ omega_vec)) * la.dagger(m)
    d1 = (d1 + la.dagger(d1)) / 2.0

    rep = jn.relcomm_report(bc, dw)
    rc = rep.algebra
    a = rep.flow_generator

    # Global density of Tr∘Ehat over M1 (not just relcomm corners).
    dt = np.zeros_like(d1)
    for m in m1_onb:
        dt += complex(np.trace(dw.apply(m))) * la.dagger(m)
    dt = (dt + la.dagger(dt)) / 2.0

    print(f"== {tag} ==")
    print("  d1 vs modular op:", la.frob(d1 - g.modular))
    print("  d1 in relcomm'?", max(la.frob(d1 @ x - x @ d1) for x in rc.onb()))
    print("  dt in relcomm span?", rc.residual(dt))
    print("  dt vs a (up to summand scalars)?")
    for s in rep.summands:
        z = s["projection"]
        dtz = z @ dt @ z
        az = s["generator"]
        ratio = np.trace(dtz).real / np.trace(az).real
        print(
            f"    block {s['block']}: ||dt_z - r*a_z|| = {la.frob(dtz - ratio * az):.3e}"
        )
    # Flow restricted: compare Ad(d1^{it}) with identity and with Ad(a^{it})
    for t in (0.3, 1.0):
        ut = la.herm_power(d1, 1j * t)
        uti = la.herm_power(d1, -1j * t)
        at = la.herm_power(a, 1j * t)
        ati = la.herm_power(a, -1j * t)
        rid = max(la.frob(ut @ x @ uti - x) for x in rc.onb())
        rad = max(la.frob(ut @ x @ uti - at @ x @ ati) for x in rc.onb())
        # does the flow preserve the relcomm span at all?
        rpres = max(la.span_residual(ut @ x @ uti, rc.onb()) for x in rc.onb())
        print(f"  t={t}: flow-vs-id {rid:.3e}  flow-vs-Ad(a) {rad:.3e}  span-preserved {rpres:.3e}")
    # modular op of phi: does Delta commute with relcomm?
    dcom = max(la.frob(g.modular @ x - x @ g.modular) for x in rc.onb())
    print("  [Delta, relcomm]:", f"{dcom:.3e}")
    return bc, dw, rep


for seed in (0, 4, 7, 11, 25):
    inc = jn.random_inclusion(seed)
    print(f"seed {seed}: label={inc.label} bratteli={inc.bratteli}",
          f"small_sizes? dims N={inc.small.dim} M={inc.big.dim}")
    bc, dw, rep = probe(inc, f"seed {seed}")
    print("  block dims M:", inc.big.block_dims, " N:", inc.small.block_dims)
    print("  relcomm blocks:", rep.algebra.block_dims)
    print("  margins:", rep.extremal_margin)

# omega-dependence of the restricted flow on a failing seed
print("== omega dependence, seed 4 ==")
inc = jn.random_inclusion(4)
for s2 in (100, 200):
    inc2 = jn.omega_variation(inc, s2)
    bc2 = jn.basic_extension(inc2)
    dw2 = jn.dual_weight(bc2)
    rep2 = jn.relcomm_report(bc2, dw2)
    print(f"  omega seed {s2}: flow_match {rep2.residuals['flow_match']:.3e}",
          f"spectrum {np.round(jn.flow_spectrum(rep2)[:4], 6)}")
