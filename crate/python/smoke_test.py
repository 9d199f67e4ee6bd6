#!/usr/bin/env python3
"""Smoke test for the pyblochwork extension module.

Build the module first, then run this script from anywhere:

    cargo build -p pyblochwork
    python3 python/smoke_test.py

The script loads the cdylib straight out of target/, so no install step
is needed.
"""

import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / "release" / "libpyblochwork.so",
        REPO / "target" / "debug" / "libpyblochwork.so",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("libpyblochwork.so not found; run `cargo build -p pyblochwork` first")
    stage = Path(tempfile.mkdtemp(prefix="pyblochwork-"))
    shutil.copy2(built, stage / "pyblochwork.so")
    sys.path.insert(0, str(stage))
    import pyblochwork

    return pyblochwork


def check(name, ok):
    print(f"  {name}: {'ok' if ok else 'FAIL'}")
    if not ok:
        sys.exit(1)


def main():
    bw = load_module()
    G = bw.AbelianGroup

    print("abelian groups")
    z6 = G.cyclic(2).direct_sum(G.cyclic(3))
    check("Z/2 + Z/3 = Z/6", z6.is_isomorphic_to(G.cyclic(6)))
    check("invariant factors", G.of_cyclics([2, 4, 0]).invariant_factors() == [2, 4])
    check("pretty form", G.of_cyclics([2, 4, 0]).pretty() == "Z/2 + Z/4 + Z")
    check("order", G.cyclic(12).order() == 12 and G.free(1).order() is None)

    print("ext case split")
    check("ext(Z/2, Z/6) = Z/2", bw.ext(G.cyclic(2), G.cyclic(6)).is_isomorphic_to(G.cyclic(2)))
    check("ext(Z/2, Z/3) = 0", bw.ext(G.cyclic(2), G.cyclic(3)).is_trivial())

    print("homology")
    for i in range(4):
        computed = bw.bar_homology([4], i)
        check(f"H_{i}(Z/4) matches closed form", computed.is_isomorphic_to(bw.cyclic_homology(4, i)))
    klein_h3 = bw.bar_homology([2, 2], 3)
    check("H_3((Z/2)^2) = (Z/2)^3", klein_h3.invariant_factors() == [2, 2, 2])
    kunneth = bw.kunneth_h3(2)
    check("Kunneth total matches", kunneth["total"].is_isomorphic_to(klein_h3))

    print("spectral sequence")
    check("E2[0,0] = Z", bw.e2_page(4, 0, 0).is_isomorphic_to(G.free(1)))
    check("E2[1,2] = Z/2 at n = 4", bw.e2_page(4, 1, 2).is_isomorphic_to(G.cyclic(2)))
    check("E2[1,2] = 0 at n = 3", bw.e2_page(3, 1, 2).is_trivial())

    print("H1 comparison")
    lhs, rhs, equal = bw.lemma_h1_check(G.of_cyclics([2, 4]))
    check(f"{lhs.pretty()} = {rhs.pretty()}", equal)

    print("Bloch reports")
    for q, tor in [(3, 4), (4, 3), (9, 16)]:
        r = bw.bloch_report(q)
        check(
            f"q = {q}: exact, K2M = 0, tor = Z/{tor}",
            all(r["exact"]) and r["K2M"].is_trivial()
            and r["tor_tilde"].is_isomorphic_to(G.cyclic(tor)),
        )

    print("witness identities")
    for n in (2, 4, 8):
        check(f"all four hold at n = {n}", bw.verify_witness_identities(n)["all_hold"])
    classes = bw.witness_classes(2)
    check("2[omega] = [chi]", classes["relation_2omega_eq_chi"])
    check("[chi] has order 2 in the torus", classes["chi_t2"]["order"] == 2)

    print("smoke test passed")


if __name__ == "__main__":
    main()
