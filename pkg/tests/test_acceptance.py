"""Acceptance suite: one recorded verdict line per criterion.

Runs in file order; the boundary check (criterion 5) comes last so it can
re-examine every chain complex built here.
"""

import itertools
import json
import random
import time
from fractions import Fraction as Fr
from math import comb


from cyctope.category import finite_poset_to_category, nerve, single_object_aut, truncated_cyc, truncated_delta_inj
from cyctope.cyclic import CyclicOrder, check_axioms, compose, dumps, enumerate_embeddings, identity, standard_cycle
from cyctope.dense import alternating_back_and_forth, check_partial_iso, double, map_double, replay, t_stage, verify_density_step
from cyctope.homology import HomologyGroup, boundary_complex, homology, homology_report, reduced_homology_vanishes, smith_normal_form
from cyctope.paracyclic import slice_poset, verify_horb, verify_square

from oracles import CYCLIC_GROUP_HOMOLOGY, embeddings_by_definition, invariant_factors_by_minors
from test_cyclic import ASYMMETRY_ONLY, CONNECTEDNESS_ONLY, CYCLICITY_BROKEN, TRANSITIVITY_ONLY

COMPLEXES = []


def complex_of(C, dim):
    cx = boundary_complex(nerve(C, dim))
    COMPLEXES.append((C.name, cx))
    return cx


def poset_complex(P, dim):
    return complex_of(finite_poset_to_category(P), dim)


FIXTURES = {
    "Asymmetry": ASYMMETRY_ONLY,
    "Transitivity": TRANSITIVITY_ONLY,
    "Connectedness": CONNECTEDNESS_ONLY,
    "Cyclicity": CYCLICITY_BROKEN,
}


def test_c01a_axioms_detected_with_witness(criterion):
    t = time.perf_counter()
    standard_ok = all(check_axioms(standard_cycle(n)).passed for n in range(1, 13))
    detected = {a: check_axioms(S).witnesses[a] for a, S in FIXTURES.items()}
    elapsed = time.perf_counter() - t
    ok = standard_ok and all(w is not None for w in detected.values()) and elapsed < 5
    criterion("1a", "axioms hold on standard_cycle(1..12); each fixture fails with a witness", ok,
              f"{elapsed:.2f}s")
    assert ok


def test_c01b_single_axiom_fixtures(criterion):
    """Each of the four fixtures must violate its own axiom and nothing else.

    No relation violates Cyclicity alone (Connectedness plus Asymmetry imply
    it); the exhaustive 3-element search below is left to report that.
    """
    failures = {a: check_axioms(S).failures for a, S in FIXTURES.items()}
    if failures["Cyclicity"] != ["Cyclicity"]:
        allt = list(itertools.permutations(range(3)))
        for bits in itertools.product([0, 1], repeat=len(allt)):
            S = CyclicOrder(range(3), [t for t, b in zip(allt, bits) if b])
            if check_axioms(S).failures == ["Cyclicity"]:
                failures["Cyclicity"] = ["Cyclicity"]
                break
    ok = all(f == [a] for a, f in failures.items())
    criterion("1b", "one fixture per axiom violating that axiom only", ok,
              "; ".join(f"{a}: {'+'.join(f)}" for a, f in failures.items()))
    assert ok, failures


def test_c02_hom_counts(criterion):
    t = time.perf_counter()
    bad = []
    for n in range(1, 9):
        for m in range(1, n + 1):
            C, D = standard_cycle(m), standard_cycle(n)
            fast = [f.images for f in enumerate_embeddings(C, D)]
            oracle = embeddings_by_definition(C, D)
            if fast != oracle or len(oracle) != m * comb(n, m):
                bad.append((m, n))
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 60
    criterion(2, "|Hom([m-1],[n-1])| = m*C(n,m) for 1<=m<=n<=8 against brute force", ok,
              f"36 pairs, {elapsed:.2f}s" + (f", mismatches {bad}" if bad else ""))
    assert ok


def test_c03_horb(criterion):
    t = time.perf_counter()
    failed = [(m, n) for n in range(1, 7) for m in range(1, n + 1) if not verify_horb(m, n).passed]
    elapsed = time.perf_counter() - t
    ok = not failed and elapsed < 30
    criterion(3, "shift orbits biject with cyclic embeddings for 1<=m<=n<=6", ok,
              f"21 pairs, {elapsed:.2f}s" + (f", failed {failed}" if failed else ""))
    assert ok


def test_c04_smith_normal_form(criterion):
    fixtures = [
        ([[2, 4], [6, 8]], (2, 4)),
        ([[2, 0], [0, 3]], (1, 6)),
        ([[0, 0], [0, 0]], ()),
        ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], (2, 6, 12)),
        ([[6, 0, 0], [0, 10, 0], [0, 0, 15]], (1, 30, 30)),
    ]
    fixtures_ok = all(smith_normal_form(M).diagonal == d == invariant_factors_by_minors(M) for M, d in fixtures)
    rng = random.Random(20240501)
    bad = 0
    for _ in range(500):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        density = rng.random()
        M = [[rng.randint(-9, 9) if rng.random() < density else 0 for _ in range(c)] for _ in range(r)]
        if smith_normal_form(M).diagonal != invariant_factors_by_minors(M):
            bad += 1
    ok = fixtures_ok and bad == 0
    criterion(4, "invariant factors match gcd-of-minors on 500 random matrices <= 6x6", ok,
              f"{len(fixtures)} fixtures, {bad} mismatches")
    assert ok


def test_c06_cyclic_group_homology(criterion):
    t = time.perf_counter()
    got = {}
    for n in (2, 3, 4):
        cx = complex_of(single_object_aut(n), 4)
        got[n] = [(H.betti, H.torsion) for H in (homology(cx, k) for k in range(4))]
    elapsed = time.perf_counter() - t
    ok = all(got[n] == CYCLIC_GROUP_HOMOLOGY[n] for n in got) and elapsed < 120
    shown = ", ".join(f"n={n}: " + " | ".join(str(HomologyGroup(b, tor)) for b, tor in got[n]) for n in got)
    criterion(6, "H_0..H_3 of the one-object category Z/n are Z, Z/n, 0, Z/n (n=2,3,4)", ok,
              f"{shown}; {elapsed:.2f}s")
    assert ok


def _windows(n, max_width):
    for a2 in range(n):
        for w in range(1, max_width + 1):
            yield Fr(a2, n), Fr(a2, n) + Fr(w, n)


def test_c07_slice_base_case(criterion):
    bad, count = [], 0
    for n in range(1, 5):
        for a2 in range(n):
            a = Fr(a2, n)
            P = slice_poset(n, a, a + 1, n)
            top = P.maximum()
            count += 1
            if top is None or not reduced_homology_vanishes(poset_complex(P, 3), 2):
                bad.append((n, str(a)))
    ok = not bad
    criterion(7, "C_[a,a+1) has a terminal object and reduced H_0..H_2 = 0 (n<=4)", ok,
              f"{count} windows" + (f", failed {bad}" if bad else ""))
    assert ok


def test_c08_slice_squares_and_homology(criterion):
    squares, sq_bad = 0, []
    for n in range(1, 4):
        for a, b in _windows(n, 3 * n):
            if b - a <= 1:
                continue
            for k in range(1, 5):
                squares += 1
                if not verify_square(n, a, b, k).passed:
                    sq_bad.append((n, str(a), str(b), k))
    # homology only where k_max does not truncate (every object has <= n points)
    slices, h_bad = 0, []
    for n in range(1, 4):
        for a, b in _windows(n, 3 * n):
            for k in range(n, 5):
                slices += 1
                if not reduced_homology_vanishes(poset_complex(slice_poset(n, a, b, k), 3), 2):
                    h_bad.append((n, str(a), str(b), k))
    ok = not sq_bad and not h_bad
    per_n = {n: sum(1 for f in h_bad if f[0] == n) for n in range(1, 4)}
    criterion(8, "slice squares verified; C_[a,b) has reduced H_0..H_2 = 0 (n<=3, b-a<=3, k_max<=4)", ok,
              f"{squares} squares, {slices} slices at nerve dim 3, non-contractible slices by n: {per_n}"
              + (f", square failures {sq_bad}" if sq_bad else "") + (f", homology failures {h_bad}" if h_bad else ""))
    assert ok


def test_c09_circle(criterion):
    cx = complex_of(truncated_delta_inj(2), 2)
    H0, H1 = homology(cx, 0), homology(cx, 1)
    ok = H0 == HomologyGroup(1) and H1 == HomologyGroup(1)
    criterion(9, "truncated injective simplex category on two objects: H_0 = Z, H_1 = Z", ok, f"H_0={H0}, H_1={H1}")
    assert ok


def test_c10_doubling(criterion):
    comps = nat = 0
    functor_ok = True
    cycles = [standard_cycle(n) for n in range(1, 6)]
    for C in cycles:
        functor_ok &= map_double(identity(C)) == identity(double(C)[0])
    for A, B, D in itertools.product(cycles, repeat=3):
        if not len(A) <= len(B) <= len(D):
            continue
        for f in enumerate_embeddings(B, D):
            Tf = map_double(f)
            for g in enumerate_embeddings(A, B):
                comps += 1
                functor_ok &= map_double(compose(f, g)) == compose(Tf, map_double(g))
    for A, B in itertools.product(cycles, repeat=2):
        for f in enumerate_embeddings(A, B):
            nat += 1
            functor_ok &= compose(map_double(f), double(A)[1]) == compose(double(B)[1], f)
    defects, density_ok = 0, True
    for n in range(1, 7):
        for k in range(4):
            rep = verify_density_step(t_stage(standard_cycle(n), k))
            defects += rep.details["defects"]
            density_ok &= rep.passed
    ok = functor_ok and density_ok
    criterion(10, "T is a functor, iota is natural (sizes <= 5); density defects witnessed one stage up", ok,
              f"{comps} composites, {nat} naturality squares, {defects} defects for |C|<=6, k<=3")
    assert ok


def test_c11_back_and_forth(criterion):
    p = alternating_back_and_forth("stage:1", "stage:2", 10)
    valid = check_partial_iso(p).passed and len(p.pairs) == 10
    text = dumps(p.to_json())
    again = dumps(replay(json.loads(text)).to_json())
    ok = valid and again == text
    criterion(11, "10-step back-and-forth between stages over 1- and 2-element bases; replay byte-identical", ok,
              f"final stages {p.log[-1]['stages']}, {len(text)} bytes")
    assert ok


def test_c12_truncated_cyc_exploratory(criterion):
    rows = []
    for N in range(1, 5):
        cx = complex_of(truncated_cyc(N), 3)
        groups = [homology_report(cx, k) for k in range(3)]
        rows.append(f"N={N}: " + " | ".join(str(HomologyGroup(g["betti"], g["torsion"])) for g in groups))
    criterion(12, "homology of truncated_cyc(N), degrees 0..2, nerve truncated at dim 3 (not asserted)", None,
              "; ".join(rows))


def test_c05_boundary_squares(criterion):
    # every complex above went through boundary_complex, which already refuses
    # a nonzero square; check them again explicitly
    extra = [(C.name, boundary_complex(nerve(C, 4)))
             for C in (truncated_cyc(3), truncated_delta_inj(4), single_object_aut(5))]
    allcx = COMPLEXES + extra
    bad = [name for name, cx in allcx if not cx.boundary_squares_vanish()]
    ok = not bad and len(allcx) > len(extra)
    criterion(5, "boundary of boundary is zero on every nerve complex built by the suite", ok,
              f"{len(allcx)} complexes" + (f", failures {bad}" if bad else ""))
    assert ok
