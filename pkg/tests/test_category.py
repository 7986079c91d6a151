import itertools
import json
from math import comb

import pytest

from cyctope.category import (
    FiniteCategory,
    FiniteNatTrans,
    FinitePoset,
    category_to_json,
    check_functor,
    check_nat_trans,
    check_simplicial_identities,
    finite_poset_to_category,
    identity_functor,
    inclusion_functor,
    nerve,
    nerve_to_json,
    single_object_aut,
    truncated_cyc,
    truncated_delta_inj,
)
from cyctope.cyclic import dumps, enumerate_embeddings, standard_cycle
from cyctope.errors import InputError
from cyctope.paracyclic import slice_poset


def all_small_categories():
    cats = [truncated_cyc(N) for N in range(1, 5)]
    cats += [truncated_delta_inj(N) for N in range(1, 5)]
    cats += [single_object_aut(n) for n in range(1, 6)]
    cats += [finite_poset_to_category(slice_poset(2, 0, 2, 4)),
             finite_poset_to_category(slice_poset(3, 0, 1, 3))]
    return cats


class TestConstructions:
    def test_cyc_1(self):
        C = truncated_cyc(1)
        assert C.objects == (0,) and len(C.morphisms) == 1

    def test_cyc_2(self):
        C = truncated_cyc(2)
        assert len(C.hom(0, 1)) == 2
        aut = C.hom(1, 1)
        assert len(aut) == 2
        g = next(m for m in aut if not C.is_identity(m))
        assert C.then(g, g) == C.ids[1]

    def test_cyc_3_rotations(self):
        assert len(truncated_cyc(3).hom(2, 2)) == 3

    @pytest.mark.parametrize("N", range(1, 7))
    def test_cyc_hom_sizes(self, N):
        C = truncated_cyc(N)
        for a in range(N):
            for b in range(N):
                expected = len(enumerate_embeddings(standard_cycle(a + 1), standard_cycle(b + 1)))
                assert len(C.hom(a, b)) == expected

    def test_delta(self):
        assert len(truncated_delta_inj(1).morphisms) == 1
        D = truncated_delta_inj(2)
        assert len(D.hom(0, 1)) == 2
        assert D.hom(0, 0) == (D.ids[0],) and D.hom(1, 1) == (D.ids[1],)
        assert len(truncated_delta_inj(3).hom(1, 2)) == 3

    @pytest.mark.parametrize("N", range(1, 6))
    def test_delta_binomial(self, N):
        D = truncated_delta_inj(N)
        for a in range(N):
            for b in range(N):
                assert len(D.hom(a, b)) == comb(b + 1, a + 1)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_aut_is_cyclic_group(self, n):
        G = single_object_aut(n)
        x = n - 1
        assert len(G.hom(x, x)) == n
        # every element has an inverse
        for g in G.morphisms:
            assert any(G.then(g, h) == G.ids[x] for h in G.morphisms)
        if n > 1:
            gen = G.morphism_of(x, x, next(f for f in enumerate_embeddings(standard_cycle(n), standard_cycle(n))
                                           if f.images[0] == 1))
            powers, m = [], G.ids[x]
            for _ in range(n):
                powers.append(m)
                m = G.then(m, gen)
            assert sorted(powers) == sorted(G.morphisms) and m == G.ids[x]

    @pytest.mark.parametrize("bad", [0, -1])
    def test_bad_sizes(self, bad):
        for ctor in (truncated_cyc, truncated_delta_inj):
            with pytest.raises(InputError):
                ctor(bad)

    @pytest.mark.parametrize("C", all_small_categories(), ids=lambda C: C.name)
    def test_category_laws(self, C):
        assert len(C.morphisms) <= 200
        assert C.check().passed


class TestFromTables:
    def test_two_arrow_category(self):
        C = FiniteCategory.from_tables(
            ["x", "y"],
            {("x", "x"): ["1x"], ("y", "y"): ["1y"], ("x", "y"): ["f", "g"]},
            {("1x", "1x"): "1x", ("1y", "1y"): "1y", ("f", "1x"): "f", ("g", "1x"): "g",
             ("1y", "f"): "f", ("1y", "g"): "g"},
            {"x": "1x", "y": "1y"},
        )
        assert C.check().passed

    def test_broken_law_is_reported(self):
        C = FiniteCategory.from_tables(
            ["*"], {("*", "*"): ["e", "a"]},
            {("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "a", ("a", "a"): "a"},
            {"*": "e"},
        )
        assert C.check().passed  # {e, a} with a*a = a is a monoid
        # a after e must be a, not e
        D = FiniteCategory.from_tables(
            ["*"], {("*", "*"): ["e", "a"]},
            {("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "e", ("a", "a"): "a"},
            {"*": "e"},
        )
        rep = D.check()
        assert not rep.passed and "witness" in rep.details

    def test_dangling(self):
        with pytest.raises(InputError):
            FiniteCategory.from_tables(["x"], {("x", "x"): ["1"]}, {("1", "1"): "2"}, {"x": "1"})
        with pytest.raises(InputError):
            FiniteCategory.from_tables(["x"], {("x", "x"): ["1"]}, {}, {"x": "nope"})


class TestFunctors:
    def test_identity_functor(self):
        assert check_functor(identity_functor(truncated_cyc(3)))

    def test_inclusion(self):
        assert check_functor(inclusion_functor(truncated_cyc(2), truncated_cyc(3)))
        assert check_functor(inclusion_functor(truncated_delta_inj(2), truncated_delta_inj(4)))

    def test_corrupted_morphism_map(self):
        C = truncated_cyc(3)
        F = identity_functor(C)
        rot = [m for m in C.hom(2, 2) if not C.is_identity(m)]
        F.mor_map[rot[0]] = rot[1]
        rep = check_functor(F)
        assert not rep and rep.details["witness"]

    def test_dangling_ids(self):
        C = truncated_cyc(2)
        F = identity_functor(C)
        F.mor_map[0] = 999
        with pytest.raises(InputError):
            check_functor(F)
        F = identity_functor(C)
        del F.obj_map[0]
        with pytest.raises(InputError):
            check_functor(F)

    def test_nat_trans_identity(self):
        C = truncated_cyc(3)
        F = identity_functor(C)
        assert check_nat_trans(FiniteNatTrans(F, F, dict(C.ids)))

    def test_nat_trans_rotation_is_not_natural(self):
        C = truncated_cyc(3)
        F = identity_functor(C)
        comps = dict(C.ids)
        comps[2] = next(m for m in C.hom(2, 2) if not C.is_identity(m))
        rep = check_nat_trans(FiniteNatTrans(F, F, comps))
        assert not rep and "morphism" in rep.details["witness"]


class TestPosets:
    def test_point(self):
        C = finite_poset_to_category(FinitePoset(["p"], []))
        assert len(C.objects) == 1 and len(C.morphisms) == 1

    def test_chain(self):
        C = finite_poset_to_category(FinitePoset([0, 1, 2], [(0, 1), (1, 2), (0, 2)]))
        nv = nerve(C, 3)
        assert nv.counts() == [3, 3, 1, 0]

    def test_slice_has_terminal(self):
        C = finite_poset_to_category(slice_poset(2, 0, 1, 2))
        top = max(C.objects, key=lambda f: f.m)
        assert all(len(C.hom(x, top)) == 1 for x in C.objects)

    @pytest.mark.parametrize("leq", [[(0, 1), (1, 0)], [(0, 1), (1, 2)], [(0, 5)]])
    def test_not_a_partial_order(self, leq):
        with pytest.raises(InputError):
            FinitePoset([0, 1, 2], leq)

    def test_nerve_is_order_complex(self):
        Q = slice_poset(3, 0, 1, 3)
        C = finite_poset_to_category(Q)
        nv = nerve(C, 3)
        for k in range(1, 4):
            chains = set()
            for ch in nv.simplices[k]:
                pts = [C.src[ch[0]]] + [C.dst[m] for m in ch]
                chains.add(tuple(pts))
            expected = {c for c in itertools.permutations(Q.elements, k + 1)
                        if all(Q.is_leq(x, y) and x != y for x, y in zip(c, c[1:]))}
            assert chains == expected


class TestNerve:
    def test_point(self):
        assert nerve(truncated_cyc(1), 3).counts() == [1, 0, 0, 0]

    def test_z2(self):
        assert nerve(single_object_aut(2), 3).counts() == [1, 1, 1, 1]

    def test_delta_2(self):
        assert nerve(truncated_delta_inj(2), 2).counts() == [2, 2, 0]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_aut_counts(self, n):
        assert nerve(single_object_aut(n), 4).counts() == [(n - 1) ** k for k in range(5)]

    def test_degenerate_inner_face(self):
        nv = nerve(single_object_aut(2), 2)
        assert nv.faces[2][0] == (0, None, 0)

    def test_negative_dim(self):
        with pytest.raises(InputError):
            nerve(truncated_cyc(1), -1)

    @pytest.mark.parametrize("C", [truncated_cyc(3), single_object_aut(3), truncated_delta_inj(4),
                                   finite_poset_to_category(slice_poset(2, 0, 2, 4))],
                             ids=lambda C: C.name)
    def test_simplicial_identities(self, C):
        assert check_simplicial_identities(nerve(C, 4)).passed


def test_json_dumps_deterministic():
    C = truncated_cyc(3)
    a = dumps({"category": category_to_json(C), "nerve": nerve_to_json(nerve(C, 2))})
    b = dumps({"category": category_to_json(truncated_cyc(3)), "nerve": nerve_to_json(nerve(truncated_cyc(3), 2))})
    assert a == b
    obj = json.loads(a)
    assert obj["nerve"]["simplices"][0] == [0, 1, 2]
