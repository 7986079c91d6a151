"""Explicit finite categories, functors, natural transformations and nerves.

Morphisms are interned as integers ``0 .. M-1``; composition is a
precomputed table keyed by ``(g, f)`` meaning ``g ∘ f``. Each morphism may
carry a label (the underlying embedding, a pair of poset elements, ...)
from which the table was generated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .config import limits
from .cyclic import CyclicOrder, _enc, compose, enumerate_embeddings, identity, standard_cycle
from .errors import InputError, ResourceError
from .report import VerificationReport


class FiniteCategory:
    def __init__(self, objects: Sequence[Hashable], src: Sequence, dst: Sequence,
                 comp: Mapping[tuple[int, int], int], ids: Mapping[Hashable, int],
                 labels: Sequence | None = None, name: str = ""):
        self.objects = tuple(objects)
        self.src = tuple(src)
        self.dst = tuple(dst)
        self.comp = dict(comp)
        self.ids = dict(ids)
        self.labels = tuple(labels) if labels is not None else tuple(range(len(self.src)))
        self.name = name
        self._validate_tables()
        self._homs = None
        self._identity_set = frozenset(self.ids.values())

    def _validate_tables(self):
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise InputError("duplicate object ids")
        M = len(self.src)
        if len(self.dst) != M or len(self.labels) != M:
            raise InputError("morphism tables have inconsistent lengths")
        for a, b in zip(self.src, self.dst):
            if a not in objs or b not in objs:
                raise InputError(f"morphism endpoint {a!r} -> {b!r} is not an object")
        if set(self.ids) != objs:
            raise InputError("every object needs exactly one identity")
        for x, i in self.ids.items():
            if not (0 <= i < M) or self.src[i] != x or self.dst[i] != x:
                raise InputError(f"identity of {x!r} is not an endomorphism of it")
        for (g, f), h in self.comp.items():
            if not all(0 <= m < M for m in (g, f, h)):
                raise InputError(f"composition entry {(g, f, h)!r} has a dangling morphism")

    @classmethod
    def from_tables(cls, objects, homs: Mapping, comp: Mapping, ids: Mapping, name: str = "") -> FiniteCategory:
        """Build from a hom table ``(a, b) -> [morphism ids]`` using arbitrary ids."""
        order = []
        src, dst = [], []
        for a in objects:
            for b in objects:
                for m in homs.get((a, b), ()):
                    order.append(m)
                    src.append(a)
                    dst.append(b)
        if len(set(order)) != len(order):
            raise InputError("a morphism id appears in more than one hom-set")
        idx = {m: i for i, m in enumerate(order)}
        try:
            table = {(idx[g], idx[f]): idx[h] for (g, f), h in comp.items()}
            id_map = {x: idx[m] for x, m in ids.items()}
        except KeyError as e:
            raise InputError(f"unknown morphism id {e.args[0]!r}") from None
        return cls(objects, src, dst, table, id_map, labels=order, name=name)

    @classmethod
    def generate(cls, objects, hom_labels: Callable[[Hashable, Hashable], Iterable],
                 compose_labels: Callable, identity_label: Callable, name: str = "") -> FiniteCategory:
        """Intern labelled morphisms and tabulate composition.

        ``compose_labels(g, f)`` must return the label of ``g ∘ f``.
        """
        objects = tuple(objects)
        labels, src, dst = [], [], []
        lookup = {}
        for a in objects:
            for b in objects:
                for lab in hom_labels(a, b):
                    lookup[(a, b, lab)] = len(labels)
                    labels.append(lab)
                    src.append(a)
                    dst.append(b)
        if len(labels) > limits.max_cells:
            raise ResourceError(f"{len(labels)} morphisms exceed the cell cap {limits.max_cells}")
        out_of = {x: [] for x in objects}
        for i, a in enumerate(src):
            out_of[a].append(i)
        comp = {}
        for f in range(len(labels)):
            for g in out_of[dst[f]]:
                key = (src[f], dst[g], compose_labels(labels[g], labels[f]))
                if key not in lookup:
                    raise InputError(f"composite of {labels[g]!r} and {labels[f]!r} is not a listed morphism")
                comp[(g, f)] = lookup[key]
        ids = {}
        for x in objects:
            key = (x, x, identity_label(x))
            if key not in lookup:
                raise InputError(f"identity of {x!r} is not a listed morphism")
            ids[x] = lookup[key]
        return cls(objects, src, dst, comp, ids, labels=labels, name=name)

    # --- accessors

    @property
    def morphisms(self) -> range:
        return range(len(self.src))

    @property
    def homs(self) -> dict:
        if self._homs is None:
            h = {(a, b): [] for a in self.objects for b in self.objects}
            for m, (a, b) in enumerate(zip(self.src, self.dst)):
                h[(a, b)].append(m)
            self._homs = {k: tuple(v) for k, v in h.items()}
        return self._homs

    def hom(self, a, b) -> tuple:
        return self.homs[(a, b)]

    def is_identity(self, m: int) -> bool:
        return m in self._identity_set

    def then(self, f: int, g: int) -> int:
        """Composite ``g ∘ f``."""
        try:
            return self.comp[(g, f)]
        except KeyError:
            raise InputError(f"morphisms {f} and {g} are not composable") from None

    def morphism_of(self, a, b, label) -> int:
        for m in self.hom(a, b):
            if self.labels[m] == label:
                return m
        raise InputError(f"no morphism {a!r} -> {b!r} labelled {label!r}")

    def __repr__(self) -> str:
        return f"FiniteCategory({self.name or '?'}: {len(self.objects)} objects, {len(self.src)} morphisms)"

    def check(self) -> VerificationReport:
        """Exhaustive check of the composition domain, unit laws and associativity."""
        rep = VerificationReport("category-laws", {"category": self.name,
                                                   "objects": len(self.objects),
                                                   "morphisms": len(self.src)})
        src, dst, comp = self.src, self.dst, self.comp
        expected = {(g, f) for f in self.morphisms for g in self.morphisms if dst[f] == src[g]}
        bad_domain = sorted(set(comp) ^ expected)
        rep.check("composition-domain", not bad_domain)
        bad_ends = [(g, f) for (g, f), h in comp.items()
                    if (g, f) in expected and (src[h] != src[f] or dst[h] != dst[g])]
        rep.check("composite-endpoints", not bad_ends)
        if bad_domain or bad_ends:
            rep.details["witness"] = (bad_domain or bad_ends)[0]
            return rep
        unit = next(((m,) for m in self.morphisms
                     if comp[(self.ids[dst[m]], m)] != m or comp[(m, self.ids[src[m]])] != m), None)
        rep.check("unit-laws", unit is None)
        out_of = {x: [] for x in self.objects}
        for m in self.morphisms:
            out_of[src[m]].append(m)
        assoc = None
        for f in self.morphisms:
            for g in out_of[dst[f]]:
                gf = comp[(g, f)]
                for h in out_of[dst[g]]:
                    if comp[(h, gf)] != comp[(comp[(h, g)], f)]:
                        assoc = (h, g, f)
                        break
                if assoc:
                    break
            if assoc:
                break
        rep.check("associativity", assoc is None)
        witness = unit or assoc
        if witness:
            rep.details["witness"] = list(witness)
        return rep


# --- posets ----------------------------------------------------------------

class FinitePoset:
    """Elements plus the (reflexive) order relation as a set of pairs."""

    def __init__(self, elements: Iterable[Hashable], leq: Iterable[tuple], check: bool = True):
        self.elements = tuple(elements)
        pairs = set(leq) | {(x, x) for x in self.elements}
        self.leq = frozenset(pairs)
        if check:
            self._check()

    def _check(self):
        els = set(self.elements)
        if len(els) != len(self.elements):
            raise InputError("duplicate poset elements")
        for x, y in self.leq:
            if x not in els or y not in els:
                raise InputError(f"order pair {(x, y)!r} references an unknown element")
            if x != y and (y, x) in self.leq:
                raise InputError(f"order is not antisymmetric at {(x, y)!r}")
        above = {x: [y for (a, y) in self.leq if a == x] for x in self.elements}
        for x, y in self.leq:
            for z in above[y]:
                if (x, z) not in self.leq:
                    raise InputError(f"order is not transitive at {(x, y, z)!r}")

    def __len__(self):
        return len(self.elements)

    def is_leq(self, x, y) -> bool:
        return (x, y) in self.leq

    def maximal_elements(self) -> list:
        return [x for x in self.elements
                if not any(self.is_leq(x, y) and x != y for y in self.elements)]

    def maximum(self):
        """The top element if there is one, else None."""
        for x in self.elements:
            if all(self.is_leq(y, x) for y in self.elements):
                return x
        return None


def finite_poset_to_category(P: FinitePoset) -> FiniteCategory:
    if not isinstance(P, FinitePoset):
        raise InputError("expected a FinitePoset")
    P._check()
    return FiniteCategory.generate(
        P.elements,
        lambda a, b: [(a, b)] if P.is_leq(a, b) else [],
        lambda g, f: (f[0], g[1]),
        lambda x: (x, x),
        name="poset",
    )


# --- the paper's categories, truncated ---------------------------------------

def cyc_category(structures: Mapping[Hashable, CyclicOrder], name: str = "cyc") -> FiniteCategory:
    """Full subcategory of cyclic orders and embeddings on the given objects."""
    structures = dict(structures)
    return FiniteCategory.generate(
        list(structures),
        lambda a, b: enumerate_embeddings(structures[a], structures[b]),
        compose,
        lambda x: identity(structures[x]),
        name=name,
    )


def truncated_cyc(N: int) -> FiniteCategory:
    """Objects ``[0], ..., [N-1]`` (object id ``k`` is the ``(k+1)``-element cycle)."""
    if not isinstance(N, int) or N < 1:
        raise InputError(f"truncated_cyc needs N >= 1, got {N!r}")
    return cyc_category({k: standard_cycle(k + 1) for k in range(N)}, name=f"cyc({N})")


def single_object_aut(n: int) -> FiniteCategory:
    if not isinstance(n, int) or n < 1:
        raise InputError(f"single_object_aut needs n >= 1, got {n!r}")
    return cyc_category({n - 1: standard_cycle(n)}, name=f"aut({n})")


def truncated_delta_inj(N: int) -> FiniteCategory:
    """Linear orders ``[k]`` with ``k+1 <= N`` elements and order embeddings.

    A morphism ``[a] -> [b]`` is labelled by its increasing image tuple.
    """
    if not isinstance(N, int) or N < 1:
        raise InputError(f"truncated_delta_inj needs N >= 1, got {N!r}")
    return FiniteCategory.generate(
        range(N),
        lambda a, b: list(itertools.combinations(range(b + 1), a + 1)),
        lambda g, f: tuple(g[i] for i in f),
        lambda x: tuple(range(x + 1)),
        name=f"delta_inj({N})",
    )


# --- functors and natural transformations -----------------------------------

@dataclass
class FiniteFunctor:
    source: FiniteCategory
    target: FiniteCategory
    obj_map: dict
    mor_map: dict

    def __call__(self, m: int) -> int:
        return self.mor_map[m]


@dataclass
class FiniteNatTrans:
    """Components ``eta[x] : F(x) -> G(x)`` for a pair of parallel functors."""

    F: FiniteFunctor
    G: FiniteFunctor
    components: dict


def _check_total(F: FiniteFunctor):
    S, T = F.source, F.target
    if set(F.obj_map) != set(S.objects):
        raise InputError("object map is not defined on exactly the source objects")
    if set(F.mor_map) != set(S.morphisms):
        raise InputError("morphism map is not defined on exactly the source morphisms")
    tobjs = set(T.objects)
    for x, y in F.obj_map.items():
        if y not in tobjs:
            raise InputError(f"object {x!r} maps to {y!r}, which is not a target object")
    for m, n in F.mor_map.items():
        if not (isinstance(n, int) and 0 <= n < len(T.src)):
            raise InputError(f"morphism {m} maps to dangling id {n!r}")


def check_functor(F: FiniteFunctor) -> VerificationReport:
    """Endpoints, identities and composition, all exhaustively. Truthy iff a functor."""
    _check_total(F)
    S, T = F.source, F.target
    rep = VerificationReport("functor", {"source": S.name, "target": T.name})
    ends = next((m for m in S.morphisms
                 if T.src[F.mor_map[m]] != F.obj_map[S.src[m]] or T.dst[F.mor_map[m]] != F.obj_map[S.dst[m]]), None)
    rep.check("endpoints", ends is None)
    if ends is not None:
        rep.details["witness"] = {"morphism": ends}
        return rep
    ids = next((x for x in S.objects if F.mor_map[S.ids[x]] != T.ids[F.obj_map[x]]), None)
    rep.check("identities", ids is None)
    comp = next(((g, f) for (g, f), h in S.comp.items()
                 if F.mor_map[h] != T.comp[(F.mor_map[g], F.mor_map[f])]), None)
    rep.check("composition", comp is None)
    if ids is not None:
        rep.details["witness"] = {"object": _enc(ids)}
    elif comp is not None:
        rep.details["witness"] = {"composable_pair": list(comp)}
    return rep


def check_nat_trans(eta: FiniteNatTrans) -> VerificationReport:
    F, G = eta.F, eta.G
    if F.source is not G.source or F.target is not G.target:
        raise InputError("natural transformation between functors with different (co)domains")
    _check_total(F)
    _check_total(G)
    S, T = F.source, F.target
    if set(eta.components) != set(S.objects):
        raise InputError("components are not defined on exactly the source objects")
    rep = VerificationReport("natural-transformation", {"source": S.name, "target": T.name})
    bad = next((x for x, c in eta.components.items()
                if not (0 <= c < len(T.src)) or T.src[c] != F.obj_map[x] or T.dst[c] != G.obj_map[x]), None)
    rep.check("component-endpoints", bad is None)
    if bad is not None:
        rep.details["witness"] = {"object": _enc(bad)}
        return rep
    square = next((m for m in S.morphisms
                   if T.comp[(G.mor_map[m], eta.components[S.src[m]])]
                   != T.comp[(eta.components[S.dst[m]], F.mor_map[m])]), None)
    rep.check("naturality", square is None)
    if square is not None:
        rep.details["witness"] = {"morphism": square}
    return rep


def identity_functor(C: FiniteCategory) -> FiniteFunctor:
    return FiniteFunctor(C, C, {x: x for x in C.objects}, {m: m for m in C.morphisms})


def inclusion_functor(C: FiniteCategory, D: FiniteCategory) -> FiniteFunctor:
    """Inclusion matching object ids and morphism labels."""
    mor = {}
    for m in C.morphisms:
        mor[m] = D.morphism_of(C.src[m], C.dst[m], C.labels[m])
    return FiniteFunctor(C, D, {x: x for x in C.objects}, mor)


# --- nerves -------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedNerve:
    """Normalized nerve up to ``max_dim``.

    ``simplices[0]`` lists objects; ``simplices[k]`` for ``k >= 1`` lists
    chains ``(f1, ..., fk)`` of composable non-identity morphisms with
    ``f1`` applied first. ``faces[k][s][i]`` is the index of ``d_i`` of
    simplex ``s`` in ``simplices[k-1]``, or None when that face is
    degenerate. Inner faces compose two neighbours, and that composite
    can be an identity (a rotation followed by its inverse); such faces
    vanish in the normalized chain complex.
    """

    category: FiniteCategory
    max_dim: int
    simplices: tuple
    faces: tuple

    def counts(self) -> list[int]:
        return [len(s) for s in self.simplices]


def chain_face(C: FiniteCategory, chain: tuple, i: int):
    """``d_i`` of an arbitrary (possibly degenerate) chain of length >= 1.

    Faces of 1-chains are objects.
    """
    k = len(chain)
    if k == 1:
        return C.dst[chain[0]] if i == 0 else C.src[chain[0]]
    if i == 0:
        return chain[1:]
    if i == k:
        return chain[:-1]
    return chain[:i - 1] + (C.comp[(chain[i], chain[i - 1])],) + chain[i + 1:]


def nerve(C: FiniteCategory, d: int) -> TruncatedNerve:
    if not isinstance(d, int) or d < 0:
        raise InputError(f"nerve dimension must be >= 0, got {d!r}")
    out_of = {x: [] for x in C.objects}
    for m in C.morphisms:
        if not C.is_identity(m):
            out_of[C.src[m]].append(m)
    levels = [tuple(C.objects)]
    total = len(C.objects)
    if d >= 1:
        levels.append(tuple((m,) for x in C.objects for m in out_of[x]))
        total += len(levels[1])
    for _ in range(2, d + 1):
        nxt = tuple(ch + (g,) for ch in levels[-1] for g in out_of[C.dst[ch[-1]]])
        total += len(nxt)
        if total > limits.max_cells:
            raise ResourceError(f"nerve exceeds the cell cap ({total} > {limits.max_cells} simplices)")
        levels.append(nxt)

    faces = [()]
    for k in range(1, d + 1):
        index = {s: i for i, s in enumerate(levels[k - 1])}
        table = []
        for ch in levels[k]:
            row = []
            for i in range(k + 1):
                face = chain_face(C, ch, i)
                if k > 1 and any(C.is_identity(m) for m in face):
                    row.append(None)
                else:
                    row.append(index[face])
            table.append(tuple(row))
        faces.append(tuple(table))
    return TruncatedNerve(C, d, tuple(levels), tuple(faces))


def check_simplicial_identities(nv: TruncatedNerve) -> VerificationReport:
    """``d_i d_j = d_{j-1} d_i`` for ``i < j`` on every stored simplex of dimension >= 2.

    Evaluated on raw chains, so faces that pass through degenerate chains
    are covered too. Also confirms the stored face tables.
    """
    C = nv.category
    rep = VerificationReport("simplicial-identities", {"max_dim": nv.max_dim})
    for k in range(1, nv.max_dim + 1):
        prev = nv.simplices[k - 1]
        for s, ch in enumerate(nv.simplices[k]):
            for i in range(k + 1):
                face = chain_face(C, ch, i)
                stored = nv.faces[k][s][i]
                if stored is None:
                    ok = k > 1 and any(C.is_identity(m) for m in face)
                else:
                    ok = prev[stored] == face
                if not rep.check("face-tables", ok):
                    rep.details["witness"] = {"dim": k, "simplex": list(ch), "face": i}
                    return rep
            if k < 2:
                continue
            for j in range(k + 1):
                for i in range(j):
                    lhs = chain_face(C, chain_face(C, ch, j), i)
                    rhs = chain_face(C, chain_face(C, ch, i), j - 1)
                    if not rep.check("identities", lhs == rhs):
                        rep.details["witness"] = {"dim": k, "simplex": list(ch), "i": i, "j": j}
                        return rep
    rep.check("identities", True)
    rep.check("face-tables", True)
    return rep


# --- JSON ----------------------------------------------------------------------

def category_to_json(C: FiniteCategory) -> dict:
    return {
        "name": C.name,
        "objects": [_enc(x) for x in C.objects],
        "homs": [[_enc(a), _enc(b), list(C.hom(a, b))] for a in C.objects for b in C.objects if C.hom(a, b)],
        "composition": sorted([g, f, h] for (g, f), h in C.comp.items()),
        "identities": [[_enc(x), C.ids[x]] for x in C.objects],
    }


def nerve_to_json(nv: TruncatedNerve) -> dict:
    return {
        "category": nv.category.name,
        "max_dim": nv.max_dim,
        "simplices": [[_enc(x) for x in nv.simplices[0]]] + [[list(s) for s in lvl] for lvl in nv.simplices[1:]],
    }
