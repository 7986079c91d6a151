"""Finite cyclically ordered sets and their embeddings.

A structure is stored as its full set of ordered triples ``(a, b, c)`` for
which ``R(a, b, c)`` holds. Element ids are opaque hashables (strings,
integers, or tuples of those). Nothing here assumes the axioms hold:
:func:`check_axioms` is the single authority on validity.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Any, Hashable, Iterable, Sequence

from .errors import InputError

AXIOMS = ("Asymmetry", "Transitivity", "Connectedness", "Cyclicity")

# composites of sources up to this size are re-verified under assertions
DEBUG_CHECK_LIMIT = 24


class CyclicOrder:
    """A finite set of ids together with a ternary relation.

    Equality is set-based: two instances are equal when they have the same
    element set and the same triple set, whatever order ``elements`` was
    listed in. The listed order only fixes enumeration order.
    """

    __slots__ = ("elements", "triples", "_index", "_hash", "_valid")

    def __init__(self, elements: Iterable[Hashable], triples: Iterable[Sequence[Hashable]] = ()):
        elements = tuple(elements)
        index: dict[Hashable, int] = {}
        for i, e in enumerate(elements):
            try:
                if e in index:
                    raise InputError(f"duplicate element id {e!r}")
            except TypeError:
                raise InputError(f"element id {e!r} is not hashable") from None
            index[e] = i
        checked = set()
        for t in triples:
            t = tuple(t)
            if len(t) != 3:
                raise InputError(f"triple {t!r} does not have three entries")
            for x in t:
                if x not in index:
                    raise InputError(f"triple {t!r} references unknown element {x!r}")
            if len({t[0], t[1], t[2]}) != 3:
                raise InputError(f"triple {t!r} has repeated entries")
            checked.add(t)
        self.elements = elements
        self.triples = frozenset(checked)
        self._index = index
        self._hash = None
        self._valid = None

    @classmethod
    def _trusted(cls, elements, triples) -> CyclicOrder:
        # constructors that are correct by construction skip validation and
        # the cubic axiom check; tests re-check them independently
        self = cls.__new__(cls)
        self.elements = tuple(elements)
        self.triples = frozenset(triples)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._hash = None
        self._valid = True
        return self

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def index(self, x) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise InputError(f"{x!r} is not an element of this structure") from None

    def holds(self, a, b, c) -> bool:
        return (a, b, c) in self.triples

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclicOrder):
            return NotImplemented
        return self.triples == other.triples and self._index.keys() == other._index.keys()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.elements), self.triples))
        return self._hash

    def __repr__(self) -> str:
        if len(self.elements) <= 8:
            return f"CyclicOrder({list(self.elements)!r}, {len(self.triples)} triples)"
        return f"CyclicOrder(<{len(self.elements)} elements>, {len(self.triples)} triples)"

    @property
    def is_valid(self) -> bool:
        if self._valid is None:
            self._valid = check_axioms(self).passed
        return self._valid

    def sorted_triples(self) -> list[tuple]:
        ix = self._index
        return sorted(self.triples, key=lambda t: (ix[t[0]], ix[t[1]], ix[t[2]]))

    def linearization(self, base=None) -> tuple:
        """The elements read around the cycle starting at ``base``.

        ``base`` defaults to the first listed element. Requires a valid
        cyclic order: removing the basepoint leaves a strict linear order.
        """
        if not self.elements:
            return ()
        if base is None:
            base = self.elements[0]
        self.index(base)
        if not self.is_valid:
            raise InputError("linearization needs a structure satisfying the axioms")
        rest = [e for e in self.elements if e != base]

        def cmp(y, z):
            return -1 if (base, y, z) in self.triples else 1

        return (base, *sorted(rest, key=cmp_to_key(cmp)))

    def restrict(self, subset: Iterable) -> CyclicOrder:
        keep = set(subset)
        for x in keep:
            self.index(x)
        els = [e for e in self.elements if e in keep]
        tri = [t for t in self.triples if t[0] in keep and t[1] in keep and t[2] in keep]
        out = CyclicOrder._trusted(els, tri)
        out._valid = True if self._valid else None
        return out


@dataclass(frozen=True)
class LinearOrder:
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise InputError("linear order has duplicate elements")


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom verdicts. ``witnesses[axiom]`` is None when the axiom holds."""

    witnesses: dict

    @property
    def passed(self) -> bool:
        return all(w is None for w in self.witnesses.values())

    @property
    def failures(self) -> list[str]:
        return [a for a in AXIOMS if self.witnesses[a] is not None]

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "axioms": {
                a: {"holds": self.witnesses[a] is None,
                    "witness": None if self.witnesses[a] is None else [_enc(x) for x in self.witnesses[a]]}
                for a in AXIOMS
            },
        }


def check_axioms(structure) -> AxiomReport:
    """Check the four cyclic-order axioms, returning the first witness of each failure.

    ``structure`` is a :class:`CyclicOrder` or an ``(elements, triples)``
    pair; malformed input raises :class:`InputError`.

    Asymmetry covers the ``y == w`` instance of the paper's asymmetry clause;
    Transitivity is checked for ``y != w`` only, since ``R(x, y, y)`` can never
    hold for a relation on distinct triples.
    """
    if not isinstance(structure, CyclicOrder):
        elements, triples = structure
        structure = CyclicOrder(elements, triples)
    S = structure
    R = S.triples
    ordered = S.sorted_triples()

    asym = next(((x, y, z) for x, y, z in ordered if (x, z, y) in R), None)

    after: dict[tuple, list] = {}
    for x, z, w in ordered:
        after.setdefault((x, z), []).append(w)
    trans = None
    for x, y, z in ordered:
        for w in after.get((x, z), ()):
            if w != y and (x, y, w) not in R:
                trans = (x, y, z, w)
                break
        if trans:
            break

    conn = None
    for x, y, z in itertools.permutations(S.elements, 3):
        if (x, y, z) not in R and (z, y, x) not in R:
            conn = (x, y, z)
            break

    cyc = next(((x, y, z) for x, y, z in ordered if (y, z, x) not in R), None)

    report = AxiomReport(dict(zip(AXIOMS, (asym, trans, conn, cyc))))
    S._valid = report.passed
    return report


def from_linear(order: LinearOrder | Sequence) -> CyclicOrder:
    """The cyclic order induced by a linear one: R(x,y,z) iff x<y<z up to rotation."""
    if not isinstance(order, LinearOrder):
        order = LinearOrder(tuple(order))
    els = order.elements
    triples = []
    for a, b, c in itertools.combinations(els, 3):
        triples += [(a, b, c), (b, c, a), (c, a, b)]
    return CyclicOrder._trusted(els, triples)


def standard_cycle(n: int) -> CyclicOrder:
    """The ``n``-element cyclic order ``[n-1]`` on ``0, ..., n-1``."""
    if not isinstance(n, int) or n < 1:
        raise InputError(f"standard_cycle needs n >= 1, got {n!r}")
    return from_linear(range(n))


@dataclass(frozen=True)
class StructEmbedding:
    """A map of structures, stored as images aligned with ``source.elements``."""

    source: CyclicOrder
    target: CyclicOrder
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != len(self.source):
            raise InputError("image tuple length does not match the source")
        for y in self.images:
            if y not in self.target:
                raise InputError(f"image {y!r} is not an element of the target")

    @classmethod
    def from_mapping(cls, source, target, mapping) -> StructEmbedding:
        try:
            return cls(source, target, tuple(mapping[x] for x in source.elements))
        except KeyError as e:
            raise InputError(f"mapping has no image for {e.args[0]!r}") from None

    def __call__(self, x):
        return self.images[self.source.index(x)]

    def as_dict(self) -> dict:
        return dict(zip(self.source.elements, self.images))

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_embedding(self) -> bool:
        if not self.is_injective():
            return False
        f = self.as_dict()
        S, T = self.source.triples, self.target.triples
        for a, b, c in itertools.permutations(self.source.elements, 3):
            if ((a, b, c) in S) != ((f[a], f[b], f[c]) in T):
                return False
        return True

    def __repr__(self) -> str:
        return f"StructEmbedding({self.as_dict()!r})"


def identity(C: CyclicOrder) -> StructEmbedding:
    return StructEmbedding(C, C, C.elements)


def compose(f: StructEmbedding, g: StructEmbedding) -> StructEmbedding:
    """``f ∘ g``: apply ``g`` first."""
    if g.target != f.source:
        raise InputError("cannot compose: target of g is not the source of f")
    fd = f.as_dict()
    h = StructEmbedding(g.source, f.target, tuple(fd[y] for y in g.images))
    if __debug__ and len(h.source) <= DEBUG_CHECK_LIMIT:
        assert h.is_embedding() or not (f.is_embedding() and g.is_embedding())
    return h


def _image_key(D: CyclicOrder):
    return lambda f: tuple(D.index(y) for y in f.images)


def enumerate_embeddings(C: CyclicOrder, D: CyclicOrder) -> list[StructEmbedding]:
    """All embeddings ``C -> D``, sorted lexicographically by image positions in ``D``.

    For valid cyclic orders an embedding is a choice of image for the
    basepoint of ``C`` followed by a strictly increasing choice along the
    linearization of ``D`` at that image. Anything else falls back to the
    definitional search.
    """
    if not (C.is_valid and D.is_valid):
        return brute_force_embeddings(C, D)
    m = len(C)
    if m == 0:
        return [StructEmbedding(C, D, ())]
    lin_c = C.linearization()
    pos = [C.index(c) for c in lin_c]
    out = []
    for d in D.elements:
        lin_d = D.linearization(d)
        for rest in itertools.combinations(lin_d[1:], m - 1):
            images = [None] * m
            for p, y in zip(pos, (d, *rest)):
                images[p] = y
            out.append(StructEmbedding(C, D, tuple(images)))
    out.sort(key=_image_key(D))
    return out


def brute_force_embeddings(C: CyclicOrder, D: CyclicOrder, *, injective: bool = True) -> list[StructEmbedding]:
    """Definitional search over all injections (or all maps) ``C -> D``.

    Filters by the R-biconditional on every ordered distinct triple of ``C``.
    With ``injective=False`` the injectivity requirement is dropped, which
    is redundant once ``C`` has three or more elements.
    """
    src = C.elements
    triples_c = [(i, j, k, (a, b, c) in C.triples)
                 for (i, a), (j, b), (k, c) in itertools.permutations(enumerate(src), 3)]
    T = D.triples
    candidates = (itertools.permutations(D.elements, len(src)) if injective
                  else itertools.product(D.elements, repeat=len(src)))
    out = []
    for images in candidates:
        if all(((images[i], images[j], images[k]) in T) == held for i, j, k, held in triples_c):
            out.append(StructEmbedding(C, D, images))
    return out


def union_chain(stages: Sequence[CyclicOrder], maps: Sequence[StructEmbedding]) -> CyclicOrder:
    """Colimit of a finite chain of embeddings ``stages[0] -> stages[1] -> ...``.

    Each element is identified with its image in the last stage; the union
    of those images carries the last stage's relation. Every stage must be
    recovered by restriction along its leg into the union.
    """
    if not stages:
        raise InputError("chain must have at least one stage")
    if len(maps) != len(stages) - 1:
        raise InputError("a chain of k stages needs k-1 links")
    for i, f in enumerate(maps):
        if f.source != stages[i] or f.target != stages[i + 1]:
            raise InputError(f"link {i} does not connect stage {i} to stage {i + 1}")
        if not f.is_embedding():
            raise InputError(f"link {i} is not an embedding")
    last = stages[-1]
    legs = [identity(last)]
    for f in reversed(maps):
        legs.append(compose(legs[-1], f))
    legs.reverse()
    covered = set()
    for leg in legs:
        covered.update(leg.images)
    union = last.restrict(covered)
    for stage, leg in zip(stages, legs):
        f = leg.as_dict()
        pulled = {t for t in itertools.permutations(stage.elements, 3)
                  if (f[t[0]], f[t[1]], f[t[2]]) in union.triples}
        assert pulled == stage.triples, "restriction does not recover a stage"
    return union


# --- JSON ----------------------------------------------------------------

def _enc(x) -> Any:
    if isinstance(x, tuple):
        return [_enc(y) for y in x]
    return x


def _dec(x) -> Hashable:
    if isinstance(x, list):
        return tuple(_dec(y) for y in x)
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise InputError(f"unsupported element id {x!r}")


def _key(x) -> str:
    return x if isinstance(x, str) else json.dumps(_enc(x), separators=(",", ":"))


def structure_to_json(C: CyclicOrder) -> dict:
    return {
        "elements": [_enc(e) for e in C.elements],
        "triples": [[_enc(x) for x in t] for t in C.sorted_triples()],
    }


def structure_from_json(obj) -> CyclicOrder:
    if not isinstance(obj, dict) or "elements" not in obj or "triples" not in obj:
        raise InputError('structure JSON needs "elements" and "triples"')
    if not isinstance(obj["elements"], list) or not isinstance(obj["triples"], list):
        raise InputError('"elements" and "triples" must be lists')
    triples = []
    for t in obj["triples"]:
        if not isinstance(t, list):
            raise InputError(f"triple {t!r} is not a list")
        triples.append(tuple(_dec(x) for x in t))
    return CyclicOrder([_dec(e) for e in obj["elements"]], triples)


def embedding_to_json(f: StructEmbedding) -> dict:
    return {
        "source": structure_to_json(f.source),
        "target": structure_to_json(f.target),
        "map": {_key(x): _enc(y) for x, y in zip(f.source.elements, f.images)},
    }


def embedding_from_json(obj, source: CyclicOrder | None = None, target: CyclicOrder | None = None) -> StructEmbedding:
    if "map" not in obj:
        raise InputError('embedding JSON needs "map"')
    source = source if source is not None else structure_from_json(obj["source"])
    target = target if target is not None else structure_from_json(obj["target"])
    keys = {}
    for x in source.elements:
        k = _key(x)
        if k in keys:
            raise InputError(f"element ids {keys[k]!r} and {x!r} share the JSON key {k!r}")
        keys[k] = x
    raw = obj["map"]
    if set(raw) != set(keys):
        raise InputError("embedding map keys do not match the source elements")
    return StructEmbedding.from_mapping(source, target, {keys[k]: _dec(v) for k, v in raw.items()})


def dumps(obj) -> str:
    """Canonical JSON text used for all regression snapshots."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
