"""Dense cyclic orders: the model Q/Z, the doubling construction and back-and-forth.

``double(C)`` inserts a copy ``(c, 1)`` in the cut just after each ``c``.
Iterating it gives stages ``T^k(C)`` whose elements are named
``(base_id, bits)`` with ``len(bits) == k``; the inclusion of stage ``k``
into stage ``k + 1`` appends ``"0"``. The union of all stages is never
built; everything works on an explicit finite stage.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Hashable

from .category import FiniteCategory, FiniteFunctor, FiniteNatTrans, cyc_category, truncated_cyc
from .config import limits
from .cyclic import (
    CyclicOrder,
    StructEmbedding,
    _dec,
    _enc,
    from_linear,
    standard_cycle,
    structure_from_json,
    structure_to_json,
)
from .errors import InputError, NoWitnessError, ResourceError
from .paracyclic import format_rational, parse_rational
from .report import VerificationReport

# --- Q/Z ----------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class QZPoint:
    value: Fraction

    def __post_init__(self):
        v = parse_rational(self.value)
        if not 0 <= v < 1:
            raise InputError(f"Q/Z points are represented in [0, 1), got {v}")
        object.__setattr__(self, "value", v)

    def __str__(self) -> str:
        return format_rational(self.value)


def _qz_value(x) -> Fraction:
    if isinstance(x, QZPoint):
        return x.value
    return QZPoint(x).value


def r_qz(a, b, c) -> bool:
    """``b`` lies strictly inside the arc running upward (mod 1) from ``a`` to ``c``."""
    a, b, c = _qz_value(a), _qz_value(b), _qz_value(c)
    return a < b < c or b < c < a or c < a < b


def qz_midpoint(a, c) -> Fraction:
    """Midpoint of the upward arc from ``a`` to ``c``; for ``a == c`` the whole circle."""
    a, c = _qz_value(a), _qz_value(c)
    if c <= a:
        c += 1
    return ((a + c) / 2) % 1


def qz_points():
    """Every point of Q/Z once: by denominator, then numerator."""
    yield Fraction(0)
    for q in itertools.count(2):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                yield Fraction(p, q)


class _QZModel:
    def holds(self, a, b, c) -> bool:
        return r_qz(a, b, c)

    def __contains__(self, x) -> bool:
        try:
            _qz_value(x)
        except InputError:
            return False
        return True

    def __repr__(self):
        return "QZ"


QZ = _QZModel()


# --- doubling -----------------------------------------------------------------

def _doubled(C: CyclicOrder, tag: Callable[[Hashable, int], Hashable]) -> tuple[CyclicOrder, StructEmbedding]:
    if len(C) * 2 > limits.max_elements:
        raise ResourceError(f"doubling {len(C)} elements exceeds the element cap {limits.max_elements}")
    if C.is_valid:
        seq = [tag(c, i) for c in C.linearization() for i in (0, 1)]
        TC = from_linear(seq)
        TC = CyclicOrder._trusted([tag(c, i) for c in C.elements for i in (0, 1)], TC.triples)
    else:
        TC = CyclicOrder([tag(c, i) for c in C.elements for i in (0, 1)], _doubled_triples(C, tag))
    return TC, StructEmbedding(C, TC, tuple(tag(c, 0) for c in C.elements))


def _doubled_triples(C: CyclicOrder, tag) -> list:
    # direct rule, valid for any relation: distinct bases follow C, and
    # (x,0),(x,1),y holds for every y outside the pair
    pts = [(c, i) for c in C.elements for i in (0, 1)]
    out = []
    for (x, i), (y, j), (z, l) in itertools.permutations(pts, 3):
        if x != y and y != z and z != x:
            ok = C.holds(x, y, z)
        elif x == y:
            ok = (i, j) == (0, 1)
        elif y == z:
            ok = (j, l) == (0, 1)
        else:
            ok = (l, i) == (0, 1)
        if ok:
            out.append((tag(x, i), tag(y, j), tag(z, l)))
    return out


def _pair(c, i):
    return (c, i)


@lru_cache(maxsize=1024)
def _double_cached(elements: tuple, triples: frozenset) -> tuple[CyclicOrder, StructEmbedding]:
    return _doubled(CyclicOrder(elements, triples), _pair)


def double(C: CyclicOrder) -> tuple[CyclicOrder, StructEmbedding]:
    """``T(C) = C × {0, 1}`` with its inclusion ``c -> (c, 0)``."""
    return _double_cached(C.elements, C.triples)


def map_double(f: StructEmbedding) -> StructEmbedding:
    """``T(f) : (c, i) -> (f(c), i)``."""
    TS, _ = double(f.source)
    TT, _ = double(f.target)
    fd = f.as_dict()
    return StructEmbedding(TS, TT, tuple((fd[c], i) for c, i in TS.elements))


def _bit_tag(e, i):
    return (e[0], e[1] + str(i))


@dataclass(frozen=True)
class StageStructure:
    """``T^k(base)`` together with every earlier stage and the inclusions between them."""

    base: CyclicOrder
    stages: tuple
    inclusions: tuple

    @property
    def k(self) -> int:
        return len(self.stages) - 1

    @property
    def structure(self) -> CyclicOrder:
        return self.stages[-1]

    def holds(self, a, b, c) -> bool:
        return self.structure.holds(a, b, c)

    def __contains__(self, x) -> bool:
        return x in self.structure

    def raised(self) -> StageStructure:
        nxt, iota = _doubled(self.structure, _bit_tag)
        return StageStructure(self.base, self.stages + (nxt,), self.inclusions + (iota,))

    def lift(self, x, k: int | None = None):
        """Image of a stage element in stage ``k`` (default: the current one)."""
        k = self.k if k is None else k
        b, bits = x
        if len(bits) > k:
            raise InputError(f"{x!r} is born after stage {k}")
        return (b, bits + "0" * (k - len(bits)))


def _stage_zero(C: CyclicOrder) -> CyclicOrder:
    S = CyclicOrder._trusted([(c, "") for c in C.elements],
                             [((a, ""), (b, ""), (c, "")) for a, b, c in C.triples])
    S._valid = C._valid
    return S


def t_stage(C: CyclicOrder, k: int) -> StageStructure:
    if not isinstance(k, int) or k < 0:
        raise InputError(f"stage index must be >= 0, got {k!r}")
    if len(C) * 2 ** k > limits.max_elements:
        raise ResourceError(f"stage {k} of a {len(C)}-element base has {len(C) * 2 ** k} elements, "
                            f"over the cap {limits.max_elements}")
    st = StageStructure(C, (_stage_zero(C),), ())
    for _ in range(k):
        st = st.raised()
    return st


def t_map(f: StructEmbedding, k: int) -> StructEmbedding:
    """``T^k(f)`` between stage structures: ``(b, bits) -> (f(b), bits)``."""
    S = t_stage(f.source, k).structure
    T = t_stage(f.target, k).structure
    fd = f.as_dict()
    return StructEmbedding(S, T, tuple((fd[b], bits) for b, bits in S.elements))


# --- density ------------------------------------------------------------------

def density_defect(C) -> list[tuple]:
    """Ordered pairs ``x != z`` with nothing strictly between them (``R(x, ?, z)`` fails)."""
    if isinstance(C, StageStructure):
        C = C.structure
    filled = {(x, z) for x, _, z in C.triples}
    return [(x, z) for x in C.elements for z in C.elements if x != z and (x, z) not in filled]


def verify_density_step(C) -> VerificationReport:
    """Each defect ``(x, z)`` gains the witness ``(x, 1)`` after one doubling.

    For a plain structure the witness is checked in ``double(C)``; for a
    :class:`StageStructure` it is checked in the next stage.
    """
    if len(C.structure if isinstance(C, StageStructure) else C) == 0:
        raise InputError("density step needs a nonempty structure")
    if isinstance(C, StageStructure):
        nxt = C.raised().structure
        defects = density_defect(C)
        up0 = lambda e: _bit_tag(e, 0)
        up1 = lambda e: _bit_tag(e, 1)
        params = {"base_size": len(C.base), "stage": C.k}
    else:
        nxt, _ = double(C)
        defects = density_defect(C)
        up0 = lambda e: (e, 0)
        up1 = lambda e: (e, 1)
        params = {"size": len(C)}
    rep = VerificationReport("density-step", params)
    rep.check("witnessed", True)
    rows = []
    for x, z in defects:
        w = (up0(x), up1(x), up0(z))
        ok = nxt.holds(*w)
        rep.check("witnessed", ok)
        rows.append({"defect": [_enc(x), _enc(z)], "witness": _enc(up1(x)), "holds": ok})
    rep.details.update({"defects": len(defects), "witnesses": rows})
    return rep


# --- quantifier-free types ----------------------------------------------------

@dataclass(frozen=True)
class QfType:
    """Equality pattern plus the positions ``(i, j, k)`` where ``R`` holds."""

    length: int
    pattern: tuple
    relation: frozenset

    def induced(self) -> CyclicOrder:
        reps = sorted(set(self.pattern))
        return CyclicOrder(reps, [t for t in self.relation if all(i in reps for i in t)])


def qf_type(M, tup) -> QfType:
    tup = tuple(tup)
    for x in tup:
        if x not in M:
            raise InputError(f"{x!r} is not an element of the structure")
    first = {}
    pattern = tuple(first.setdefault(x, i) for i, x in enumerate(tup))
    rel = frozenset((i, j, k) for i, j, k in itertools.permutations(range(len(tup)), 3)
                    if M.holds(tup[i], tup[j], tup[k]))
    return QfType(len(tup), pattern, rel)


def same_type(t1: QfType, t2: QfType) -> bool:
    return t1 == t2


# --- back-and-forth -------------------------------------------------------------

@dataclass(frozen=True)
class QZSide:
    kind = "qz"

    def holds(self, a, b, c) -> bool:
        return r_qz(a, b, c)

    def normalize(self, x):
        return QZPoint(x).value

    def points(self):
        return qz_points()

    def to_json(self) -> dict:
        return {"kind": "qz"}

    def encode(self, x):
        return format_rational(x)

    def decode(self, s):
        return parse_rational(s)


@dataclass(frozen=True)
class StageSide:
    stage: StageStructure
    kind = "stage"

    def holds(self, a, b, c) -> bool:
        return self.stage.holds(a, b, c)

    def points(self):
        return iter(self.stage.structure.elements)

    def to_json(self) -> dict:
        return {"kind": "stage", "base": structure_to_json(self.stage.base), "stage": self.stage.k}

    def encode(self, x):
        return _enc(x)

    def decode(self, s):
        return _dec(s)


def side_from_spec(spec) -> QZSide | StageSide:
    """``"qz"``, ``"stage:N"`` (standard N-cycle base) or a structure JSON dict."""
    if isinstance(spec, (QZSide, StageSide)):
        return spec
    if isinstance(spec, CyclicOrder):
        return StageSide(t_stage(spec, 0))
    if isinstance(spec, dict):
        if spec.get("kind") == "qz":
            return QZSide()
        if spec.get("kind") == "stage":
            return StageSide(t_stage(structure_from_json(spec["base"]), spec.get("stage", 0)))
        return StageSide(t_stage(structure_from_json(spec), 0))
    if spec == "qz":
        return QZSide()
    if isinstance(spec, str) and spec.startswith("stage:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad side spec {spec!r}") from None
        return StageSide(t_stage(standard_cycle(n), 0))
    raise InputError(f"bad side spec {spec!r}; use 'qz' or 'stage:N'")


@dataclass(frozen=True)
class PartialIso:
    """A finite partial isomorphism between two sides, with its choice log.

    Stage elements in ``pairs`` are always named at the side's current
    stage; raising a stage re-embeds them.
    """

    left: QZSide | StageSide
    right: QZSide | StageSide
    pairs: tuple = ()
    log: tuple = field(default=())
    initial: tuple = field(default=None)

    @classmethod
    def empty(cls, left, right) -> PartialIso:
        left, right = side_from_spec(left), side_from_spec(right)
        return cls(left, right, (), (), (left.to_json(), right.to_json()))

    def side(self, name: str):
        return self.left if name == "left" else self.right

    def to_json(self) -> dict:
        L, R = self.left, self.right
        return {
            "initial": {"left": self.initial[0], "right": self.initial[1]},
            "left": L.to_json(),
            "right": R.to_json(),
            "pairs": [[L.encode(a), R.encode(b)] for a, b in self.pairs],
            "log": list(self.log),
        }


def check_partial_iso(p: PartialIso) -> VerificationReport:
    rep = VerificationReport("partial-iso", {"size": len(p.pairs)})
    lefts = [a for a, _ in p.pairs]
    rights = [b for _, b in p.pairs]
    rep.check("injective", len(set(lefts)) == len(lefts) and len(set(rights)) == len(rights))
    bad = None
    for i, j, k in itertools.permutations(range(len(p.pairs)), 3):
        if p.left.holds(lefts[i], lefts[j], lefts[k]) != p.right.holds(rights[i], rights[j], rights[k]):
            bad = [i, j, k]
            break
    rep.check("preserves-R", bad is None)
    if bad:
        rep.details["witness"] = bad
    if isinstance(p.left, StageSide):
        rep.check("left-in-stage", all(a in p.left.stage for a in lefts))
    if isinstance(p.right, StageSide):
        rep.check("right-in-stage", all(b in p.right.stage for b in rights))
    return rep


def _raise_side(p: PartialIso, name: str) -> PartialIso:
    side = p.side(name)
    if len(side.stage.structure) * 2 > limits.max_elements:
        raise ResourceError(f"raising the {name} stage would exceed the element cap {limits.max_elements}")
    new = StageSide(side.stage.raised())
    lift = lambda x: _bit_tag(x, 0)
    if name == "left":
        return replace(p, left=new, pairs=tuple((lift(a), b) for a, b in p.pairs))
    return replace(p, right=new, pairs=tuple((a, lift(b)) for a, b in p.pairs))


def _cut(side, matched: list, e):
    """Consecutive matched neighbours ``(lo, hi)`` of ``e`` (indices into ``matched``)."""
    for i, a in enumerate(matched):
        for j, c in enumerate(matched):
            if i != j and side.holds(a, e, c) and not any(side.holds(a, x, c) for x in matched):
                return i, j
    raise AssertionError("no cut found; the side is not a cyclic order")


def back_and_forth_extend(p: PartialIso, e, side: str = "left", *, allow_raise: bool = True) -> PartialIso:
    """Match ``e`` (an element of ``side``) with a point of the other side.

    The image goes into the cut corresponding to ``e``'s cut among the
    matched elements: the arc midpoint in Q/Z, the least element of the
    cut in a stage. An empty cut in a stage raises that stage (doubling)
    until a witness appears, unless ``allow_raise`` is false.
    """
    if side not in ("left", "right"):
        raise InputError(f"side must be 'left' or 'right', got {side!r}")
    other = "right" if side == "left" else "left"
    dom = p.side(side)

    if isinstance(dom, QZSide):
        e = dom.normalize(e)
    else:
        try:
            b, bits = e
        except (TypeError, ValueError):
            raise InputError(f"stage elements are (base_id, bits) pairs, got {e!r}") from None
        while len(bits) > dom.stage.k:
            if not allow_raise:
                raise NoWitnessError(f"{e!r} is not in the current {side} stage")
            p = _raise_side(p, side)
            dom = p.side(side)
        e = dom.stage.lift((b, bits))
        if e not in dom.stage:
            raise InputError(f"{e!r} is not an element of the {side} structure")

    idx = 0 if side == "left" else 1
    matched = [pr[idx] for pr in p.pairs]
    images = [pr[1 - idx] for pr in p.pairs]
    if e in matched:
        raise InputError(f"{e!r} is already matched")
    cut = _cut(dom, matched, e) if len(matched) >= 2 else None

    while True:
        cod = p.side(other)
        images = [pr[1 - idx] for pr in p.pairs]
        y = _choose(cod, images, cut)
        if y is not None:
            break
        if isinstance(cod, QZSide) or not allow_raise:
            raise NoWitnessError(f"no element of the {other} structure fills the required cut")
        p = _raise_side(p, other)

    pair = (e, y) if side == "left" else (y, e)
    entry = {
        "side": side,
        "element": dom.encode(e),
        "image": cod.encode(y),
        "stages": [_stage_index(p.left), _stage_index(p.right)],
    }
    return replace(p, pairs=p.pairs + (pair,), log=p.log + (entry,))


def _stage_index(side):
    return side.stage.k if isinstance(side, StageSide) else None


def _choose(cod, images: list, cut):
    if isinstance(cod, QZSide):
        if not images:
            return Fraction(0)
        if cut is None:
            return qz_midpoint(images[0], images[0])
        return qz_midpoint(images[cut[0]], images[cut[1]])
    for y in cod.points():
        if y in images:
            continue
        if cut is None or cod.holds(images[cut[0]], y, images[cut[1]]):
            return y
    return None


def next_unmatched(p: PartialIso, side: str):
    """Least unmatched point of ``side``; stages are raised when they are used up."""
    idx = 0 if side == "left" else 1
    while True:
        used = {pr[idx] for pr in p.pairs}
        dom = p.side(side)
        for x in dom.points():
            if x not in used:
                return p, x
        p = _raise_side(p, side)


def alternating_back_and_forth(left, right, steps: int) -> PartialIso:
    """``steps`` extensions, alternating forth (left) and back (right)."""
    if not isinstance(steps, int) or steps < 0:
        raise InputError(f"steps must be a nonnegative integer, got {steps!r}")
    p = PartialIso.empty(left, right)
    for t in range(steps):
        side = "left" if t % 2 == 0 else "right"
        p, e = next_unmatched(p, side)
        p = back_and_forth_extend(p, e, side)
    return p


def replay(session: dict) -> PartialIso:
    """Re-run a serialized session from its initial sides and choice log."""
    try:
        init = session["initial"]
        log = session["log"]
    except (KeyError, TypeError):
        raise InputError('session JSON needs "initial" and "log"') from None
    p = PartialIso.empty(init["left"], init["right"])
    for entry in log:
        side = entry["side"]
        p = back_and_forth_extend(p, p.side(side).decode(entry["element"]), side)
    return p


# --- T as a functor on a finite truncation --------------------------------------

@dataclass
class DoublingData:
    """``truncated_cyc(N)`` mapped into a category holding each ``[k]`` and ``T([k])``.

    ``inclusion`` and ``doubling`` are functors out of ``source``; ``iota``
    is the natural transformation ``inclusion => doubling``.
    """

    source: FiniteCategory
    target: FiniteCategory
    inclusion: FiniteFunctor
    doubling: FiniteFunctor
    iota: FiniteNatTrans


def doubling_functor(N: int) -> DoublingData:
    src = truncated_cyc(N)
    objs = {("C", k): standard_cycle(k + 1) for k in range(N)}
    objs.update({("T", k): double(standard_cycle(k + 1))[0] for k in range(N)})
    tgt = cyc_category(objs, name=f"cyc+T({N})")
    inc = FiniteFunctor(src, tgt, {k: ("C", k) for k in src.objects},
                        {m: tgt.morphism_of(("C", src.src[m]), ("C", src.dst[m]), src.labels[m])
                         for m in src.morphisms})
    dbl = FiniteFunctor(src, tgt, {k: ("T", k) for k in src.objects},
                        {m: tgt.morphism_of(("T", src.src[m]), ("T", src.dst[m]), map_double(src.labels[m]))
                         for m in src.morphisms})
    comps = {k: tgt.morphism_of(("C", k), ("T", k), double(objs[("C", k)])[1]) for k in src.objects}
    return DoublingData(src, tgt, inc, dbl, FiniteNatTrans(inc, dbl, comps))
