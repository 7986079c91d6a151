"""Paracycles ``(1/n)Z``, their shift-equivariant embeddings, and slice posets.

An equivariant embedding ``f : (1/m)Z -> (1/n)Z`` (``f(x + 1) = f(x) + 1``)
is determined by its fundamental window ``f(0), f(1/m), ..., f((m-1)/m)``,
which is all we store. Images are exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .category import FinitePoset
from .cyclic import StructEmbedding, enumerate_embeddings, standard_cycle
from .errors import InputError
from .report import VerificationReport


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, bool):
        raise InputError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational: {s!r}") from None


def format_rational(x: Fraction) -> str:
    """Lowest-terms ``"p/q"``, including ``"0/1"`` and ``"3/1"``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Paracycle:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InputError(f"paracycle needs n >= 1, got {self.n!r}")


@dataclass(frozen=True, order=True)
class ParaEmbedding:
    m: int
    n: int
    images: tuple

    def __post_init__(self):
        Paracycle(self.m), Paracycle(self.n)
        ims = tuple(parse_rational(y) for y in self.images)
        object.__setattr__(self, "images", ims)
        if len(ims) != self.m:
            raise InputError(f"expected {self.m} images, got {len(ims)}")
        if any((y * self.n).denominator != 1 for y in ims):
            raise InputError(f"images must lie in (1/{self.n})Z")
        if any(a >= b for a, b in zip(ims, ims[1:])) or ims[-1] >= ims[0] + 1:
            raise InputError("images must increase strictly within one period")

    def __call__(self, x) -> Fraction:
        """Evaluate at any ``x`` in ``(1/m)Z`` using equivariance."""
        x = parse_rational(x)
        if (x * self.m).denominator != 1:
            raise InputError(f"{x} is not in (1/{self.m})Z")
        q = math.floor(x)
        return self.images[int((x - q) * self.m)] + q

    def __str__(self) -> str:
        return f"({', '.join(str(y) for y in self.images)})"


@dataclass(frozen=True)
class ShiftOrbit:
    """A Z-orbit of equivariant embeddings, named by its representative with ``f(0)`` in ``[0, 1)``."""

    canonical: ParaEmbedding

    def __post_init__(self):
        if not 0 <= self.canonical.images[0] < 1:
            raise InputError("orbit representative must have f(0) in [0, 1)")

    def __contains__(self, f: ParaEmbedding) -> bool:
        return canonical_representative(f) == self.canonical


def identity_para(m: int) -> ParaEmbedding:
    return ParaEmbedding(m, m, tuple(Fraction(i, m) for i in range(m)))


def compose_para(f: ParaEmbedding, g: ParaEmbedding) -> ParaEmbedding:
    """``f ∘ g``."""
    if g.n != f.m:
        raise InputError("cannot compose: g lands in a different paracycle than f starts from")
    return ParaEmbedding(g.m, f.n, tuple(f(y) for y in g.images))


def shift_action(f: ParaEmbedding, k: int) -> ParaEmbedding:
    return ParaEmbedding(f.m, f.n, tuple(y + k for y in f.images))


def canonical_representative(f: ParaEmbedding) -> ParaEmbedding:
    return shift_action(f, -math.floor(f.images[0]))


def enumerate_canonical(m: int, n: int) -> list[ShiftOrbit]:
    """One representative per Z-orbit, in lexicographic order of images."""
    Paracycle(m), Paracycle(n)
    out = []
    for s in range(n):
        for rest in itertools.combinations(range(s + 1, s + n), m - 1):
            out.append(ShiftOrbit(ParaEmbedding(m, n, tuple(Fraction(p, n) for p in (s, *rest)))))
    return out


def project_to_cyclic(f: ParaEmbedding) -> StructEmbedding:
    """Reduce mod 1: residue ``i`` of ``[m-1]`` goes to ``n * (f(i/m) mod 1)`` in ``[n-1]``."""
    return StructEmbedding(standard_cycle(f.m), standard_cycle(f.n),
                           tuple(int((y % 1) * f.n) for y in f.images))


def verify_horb(m: int, n: int, shifts: range = range(-3, 4)) -> VerificationReport:
    """Reduction mod 1 is a bijection from Z-orbits onto embeddings ``[m-1] -> [n-1]``.

    Orbit-invariance and freeness are checked on the listed shifts of each
    representative; injectivity and surjectivity on the full orbit and
    embedding lists.
    """
    rep = VerificationReport("horb", {"m": m, "n": n, "shifts": [shifts.start, shifts.stop - 1]})
    orbits = enumerate_canonical(m, n)
    embeddings = enumerate_embeddings(standard_cycle(m), standard_cycle(n))
    projected = [project_to_cyclic(o.canonical) for o in orbits]

    rep.check("images-are-embeddings", all(p.is_embedding() for p in projected))
    for o, p in zip(orbits, projected):
        for k in shifts:
            g = shift_action(o.canonical, k)
            rep.check("orbit-invariance", project_to_cyclic(g) == p)
            rep.check("free-action", (g == o.canonical) == (k == 0))
            rep.check("shift-recovers-orbit", g in o)

    hit = {}
    collisions = []
    for o, p in zip(orbits, projected):
        if p in hit:
            collisions.append([str(hit[p].canonical), str(o.canonical)])
        hit.setdefault(p, o)
    missed = [list(e.images) for e in embeddings if e not in hit]
    rep.check("injective-on-orbits", not collisions)
    rep.check("surjective", not missed)
    rep.check("counts-agree", len(orbits) == len(embeddings))
    rep.details.update({
        "orbits": len(orbits),
        "embeddings": len(embeddings),
        "pairs": [[[format_rational(y) for y in o.canonical.images], list(p.images)]
                  for o, p in zip(orbits, projected)],
    })
    if collisions:
        rep.details["collisions"] = collisions
    if missed:
        rep.details["missed"] = missed
    return rep


# --- slice posets -------------------------------------------------------------

def _window(n: int, a, b, allow_empty: bool = False) -> list[Fraction]:
    Paracycle(n)
    a, b = parse_rational(a), parse_rational(b)
    if (a * n).denominator != 1 or (b * n).denominator != 1:
        raise InputError(f"window bounds {a}, {b} must lie in (1/{n})Z")
    if a > b or (a == b and not allow_empty):
        raise InputError(f"window needs a < b, got [{a}, {b})")
    return [Fraction(p, n) for p in range(int(a * n), int(b * n))]


def _slice_objects(n: int, a, b, k_max: int, allow_empty: bool = False) -> list[ParaEmbedding]:
    if not isinstance(k_max, int) or k_max < 1:
        raise InputError(f"k_max must be >= 1, got {k_max!r}")
    pts = _window(n, a, b, allow_empty)
    out = []
    for i, lo in enumerate(pts):
        later = [p for p in pts[i + 1:] if p < lo + 1]
        for k in range(1, k_max + 1):
            for rest in itertools.combinations(later, k - 1):
                out.append(ParaEmbedding(k, n, (lo, *rest)))
    out.sort(key=lambda f: (f.m, f.images))
    return out


def slice_leq(f1: ParaEmbedding, f2: ParaEmbedding) -> bool:
    """A morphism ``f1 -> f2`` exists iff the images of f1 sit inside those of f2 in the same order."""
    pos = {y: i for i, y in enumerate(f2.images)}
    if not all(y in pos for y in f1.images):
        return False
    idx = [pos[y] for y in f1.images]
    return all(i < j for i, j in zip(idx, idx[1:]))


def slice_morphisms(f1: ParaEmbedding, f2: ParaEmbedding) -> list[tuple]:
    """Every order embedding ``g`` of fundamental windows with ``f2 ∘ g = f1``, found by search."""
    return [g for g in itertools.combinations(range(f2.m), f1.m)
            if all(f2.images[j] == y for j, y in zip(g, f1.images))]


def _poset(objs: list[ParaEmbedding]) -> FinitePoset:
    leq = [(f, g) for f in objs for g in objs if slice_leq(f, g)]
    return FinitePoset(objs, leq, check=False)


def slice_poset(n: int, a, b, k_max: int) -> FinitePoset:
    """Equivariant embeddings ``(1/k)Z -> (1/n)Z``, ``k <= k_max``, with window images in ``[a, b)``."""
    return _poset(_slice_objects(n, a, b, k_max))


def verify_square(n: int, a, b, k_max: int) -> VerificationReport:
    """Set-level pushout/pullback identities for the slice decomposition of ``[a, b)``.

    ``[b-1, b-1/n) = [b-1, b) ∩ [a, b-1/n)`` and ``[a, b) = [b-1, b) ∪ [a, b-1/n)``,
    checked on objects, morphisms and composable pairs.
    """
    a, b = parse_rational(a), parse_rational(b)
    _window(n, a, b)
    if not a < b - 1:
        raise InputError(f"square needs a < b - 1, got a={a}, b={b}")
    step = Fraction(1, n)
    parts = {
        "top": (b - 1, b),
        "bottom": (a, b - step),
        "meet": (b - 1, b - step),
        "whole": (a, b),
    }
    objs = {name: set(_slice_objects(n, lo, hi, k_max, allow_empty=True)) for name, (lo, hi) in parts.items()}
    mors = {name: {(f, g) for f in o for g in o if f != g and slice_leq(f, g)} for name, o in objs.items()}
    pairs = {name: {(f, g, h) for (f, g) in m for (g2, h) in m if g == g2} for name, m in mors.items()}

    rep = VerificationReport("square", {"n": n, "a": format_rational(a), "b": format_rational(b), "k_max": k_max})
    for level, sets in (("objects", objs), ("morphisms", mors), ("composable-pairs", pairs)):
        inter = sets["top"] & sets["bottom"]
        union = sets["top"] | sets["bottom"]
        rep.check(f"{level}-pullback", inter == sets["meet"])
        rep.check(f"{level}-pushout", union == sets["whole"])
        if inter != sets["meet"] or union != sets["whole"]:
            rep.details.setdefault("discrepancies", []).append({
                "level": level,
                "meet-only": len(sets["meet"] ^ inter),
                "whole-only": len(sets["whole"] ^ union),
            })
    rep.details["sizes"] = {name: len(o) for name, o in objs.items()}
    rep.details["truncation"] = {"k_max": k_max}
    return rep


# --- JSON -----------------------------------------------------------------------

def para_to_json(f: ParaEmbedding) -> dict:
    return {"m": f.m, "n": f.n, "images": [format_rational(y) for y in f.images]}


def para_from_json(obj) -> ParaEmbedding:
    try:
        m, n, images = obj["m"], obj["n"], obj["images"]
    except (KeyError, TypeError):
        raise InputError('paraembedding JSON needs "m", "n" and "images"') from None
    if not all(isinstance(s, str) for s in images):
        raise InputError('images must be "p/q" strings')
    return ParaEmbedding(m, n, tuple(parse_rational(s) for s in images))
