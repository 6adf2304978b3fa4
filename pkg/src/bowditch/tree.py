"""The trivalent tree of superbases, its Bowditch flow and alternating geodesics."""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Optional

from ._numeric import Number, TAU, compare_abs, is_exact, is_zero, near, scale
from .character import Generator, ImaginaryCharacter, MoveWord, apply
from .errors import DegenerateError, DomainError

Fraction2 = tuple  # primitive integer pair (p, q)

BASE_FRACTIONS = ((1, 0), (0, 1), (1, 1))


class RegionParity(enum.Enum):
    REAL = "RealRegion"
    IMAGINARY_X = "ImaginaryRegionX"
    IMAGINARY_Y = "ImaginaryRegionY"

    @classmethod
    def of(cls, frac: Fraction2) -> "RegionParity":
        p, q = frac[0] & 1, frac[1] & 1
        if p and q:
            return cls.REAL
        if p:
            return cls.IMAGINARY_X
        if q:
            return cls.IMAGINARY_Y
        raise ValueError(f"{frac} is not primitive")


def canonical(p: int, q: int) -> Fraction2:
    if (p, q) == (0, 0):
        raise ValueError("(0, 0) is not a fraction")
    g = gcd(p, q)
    p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return (p, q)


def farey_flip(u: Fraction2, v: Fraction2, w: Fraction2) -> Fraction2:
    """Third vertex of the other Farey triangle on the edge ``u v``."""
    det = u[0] * v[1] - u[1] * v[0]
    a = (w[0] * v[1] - w[1] * v[0]) // det
    b = (u[0] * w[1] - u[1] * w[0]) // det
    return canonical(a * u[0] - b * v[0], a * u[1] - b * v[1])


def flip_fractions(fracs: tuple, color: int) -> tuple:
    i = color - 1
    others = [fracs[j] for j in range(3) if j != i]
    new = list(fracs)
    new[i] = farey_flip(others[0], others[1], fracs[i])
    return tuple(new)


def fractions_along(colors: Iterable[int], start: tuple = BASE_FRACTIONS) -> tuple:
    fracs = start
    for c in colors:
        fracs = flip_fractions(fracs, c)
    return fracs


@dataclass(frozen=True)
class RegionLabel:
    fraction: Fraction2
    parity: RegionParity
    trace: Number


@dataclass(frozen=True)
class Vertex:
    character: ImaginaryCharacter
    fractions: tuple = BASE_FRACTIONS
    address: MoveWord = MoveWord()

    @property
    def regions(self) -> tuple:
        return tuple(RegionLabel(f, RegionParity.of(f), t)
                     for f, t in zip(self.fractions, self.character.as_tuple()))

    @property
    def real_region(self) -> RegionLabel:
        return self.regions[2]


def base_vertex(c: ImaginaryCharacter) -> Vertex:
    return Vertex(c, BASE_FRACTIONS, MoveWord())


def step(v: Vertex, color: int) -> Vertex:
    g = Generator.vieta(color)
    return Vertex(apply(v.character, g), flip_fractions(v.fractions, color),
                  MoveWord(v.address.generators + (g,)))


def flipped_value(c: ImaginaryCharacter, color: int) -> Number:
    x, y, z = c.x, c.y, c.z
    if color == 1:
        return y * z - x
    if color == 2:
        return x * z - y
    if color == 3:
        return -x * y - z
    raise ValueError(f"color must be 1, 2 or 3, got {color!r}")


class EdgeDirection(enum.Enum):
    TOWARD_SELF = "TowardSelf"
    AWAY_FROM_SELF = "AwayFromSelf"


@dataclass(frozen=True)
class DirectedEdgeInfo:
    color: int
    decisive: bool
    direction: EdgeDirection
    flipped_value: Number


def edge_info(v, color: int) -> DirectedEdgeInfo:
    c = v.character if isinstance(v, Vertex) else v
    old = c.as_tuple()[color - 1]
    new = flipped_value(c, color)
    cmp = compare_abs(old, new)
    # indecisive edges are treated as pointing inward at both ends
    direction = EdgeDirection.AWAY_FROM_SELF if cmp > 0 else EdgeDirection.TOWARD_SELF
    return DirectedEdgeInfo(color, cmp != 0, direction, new)


class VertexType(enum.Enum):
    SOURCE = "Source"
    FORK = "Fork"
    MERGE = "Merge"
    SINK = "Sink"


def vertex_type(v) -> VertexType:
    inward = sum(edge_info(v, c).direction is EdgeDirection.TOWARD_SELF for c in (1, 2, 3))
    return (VertexType.SOURCE, VertexType.FORK, VertexType.MERGE, VertexType.SINK)[inward]


def is_orthogonal_indecisive(v, color: int) -> bool:
    c = v.character if isinstance(v, Vertex) else v
    return near(c.as_tuple()[color - 1], flipped_value(c, color))


@dataclass(frozen=True)
class ForkViolation:
    character: ImaginaryCharacter
    outward_colors: tuple
    third_trace: Number


def fork_lemma_check(v) -> Optional[ForkViolation]:
    """Report a vertex with two edges directed away whose third trace exceeds 2 in size."""
    c = v.character if isinstance(v, Vertex) else v
    coords = c.as_tuple()
    away = [col for col in (1, 2, 3) if compare_abs(coords[col - 1], flipped_value(c, col)) >= 0]
    for i in range(len(away)):
        for j in range(i + 1, len(away)):
            a, b = away[i], away[j]
            third = 6 - a - b
            t = coords[third - 1]
            limit = 2 if is_exact(t) else 2 + TAU * scale(*coords)
            if abs(t) <= limit:
                continue
            if is_zero(coords[a - 1], *coords) and is_zero(coords[b - 1], *coords):
                continue
            return ForkViolation(c, (a, b), t)
    return None


def bfs(v: Vertex, depth: int) -> Iterator[Vertex]:
    """All vertices within ``depth`` edges of ``v``, nearest first."""
    queue = deque([(v, 0, 0)])
    while queue:
        w, d, came = queue.popleft()
        yield w
        if d < depth:
            for col in (1, 2, 3):
                if col != came:
                    queue.append((step(w, col), d + 1, col))


# ---------------------------------------------------------------- geodesics


def _geodesic_colors(region_slot: int) -> tuple:
    return tuple(c for c in (1, 2, 3) if c != region_slot)


def alternating_geodesic(v, region_slot: int, n_range) -> list:
    """Traces of the regions abutting a region along its alternating geodesic.

    Index 0 and 1 are the two other regions at ``v``.  Positive indices
    step by alternately flipping the lower and the higher of the other
    two colors, starting with the lower; negative indices go the other way.
    For the real region (slot 3) traces follow ``y[n+1] = z y[n] - y[n-1]``.
    Imaginary slots are walked numerically through the Vieta moves.
    """
    c = v.character if isinstance(v, Vertex) else v
    ns = list(n_range)
    if not ns:
        return []
    lo, hi = min(ns + [0, 1]), max(ns + [0, 1])
    coords = c.as_tuple()
    if region_slot == 3:
        z = coords[2]
        seq = {0: coords[0], 1: coords[1]}
        for n in range(1, hi):
            seq[n + 1] = z * seq[n] - seq[n - 1]
        for n in range(0, lo, -1):
            seq[n - 1] = z * seq[n] - seq[n + 1]
        return [seq[n] for n in ns]
    if region_slot not in (1, 2):
        raise ValueError("region_slot must be 1, 2 or 3")
    a, b = _geodesic_colors(region_slot)
    seq = {0: coords[a - 1], 1: coords[b - 1]}
    # forward: flip a, then b, ...; the slot carrying index n alternates
    cur = c
    for n in range(1, hi):
        col = a if n % 2 == 1 else b
        cur = apply(cur, Generator.vieta(col))
        seq[n + 1] = cur.as_tuple()[col - 1]
    cur = c
    for n in range(0, lo, -1):
        col = b if n % 2 == 0 else a
        cur = apply(cur, Generator.vieta(col))
        seq[n - 1] = cur.as_tuple()[col - 1]
    return [seq[n] for n in ns]


@dataclass(frozen=True)
class GeodesicFit:
    a: float
    b: float
    lam: float


def geodesic_closed_form(z, y0, y1) -> GeodesicFit:
    """Coefficients with ``y[n] = a lam**n + b lam**-n`` for ``|z| != 2``.

    For ``|z| < 2`` the eigenvalue is complex and ``a``, ``b`` are complex conjugates.
    """
    if z == 2 or z == -2:
        raise DegenerateError("closed form degenerates at |z| = 2; use parabolic_geodesic")
    zf = float(z)
    if abs(zf) > 2:
        lam = (zf + math.copysign(math.sqrt(zf * zf - 4), zf)) / 2
    else:
        lam = complex(zf / 2, math.sqrt(4 - zf * zf) / 2)
    inv = 1 / lam
    a = (float(y1) - inv * float(y0)) / (lam - inv)
    b = (lam * float(y0) - float(y1)) / (lam - inv)
    return GeodesicFit(a, b, lam)


def geodesic_value(fit: GeodesicFit, n: int):
    return fit.a * fit.lam ** n + fit.b * fit.lam ** (-n)


def parabolic_geodesic(z, y0, y1, n: int):
    """Exact traces around a region of trace ``z = +-2``."""
    if z == 2:
        return y0 + n * (y1 - y0)
    if z == -2:
        sign = -1 if n % 2 else 1
        return sign * (y0 - n * (y0 + y1))
    raise DegenerateError(f"parabolic formulas need z = +-2, got {z}")


def ab_product(z, k):
    if z == 2 or z == -2:
        raise DomainError("ab_product is undefined at z = +-2")
    return (k + 2 - z * z) / (z * z - 4)


class GeodesicRegime(enum.Enum):
    ELLIPTIC = "Elliptic"
    PARABOLIC_BOUNDARY = "ParabolicBoundary"
    SINK_ON_BOUNDARY = "SinkOnBoundary"
    ALL_MERGES_ONE_DIRECTION = "AllMergesOneDirection"
    ONE_OUTWARD_MERGE = "OneOutwardMerge"
    SINK_OR_MERGE_BY_COMPARISON = "SinkOrMergeByComparison"


def classify_real_region_geodesic(z, k) -> GeodesicRegime:
    az = abs(z)
    if near(az, 2):
        return GeodesicRegime.PARABOLIC_BOUNDARY
    if az < 2:
        return GeodesicRegime.ELLIPTIC
    if k < 2:
        return GeodesicRegime.SINK_OR_MERGE_BY_COMPARISON
    # compare z^2 with k + 2 to stay exact on rational input
    sq, ref = z * z, k + 2
    if near(sq, ref):
        return GeodesicRegime.ALL_MERGES_ONE_DIRECTION
    return GeodesicRegime.SINK_ON_BOUNDARY if sq < ref else GeodesicRegime.ONE_OUTWARD_MERGE
