"""Descending-path classification of imaginary characters."""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Optional

from ._numeric import TAU, is_exact, scale
from .character import (
    BoundaryKind,
    ExceptionalKind,
    Generator,
    ImaginaryCharacter,
    MoveWord,
    apply,
    exceptional_kind,
    in_generalized_fricke_c11,
    kappa,
)
from .tree import (
    RegionLabel,
    RegionParity,
    Vertex,
    flip_fractions,
    fractions_along,
    step,
)


@dataclass(frozen=True)
class Budget:
    max_depth: int = 10_000
    max_abs: float = 1e300
    geodesic_walk_limit: int = 100_000
    # exact rationals whose denominators outgrow this many bits continue in floating point
    max_exact_bits: int = 4096

    def __post_init__(self):
        if min(self.max_depth, self.max_abs, self.geodesic_walk_limit, self.max_exact_bits) <= 0:
            raise ValueError("budget limits must be positive")

    def to_json(self) -> dict:
        return {"max_depth": self.max_depth, "max_abs": self.max_abs,
                "geodesic_walk_limit": self.geodesic_walk_limit, "max_exact_bits": self.max_exact_bits}


DEFAULT_BUDGET = Budget()


class Variant(enum.Enum):
    GENERALIZED_FRICKE_C11 = "GeneralizedFrickeC11"
    FRICKE_C02 = "FrickeC02"
    ATTRACTING_INDECISIVE_EDGE = "AttractingIndecisiveEdge"
    ELLIPTIC_PRIMITIVE = "EllipticPrimitive"
    EXCEPTIONAL = "Exceptional"
    UNDETERMINED = "Undetermined"


BOWDITCH_VARIANTS = frozenset({Variant.GENERALIZED_FRICKE_C11, Variant.FRICKE_C02,
                               Variant.ATTRACTING_INDECISIVE_EDGE})


@dataclass(frozen=True)
class EndEstimate:
    """Either the rational of the region the path spirals around, or a continued-fraction prefix."""

    fraction: Optional[tuple] = None
    cf_prefix: tuple = ()

    def to_json(self) -> dict:
        if self.fraction is not None:
            return {"fraction": f"{self.fraction[0]}/{self.fraction[1]}"}
        return {"cf_prefix": list(self.cf_prefix)}


class Classification:
    variant: ClassVar[Variant]
    depth: int

    @property
    def bowditch(self) -> bool:
        return self.variant in BOWDITCH_VARIANTS

    def to_json(self) -> dict:
        out = {"variant": self.variant.value}
        word = getattr(self, "word", None)
        if word is not None:
            out["word"] = str(word)
        out["depth"] = self.depth
        return out


@dataclass(frozen=True)
class GeneralizedFrickeC11(Classification):
    """``sink`` is the terminal vertex of the descent, or the input itself when it already lies in the space."""

    variant: ClassVar[Variant] = Variant.GENERALIZED_FRICKE_C11
    sink: ImaginaryCharacter
    boundary: BoundaryKind
    word: MoveWord
    depth: int = 0

    def to_json(self) -> dict:
        out = super().to_json()
        out["sink"] = self.sink.to_json()
        out["delta"] = self.boundary.to_json()["delta"]
        out["boundary"] = self.boundary.to_json()
        return out


@dataclass(frozen=True)
class FrickeC02(Classification):
    variant: ClassVar[Variant] = Variant.FRICKE_C02
    sink: ImaginaryCharacter
    word: MoveWord
    depth: int = 0

    def to_json(self) -> dict:
        out = super().to_json()
        out["sink"] = self.sink.to_json()
        return out


@dataclass(frozen=True)
class AttractingIndecisiveEdge(Classification):
    variant: ClassVar[Variant] = Variant.ATTRACTING_INDECISIVE_EDGE
    endpoints: tuple
    word: MoveWord
    depth: int = 0

    def to_json(self) -> dict:
        out = super().to_json()
        out["endpoints"] = [e.to_json() for e in self.endpoints]
        return out


@dataclass(frozen=True)
class EllipticPrimitive(Classification):
    variant: ClassVar[Variant] = Variant.ELLIPTIC_PRIMITIVE
    region_fraction: tuple
    trace: object
    word: MoveWord
    depth: int = 0

    def to_json(self) -> dict:
        out = super().to_json()
        out["region_fraction"] = f"{self.region_fraction[0]}/{self.region_fraction[1]}"
        out["trace"] = self.trace
        return out


@dataclass(frozen=True)
class Exceptional(Classification):
    variant: ClassVar[Variant] = Variant.EXCEPTIONAL
    kind: ExceptionalKind
    word: MoveWord = MoveWord()
    depth: int = 0

    def to_json(self) -> dict:
        out = super().to_json()
        out["kind"] = self.kind.value
        return out


@dataclass(frozen=True)
class Undetermined(Classification):
    variant: ClassVar[Variant] = Variant.UNDETERMINED
    depth_reached: int
    end_estimate: Optional[EndEstimate]
    word: MoveWord = field(default=MoveWord(), repr=False)

    @property
    def depth(self) -> int:
        return self.depth_reached

    def to_json(self) -> dict:
        out = super().to_json()
        out["end_estimate"] = None if self.end_estimate is None else self.end_estimate.to_json()
        return out


# ------------------------------------------------------------------ descent


def _outward(x, y, z, exact):
    """Flip values and signed decreases; a decrease of 0 marks an indecisive edge."""
    new = (y * z - x, x * z - y, -x * y - z)
    if exact:
        return new, [abs(o) - abs(n) for o, n in zip((x, y, z), new)]
    # |n| - |o| has the sign of (n + o)(n - o); both factors come without cancellation,
    # so only n close to o counts as a tie
    sums = (y * z, x * z, -x * y)
    diffs = (y * z - 2 * x, x * z - 2 * y, -x * y - 2 * z)
    dec = []
    for o, n, s, d in zip((x, y, z), new, sums, diffs):
        if abs(d) <= TAU * max(abs(o), abs(n)) or s == 0:
            dec.append(0.0)
        else:
            dec.append(-s * d / (abs(o) + abs(n)))
    return new, dec


def _best(dec):
    best, col = 0, 0
    for i, d in enumerate(dec):
        if d > best:
            best, col = d, i + 1
    return col


def descend_step(v: Vertex) -> Optional[tuple]:
    """Follow the strictly outward edge with the largest decrease (lowest color on ties)."""
    c = v.character
    _, dec = _outward(c.x, c.y, c.z, c.exact)
    col = _best(dec)
    if col == 0:
        return None
    return col, step(v, col)


def _snap(new, product, old, exact):
    """Round a flipped value to an exact zero when it is below the rounding noise of ``product - old``."""
    if not exact and abs(new) <= TAU * (abs(product) + abs(old)):
        return 0.0
    return new


def _decreases(old, new, exact) -> bool:
    if exact:
        return abs(new) < abs(old)
    return abs(old) - abs(new) > TAU * max(1.0, abs(old), abs(new))


def _walk(a, s, z, first_real: bool, limit: int, descending: bool, exact: bool = False):
    """Alternate the two flips around an imaginary region of trace ``s``.

    ``a`` is the other imaginary coordinate.  Returns ``(flips, a, z, found)``
    where ``found`` tells whether ``|z| < 2`` was reached.  With
    ``descending`` the walk stops before any flip that is not a strict decrease.
    """
    real_turn = first_real
    n = 0
    while n < limit:
        if real_turn:
            nz = -s * a - z
            if descending and not _decreases(z, nz, exact):
                break
            z = nz
            n += 1
            if abs(z) < 2:
                return n, a, z, True
            if not math.isfinite(z):
                break
        else:
            na = _snap(s * z - a, s * z, a, exact)
            if descending and not _decreases(a, na, exact):
                break
            a = na
            n += 1
        real_turn = not real_turn
    return n, a, z, False


def elliptic_walk(v, imaginary_slot: int, budget: Budget = DEFAULT_BUDGET, first_color: Optional[int] = None):
    """Walk around an imaginary region until a real neighbour has trace in ``(-2, 2)``.

    Returns ``(flips, trace)`` where ``flips`` counts Vieta moves from ``v``,
    or ``None`` when the walk limit is reached.  Without ``first_color`` the
    walk heads in the direction in which the real trace first shrinks.
    """
    c = v.character if isinstance(v, Vertex) else v
    if imaginary_slot not in (1, 2):
        raise ValueError("imaginary_slot must be 1 or 2")
    s = c.y if imaginary_slot == 2 else c.x
    a = c.x if imaginary_slot == 2 else c.y
    if s == 0:
        raise ValueError("walk needs a nonzero imaginary trace (the character is exceptional)")
    if kappa(c) >= 2:
        raise ValueError("elliptic walk needs k < 2")
    other = 3 - imaginary_slot
    if abs(c.z) < 2:
        return 0, c.z
    if first_color is None:
        z_real_first = -s * a - c.z
        z_imag_first = -s * (s * c.z - a) - c.z
        first_color = 3 if abs(z_real_first) <= abs(z_imag_first) else other
    if first_color not in (other, 3):
        raise ValueError(f"first_color must be {other} or 3")
    n, _, z, found = _walk(a, s, c.z, first_color == 3, budget.geodesic_walk_limit, False)
    return (n, z) if found else None


_STALL = 0.5


def _denominator_bits(v) -> int:
    return v.denominator.bit_length() if isinstance(v, Fraction) else 0


def _run(c: ImaginaryCharacter, budget: Budget):
    """Core descent on raw coordinates.

    Returns ``(tag, colors, (x, y, z), extra)`` with tag one of
    ``exceptional``, ``elliptic``, ``sink``, ``indecisive``, ``budget``.
    """
    exact = c.exact
    x, y, z = c.x, c.y, c.z
    k = kappa(c)
    colors = []
    walked = [False, False]
    walk_left = budget.geodesic_walk_limit
    walk_flips = 0
    elliptic_level = k < 2
    while True:
        if x == 0 or y == 0:
            both = x == 0 and y == 0
            return "exceptional", colors, (x, y, z), (
                ExceptionalKind.DIHEDRAL if both else ExceptionalKind.COORDINATE_ZERO)
        if elliptic_level and abs(z) < 2:
            return "elliptic", colors, (x, y, z), None
        if len(colors) - walk_flips >= budget.max_depth or max(abs(x), abs(y), abs(z)) > budget.max_abs:
            return "budget", colors, (x, y, z), None
        new, dec = _outward(x, y, z, exact)
        col = _best(dec)
        if col == 0:
            indecisive = tuple(i + 1 for i, d in enumerate(dec) if d == 0)
            return ("indecisive" if indecisive else "sink"), colors, (x, y, z), indecisive
        if elliptic_level and walk_left > 0:
            slot = None
            if col in (1, 3) and not walked[1] and abs(y) < _STALL:
                slot = 2
            elif col in (2, 3) and not walked[0] and abs(x) < _STALL:
                slot = 1
            if slot is not None:
                walked[slot - 1] = True
                s, a = (y, x) if slot == 2 else (x, y)
                n, a, z, _ = _walk(a, s, z, col == 3, walk_left, True, exact)
                if n:
                    other = 3 - slot
                    seq = (3, other) if col == 3 else (other, 3)
                    colors.extend(seq[i % 2] for i in range(n))
                    walk_left -= n
                    walk_flips += n
                    if slot == 2:
                        x = a
                    else:
                        y = a
                    continue
        if col == 1:
            x = _snap(new[0], y * z, x, exact)
            walked[0] = False
        elif col == 2:
            y = _snap(new[1], x * z, y, exact)
            walked[1] = False
        else:
            z = new[2]
        colors.append(col)
        if exact and max(_denominator_bits(x), _denominator_bits(y), _denominator_bits(z)) > budget.max_exact_bits:
            exact = False
            x, y, z = float(x), float(y), float(z)


def _word(colors) -> MoveWord:
    return MoveWord.from_colors(colors)


def _check(cond: bool, what: str, c: ImaginaryCharacter):
    if not cond:
        raise AssertionError(f"sink ({float(c.x):.17g}, {float(c.y):.17g}, {float(c.z):.17g}) {what}")


def classify(c: ImaginaryCharacter, budget: Budget = DEFAULT_BUDGET) -> Classification:
    """Classify ``c`` by descending the Bowditch flow from its base vertex."""
    if not isinstance(c, ImaginaryCharacter):
        c = ImaginaryCharacter(*c)
    k = kappa(c)
    exact = c.exact
    kind = exceptional_kind(c)
    if kind is None and not exact and abs(k - 2) <= TAU * scale(k, 2):
        kind = ExceptionalKind.REDUCIBLE
    if kind is not None:
        return Exceptional(kind)

    if k > 2:
        # already in the generalized Fricke space: it is its own representative
        boundary = in_generalized_fricke_c11(c)
        if boundary is not None:
            return GeneralizedFrickeC11(c, boundary, MoveWord(()), 0)

    tag, colors, (x, y, z), extra = _run(c, budget)
    exact = is_exact(x)
    word = _word(colors)
    depth = len(colors)
    if tag == "exceptional":
        return Exceptional(extra, word, depth)
    if tag == "elliptic":
        frac = fractions_along(colors)[2]
        return EllipticPrimitive(frac, z, word, depth)
    if tag == "budget":
        return Undetermined(depth, end_invariant_estimate(word), word)

    sink = ImaginaryCharacter(x, y, z)
    if tag == "indecisive":
        imag = [col for col in extra if col != 3]
        if k < 2 and not imag:
            tag = "sink"
        elif k > 2 and in_generalized_fricke_c11(sink) is not None:
            # a tie inside the space: the flow still ends in the generalized Fricke space
            tag = "sink"
        else:
            other = apply(sink, Generator.vieta(extra[0]))
            return AttractingIndecisiveEdge((sink, other), word, depth)

    if k > 2:
        delta = x * x - z * x * y + y * y + 2
        tol = 0 if exact else TAU * scale(x * x, y * y, z * x * y)
        _check(delta - 2 < tol and abs(z) > 2, "violates the C11 inequalities", sink)
        _check(z * z < k + 2 + tol, "lies outside 2 < |z| < sqrt(k+2)", sink)
        return GeneralizedFrickeC11(sink, BoundaryKind.from_delta(min(delta, 2 - tol) if not exact else delta),
                                    word, depth)
    # k < 2: a sink with |z| >= 2; flip signs so both boundary traces are <= -2
    if z > 0:
        sink = apply(sink, Generator.S1)
        word = word + MoveWord((Generator.S1,))
    tol = 0 if exact else TAU * scale(sink.z, sink.x * sink.y)
    _check(sink.z <= -2 + tol and sink.x * sink.y + sink.z >= 2 - tol,
           "violates the C02 inequalities", sink)
    return FrickeC02(sink, word, depth)


def terminal_vertex(c: ImaginaryCharacter, result: Classification) -> Vertex:
    """Vertex reached by the Vieta part of a classification word."""
    colors = result.word.colors() if getattr(result, "word", None) is not None else []
    ch = c
    for col in colors:
        ch = apply(ch, Generator.vieta(col))
    return Vertex(ch, fractions_along(colors), MoveWord.from_colors(colors))


# ------------------------------------------------------------ end estimate


def _continued_fraction(p: int, q: int) -> list:
    terms = []
    while q:
        a, r = divmod(p, q)
        terms.append(a)
        p, q = q, r
    return terms


def end_invariant_estimate(address: MoveWord, min_length: int = 1, tail: int = 64) -> Optional[EndEstimate]:
    """Guess the end of the tree that a long descending address is heading for.

    A tail alternating between two colors spirals around the region of the
    third color, whose rational is returned.  Otherwise the common
    continued-fraction prefix of the current Farey triangle is returned.
    """
    colors = address.colors() if isinstance(address, MoveWord) else list(address)
    if len(colors) < max(1, min_length):
        return None
    fracs = fractions_along(colors)
    last = colors[-tail:]
    run = 1
    if len(last) >= 2 and last[-1] != last[-2]:
        pair = {last[-1], last[-2]}
        run = 2
        while run < len(last) and last[-run - 1] in pair and last[-run - 1] != last[-run]:
            run += 1
    if run >= min(len(last), 8) and run >= 2:
        third = 6 - last[-1] - last[-2]
        return EndEstimate(fraction=fracs[third - 1])
    cfs = [_continued_fraction(p, q)[:-1] for p, q in fracs if q != 0]
    prefix = []
    if cfs:
        for terms in zip(*cfs):
            if all(t == terms[0] for t in terms):
                prefix.append(terms[0])
            else:
                break
    return EndEstimate(cf_prefix=tuple(prefix))


# --------------------------------------------------------------- BQ check


@dataclass(frozen=True)
class BqReport:
    satisfied: bool
    omega_size: int
    witness: Optional[RegionLabel] = None
    exhausted: bool = False
    regions: dict = field(default_factory=dict, repr=False, compare=False)

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            w = {"fraction": f"{self.witness.fraction[0]}/{self.witness.fraction[1]}",
                 "parity": self.witness.parity.value, "trace": self.witness.trace}
        return {"satisfied": self.satisfied, "omega_size": self.omega_size,
                "witness": w, "exhausted": self.exhausted}


def _is_witness(parity: RegionParity, t, exact: bool) -> bool:
    if parity is RegionParity.REAL:
        return abs(t) <= 2 if exact else abs(t) <= 2 + TAU * 2
    return t == 0 if exact else abs(t) <= TAU


def _neighbours_around(ch, fracs, slot, C, limit):
    """Yield ``(character, fractions)`` vertices along the boundary of the region in ``slot``.

    Walks both directions and stops once neighbouring traces grow past ``C``.
    """
    others = [c for c in (1, 2, 3) if c != slot]
    for first in others:
        cur, cf = ch, fracs
        col = first
        prev = None
        for _ in range(limit):
            cur = apply(cur, Generator.vieta(col))
            cf = flip_fractions(cf, col)
            t = abs(cur.as_tuple()[col - 1])
            yield cur, cf
            if prev is not None and t >= prev and t > C:
                break
            prev = t
            col = others[0] if col == others[1] else others[1]
        else:
            yield None, None


def bq_check(c: ImaginaryCharacter, C: float = 2, budget: Budget = DEFAULT_BUDGET) -> BqReport:
    """Search the regions with ``|trace| <= C`` for a violation of the BQ-conditions."""
    if C < 2:
        raise ValueError("bq_check needs C >= 2")
    if not isinstance(c, ImaginaryCharacter):
        c = ImaginaryCharacter(*c)
    result = classify(c, budget)
    start = terminal_vertex(c, result)
    exact = c.exact
    small = {}
    queue = deque()

    def consider(ch, fracs):
        for slot in (1, 2, 3):
            f = fracs[slot - 1]
            t = ch.as_tuple()[slot - 1]
            if f not in small and abs(t) <= C:
                small[f] = t
                parity = RegionParity.of(f)
                if _is_witness(parity, t, exact):
                    return RegionLabel(f, parity, t)
                queue.append((ch, fracs, slot))
        return None

    walk_budget = budget.geodesic_walk_limit
    witness = consider(start.character, start.fractions)
    while queue and witness is None:
        if len(small) > budget.max_depth:
            return BqReport(False, len(small), None, True, small)
        ch, fracs, slot = queue.popleft()
        for nch, nf in _neighbours_around(ch, fracs, slot, C, walk_budget):
            if nch is None:
                return BqReport(False, len(small), None, True, small)
            witness = consider(nch, nf)
            if witness is not None:
                break
    if witness is not None:
        return BqReport(False, len(small), witness, False, small)
    return BqReport(True, len(small), None, False, small)
