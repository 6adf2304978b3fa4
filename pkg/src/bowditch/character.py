"""Imaginary characters ``(ix, iy, z)`` stored as real triples, and the group action on them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from ._numeric import Number, coerce, fmt, is_exact


class Generator(enum.Enum):
    V1 = "1"
    V2 = "2"
    V3 = "3"
    S1 = "a"
    S2 = "b"
    S3 = "c"
    P12 = "p"

    @property
    def symbol(self) -> str:
        return self.value

    @property
    def is_vieta(self) -> bool:
        return self in _VIETA

    @property
    def color(self) -> Optional[int]:
        """Tree color (1, 2, 3) of a Vieta generator, ``None`` otherwise."""
        return int(self.value) if self.is_vieta else None

    @classmethod
    def vieta(cls, color: int) -> "Generator":
        return _VIETA[color - 1]


_VIETA = (Generator.V1, Generator.V2, Generator.V3)
_BY_SYMBOL = {g.value: g for g in Generator}


@dataclass(frozen=True)
class MoveWord:
    """A word over the generators, applied left to right."""

    generators: tuple = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if not isinstance(g, Generator):
                raise TypeError(f"not a generator: {g!r}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def parse(cls, text: str) -> "MoveWord":
        try:
            return cls(tuple(_BY_SYMBOL[ch] for ch in text.strip()))
        except KeyError as exc:
            raise ValueError(f"unknown generator symbol {exc.args[0]!r} in word {text!r}") from None

    @classmethod
    def from_colors(cls, colors: Iterable[int]) -> "MoveWord":
        return cls(tuple(_VIETA[c - 1] for c in colors))

    @property
    def reduced(self) -> bool:
        gens = self.generators
        return not any(a is b and a.is_vieta for a, b in zip(gens, gens[1:]))

    def colors(self) -> list:
        return [g.color for g in self.generators if g.is_vieta]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __add__(self, other: "MoveWord") -> "MoveWord":
        return MoveWord(self.generators + tuple(other))

    def __str__(self):
        return "".join(g.value for g in self.generators)


@dataclass(frozen=True)
class ImaginaryCharacter:
    """Real coordinates of the character with traces ``(ix, iy, z)``.

    Coordinates are kept exact (``int``/``Fraction``) when all three are
    rational, otherwise they are converted to floats.  Non-finite values
    are rejected.
    """

    x: Number
    y: Number
    z: Number

    def __post_init__(self):
        x, y, z = coerce((self.x, self.y, self.z))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @property
    def exact(self) -> bool:
        return is_exact(self.x)

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.z)

    def as_float(self) -> "ImaginaryCharacter":
        return ImaginaryCharacter(float(self.x), float(self.y), float(self.z))

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def to_json(self) -> dict:
        return {k: _json_scalar(v) for k, v in zip("xyz", self.as_tuple())}

    @classmethod
    def from_json(cls, obj: dict) -> "ImaginaryCharacter":
        return cls(*(_parse_scalar(obj[k]) for k in "xyz"))

    def to_csv_row(self) -> str:
        return ",".join(fmt(v) for v in self.as_tuple())

    @classmethod
    def from_csv_row(cls, row: str) -> "ImaginaryCharacter":
        parts = [p.strip() for p in row.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three fields, got {len(parts)}")
        return cls(*(_parse_scalar(p) for p in parts))


def _json_scalar(v):
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return fmt(v)
    return v


def _parse_scalar(v):
    if isinstance(v, (int, float)):
        return v
    s = str(v)
    if "/" in s:
        return Fraction(s)
    try:
        return int(s)
    except ValueError:
        return float(s)


def kappa(c: ImaginaryCharacter) -> Number:
    x, y, z = c.x, c.y, c.z
    return -x * x - y * y + z * z + x * y * z - 2


def _made(x, y, z) -> ImaginaryCharacter:
    # arithmetic keeps exact values exact; only float results need the finiteness check
    if type(x) is float and not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
        raise ValueError(f"non-finite coordinate in ({x!r}, {y!r}, {z!r})")
    c = _new(ImaginaryCharacter)
    c.__dict__.update(x=x, y=y, z=z)
    return c


_new = object.__new__


_MOVES = {
    Generator.V1: lambda x, y, z: (y * z - x, y, z),
    Generator.V2: lambda x, y, z: (x, x * z - y, z),
    Generator.V3: lambda x, y, z: (x, y, -x * y - z),
    Generator.S1: lambda x, y, z: (x, -y, -z),
    Generator.S2: lambda x, y, z: (-x, y, -z),
    Generator.S3: lambda x, y, z: (-x, -y, z),
    Generator.P12: lambda x, y, z: (y, x, z),
}


def apply(c: ImaginaryCharacter, g: Generator) -> ImaginaryCharacter:
    try:
        move = _MOVES[g]
    except KeyError:
        raise TypeError(f"not a generator: {g!r}") from None
    d = c.__dict__
    return _made(*move(d["x"], d["y"], d["z"]))


_SWAP_COLOR = {Generator.V1: Generator.V2, Generator.V2: Generator.V1, Generator.V3: Generator.V3}


def normal_form(w: MoveWord) -> MoveWord:
    """An equivalent word: a reduced Vieta word followed by sign-changes and swaps.

    Sign-changes commute with the Vieta moves and the swap exchanges V1 and V2,
    so the non-Vieta letters can be pushed to the right.
    """
    vieta = []
    tail = []
    swapped = False
    for g in w:
        if g.is_vieta:
            if swapped:
                g = _SWAP_COLOR[g]
            if vieta and vieta[-1] is g:
                vieta.pop()
            else:
                vieta.append(g)
        else:
            tail.append(g)
            if g is Generator.P12:
                swapped = not swapped
    return MoveWord(tuple(vieta) + tuple(tail))


def apply_word(c: ImaginaryCharacter, w) -> ImaginaryCharacter:
    """Apply a word left to right.

    The word is first brought to :func:`normal_form`; this gives the same
    character but avoids walking up and back down the tree, which matters
    for float accuracy.
    """
    if isinstance(w, str):
        w = MoveWord.parse(w)
    for g in normal_form(w):
        c = apply(c, g)
    return c


def boundary_traces_c02(c: ImaginaryCharacter) -> tuple:
    return c.z, -c.x * c.y - c.z


def boundary_trace_c11(c: ImaginaryCharacter) -> Number:
    x, y, z = c.x, c.y, c.z
    return x * x - z * x * y + y * y + 2


def in_fricke_c02(c: ImaginaryCharacter) -> bool:
    return c.z <= -2 and c.x * c.y + c.z >= 2


class BoundaryShape(enum.Enum):
    GEODESIC = "Geodesic"
    CUSP = "Cusp"
    CONE = "Cone"


@dataclass(frozen=True)
class BoundaryKind:
    """Boundary of the hyperbolic one-holed Klein bottle with boundary trace ``delta``."""

    shape: BoundaryShape
    delta: Number
    length: Optional[float] = None
    angle: Optional[float] = None

    @classmethod
    def from_delta(cls, delta) -> "BoundaryKind":
        if delta < -2:
            return cls(BoundaryShape.GEODESIC, delta, length=2.0 * math.acosh(-float(delta) / 2.0))
        if delta == -2:
            return cls(BoundaryShape.CUSP, delta)
        if delta < 2:
            return cls(BoundaryShape.CONE, delta, angle=2.0 * math.acos(-float(delta) / 2.0))
        raise ValueError(f"boundary trace {delta} is not hyperbolic-admissible (needs delta < 2)")

    def to_json(self) -> dict:
        out = {"kind": self.shape.value, "delta": _json_scalar(self.delta)}
        if self.length is not None:
            out["length"] = self.length
        if self.angle is not None:
            out["angle"] = self.angle
        return out


def in_generalized_fricke_c11(c: ImaginaryCharacter) -> Optional[BoundaryKind]:
    x, y, z = c.x, c.y, c.z
    if abs(z) <= 2 or x * x - z * x * y + y * y >= 0:
        return None
    delta = boundary_trace_c11(c)
    if delta >= 2:
        # a member whose trace rounds up to 2 in floating point
        delta = math.nextafter(2.0, 0.0)
    return BoundaryKind.from_delta(delta)


class ExceptionalKind(enum.Enum):
    REDUCIBLE = "Reducible"
    COORDINATE_ZERO = "CoordinateZero"
    DIHEDRAL = "Dihedral"


def exceptional_kind(c: ImaginaryCharacter) -> Optional[ExceptionalKind]:
    if c.x == 0 and c.y == 0:
        return ExceptionalKind.DIHEDRAL
    if c.x == 0 or c.y == 0:
        return ExceptionalKind.COORDINATE_ZERO
    if kappa(c) == 2:
        return ExceptionalKind.REDUCIBLE
    return None


def nielsen_twist(c: ImaginaryCharacter) -> ImaginaryCharacter:
    return ImaginaryCharacter(c.x * c.z - c.y, c.x, c.z)
