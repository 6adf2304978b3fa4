"""Level surfaces of the invariant: sheets over the xy-plane, topology, area form and fields."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ._numeric import Number, is_exact, sqrt
from .character import ImaginaryCharacter
from .errors import DomainError


class SheetSelector(enum.Enum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, text) -> "SheetSelector":
        if isinstance(text, SheetSelector):
            return text
        key = str(text).strip().lower()
        if key in ("plus", "+", "1", "+1"):
            return cls.PLUS
        if key in ("minus", "-", "-1"):
            return cls.MINUS
        raise ValueError(f"unknown sheet {text!r}; expected 'plus' or 'minus'")

    def __str__(self):
        return self.name.lower()


class LevelTopology(enum.Enum):
    TWO_SHEETS = "TwoSheets"
    CONE_SINGULAR = "ConeSingular"
    CYLINDER = "Cylinder"


@dataclass(frozen=True)
class Window:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("window needs x_min < x_max and y_min < y_max")
        if int(self.nx) < 1 or int(self.ny) < 1:
            raise ValueError("window resolution must be at least 1x1")

    @classmethod
    def parse(cls, text: str, res: int, res_y: Optional[int] = None) -> "Window":
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"window {text!r} must look like xmin:xmax:ymin:ymax")
        a, b, c, d = (float(p) for p in parts)
        return cls(a, b, c, d, int(res), int(res if res_y is None else res_y))

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.ny

    def xs(self) -> np.ndarray:
        """Pixel-centre x coordinates, left to right."""
        return self.x_min + (np.arange(self.nx) + 0.5) * self.dx

    def ys(self) -> np.ndarray:
        """Pixel-centre y coordinates, top row first."""
        return self.y_max - (np.arange(self.ny) + 0.5) * self.dy

    def with_resolution(self, nx: int, ny: Optional[int] = None) -> "Window":
        return Window(self.x_min, self.x_max, self.y_min, self.y_max, nx, nx if ny is None else ny)

    def to_json(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "y_min": self.y_min,
                "y_max": self.y_max, "nx": self.nx, "ny": self.ny}


def discriminant(k, x, y):
    return (x * x + 4) * (y * y + 4) + 4 * (k - 2)


def z_sheet(k, x, y, s: SheetSelector) -> Optional[Number]:
    """Height of sheet ``s`` of the level set ``k`` above ``(x, y)``, or ``None`` off the projection."""
    s = SheetSelector.parse(s)
    d = discriminant(k, x, y)
    if d < 0:
        return None
    root = sqrt(d)
    if is_exact(root) and is_exact(x) and is_exact(y):
        z = Fraction(-x * y + s.value * root) / 2
        return z.numerator if z.denominator == 1 else z
    xy = float(x) * float(y)
    root = float(root)
    # pick the branch without cancellation; the other via the product of roots
    if s.value * xy > 0:
        return s.value * 2.0 * (float(x) ** 2 + float(y) ** 2 + float(k) + 2.0) / (abs(xy) + root)
    return (-xy + s.value * root) / 2.0


def z_sheet_array(k: float, x: np.ndarray, y: np.ndarray, s: SheetSelector) -> np.ndarray:
    """Vectorised ``z_sheet``; NaN where the discriminant is negative."""
    s = SheetSelector.parse(s)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = discriminant(k, x, y)
    with np.errstate(invalid="ignore", divide="ignore"):
        root = np.sqrt(d)
        xy = x * y
        stable = s.value * 2.0 * (x * x + y * y + k + 2.0) / (np.abs(xy) + root)
        plain = (-xy + s.value * root) / 2.0
        z = np.where(s.value * xy > 0, stable, plain)
    return np.where(d < 0, np.nan, z)


def projection_has_preimage(k, x, y) -> bool:
    return discriminant(k, x, y) >= 0


def q_z(z, x, y):
    return x * x - z * x * y + y * y


def grad_kappa(c: ImaginaryCharacter) -> tuple:
    x, y, z = c.x, c.y, c.z
    return (-2 * x + y * z, -2 * y + z * x, 2 * z + x * y)


def level_topology(k) -> LevelTopology:
    if k > -2:
        return LevelTopology.TWO_SHEETS
    if k == -2:
        return LevelTopology.CONE_SINGULAR
    return LevelTopology.CYLINDER


def area_density(k, x, y) -> float:
    d = discriminant(k, x, y)
    if d <= 0:
        raise DomainError(f"area density undefined where the discriminant is {d} <= 0")
    return 1.0 / math.sqrt(d)


def _check_window_covered(k, window: Window) -> None:
    # the discriminant grows with |x| and |y|, so its minimum sits at the point nearest the axes
    x0 = min(max(0.0, window.x_min), window.x_max)
    y0 = min(max(0.0, window.y_min), window.y_max)
    if discriminant(float(k), x0, y0) <= 0:
        raise DomainError(f"window point ({x0}, {y0}) has no preimage on the level set k={k}")


def density_grid(k: float, window: Window) -> np.ndarray:
    xs, ys = np.meshgrid(window.xs(), window.ys())
    d = discriminant(float(k), xs, ys)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(d > 0, 1.0 / np.sqrt(np.where(d > 0, d, 1.0)), 0.0)


def integrate_mask(k: float, window: Window, mask: np.ndarray) -> float:
    """Midpoint sum of the area density over the pixels selected by ``mask``."""
    dens = density_grid(k, window)
    # numpy's pairwise summation over a fixed layout keeps the result order-independent of callers
    return float(np.sum(np.where(mask, dens, 0.0))) * window.dx * window.dy


def measure(k, s: SheetSelector, window: Window, predicate: Callable, vectorized: bool = False) -> float:
    """Area of ``{predicate}`` on sheet ``s`` over ``window`` for the invariant area form.

    ``predicate`` receives an :class:`ImaginaryCharacter`, or with
    ``vectorized=True`` three float arrays ``(x, y, z)`` and returns a
    boolean array.
    """
    s = SheetSelector.parse(s)
    _check_window_covered(k, window)
    xs, ys = np.meshgrid(window.xs(), window.ys())
    zs = z_sheet_array(float(k), xs, ys, s)
    if vectorized:
        mask = np.asarray(predicate(xs, ys, zs), dtype=bool)
        mask = np.broadcast_to(mask, xs.shape)
    else:
        mask = np.zeros(xs.shape, dtype=bool)
        for idx in np.ndindex(xs.shape):
            mask[idx] = bool(predicate(ImaginaryCharacter(float(xs[idx]), float(ys[idx]), float(zs[idx]))))
    return integrate_mask(float(k), window, mask)


def poisson_bivector(c: ImaginaryCharacter) -> tuple:
    """Coefficients of dx^dy, dy^dz, dz^dx."""
    x, y, z = c.x, c.y, c.z
    return (2 * z + x * y, -2 * x + y * z, -2 * y + z * x)


def ham_field(c: ImaginaryCharacter, which: str) -> tuple:
    """Hamiltonian vector field of a coordinate function (or of the flipped ``z``).

    Uses the orientation fixed by the area form, under which
    ``Ham(z) = (2y - xz, yz - 2x, 0)``.
    """
    x, y, z = c.x, c.y, c.z
    if which == "x":
        return (0 * x, -(2 * z + x * y), x * z - 2 * y)
    if which == "y":
        return (2 * z + x * y, 0 * y, 2 * x - y * z)
    if which == "z":
        return (2 * y - x * z, y * z - 2 * x, 0 * z)
    if which == "z_prime":
        # z' = -xy - z, so Ham(z') = -y Ham(x) - x Ham(y) - Ham(z)
        return (-(z * x + (x * x + 2) * y), z * y + (y * y + 2) * x, 2 * (y * y - x * x))
    raise ValueError(f"unknown Hamiltonian {which!r}; expected x, y, z or z_prime")


def slopes(k) -> tuple:
    if k < 2:
        raise DomainError(f"slopes need k >= 2, got {k}")
    a = math.sqrt(float(k) + 2)
    b = math.sqrt(float(k) - 2)
    # (a - b) / 2 rewritten to avoid cancellation for large k
    return (a + b) / 2, 2 / (a + b)
