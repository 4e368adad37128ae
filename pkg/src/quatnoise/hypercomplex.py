"""Cayley-Dickson algebras A_0..A_3: reals, complex numbers, quaternions, octonions.

Elements are flat coordinate vectors of length ``2**level``.  The doubling
rules operate on the two half-slices of a vector:

    (a, b) + (c, d) = (a + c, b + d)
    conj((a, b))    = (conj(a), -b)
    (a, b) * (c, d) = (a c - conj(d) b, d a + b conj(c))
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_LEVEL = 3


class DimensionError(ValueError):
    """Operands live in different algebras, or a vector has a bad length."""


class HypercomplexOverflow(ArithmeticError):
    """An arithmetic result left the finite doubles."""


@dataclass(frozen=True)
class Hypercomplex:
    level: int
    coords: np.ndarray

    def __post_init__(self):
        if not 0 <= self.level <= MAX_LEVEL:
            raise DimensionError(f"level must be in [0, {MAX_LEVEL}], got {self.level}")
        c = np.array(self.coords, dtype=np.float64).reshape(-1)
        if c.size != 2 ** self.level:
            raise DimensionError(f"level {self.level} needs {2 ** self.level} coords, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise HypercomplexOverflow("non-finite coordinate")
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_coords(cls, coords) -> "Hypercomplex":
        c = np.asarray(coords, dtype=np.float64).reshape(-1)
        level = int(round(math.log2(c.size))) if c.size else -1
        if level < 0 or 2 ** level != c.size:
            raise DimensionError(f"length {c.size} is not a power of two")
        return cls(level, c)

    @classmethod
    def zero(cls, level: int) -> "Hypercomplex":
        return cls(level, np.zeros(2 ** level))

    @classmethod
    def one(cls, level: int) -> "Hypercomplex":
        c = np.zeros(2 ** level)
        c[0] = 1.0
        return cls(level, c)

    @classmethod
    def basis(cls, level: int, index: int) -> "Hypercomplex":
        c = np.zeros(2 ** level)
        c[index] = 1.0
        return cls(level, c)

    def __add__(self, other: "Hypercomplex") -> "Hypercomplex":
        return cd_add(self, other)

    def __sub__(self, other: "Hypercomplex") -> "Hypercomplex":
        _check_levels(self, other)
        return Hypercomplex(self.level, self.coords - other.coords)

    def __neg__(self) -> "Hypercomplex":
        return Hypercomplex(self.level, -self.coords)

    def __mul__(self, other: "Hypercomplex") -> "Hypercomplex":
        return cd_mul(self, other)

    def __abs__(self) -> float:
        return cd_norm(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypercomplex):
            return NotImplemented
        return self.level == other.level and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash((self.level, self.coords.tobytes()))

    def conj(self) -> "Hypercomplex":
        return cd_conj(self)

    def __repr__(self) -> str:
        return f"Hypercomplex({self.level}, {self.coords.tolist()})"


def _check_levels(x: Hypercomplex, y: Hypercomplex) -> None:
    if x.level != y.level:
        raise DimensionError(f"level mismatch: {x.level} vs {y.level}")


def _conj(v: np.ndarray) -> np.ndarray:
    if v.size == 1:
        return v.copy()
    h = v.size // 2
    return np.concatenate([_conj(v[:h]), -v[h:]])


def _mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x.size == 1:
        return x * y
    h = x.size // 2
    a, b = x[:h], x[h:]
    c, d = y[:h], y[h:]
    return np.concatenate([_mul(a, c) - _mul(_conj(d), b), _mul(d, a) + _mul(b, _conj(c))])


def cd_add(x: Hypercomplex, y: Hypercomplex) -> Hypercomplex:
    _check_levels(x, y)
    return Hypercomplex(x.level, x.coords + y.coords)


def cd_conj(x: Hypercomplex) -> Hypercomplex:
    return Hypercomplex(x.level, _conj(x.coords))


def cd_mul(x: Hypercomplex, y: Hypercomplex) -> Hypercomplex:
    """Recursive Cayley-Dickson product; the reference multiply for every level."""
    _check_levels(x, y)
    with np.errstate(over="ignore", invalid="ignore"):
        out = _mul(x.coords, y.coords)
    if not np.all(np.isfinite(out)):
        raise HypercomplexOverflow("product overflowed")
    return Hypercomplex(x.level, out)


def cd_norm(x: Hypercomplex) -> float:
    return math.sqrt(float(np.dot(x.coords, x.coords)))


def quat_mul(p, q) -> tuple[float, float, float, float]:
    """Hamilton product of two 4-tuples, written out coordinatewise.

    Fast path for the escape-time loop; agrees with :func:`cd_mul` at level 2.
    """
    a, b, c, d = p
    a2, b2, c2, d2 = q
    return (
        a * a2 - b * b2 - c * c2 - d * d2,
        a * b2 + b * a2 + c * d2 - d * c2,
        a * c2 + c * a2 + d * b2 - b * d2,
        a * d2 + d * a2 + b * c2 - c * b2,
    )


def quaternion(a: float, b: float = 0.0, c: float = 0.0, d: float = 0.0) -> Hypercomplex:
    return Hypercomplex(2, np.array([a, b, c, d], dtype=np.float64))
