"""Real trigonometric polynomials in cosine/sine coefficient form."""

import json
from functools import cached_property
from typing import Sequence

import numpy as np
from pydantic import Field, model_validator

from chebquad.base import CqBaseModel
from chebquad.errors import ChebQuadError, PreconditionError
from chebquad.logging_chebquad import LOGGER
from chebquad.settings import SETTINGS


class DegreeCapError(ChebQuadError): ...


class TrigPoly(CqBaseModel):
    """Polynomial a_0 + sum_k a_k cos(k t) + b_k sin(k t).

    Construction trims trailing zero coefficient pairs so `degree` is always canonical.
    """

    cos_coeffs: tuple[float, ...] = Field(default=(0.0,), min_length=1, description="a_0..a_n")
    sin_coeffs: tuple[float, ...] = Field(default=(), description="b_1..b_n")

    @model_validator(mode="before")
    @classmethod
    def _canonicalize_(cls, data: dict) -> dict:
        if not isinstance(data, dict):
            return data
        cos_coeffs = [float(v) for v in data.get("cos_coeffs", (0.0,))]
        sin_coeffs = [float(v) for v in data.get("sin_coeffs", ())]
        size = max(len(cos_coeffs), len(sin_coeffs) + 1, 1)
        cos_coeffs += [0.0] * (size - len(cos_coeffs))
        sin_coeffs += [0.0] * (size - 1 - len(sin_coeffs))
        while len(cos_coeffs) > 1 and cos_coeffs[-1] == 0.0 and sin_coeffs[-1] == 0.0:
            cos_coeffs.pop()
            sin_coeffs.pop()
        return data | {"cos_coeffs": tuple(cos_coeffs), "sin_coeffs": tuple(sin_coeffs)}

    @classmethod
    def from_arrays(cls, cos_coeffs: Sequence[float] | np.ndarray, sin_coeffs: Sequence[float] | np.ndarray) -> "TrigPoly":
        return cls(cos_coeffs=tuple(np.asarray(cos_coeffs, dtype=float)), sin_coeffs=tuple(np.asarray(sin_coeffs, dtype=float)))

    @classmethod
    def constant(cls, value: float) -> "TrigPoly":
        return cls(cos_coeffs=(value,))

    @classmethod
    def from_exponential(cls, coeffs: np.ndarray) -> "TrigPoly":
        """Build from two-sided exponential coefficients c_{-n}..c_n of a real polynomial."""
        n = (coeffs.size - 1) // 2
        positive = coeffs[n:]
        cos_coeffs = np.concatenate([[positive[0].real], 2.0 * positive[1:].real])
        sin_coeffs = -2.0 * positive[1:].imag
        return cls.from_arrays(cos_coeffs, sin_coeffs)

    @property
    def degree(self) -> int:
        return len(self.cos_coeffs) - 1

    @cached_property
    def a(self) -> np.ndarray:
        return np.asarray(self.cos_coeffs, dtype=float)

    @cached_property
    def b(self) -> np.ndarray:
        return np.concatenate([[0.0], np.asarray(self.sin_coeffs, dtype=float)])

    @cached_property
    def _analytic_coeffs(self) -> np.ndarray:
        # p(t) = Re(sum_k (a_k - i b_k) e^{ikt})
        return self.a - 1j * self.b

    def exponential(self) -> np.ndarray:
        """Two-sided exponential coefficients c_{-n}..c_n."""
        positive = np.concatenate([[complex(self.a[0])], 0.5 * (self.a[1:] - 1j * self.b[1:])])
        return np.concatenate([np.conj(positive[:0:-1]), positive])

    def eval(self, theta: np.ndarray | float) -> np.ndarray:
        """Value at `theta` by Horner evaluation on the unit circle."""
        z = np.exp(1j * np.asarray(theta, dtype=float))
        return np.polynomial.polynomial.polyval(z, self._analytic_coeffs).real

    def __call__(self, theta: np.ndarray | float) -> np.ndarray:
        return self.eval(theta)

    def derivative(self) -> "TrigPoly":
        k = np.arange(self.degree + 1, dtype=float)
        return TrigPoly.from_arrays(k * self.b, (-k * self.a)[1:])

    def antiderivative_values(self, theta: np.ndarray) -> np.ndarray:
        """Values of a_0 t + sum_k (a_k sin(kt) - b_k cos(kt)) / k."""
        theta = np.asarray(theta, dtype=float)
        k = np.arange(1, self.degree + 1, dtype=float)
        if k.size == 0:
            return self.a[0] * theta
        angles = np.multiply.outer(theta, k)
        return self.a[0] * theta + (np.sin(angles) @ (self.a[1:] / k)) - (np.cos(angles) @ (self.b[1:] / k))

    def shift(self, x: float) -> "TrigPoly":
        """The polynomial t -> p(t - x)."""
        k = np.arange(self.degree + 1, dtype=float)
        cos_kx, sin_kx = np.cos(k * x), np.sin(k * x)
        a_new = self.a * cos_kx - self.b * sin_kx
        b_new = self.a * sin_kx + self.b * cos_kx
        return TrigPoly.from_arrays(a_new, b_new[1:])

    def __add__(self, other: "TrigPoly | float") -> "TrigPoly":
        other = other if isinstance(other, TrigPoly) else TrigPoly.constant(float(other))
        size = max(self.degree, other.degree) + 1
        a = np.zeros(size)
        b = np.zeros(size)
        a[: self.degree + 1] += self.a
        a[: other.degree + 1] += other.a
        b[: self.degree + 1] += self.b
        b[: other.degree + 1] += other.b
        return TrigPoly.from_arrays(a, b[1:])

    def __sub__(self, other: "TrigPoly | float") -> "TrigPoly":
        return self + (-1.0) * (other if isinstance(other, TrigPoly) else TrigPoly.constant(float(other)))

    def __rmul__(self, scalar: float) -> "TrigPoly":
        return TrigPoly.from_arrays(scalar * self.a, scalar * self.b[1:])

    def to_json(self) -> str:
        return json.dumps({"cos_coeffs": list(self.cos_coeffs), "sin_coeffs": list(self.sin_coeffs)})


def _check_cap(degree: int) -> None:
    if degree > SETTINGS.chebquad_degree_cap:
        LOGGER(exc_info=DegreeCapError(f"{degree=} exceeds {SETTINGS.chebquad_degree_cap=}"))


def multiply(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Exact product via convolution of exponential coefficients."""
    _check_cap(p.degree + q.degree)
    return TrigPoly.from_exponential(np.convolve(p.exponential(), q.exponential()))


def power(p: TrigPoly, k: int) -> TrigPoly:
    """p^k by square-and-multiply."""
    if k < 1:
        LOGGER(exc_info=PreconditionError(f"power exponent must be positive: {k=}"))
    _check_cap(k * p.degree)
    result: TrigPoly | None = None
    base = p
    while True:
        if k & 1:
            result = base if result is None else multiply(result, base)
        k >>= 1
        if k == 0:
            break
        base = multiply(base, base)
    assert result is not None
    return result


def fejer_kernel(m: int) -> TrigPoly:
    """Fejer kernel normalised to value 1 at t = 0, of degree 2m."""
    if m < 0:
        LOGGER(exc_info=PreconditionError(f"fejer index must be nonnegative: {m=}"))
    width = 2 * m + 1
    k = np.arange(1, 2 * m + 1, dtype=float)
    cos_coeffs = np.concatenate([[1.0 / width], 2.0 * (width - k) / width**2])
    return TrigPoly.from_arrays(cos_coeffs, np.zeros(2 * m))


def fejer_closed_form(m: int, theta: np.ndarray | float) -> np.ndarray:
    """(sin((2m+1)t/2) / ((2m+1) sin(t/2)))^2 with the removable point at t = 0 set to 1."""
    theta = np.asarray(theta, dtype=float)
    width = 2 * m + 1
    denominator = width * np.sin(theta / 2.0)
    small = np.abs(denominator) < 1e-300
    with np.errstate(divide="ignore", invalid="ignore"):
        value = (np.sin(width * theta / 2.0) / np.where(small, 1.0, denominator)) ** 2
    return np.where(small, 1.0, value)


def fejer_edge_value(m: int) -> float:
    """F_m at the first half-zero pi/(2m+1), equal to ((2m+1) sin(pi/(2(2m+1))))^-2."""
    width = 2 * m + 1
    return float((width * np.sin(np.pi / (2.0 * width))) ** -2)


class NonnegParam(CqBaseModel):
    """Complex coefficients c_0..c_n inducing the nonnegative polynomial |sum_k c_k e^{ikt}|^2."""

    real: tuple[float, ...] = Field(min_length=1)
    imag: tuple[float, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def _validate_lengths_(self) -> "NonnegParam":
        if len(self.real) != len(self.imag):
            raise ValueError("real and imaginary parts must have equal length")
        if not any(self.real) and not any(self.imag):
            raise ValueError("at least one coefficient must be non-zero")
        return self

    @classmethod
    def from_complex(cls, coeffs: np.ndarray) -> "NonnegParam":
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(real=tuple(coeffs.real), imag=tuple(coeffs.imag))

    @property
    def coeffs(self) -> np.ndarray:
        return np.asarray(self.real) + 1j * np.asarray(self.imag)


def realize_nonneg_coeffs(coeffs: np.ndarray) -> TrigPoly:
    """Autocorrelation d_m = sum_k c_{k+m} conj(c_k) gives |g|^2 = d_0 + 2 Re sum_m d_m e^{imt}."""
    coeffs = np.asarray(coeffs, dtype=complex)
    autocorr = np.correlate(coeffs, coeffs, mode="full")[coeffs.size - 1 :]
    return TrigPoly.from_arrays(np.concatenate([[autocorr[0].real], 2.0 * autocorr[1:].real]), -2.0 * autocorr[1:].imag)


def realize_nonneg(param: NonnegParam) -> TrigPoly:
    return realize_nonneg_coeffs(param.coeffs)
