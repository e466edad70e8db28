"""Random real trigonometric polynomials with a prescribed support.

Basis convention: split the support by the lexicographic sign. For
``lambda`` lexicographically positive, the coefficient at ``lambda``
multiplies ``sqrt(2) cos<theta, lambda>`` and the coefficient at
``-lambda`` multiplies ``sqrt(2) sin<theta, lambda>``; the coefficient at 0
multiplies 1. These functions are orthonormal in ``L^2`` of the normalised
Haar measure on the torus.

Coefficients are drawn i.i.d. standard normal. A Gaussian vector is a
uniform point on the unit sphere times an independent radius, and zero sets
do not change under positive scaling, so root statistics agree with those of
the uniform-on-sphere model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .lattice import SupportSet, parse_support

__all__ = ["TrigPolynomial", "sample", "evaluate", "gradient", "to_laurent"]

SQRT2 = sqrt(2.0)


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """``sum_lambda c_lambda tau_lambda`` over a support; ``coeffs`` follow ``support.points``."""

    support: SupportSet
    coeffs: np.ndarray
    # derived: lexicographically positive frequencies and their cos/sin weights
    freqs: np.ndarray = field(init=False, repr=False)
    cos_coeffs: np.ndarray = field(init=False, repr=False)
    sin_coeffs: np.ndarray = field(init=False, repr=False)
    constant: float = field(init=False, repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).ravel()
        if c.size != self.support.size:
            raise ValidationError(f"expected {self.support.size} coefficients, got {c.size}")
        object.__setattr__(self, "coeffs", c)
        index = {p: i for i, p in enumerate(self.support.points)}
        pos = self.support.positive_half()
        freqs = np.array(pos, dtype=float).reshape(-1, self.support.dim)
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "cos_coeffs", np.array([c[index[p]] for p in pos]))
        object.__setattr__(self, "sin_coeffs", np.array([c[index[tuple(-x for x in p)]] for p in pos]))
        zero = (0,) * self.support.dim
        object.__setattr__(self, "constant", float(c[index[zero]]) if zero in index else 0.0)

    @property
    def dim(self) -> int:
        return self.support.dim

    def coefficient(self, point) -> float:
        return float(self.coeffs[self.support.points.index(tuple(point))])

    def __call__(self, theta):
        return evaluate(self, theta)

    def scaled(self, factor: float) -> "TrigPolynomial":
        return TrigPolynomial(self.support, self.coeffs * factor)

    @classmethod
    def basis(cls, support: SupportSet, point) -> "TrigPolynomial":
        """The single basis function ``tau_point``."""
        c = np.zeros(support.size)
        c[support.points.index(tuple(point))] = 1.0
        return cls(support, c)

    def to_json(self) -> dict:
        return {
            "support": self.support.to_json(),
            "coeffs": {json.dumps(list(p), separators=(",", ":")): float(v) for p, v in zip(self.support.points, self.coeffs)},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TrigPolynomial":
        support = parse_support(obj["support"])
        raw = {tuple(json.loads(k)): float(v) for k, v in obj["coeffs"].items()}
        missing = [p for p in support.points if p not in raw]
        if missing or len(raw) != support.size:
            raise ValidationError(f"coefficient keys do not match the support (missing {missing[:3]})")
        return cls(support, np.array([raw[p] for p in support.points]))


def sample(support: SupportSet, rng: np.random.Generator) -> TrigPolynomial:
    """Draw a polynomial with i.i.d. standard normal coefficients."""
    return TrigPolynomial(support, rng.standard_normal(support.size))


def _phases(f: TrigPolynomial, theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.ndim == 0:
        theta = theta.reshape(1)
    if theta.shape[-1] != f.dim:
        if f.dim == 1:
            theta = theta[..., None]
        else:
            raise DimensionMismatch(f"angle vector has dimension {theta.shape[-1]}, polynomial {f.dim}")
    return theta @ f.freqs.T


def evaluate(f: TrigPolynomial, theta):
    """``f(theta)``; ``theta`` has shape ``(..., n)`` (a bare array is allowed for n = 1)."""
    ph = _phases(f, theta)
    val = f.constant + SQRT2 * (np.cos(ph) @ f.cos_coeffs + np.sin(ph) @ f.sin_coeffs)
    return float(val) if np.ndim(val) == 0 else val


def gradient(f: TrigPolynomial, theta):
    """Analytic partial derivatives, shape ``(..., n)``."""
    ph = _phases(f, theta)
    w = SQRT2 * (-np.sin(ph) * f.cos_coeffs + np.cos(ph) * f.sin_coeffs)
    return w @ f.freqs


def to_laurent(f: TrigPolynomial) -> dict:
    """Complex coefficients ``a_lambda`` with ``f(theta) = sum a_lambda e^{i<lambda, theta>}``.

    ``a_{-lambda}`` is the conjugate of ``a_lambda``.
    """
    out = {}
    for p, c, s in zip(f.support.positive_half(), f.cos_coeffs, f.sin_coeffs):
        a = complex(c, -s) / SQRT2
        out[p] = a
        out[tuple(-x for x in p)] = a.conjugate()
    if f.support.has_origin:
        out[(0,) * f.dim] = complex(f.constant)
    return out
