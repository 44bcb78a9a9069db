"""Thin wrapper around adaptive 1-D quadrature with explicit settings."""

from __future__ import annotations

from dataclasses import dataclass

from scipy.integrate import quad


class QuadratureError(RuntimeError):
    """Quadrature did not reach the requested tolerance.

    The best available estimate is attached as .estimate.
    """

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and subdivision budget for all integrals.

    nlos_truncation_radius selects how the improper far-field integral over
    [R_B, inf) is evaluated: None maps it onto a finite interval via the
    substitution u = 1/t; a finite radius integrates [R_B, radius] directly
    and keeps doubling the radius until the increment drops below abs_tol
    (useful as a cross-check of the transform).
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    nlos_truncation_radius: float | None = None
    max_subdivisions: int = 200

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")
        if self.nlos_truncation_radius is not None and self.nlos_truncation_radius <= 0.0:
            raise ValueError("nlos_truncation_radius must be positive when given")


DEFAULT_SETTINGS = QuadratureSettings()


def integrate(f, a: float, b: float, settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Definite integral of f over [a, b] under the given settings.

    Raises QuadratureError carrying the partial estimate if the adaptive
    routine reports non-convergence.
    """
    if a == b:
        return 0.0
    result = quad(
        f, a, b,
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=settings.max_subdivisions,
        full_output=1,
    )
    if len(result) > 3:  # (value, abserr, infodict, message) on failure
        raise QuadratureError(result[3], estimate=float(result[0]))
    return float(result[0])
