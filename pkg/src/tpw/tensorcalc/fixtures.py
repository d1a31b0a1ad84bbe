"""Reference models used throughout the checks.

M1  constant symplectic plane
M2  linear Poisson structure of so(3)*
M3  nondegenerate pi inverse to dx1^dx2 + (1+x1) dx3^dx4, twisted by d of it
M4  constant pi with a phi that is not compatible with it
"""

from __future__ import annotations

from fractions import Fraction

from tpw.expr import parse
from tpw.tensorcalc.model import CalibrationConstants, Model

FIXTURE_NAMES = ("M1", "M2", "M3", "M4")

# designated evaluation points; M3 keeps well away from its pole at x1 = -1
DEFAULT_POINTS = {
    "M1": ((0.0, 0.0),),
    "M2": ((0.0, 0.0, 1.0),),
    "M3": ((0.0, 0.0, 0.0, 0.0),),
    "M4": ((0.0, 0.0, 0.0, 0.0),),
}


def m1(calibration: CalibrationConstants | None = None) -> Model:
    return Model.build(2, {(1, 2): 1}, calibration=calibration, name="M1", points=DEFAULT_POINTS["M1"])


def m2(calibration: CalibrationConstants | None = None) -> Model:
    pi = {(1, 2): parse("x3"), (2, 3): parse("x1"), (3, 1): parse("x2")}
    return Model.build(3, pi, calibration=calibration, name="M2", points=DEFAULT_POINTS["M2"])


def m3(calibration: CalibrationConstants | None = None, s_inv=None) -> Model:
    """``s_inv`` overrides the calibrated sign of phi (used by the calibration itself)."""
    if calibration is None and s_inv is None:
        from tpw.tensorcalc.calibration import default_calibration

        calibration = default_calibration()
    s = Fraction(s_inv) if s_inv is not None else calibration.s_inv
    pi = {(1, 2): 1, (3, 4): parse("1/(1+x1)")}
    phi = {(1, 3, 4): s}
    if calibration is not None and calibration.s_inv != s:
        from dataclasses import replace

        calibration = replace(calibration, s_inv=s)
    return Model.build(
        4,
        pi,
        phi,
        calibration=calibration or CalibrationConstants(s_inv=s),
        name="M3",
        points=DEFAULT_POINTS["M3"],
    )


def m4(calibration: CalibrationConstants | None = None) -> Model:
    return Model.build(
        4,
        {(1, 2): 1, (3, 4): 1},
        {(1, 2, 3): 1},
        calibration=calibration,
        name="M4",
        points=DEFAULT_POINTS["M4"],
    )


def fixture(name: str, calibration: CalibrationConstants | None = None) -> Model:
    """Fixture by name; every fixture carries the calibrated constants by default."""
    if calibration is None:
        from tpw.tensorcalc.calibration import default_calibration

        calibration = default_calibration()
    builders = {"M1": m1, "M2": m2, "M3": m3, "M4": m4}
    try:
        return builders[name.upper()](calibration)
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}") from None
