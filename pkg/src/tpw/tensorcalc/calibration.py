"""One-time determination of the convention constants.

s_inv   the sign of phi on the nondegenerate fixture for which the bracket of
        1-forms satisfies the Jacobi identity on coordinate differentials
c_jac   the factor making the Jacobi residual of pi vanish on that fixture
s_delta the sign in delta^2 = s_delta [phi, .] on that fixture
c_phi   ratio of the twisted 2-form term to the transgressed phi, measured
        numerically on on-shell paths (see ``tpw.pathspace.checks``)

Each constant is the unique member of {±1, ±1/2, ±2} passing its oracle;
anything else is reported as a calibration failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from tpw.tensorcalc.brackets import jacobiator, twisted_jacobi_residual
from tpw.tensorcalc.delta import delta_square_residual
from tpw.tensorcalc.forms import KForm
from tpw.tensorcalc.model import ALLOWED_CONSTANTS, CalibrationConstants


class CalibrationError(RuntimeError):
    pass


@dataclass
class CalibrationRun:
    constants: CalibrationConstants
    # candidate -> passed, per constant
    scans: dict = field(default_factory=dict)
    c_phi_measured: list = field(default_factory=list)


def _unique(name: str, passed: dict) -> Fraction:
    winners = [c for c, ok in passed.items() if ok]
    if len(winners) != 1:
        raise CalibrationError(f"{name}: expected exactly one admissible value, found {winners}")
    return winners[0]


def _jacobi_on_coordinates(model) -> bool:
    dx = [KForm.coordinate(model.alg, i) for i in range(model.n)]
    n = model.n
    return all(
        jacobiator(model, dx[i], dx[j], dx[k]).is_zero()
        for i in range(n)
        for j in range(i + 1, n)
        for k in range(j + 1, n)
    )


def calibrate_symbolic() -> CalibrationRun:
    """Fix s_inv, c_jac and s_delta on the nondegenerate fixture."""
    from tpw.tensorcalc.fixtures import m3

    scans = {}
    scans["s_inv"] = {s: _jacobi_on_coordinates(m3(s_inv=s)) for s in (Fraction(1), Fraction(-1))}
    s_inv = _unique("s_inv", scans["s_inv"])
    model = m3(s_inv=s_inv)
    scans["c_jac"] = {c: twisted_jacobi_residual(model, c).is_zero() for c in ALLOWED_CONSTANTS}
    c_jac = _unique("c_jac", scans["c_jac"])
    dx = [KForm.coordinate(model.alg, i) for i in range(model.n)]
    scans["s_delta"] = {
        s: all(delta_square_residual(model, d, s).is_zero() for d in dx) for s in ALLOWED_CONSTANTS
    }
    s_delta = _unique("s_delta", scans["s_delta"])
    constants = CalibrationConstants(c_jac=c_jac, s_inv=s_inv, s_delta=s_delta)
    return CalibrationRun(constants, scans)


def calibrate(paths: int = 10, grid: int = 200, seed: int = 0) -> CalibrationRun:
    """Full calibration including the numerically measured c_phi."""
    from tpw.pathspace.checks import measure_c_phi

    run = calibrate_symbolic()
    model = _m3_with(run.constants)
    ratios = measure_c_phi(model, paths=paths, grid=grid, seed=seed)
    run.c_phi_measured = ratios
    mean = sum(ratios) / len(ratios)
    nearest = min(ALLOWED_CONSTANTS, key=lambda c: abs(float(c) - mean))
    if abs(float(nearest) - mean) > 1e-4:
        raise CalibrationError(f"c_phi: measured ratio {mean:.6g} is not in {{±1, ±1/2, ±2}}")
    run.scans["c_phi"] = {c: c == nearest for c in ALLOWED_CONSTANTS}
    run.constants = CalibrationConstants(
        c_jac=run.constants.c_jac, c_phi=nearest, s_inv=run.constants.s_inv, s_delta=run.constants.s_delta
    )
    return run


def _m3_with(constants: CalibrationConstants):
    from tpw.tensorcalc.fixtures import m3

    return m3(constants)


@lru_cache(maxsize=1)
def default_run() -> CalibrationRun:
    return calibrate()


def default_calibration() -> CalibrationConstants:
    return default_run().constants
