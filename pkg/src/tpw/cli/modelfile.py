"""Line-based model files.

    # comment
    dim 3
    pi 1 2 : x3
    pi 2 3 : x1
    phi 1 2 3 : 0
    point 0 0 1
    calibration c_phi -1

Indices are 1-based and strictly increasing within an entry.  Every error
is reported with its line and column.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from tpw.expr import ExprSyntaxError, parse
from tpw.tensorcalc.fixtures import FIXTURE_NAMES, fixture
from tpw.tensorcalc.model import CalibrationConstants, Model, ModelError

CALIBRATION_NAMES = ("c_jac", "c_phi", "s_inv", "s_delta")


class ModelFileError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1, source: str = "<model>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column


def _column(raw: str, token: str, start: int = 0) -> int:
    return raw.find(token, start) + 1


def parse_model_text(
    text: str, name: str = "model", calibration: CalibrationConstants | None = None, check_closed: bool = True
) -> Model:
    """Build a Model from model-file text; ``calibration`` is the base before overrides.

    With ``check_closed=False`` a phi that is not closed is accepted (so the
    failure can be reported as a check instead of a load error).
    """
    dim = None
    pi, phi, points, overrides = {}, {}, [], {}

    def fail(msg, lineno, col=1):
        raise ModelFileError(msg, lineno, col, name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        head, *rest = line.split(None, 1)
        rest = rest[0] if rest else ""
        if head == "dim":
            if dim is not None:
                fail("dim given twice", lineno)
            try:
                dim = int(rest)
            except ValueError:
                fail(f"dim expects an integer, got {rest!r}", lineno, _column(raw, rest))
            if dim < 1:
                fail("dim must be positive", lineno, _column(raw, rest))
        elif head in ("pi", "phi"):
            if dim is None:
                fail(f"{head} entry before dim", lineno)
            if ":" not in rest:
                fail(f"{head} entry needs ' : <expr>'", lineno, len(raw.rstrip()) + 1)
            idx_text, expr_text = rest.split(":", 1)
            degree = 2 if head == "pi" else 3
            try:
                idx = tuple(int(tok) for tok in idx_text.split())
            except ValueError:
                fail(f"{head} indices must be integers", lineno, _column(raw, idx_text))
            if len(idx) != degree:
                fail(f"{head} needs {degree} indices, got {len(idx)}", lineno, _column(raw, idx_text))
            if any(not 1 <= i <= dim for i in idx):
                fail(f"{head} indices must lie within 1..{dim}", lineno, _column(raw, idx_text))
            if any(a >= b for a, b in zip(idx, idx[1:])):
                fail(f"{head} indices must be strictly increasing", lineno, _column(raw, idx_text))
            target = pi if head == "pi" else phi
            if idx in target:
                fail(f"{head} {' '.join(map(str, idx))} given twice", lineno)
            offset = raw.index(":") + 1
            try:
                target[idx] = parse(expr_text, dim, allow_t=False)
            except ExprSyntaxError as exc:
                message = str(exc).rsplit(" at line", 1)[0]
                fail(message, lineno, offset + exc.column)
        elif head == "point":
            try:
                points.append(tuple(float(tok) for tok in rest.split()))
            except ValueError:
                fail("point coordinates must be numbers", lineno, _column(raw, rest))
            if dim is not None and len(points[-1]) != dim:
                fail(f"point needs {dim} coordinates", lineno, _column(raw, rest))
        elif head == "calibration":
            parts = rest.split()
            if len(parts) != 2 or parts[0] not in CALIBRATION_NAMES:
                fail(f"calibration expects '<name> <value>' with name in {', '.join(CALIBRATION_NAMES)}", lineno)
            try:
                overrides[parts[0]] = Fraction(parts[1])
            except ValueError:
                fail(f"calibration value {parts[1]!r} is not a number", lineno, _column(raw, parts[1]))
        else:
            fail(f"unknown directive {head!r}", lineno, _column(raw, head))
    if dim is None:
        raise ModelFileError("missing 'dim' line", 1, 1, name)
    base = calibration or CalibrationConstants()
    values = {k: getattr(base, k) for k in CALIBRATION_NAMES}
    values.update(overrides)
    try:
        cal = CalibrationConstants(**values)
        return Model.build(dim, pi, phi, calibration=cal, name=name, points=points, check_closed=check_closed)
    except ModelError as exc:
        raise ModelFileError(str(exc), 1, 1, name) from None


def load_model(source: str, calibration: CalibrationConstants | None = None, check_closed: bool = True) -> Model:
    """A fixture name (M1..M4) or a path to a model file."""
    if source.upper() in FIXTURE_NAMES:
        return fixture(source.upper(), calibration)
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(f"{source!r} is neither a fixture ({', '.join(FIXTURE_NAMES)}) nor a file")
    return parse_model_text(path.read_text(), name=path.stem, calibration=calibration, check_closed=check_closed)


def model_to_text(model: Model) -> str:
    """Model-file text that parses back to the same model."""
    from tpw.expr import to_text

    lines = [f"# {model.name}", f"dim {model.n}"]
    for (i, j), e in sorted(model.pi_exprs.items()):
        lines.append(f"pi {i + 1} {j + 1} : {to_text(e)}")
    for (i, j, k), e in sorted(model.phi_exprs.items()):
        lines.append(f"phi {i + 1} {j + 1} {k + 1} : {to_text(e)}")
    for p in model.points:
        lines.append("point " + " ".join(repr(v) for v in p))
    for key, value in model.calibration.as_dict().items():
        lines.append(f"calibration {key} {value}")
    return "\n".join(lines) + "\n"
