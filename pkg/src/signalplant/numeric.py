"""Numeric-mode helpers: exact rationals vs binary floats.

Every distribution carries a mode. "rational" keeps fractions.Fraction end
to end so normalization identities and bound comparisons are exact; it is
the default and the mode all verification runs use. "float" trades
exactness for speed on large sweeps, with these tolerances:

- joint masses must renormalize to within JOINT_SUM_TOL of 1,
- strict positivity (signal-set membership) uses SUPPORT_TOL,
- other validation comparisons use FLOAT_TOL.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Num = Union[Fraction, float]

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)

JOINT_SUM_TOL = 1e-12
SUPPORT_TOL = 1e-12
FLOAT_TOL = 1e-9


def check_mode(mode: str) -> str:
    from .errors import ValidationError

    if mode not in MODES:
        raise ValidationError(f"unknown numeric mode {mode!r}; expected one of {MODES}")
    return mode


def parse_number(value, mode: str) -> Num:
    """Coerce a scenario literal (int, float, Fraction, or 'p/q' string) to the mode's type.

    In rational mode, float and decimal-string literals are read as exact
    decimal fractions (0.45 -> 9/20), never as binary-float expansions.
    """
    from .errors import ValidationError

    check_mode(mode)
    if isinstance(value, bool):
        raise ValidationError(f"boolean is not a number: {value!r}")
    if mode == RATIONAL:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(repr(value))
        if isinstance(value, str):
            try:
                return Fraction(value)
            except (ValueError, ZeroDivisionError) as exc:
                raise ValidationError(f"cannot parse rational literal {value!r}: {exc}") from exc
        raise ValidationError(f"cannot parse {value!r} as a rational number")
    if isinstance(value, (int, float, Fraction)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse numeric literal {value!r}: {exc}") from exc
    raise ValidationError(f"cannot parse {value!r} as a float")


def format_number(x: Num) -> str:
    """Serialize a number losslessly: Fractions as 'p/q' (or 'n'), floats via repr."""
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def is_positive(x: Num, mode: str) -> bool:
    """Strict positivity; float mode applies the SUPPORT_TOL threshold."""
    if mode == FLOAT:
        return x > SUPPORT_TOL
    return x > 0


def zero(mode: str) -> Num:
    return Fraction(0) if mode == RATIONAL else 0.0


def one(mode: str) -> Num:
    return Fraction(1) if mode == RATIONAL else 1.0
