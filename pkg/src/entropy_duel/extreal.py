"""Extended-real scalar with an explicit +infinity tag.

Divergences and conjugates take the value +infinity on genuine inputs
(support violations, points outside an effective domain), so the result
type carries infinity as a tagged state rather than a float sentinel:
float('inf') arithmetic silently turns sup/inf bookkeeping into NaNs.

Infinite values may carry a ``witness`` (e.g. a kernel eigenvector that
exposes a support violation) for diagnostics; the witness never takes
part in arithmetic or comparison.
"""

from __future__ import annotations

import math
from typing import Any


class ExtReal:
    """A real number or +infinity.

    Supports +, -, scalar *, comparisons, and float() conversion (which
    raises on infinity).  Subtracting infinity from infinity raises
    ArithmeticError instead of producing NaN.
    """

    __slots__ = ("_value", "_infinite", "witness")

    def __init__(self, value: float = 0.0, *, infinite: bool = False,
                 witness: Any = None):
        if not infinite and not math.isfinite(float(value)):
            raise ValueError("finite ExtReal requires a finite float; "
                             "use ExtReal.infinity() for +inf")
        self._value = 0.0 if infinite else float(value)
        self._infinite = bool(infinite)
        self.witness = witness

    @classmethod
    def infinity(cls, witness: Any = None) -> "ExtReal":
        return cls(0.0, infinite=True, witness=witness)

    @property
    def is_finite(self) -> bool:
        return not self._infinite

    @property
    def is_infinite(self) -> bool:
        return self._infinite

    def __float__(self) -> float:
        if self._infinite:
            raise ArithmeticError("cannot convert +inf ExtReal to float")
        return self._value

    # float() is the checked accessor; .value is the permissive one used
    # by reporting code that wants math.inf for display.
    @property
    def value(self) -> float:
        return math.inf if self._infinite else self._value

    def __add__(self, other):
        other = _coerce(other)
        if self._infinite or other._infinite:
            return ExtReal.infinity(witness=self.witness or other.witness)
        return ExtReal(self._value + other._value)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other._infinite:
            if self._infinite:
                raise ArithmeticError("inf - inf is undefined")
            raise ArithmeticError("finite - inf leaves the extended "
                                  "half-line [-inf excluded]")
        if self._infinite:
            return ExtReal.infinity(witness=self.witness)
        return ExtReal(self._value - other._value)

    def __mul__(self, scalar):
        s = float(scalar)
        if self._infinite:
            if s <= 0:
                raise ArithmeticError("inf may only be scaled by a "
                                      "positive factor")
            return ExtReal.infinity(witness=self.witness)
        return ExtReal(self._value * s)

    __rmul__ = __mul__

    def _cmp_key(self) -> float:
        return math.inf if self._infinite else self._value

    def __lt__(self, other):
        return self._cmp_key() < _coerce(other)._cmp_key()

    def __le__(self, other):
        return self._cmp_key() <= _coerce(other)._cmp_key()

    def __gt__(self, other):
        return self._cmp_key() > _coerce(other)._cmp_key()

    def __ge__(self, other):
        return self._cmp_key() >= _coerce(other)._cmp_key()

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        if self._infinite or other._infinite:
            return self._infinite and other._infinite
        return self._value == other._value

    def __hash__(self):
        return hash(self._cmp_key())

    def __repr__(self):
        return "ExtReal(+inf)" if self._infinite else f"ExtReal({self._value!r})"


def _coerce(x) -> ExtReal:
    if isinstance(x, ExtReal):
        return x
    return ExtReal(float(x))
