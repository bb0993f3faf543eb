"""Exact-arithmetic helpers shared across modules.

Big integers and Fractions are used wherever a predicate or a reported value
must be exact; these utilities handle the conversions to floats without
overflowing on integers that exceed the double range.
"""

from __future__ import annotations

import math
from fractions import Fraction

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    def mpz(x):
        return int(x)


def int_to_float_scaled(num: int, shift: int) -> float:
    """Return float(num / 2**shift) without overflow for huge num/shift.

    The result is the 53-bit truncation of num * 2**-shift (round toward
    zero), which keeps all fixed-point -> float conversions bit-identical
    across code paths.
    """
    if num == 0:
        return 0.0
    sign = -1.0 if num < 0 else 1.0
    num = abs(num)
    nbits = num.bit_length()
    if nbits <= 53:
        return sign * math.ldexp(float(num), -shift)
    top = num >> (nbits - 53)
    return sign * math.ldexp(float(top), nbits - 53 - shift)


def fraction_to_float(q: Fraction) -> float:
    """float(q) that survives numerators/denominators beyond 2**1024."""
    num, den = q.numerator, q.denominator
    if num == 0:
        return 0.0
    sign = -1.0 if num < 0 else 1.0
    num = abs(num)
    # scale so that the quotient sits comfortably in double range
    shift = num.bit_length() - den.bit_length()
    if abs(shift) > 512:
        if shift > 0:
            den <<= shift
        else:
            num <<= -shift
        return sign * math.ldexp(num / den, shift)
    return sign * (num / den)


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


def kahan_sum(values) -> float:
    """Compensated (Neumaier) summation of an iterable of floats."""
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp
