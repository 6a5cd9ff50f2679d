"""Exact bandwidth values and the two distinguished sentinels.

Capacities, bandwidths and congestion values are :class:`fractions.Fraction`.
An edge with no capacity limit carries :data:`UNBOUNDED`; an unsatisfiable
placement has congestion :data:`INFEASIBLE`, which sorts above every number.
"""

from __future__ import annotations

import enum
from decimal import Decimal, InvalidOperation, localcontext
from fractions import Fraction
from functools import total_ordering
from math import lcm


class Unbounded(enum.Enum):
    UNBOUNDED = "unbounded"

    def __repr__(self) -> str:
        return "UNBOUNDED"


UNBOUNDED = Unbounded.UNBOUNDED


@total_ordering
class _Infeasible:
    """Congestion of a request that cannot be placed at all."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFEASIBLE"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("INFEASIBLE")

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __reduce__(self):
        return (_Infeasible, ())


INFEASIBLE = _Infeasible()


def parse_amount(value, *, what: str = "value") -> Fraction:
    """Parse a decimal string (or int) in Gbps into an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"{what}: expected a decimal, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if not isinstance(value, str):
        raise ValueError(f"{what}: expected a decimal string, got {value!r}")
    text = value.strip()
    if "/" in text:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{what}: bad rational {value!r}") from exc
    try:
        dec = Decimal(text)
    except InvalidOperation as exc:
        raise ValueError(f"{what}: bad decimal {value!r}") from exc
    if not dec.is_finite():
        raise ValueError(f"{what}: not finite: {value!r}")
    return Fraction(dec)


def parse_capacity(value) -> Fraction | Unbounded:
    if value is UNBOUNDED or (isinstance(value, str) and value.strip().lower() == "unbounded"):
        return UNBOUNDED
    return parse_amount(value, what="capacity")


def _terminates(q: Fraction) -> bool:
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def format_amount(q: Fraction, digits: int = 18) -> str:
    """Decimal string for ``q``; exact when the expansion terminates.

    Non-terminating values are rounded to ``digits`` significant digits.
    """
    if _terminates(q):
        text = format(Decimal(q.numerator) / Decimal(q.denominator), "f")
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return text or "0"
    with localcontext() as ctx:
        ctx.prec = digits
        text = format(Decimal(q.numerator) / Decimal(q.denominator), "f")
    return text


def format_exact(q: Fraction) -> str:
    """Decimal string when exact, otherwise ``"p/q"``; always round-trips."""
    return format_amount(q) if _terminates(q) else f"{q.numerator}/{q.denominator}"


def format_capacity(c: Fraction | Unbounded) -> str:
    return "unbounded" if c is UNBOUNDED else format_exact(c)


def common_scale(values) -> int:
    """Least common denominator of an iterable of Fractions (1 if empty)."""
    scale = 1
    for v in values:
        scale = lcm(scale, v.denominator)
    return scale
