"""Compensated summation helpers.

Every reduction whose result lands in a report goes through Neumaier's
variant of Kahan summation so that totals are (a) noticeably more accurate
than naive left-to-right adds and (b) bit-for-bit reproducible for a fixed
addend order.  Reproducibility across worker counts is then a pure ordering
question, which the callers solve by always combining per-shell subtotals
in canonical shell order.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class NeumaierSum:
    """Running compensated sum (Neumaier 1974).

    The classic Kahan update loses the correction when the incoming term is
    larger than the running sum; Neumaier's branch keeps it.  `value` folds
    the carry in on read and never mutates state.
    """

    __slots__ = ("_s", "_c")

    def __init__(self, start: float = 0.0):
        self._s = float(start)
        self._c = 0.0

    def add(self, x: float) -> "NeumaierSum":
        t = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - t) + x
        else:
            self._c += (x - t) + self._s
        self._s = t
        return self

    def extend(self, xs: Iterable[float]) -> "NeumaierSum":
        for x in xs:
            self.add(x)
        return self

    @property
    def value(self) -> float:
        return self._s + self._c


def neumaier_sum(xs: Iterable[float]) -> float:
    """Compensated sum of an iterable of floats, in iteration order."""
    acc = NeumaierSum()
    acc.extend(xs)
    return acc.value


def neumaier_sum_array(xs: np.ndarray) -> float:
    """Compensated sum of a 1-D float array, in array order.

    Loops in Python; meant for arrays that were already reduced once (shell
    subtotals, panel contributions), not for multi-million-term raw sums.
    For those, pairwise summation via ``np.sum`` feeds *into* one of these
    accumulators per shell.
    """
    acc = NeumaierSum()
    for x in np.asarray(xs, dtype=float).ravel():
        acc.add(float(x))
    return acc.value


def neumaier_sum_complex(xs: Iterable[complex]) -> complex:
    """Compensated sum for complex terms (independent real/imag carries)."""
    re = NeumaierSum()
    im = NeumaierSum()
    for x in xs:
        xc = complex(x)
        re.add(xc.real)
        im.add(xc.imag)
    return complex(re.value, im.value)


def ordered_subtotal_combine(subtotals: Sequence[float]) -> float:
    """Combine per-chunk subtotals in the given (canonical) order.

    This is the single combination point used after any parallel split, so
    the result is independent of how many workers produced the subtotals as
    long as chunk boundaries are deterministic.
    """
    return neumaier_sum(subtotals)
