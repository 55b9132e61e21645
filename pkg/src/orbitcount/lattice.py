"""Exact census enumeration for the Gaussian-integer unimodular lattice.

Elements are 2x2 matrices [[a, b], [c, d]] over Z[i] with a d - b c = 1.
All arithmetic that decides membership, ordering, or shell structure is
exact integer arithmetic on the quantity

    F = |a|^2 + |b|^2 + |c|^2 + |d|^2  (an integer),

because for unimodular matrices the gauge (largest singular value) obeys
gauge^2 = (F + sqrt(F^2 - 4)) / 2, so

    gauge <= B  <=>  F <= B^2 + B^{-2},
    radius = arccosh(F / 2) = 2 log(gauge).

A census is therefore a finite, exactly reproducible object: integer rows
sorted by the canonical key (F, re a, im a, re b, im b, re c, im c, re d,
im d).  Floats (radius, gauge) are derived columns.

Two independent enumerators are provided and cross-checked in the tests:

* :func:`enumerate_naive` -- box scan over (a, b, c) with the determinant
  forcing d exactly (conjugate-multiply then divisibility by |a|^2; the
  a = 0 branch is handled separately).  Vectorized; the work budget is the
  cube of the box size and is checked before any allocation.
* :func:`enumerate_pruned` -- scan coprime first columns (a, c) (Euclid in
  Z[i] with nearest-rounding division), complete each to a unimodular
  matrix by the extended Euclid identity, and walk the finite family of
  completions (b0 + t a, d0 + t c) over Gaussian integers t in a disk.

Both must produce identical censuses; the pruned one is the production
path for larger cutoffs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BudgetError, DomainError, InputError

CSV_HEADER = "re_a,im_a,re_b,im_b,re_c,im_c,re_d,im_d,radius,gauge"

#: Default cap on candidate tuples examined by an enumeration call.
DEFAULT_WORK_BUDGET = 200_000_000

#: The 8 gauge-1 elements (the lattice's intersection with the compact
#: subgroup): 4 diagonal unit matrices and 4 antidiagonal ones.
COMPACT_COUNT = 8


# ---------------------------------------------------------------------------
# Gaussian-integer arithmetic on (re, im) int pairs

Gint = tuple[int, int]


def gmul(x: Gint, y: Gint) -> Gint:
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def gconj(x: Gint) -> Gint:
    return (x[0], -x[1])


def gneg(x: Gint) -> Gint:
    return (-x[0], -x[1])


def gadd(x: Gint, y: Gint) -> Gint:
    return (x[0] + y[0], x[1] + y[1])


def gsub(x: Gint, y: Gint) -> Gint:
    return (x[0] - y[0], x[1] - y[1])


def gnorm(x: Gint) -> int:
    return x[0] * x[0] + x[1] * x[1]


def is_unit(x: Gint) -> bool:
    return gnorm(x) == 1


def _round_nearest(p: int, n: int) -> int:
    """Nearest integer to p/n for n > 0, ties toward +infinity."""
    return (2 * p + n) // (2 * n)


def gdivmod(x: Gint, y: Gint) -> tuple[Gint, Gint]:
    """Nearest-rounding division: q with |x - q y| minimal-ish, r = x - q y.

    Guarantees gnorm(r) <= gnorm(y) / 2, which makes the Euclid loop below
    terminate fast.
    """
    if y == (0, 0):
        raise ZeroDivisionError("Gaussian division by zero")
    n = gnorm(y)
    p = gmul(x, gconj(y))
    q = (_round_nearest(p[0], n), _round_nearest(p[1], n))
    return q, gsub(x, gmul(q, y))


def gxgcd(x: Gint, y: Gint) -> tuple[Gint, Gint, Gint]:
    """Extended Euclid in Z[i]: returns (g, u, v) with u x + v y = g."""
    r0, r1 = x, y
    u0, u1 = (1, 0), (0, 0)
    v0, v1 = (0, 0), (1, 0)
    while r1 != (0, 0):
        q, r = gdivmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, gsub(u0, gmul(q, u1))
        v0, v1 = v1, gsub(v0, gmul(q, v1))
    return r0, u0, v0


# ---------------------------------------------------------------------------
# census container


def f_threshold(cutoff: float) -> int:
    """Largest integer F compatible with gauge <= cutoff.

    gauge <= B  <=>  F <= B^2 + B^{-2}; the 1e-9 guard keeps cutoffs that
    are themselves exact gauges (golden ratio and friends) inside the
    census, per the boundary-inclusive convention.
    """
    if cutoff < 1.0:
        raise InputError(
            f"cutoff {cutoff} is below 1.0, the gauge of the {COMPACT_COUNT} "
            "compact-stabilizer elements; censuses start at cutoff 1.0"
        )
    b2 = float(cutoff) ** 2
    return int(math.floor(b2 + 1.0 / b2 + 1e-9))


@dataclass(frozen=True)
class Census:
    """All lattice elements with gauge <= cutoff, canonically sorted.

    rows: int64 array (N, 8), columns re_a, im_a, ..., re_d, im_d.
    fnorm: int64 array (N,), the exact F of each row (nondecreasing).
    cutoff: enumeration cutoff (or max observed gauge for loaded files).
    """

    rows: np.ndarray
    fnorm: np.ndarray
    cutoff: float

    @property
    def size(self) -> int:
        return int(self.rows.shape[0])

    @property
    def radii(self) -> np.ndarray:
        return np.arccosh(0.5 * self.fnorm.astype(float))

    @property
    def gauges(self) -> np.ndarray:
        return np.exp(0.5 * self.radii)

    def matrices(self) -> np.ndarray:
        """Census as a stacked (N, 2, 2) complex array."""
        r = self.rows
        out = np.empty((self.size, 2, 2), dtype=complex)
        out[:, 0, 0] = r[:, 0] + 1j * r[:, 1]
        out[:, 0, 1] = r[:, 2] + 1j * r[:, 3]
        out[:, 1, 0] = r[:, 4] + 1j * r[:, 5]
        out[:, 1, 1] = r[:, 6] + 1j * r[:, 7]
        return out

    def shells(self) -> list[tuple[int, int, int]]:
        """Runs of constant F: list of (F, start, stop) in canonical order."""
        if self.size == 0:
            return []
        f = self.fnorm
        cuts = np.flatnonzero(np.diff(f)) + 1
        starts = np.concatenate(([0], cuts))
        stops = np.concatenate((cuts, [f.size]))
        return [(int(f[s]), int(s), int(e)) for s, e in zip(starts, stops)]

    def row_set(self) -> set[tuple[int, ...]]:
        return {tuple(int(v) for v in row) for row in self.rows}

    def compact_part(self) -> np.ndarray:
        """Rows with gauge exactly 1 (F == 2)."""
        return self.rows[self.fnorm == 2]

    def to_csv(self, path: str | Path) -> None:
        lines = [CSV_HEADER]
        rad = self.radii
        gau = self.gauges
        for i in range(self.size):
            ints = ",".join(str(int(v)) for v in self.rows[i])
            lines.append(f"{ints},{rad[i]:.17g},{gau[i]:.17g}")
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path: str | Path) -> "Census":
        text = Path(path).read_text().strip().splitlines()
        if not text or text[0].strip() != CSV_HEADER:
            raise InputError(f"{path}: expected census header '{CSV_HEADER}'")
        rows = []
        for ln, line in enumerate(text[1:], start=2):
            parts = line.split(",")
            if len(parts) != 10:
                raise InputError(f"{path}:{ln}: expected 10 fields")
            try:
                rows.append([int(p) for p in parts[:8]])
            except ValueError as exc:
                raise InputError(f"{path}:{ln}: bad integer entry: {exc}") from None
        arr = np.asarray(rows, dtype=np.int64).reshape(-1, 8)
        return cls.from_rows(arr, cutoff=None)

    @classmethod
    def from_rows(cls, arr: np.ndarray, cutoff: float | None) -> "Census":
        """Validate determinants, sort canonically, derive F."""
        arr = np.asarray(arr, dtype=np.int64).reshape(-1, 8)
        if arr.shape[0]:
            det_re = (
                arr[:, 0] * arr[:, 6] - arr[:, 1] * arr[:, 7]
                - arr[:, 2] * arr[:, 4] + arr[:, 3] * arr[:, 5]
            )
            det_im = (
                arr[:, 0] * arr[:, 7] + arr[:, 1] * arr[:, 6]
                - arr[:, 2] * arr[:, 5] - arr[:, 3] * arr[:, 4]
            )
            if np.any(det_re != 1) or np.any(det_im != 0):
                bad = int(np.flatnonzero((det_re != 1) | (det_im != 0))[0])
                raise InputError(f"row {bad}: determinant is not 1")
        f = np.sum(arr * arr, axis=1) if arr.size else np.zeros(0, np.int64)
        order = np.lexsort(tuple(arr[:, j] for j in range(7, -1, -1)) + (f,))
        arr = arr[order]
        f = f[order]
        if cutoff is None:
            # Loaded files carry no cutoff; the max observed gauge is a valid
            # coverage bound (no element can sit between it and the original
            # cutoff, or it would have been enumerated).
            cutoff = float(np.exp(0.5 * np.arccosh(0.5 * float(f[-1])))) if f.size else 1.0
        return cls(rows=arr, fnorm=f, cutoff=float(cutoff))


def shell_counts(census: Census, width: float = 0.25) -> list[tuple[float, int]]:
    """Histogram of radii into [k w, (k+1) w) bins: list of (left edge, count).

    Bins are emitted for every k from 0 through the last occupied bin, so
    the counts always sum to census.size.
    """
    if width <= 0:
        raise InputError("bin width must be positive")
    if census.size == 0:
        return []
    idx = np.floor(census.radii / width + 1e-12).astype(int)
    top = int(idx.max())
    counts = np.bincount(idx, minlength=top + 1)
    return [(k * width, int(counts[k])) for k in range(top + 1)]


# ---------------------------------------------------------------------------
# enumeration


def _gaussian_box(radius_sq: int) -> np.ndarray:
    """All Gaussian integers with |v|^2 <= radius_sq, as an (K, 2) int array."""
    m = int(math.isqrt(radius_sq))
    vals = np.arange(-m, m + 1, dtype=np.int64)
    re, im = np.meshgrid(vals, vals, indexing="ij")
    keep = re * re + im * im <= radius_sq
    return np.stack([re[keep], im[keep]], axis=1)


def _check_budget(estimate: int, budget: int, what: str) -> None:
    if estimate > budget:
        raise BudgetError(estimate, budget, what)


def enumerate_naive(
    cutoff: float,
    *,
    budget: int = DEFAULT_WORK_BUDGET,
    workers: int = 1,
) -> Census:
    """Box-scan enumeration: exhaustive over (a, b, c), d forced by det = 1.

    The candidate count (box size cubed) is checked against the budget
    before anything is allocated, so oversized cutoffs fail fast.
    """
    fmax = f_threshold(cutoff)
    # |entry| <= gauge <= cutoff, so a box scan is a superset; F filters exactly.
    entry_sq = int(math.floor(float(cutoff) ** 2 + 1e-9))
    box = _gaussian_box(entry_sq)
    k = box.shape[0]
    _check_budget(k * k * k, budget, "naive enumeration")

    bre = box[:, 0][:, None]
    bim = box[:, 1][:, None]
    cre = box[:, 0][None, :]
    cim = box[:, 1][None, :]
    # num = 1 + b c, broadcast over the (b, c) grid once.
    num_re = 1 + bre * cre - bim * cim
    num_im = bre * cim + bim * cre

    nonzero_a = [tuple(v) for v in box.tolist() if tuple(v) != (0, 0)]

    def scan_chunk(chunk: list[Gint]) -> list[np.ndarray]:
        out = []
        for a in chunk:
            ar, ai = a
            na = ar * ar + ai * ai
            # d = (1 + b c) conj(a) / |a|^2, exact when both parts divide.
            pre = num_re * ar + num_im * ai
            pim = num_im * ar - num_re * ai
            ok = (pre % na == 0) & (pim % na == 0)
            if not ok.any():
                continue
            dre = pre[ok] // na
            dim = pim[ok] // na
            nb = (bre * bre + bim * bim + np.zeros_like(cre))[ok]
            nc = (np.zeros_like(bre) + cre * cre + cim * cim)[ok]
            nd = dre * dre + dim * dim
            f = na + nb + nc + nd
            keep = (nd <= entry_sq) & (f <= fmax)
            if not keep.any():
                continue
            bidx, cidx = np.nonzero(ok)
            bsel = box[bidx[keep]]
            csel = box[cidx[keep]]
            rows = np.empty((int(keep.sum()), 8), dtype=np.int64)
            rows[:, 0] = ar
            rows[:, 1] = ai
            rows[:, 2:4] = bsel
            rows[:, 4:6] = csel
            rows[:, 6] = dre[keep]
            rows[:, 7] = dim[keep]
            out.append(rows)
        return out

    chunks = _split(nonzero_a, workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan_chunk, chunks))
    else:
        results = [scan_chunk(c) for c in chunks]

    pieces: list[np.ndarray] = [blk for res in results for blk in res]

    # a = 0 branch: b c = -1 forces b to be a unit and c = -1/b; d is free
    # in the box subject to the F filter (F = 2 + |d|^2).
    zero_rows = []
    for b in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        c = gneg(gconj(b))  # -1/b for units
        for d in box.tolist():
            f = 2 + d[0] * d[0] + d[1] * d[1]
            if f <= fmax:
                zero_rows.append([0, 0, b[0], b[1], c[0], c[1], d[0], d[1]])
    if zero_rows:
        pieces.append(np.asarray(zero_rows, dtype=np.int64))

    all_rows = np.concatenate(pieces, axis=0) if pieces else np.zeros((0, 8), np.int64)
    return Census.from_rows(all_rows, cutoff=cutoff)


def enumerate_pruned(
    cutoff: float,
    *,
    budget: int = DEFAULT_WORK_BUDGET,
    workers: int = 1,
) -> Census:
    """Production enumeration via coprime first columns.

    A pair (a, c) extends to a unimodular matrix iff gcd(a, c) is a unit in
    Z[i]; the extended Euclid identity u a + v c = 1 yields one completion
    (b0, d0) = (-v, u), and every completion is (b0 + t a, d0 + t c) for a
    Gaussian integer t.  The admissible t live in a disk of radius
    cutoff/max(|a|, |c|), so each column contributes O(cutoff^2 / |a|^2)
    candidates.  Work is counted per candidate against the budget.
    """
    fmax = f_threshold(cutoff)
    entry_sq = int(math.floor(float(cutoff) ** 2 + 1e-9))
    box = _gaussian_box(entry_sq)
    pairs = [
        (tuple(a), tuple(c))
        for a in box.tolist()
        for c in box.tolist()
        if (a != [0, 0] or c != [0, 0])
    ]
    _check_budget(len(pairs), budget, "pruned enumeration (column scan)")

    bound = float(cutoff) + 1e-12

    def scan_pairs(chunk) -> tuple[list[list[int]], int]:
        rows: list[list[int]] = []
        work = 0
        for a, c in chunk:
            g, u, v = gxgcd(a, c)
            if not is_unit(g):
                continue
            ginv = gconj(g)  # inverse of a unit
            b0 = gneg(gmul(v, ginv))
            d0 = gmul(u, ginv)
            # Pivot on the larger column entry for the tightest t-disk.
            if gnorm(a) >= gnorm(c):
                piv, off = a, b0
            else:
                piv, off = c, d0
            npiv = gnorm(piv)
            azf = complex(off[0], off[1]) / complex(piv[0], piv[1])
            rad = bound / math.sqrt(npiv)
            t_res = range(
                math.ceil(-azf.real - rad - 1e-9),
                math.floor(-azf.real + rad + 1e-9) + 1,
            )
            t_ims = range(
                math.ceil(-azf.imag - rad - 1e-9),
                math.floor(-azf.imag + rad + 1e-9) + 1,
            )
            work += len(t_res) * len(t_ims)
            na, nc = gnorm(a), gnorm(c)
            for tr in t_res:
                for ti in t_ims:
                    t = (tr, ti)
                    b = gadd(b0, gmul(t, a))
                    d = gadd(d0, gmul(t, c))
                    f = na + nc + gnorm(b) + gnorm(d)
                    if f <= fmax:
                        rows.append(
                            [a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1]]
                        )
        return rows, work

    chunks = _split(pairs, workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan_pairs, chunks))
    else:
        results = [scan_pairs(c) for c in chunks]

    total_work = len(pairs) + sum(w for _, w in results)
    _check_budget(total_work, budget, "pruned enumeration")

    rows = [r for rs, _ in results for r in rs]
    arr = np.asarray(rows, dtype=np.int64) if rows else np.zeros((0, 8), np.int64)
    return Census.from_rows(arr, cutoff=cutoff)


def enumerate_literal(cutoff: float, *, budget: int = DEFAULT_WORK_BUDGET) -> Census:
    """Four-entry literal box scan.  Test oracle; O(box^4), tiny cutoffs only."""
    fmax = f_threshold(cutoff)
    entry_sq = int(math.floor(float(cutoff) ** 2 + 1e-9))
    box = [tuple(v) for v in _gaussian_box(entry_sq).tolist()]
    k = len(box)
    _check_budget(k ** 4, budget, "literal enumeration")
    rows = []
    for a in box:
        for b in box:
            for c in box:
                bc = gmul(b, c)
                for d in box:
                    det = gsub(gmul(a, d), bc)
                    if det != (1, 0):
                        continue
                    f = gnorm(a) + gnorm(b) + gnorm(c) + gnorm(d)
                    if f <= fmax:
                        rows.append([*a, *b, *c, *d])
    arr = np.asarray(rows, dtype=np.int64) if rows else np.zeros((0, 8), np.int64)
    return Census.from_rows(arr, cutoff=cutoff)


def _split(seq, parts: int):
    """Contiguous near-even split; chunk boundaries depend only on len(seq)."""
    parts = max(1, int(parts))
    n = len(seq)
    step = (n + parts - 1) // parts if n else 1
    return [seq[i : i + step] for i in range(0, n, step)] or [seq]


def compact_stabilizer_rows() -> np.ndarray:
    """The 8 gauge-1 elements, in canonical order."""
    rows = []
    for a, d in (((1, 0), (1, 0)), ((-1, 0), (-1, 0)), ((0, 1), (0, -1)), ((0, -1), (0, 1))):
        rows.append([a[0], a[1], 0, 0, 0, 0, d[0], d[1]])
    for b in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        c = gneg(gconj(b))
        rows.append([0, 0, b[0], b[1], c[0], c[1], 0, 0])
    arr = np.asarray(rows, dtype=np.int64)
    f = np.full(arr.shape[0], 2, dtype=np.int64)
    order = np.lexsort(tuple(arr[:, j] for j in range(7, -1, -1)) + (f,))
    return arr[order]
