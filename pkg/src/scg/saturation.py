"""Edge coverage of relator cycles: sat_w, sat by n-th powers, window tables."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from scg import kernels
from scg.presentation import Presentation, longest_pieces
from scg.words import CyclicWord, Word, cyclic_reduce, invert, power


@dataclass(frozen=True)
class EdgeMask:
    length: int
    bits: int  # bit e set iff edge e is covered

    @property
    def covered(self) -> int:
        return bin(self.bits).count("1")

    def __contains__(self, e: int) -> bool:
        return bool(self.bits >> e & 1)

    def edges(self) -> list[int]:
        return [e for e in range(self.length) if self.bits >> e & 1]

    def rotate(self, k: int) -> "EdgeMask":
        """Mask of the cycle rotated by k (edge e of the result is edge e+k here)."""
        if self.length == 0:
            return self
        k %= self.length
        full = (1 << self.length) - 1
        bits = ((self.bits >> k) | (self.bits << (self.length - k))) & full
        return EdgeMask(self.length, bits)

    @classmethod
    def from_flags(cls, flags: Sequence[bool]) -> "EdgeMask":
        bits = 0
        for e, f in enumerate(flags):
            if f:
                bits |= 1 << e
        return cls(len(flags), bits)

    def flags(self) -> list[bool]:
        return [bool(self.bits >> e & 1) for e in range(self.length)]


@dataclass(frozen=True)
class SaturationReport:
    relator: int
    pattern: str
    covered: int
    sat: Fraction
    mask: EdgeMask


def _letters(v) -> Word:
    return v.letters if isinstance(v, CyclicWord) else tuple(v)


def _fold(diff: list[int], L: int) -> EdgeMask:
    """Turn a difference array over [0, 2L) into a cyclic mask of length L."""
    flags = [False] * L
    acc = 0
    for e in range(len(diff) - 1):
        acc += diff[e]
        if acc > 0:
            flags[e % L] = True
    return EdgeMask.from_flags(flags)


def rotation_intervals(v: Word, pat: Word) -> list[tuple[int, int]]:
    """Intervals [lo, hi] of starts s in [0, |v|) where the arc of length |pat| reads a rotation of pat."""
    L = len(v)
    k = len(pat)
    if k == 0 or k > L:
        return []
    t = v + v
    za = kernels.z_array(list(pat) + [0] + list(t))
    zb = kernels.z_array(list(pat[::-1]) + [0] + list(t[::-1]))
    out = []
    # a cut e splits the arc into a suffix of pat ending at e and a prefix
    # of pat starting at e
    off_a = k + 1
    off_b = k + 1 + 2 * L
    for e in range(2 * L + 1):
        a = za[off_a + e] if e < 2 * L else 0
        b = zb[off_b - e] if e > 0 else 0
        if a + b < k:
            continue
        if a > k:
            a = k
        if b > k:
            b = k
        lo = e - b if e > b else 0
        hi = e + a - k
        if hi > L - 1:
            hi = L - 1
        if lo <= hi:
            out.append((lo, hi))
    return out


def rotation_starts(v: Word, pat: Word) -> list[bool]:
    L = len(v)
    diff = [0] * (L + 1)
    for lo, hi in rotation_intervals(v, pat):
        diff[lo] += 1
        diff[hi + 1] -= 1
    out = []
    acc = 0
    for s in range(L):
        acc += diff[s]
        out.append(acc > 0)
    return out


def _mark_rotations(v: Word, pat: Word, diff: list[int]) -> None:
    """Add every arc of the cycle v reading a rotation of ``pat`` to ``diff``."""
    k = len(pat)
    for lo, hi in rotation_intervals(v, pat):
        diff[lo] += 1
        diff[hi + k] -= 1


def coverage(v, patterns: Iterable) -> EdgeMask:
    """Edges of the cycle v on an arc reading a rotation of a pattern or its inverse."""
    v = _letters(v)
    L = len(v)
    pats = [_letters(p) for p in patterns]
    if not pats:
        raise ValueError("coverage needs at least one pattern")
    diff = [0] * (2 * L + 1)
    for p in pats:
        _mark_rotations(v, p, diff)
        _mark_rotations(v, invert(p), diff)
    return _fold(diff, L)


def pattern_core(w: Sequence[int], m: int) -> Word:
    core, _ = cyclic_reduce(power(w, m))
    if len(core) == 0:
        raise ValueError("trivial pattern")
    return core.letters


def word_mask(w: Sequence[int], m: int, v) -> EdgeMask:
    return coverage(v, [pattern_core(w, m)])


def sat_word(w: Sequence[int], m: int, v) -> Fraction:
    if m < 1:
        raise ValueError("m must be positive")
    mask = word_mask(w, m, v)
    return Fraction(mask.covered, mask.length)


def nth_power_mask(n: int, v) -> EdgeMask:
    """Edges on an arc reading u^n for some cyclically reduced u (arc length <= |v|)."""
    if n < 1:
        raise ValueError("n must be positive")
    v = _letters(v)
    L = len(v)
    if n == 1:
        # every single letter is a cyclically reduced u
        return EdgeMask(L, (1 << L) - 1)
    diff = [0] * (2 * L + 1)
    for p in range(1, L // n + 1):
        run = kernels.period_runs(v, p, True)
        need = (n - 1) * p
        span = n * p
        for s in range(L):
            if run[s] >= need:
                diff[s] += 1
                diff[s + span] -= 1
    return _fold(diff, L)


def sat_nth_powers(n: int, v) -> Fraction:
    mask = nth_power_mask(n, v)
    return Fraction(mask.covered, mask.length)


def saturation_report(relator: int, w: Sequence[int], m: int, v, alphabet=None) -> SaturationReport:
    mask = word_mask(w, m, v)
    label = alphabet.format(tuple(w)) if alphabet is not None else str(tuple(w))
    return SaturationReport(relator, f"({label})^{m}", mask.covered, Fraction(mask.covered, mask.length), mask)


@dataclass(frozen=True)
class TableRow:
    index: int
    length: int
    p: int
    sats: tuple  # one Fraction per m
    products: tuple


@dataclass(frozen=True)
class ClassificationTable:
    w: Word
    m_list: tuple
    rows: tuple
    running_sup: tuple  # per m: running sup of products after each row
    limsup_estimate: tuple  # per m: max sat over the later half of the rows so far
    sparse_evidence: tuple  # per m: bool, heuristic only

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        head = ["index", "length", "p"]
        for m in self.m_list:
            head += [f"sat_m{m}", f"product_m{m}"]
        wr.writerow(head)
        for r in self.rows:
            line = [r.index, r.length, r.p]
            for s, pr in zip(r.sats, r.products):
                line += [str(s), str(pr)]
            wr.writerow(line)
        return buf.getvalue()


def _quartile_flag(products: list[Fraction]) -> bool:
    """Evidence of boundedness: the last quarter never exceeds the earlier maximum."""
    t = len(products)
    if t < 4:
        return False
    cut = t - max(1, t // 4)
    return max(products[cut:]) <= max(products[:cut])


def classification_table(window: Presentation, w: Sequence[int], m_list: Sequence[int], pieces=None) -> ClassificationTable:
    if len(window) == 0:
        raise ValueError("empty window")
    if pieces is None:
        pieces = longest_pieces(window)
    w = tuple(w)
    m_list = tuple(m_list)
    rows = []
    for i, r in enumerate(window.relators):
        p = pieces.p(i)
        sats = tuple(sat_word(w, m, r) for m in m_list)
        rows.append(TableRow(window.indices[i], len(r), p, sats, tuple(p * s for s in sats)))
    sup, lim, flags = [], [], []
    for j in range(len(m_list)):
        prods = [r.products[j] for r in rows]
        sats = [r.sats[j] for r in rows]
        acc = []
        cur = None
        for x in prods:
            cur = x if cur is None else max(cur, x)
            acc.append(cur)
        sup.append(tuple(acc))
        tail = []
        for t in range(1, len(rows) + 1):
            tail.append(max(sats[math.ceil(t / 2) - 1:t]))
        lim.append(tuple(tail))
        flags.append(_quartile_flag(prods))
    return ClassificationTable(w, m_list, tuple(rows), tuple(sup), tuple(lim), tuple(flags))
