"""Presentations, their symmetrized closure, pieces and C'(lambda) certificates."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from scg import kernels
from scg.words import (
    Alphabet,
    CyclicWord,
    Word,
    canonical_rotation,
    cyclic_period,
    invert,
    is_cyclically_reduced,
    order_key,
)


class PresentationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Presentation:
    """A finite list of cyclically reduced relators over an alphabet.

    ``indices`` carries the family index of each relator (defaults to
    0, 1, ...) and ``family`` is free-form metadata such as a family spec.
    """

    alphabet: Alphabet
    relators: tuple
    indices: tuple = ()
    family: dict | None = None

    def __post_init__(self):
        rels = tuple(r if isinstance(r, CyclicWord) else CyclicWord(tuple(r)) for r in self.relators)
        object.__setattr__(self, "relators", rels)
        if not self.indices:
            object.__setattr__(self, "indices", tuple(range(len(rels))))
        else:
            object.__setattr__(self, "indices", tuple(self.indices))
        if len(self.indices) != len(rels):
            raise PresentationError("indices and relators differ in length")
        self._validate()

    def _validate(self):
        nsym = len(self.alphabet)
        by_len: dict[int, list[int]] = {}
        for pos, r in enumerate(self.relators):
            if len(r) == 0:
                raise PresentationError(f"relator {pos} is empty")
            if min(r.letters) < -nsym or max(r.letters) > nsym:
                raise PresentationError(f"relator {pos} uses a letter outside the alphabet")
            by_len.setdefault(len(r), []).append(pos)
        # relators of different length never collide, so canonical forms are
        # only needed inside equal-length groups
        for group in by_len.values():
            if len(group) < 2:
                continue
            seen: dict[tuple, int] = {}
            for pos in group:
                r = self.relators[pos]
                key = r.canonical
                if key in seen:
                    raise PresentationError(f"relator {pos} duplicates relator {seen[key]}")
                ikey = canonical_rotation(invert(r.letters))
                if ikey in seen:
                    raise PresentationError(f"relator {pos} is the inverse of relator {seen[ikey]}")
                seen[key] = pos

    def __len__(self) -> int:
        return len(self.relators)

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def min_length(self) -> int:
        return min((len(r) for r in self.relators), default=0)

    def subset(self, positions: Iterable[int]) -> "Presentation":
        positions = list(positions)
        return Presentation(
            self.alphabet,
            tuple(self.relators[i] for i in positions),
            tuple(self.indices[i] for i in positions),
            self.family,
        )

    @classmethod
    def from_strings(cls, alphabet, relators: Sequence[str], indices=(), family=None) -> "Presentation":
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(alphabet, extensible=True)
        words = []
        for text in relators:
            w = alphabet.parse(text)
            if not is_cyclically_reduced(w):
                raise PresentationError(f"relator {text!r} is not cyclically reduced")
            words.append(CyclicWord(w))
        return cls(alphabet.copy(extensible=False), tuple(words), tuple(indices), family)

    def to_json(self) -> dict:
        out = {
            "alphabet": list(self.alphabet.names),
            "relators": [self.alphabet.format(r.letters) for r in self.relators],
            "indices": list(self.indices),
        }
        if self.family is not None:
            out["family"] = self.family
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        try:
            return cls.from_strings(
                data["alphabet"], data["relators"], data.get("indices", ()), data.get("family")
            )
        except KeyError as exc:
            raise PresentationError(f"presentation JSON lacks {exc}") from None

    @classmethod
    def load(cls, path) -> "Presentation":
        return cls.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class Occurrence:
    """Rotation ``rotation`` of relator ``relator`` read in ``orientation`` (+1 or -1)."""

    relator: int
    orientation: int
    rotation: int


class SymmetrizedView:
    """The symmetrized relator set, addressed as (relator, orientation, rotation).

    Members are never materialized; two addresses name the same member
    iff they agree on relator and orientation and their rotations agree
    modulo the primitive period of the relator.
    """

    def __init__(self, pres: Presentation):
        self.presentation = pres
        self.sources: list[tuple[int, int, Word]] = []
        self.periods: list[int] = []
        for i, r in enumerate(pres.relators):
            q = cyclic_period(r.letters)
            for o in (1, -1):
                self.sources.append((i, o, r.letters if o == 1 else invert(r.letters)))
                self.periods.append(q)

    def word(self, occ: Occurrence) -> Word:
        w = self.presentation.relators[occ.relator].letters
        if occ.orientation < 0:
            w = invert(w)
        t = occ.rotation % len(w)
        return w[t:] + w[:t]

    def same_member(self, a: Occurrence, b: Occurrence) -> bool:
        if a.relator != b.relator or a.orientation != b.orientation:
            return False
        q = cyclic_period(self.presentation.relators[a.relator].letters)
        return (a.rotation - b.rotation) % q == 0

    def member_count(self) -> int:
        return sum(self.periods)

    def prefix_occurrences(self, u: Sequence[int]) -> list[Occurrence]:
        """One address per distinct member having ``u`` as a prefix."""
        u = tuple(u)
        out = []
        for (i, o, w), q in zip(self.sources, self.periods):
            n = len(w)
            if len(u) > n:
                continue
            ww = w + w
            for t in range(q):
                if ww[t:t + len(u)] == u:
                    out.append(Occurrence(i, o, t))
        return out

    def is_piece(self, u: Sequence[int]) -> bool:
        return len(self.prefix_occurrences(u)) >= 2


@dataclass(frozen=True)
class RelatorPieces:
    relator: int
    length: int
    p: int
    piece: Word
    witnesses: tuple  # two Occurrence records, or () when p == 0


@dataclass(frozen=True)
class PieceReport:
    per_relator: tuple
    lambda_star: Fraction

    def p(self, i: int) -> int:
        return self.per_relator[i].p


@dataclass(frozen=True)
class SCReport:
    lam: Fraction
    holds: bool
    lambda_star: Fraction
    violations: tuple  # (piece word, relator position, |piece|, |relator|)


def _build_text(view: SymmetrizedView):
    """Concatenate doubled sources with unique separators; return text and indexed suffixes."""
    letters = 2 * len(view.presentation.alphabet) + 1
    text: list[int] = []
    starts = []
    for k, (_, _, w) in enumerate(view.sources):
        starts.append(len(text))
        n = len(w)
        keys = [order_key(x) for x in w]
        text.extend(keys)
        text.extend(keys[:n - 1])
        text.append(letters + k)
    # source id and rotation for every indexed text position
    owner = {}
    for k, (st, q) in enumerate(zip(starts, view.periods)):
        for t in range(q):
            owner[st + t] = (k, t)
    return text, owner


def longest_pieces(pres: Presentation) -> PieceReport:
    """Exact longest piece per relator via a suffix array over doubled words."""
    view = SymmetrizedView(pres)
    nrel = len(pres.relators)
    if nrel == 0:
        return PieceReport((), Fraction(0))
    text, owner = _build_text(view)
    sa = kernels.suffix_array(text)
    lcp = kernels.lcp_array(text, sa)
    # restrict to indexed suffixes; gap[i] is the text LCP between
    # consecutive indexed suffixes (a range minimum over the full array)
    idx: list[tuple[int, int]] = []
    gap: list[int] = []
    run = None
    for r, pos in enumerate(sa):
        o = owner.get(pos)
        if o is not None:
            if idx:
                gap.append(run)
            idx.append(o)
            run = 1 << 60
        if r < len(lcp) and run is not None:
            run = min(run, lcp[r])
    lens = [len(w) for (_, _, w) in view.sources]
    best = [0] * nrel
    wit: list[tuple | None] = [None] * nrel
    m = len(idx)
    for a in range(m):
        k, t = idx[a]
        i, o, _ = view.sources[k]
        if o != 1:
            continue
        na = lens[k]
        cur = best[i]
        found = None
        for step in (-1, 1):
            runmin = 1 << 60
            b = a
            while True:
                g = b - 1 if step < 0 else b
                if g < 0 or g >= m - 1:
                    break
                runmin = min(runmin, gap[g])
                if runmin <= cur:
                    break
                b += step
                cand = min(runmin, na, lens[idx[b][0]])
                if cand > cur:
                    cur = cand
                    found = (t, idx[b])
        if found is not None:
            best[i] = cur
            wit[i] = found
    per = []
    for i, r in enumerate(pres.relators):
        w = wit[i]
        if w is None or best[i] == 0:
            per.append(RelatorPieces(i, len(r), 0, (), ()))
            continue
        t, (k2, t2) = w
        i2, o2, _ = view.sources[k2]
        letters = r.letters
        piece = (letters[t:] + letters[:t])[:best[i]]
        per.append(
            RelatorPieces(i, len(r), best[i], piece, (Occurrence(i, 1, t), Occurrence(i2, o2, t2)))
        )
    lam = max(Fraction(x.p, x.length) for x in per)
    return PieceReport(tuple(per), lam)


def check_small_cancellation(pres: Presentation, lam, report: PieceReport | None = None) -> SCReport:
    """C'(lam): every piece u inside a relator r has |u| < lam*|r|."""
    lam = Fraction(lam)
    if not 0 < lam <= 1:
        raise ValueError("lambda must lie in (0, 1]")
    if report is None:
        report = longest_pieces(pres)
    violations = tuple(
        (x.piece, x.relator, x.p, x.length)
        for x in report.per_relator
        if Fraction(x.p, x.length) >= lam
    )
    return SCReport(lam, not violations, report.lambda_star, violations)


@dataclass(frozen=True)
class PowerArc:
    root: Word
    exponent: int
    start: int
    length: int


def max_power_arc(c) -> PowerArc:
    """Largest n such that some arc of the cycle (length <= |c|) reads u^n, u primitive."""
    letters = c.letters if isinstance(c, CyclicWord) else tuple(c)
    L = len(letters)
    if L == 0:
        raise ValueError("empty cycle")
    best = 0
    best_p = 1
    best_s = 0
    p = 1
    while p <= L // (best + 1):
        run = kernels.period_runs(letters, p, True)
        top = -1
        top_s = 0
        for s, x in enumerate(run):
            if x > top:
                top = x
                top_s = s
        e = min(p + top, L) // p
        if e > best:
            best, best_p, best_s = e, p, top_s
        p += 1
    root = tuple(letters[(best_s + i) % L] for i in range(best_p))
    return PowerArc(root, best, best_s, best * best_p)


def power_spectrum(pres: Presentation) -> tuple[list[PowerArc], int]:
    arcs = [max_power_arc(r) for r in pres.relators]
    return arcs, max((a.exponent for a in arcs), default=0)
