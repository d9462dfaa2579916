"""Dehn's algorithm for C'(1/6) presentations and relator families.

A step finds an arc u of the cyclic word that is also an arc of some
symmetrized relator r with 2|u| > |r|, and replaces u by the inverse of its
complement in r.  Candidate arcs are located through rolling hashes of the
shortest admissible match length and verified letter by letter.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from scg import kernels
from scg.families import FamilySpec, enumerate_relators
from scg.presentation import Presentation, check_small_cancellation
from scg.words import CyclicWord, Word, cyclic_reduce, free_reduce, invert, rotate

SIXTH = Fraction(1, 6)


class NotCertified(RuntimeError):
    """The relator window fails C'(1/6), so Dehn reduction would be unsound."""


@dataclass(frozen=True)
class DehnStep:
    before: Word  # cyclic word before the step
    start: int  # where the matched arc begins in ``before``
    length: int  # |u|
    relator: int  # family index of the relator
    relator_word: Word
    orientation: int
    rotation: int  # member = rotation of the relator (or its inverse) by this much
    complement: Word  # s with u.s equal to the member
    conjugator: Word  # c with s^-1.rest = c.after.c^-1 after free reduction
    after: Word


@dataclass(frozen=True)
class DehnTrace:
    word: Word  # the input, freely reduced
    conjugator: Word  # word = conjugator . core . conjugator^-1
    steps: tuple
    final: Word

    @property
    def trivial(self) -> bool:
        return not self.final

    def to_json(self, alphabet) -> dict:
        f = alphabet.format
        return {
            "word": f(self.word),
            "conjugator": f(self.conjugator),
            "trivial": self.trivial,
            "final": f(self.final),
            "steps": [
                {
                    "before": f(s.before),
                    "start": s.start,
                    "length": s.length,
                    "relator": s.relator,
                    "relator_word": f(s.relator_word),
                    "orientation": s.orientation,
                    "rotation": s.rotation,
                    "complement": f(s.complement),
                    "conjugator": f(s.conjugator),
                    "after": f(s.after),
                }
                for s in self.steps
            ],
        }


class DehnIndex:
    """Hash index over all rotations of certified windows, grown on demand.

    The hash length h = floor(min |r| / 2) + 1 is the shortest possible
    match, so every admissible arc starts with an indexed window.
    """

    def __init__(self, certify: bool = True):
        self.certify = certify
        self.sources: list[tuple[int, int, Word]] = []  # (family index, orientation, word)
        self.h = 0
        self.table: dict[int, list[tuple[int, int]]] = {}
        self.known: set = set()
        self.rank: list[tuple] = []  # tie-break key per source: (family index, canonical word)

    def extend(self, window: Presentation) -> None:
        """Index the relators of ``window`` not indexed yet, certifying the window first."""
        new = [pos for pos, r in enumerate(window.relators) if r.letters not in self.known]
        if not new:
            return
        if self.certify:
            sc = check_small_cancellation(window, SIXTH)
            if not sc.holds:
                raise NotCertified(f"window is not C'(1/6): lambda* = {sc.lambda_star}")
        h = window.min_length() // 2 + 1
        if not self.sources:
            self.h = h
        elif h != self.h:
            raise ValueError("window does not contain the shortest indexed relator")
        for pos in new:
            r = window.relators[pos]
            self.known.add(r.letters)
            for o in (1, -1):
                src = r.letters if o == 1 else invert(r.letters)
                k = len(self.sources)
                self.sources.append((window.indices[pos], o, src))
                self.rank.append((window.indices[pos], r.canonical))
                hs = kernels.window_hashes(src + src[: self.h - 1], self.h)
                tab = self.table
                for t, x in enumerate(hs):
                    lst = tab.get(x)
                    if lst is None:
                        tab[x] = [(k, t)]
                    else:
                        lst.append((k, t))

    @property
    def count(self) -> int:
        return len(self.known)

    def best_match(self, c: Word, max_rel: int):
        """Longest arc of c shared with a member r, |r| <= max_rel, with 2|u| > |r|."""
        n = len(c)
        h = self.h
        if n == 0 or h == 0 or h > n:
            return None
        cc = c + c
        hs = kernels.window_hashes(cc[: n + h - 1], h)
        best = None
        best_key = None
        sources = self.sources
        for s in range(n):
            hits = self.table.get(hs[s])
            if not hits:
                continue
            for k, t in hits:
                _, o, src = sources[k]
                L = len(src)
                if L > max_rel:
                    continue
                # only maximal-left starts; s = 0 also covers full-circle diagonals
                if s > 0 and cc[s - 1] == src[t - 1]:
                    continue
                cap = min(L, n)
                ell = 0
                while ell < cap and cc[s + ell] == src[(t + ell) % L]:
                    ell += 1
                if ell < h or 2 * ell <= L:
                    continue
                key = (-ell, self.rank[k], -o, t, s)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (s, ell, k, t)
        return best


def _apply(c: Word, match, index: DehnIndex) -> DehnStep:
    s, ell, k, t = match
    fam_idx, o, src = index.sources[k]
    member = rotate(src, t)
    comp = member[ell:]
    rest = rotate(c, s)[ell:]
    core, conj = cyclic_reduce(invert(comp) + rest)
    rel = src if o == 1 else invert(src)
    return DehnStep(c, s, ell, fam_idx, rel, o, t, comp, conj, core.letters)


def dehn_step(w, window: Presentation, index: DehnIndex | None = None):
    """One reduction step on the cyclic word w, or None if w is Dehn-reduced.

    Raises NotCertified when the window fails C'(1/6).
    """
    letters = w.letters if isinstance(w, CyclicWord) else tuple(w)
    if index is None:
        index = DehnIndex()
        index.extend(window)
    if len(window) == 0:
        return None
    match = index.best_match(letters, max(len(r) for r in window.relators))
    if match is None:
        return None
    step = _apply(letters, match, index)
    return CyclicWord(step.after), step


def replay(trace: DehnTrace) -> Word:
    """Rebuild the input word from the final word and the recorded relator insertions."""
    cur = trace.final
    for st in reversed(trace.steps):
        src = step_member(st)
        linear = free_reduce(src + st.conjugator + cur + invert(st.conjugator))
        cur = rotate(linear, -st.start)
        if cur != st.before:
            raise AssertionError("trace replay diverged")
    return free_reduce(trace.conjugator + cur + invert(trace.conjugator))


def step_member(st: DehnStep) -> Word:
    """The symmetrized relator inserted by a step, read from the relator itself."""
    src = st.relator_word if st.orientation == 1 else invert(st.relator_word)
    return rotate(src, st.rotation)


_INDEXES: dict[FamilySpec, DehnIndex] = {}


def _family_index(spec: FamilySpec, max_length: int) -> DehnIndex:
    # C'(1/6) on the largest window requested implies it on every sub-window
    index = _INDEXES.get(spec)
    if index is None:
        index = _INDEXES[spec] = DehnIndex()
    index.extend(enumerate_relators(spec, max_length))
    return index


def _reduce(word: Word, index: DehnIndex | None) -> DehnTrace:
    core, conj = cyclic_reduce(word)
    cur = core.letters
    steps = []
    while cur and index is not None and index.count:
        match = index.best_match(cur, 2 * len(cur))
        if match is None:
            break
        st = _apply(cur, match, index)
        steps.append(st)
        cur = st.after
    return DehnTrace(word, conj, tuple(steps), cur)


def is_trivial(w: Sequence[int], family: FamilySpec) -> tuple[bool, DehnTrace]:
    word = free_reduce(w)
    index = None
    n = len(cyclic_reduce(word)[0])
    if n:
        # a cyclic word of length n only holds half of a relator of length <= 2n
        index = _family_index(family, 2 * n)
    trace = _reduce(word, index)
    return trace.trivial, trace


def are_equal(w1: Sequence[int], w2: Sequence[int], family: FamilySpec) -> tuple[bool, DehnTrace]:
    return is_trivial(free_reduce(tuple(w1) + invert(w2)), family)


class PresentationOracle:
    """Word problem for a fixed finite presentation, certified once."""

    def __init__(self, pres: Presentation):
        self.presentation = pres
        self.index = DehnIndex()
        self.index.extend(pres)

    def is_trivial(self, w: Sequence[int]) -> tuple[bool, DehnTrace]:
        trace = _reduce(free_reduce(w), self.index)
        return trace.trivial, trace

    def are_equal(self, w1: Sequence[int], w2: Sequence[int]) -> tuple[bool, DehnTrace]:
        return self.is_trivial(free_reduce(tuple(w1) + invert(w2)))
