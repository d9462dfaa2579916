"""Free-group words over an ordered alphabet.

A word is a plain tuple of nonzero ints: generator ``i`` of the alphabet
(0-based) is the letter ``i + 1`` and its inverse is ``-(i + 1)``.  Keeping
words as tuples makes them hashable, immutable and cheap to slice, which
matters once relators reach 10^5 letters.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Word = tuple  # tuple[int, ...]

_SYMBOL_RE = re.compile(r"[a-z][a-z0-9]*\Z")
_TOKEN_RE = re.compile(r"([a-z][a-z0-9]*)(?:(')|\^(-?)(\d+))?\Z")
_COMPACT_RE = re.compile(r"[A-Za-z]+\Z")


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbolError(KeyError):
    pass


class Alphabet:
    """Ordered, optionally extensible set of generator names."""

    def __init__(self, names: Iterable[str] = (), extensible: bool = False):
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        self.extensible = extensible
        for name in names:
            self.add(name)

    def add(self, name: str) -> int:
        """Register ``name`` (if new) and return its positive letter."""
        if name in self._index:
            return self._index[name] + 1
        if not _SYMBOL_RE.match(name):
            raise ValueError(f"invalid symbol name {name!r}")
        self._index[name] = len(self._names)
        self._names.append(name)
        return len(self._names)

    def letter(self, name: str, sign: int = 1) -> int:
        try:
            i = self._index[name]
        except KeyError:
            if not self.extensible:
                raise UnknownSymbolError(name) from None
            i = self.add(name) - 1
        return (i + 1) * sign

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self._names == other._names

    def __repr__(self) -> str:
        return f"Alphabet({self._names!r})"

    def copy(self, extensible: bool | None = None) -> "Alphabet":
        return Alphabet(self._names, self.extensible if extensible is None else extensible)

    def name(self, letter: int) -> str:
        return self._names[abs(letter) - 1]

    def parse(self, text: str, compact: bool | None = None) -> Word:
        return parse_word(text, self, compact=compact)

    def format(self, word: Sequence[int], compact: bool = False) -> str:
        if compact:
            if any(len(n) != 1 for n in self._names):
                raise ValueError("compact format needs single-letter symbols")
            return "".join(self.name(x) if x > 0 else self.name(x).upper() for x in word)
        tokens = []
        i = 0
        n = len(word)
        while i < n:
            x = word[i]
            j = i
            while j < n and word[j] == x:
                j += 1
            k = j - i
            name = self.name(x)
            if k == 1:
                tokens.append(name if x > 0 else name + "'")
            else:
                tokens.append(f"{name}^{k}" if x > 0 else f"{name}^-{k}")
            i = j
        return " ".join(tokens)


def order_key(letter: int) -> int:
    """Sort key: alphabet order, with x before x^-1."""
    return 2 * abs(letter) - (1 if letter > 0 else 0)


def parse_word(text: str, alphabet: Alphabet, compact: bool | None = None) -> Word:
    """Parse token syntax (``a b^3 c' d^-2``) or compact syntax (``aabAB``).

    ``compact=None`` picks compact mode when ``text`` is a run of ASCII letters
    containing at least one uppercase letter.
    """
    stripped = text.strip()
    if compact is None:
        compact = bool(_COMPACT_RE.match(stripped)) and stripped != stripped.lower()
    letters: list[int] = []
    if compact:
        for pos, ch in enumerate(text):
            if ch.isspace():
                continue
            if not ("a" <= ch.lower() <= "z"):
                raise WordSyntaxError(f"unexpected character {ch!r}", pos)
            letters.append(alphabet.letter(ch.lower(), -1 if ch.isupper() else 1))
        return free_reduce(letters)
    for m in re.finditer(r"\S+", text):
        tok = m.group(0)
        tm = _TOKEN_RE.match(tok)
        if tm is None:
            raise WordSyntaxError(f"bad token {tok!r}", m.start())
        name, prime, neg, exp = tm.groups()
        if prime:
            count, sign = 1, -1
        elif exp is not None:
            count = int(exp)
            if count == 0:
                raise WordSyntaxError("exponent must be positive", m.start())
            sign = -1 if neg else 1
        else:
            count, sign = 1, 1
        letters.extend([alphabet.letter(name, sign)] * count)
    return free_reduce(letters)


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(x != -y for x, y in zip(w, w[1:]))


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def invert(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    return free_reduce(x for w in words for x in w)


def power(w: Sequence[int], n: int) -> Word:
    if n < 0:
        return free_reduce(invert(w) * (-n))
    return free_reduce(tuple(w) * n)


def rotate(w: Sequence[int], k: int) -> Word:
    if not w:
        return ()
    k %= len(w)
    return tuple(w[k:]) + tuple(w[:k])


def cyclic_reduce(w: Sequence[int]) -> tuple["CyclicWord", Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with core cyclically reduced."""
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return CyclicWord(w[i:j + 1]), w[:i]


def least_rotation(w: Sequence[int]) -> int:
    """Offset of the lexicographically least rotation (Booth's algorithm)."""
    s = [order_key(x) for x in w]
    n = len(s)
    if n == 0:
        return 0
    s = s + s
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


def canonical_rotation(c: "CyclicWord | Sequence[int]") -> Word:
    w = c.letters if isinstance(c, CyclicWord) else tuple(c)
    return rotate(w, least_rotation(w))


def smallest_period(w: Sequence[int]) -> int:
    """Smallest p with w[i] == w[i + p] for all valid i (prefix function)."""
    n = len(w)
    if n == 0:
        return 0
    pi = [0] * n
    k = 0
    for i in range(1, n):
        while k and w[i] != w[k]:
            k = pi[k - 1]
        if w[i] == w[k]:
            k += 1
        pi[i] = k
    return n - pi[-1]


def primitive_root(w: Sequence[int]) -> tuple[Word, int]:
    if not w:
        raise ValueError("primitive_root of the empty word")
    n = len(w)
    p = smallest_period(w)
    if n % p:
        return tuple(w), 1
    return tuple(w[:p]), n // p


def cyclic_period(w: Sequence[int]) -> int:
    """Length of the primitive root of a cyclic word (number of distinct rotations)."""
    return len(primitive_root(w)[0]) if w else 0


@dataclass(frozen=True)
class CyclicWord:
    """A cyclically reduced word up to rotation.

    ``letters`` is the stored representative; equality and hashing go
    through the canonical (least) rotation.
    """

    letters: Word
    _canon: Word | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if not is_cyclically_reduced(letters):
            raise ValueError("word is not cyclically reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    @property
    def canonical(self) -> Word:
        if self._canon is None:
            object.__setattr__(self, "_canon", canonical_rotation(self.letters))
        return self._canon

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclicWord):
            return NotImplemented
        return len(self) == len(other) and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def rotate(self, k: int) -> "CyclicWord":
        return CyclicWord(rotate(self.letters, k))

    def inverse(self) -> "CyclicWord":
        return CyclicWord(invert(self.letters))

    def period(self) -> int:
        return cyclic_period(self.letters)
