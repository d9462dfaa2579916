"""Deterministic generators for the explicit relator families.

Base alphabets are fixed (``a b c d`` or ``a b``); fresh generators are
named ``x1, x2, ...`` (GLNC supergroup family) and ``y1, y2, ...`` (countable
family) and are numbered by closed-form offsets, so a relator can be produced
without generating its predecessors.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from scg.presentation import Presentation
from scg.words import Alphabet, CyclicWord, Word, cyclic_reduce, free_reduce, invert, multiply

A, B, C, D = 1, 2, 3, 4
ABCD = ("a", "b", "c", "d")
KINDS = ("glnc", "glnc_super", "quadratic", "commutator", "tm_commutator", "countable", "user_file")
DEFAULT_START = {
    "glnc": 7,
    "glnc_super": 5,
    "quadratic": 12,
    "commutator": 12,
    "tm_commutator": 1,
    "countable": 3,
    "user_file": 0,
}


class FamilyError(ValueError):
    pass


# -- function slots ---------------------------------------------------------

SLOT_NAMES = ("const", "identity", "ceil_sqrt", "floor_log2", "table")


@dataclass(frozen=True)
class Slot:
    """A builtin integer function: const c, identity, ceil_sqrt, floor_log2 or a lookup table."""

    name: str
    arg: int | tuple | None = None

    def __post_init__(self):
        if self.name not in SLOT_NAMES:
            raise FamilyError(f"unknown function slot {self.name!r}")
        if self.name == "const" and not isinstance(self.arg, int):
            raise FamilyError("const slot needs an integer argument")
        if self.name == "table":
            if self.arg is None:
                raise FamilyError("table slot needs values")
            object.__setattr__(self, "arg", tuple(int(x) for x in self.arg))

    def __call__(self, n: int) -> int:
        if self.name == "const":
            return self.arg
        if self.name == "identity":
            return n
        if self.name == "ceil_sqrt":
            r = math.isqrt(n)
            return r if r * r == n else r + 1
        if self.name == "floor_log2":
            if n < 1:
                raise FamilyError("floor_log2 needs n >= 1")
            return n.bit_length() - 1
        if not 0 <= n < len(self.arg):
            raise FamilyError(f"table slot has no entry for {n}")
        return self.arg[n]

    @classmethod
    def parse(cls, text) -> "Slot":
        """``identity``, ``const:3``, ``table:0,1,4,9`` or a JSON-style dict."""
        if isinstance(text, Slot):
            return text
        if isinstance(text, dict):
            return cls(text["name"], text.get("arg"))
        name, _, arg = str(text).partition(":")
        if name == "const":
            return cls(name, int(arg))
        if name == "table":
            return cls(name, tuple(int(x) for x in arg.split(",") if x))
        return cls(name)

    def to_json(self) -> dict:
        out = {"name": self.name}
        if self.arg is not None:
            out["arg"] = list(self.arg) if isinstance(self.arg, tuple) else self.arg
        return out


# -- Thue-Morse -------------------------------------------------------------

def tm_bit(i: int) -> int:
    """0-based Thue-Morse bit (0 for a, 1 for b)."""
    return bin(i).count("1") & 1


def thue_morse(length: int) -> Word:
    """First ``length`` letters of the fixed point of a -> ab, b -> ba (a = 1, b = 2)."""
    if length < 1:
        raise FamilyError("length must be positive")
    return tuple(B if tm_bit(i) else A for i in range(length))


def gen_tm_g(n: int) -> Word:
    """(b^3 w_{2^n} ... w_{2^{n+1}-1})^n with 1-based Thue-Morse letters w_i."""
    if n < 1:
        raise FamilyError("n must be positive")
    block = (B, B, B) + tuple(B if tm_bit(i - 1) else A for i in range(2 ** n, 2 ** (n + 1)))
    return free_reduce(block * n)


# -- GLNC words ---------------------------------------------------------------

_BC_ORDER = (B, C, -B, -C)


def reduced_bc_words(k: int) -> Iterator[Word]:
    """Reduced words of length k over b, c and inverses in length-lex order b < c < b' < c'."""
    if k == 0:
        yield ()
        return
    stack = [()]
    # depth-first in reverse so that words come out in lex order
    while stack:
        w = stack.pop()
        if len(w) == k:
            yield w
            continue
        for x in reversed(_BC_ORDER):
            if w and w[-1] == -x:
                continue
            stack.append(w + (x,))


_WORD_CACHE: dict[int, tuple] = {}


def glnc_words(k: int) -> tuple:
    """The 2^(k+4) words w_k^1 .. w_k^(2^(k+4)).

    For k >= 7 these are the first 2^(k+4) reduced words in length-lex
    order.  For k = 5, 6 there are fewer than 2^(k+4) reduced words, so
    once the pool runs dry a word is reused: the least word whose new
    windows of length 2k+2 in the stream d w^1 d w^2 ... (and its inverse)
    have not been seen before.  This keeps every piece at most 2k+1 long.
    """
    if k in _WORD_CACHE:
        return _WORD_CACHE[k]
    need = 2 ** (k + 4)
    pool = list(reduced_bc_words(k))
    if len(pool) >= need:
        out = tuple(pool[:need])
        _WORD_CACHE[k] = out
        return out
    width = 2 * k + 2
    seen: set[tuple] = set()
    stream: list[int] = []
    chosen: list[Word] = []

    def fresh_windows(w):
        ext = stream + [D] + list(w)
        start = max(0, len(stream) - width + 1)
        out = []
        for s in range(start, len(ext) - width + 1):
            out.append(tuple(ext[s:s + width]))
        return out

    def accept(wins):
        local = set()
        for x in wins:
            if x in seen or x in local:
                return False
            local.add(x)
            local.add(invert(x))
        return True

    for i in range(need):
        cands = [pool[i]] if i < len(pool) else pool
        for w in cands:
            wins = fresh_windows(w)
            if accept(wins):
                break
        else:
            raise FamilyError(f"no admissible word w_{k}^{i + 1}")
        for x in wins:
            seen.add(x)
            seen.add(invert(x))
        stream.extend((D,) + w)
        chosen.append(w)
    out = tuple(chosen)
    _WORD_CACHE[k] = out
    return out


def gen_glnc(k: int) -> CyclicWord:
    """r_k = a^(2^k) prod_i d w_k^i."""
    if k < 7:
        raise FamilyError("glnc needs k >= 7")
    letters = [A] * 2 ** k
    for w in glnc_words(k):
        letters.append(D)
        letters.extend(w)
    return CyclicWord(tuple(letters))


def x_offset(k: int) -> int:
    """Number of x-symbols consumed by levels 5 .. k-1."""
    return sum(j * (2 ** j - 1) for j in range(5, k))


def x_word(k: int, j: int) -> tuple[str, ...]:
    """Names of the symbols forming x_k^j (empty for j = 0 and j = 2^k)."""
    if j == 0 or j == 2 ** k:
        return ()
    base = x_offset(k) + (j - 1) * k
    return tuple(f"x{base + t + 1}" for t in range(k))


def gen_glnc_super(k: int) -> tuple[list[Word], list[str]]:
    """R_k^j for 0 <= j < 2^k as words over a b c d x1 x2 ...; returns the words and the x-names used.

    Letters of x_i are 4 + i, matching the alphabet ``a b c d x1 x2 ...``.
    """
    if k < 5:
        raise FamilyError("glnc_super needs k >= 5")
    ws = glnc_words(k)
    rels = []
    for j in range(2 ** k):
        xj = [4 + int(s[1:]) for s in x_word(k, j)]
        xn = [4 + int(s[1:]) for s in x_word(k, j + 1)]
        letters = [A] + xj
        for i in range(16 * j, 16 * (j + 1)):
            letters.append(D)
            letters.extend(ws[i])
        letters.extend(-x for x in reversed(xn))
        rels.append(tuple(letters))
    names = [f"x{i + 1}" for i in range(x_offset(k), x_offset(k + 1))]
    return rels, names


def glnc_super_lengths(k: int) -> tuple[int, int]:
    lo = 1 + 16 * (k + 1) + k
    hi = lo + k
    if 2 ** k == 1:
        lo = hi = 1 + 16 * (k + 1)
    return lo, hi


# -- quadratic ---------------------------------------------------------------

def quadratic_length(n: int) -> int:
    lo, hi = n * n + 1, (n + 1) ** 2
    return (hi - lo + 1) + (lo + hi) * (hi - lo + 1) // 2


def gen_quadratic(n: int) -> CyclicWord:
    """r_n = a b^(n^2+1) a b^(n^2+2) ... a b^((n+1)^2)."""
    if n < 12:
        raise FamilyError("quadratic needs n >= 12")
    letters = []
    for j in range(n * n + 1, (n + 1) ** 2 + 1):
        letters.append(A)
        letters.extend([B] * j)
    return CyclicWord(tuple(letters))


# -- commutator family ---------------------------------------------------------

def commutator(x: Word, y: Word) -> Word:
    return multiply(x, y, invert(x), invert(y))


def surface_generators(g: Word, f: int) -> list[Word]:
    """s_i = d^i c d^-i g d^i c^-1 d^-i for 1 <= i <= 2f."""
    out = []
    for i in range(1, 2 * f + 1):
        di = (D,) * i
        dinv = (-D,) * i
        out.append(free_reduce(di + (C,) + dinv + tuple(g) + di + (-C,) + dinv))
    return out


@dataclass(frozen=True)
class CommutatorRelator:
    n: int
    f: int
    g: Word
    linear: Word  # free reduction of the product of commutators
    core: CyclicWord
    conjugator: Word
    generators: tuple  # s_1 .. s_2f


def gen_commutator(g: Word, f: int, n: int) -> CommutatorRelator:
    """R_n = prod_{i=1}^{f} [s_i, s_{f+i}] and its cyclic reduction."""
    g = tuple(g)
    if not g or free_reduce(g) != g:
        raise FamilyError("g must be a nonempty reduced word")
    if f < 12:
        raise FamilyError("f(n) must be at least 12")
    s = surface_generators(g, f)
    letters: list[int] = []
    for i in range(f):
        letters.extend(commutator(s[i], s[f + i]))
    linear = free_reduce(letters)
    core, conj = cyclic_reduce(linear)
    return CommutatorRelator(n, f, g, linear, core, conj, tuple(s))


def template_g(n: int, rho: Slot) -> Word:
    """a^n b^rho(n) a^-n."""
    e = rho(n)
    if e < 1:
        raise FamilyError("rho(n) must be positive")
    return (A,) * n + (B,) * e + (-A,) * n


# -- countable family ------------------------------------------------------------

def countable_sequence(k_max: int, rho: Slot, tau: Slot, search: int = 10 ** 6) -> list[int]:
    """n_3, ..., n_{k_max}: each the least n above its predecessor meeting the constraints."""
    out = []
    prev = 0
    for k in range(3, k_max + 1):
        n = prev + 1
        limit = prev + search
        while True:
            if n > limit:
                raise FamilyError(f"no admissible n_{k} in ({prev}, {limit}]")
            t = tau(n)
            r = rho(n)
            if t >= 1 and n // t >= 6 and t >= k and 1 <= r <= n and t * t * r <= n:
                break
            n += 1
        out.append(n)
        prev = n
    return out


@dataclass(frozen=True)
class CountableRelator:
    k: int
    n: int
    l: int
    word: CyclicWord  # over a y1 y2 ...: letter of y_i is 1 + i
    symbols: tuple


def gen_countable(k: int, rho: Slot | None = None, tau: Slot | None = None, seq: list | None = None) -> CountableRelator:
    if k < 3:
        raise FamilyError("countable needs k >= 3")
    rho = rho or Slot("const", 1)
    tau = tau or Slot("ceil_sqrt")
    if seq is None:
        seq = countable_sequence(k, rho, tau)
    n = seq[k - 3]
    l = n // tau(n)
    off = 2 * sum(seq[: k - 3])
    ys = tuple(f"y{off + i + 1}" for i in range(2 * n))
    letters = (A,) * l + tuple(2 + off + i for i in range(2 * n))
    return CountableRelator(k, n, l, CyclicWord(letters), ys)


# -- family specs -----------------------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    kind: str
    start: int | None = None
    stop: int | None = None  # inclusive; None means unbounded
    f: Slot | None = None
    rho: Slot | None = None
    tau: Slot | None = None
    g: str | None = None  # fixed base word for the commutator kind
    path: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FamilyError(f"unknown family kind {self.kind!r}")
        if self.start is None:
            object.__setattr__(self, "start", DEFAULT_START[self.kind])
        if self.kind == "user_file" and not self.path:
            raise FamilyError("user_file family needs a path")
        defaults = {
            "f": "const:12" if self.kind == "tm_commutator" else "identity",
            "rho": "const:1" if self.kind == "countable" else "ceil_sqrt",
            "tau": "ceil_sqrt",
        }
        for name, dflt in defaults.items():
            val = getattr(self, name)
            object.__setattr__(self, name, Slot.parse(dflt if val is None else val))

    def to_json(self) -> dict:
        out = {"kind": self.kind, "start": self.start, "stop": self.stop}
        if self.kind in ("commutator", "tm_commutator"):
            out["f"] = self.f.to_json()
        if self.kind == "commutator":
            out["rho"] = self.rho.to_json()
            if self.g is not None:
                out["g"] = self.g
        if self.kind == "countable":
            out["rho"] = self.rho.to_json()
            out["tau"] = self.tau.to_json()
        if self.path is not None:
            out["path"] = self.path
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FamilySpec":
        data = dict(data)
        rng = data.pop("range", None)
        if rng is not None:
            start, stop = parse_range(rng)
            data["start"], data["stop"] = start, stop
        allowed = {"kind", "start", "stop", "f", "rho", "tau", "g", "path"}
        bad = set(data) - allowed
        if bad:
            raise FamilyError(f"unknown family fields {sorted(bad)}")
        return cls(**data)


def parse_range(text) -> tuple[int, int | None]:
    """``12..20``, ``12..`` or ``[12, 20]``."""
    if isinstance(text, (list, tuple)):
        return int(text[0]), (None if text[1] is None else int(text[1]))
    lo, sep, hi = str(text).partition("..")
    if not sep:
        v = int(lo)
        return v, v
    return int(lo), (int(hi) if hi.strip() else None)


def make_spec(kind: str, rng: str | None = None, **kw) -> FamilySpec:
    data = {"kind": kind}
    if rng is not None:
        data["range"] = rng
    data.update({k: v for k, v in kw.items() if v is not None})
    return FamilySpec.from_json(data)


@dataclass
class _Item:
    index: int
    words: list  # relator words at this index (several for glnc_super)
    lower: int  # lower bound on the length of any relator at a later index
    cyclic: list = None

    def __post_init__(self):
        self.cyclic = [CyclicWord(w) for w in self.words]


class FamilyStream:
    """Lazily generated relators of a family in index order, cached."""

    def __init__(self, spec: FamilySpec):
        self.spec = spec
        self._items: list[_Item] = []
        self._next = spec.start
        self._seq: list[int] = []
        self._user: Presentation | None = None
        self._built: dict[tuple, Presentation] = {}
        self.base = self._base_names()

    def _base_names(self) -> tuple:
        kind = self.spec.kind
        if kind == "quadratic":
            return ("a", "b")
        if kind == "countable":
            return ("a",)
        if kind == "user_file":
            return self.user.alphabet.names
        return ABCD

    @property
    def user(self) -> Presentation:
        if self._user is None:
            p = Path(self.spec.path)
            if not p.exists():
                raise FamilyError(f"presentation file {p} not found")
            self._user = Presentation.load(p)
        return self._user

    def g_word(self, n: int) -> Word:
        if self.spec.kind == "tm_commutator":
            return gen_tm_g(n)
        if self.spec.g is not None:
            return Alphabet(ABCD).parse(self.spec.g)
        return template_g(n, self.spec.rho)

    def _make(self, n: int) -> list:
        kind = self.spec.kind
        if kind == "glnc":
            return [gen_glnc(n).letters]
        if kind == "glnc_super":
            return gen_glnc_super(n)[0]
        if kind == "quadratic":
            return [gen_quadratic(n).letters]
        if kind in ("commutator", "tm_commutator"):
            return [gen_commutator(self.g_word(n), self.spec.f(n), n).core.letters]
        if kind == "countable":
            while len(self._seq) < n - 2:
                self._seq = countable_sequence(n, self.spec.rho, self.spec.tau)
            return [gen_countable(n, self.spec.rho, self.spec.tau, self._seq).word.letters]
        raise AssertionError(kind)

    def _lower_after(self, n: int, words: list) -> int:
        if self.spec.kind == "glnc_super":
            return glnc_super_lengths(n + 1)[0]
        return max(len(w) for w in words) + 1

    def _exhausted(self, n: int) -> bool:
        return self.spec.stop is not None and n > self.spec.stop

    def items_upto(self, max_length: int) -> Iterator[_Item]:
        """Indices whose relators may have length <= max_length, generating on demand."""
        pos = 0
        while True:
            if pos < len(self._items):
                item = self._items[pos]
            else:
                n = self._next
                if self._exhausted(n):
                    return
                prev_lower = self._items[-1].lower if self._items else 0
                if prev_lower > max_length:
                    return
                words = self._make(n)
                if self.spec.kind != "glnc_super" and words and len(words[0]) < prev_lower:
                    raise FamilyError("family lengths are not increasing; cannot enumerate by length")
                item = _Item(n, words, self._lower_after(n, words))
                self._items.append(item)
                self._next = n + 1
            yield item
            if item.lower > max_length:
                return
            pos += 1

    def alphabet_for(self, words) -> Alphabet:
        kind = self.spec.kind
        names = list(self.base)
        top = max((max(max(w), -min(w)) for w in words if w), default=0)
        if kind == "glnc_super":
            names += [f"x{i}" for i in range(1, top - 4 + 1)]
        elif kind == "countable":
            names += [f"y{i}" for i in range(1, top - 1 + 1)]
        return Alphabet(names)

    def presentation(self, max_length: int | None = None) -> Presentation:
        if self.spec.kind == "user_file":
            pres = self.user
            keep = [i for i, r in enumerate(pres.relators) if max_length is None or len(r) <= max_length]
            return pres.subset(keep)
        if max_length is None:
            if self.spec.stop is None:
                raise FamilyError("an unbounded family needs a length bound or an index range")
            max_length = 1 << 62
        picked = []
        for n, item in enumerate(self.items_upto(max_length)):
            for j, w in enumerate(item.words):
                if len(w) <= max_length:
                    picked.append((n, j))
        key = tuple(picked)
        pres = self._built.get(key)
        if pres is None:
            words = [self._items[n].cyclic[j] for n, j in picked]
            idx = [self._items[n].index for n, _ in picked]
            alpha = self.alphabet_for([w.letters for w in words])
            pres = Presentation(alpha, tuple(words), tuple(idx), self.spec.to_json())
            self._built[key] = pres
        return pres


_STREAMS: dict[FamilySpec, FamilyStream] = {}


def stream(spec: FamilySpec) -> FamilyStream:
    s = _STREAMS.get(spec)
    if s is None:
        s = _STREAMS[spec] = FamilyStream(spec)
    return s


def enumerate_relators(spec: FamilySpec, max_length: int) -> Presentation:
    """Every relator of the family with |r| <= max_length (a finite prefix)."""
    if max_length <= 0:
        st = stream(spec)
        return Presentation(Alphabet(st.base), (), (), spec.to_json())
    return stream(spec).presentation(max_length)


def family_presentation(spec: FamilySpec) -> Presentation:
    """All relators in the FamilySpec index range (the range must be bounded)."""
    return stream(spec).presentation(None)


def load_spec(text_or_path) -> FamilySpec:
    """Inline JSON or a path to a JSON file."""
    s = str(text_or_path)
    if s.lstrip().startswith("{"):
        return FamilySpec.from_json(json.loads(s))
    return FamilySpec.from_json(json.loads(Path(s).read_text()))
