"""Cycle splitting: embed <S|R> into <S'|R'> so that R' avoids high powers of w.

Edges of each relator cycle are colored red (on an arc reading a conjugate
of w^m or its inverse), blue (other base edges) or white (fresh symbols added
by earlier splits).  Each split cuts off a D-cycle P.alpha and continues on
alpha^-1.Q, where alpha is a path of p fresh symbols.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from scg.presentation import Presentation, PieceReport, check_small_cancellation, longest_pieces
from scg.saturation import coverage, pattern_core, sat_word
from scg.words import Alphabet, CyclicWord, Word, free_reduce, invert, rotate

RED, BLUE, WHITE = "R", "B", "W"
M_SEARCH_LIMIT = 2 ** 20


class SupergroupError(RuntimeError):
    pass


class PigeonholeExhausted(SupergroupError):
    def __init__(self, reason: str, cycle: "ColoredCycle"):
        super().__init__(f"pigeonhole exhausted: {reason}")
        self.cycle = cycle


@dataclass(frozen=True)
class ColoredCycle:
    letters: Word
    colors: str  # one of R, B, W per edge
    source: int = 0
    generation: int = 0

    def __post_init__(self):
        if len(self.letters) != len(self.colors):
            raise ValueError("one color per edge")

    def __len__(self) -> int:
        return len(self.letters)

    def count(self, color: str) -> int:
        return self.colors.count(color)

    def red_runs(self) -> list[tuple[int, int]]:
        """Maximal cyclic red runs as (start, length); a fully red cycle gives [(0, L)]."""
        return _runs(self.colors, RED)

    def to_dot(self, alphabet: Alphabet, name: str = "cycle") -> str:
        return cycles_to_dot([self], alphabet, name)


def _runs(colors: str, c: str) -> list[tuple[int, int]]:
    L = len(colors)
    if L == 0:
        return []
    if colors.count(c) == L:
        return [(0, L)]
    out = []
    # begin just after an edge of another color so no run is split by the wrap
    first = next(i for i in range(L) if colors[i] != c)
    i = 0
    while i < L:
        e = (first + 1 + i) % L
        if colors[e] != c:
            i += 1
            continue
        j = i
        while j < L and colors[(first + 1 + j) % L] == c:
            j += 1
        out.append((e, j - i))
        i = j
    return sorted(out)


_DOT_COLOR = {RED: 'color="red"', BLUE: 'color="blue"', WHITE: 'color="gray", style="dashed"'}


def cycles_to_dot(cycles: Sequence[ColoredCycle], alphabet: Alphabet, name: str = "cycles") -> str:
    """DOT digraph; white edges are drawn gray and dashed."""
    lines = [f"digraph {name} {{", "  node [shape=point];"]
    for k, cyc in enumerate(cycles):
        L = len(cyc)
        for e in range(L):
            x = cyc.letters[e]
            label = alphabet.name(x) + ("'" if x < 0 else "")
            lines.append(
                f'  c{k}_{e} -> c{k}_{(e + 1) % L} [label="{label}", {_DOT_COLOR[cyc.colors[e]]}];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def color_cycle(r, w: Sequence[int], m: int, source: int = 0) -> ColoredCycle:
    letters = r.letters if isinstance(r, CyclicWord) else tuple(r)
    mask = coverage(letters, [pattern_core(w, m)])
    colors = "".join(RED if f else BLUE for f in mask.flags())
    return ColoredCycle(letters, colors, source, 0)


# -- constants ---------------------------------------------------------------

@dataclass(frozen=True)
class SupergroupParams:
    m: int
    D: Fraction
    N: int


def choose_constants(window: Presentation, w: Sequence[int], pieces: PieceReport | None = None) -> SupergroupParams:
    """Least power of two m with m > 12 D(m), where D(m) = max_r p_r sat_{w^m}(C_r)."""
    if len(window) == 0:
        raise SupergroupError("empty window")
    if pieces is None:
        pieces = longest_pieces(window)
    ps = [pieces.p(i) for i in range(len(window))]
    m = 1
    while m <= M_SEARCH_LIMIT:
        prods = [p * sat_word(w, m, r) for p, r in zip(ps, window.relators)]
        D = max(prods)
        if m > 12 * D:
            return SupergroupParams(m, D, _least_N(window, prods, D))
        m *= 2
    raise SupergroupError("window shows no sparseness evidence")


def _least_N(window: Presentation, prods: list[Fraction], D: Fraction) -> int:
    # relators with no red edges never need the bound
    ok = [x < 2 * D or x == 0 for x in prods]
    order = sorted(range(len(window)), key=lambda i: window.indices[i])
    N = window.indices[order[-1]] + 1
    for i in reversed(order):
        if not ok[i]:
            break
        N = window.indices[i]
    return N


# -- splitting -------------------------------------------------------------

class FreshSymbols:
    """Allocator for y-symbols, starting past any yN already in the alphabet."""

    def __init__(self, alphabet: Alphabet, prefix: str = "y"):
        self.alphabet = alphabet.copy(extensible=True)
        self.prefix = prefix
        pat = re.compile(re.escape(prefix) + r"(\d+)\Z")
        self.next = 1 + max((int(mm.group(1)) for n in alphabet.names if (mm := pat.match(n))), default=0)
        self.used: list[str] = []

    def take(self, count: int) -> tuple[list[str], Word]:
        names = []
        for _ in range(count):
            name = f"{self.prefix}{self.next}"
            self.next += 1
            names.append(name)
        self.used.extend(names)
        return names, tuple(self.alphabet.add(n) for n in names)


@dataclass(frozen=True)
class SplitStep:
    generation: int
    start: int  # offset of P in the cycle being split
    length: int  # |P|
    alpha: tuple  # fresh symbol names


@dataclass
class SplitResult:
    source: int
    p: int
    d_cycles: list  # ColoredCycle, in emission order; the last is the final remainder
    steps: list  # SplitStep per split
    continuing: list = field(default_factory=list)  # C^1, C^2, ... as emitted


def _find_window(cyc: ColoredCycle, m: int, p: int, scan_from: int, factor: int):
    L = len(cyc)
    colors = cyc.colors
    budget = factor * p
    runs = [(s, n) for s, n in cyc.red_runs() if n >= m]
    if L - cyc.count(WHITE) < budget:
        raise PigeonholeExhausted(f"{L - cyc.count(WHITE)} non-white edges left, need {budget}", cyc)
    starts = sorted(((s + n - m) % L for s, n in runs), key=lambda c: (c - scan_from) % L)
    for c0 in starts:
        seen = 0
        e = c0
        length = 0
        while seen < budget and length < L:
            if colors[e] != WHITE:
                seen += 1
            e = (e + 1) % L
            length += 1
        if seen < budget or length >= L:
            continue
        span = [colors[(c0 + t) % L] for t in range(length)]
        head = 0
        while head < length and span[head] == RED:
            head += 1
        if head != m:
            continue
        ok = True
        t = head
        while t < length:
            if span[t] == RED:
                u = t
                while u < length and span[u] == RED:
                    u += 1
                if u - t > m:
                    ok = False
                    break
                t = u
            else:
                t += 1
        if ok:
            return c0, length
    raise PigeonholeExhausted("no admissible window P", cyc)


def split_cycle(
    c: ColoredCycle,
    m: int,
    p: int,
    fresh: FreshSymbols,
    window_factor: int = 6,
    alpha_length: int | None = None,
) -> SplitResult:
    """Split off D-cycles until no red run of length >= m remains.

    ``window_factor`` and ``alpha_length`` exist for mutation tests; the
    construction uses 6 and p.
    """
    if p < 1:
        raise ValueError("p must be positive")
    if m < 1:
        raise ValueError("m must be positive")
    alen = p if alpha_length is None else alpha_length
    cur = c
    scan_from = 0
    res = SplitResult(c.source, p, [], [])
    gen = c.generation
    while any(n >= m for _, n in cur.red_runs()):
        c0, length = _find_window(cur, m, p, scan_from, window_factor)
        L = len(cur)
        rot = rotate(cur.letters, c0)
        rcol = cur.colors[c0:] + cur.colors[:c0]
        P, Q = rot[:length], rot[length:]
        Pc, Qc = rcol[:length], rcol[length:]
        names, alpha = fresh.take(alen)
        gen += 1
        d = ColoredCycle(P + alpha, Pc + WHITE * alen, c.source, gen)
        cur = ColoredCycle(invert(alpha) + Q, WHITE * alen + Qc, c.source, gen)
        res.d_cycles.append(d)
        res.continuing.append(cur)
        res.steps.append(SplitStep(gen, c0, length, tuple(names)))
        scan_from = alen % len(cur)
    res.d_cycles.append(cur)
    return res


# -- whole construction ------------------------------------------------------------

@dataclass
class SupergroupResult:
    window: Presentation
    w: Word
    params: SupergroupParams
    pieces: tuple  # p_r per window relator
    kept: list  # window positions with index < N
    splits: list  # SplitResult per split source
    alphabet: Alphabet  # S'
    relators: Presentation  # R'
    l: int
    fresh: list  # fresh symbol names actually used

    def d_cycles(self) -> list[ColoredCycle]:
        return [d for s in self.splits for d in s.d_cycles]

    def to_json(self) -> dict:
        A = self.alphabet
        return {
            "w": A.format(self.w),
            "params": {"m": self.params.m, "D": _rat(self.params.D), "N": self.params.N},
            "l": self.l,
            "kept": [self.window.indices[i] for i in self.kept],
            "fresh_symbols": len(self.fresh),
            "alphabet": list(A.names),
            "relators": [A.format(r.letters) for r in self.relators.relators],
            "trace": [
                {
                    "source": self.window.indices[s.source],
                    "p": s.p,
                    "splits": [
                        {"j": st.generation, "start": st.start, "length": st.length, "alpha": list(st.alpha)}
                        for st in s.steps
                    ],
                    "d_lengths": [len(d) for d in s.d_cycles],
                }
                for s in self.splits
            ],
        }


def _rat(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def max_power_exponent(r: Word, w: Sequence[int]) -> int:
    """Largest n such that an arc of r reads a rotation of (w^n)^(+-1); 0 if none."""
    n = 0
    core_len = len(pattern_core(w, 1))
    while (n + 1) * core_len <= len(r) and coverage(r, [pattern_core(w, n + 1)]).covered:
        n += 1
    return n


def build_supergroup(
    window: Presentation,
    w: Sequence[int],
    params: SupergroupParams | None = None,
    window_factor: int = 6,
    alpha_length=None,
) -> SupergroupResult:
    w = tuple(w)
    pieces = longest_pieces(window)
    if params is None:
        params = choose_constants(window, w, pieces)
    ps = tuple(pieces.p(i) for i in range(len(window)))
    fresh = FreshSymbols(window.alphabet)
    kept, splits = [], []
    for i, r in enumerate(window.relators):
        if window.indices[i] < params.N:
            kept.append(i)
            continue
        cyc = color_cycle(r, w, params.m, source=i)
        alen = alpha_length(ps[i]) if callable(alpha_length) else alpha_length
        splits.append(split_cycle(cyc, params.m, ps[i], fresh, window_factor, alen))
    top = max((max_power_exponent(window.relators[i].letters, w) for i in kept), default=0)
    l = 1 + max(params.m, top)
    alphabet = fresh.alphabet.copy(extensible=False)
    words, idx = [], []
    for i in kept:
        words.append(window.relators[i])
        idx.append(window.indices[i])
    for s in splits:
        for d in s.d_cycles:
            words.append(CyclicWord(d.letters))
            idx.append(window.indices[s.source])
    out = Presentation(alphabet, tuple(words), tuple(idx), {"supergroup_of": window.family})
    return SupergroupResult(window, w, params, ps, kept, splits, alphabet, out, l, list(fresh.used))


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def verify_supergroup(res: SupergroupResult) -> VerificationReport:
    checks = []
    A = res.alphabet
    # (1) C'(1/6) on R'
    sc = check_small_cancellation(res.relators, Fraction(1, 6))
    detail = f"lambda*={sc.lambda_star}"
    if sc.violations:
        piece, rel, lp, lr = sc.violations[0]
        detail += f"; piece {A.format(piece)!r} of length {lp} in relator {rel} of length {lr}"
    checks.append(Check("small_cancellation", sc.holds, detail))
    # (2) no arc reading a rotation of (w^l)^(+-1)
    bad = []
    pat = pattern_core(res.w, res.l)
    for i, r in enumerate(res.relators.relators):
        if len(pat) <= len(r) and coverage(r.letters, [pat]).covered:
            bad.append(i)
    checks.append(
        Check("power_free", not bad, f"l={res.l}" + (f"; offending relators {bad[:5]}" if bad else ""))
    )
    # (3) reconstruction: C^{j-1} = rotate(D^j . C^j) back to its own start
    broken = []
    for s in res.splits:
        cur = s.d_cycles[-1].letters
        for st, d in zip(reversed(s.steps), reversed(s.d_cycles[:-1])):
            cur = rotate(free_reduce(d.letters + cur), -st.start)
        if cur != res.window.relators[s.source].letters:
            broken.append(res.window.indices[s.source])
    checks.append(
        Check("reconstruction", not broken, "" if not broken else f"sources {broken[:5]} do not rebuild")
    )
    # (4) every D-cycle has length >= 7 p of its source
    short = []
    for s in res.splits:
        for d in s.d_cycles:
            if len(d) < 7 * s.p:
                short.append((res.window.indices[s.source], len(d), 7 * s.p))
    checks.append(
        Check(
            "d_cycle_length",
            not short,
            "" if not short else "; ".join(f"source {a}: |D|={b} < {c}" for a, b, c in short[:5]),
        )
    )
    return VerificationReport(tuple(checks))
