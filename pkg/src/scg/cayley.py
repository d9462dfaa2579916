"""Cayley balls, geodesic checks for powers, and relator contraction profiles.

Balls are built by breadth-first search over generator extensions.  Two
words name the same vertex when the Dehn oracle says they are equal; while
no relator is short enough to matter at the requested radius the ball is a
free-group ball and identification is a dictionary lookup.
"""
from __future__ import annotations

import csv
import io
import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from scg import kernels
from scg.dehn import PresentationOracle, are_equal
from scg.families import FamilySpec, enumerate_relators, stream
from scg.presentation import Presentation
from scg.saturation import rotation_intervals
from scg.words import Alphabet, CyclicWord, Word, cyclic_period, cyclic_reduce, free_reduce, invert, power

DEFAULT_CEILING = 7
DEFAULT_MAX_VERTICES = 2_000_000


class BallError(ValueError):
    pass


def ball_ceiling() -> int:
    raw = os.environ.get("SCG_BALL_CEILING")
    if not raw:
        return DEFAULT_CEILING
    try:
        return int(raw)
    except ValueError:
        raise BallError(f"SCG_BALL_CEILING must be an integer, got {raw!r}") from None


def free_sphere_size(gens: int, i: int) -> int:
    if i == 0:
        return 1
    return 2 * gens * (2 * gens - 1) ** (i - 1)


def free_ball_size(gens: int, radius: int) -> int:
    return sum(free_sphere_size(gens, i) for i in range(radius + 1))


@dataclass
class BallGraph:
    radius: int
    alphabet: Alphabet
    vertices: list  # representative words, in BFS order
    distance: list  # distance[i] = d(1, vertices[i])
    edges: list  # (u, generator letter > 0, v) with vertices[u].x = vertices[v]
    free: bool  # True when no relator could identify two words in the ball
    index: dict = field(default_factory=dict, repr=False)  # free word -> vertex

    def __len__(self) -> int:
        return len(self.vertices)

    def sphere_sizes(self) -> list[int]:
        out = [0] * (self.radius + 1)
        for d in self.distance:
            out[d] += 1
        return out

    def to_dot(self, name: str = "ball") -> str:
        fmt = self.alphabet.format
        lines = [f"digraph {name} {{"]
        for i, w in enumerate(self.vertices):
            label = fmt(w) if w else "1"
            lines.append(f'  v{i} [label="{label}"];')
        for u, x, v in self.edges:
            lines.append(f'  v{u} -> v{v} [label="{self.alphabet.name(x)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        fmt = self.alphabet.format
        return {
            "radius": self.radius,
            "generators": list(self.alphabet.names),
            "free": self.free,
            "vertices": len(self.vertices),
            "sphere_sizes": self.sphere_sizes(),
            "edges": len(self.edges),
            "representatives": [fmt(w) for w in self.vertices] if len(self.vertices) <= 1000 else None,
        }


class _Oracle:
    """Group equality for either a family spec or an explicit presentation."""

    def __init__(self, source):
        self.source = source
        self._pres_oracle = None
        if isinstance(source, Presentation):
            self._pres_oracle = PresentationOracle(source)

    def window(self, max_length: int) -> Presentation:
        if isinstance(self.source, Presentation):
            keep = [i for i, r in enumerate(self.source.relators) if len(r) <= max_length]
            return self.source.subset(keep)
        return enumerate_relators(self.source, max_length)

    def alphabet(self, max_length: int) -> Alphabet:
        if isinstance(self.source, Presentation):
            return self.source.alphabet
        win = self.window(max_length)
        if len(win):
            return win.alphabet
        return Alphabet(stream(self.source).base)

    def equal(self, u: Word, v: Word) -> bool:
        if self._pres_oracle is not None:
            return self._pres_oracle.are_equal(u, v)[0]
        return are_equal(u, v, self.source)[0]


class _AbelianKey:
    """Canonical image of a word in the abelianization of the window group.

    Equal group elements have equal images, so only words with the same key
    need the Dehn oracle.  Relator exponent vectors are put in integer echelon
    form; reducing each pivot coordinate into [0, pivot) picks one
    representative per coset.
    """

    def __init__(self, gens: int, relators):
        rows = []
        for r in relators:
            v = [0] * gens
            for x in r:
                v[abs(x) - 1] += 1 if x > 0 else -1
            if any(v):
                rows.append(v)
        self.pivots = []
        for c in range(gens):
            live = [v for v in rows if v[c]]
            if not live:
                continue
            rows = [v for v in rows if not v[c]]
            while len(live) > 1:
                live.sort(key=lambda v: abs(v[c]))
                top = live[0]
                nxt = [top]
                for v in live[1:]:
                    q = v[c] // top[c]
                    v = [a - q * b for a, b in zip(v, top)]
                    (nxt if v[c] else rows).append(v)
                live = nxt
            piv = live[0]
            if piv[c] < 0:
                piv = [-a for a in piv]
            self.pivots.append((c, piv))
            rows = [v for v in rows if any(v)]
        self.gens = gens

    def __call__(self, w: Word) -> tuple:
        v = [0] * self.gens
        for x in w:
            v[abs(x) - 1] += 1 if x > 0 else -1
        for c, piv in self.pivots:
            q = v[c] // piv[c]
            if q:
                v = [a - q * b for a, b in zip(v, piv)]
        return tuple(v)


def build_ball(source, radius: int, ceiling: int | None = None, max_vertices: int = DEFAULT_MAX_VERTICES) -> BallGraph:
    """Ball of the given radius about 1 in the Cayley graph of a family or presentation.

    ``source`` is a FamilySpec or a Presentation.  The generators are the
    letters of the relator window relevant at this radius (the base letters
    when that window is empty).
    """
    if radius < 0:
        raise BallError("radius must be non-negative")
    if ceiling is None:
        ceiling = ball_ceiling()
    if radius > ceiling:
        raise BallError(f"radius {radius} exceeds the ball ceiling {ceiling}")
    oracle = _Oracle(source)
    # two ball words have a quotient of length <= 2r+1, which can only
    # contain more than half of a relator of length <= 4r+2
    reach = 2 * (2 * radius + 1)
    window = oracle.window(reach)
    alphabet = oracle.alphabet(reach)
    gens = len(alphabet)
    bound = free_ball_size(gens, radius)
    if bound > max_vertices:
        raise BallError(f"a radius {radius} ball over {gens} generators may hold {bound} vertices (guard {max_vertices})")
    free = len(window) == 0
    letters = []
    for g in range(1, gens + 1):
        letters += [g, -g]

    vertices: list[Word] = [()]
    distance = [0]
    index: dict[Word, int] = {(): 0}
    spheres: list[list[int]] = [[0]]
    edges = set()
    if not free:
        key = _AbelianKey(gens, [r.letters for r in window.relators])
        # a nonempty trivial cyclic word holds more than half a relator
        shortest = window.min_length() // 2 + 1
        buckets: dict[tuple, list[list[int]]] = {key(()): [[0]]}

    def locate(y: Word, d: int):
        """Vertex equal to y among spheres d-1..d+1, or None."""
        hit = index.get(y)
        if hit is not None or free:
            return hit
        bucket = buckets.get(key(y))
        if bucket is None:
            return None
        for dd in (d - 1, d, d + 1):
            if 0 <= dd < len(bucket):
                for j in bucket[dd]:
                    z = vertices[j]
                    c = 0
                    top = min(len(y), len(z))
                    while c < top and y[c] == z[c]:
                        c += 1
                    if len(y) + len(z) - 2 * c < shortest:
                        continue
                    if oracle.equal(y, z):
                        return j
        return None

    for d in range(radius + 1):
        nxt: list[int] = []
        if d < radius:
            spheres.append(nxt)
        for i in spheres[d]:
            v = vertices[i]
            for x in letters:
                y = free_reduce(v + (x,))
                j = locate(y, d)
                if j is None:
                    if d == radius:
                        continue
                    j = len(vertices)
                    vertices.append(y)
                    distance.append(d + 1)
                    index[y] = j
                    nxt.append(j)
                    if not free:
                        bucket = buckets.setdefault(key(y), [])
                        while len(bucket) <= d + 1:
                            bucket.append([])
                        bucket[d + 1].append(j)
                elif y not in index:
                    index[y] = j
                if x > 0:
                    edges.add((i, x, j))
                else:
                    edges.add((j, -x, i))
    return BallGraph(radius, alphabet, vertices, distance, sorted(edges), free, index)


@dataclass(frozen=True)
class GeodesicRow:
    n: int
    distance: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.distance == self.expected


@dataclass(frozen=True)
class GeodesicReport:
    word: Word
    rows: tuple

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def first_failure(self):
        return next((r.n for r in self.rows if not r.ok), None)

    def to_json(self, alphabet=None) -> dict:
        return {
            "word": alphabet.format(self.word) if alphabet is not None else list(self.word),
            "passed": self.passed,
            "first_failure": self.first_failure,
            "rows": [{"n": r.n, "distance": r.distance, "expected": r.expected, "ok": r.ok} for r in self.rows],
        }


def geodesic_power_check(source, w: Sequence[int], n_max: int, ceiling: int | None = None) -> GeodesicReport:
    """Check d(1, w^n) = n|w| for 1 <= n <= n_max inside a Cayley ball."""
    w = free_reduce(w)
    if not w:
        raise ValueError("w reduces to the empty word")
    if n_max < 1:
        raise ValueError("n_max must be positive")
    radius = n_max * len(w)
    if ceiling is None:
        ceiling = ball_ceiling()
    if radius > ceiling:
        raise BallError(f"n_max*|w| = {radius} exceeds the ball ceiling {ceiling}")
    ball = build_ball(source, radius, ceiling)
    oracle = None if ball.free else _Oracle(source)
    rows = []
    for n in range(1, n_max + 1):
        target = free_reduce(power(w, n))
        j = ball.index.get(target)
        if j is None and oracle is not None:
            j = next((i for i, v in enumerate(ball.vertices) if oracle.equal(target, v)), None)
        if j is None:
            raise AssertionError("a word of length <= radius is missing from the ball")
        rows.append(GeodesicRow(n, ball.distance[j], n * len(w)))
    return GeodesicReport(w, tuple(rows))


# -- contraction profiles -------------------------------------------------------

def _periodic_arc(v: Word, u: Word) -> int:
    """Longest arc of the cycle v (length <= |v|) that is a factor of u^inf, u primitive."""
    L = len(v)
    p = len(u)
    if p == 1:
        x = u[0]
        if x not in v:
            return 0
        run = kernels.period_runs(v, 1, True)
        return min(L, max(1 + run[s] for s in range(L) if v[s] == x))
    intervals = rotation_intervals(v, u)
    if intervals:
        # an arc of length >= p is a factor iff it starts with a rotation
        # of u and has period p
        run = kernels.period_runs(v, p, True)
        best = 0
        for lo, hi in intervals:
            for s in range(lo, hi + 1):
                if run[s] > best:
                    best = run[s]
        return min(L, p + best)
    # otherwise only arcs shorter than p can match, i.e. factors of uu
    best = 0
    t = list(v + v)
    for j in range(p):
        rot = list(u[j:] + u[:j])
        z = kernels.z_array(rot + [0] + t)
        best = max(best, max(z[p + 1:p + 1 + L], default=0))
    return min(best, L, p - 1)


def contraction_length(r, w: Sequence[int]) -> int:
    """L(r): longest arc of the cycle r labelled by a factor of w^inf or (w^-1)^inf."""
    v = r.letters if isinstance(r, CyclicWord) else tuple(r)
    core = cyclic_reduce(w)[0].letters
    if not core:
        raise ValueError("w is trivial after cyclic reduction")
    u = core[:cyclic_period(core)]
    if not v:
        return 0
    return max(_periodic_arc(v, u), _periodic_arc(v, invert(u)))


@dataclass(frozen=True)
class ProfileRow:
    index: int
    length: int
    L: int


@dataclass(frozen=True)
class ContractionProfile:
    w: Word
    rows: tuple

    def to_json(self, alphabet=None) -> dict:
        return {
            "w": alphabet.format(self.w) if alphabet is not None else list(self.w),
            "rows": [{"index": r.index, "length": r.length, "L": r.L} for r in self.rows],
        }

    @classmethod
    def from_json(cls, data: dict, alphabet=None) -> "ContractionProfile":
        w = data.get("w", ())
        if isinstance(w, str):
            w = alphabet.parse(w) if alphabet is not None else ()
        rows = tuple(ProfileRow(int(r["index"]), int(r["length"]), int(r["L"])) for r in data["rows"])
        return cls(tuple(w), rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["index", "length", "L"])
        for r in self.rows:
            wr.writerow([r.index, r.length, r.L])
        return buf.getvalue()


def _profile_row(args):
    idx, letters, w = args
    return ProfileRow(idx, len(letters), contraction_length(letters, w))


def intersection_profile(window: Presentation, w: Sequence[int], jobs: int = 1) -> ContractionProfile:
    w = tuple(w)
    if not cyclic_reduce(w)[0].letters:
        raise ValueError("w is trivial after cyclic reduction")
    tasks = [(window.indices[i], r.letters, w) for i, r in enumerate(window.relators)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_profile_row, tasks))
    else:
        rows = [_profile_row(t) for t in tasks]
    rows.sort(key=lambda r: (r.length, r.index))
    return ContractionProfile(w, tuple(rows))


@dataclass(frozen=True)
class GrowthSummary:
    exponent: float  # least-squares slope of log L against log |r|
    intercept: float
    rows_used: int  # rows with L > 0 enter the regression
    ratios: tuple  # L * log2|r| / |r| per row
    ratio_min: float
    ratio_max: float

    def to_json(self) -> dict:
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "rows_used": self.rows_used,
            "ratio_min": self.ratio_min,
            "ratio_max": self.ratio_max,
            "ratios": list(self.ratios),
        }


def fit_profile(profile: ContractionProfile) -> GrowthSummary:
    rows = profile.rows
    if len(rows) < 5:
        raise ValueError(f"fit_profile needs at least 5 rows, got {len(rows)}")
    pts = [(math.log(r.length), math.log(r.L)) for r in rows if r.L > 0]
    if len(pts) < 2 or len({x for x, _ in pts}) < 2:
        raise ValueError("too few distinct positive rows to fit")
    slope, intercept = statistics.linear_regression([x for x, _ in pts], [y for _, y in pts])
    ratios = tuple(r.L * math.log2(r.length) / r.length for r in rows)
    return GrowthSummary(slope, intercept, len(pts), ratios, min(ratios), max(ratios))
