"""Slow reference implementations used only by the tests."""
from scg.words import invert, rotate


def members(relators):
    """All rotations of every relator and its inverse, as a set of words."""
    out = {}
    for i, r in enumerate(relators):
        for w in (tuple(r), invert(r)):
            for t in range(len(w)):
                out.setdefault(rotate(w, t), i)
    return out


def brute_pieces(relators):
    """p_r per relator by enumerating every prefix of every member."""
    mem = members(relators)
    words = list(mem)
    best = [0] * len(relators)
    for w, i in mem.items():
        for k in range(1, len(w) + 1):
            u = w[:k]
            hits = sum(1 for x in words if x[:k] == u and len(x) >= k)
            if hits >= 2:
                best[i] = max(best[i], k)
    return best


def rotation_set(p):
    p = tuple(p)
    out = set()
    for w in (p, invert(p)):
        for t in range(len(w)):
            out.add(rotate(w, t))
    return out


def brute_coverage(v, patterns):
    v = tuple(v)
    L = len(v)
    targets = set()
    for p in patterns:
        if len(p) <= L:
            targets |= rotation_set(p)
    flags = [False] * L
    t = v + v
    for s in range(L):
        for k in range(1, L + 1):
            if t[s:s + k] in targets:
                for e in range(s, s + k):
                    flags[e % L] = True
    return flags


def brute_nth_power(n, v):
    v = tuple(v)
    L = len(v)
    flags = [False] * L
    t = v + v
    for s in range(L):
        for p in range(1, L // n + 1):
            u = t[s:s + p]
            if len(u) > 1 and u[0] == -u[-1]:
                continue
            if t[s:s + n * p] == u * n:
                for e in range(s, s + n * p):
                    flags[e % L] = True
    return flags


def brute_max_power(v):
    v = tuple(v)
    L = len(v)
    t = v + v
    best = 0
    for s in range(L):
        for p in range(1, L + 1):
            u = t[s:s + p]
            n = 1
            while (n + 1) * p <= L and t[s:s + (n + 1) * p] == u * (n + 1):
                n += 1
            best = max(best, n)
    return best


def brute_periodic_factor(v, w):
    """Longest arc of cycle v (length <= |v|) that is a factor of w^inf or (w^-1)^inf."""
    v = tuple(v)
    L = len(v)
    t = v + v
    best = 0
    for base in (tuple(w), invert(w)):
        reps = (2 * L) // len(base) + 3
        big = base * reps
        for s in range(L):
            for k in range(best + 1, L + 1):
                arc = t[s:s + k]
                if any(big[j:j + k] == arc for j in range(len(base))):
                    best = k
                else:
                    break
    return best


def has_cube(word):
    n = len(word)
    for p in range(1, n // 3 + 1):
        run = 0
        for i in range(n - p):
            run = run + 1 if word[i] == word[i + p] else 0
            if run >= 2 * p:
                return True
    return False


def window_pieces(relators):
    """p_r per relator from shared windows of every length, by binary search.

    Independent of the suffix-array route: a window of length k starting at
    rotation t of r (or r^-1) is a prefix of that member, so p_r >= k iff some
    length-k window of r is also a prefix of a different member.  Members are
    told apart by (relator, orientation, rotation mod primitive period).
    """
    from scg.kernels import window_hashes
    from scg.words import cyclic_period

    sources = []
    for i, r in enumerate(relators):
        r = tuple(r)
        q = cyclic_period(r)
        for o, w in ((1, r), (-1, invert(r))):
            sources.append((i, o, w, q))

    def owners(k):
        table = {}
        for i, o, w, q in sources:
            n = len(w)
            if k > n:
                continue
            hs = window_hashes(w + w[:k - 1], k) if k > 1 else [x for x in w]
            for t, h in enumerate(hs):
                mem = (i, o, t % q)
                got = table.setdefault(h, set())
                if len(got) < 2:
                    got.add(mem)
        return table

    cache = {}

    def shared(i, k):
        if k not in cache:
            cache[k] = owners(k)
        table = cache[k]
        r = tuple(relators[i])
        if k > len(r):
            return False
        hs = window_hashes(r + r[:k - 1], k) if k > 1 else list(r)
        return any(len(table[h]) >= 2 for h in hs)

    out = []
    for i, r in enumerate(relators):
        lo, hi = 0, len(r)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if shared(i, mid):
                lo = mid
            else:
                hi = mid - 1
        out.append(lo)
    return out
