"""Pure-Python implementations of the hot string kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same
signature and bit-identical output; ``scg.kernels`` picks one at import.
"""

HASH_BASE = 911382323
HASH_MOD1 = 2147483647
HASH_MOD2 = 2147483629


def suffix_array(text):
    """Suffix array of an int sequence by prefix doubling."""
    n = len(text)
    if n == 0:
        return []
    order = {v: i for i, v in enumerate(sorted(set(text)))}
    rank = [order[v] for v in text]
    sa = sorted(range(n), key=rank.__getitem__)
    k = 1
    while True:
        # rank[i] < n, so the pair packs into one int key
        key = [r * (n + 1) for r in rank]
        for i in range(n - k):
            key[i] += rank[i + k] + 1
        sa.sort(key=key.__getitem__)
        new = [0] * n
        r = 0
        prev = key[sa[0]]
        for i in sa:
            ki = key[i]
            if ki != prev:
                r += 1
                prev = ki
            new[i] = r
        rank = new
        if r == n - 1:
            return sa
        k *= 2


def lcp_array(text, sa):
    """Kasai: lcp[i] = LCP(suffix sa[i], suffix sa[i+1]); lcp[n-1] = 0."""
    n = len(text)
    rank = [0] * n
    for i, s in enumerate(sa):
        rank[s] = i
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == n - 1:
            h = 0
            continue
        j = sa[r + 1]
        while i + h < n and j + h < n and text[i + h] == text[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp


def z_array(seq):
    """z[i] = length of the longest common prefix of seq and seq[i:]; z[0] = len."""
    n = len(seq)
    z = [0] * n
    if n == 0:
        return z
    z[0] = n
    l = r = 0
    for i in range(1, n):
        if i < r:
            zi = min(r - i, z[i - l])
        else:
            zi = 0
        while i + zi < n and seq[zi] == seq[i + zi]:
            zi += 1
        z[i] = zi
        if i + zi > r:
            l, r = i, i + zi
    return z


def period_runs(seq, p, cyclic):
    """run[s] = number of consecutive t >= 0 with seq[s+t] == seq[s+t+p].

    Indices wrap when ``cyclic``; the run is then capped at len(seq).
    Linear runs stop at the end of the sequence.
    """
    n = len(seq)
    run = [0] * n
    if n == 0 or p <= 0:
        return run
    if not cyclic:
        for s in range(n - p - 1, -1, -1):
            if seq[s] == seq[s + p]:
                run[s] = run[s + 1] + 1 if s + 1 < n else 1
        return run
    p %= n
    z = -1
    for s in range(n):
        if seq[s] != seq[(s + p) % n]:
            z = s
            break
    if z < 0:
        return [n] * n
    nxt = 0
    for step in range(n):
        s = (z - step) % n
        if seq[s] == seq[(s + p) % n]:
            nxt += 1
        else:
            nxt = 0
        run[s] = nxt
    return run


def window_hashes(seq, h):
    """Double polynomial hash of every length-h window (n - h + 1 values)."""
    n = len(seq)
    if h <= 0 or h > n:
        return []
    m1, m2, b = HASH_MOD1, HASH_MOD2, HASH_BASE
    p1 = pow(b, h - 1, m1)
    p2 = pow(b, h - 1, m2)
    a1 = a2 = 0
    for x in seq[:h]:
        a1 = (a1 * b + x) % m1
        a2 = (a2 * b + x) % m2
    out = [(a1 << 32) | a2]
    for i in range(h, n):
        old = seq[i - h]
        x = seq[i]
        a1 = ((a1 - old * p1) * b + x) % m1
        a2 = ((a2 - old * p2) * b + x) % m2
        out.append((a1 << 32) | a2)
    return out
