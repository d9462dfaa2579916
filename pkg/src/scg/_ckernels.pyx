# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``.

Inputs are any int sequences; outputs are Python lists so callers never
see the difference between backends.
"""
from libc.stdlib cimport malloc, free
from libc.string cimport memset

DEF HASH_BASE = 911382323
DEF HASH_MOD1 = 2147483647
DEF HASH_MOD2 = 2147483629


cdef long long* _to_c(seq, Py_ssize_t n) except NULL:
    cdef long long* buf = <long long*> malloc((n + 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i = 0
    for x in seq:
        buf[i] = x
        i += 1
    return buf


def suffix_array(text):
    cdef Py_ssize_t n = len(text)
    if n == 0:
        return []
    order = {v: i for i, v in enumerate(sorted(set(text)))}
    cdef Py_ssize_t nkeys = len(order)
    cdef int* rank = <int*> malloc(n * sizeof(int))
    cdef int* tmp = <int*> malloc(n * sizeof(int))
    cdef int* sa = <int*> malloc(n * sizeof(int))
    cdef int* sa2 = <int*> malloc(n * sizeof(int))
    cdef Py_ssize_t csize = max(n, nkeys) + 1
    cdef int* cnt = <int*> malloc(csize * sizeof(int))
    if rank == NULL or tmp == NULL or sa == NULL or sa2 == NULL or cnt == NULL:
        free(rank); free(tmp); free(sa); free(sa2); free(cnt)
        raise MemoryError()
    cdef Py_ssize_t i, j, k, r, classes
    cdef int a, b, pa, pb
    try:
        i = 0
        for v in text:
            rank[i] = order[v]
            i += 1
        classes = nkeys
        # counting sort by initial rank
        memset(cnt, 0, csize * sizeof(int))
        for i in range(n):
            cnt[rank[i]] += 1
        for i in range(1, classes):
            cnt[i] += cnt[i - 1]
        for i in range(n - 1, -1, -1):
            cnt[rank[i]] -= 1
            sa[cnt[rank[i]]] = i
        k = 1
        while True:
            # order by second key: suffixes without a second half first
            j = 0
            for i in range(n - k, n):
                sa2[j] = i
                j += 1
            for i in range(n):
                if sa[i] >= k:
                    sa2[j] = sa[i] - k
                    j += 1
            memset(cnt, 0, csize * sizeof(int))
            for i in range(n):
                cnt[rank[i]] += 1
            for i in range(1, classes):
                cnt[i] += cnt[i - 1]
            for i in range(n - 1, -1, -1):
                j = sa2[i]
                cnt[rank[j]] -= 1
                sa[cnt[rank[j]]] = j
            tmp[sa[0]] = 0
            r = 0
            for i in range(1, n):
                a = sa[i]
                b = sa[i - 1]
                pa = rank[a + k] if a + k < n else -1
                pb = rank[b + k] if b + k < n else -1
                if rank[a] != rank[b] or pa != pb:
                    r += 1
                tmp[a] = r
            for i in range(n):
                rank[i] = tmp[i]
            classes = r + 1
            if classes == n:
                break
            k *= 2
        return [sa[i] for i in range(n)]
    finally:
        free(rank); free(tmp); free(sa); free(sa2); free(cnt)


def lcp_array(text, sa):
    cdef Py_ssize_t n = len(text)
    if n == 0:
        return []
    cdef long long* s = _to_c(text, n)
    cdef int* rank = <int*> malloc(n * sizeof(int))
    cdef int* sac = <int*> malloc(n * sizeof(int))
    cdef int* lcp = <int*> malloc(n * sizeof(int))
    cdef Py_ssize_t i, j, h, r
    try:
        i = 0
        for v in sa:
            sac[i] = v
            i += 1
        for i in range(n):
            rank[sac[i]] = i
        for i in range(n):
            lcp[i] = 0
        h = 0
        for i in range(n):
            r = rank[i]
            if r == n - 1:
                h = 0
                continue
            j = sac[r + 1]
            while i + h < n and j + h < n and s[i + h] == s[j + h]:
                h += 1
            lcp[r] = h
            if h:
                h -= 1
        return [lcp[i] for i in range(n)]
    finally:
        free(s); free(rank); free(sac); free(lcp)


def z_array(seq):
    cdef Py_ssize_t n = len(seq)
    if n == 0:
        return []
    cdef long long* s = _to_c(seq, n)
    cdef int* z = <int*> malloc(n * sizeof(int))
    cdef Py_ssize_t i, l = 0, r = 0, zi
    try:
        z[0] = n
        for i in range(1, n):
            if i < r:
                zi = r - i
                if z[i - l] < zi:
                    zi = z[i - l]
            else:
                zi = 0
            while i + zi < n and s[zi] == s[i + zi]:
                zi += 1
            z[i] = zi
            if i + zi > r:
                l = i
                r = i + zi
        return [z[i] for i in range(n)]
    finally:
        free(s); free(z)


def period_runs(seq, p, cyclic):
    cdef Py_ssize_t n = len(seq)
    if n == 0 or p <= 0:
        return [0] * n
    cdef long long* s = _to_c(seq, n)
    cdef int* run = <int*> malloc(n * sizeof(int))
    cdef Py_ssize_t i, step, q = p, z, nxt
    try:
        for i in range(n):
            run[i] = 0
        if not cyclic:
            for i in range(n - q - 1, -1, -1):
                if s[i] == s[i + q]:
                    run[i] = run[i + 1] + 1
            return [run[i] for i in range(n)]
        q = q % n
        z = -1
        for i in range(n):
            if s[i] != s[(i + q) % n]:
                z = i
                break
        if z < 0:
            return [n] * n
        nxt = 0
        for step in range(n):
            i = (z - step + n) % n
            if s[i] == s[(i + q) % n]:
                nxt += 1
            else:
                nxt = 0
            run[i] = nxt
        return [run[i] for i in range(n)]
    finally:
        free(s); free(run)


def window_hashes(seq, h):
    cdef Py_ssize_t n = len(seq)
    if h <= 0 or h > n:
        return []
    cdef long long* s = _to_c(seq, n)
    cdef unsigned long long m1 = HASH_MOD1, m2 = HASH_MOD2, b = HASH_BASE
    cdef unsigned long long p1 = pow(HASH_BASE, h - 1, HASH_MOD1)
    cdef unsigned long long p2 = pow(HASH_BASE, h - 1, HASH_MOD2)
    cdef unsigned long long a1 = 0, a2 = 0, x1, x2, o1, o2
    cdef Py_ssize_t i
    out = []
    try:
        for i in range(h):
            x1 = <unsigned long long> ((s[i] % <long long> m1 + <long long> m1) % <long long> m1)
            x2 = <unsigned long long> ((s[i] % <long long> m2 + <long long> m2) % <long long> m2)
            a1 = (a1 * b + x1) % m1
            a2 = (a2 * b + x2) % m2
        out.append((a1 << 32) | a2)
        for i in range(h, n):
            o1 = <unsigned long long> ((s[i - h] % <long long> m1 + <long long> m1) % <long long> m1)
            o2 = <unsigned long long> ((s[i - h] % <long long> m2 + <long long> m2) % <long long> m2)
            x1 = <unsigned long long> ((s[i] % <long long> m1 + <long long> m1) % <long long> m1)
            x2 = <unsigned long long> ((s[i] % <long long> m2 + <long long> m2) % <long long> m2)
            a1 = (a1 + m1 - (o1 * p1) % m1) % m1
            a2 = (a2 + m2 - (o2 * p2) % m2) % m2
            a1 = (a1 * b + x1) % m1
            a2 = (a2 * b + x2) % m2
            out.append((a1 << 32) | a2)
        return out
    finally:
        free(s)
