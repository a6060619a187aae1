# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lift-tree kernels on int64.

Same contract as ``_kernels_py``.  Any value that could leave the safe int64
range raises OverflowError, and the caller retries in pure Python.
"""

from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, free

cdef int64_t LIMIT = (<int64_t>1) << 40
cdef int64_t WLIMIT = (<int64_t>1) << 20


cdef inline int64_t _abs(int64_t x) nogil:
    return -x if x < 0 else x


cdef inline int64_t _floormod(int64_t a, int64_t b) nogil:
    cdef int64_t r = a % b
    if r < 0:
        r += b
    return r


cdef int _act(const int64_t* c, int64_t* out, const int64_t* w, const int64_t* wb,
              int n, int64_t m, int64_t* carry) nogil:
    cdef int i
    cdef int64_t s, c2
    for i in range(n):
        s = m + c[i]
        c2 = _floormod(s, _abs(w[i]))
        out[i] = c2
        m = (s - c2) / w[i] * wb[i]
        if _abs(m) > LIMIT:
            return 1
    carry[0] = m
    return 0


cdef int _fixes(const int64_t* c, int64_t* tmp, const int64_t* w, const int64_t* wb,
                int n, int64_t m) nogil:
    # 1 = fixes, 0 = moves, -1 = overflow
    cdef int64_t carry
    cdef int i
    if _act(c, tmp, w, wb, n, m, &carry):
        return -1
    for i in range(n):
        if tmp[i] != c[i]:
            return 0
    return 1


cdef int64_t _brute(const int64_t* c, int64_t* tmp, const int64_t* w, const int64_t* wb,
                    int n) nogil:
    cdef int64_t m = 1, j, rest, p
    cdef int k, r, found
    for k in range(1, n + 1):
        found = 0
        j = 1
        while j <= _abs(w[k - 1]):
            if j * m > LIMIT:
                return -3
            r = _fixes(c, tmp, w, wb, k, j * m)
            if r < 0:
                return -3
            if r == 1:
                m *= j
                found = 1
                break
            j += 1
        if not found:
            return -1
    r = _fixes(c, tmp, w, wb, n, m)
    if r < 0:
        return -3
    if r == 0:
        return -2
    rest = m
    p = 2
    while rest > 1:
        if p * p > rest:
            p = rest
        if rest % p == 0:
            r = _fixes(c, tmp, w, wb, n, m / p)
            if r < 0:
                return -3
            if r == 1:
                return -2
            while rest % p == 0:
                rest /= p
        p += 1
    return m


cdef int64_t* _load(object digits, object w, object wbar, int n) except NULL:
    """One buffer holding digits, w, wbar and scratch space, each ``n + 1`` long.

    Rejects moduli outside the compiled range.  ``digits`` may be None.
    """
    cdef int stride = n + 1
    cdef int64_t* buf = <int64_t*>malloc(4 * stride * sizeof(int64_t))
    cdef int i
    cdef int64_t a, b
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            a = w[i]
            b = wbar[i]
            if a == 0 or _abs(a) > WLIMIT or _abs(b) > WLIMIT:
                raise OverflowError("omega outside the compiled range")
            buf[stride + i] = a
            buf[2 * stride + i] = b
            buf[i] = 0 if digits is None else digits[i]
    except BaseException:
        free(buf)
        raise
    return buf


def act(digits, w, wbar, m):
    cdef int n = len(digits)
    cdef int i
    cdef int64_t carry
    if m > LIMIT or m < -LIMIT:
        raise OverflowError("multiplier outside the compiled range")
    cdef int64_t* buf = _load(digits, w, wbar, n)
    cdef int64_t* out = buf + 3 * (n + 1)
    try:
        if _act(buf, out, buf + n + 1, buf + 2 * (n + 1), n, m, &carry):
            raise OverflowError("carry outside the compiled range")
        return tuple([out[i] for i in range(n)]), carry
    finally:
        free(buf)


def fixes(digits, w, wbar, m, depth=None):
    cdef int n = len(digits) if depth is None else depth
    cdef int r
    if m > LIMIT or m < -LIMIT:
        raise OverflowError("multiplier outside the compiled range")
    cdef int64_t* buf = _load(digits, w, wbar, n)
    try:
        r = _fixes(buf, buf + 3 * (n + 1), buf + n + 1, buf + 2 * (n + 1), n, m)
        if r < 0:
            raise OverflowError("carry outside the compiled range")
        return r == 1
    finally:
        free(buf)


def brute_stabiliser(digits, w, wbar):
    cdef int n = len(digits)
    cdef int64_t r
    cdef int64_t* buf = _load(digits, w, wbar, n)
    try:
        with nogil:
            r = _brute(buf, buf + 3 * (n + 1), buf + n + 1, buf + 2 * (n + 1), n)
        if r == -3:
            raise OverflowError("stabiliser search left the compiled range")
        return r
    finally:
        free(buf)


def stabilisers_for_path(w, wbar):
    cdef int n = len(w)
    cdef int k
    cdef int64_t r
    cdef int64_t* buf = _load(None, w, wbar, n)
    cdef int64_t* c = buf
    cdef int64_t* ww = buf + n + 1
    out = []
    try:
        while True:
            with nogil:
                r = _brute(c, buf + 3 * (n + 1), ww, buf + 2 * (n + 1), n)
            if r == -3:
                raise OverflowError("stabiliser search left the compiled range")
            out.append(r)
            k = n - 1
            while k >= 0:
                c[k] += 1
                if c[k] < _abs(ww[k]):
                    break
                c[k] = 0
                k -= 1
            if k < 0:
                return out
    finally:
        free(buf)
