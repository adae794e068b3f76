# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels.

Same API as ``pyref``. Each function runs a machine-int fast path with
overflow detection and falls back to Python-object arithmetic when any
operand or intermediate does not fit in 64 bits, so results are always
exact.
"""

from cpython.list cimport PyList_GET_SIZE, PyList_GET_ITEM
from cpython.long cimport PyLong_AsLongLongAndOverflow
from libc.stdlib cimport free, malloc

from math import gcd as _pygcd

BACKEND = "c"

cdef extern from *:
    """
    #include <stdint.h>
    static int llv_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static int llv_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    static int llv_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int llv_mul_ovf(long long a, long long b, long long *r) nogil
    int llv_sub_ovf(long long a, long long b, long long *r) nogil
    int llv_add_ovf(long long a, long long b, long long *r) nogil

cdef long long LL_MIN = <long long>(-9223372036854775807LL - 1)


cdef long long c_gcd(long long a, long long b) nogil:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


def row_combine(list r, list row, a, b, Py_ssize_t start):
    """In place: r[i] = a*r[i] - b*row[i] for all i >= start."""
    cdef Py_ssize_t n = PyList_GET_SIZE(r)
    cdef Py_ssize_t i
    cdef int ofa = 0, ofb = 0, of1 = 0, of2 = 0
    cdef long long aa, bb, x, y, p1, p2, res
    cdef long long *buf
    cdef bint ok
    if start >= n:
        return
    aa = PyLong_AsLongLongAndOverflow(a, &ofa)
    bb = PyLong_AsLongLongAndOverflow(b, &ofb)
    if not ofa and not ofb:
        buf = <long long *> malloc((n - start) * sizeof(long long))
        if buf != NULL:
            ok = True
            for i in range(start, n):
                x = PyLong_AsLongLongAndOverflow(<object> PyList_GET_ITEM(r, i), &of1)
                y = PyLong_AsLongLongAndOverflow(<object> PyList_GET_ITEM(row, i), &of2)
                if of1 or of2:
                    ok = False
                    break
                if llv_mul_ovf(aa, x, &p1) or llv_mul_ovf(bb, y, &p2) or llv_sub_ovf(p1, p2, &res):
                    ok = False
                    break
                buf[i - start] = res
            if ok:
                for i in range(start, n):
                    r[i] = buf[i - start]
                free(buf)
                return
            free(buf)
    for i in range(start, n):
        r[i] = a * r[i] - b * row[i]


def vec_content(list r):
    """gcd of all entries (non-negative); 0 for the zero vector."""
    cdef Py_ssize_t n = PyList_GET_SIZE(r), i
    cdef int of = 0
    cdef long long g = 0, x
    for i in range(n):
        x = PyLong_AsLongLongAndOverflow(<object> PyList_GET_ITEM(r, i), &of)
        if of or x == LL_MIN:
            return _vec_content_obj(r)
        if x != 0:
            if x < 0:
                x = -x
            g = c_gcd(g, x) if g else x
            if g == 1:
                return 1
    return g


def _vec_content_obj(list r):
    g = 0
    for x in r:
        if x:
            g = _pygcd(g, x)
            if g == 1:
                return 1
    return g


def vec_divexact(list r, g):
    """In place: divide every entry by g (entries must be divisible)."""
    cdef Py_ssize_t n = PyList_GET_SIZE(r), i
    cdef int ofg = 0, of = 0
    cdef long long gg, x
    cdef long long *buf
    cdef bint ok
    gg = PyLong_AsLongLongAndOverflow(g, &ofg)
    if not ofg and gg != 0 and n > 0:
        buf = <long long *> malloc(n * sizeof(long long))
        if buf != NULL:
            ok = True
            for i in range(n):
                x = PyLong_AsLongLongAndOverflow(<object> PyList_GET_ITEM(r, i), &of)
                if of or (x == LL_MIN and gg == -1):
                    ok = False
                    break
                buf[i] = x // gg  # exact by contract, so C truncation is safe
            if ok:
                for i in range(n):
                    r[i] = buf[i]
                free(buf)
                return
            free(buf)
    for i in range(n):
        r[i] //= g


def dot(list u, list v):
    cdef Py_ssize_t n = PyList_GET_SIZE(u), i
    cdef int of1 = 0, of2 = 0
    cdef long long s = 0, x, y, p, t
    if PyList_GET_SIZE(v) < n:
        n = PyList_GET_SIZE(v)
    for i in range(n):
        x = PyLong_AsLongLongAndOverflow(<object> PyList_GET_ITEM(u, i), &of1)
        y = PyLong_AsLongLongAndOverflow(<object> PyList_GET_ITEM(v, i), &of2)
        # the add must not alias s: __builtin_add_overflow writes the wrapped
        # value even when it reports overflow
        if of1 or of2 or llv_mul_ovf(x, y, &p) or llv_add_ovf(s, p, &t):
            return _dot_obj(u, v, i, s)
        s = t
    return s


def _dot_obj(list u, list v, Py_ssize_t start, partial):
    s = partial
    cdef Py_ssize_t i
    cdef Py_ssize_t n = min(len(u), len(v))
    for i in range(start, n):
        x = u[i]
        y = v[i]
        if x and y:
            s += x * y
    return s


def mat_mul(list A, list B):
    """Integer matrix product: A is m x k, B is k x n (lists of lists)."""
    cdef Py_ssize_t m = PyList_GET_SIZE(A)
    if m == 0:
        return []
    cdef Py_ssize_t k = PyList_GET_SIZE(<object> PyList_GET_ITEM(A, 0))
    cdef Py_ssize_t n = 0
    if PyList_GET_SIZE(B) > 0:
        n = PyList_GET_SIZE(<object> PyList_GET_ITEM(B, 0))
    cdef long long *bbuf = NULL
    cdef long long *abuf = NULL
    cdef long long *cbuf = NULL
    cdef Py_ssize_t i, j, t
    cdef int of = 0
    cdef long long x, p
    cdef bint ok = True
    cdef list brow, arow, out, crow
    if k > 0 and n > 0:
        bbuf = <long long *> malloc(k * n * sizeof(long long))
        abuf = <long long *> malloc(m * k * sizeof(long long))
        cbuf = <long long *> malloc(m * n * sizeof(long long))
    if bbuf != NULL and abuf != NULL and cbuf != NULL:
        for t in range(k):
            brow = <list> PyList_GET_ITEM(B, t)
            for j in range(n):
                x = PyLong_AsLongLongAndOverflow(<object> PyList_GET_ITEM(brow, j), &of)
                if of:
                    ok = False
                    break
                bbuf[t * n + j] = x
            if not ok:
                break
        if ok:
            for i in range(m):
                arow = <list> PyList_GET_ITEM(A, i)
                for t in range(k):
                    x = PyLong_AsLongLongAndOverflow(<object> PyList_GET_ITEM(arow, t), &of)
                    if of:
                        ok = False
                        break
                    abuf[i * k + t] = x
                if not ok:
                    break
        if ok:
            with nogil:
                for i in range(m):
                    for j in range(n):
                        cbuf[i * n + j] = 0
                    for t in range(k):
                        x = abuf[i * k + t]
                        if x != 0:
                            for j in range(n):
                                if bbuf[t * n + j] != 0:
                                    if llv_mul_ovf(x, bbuf[t * n + j], &p) or \
                                       llv_add_ovf(cbuf[i * n + j], p, &cbuf[i * n + j]):
                                        ok = False
                                        break
                            if not ok:
                                break
                    if not ok:
                        break
        if ok:
            out = []
            for i in range(m):
                crow = [0] * n
                for j in range(n):
                    crow[j] = cbuf[i * n + j]
                out.append(crow)
            free(bbuf)
            free(abuf)
            free(cbuf)
            return out
    if bbuf != NULL:
        free(bbuf)
    if abuf != NULL:
        free(abuf)
    if cbuf != NULL:
        free(cbuf)
    return _mat_mul_obj(A, B, m, k, n)


def _mat_mul_obj(list A, list B, Py_ssize_t m, Py_ssize_t k, Py_ssize_t n):
    out = []
    cdef Py_ssize_t i, j, t
    for i in range(m):
        arow = A[i]
        crow = [0] * n
        for t in range(k):
            a = arow[t]
            if a:
                brow = B[t]
                for j in range(n):
                    if brow[j]:
                        crow[j] = crow[j] + a * brow[j]
        out.append(crow)
    return out


def mat_vec(list A, list v):
    cdef Py_ssize_t m = PyList_GET_SIZE(A), i
    cdef list out = []
    for i in range(m):
        out.append(dot(<list> PyList_GET_ITEM(A, i), v))
    return out
