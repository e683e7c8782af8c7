# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled simulation core; same class and semantics as ``_core_py.Core``."""

import numpy as np
from libc.math cimport sqrt, INFINITY
from libc.stdint cimport uint64_t

cdef enum:
    MANUAL = 0
    DIAMETER = 1
    FARTHEST = 2
    FULLEST = 3
    UNIFORM = 4
    RANDOM = 5

cdef double INV53 = 1.0 / 9007199254740992.0


cdef class Core:
    cdef readonly int n
    cdef double[::1] xs, ys, base, since, rate, le, ple, scratch
    cdef long[::1] perm
    cdef readonly double clock, px, py
    cdef public double max_backlog, total_emptied
    cdef readonly long long consultations
    cdef readonly int kind
    cdef int pair_a, pair_b
    cdef uint64_t rng
    cdef readonly double delta
    cdef readonly long long k_next
    cdef readonly bint adaptive, record
    cdef list _pours

    def __init__(self, xs, ys, double start_x, double start_y, int kind,
                 int pair_a=0, int pair_b=0, seed=0, double delta=1.0, record=False):
        self.n = len(xs)
        self.xs = np.ascontiguousarray(xs, dtype=np.float64).copy()
        self.ys = np.ascontiguousarray(ys, dtype=np.float64).copy()
        self.base = np.zeros(self.n)
        self.since = np.zeros(self.n)
        self.rate = np.zeros(self.n)
        self.le = np.zeros(self.n)
        self.ple = np.zeros(self.n)
        self.scratch = np.zeros(self.n)
        self.perm = np.zeros(self.n, dtype=np.int_)
        self.clock = 0.0
        self.px = start_x
        self.py = start_y
        self.max_backlog = 0.0
        self.total_emptied = 0.0
        self.consultations = 0
        self.kind = kind
        self.pair_a = pair_a
        self.pair_b = pair_b
        self.rng = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
        self.delta = delta
        self.adaptive = kind != MANUAL and kind != DIAMETER and kind != UNIFORM
        self.k_next = 1
        self.record = bool(record)
        self._pours = []
        if kind != MANUAL:
            self._consult()

    # -- views -------------------------------------------------------------
    @property
    def cup_x(self):
        return np.asarray(self.xs).copy()

    @property
    def cup_y(self):
        return np.asarray(self.ys).copy()

    @property
    def player_pos(self):
        return (self.px, self.py)

    @property
    def next_epoch_time(self):
        return self.k_next * self.delta if self.adaptive else INFINITY

    cdef inline double _level(self, int c) nogil:
        return self.base[c] + self.rate[c] * (self.clock - self.since[c]) - self.ple[c]

    def level(self, int c):
        return self._level(c)

    def levels(self):
        out = np.empty(self.n)
        cdef double[::1] o = out
        cdef int c
        for c in range(self.n):
            o[c] = self._level(c)
        return out

    def cumulative(self):
        out = np.empty(self.n)
        cdef double[::1] o = out
        cdef int c
        for c in range(self.n):
            o[c] = self.base[c] + self.rate[c] * (self.clock - self.since[c])
        return out

    def rates(self):
        return np.asarray(self.rate).copy()

    def last_emptied(self):
        return np.asarray(self.le).copy()

    def poured_at_empty(self):
        return np.asarray(self.ple).copy()

    def drain_pours(self):
        out = self._pours
        self._pours = []
        return out

    # -- adversary ---------------------------------------------------------
    cdef inline uint64_t _next(self) nogil:
        cdef uint64_t z
        self.rng += <uint64_t>0x9E3779B97F4A7C15ULL
        z = self.rng
        z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
        z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
        return z ^ (z >> 31)

    cdef void _allocate(self):
        cdef int n = self.n, c, j, arg, m
        cdef long r, tmp
        cdef double best, d, dx, dy, w, total
        cdef double[::1] out = self.scratch
        for c in range(n):
            out[c] = 0.0
        if self.kind == DIAMETER:
            if self.pair_a == self.pair_b:
                out[self.pair_a] = 1.0
            else:
                out[self.pair_a] = 0.5
                out[self.pair_b] = 0.5
        elif self.kind == UNIFORM:
            for c in range(n):
                out[c] = 1.0 / n
        elif self.kind == FARTHEST:
            best = -1.0
            arg = 0
            for c in range(n):
                dx = self.xs[c] - self.px
                dy = self.ys[c] - self.py
                d = dx * dx + dy * dy
                if d > best:
                    best = d
                    arg = c
            out[arg] = 1.0
        elif self.kind == FULLEST:
            best = -INFINITY
            arg = 0
            for c in range(n):
                d = self._level(c)
                if d > best:
                    best = d
                    arg = c
            out[arg] = 1.0
        elif self.kind == RANDOM:
            for c in range(n):
                self.perm[c] = c
            m = 1 + <int>(self._next() % <uint64_t>n)
            total = 0.0
            for j in range(m):
                r = j + <long>(self._next() % <uint64_t>(n - j))
                tmp = self.perm[j]
                self.perm[j] = self.perm[r]
                self.perm[r] = tmp
                w = 1.0 - <double>(self._next() >> 11) * INV53
                out[self.perm[j]] = w
                total += w
            for j in range(m):
                out[self.perm[j]] = out[self.perm[j]] / total

    cdef bint _apply(self):
        cdef int c
        cdef double t = self.clock
        cdef bint changed = False
        for c in range(self.n):
            if self.scratch[c] != self.rate[c]:
                self.base[c] += self.rate[c] * (t - self.since[c])
                self.since[c] = t
                self.rate[c] = self.scratch[c]
                changed = True
        return changed

    cdef void _log(self):
        cdef int c
        idx = []
        val = []
        for c in range(self.n):
            if self.rate[c] > 0.0:
                idx.append(c)
                val.append(self.rate[c])
        self._pours.append((self.clock, idx, val))

    cdef void _consult(self):
        self._allocate()
        if self._apply() and self.record:
            self._log()
        self.consultations += 1

    def set_rates(self, rates):
        if self.kind != MANUAL:
            raise RuntimeError("rates are controlled by the adversary")
        cdef int c
        for c in range(self.n):
            self.scratch[c] = float(rates[c])
        if self._apply() and self.record:
            self._log()

    # -- time and motion ---------------------------------------------------
    def move_to(self, double x, double y, double t_stop):
        cdef double x0 = self.px, y0 = self.py, t0 = self.clock
        cdef double dx = x - x0, dy = y - y0
        cdef double length = sqrt(dx * dx + dy * dy)
        cdef double t_arr = t0 + length
        cdef double te, t_end, f
        while True:
            te = self.k_next * self.delta if self.adaptive else INFINITY
            t_end = t_arr if t_arr < t_stop else t_stop
            if te <= t_end:
                if length > 0.0:
                    f = (te - t0) / length
                    self.px = x0 + f * dx
                    self.py = y0 + f * dy
                self.clock = te
                self._consult()
                self.k_next += 1
                continue
            if t_arr <= t_stop:
                self.px = x
                self.py = y
                self.clock = t_arr
                return True
            f = (t_stop - t0) / length
            self.px = x0 + f * dx
            self.py = y0 + f * dy
            self.clock = t_stop
            return False

    def idle_until(self, double t):
        cdef double te
        while True:
            te = self.k_next * self.delta if self.adaptive else INFINITY
            if te <= t:
                self.clock = te
                self._consult()
                self.k_next += 1
                continue
            if t > self.clock:
                self.clock = t
            return

    def empty(self, int c):
        cdef double p = self.base[c] + self.rate[c] * (self.clock - self.since[c])
        cdef double lvl = p - self.ple[c]
        self.ple[c] = p
        self.le[c] = self.clock
        if lvl > self.max_backlog:
            self.max_backlog = lvl
        self.total_emptied += lvl
        if self.adaptive:
            self._consult()
        return lvl
