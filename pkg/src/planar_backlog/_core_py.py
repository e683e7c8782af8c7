"""Pure-Python simulation core.

Hot state of the continuous game: lazily integrated per-cup pour totals,
emptying bookkeeping, player motion and adversary control epochs.  The
compiled core in ``_core.pyx`` implements the same class with identical
floating-point operation order, so both produce bit-identical runs.

Per cup ``c`` the total poured up to the current clock is
``base[c] + rate[c] * (clock - since[c])``.
"""

import math

import numpy as np

from . import adversaries as adv

INF = math.inf


class Core:
    def __init__(self, xs, ys, start_x, start_y, kind, pair_a=0, pair_b=0,
                 seed=0, delta=1.0, record=False):
        self.n = n = len(xs)
        self.cup_x = [float(v) for v in xs]
        self.cup_y = [float(v) for v in ys]
        self.base = [0.0] * n
        self.since = [0.0] * n
        self.rate = [0.0] * n
        self.le = [0.0] * n
        self.ple = [0.0] * n
        self._scratch = [0.0] * n
        self.clock = 0.0
        self.px = float(start_x)
        self.py = float(start_y)
        self.max_backlog = 0.0
        self.total_emptied = 0.0
        self.consultations = 0
        self.kind = int(kind)
        self.pair_a = int(pair_a)
        self.pair_b = int(pair_b)
        self._rng = adv.SplitMix64(seed)
        self.delta = float(delta)
        self.adaptive = self.kind not in adv.STATIC_KINDS and self.kind != adv.MANUAL
        self.k_next = 1
        self.record = bool(record)
        self._pours = []
        if self.kind != adv.MANUAL:
            self._consult()

    # -- views -------------------------------------------------------------
    @property
    def player_pos(self):
        return (self.px, self.py)

    @property
    def next_epoch_time(self):
        return self.k_next * self.delta if self.adaptive else INF

    def level(self, c):
        return self.base[c] + self.rate[c] * (self.clock - self.since[c]) - self.ple[c]

    def levels(self):
        return [self.level(c) for c in range(self.n)]

    def cumulative(self):
        t = self.clock
        return np.array([self.base[c] + self.rate[c] * (t - self.since[c])
                         for c in range(self.n)])

    def rates(self):
        return np.array(self.rate)

    def last_emptied(self):
        return np.array(self.le)

    def poured_at_empty(self):
        return np.array(self.ple)

    def drain_pours(self):
        out, self._pours = self._pours, []
        return out

    # -- adversary ---------------------------------------------------------
    def _allocate(self, out):
        n, kind = self.n, self.kind
        for c in range(n):
            out[c] = 0.0
        if kind == adv.DIAMETER:
            if self.pair_a == self.pair_b:
                out[self.pair_a] = 1.0
            else:
                out[self.pair_a] = 0.5
                out[self.pair_b] = 0.5
        elif kind == adv.UNIFORM:
            for c in range(n):
                out[c] = 1.0 / n
        elif kind == adv.FARTHEST:
            out[adv.farthest_index(self.cup_x, self.cup_y, self.px, self.py)] = 1.0
        elif kind == adv.FULLEST:
            out[adv.fullest_index(self.levels())] = 1.0
        elif kind == adv.RANDOM:
            adv.random_rates(n, self._rng, out)

    def _apply(self, new):
        t = self.clock
        changed = False
        base, since, rate = self.base, self.since, self.rate
        for c in range(self.n):
            if new[c] != rate[c]:
                base[c] += rate[c] * (t - since[c])
                since[c] = t
                rate[c] = new[c]
                changed = True
        if changed and self.record:
            self._pours.append((t, [c for c in range(self.n) if rate[c] > 0.0],
                                [r for r in rate if r > 0.0]))

    def _consult(self):
        self._allocate(self._scratch)
        self._apply(self._scratch)
        self.consultations += 1

    def set_rates(self, rates):
        if self.kind != adv.MANUAL:
            raise RuntimeError("rates are controlled by the adversary")
        self._apply([float(r) for r in rates])

    # -- time and motion ---------------------------------------------------
    def move_to(self, x, y, t_stop):
        """Walk toward ``(x, y)`` until arrival or ``t_stop``.

        Adversary epochs on the way are processed first, including one
        falling exactly on the arrival or stop time.  Returns True on arrival.
        """
        x0, y0, t0 = self.px, self.py, self.clock
        dx, dy = x - x0, y - y0
        length = math.sqrt(dx * dx + dy * dy)
        t_arr = t0 + length
        while True:
            te = self.k_next * self.delta if self.adaptive else INF
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
                self.px, self.py = x, y
                self.clock = t_arr
                return True
            f = (t_stop - t0) / length
            self.px = x0 + f * dx
            self.py = y0 + f * dy
            self.clock = t_stop
            return False

    def idle_until(self, t):
        while True:
            te = self.k_next * self.delta if self.adaptive else INF
            if te <= t:
                self.clock = te
                self._consult()
                self.k_next += 1
                continue
            if t > self.clock:
                self.clock = t
            return

    def empty(self, c):
        """Empty cup ``c`` now; returns the level it held."""
        p = self.base[c] + self.rate[c] * (self.clock - self.since[c])
        lvl = p - self.ple[c]
        self.ple[c] = p
        self.le[c] = self.clock
        if lvl > self.max_backlog:
            self.max_backlog = lvl
        self.total_emptied += lvl
        if self.adaptive:
            self._consult()
        return lvl
