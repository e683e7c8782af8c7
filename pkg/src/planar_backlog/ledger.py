"""Deposit-record water ledger.

Each cup keeps time-stamped piecewise-constant deposits poured since it was
last emptied.  This is the slow, explicit bookkeeping; the simulation cores
track running totals instead, and traces are replayed through this ledger to
cross-check them.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Deposit:
    cup: int
    t_begin: float
    t_end: float
    rate: float

    def overlap(self, lo: float, hi: float) -> float:
        """Water of this deposit poured inside ``[lo, hi]``."""
        a = max(self.t_begin, lo)
        b = min(self.t_end, hi)
        return self.rate * (b - a) if b > a else 0.0


class CupLedger:
    def __init__(self, n: int):
        self.n = n
        self.deposits: list[list[Deposit]] = [[] for _ in range(n)]
        self.last_emptied = [0.0] * n
        self.now = 0.0
        # running totals for conservation checks
        self.poured = 0.0
        self.emptied = 0.0

    def _check(self, cup: int) -> None:
        if not 0 <= cup < self.n:
            raise KeyError(f"unknown cup {cup}")

    def pour(self, cup: int, t_begin: float, t_end: float, rate: float) -> None:
        self._check(cup)
        if rate < 0 or t_end < t_begin:
            raise ValueError("bad deposit")
        if rate == 0 or t_end == t_begin:
            return
        deps = self.deposits[cup]
        if deps and t_begin < deps[-1].t_end:
            raise ValueError("deposits must be time-ordered")
        if deps and deps[-1].t_end == t_begin and deps[-1].rate == rate:
            deps[-1].t_end = t_end
        else:
            deps.append(Deposit(cup, t_begin, t_end, rate))
        self.poured += rate * (t_end - t_begin)
        self.now = max(self.now, t_end)

    def level(self, cup: int) -> float:
        self._check(cup)
        le = self.last_emptied[cup]
        return sum(d.overlap(le, self.now) for d in self.deposits[cup])

    def levels(self) -> list[float]:
        return [self.level(c) for c in range(self.n)]

    def empty(self, cup: int, t: float) -> float:
        self._check(cup)
        self.now = max(self.now, t)
        lvl = self.level(cup)
        self.last_emptied[cup] = t
        self.deposits[cup] = [d for d in self.deposits[cup] if d.t_end > t]
        self.emptied += lvl
        return lvl

    def water_in_window(self, cup: int, t1: float, t2: float) -> float:
        """Water poured into ``cup`` during ``[t1, t2]`` still present now."""
        self._check(cup)
        if not t1 <= t2 <= self.now + 1e-12:
            raise ValueError("need t1 <= t2 <= now")
        lo = max(t1, self.last_emptied[cup])
        return sum(d.overlap(lo, t2) for d in self.deposits[cup])

    def max_water_window(self, t1: float, t2: float) -> float:
        return max(self.water_in_window(c, t1, t2) for c in range(self.n))

    def total_water(self) -> float:
        return sum(self.levels())


class LedgerReplay:
    """Feeds piecewise-constant rates and emptyings into a :class:`CupLedger`.

    Rates set at time ``t`` stay in force until the next :meth:`set_rates`;
    call :meth:`advance` to materialize deposits up to a time.
    """

    def __init__(self, n: int):
        self.ledger = CupLedger(n)
        self.rates: dict[int, float] = {}
        self.t = 0.0

    def advance(self, t: float) -> None:
        if t < self.t:
            raise ValueError("replay time went backwards")
        if t > self.t:
            for cup, rate in self.rates.items():
                self.ledger.pour(cup, self.t, t, rate)
            self.t = t
        self.ledger.now = max(self.ledger.now, t)

    def set_rates(self, t: float, rates: dict[int, float]) -> None:
        self.advance(t)
        self.rates = {int(c): float(r) for c, r in rates.items() if r > 0}

    def empty(self, cup: int, t: float) -> float:
        self.advance(t)
        return self.ledger.empty(cup, t)
