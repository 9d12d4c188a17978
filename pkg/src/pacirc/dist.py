"""Exact finite probability distributions over integer (or integer-pair) outcomes."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

Outcome = int | tuple[int, int]


class DistTable:
    """Map from outcome to exact rational probability, summing to exactly 1.

    Outcomes are ints or pairs of ints. Equality is exact rational
    equality of the full table; there is no tolerance anywhere.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[Outcome, Fraction]):
        total = Fraction(0)
        clean: dict[Outcome, Fraction] = {}
        for outcome, p in entries.items():
            p = Fraction(p)
            if p < 0 or p > 1:
                raise ValueError(f"probability {p} of outcome {outcome} outside [0, 1]")
            if p == 0:
                continue
            clean[outcome] = p
            total += p
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, expected exactly 1")
        self.entries = dict(sorted(clean.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistTable):
            return NotImplemented
        return self.entries == other.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.items())

    def __getitem__(self, outcome: Outcome) -> Fraction:
        return self.entries.get(outcome, Fraction(0))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in self.entries.items())
        return f"DistTable({{{inner}}})"

    def support(self) -> list[Outcome]:
        return list(self.entries)

    def expectation(self, fn: Callable[[Outcome], int | Fraction]) -> Fraction:
        return sum((p * Fraction(fn(outcome)) for outcome, p in self.entries.items()), Fraction(0))

    def mean(self, component: int | None = None) -> Fraction:
        if component is None:
            return self.expectation(lambda o: o)
        return self.expectation(lambda o: o[component])

    def variance(self, component: int | None = None) -> Fraction:
        if component is None:
            mu = self.mean()
            return self.expectation(lambda o: o * o) - mu * mu
        mu = self.mean(component)
        return self.expectation(lambda o: o[component] * o[component]) - mu * mu

    def covariance(self, i: int, j: int) -> Fraction:
        return self.expectation(lambda o: o[i] * o[j]) - self.mean(i) * self.mean(j)

    def map_outcomes(self, fn: Callable[[Outcome], Outcome]) -> "DistTable":
        mapped: dict[Outcome, Fraction] = {}
        for outcome, p in self.entries.items():
            key = fn(outcome)
            mapped[key] = mapped.get(key, Fraction(0)) + p
        return DistTable(mapped)

    @staticmethod
    def _outcome_str(outcome: Outcome) -> str:
        if isinstance(outcome, tuple):
            return ",".join(str(x) for x in outcome)
        return str(outcome)

    def to_json_rows(self) -> list[dict[str, str]]:
        """Rows of {"outcome": "w,b" or "d", "p": "num/den"}."""
        return [
            {"outcome": self._outcome_str(o), "p": f"{p.numerator}/{p.denominator}"}
            for o, p in self.entries.items()
        ]

    def to_csv_rows(self) -> Iterable[list[str]]:
        """Header plus one row per outcome, probabilities as exact rational strings and decimals."""
        yield ["outcome", "p_exact", "p_decimal"]
        for o, p in self.entries.items():
            yield [self._outcome_str(o), f"{p.numerator}/{p.denominator}", f"{float(p):.12g}"]
