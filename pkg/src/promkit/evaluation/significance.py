"""McNemar's paired test between two classifiers.

Correctness per item is exact label match by default (a p2-binarized
variant is available).  Small discordant totals (b + c < 25) use the exact
two-sided binomial; larger ones the chi-square statistic with continuity
correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from promkit.labels import P2

Key = tuple[str, int]

EXACT_CUTOFF = 25


@dataclass(frozen=True)
class McNemarResult:
    b: int  # A correct, B wrong
    c: int  # A wrong, B correct
    statistic: float
    p_value: float
    method: str  # "exact_binomial" | "chi2_cc"


def _chi2_sf_1dof(x: float) -> float:
    """Survival function of chi-square with 1 dof: erfc(sqrt(x/2))."""
    return math.erfc(math.sqrt(x / 2.0))


def _exact_binomial_p(b: int, c: int) -> float:
    """Two-sided sign-test p-value under Binomial(b+c, 1/2)."""
    n = b + c
    if n == 0:
        return 1.0
    k = min(b, c)
    tail = sum(math.comb(n, j) for j in range(k + 1))
    return min(1.0, 2.0 * tail / 2.0**n)


def mcnemar(b: int, c: int) -> McNemarResult:
    if b < 0 or c < 0:
        raise ValueError("discordant counts must be non-negative")
    n = b + c
    if n == 0:
        return McNemarResult(b=b, c=c, statistic=0.0, p_value=1.0, method="exact_binomial")
    if n < EXACT_CUTOFF:
        return McNemarResult(
            b=b, c=c, statistic=float(min(b, c)), p_value=_exact_binomial_p(b, c),
            method="exact_binomial",
        )
    # continuity correction clamped at zero: for b == c the uncorrected
    # (|b-c|-1)^2 = 1 would understate a p-value that is exactly 1
    statistic = max(0, abs(b - c) - 1) ** 2 / n
    return McNemarResult(
        b=b, c=c, statistic=statistic, p_value=_chi2_sf_1dof(statistic), method="chi2_cc"
    )


def discordant_counts(
    gold: dict[Key, str],
    pred_a: dict[Key, str],
    pred_b: dict[Key, str],
    binarize_p2: bool = False,
) -> tuple[int, int]:
    keys = set(gold)
    if set(pred_a) != keys or set(pred_b) != keys:
        raise ValueError("gold and both prediction sets must cover identical keys")

    def correct(pred_label: str, gold_label: str) -> bool:
        if binarize_p2:
            return (pred_label == P2) == (gold_label == P2)
        return pred_label == gold_label

    b = c = 0
    for key in keys:
        a_ok = correct(pred_a[key], gold[key])
        b_ok = correct(pred_b[key], gold[key])
        if a_ok and not b_ok:
            b += 1
        elif b_ok and not a_ok:
            c += 1
    return b, c


def mcnemar_from_labels(
    gold: dict[Key, str],
    pred_a: dict[Key, str],
    pred_b: dict[Key, str],
    binarize_p2: bool = False,
) -> McNemarResult:
    b, c = discordant_counts(gold, pred_a, pred_b, binarize_p2)
    return mcnemar(b, c)
