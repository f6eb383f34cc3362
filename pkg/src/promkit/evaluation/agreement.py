"""Cohen's kappa for inter-annotator agreement."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass


@dataclass(frozen=True)
class KappaResult:
    rater_pair: str
    p_observed: float
    p_expected: float
    kappa: float
    degenerate: bool = False  # both raters constant and identical


def cohen_kappa(ratings_a: list, ratings_b: list, rater_pair: str = "A-B") -> KappaResult:
    """kappa = (p_o - p_e) / (1 - p_e), p_e from marginal products.

    When both raters are constant and equal (p_e = 1) agreement is perfect
    but chance-uncorrectable; kappa is defined as 1.0 and flagged.
    """
    if len(ratings_a) != len(ratings_b):
        raise ValueError(f"length mismatch: {len(ratings_a)} vs {len(ratings_b)}")
    if not ratings_a:
        raise ValueError("empty rating lists")
    n = len(ratings_a)
    p_observed = sum(1 for a, b in zip(ratings_a, ratings_b) if a == b) / n
    marg_a = Counter(ratings_a)
    marg_b = Counter(ratings_b)
    p_expected = sum(marg_a[k] * marg_b.get(k, 0) for k in marg_a) / (n * n)
    if p_expected >= 1.0:
        return KappaResult(
            rater_pair=rater_pair, p_observed=1.0, p_expected=1.0, kappa=1.0, degenerate=True
        )
    kappa = (p_observed - p_expected) / (1.0 - p_expected)
    return KappaResult(
        rater_pair=rater_pair, p_observed=p_observed, p_expected=p_expected, kappa=kappa
    )


def pairwise_kappa(ratings_by_rater: dict[str, list]) -> list[KappaResult]:
    """Kappa for every rater pair, e.g. to report an agreement range."""
    results = []
    for (name_a, a), (name_b, b) in itertools.combinations(sorted(ratings_by_rater.items()), 2):
        results.append(cohen_kappa(a, b, rater_pair=f"{name_a}-{name_b}"))
    return results
