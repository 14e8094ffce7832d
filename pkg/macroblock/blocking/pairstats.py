from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from ..geometry import Point2D, PointLike, path_rectangle, convex_intersection_area

COHERENCE_TOLERANCE = 1e-12


def nlos_prob(lambda_bl: float, area: float) -> float:
    """Probability that at least one blockage center lands in a region of the given area."""
    if lambda_bl < 0:
        raise ValueError(f"Blockage density is negative: {lambda_bl}")
    if area < 0:
        raise ValueError(f"Blockage area is negative: {area}")

    return -math.expm1(-lambda_bl * area)


def joint_pmf(p1: float, p2: float, q1: float, q2: float, rho: float) -> np.ndarray:
    """Returns the joint pmf of two Bernoulli blocking indicators with correlation rho.

    The result is a 2x2 array indexed [b1, b2]. Entries that fall outside [0, 1] by more
    than COHERENCE_TOLERANCE raise a RuntimeWarning; all entries are then clamped.
    """
    for p, q in ((p1, q1), (p2, q2)):
        if not math.isclose(p + q, 1.0, abs_tol=COHERENCE_TOLERANCE):
            raise ValueError(f"Marginals do not sum to one: p={p}, q={q}")

    rh = rho * math.sqrt(p1 * p2 * q1 * q2)
    pmf = np.array(
        [
            [q1 * q2 + rh, q1 * p2 - rh],
            [p1 * q2 - rh, p1 * p2 + rh],
        ]
    )

    if np.any(pmf < -COHERENCE_TOLERANCE) or np.any(pmf > 1.0 + COHERENCE_TOLERANCE):
        warnings.warn(
            f"incoherent correlation rho={rho} for p1={p1}, p2={p2}", RuntimeWarning
        )

    return np.clip(pmf, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class PairBlockingStats:
    """Blocking statistics of the paths from one transmitter to two base stations.

    Attributes:
        a1, a2: Areas of the two blockage rectangles.
        v: Area the two rectangles share.
        p1, p2: Probabilities that each path is blocked (NLOS).
        q1, q2: Probabilities that each path is clear (LOS).
        rho: Correlation coefficient of the two blocking indicators.
        joint: 2x2 pmf indexed [b1, b2].
    """

    a1: float
    a2: float
    v: float
    p1: float
    p2: float
    q1: float
    q2: float
    rho: float
    joint: np.ndarray

    @property
    def h(self) -> float:
        return math.sqrt(self.p1 * self.p2 * self.q1 * self.q2)

    def pmf(self, b1: int, b2: int) -> float:
        return float(self.joint[b1, b2])

    def independent(self) -> PairBlockingStats:
        """The same marginals with the correlation removed."""
        return replace(
            self, rho=0.0, joint=joint_pmf(self.p1, self.p2, self.q1, self.q2, 0.0)
        )

    def marginal(self, i: int) -> np.ndarray:
        """Returns [q_i, p_i], the pmf of B_i indexed by b_i."""
        if i == 1:
            return np.array([self.q1, self.p1])
        if i == 2:
            return np.array([self.q2, self.p2])

        raise ValueError(f"Base station index must be 1 or 2, got {i}")


def pair_stats(
    tx: PointLike,
    x1: PointLike,
    x2: PointLike,
    width: float,
    lambda_bl: float,
) -> PairBlockingStats:
    tx = Point2D.of(tx)
    rect1 = path_rectangle(tx, x1, width)
    rect2 = path_rectangle(tx, x2, width)

    a1 = width * (Point2D.of(x1) - tx).norm()
    a2 = width * (Point2D.of(x2) - tx).norm()
    v = min(convex_intersection_area(rect1, rect2), a1, a2)

    p1, p2 = nlos_prob(lambda_bl, a1), nlos_prob(lambda_bl, a2)
    q1, q2 = math.exp(-lambda_bl * a1), math.exp(-lambda_bl * a2)
    both_clear = math.exp(-lambda_bl * (a1 + a2 - v))

    h = math.sqrt(p1 * p2 * q1 * q2)
    # 0/0 when either marginal is degenerate; the marginals alone fix the pmf then
    rho = (both_clear - q1 * q2) / h if h > 0.0 else 0.0

    return PairBlockingStats(
        a1=a1,
        a2=a2,
        v=v,
        p1=p1,
        p2=p2,
        q1=q1,
        q2=q2,
        rho=rho,
        joint=joint_pmf(p1, p2, q1, q2, rho),
    )


def los_probability(stats: PairBlockingStats, n: int, correlated: bool = True) -> float:
    """Probability that at least one of the n nearest base stations is LOS."""
    if n == 1:
        return stats.q1
    if n != 2:
        raise ValueError(f"Macrodiversity order must be 1 or 2, got {n}")

    rho_h = stats.rho * stats.h if correlated else 0.0
    return 1.0 - stats.p1 * stats.p2 - rho_h


def path_stats(tx: PointLike, x: PointLike, width: float, lambda_bl: float) -> PairBlockingStats:
    """Statistics of a single path, stored as a pair whose second path is the first.

    Only the first marginal is meaningful; the pair is fully correlated.
    """
    a = width * (Point2D.of(x) - Point2D.of(tx)).norm()
    if a <= 0:
        raise ValueError(f"zero-length path from {tuple(tx)} to {tuple(x)}")

    p, q = nlos_prob(lambda_bl, a), math.exp(-lambda_bl * a)
    rho = 1.0 if p * q > 0.0 else 0.0
    return PairBlockingStats(
        a1=a, a2=a, v=a, p1=p, p2=p, q1=q, q2=q, rho=rho, joint=joint_pmf(p, p, q, q, rho)
    )
