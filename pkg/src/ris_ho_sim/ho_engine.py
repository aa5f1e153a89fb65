"""Handover decision logic and empirical trigger-probability estimators.

The four-mode classifier walks the branches in a fixed order with
last-assignment-wins semantics: within the degraded-serving branch a
sub-soft-threshold direct link upgrades a hard handover to a soft one, and
the load-driven reflected-path branch overrides the ping-pong branch when
both fire. The margin interval around the hard threshold is open on the
left and closed on the right throughout, for both the classifier and the
ping-pong probability estimator.

Probability estimators are empirical over paired realizations; each one
computes the union count both directly and via inclusion-exclusion and
insists the two agree exactly on the sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidArgumentError


class HoMode(Enum):
    HHO = "hho"
    SHO = "sho"
    RIS_CB = "ris_cb"
    RIS_PP = "ris_pp"
    NO_HANDOVER = "no_handover"


class LinkKind(Enum):
    DIRECT = "direct"
    NON_DIRECT = "non_direct"


@dataclass(frozen=True)
class LinkMeasurement:
    link_id: str
    kind: LinkKind
    ber: float

    def __post_init__(self):
        if not (0.0 <= self.ber <= 0.5):
            raise InvalidArgumentError("ber must lie in [0, 0.5]")


@dataclass(frozen=True)
class HoThresholds:
    """Hard/soft error-rate thresholds, ping-pong margin, and the
    active-connection count that triggers load shedding."""

    t_hh: float
    t_hs: float
    epsilon: float
    load_threshold: int

    def __post_init__(self):
        if not (0.0 < self.t_hs < self.t_hh < 0.5):
            raise InvalidArgumentError("need 0 < t_hs < t_hh < 0.5")
        if not (0.0 < self.epsilon < self.t_hh):
            raise InvalidArgumentError("need 0 < epsilon < t_hh")
        if self.load_threshold < 0:
            raise InvalidArgumentError("load_threshold must be non-negative")


@dataclass(frozen=True)
class ServingState:
    serving_link: LinkMeasurement
    active_connections: int

    def __post_init__(self):
        if self.active_connections < 0:
            raise InvalidArgumentError("active_connections must be >= 0")


@dataclass(frozen=True)
class HoDecision:
    mode: HoMode
    chosen_link: str | None = None

    def __post_init__(self):
        if self.mode != HoMode.NO_HANDOVER and self.chosen_link is None:
            raise InvalidArgumentError(
                "a handover decision must name the chosen link")


def _best(links):
    return min(links, key=lambda l: (l.ber, l.link_id)).link_id


def decide_handover(state: ServingState, direct, non_direct,
                    th: HoThresholds) -> HoDecision:
    """Classify the next action for one measurement snapshot.

    ``direct`` and ``non_direct`` are lists of ``LinkMeasurement`` of the
    matching kind. Among the links qualifying for the winning branch, the
    one with the lowest error rate is chosen (ties by lowest link id).
    """
    direct = list(direct)
    non_direct = list(non_direct)
    if any(l.kind != LinkKind.DIRECT for l in direct):
        raise InvalidArgumentError("direct list contains a non-direct link")
    if any(l.kind != LinkKind.NON_DIRECT for l in non_direct):
        raise InvalidArgumentError("non_direct list contains a direct link")

    serving_ber = state.serving_link.ber
    mode = HoMode.NO_HANDOVER
    qualifying = []

    if serving_ber >= th.t_hh:
        hard = [l for l in direct
                if l.ber < serving_ber and l.ber <= th.t_hh]
        if hard:
            mode, qualifying = HoMode.HHO, hard
        soft = [l for l in direct if l.ber < th.t_hs]
        if soft:
            mode, qualifying = HoMode.SHO, soft

    if th.t_hh - th.epsilon < serving_ber <= th.t_hh + th.epsilon:
        pp = [l for l in non_direct if l.ber < th.t_hh]
        if pp:
            mode, qualifying = HoMode.RIS_PP, pp

    if state.active_connections > th.load_threshold:
        cb = [l for l in non_direct if l.ber < th.t_hh]
        if cb:
            mode, qualifying = HoMode.RIS_CB, cb

    if mode == HoMode.NO_HANDOVER:
        return HoDecision(HoMode.NO_HANDOVER)
    return HoDecision(mode, _best(qualifying))


# ---------------------------------------------------------------------------
# empirical trigger probabilities


def _paired(serving_ber, other_ber):
    s = np.asarray(serving_ber, dtype=float)
    o = np.asarray(other_ber, dtype=float)
    if s.size == 0:
        raise InvalidArgumentError("need at least one paired realization")
    if s.shape != o.shape:
        raise InvalidArgumentError("paired sample arrays must match in shape")
    return s, o


def _union_prob_2(a: np.ndarray, b: np.ndarray) -> float:
    direct = int(np.count_nonzero(a | b))
    incl_excl = (int(np.count_nonzero(a)) + int(np.count_nonzero(b))
                 - int(np.count_nonzero(a & b)))
    assert direct == incl_excl
    return direct / a.size


def hho_probability(serving_ber, candidate_ber, th: HoThresholds) -> float:
    """P(serving error rate at/above the hard threshold OR candidate better
    than serving), estimated over paired realizations."""
    s, c = _paired(serving_ber, candidate_ber)
    return _union_prob_2(s >= th.t_hh, c < s)


def sho_probability(serving_ber, candidate_ber, th: HoThresholds) -> float:
    """P(serving between the soft and hard thresholds OR candidate below the
    soft threshold)."""
    s, c = _paired(serving_ber, candidate_ber)
    return _union_prob_2((s >= th.t_hs) & (s < th.t_hh), c < th.t_hs)


def ris_cb_probability(active_connections, ris_ber,
                       th: HoThresholds) -> float:
    """P(serving load above threshold OR reflected-path error rate below the
    hard threshold)."""
    load = np.asarray(active_connections)
    r = np.asarray(ris_ber, dtype=float)
    if load.size == 0:
        raise InvalidArgumentError("need at least one paired realization")
    if load.shape != r.shape:
        raise InvalidArgumentError("paired sample arrays must match in shape")
    return _union_prob_2(load > th.load_threshold, r < th.t_hh)


def ris_pp_probability(serving_ber, ris_ber, th: HoThresholds) -> float:
    """Three-way union: serving inside the margin band around the hard
    threshold, reflected path inside that band, or reflected path below the
    hard threshold."""
    s, r = _paired(serving_ber, ris_ber)
    lo, hi = th.t_hh - th.epsilon, th.t_hh + th.epsilon
    a = (s > lo) & (s <= hi)
    b = (r > lo) & (r <= hi)
    c = r < th.t_hh
    direct = int(np.count_nonzero(a | b | c))
    incl_excl = (int(np.count_nonzero(a)) + int(np.count_nonzero(b))
                 + int(np.count_nonzero(c))
                 - int(np.count_nonzero(a & b)) - int(np.count_nonzero(a & c))
                 - int(np.count_nonzero(b & c))
                 + int(np.count_nonzero(a & b & c)))
    assert direct == incl_excl
    return direct / s.size


def select_target(probabilities: dict) -> str:
    """Link id with the highest probability; ties break to the lowest id."""
    if not probabilities:
        raise InvalidArgumentError("probabilities map must be non-empty")
    return min(probabilities.items(), key=lambda kv: (-kv[1], kv[0]))[0]
