"""Decoy-state BB84 key rate mathematics.

Implements the asymptotic single-decoy bounds on the single-photon gain
(lower) and error rate (upper), and the secret key fraction

    K = 1/2 { -Q_mu f H(E_mu) + Q1 (1 - H(e1)) }

with a constant error-correction inefficiency f.  All clamps (negative Q1,
e1 outside [0, 1/2], negative K) set explicit flags instead of raising, so
optimization sweeps can traverse vacuous parameter regions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .channel import ChannelParams, GainStats, gain_stats

FLAG_VACUOUS = "vacuous"
FLAG_NO_POSITIVE_KEY = "no_positive_key"


@dataclass(frozen=True)
class DecoyEstimate:
    """Single-photon gain/error bounds, with a flag when a clamp fired."""

    q1_lower: float
    e1_upper: float
    vacuous: bool = False


@dataclass(frozen=True)
class KeyRateResult:
    k_per_pulse: float
    mu: float
    nu: float
    bits_per_second: float | None = None
    components: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    @property
    def no_positive_key(self) -> bool:
        return FLAG_NO_POSITIVE_KEY in self.flags


def binary_entropy(e: float) -> float:
    """Shannon entropy H(e) in bits, with H(0) = H(1) = 0 by continuity."""
    if not 0 <= e <= 1:
        raise ValueError(f"error rate must be in [0,1], got {e}")
    if e == 0 or e == 1:
        return 0.0
    return -e * math.log2(e) - (1 - e) * math.log2(1 - e)


def ideal_bb84_rate(q: float, e: float) -> float:
    """Bits per pulse for ideal single-photon BB84: (1/2) Q (1 - 2H(e))."""
    if not 0 <= q <= 1:
        raise ValueError(f"gain must be in [0,1], got {q}")
    return max(0.0, 0.5 * q * (1 - 2 * binary_entropy(e)))


def sifted_key_fraction(e: float) -> float:
    """Key rate per sifted photon, 1 - 2H(e), floored at 0."""
    if not 0 <= e <= 0.5:
        raise ValueError(f"QBER must be in [0,0.5], got {e}")
    return max(0.0, 1 - 2 * binary_entropy(e))


def poisson_pn(mu: float, n: int) -> float:
    """Photon-number distribution of a weak coherent pulse, mu^n e^-mu / n!."""
    if mu < 0:
        raise ValueError("mean photon number must be >= 0")
    if n < 0:
        raise ValueError("photon number must be >= 0")
    return mu**n * math.exp(-mu) / math.factorial(n)


def q1_lower_bound(q_mu: float, q_nu: float, mu: float, nu: float, y0: float) -> float:
    """Lower bound on the single-photon gain Q1, clamped below at 0."""
    if not 0 < nu < mu:
        raise ValueError(f"invalid decoy ordering: need 0 < nu < mu, got mu={mu}, nu={nu}")
    pref = mu**2 * math.exp(-mu) / (mu * nu - nu**2)
    raw = pref * (
        q_nu * math.exp(nu)
        - q_mu * math.exp(mu) * nu**2 / mu**2
        - (mu**2 - nu**2) / mu**2 * y0
    )
    return max(0.0, raw)


def e1_upper_bound(
    e_nu: float, q_nu: float, nu: float, y0: float, q1_lower: float, mu: float
) -> float:
    """Upper bound on the single-photon error rate e1, clamped into [0, 0.5]."""
    if nu <= 0:
        raise ValueError("nu must be > 0")
    if q1_lower <= 0:
        raise ValueError("vacuous single-photon estimate: q1_lower must be > 0")
    raw = (e_nu * q_nu * math.exp(nu) - y0 / 2.0) / (q1_lower * nu / (mu * math.exp(-mu)))
    return min(0.5, max(0.0, raw))


def estimate_single_photon(stats: GainStats, mu: float, nu: float) -> DecoyEstimate:
    """Bound Q1 and e1 from the measured (or modeled) signal/decoy gains."""
    q1 = q1_lower_bound(stats.q_mu, stats.q_nu, mu, nu, stats.y0)
    if q1 == 0.0:
        return DecoyEstimate(q1_lower=0.0, e1_upper=0.5, vacuous=True)
    raw = (stats.e_nu * stats.q_nu * math.exp(nu) - stats.y0 / 2.0) / (
        q1 * nu / (mu * math.exp(-mu))
    )
    clamped = raw < 0 or raw > 0.5
    e1 = min(0.5, max(0.0, raw))
    return DecoyEstimate(q1_lower=q1, e1_upper=e1, vacuous=clamped)


def decoy_key_rate(
    stats: GainStats,
    est: DecoyEstimate,
    f_ec: float,
    mu: float = float("nan"),
    nu: float = float("nan"),
    e_mu_override: float | None = None,
    modulation_rate_hz: float | None = None,
) -> KeyRateResult:
    """Secret key fraction per pulse for the decoy protocol.

    An ``e_mu_override`` replaces the modeled signal QBER in the
    error-correction term (used for measured QBER points); the single-photon
    bounds are taken from ``est`` unchanged.
    """
    e_mu = stats.e_mu if e_mu_override is None else e_mu_override
    raw = 0.5 * (
        -stats.q_mu * f_ec * binary_entropy(e_mu)
        + est.q1_lower * (1 - binary_entropy(est.e1_upper))
    )
    flags = []
    if est.vacuous:
        flags.append(FLAG_VACUOUS)
    if raw <= 0:
        flags.append(FLAG_NO_POSITIVE_KEY)
    k = max(0.0, raw)
    return KeyRateResult(
        k_per_pulse=k,
        mu=mu,
        nu=nu,
        bits_per_second=None if modulation_rate_hz is None else k * modulation_rate_hz,
        components={
            "q_mu": stats.q_mu,
            "e_mu": e_mu,
            "q_nu": stats.q_nu,
            "e_nu": stats.e_nu,
            "y0": stats.y0,
            "q1_lower": est.q1_lower,
            "e1_upper": est.e1_upper,
        },
        flags=tuple(flags),
    )


def evaluate_key_rate(
    p: ChannelParams,
    mu: float,
    nu: float,
    qber_override: float | None = None,
    modulation_rate_hz: float | None = None,
) -> KeyRateResult:
    """Full pipeline: channel model -> decoy bounds -> key rate."""
    stats = gain_stats(p, mu, nu)
    est = estimate_single_photon(stats, mu, nu)
    return decoy_key_rate(
        stats,
        est,
        p.f_ec,
        mu=mu,
        nu=nu,
        e_mu_override=qber_override,
        modulation_rate_hz=modulation_rate_hz,
    )
