#!/usr/bin/env python3
"""Cross-check the analytic gain/QBER model against the pulse-level Monte Carlo.

For a few channel lengths, simulates a session and compares the empirical gain
and QBER against the Poisson-photon-number model, in units of standard errors.
"""

import argparse
import sys

from uwqkd.channel import ChannelParams, background_yield, gain_model, qber_model, transmittance
from uwqkd.montecarlo import simulate_session, within_model_band


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-pulses", type=int, default=10**6)
    ap.add_argument("--mu", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--e-det", type=float, default=0.0027)
    args = ap.parse_args(argv)

    base = ChannelParams(e_det=args.e_det)
    print(f"{'L [m]':>6} {'Q_hat':>10} {'Q_model':>10} {'dQ/SE':>7} "
          f"{'E_hat':>8} {'E_model':>8} {'dE/SE':>7}  band")
    ok = True
    for length in (0.5, 5.0, 10.5, 15.0, 20.5):
        p = base.at_length(length)
        s = simulate_session(p, args.mu, args.n_pulses, args.seed)
        eta, y0 = transmittance(p), background_yield(p)
        q_m = gain_model(args.mu, eta, y0)
        e_m = qber_model(args.mu, eta, y0, p.e_det)
        dq = abs(s.q_hat - q_m) / s.q_se if s.q_se else 0.0
        de = abs(s.e_hat - e_m) / s.e_se if s.e_se else 0.0
        band = within_model_band(s, p, args.mu)
        ok &= band
        print(f"{length:6.1f} {s.q_hat:10.3e} {q_m:10.3e} {dq:7.2f} "
              f"{s.e_hat:8.4f} {e_m:8.4f} {de:7.2f}  {'ok' if band else 'FAIL'}")
    print("all within band" if ok else "DISAGREEMENT FOUND")
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
