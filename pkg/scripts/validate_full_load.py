"""Monte Carlo coverage at full load for the baseline and BS-specific reuse.

Compares each estimate with the closed-form reliability and with the
independent-thinning coverage, and writes one validation CSV per scheme.

    python3 scripts/validate_full_load.py --trials 200000 --out results
"""

import argparse
from pathlib import Path

from freqreuse.analytic import NetworkParams, Scheme
from freqreuse.harness import run_validation
from freqreuse.montecarlo import SimConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--load", type=float, default=50.0, help="UEs per BS")
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    params = NetworkParams(lambda_b=1.0, lambda_u=args.load)
    cfg = SimConfig(trials=args.trials, seed=args.seed)
    for scheme in (Scheme.baseline(), Scheme.frb(2), Scheme.frb(4)):
        report = run_validation(params, scheme, cfg, (0.1, 1.0, 10.0))
        name = str(scheme).replace("(M=", "").replace(")", "")
        report.table.write(out / f"validation_{name}.csv")
        print(f"\n{scheme}  ({args.trials} trials)")
        print("t        mc        +-       exact     thinned   pass")
        for r in report.table.records():
            if r["check"] != "coverage":
                continue
            print(f"{r['t']:<8g} {r['empirical']:.5f}  {r['ci_half_width']:.5f}  "
                  f"{r['analytic_exact']:.5f}   {r['thinned_exact']:.5f}   {r['pass']}")


if __name__ == "__main__":
    main()
