"""Write every figure CSV for one parameter set into an output directory.

    python3 scripts/make_figure_data.py --out results --eta 0.99 --alpha 4
"""

import argparse
import warnings
from pathlib import Path

import numpy as np

from freqreuse.analytic import NetworkParams
from freqreuse.harness import FIGURE_KINDS, SweepSpec, emit_figure_data
from freqreuse.optimizer import BoundaryHitWarning


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--eta", type=float, default=0.99)
    ap.add_argument("--alpha", type=float, default=4.0)
    ap.add_argument("--points", type=int, default=33, help="grid points over 1e-2..1e2 BS per UE")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fixed = NetworkParams(lambda_b=1.0, lambda_u=1.0, eta=args.eta, alpha=args.alpha)
    spec = SweepSpec("lambda_b", tuple(np.logspace(-2, 2, args.points)), fixed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryHitWarning)
        for kind in FIGURE_KINDS:
            path = emit_figure_data(kind, spec, out / f"{kind}_eta{args.eta:g}_alpha{args.alpha:g}.csv")
            print(f"wrote {path}")


if __name__ == "__main__":
    main()
