"""Iteration diagnostics of the successive-linearisation solver on small data.

    python3 scripts/picard_study.py [--T 0.1] [--amp 0.01]
"""

import argparse

import numpy as np

from tsunamilab.grid import PeriodicGrid
from tsunamilab.littlewood_paley import besov_norm
from tsunamilab.model import ModelParams, PhysState, symmetrize
from tsunamilab.solver_direct import StepperConfig
from tsunamilab.solver_picard import PicardConfig, picard_solve, uniform_bound_check


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--T", type=float, default=0.1)
    ap.add_argument("--amp", type=float, default=0.01)
    ap.add_argument("--n", type=int, default=64)
    args = ap.parse_args()
    g = PeriodicGrid(10.0, args.n)
    x = np.asarray(g.x)
    st = PhysState(g, args.amp * np.sin(np.pi * x / 10) + args.amp * np.sin(7 * np.pi * x / 10),
                   np.full(args.n, 0.25))
    p = ModelParams.flat(g)
    sym = symmetrize(st, p)
    _, rep = picard_solve(sym, p, PicardConfig(n_max=30, tol_l2=1e-12, T=args.T, inner=StepperConfig(ds=1e-3)))
    print("iteration,besov_sup,increment,data_tail,ratio")
    ratios = [np.nan, *rep.ratios()]
    for r, q in zip(rep.rows(), ratios):
        print(f"{r['iteration']},{r['besov_sup']:.6e},{r['increment']:.3e},{r['data_tail']:.3e},{q:.3e}")
    ok, margin = uniform_bound_check(rep, besov_norm([sym.u, sym.v], g, 1.5), 0.0)
    print(f"# {rep.verdict}; uniform bound {ok} (margin {margin:.3f}); residual {rep.residual:.2e}")


if __name__ == "__main__":
    main()
