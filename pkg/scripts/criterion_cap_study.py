"""How far can the gradient cap be pushed on Example 1?

Runs the beta = 1/2 example with caps 1e2, 1e3, 1e4, once with the
resolution guard and once with the cap as the only stopping rule, and a
refinement family with the guard.  Prints the final criterion integral,
the gradient reached, the stopping reason and the spectral tail at the
end, which tells whether the last state still resolves the solution.

    python3 scripts/criterion_cap_study.py [--n 4096]
"""

import argparse

import numpy as np

from tsunamilab.grid import PeriodicGrid
from tsunamilab.initial_data import example1_u0, example_psi0
from tsunamilab.model import ModelParams, PhysState
from tsunamilab.monitor import criterion_integral
from tsunamilab.solver_direct import StepperConfig, resolution_tail, simulate


def run(n, cap, tol):
    g = PeriodicGrid(2 * np.pi, n)
    x = np.asarray(g.x)
    st = PhysState(g, example1_u0(x), example_psi0(x))
    tr = simulate(st, ModelParams.flat(g, beta=0.5),
                  StepperConfig(ds=1e-2, t_end=3.0, gradient_cap=cap, resolution_tol=tol))
    return tr, criterion_integral(tr).values[-1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4096)
    args = ap.parse_args()
    print("N,cap,guard,reason,t_end,linf_ux,I_final,tail")
    for cap in (1e2, 1e3, 1e4):
        for tol in (1e-5, None):
            tr, I = run(args.n, cap, tol)
            print(f"{args.n},{cap:g},{tol is not None},{tr.reason},{tr.series('t')[-1]:.5f},"
                  f"{tr.series('linf_ux')[-1]:.1f},{I:.4f},{resolution_tail(tr.final.state):.1e}")
    for n in (1024, 2048, 4096, 8192):
        tr, I = run(n, 1e4, 1e-5)
        print(f"{n},1e4,True,{tr.reason},{tr.series('t')[-1]:.5f},"
              f"{tr.series('linf_ux')[-1]:.1f},{I:.4f},{resolution_tail(tr.final.state):.1e}")


if __name__ == "__main__":
    main()
