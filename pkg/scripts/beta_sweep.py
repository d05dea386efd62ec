"""Example-1 blow-up time across fractional orders against both Riccati bounds.

    python3 scripts/beta_sweep.py
"""

import numpy as np

from tsunamilab.conformable import riccati_blowup_bounds
from tsunamilab.grid import PeriodicGrid
from tsunamilab.initial_data import example1_u0, example_psi0
from tsunamilab.model import ModelParams, PhysState
from tsunamilab.monitor import detect_blowup
from tsunamilab.solver_direct import StepperConfig, simulate


def main():
    print("beta,t_star,uncertainty,T_sharp,T_paper,detected")
    for beta in (0.25, 0.5, 0.75, 1.0):
        runs = []
        for n in (1024, 2048):
            g = PeriodicGrid(2 * np.pi, n)
            x = np.asarray(g.x)
            st = PhysState(g, example1_u0(x), example_psi0(x))
            cfg = StepperConfig(ds=1e-2, t_end=5.0, snapshot_stride=5, resolution_tol=1e-5)
            runs.append(simulate(st, ModelParams.flat(g, beta=beta), cfg))
        rep = detect_blowup(runs, u0x_at_x0=-1.0)
        tp, ts = riccati_blowup_bounds(-1.0, beta)
        print(f"{beta},{rep.t_star_estimate:.5f},{rep.t_star_uncertainty:.5f},{ts:.5f},{tp:.5f},{rep.detected}")


if __name__ == "__main__":
    main()
