"""How fast the expansion functions approach their closed-form large-x limit.

    python3 scripts/asymptotic_decay.py

For the Gaussian test case prints max |A_L(x) - (a_L cos x + b_L sin x)| over
windows of increasing x together with x times that deviation.
"""

import numpy as np

from coxthompson import forward, reconstruct, semianalytic
from coxthompson.core import PhaseShiftSet

WINDOWS = [(10, 20), (50, 60), (100, 110), (400, 410), (1600, 1610)]


def main():
    q = forward.gaussian(-1.0, 2.0)
    for ls in ((0, 2, 4), (1, 3)):
        res = forward.phase_shifts(q, ls, tail="off")
        phases = PhaseShiftSet(ls, res.deltas.real)
        T = semianalytic.solve_parity(phases).solution
        c = semianalytic.asymptotic_coefficients(T, ls)
        print(f"\nl = {list(ls)}  T = {np.round(T.real, 5).tolist()}")
        print(f"{'window':>14} {'max dev':>10} {'x * dev':>9}")
        for lo, hi in WINDOWS:
            x = np.linspace(lo, hi, 201)
            A = reconstruct.expansion_functions(T, ls, x).A
            dev = np.max(np.abs(A - (np.cos(x)[:, None] * c.a + np.sin(x)[:, None] * c.b)))
            print(f"{str((lo, hi)):>14} {dev:10.2e} {lo * dev:9.3f}")


if __name__ == "__main__":
    main()
