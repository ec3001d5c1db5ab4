"""The chart-level duality on one coordinate patch.

    python3 demos/local_duality.py

Builds a flat connection, maps sections to the dual curve with tau and
checks on a few samples that tau intertwines differential operators.
"""

import random

from supercurves.connection import flat_check, parallel_frame
from supercurves.duality import Superdiagonal, apply_dual_operator, hat_nabla, psi, psi_op, tau, tau_inverse
from supercurves.grassmann import format_element
from supercurves.sampling import random_flat_connection, random_section
from supercurves.superfield import DiffOperator


def main():
    ch = Superdiagonal.over(("e1", "e2"))
    x = ch.x
    h = x.parse("z^2 + theta z e1")
    print("Psi sends z -> u, theta -> rho; in (z, theta, rho) coordinates")
    print(f"  Psi({format_element(h)}) = {format_element(psi(h, ch))}")

    rng = random.Random(7)
    conn = random_flat_connection(x, (1, 1), rng)
    print("\na flat rank 1|1 connection:", "flat" if flat_check(conn).flat else "not flat")
    frame = parallel_frame(conn, ["theta"])
    print("  parallel frame A0:")
    for row in frame.A0.entries:
        print("    [" + ", ".join(format_element(e) for e in row) + "]")

    v = random_section(x, (1, 1), rng, parity=None)
    t = tau(v, ch, conn)
    print("\nsection v =", v)
    print("tau(v)    =", t)
    print("  killed by the hat theta derivative:", hat_nabla("theta", t, ch, conn).is_zero())
    print("  tau_inverse(tau(v)) == v:", tau_inverse(t, ch) == v)

    ops = {
        "z": DiffOperator.multiplication(x.gen("z")),
        "theta": DiffOperator.multiplication(x.gen("theta")),
        "d_z": DiffOperator.partial(x, "z"),
        "d_theta": DiffOperator.partial(x, "theta"),
    }
    print("\ntau(M v) == Psi(M) tau(v):")
    for name, op in ops.items():
        lhs = tau(op.apply(v, lambda n, w: conn.nabla(n, w)), ch, conn)
        rhs = apply_dual_operator(psi_op(op, ch), t, ch, conn)
        print(f"  M = {name:<8} {lhs == rhs}")


if __name__ == "__main__":
    main()
