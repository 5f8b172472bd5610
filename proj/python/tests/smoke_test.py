"""Smoke tests for the python module: a handful of exact values and sanity
properties across the exposed operations."""

import math
import sys

try:
    import qrlab as q
except ImportError:
    import _qrlab as q

FAILURES = []


def check(name, cond):
    if not cond:
        FAILURES.append(name)
        print(f"FAIL {name}")
    else:
        print(f"ok   {name}")


def mat(rows):
    return [[complex(x) for x in row] for row in rows]


ZERO = mat([[1, 0], [0, 0]])
ONE = mat([[0, 0], [0, 1]])
PLUS = mat([[0.5, 0.5], [0.5, 0.5]])
BELL = mat([[0.5, 0, 0, 0.5], [0, 0, 0, 0], [0, 0, 0, 0], [0.5, 0, 0, 0.5]])
MIXED2 = mat([[0.5, 0], [0, 0.5]])


def main():
    check("trace_distance orthogonal", abs(q.trace_distance(ZERO, ONE) - 1.0) < 1e-12)
    check("trace_distance zero/plus",
          abs(q.trace_distance(ZERO, PLUS) - 1 / math.sqrt(2)) < 1e-12)
    check("fidelity zero/plus", abs(q.fidelity(ZERO, PLUS) - 0.5) < 1e-10)
    check("entropy of bell reduction",
          abs(q.von_neumann_entropy(q.partial_trace(BELL, 2, 2, "A")) - 1.0) < 1e-10)
    check("relative entropy zero vs mixed",
          abs(q.relative_entropy(ZERO, MIXED2) - 1.0) < 1e-10)

    e0, e1, p = q.helstrom(ZERO, PLUS)
    check("helstrom success", abs(p - 0.5 * (1 + 1 / math.sqrt(2))) < 1e-12)
    check("helstrom povm completeness",
          all(abs(e0[i][j] + e1[i][j] - (1 if i == j else 0)) < 1e-12
              for i in range(2) for j in range(2)))

    check("binary entropy", abs(q.binary_entropy(0.5) - 1.0) < 1e-12)
    check("fannes bound monotone",
          q.fannes_bound(0.2, 4) <= q.fannes_bound(0.4, 4))
    check("winter bound value", abs(q.winter_resource_bound(1.0, 3.0) - 5.0) < 1e-12)
    check("amplification", abs(q.copies_amplification(0.3, 20) -
                               (1 - math.exp(-20 * 0.09 / 2))) < 1e-12)
    check("binding ceiling", abs(q.binding_fidelity_bound(0.6) - 0.8) < 1e-12)

    lo, hi, _ = q.coherence_bracket(PLUS)
    check("coherence of plus", abs(lo - 1.0) < 1e-10 and abs(hi - 1.0) < 1e-10)

    lo, hi, _ = q.separability_bracket(BELL, 2, 2)
    check("bell entanglement bracket", lo <= 1.0 <= hi and hi - lo <= 0.05)

    dmin = q.pairwise_min_distance([ZERO], [ONE], 2, 1)
    check("pairwise distance", abs(dmin - 1.0) < 1e-12)

    success, achieved, ceiling = q.commitment_attack_demo(0.5, 2)
    check("attack below ceiling", success <= ceiling + 1e-6)
    check("attack achieved", abs(success - achieved) < 1e-6)

    demo = q.locked_demo(1)
    check("locked demo keyed distillation", demo["with_key_max_deficit"] <= 1e-9)
    check("locked demo nokey cap",
          demo["nokey_best_fidelity"] <= demo["nokey_bound"] + 1e-9)

    print(f"{len(FAILURES)} failures")
    return 1 if FAILURES else 0


if __name__ == "__main__":
    sys.exit(main())
