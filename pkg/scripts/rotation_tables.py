#!/usr/bin/env python3
"""Print the micro-rotation parameter tables for the four DCT angles.

Reproduces the shipped decomposition tables at eps 1e-3 and 1e-4, then
shows the five-step composite rotation matrix for pi/16 next to the
ideal one, and how many steps each tolerance costs down to 1e-7.
"""

import math

from cordic_dct.planner import decompose, generate_table, table_to_csv
from cordic_dct.rotator import ideal_rotation_matrix, plan_matrix

ANGLES = {
    "pi/4": math.pi / 4,
    "3pi/8": 3 * math.pi / 8,
    "pi/16": math.pi / 16,
    "3pi/16": 3 * math.pi / 16,
}


def main():
    rows = generate_table(ANGLES.values(), [1e-3, 1e-4])
    print(table_to_csv(rows))

    plan = decompose(math.pi / 16, 1e-4)
    m = plan_matrix(plan)
    ideal = ideal_rotation_matrix(math.pi / 16)
    print("pi/16 composite (unscaled):")
    print(f"  [[{m.a:.15f}, {m.b:.15f}],")
    print(f"   [{m.c:.15f}, {m.d:.15f}]]")
    print(f"gain-compensated diagonal: {plan.gain * m.a:.15f}"
          f"  (ideal cos = {ideal.a:.15f})")
    print()

    print("steps per tolerance:")
    for exponent in range(3, 8):
        eps = 10.0 ** -exponent
        counts = {name: len(decompose(theta, eps).steps) for name, theta in ANGLES.items()}
        total = sum(counts.values())
        print(f"  eps=1e-{exponent}: {counts}  (total rotator steps {total})")


if __name__ == "__main__":
    main()
