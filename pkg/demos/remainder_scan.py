#!/usr/bin/env python3
# Exact mass accounting for the smoothed hypotenuse sequence.
#
# Builds a_T(n) over growing balls, checks sum a_T(n) = chi to the last
# digit, decomposes |A_q| = beta(q) chi + r(q) at small good moduli, and
# watches the aggregate remainder ratio fall as the ball grows.

from fractions import Fraction

from triplesieve import (
    Form,
    a_q,
    build_sequence,
    distribution_probe,
    good_moduli,
    modular_generators,
)


def main() -> None:
    gens = modular_generators()

    seq = build_sequence(gens, 24.0, 24.0, Form.Z)
    print(f"ball X = Y = 24: {seq.pair_count} (row, omega) pairs, "
          f"{len(seq.ns)} distinct hypotenuse values")
    print(f"total mass == chi: {seq.total_mass() == seq.chi}  (chi = {seq.chi})")
    print()

    print("q    beta(q)*chi (approx)   r(q)/chi")
    for q in good_moduli(Form.Z, 14):
        mass, main, r = a_q(seq, q)
        rel = float(r / seq.chi) if seq.chi else 0.0
        print(f"{q:<4} {float(main):>12.3f}        {rel:+.3e}")
    print()

    print("remainder ratio sum_(q < N^0.15) |r(q)| / chi as the ball grows:")
    for size in (16, 24, 32):
        s = build_sequence(gens, float(size), float(size), Form.Z)
        total, chi, ratio = distribution_probe(s, 0.15)
        print(f"  X = Y = {size:<3}  ratio = {float(ratio):.3e}")


if __name__ == "__main__":
    main()
