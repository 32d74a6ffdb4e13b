"""
Interval maps that walk the trees
=================================

The three invertible maps R, S, T enumerate the permuted trees one
vertex per step; their two-to-one folded versions G, F, D shift the
codings.  Conjugacies tie the two families together, and under the
binary digits of ? the maps S and T act as the +1 odometer.
"""

from sternbrocot import (
    INF,
    ONE,
    ExtRat,
    TreeSpec,
    apply,
    binary_digits,
    conjugacy_residual,
    inverse_branches,
    level,
    odometer_value,
    orbit,
)

# Iterating R from 1/0 lists every nonnegative rational exactly once:
# positions (2^(k-1), 2^k] of the orbit are level k of the permuted
# Stern-Brocot tree.
seq = orbit("R", INF, 17)
print("orbit of R from 1/0:", " ".join(str(x) for x in seq))
for k in (3, 4):
    lo, hi = (1 << (k - 1)) + 1, (1 << k) + 1
    row = list(level(TreeSpec("sb", permuted=True), k))
    print(f"  positions {lo}..{hi - 1} == permuted level {k}:",
          seq[lo:hi] == row)

# T does the same for the dyadic tree: the van der Corput order.
print("\norbit of T from 1:", " ".join(str(x) for x in orbit("T", ONE, 8)))

# Each folded map is two-to-one; the branches are the tree children.
x = ExtRat(2, 5)
b0, b1 = inverse_branches("F", x)
print(f"\nF-preimages of {x}: {b0} and {b1}; both map back:",
      apply("F", b0) == x and apply("F", b1) == x)

# The four conjugacies hold exactly (residual 0 in rational arithmetic).
print("conjugacy residuals at 7/12:",
      [str(conjugacy_residual(p, ExtRat(7, 12))) for p in ("R-S", "S-T", "G-F", "F-D")])

# Reading the first m binary digits of ?(x) as an integer, T adds one
# (mod 2^m): the maps are odometers in disguise.
x = ExtRat(3, 7)
m = 6
before = odometer_value(x, m)
after = odometer_value(apply("T", x), m)
print(f"\nodometer under T: {before} -> {after} (mod {1 << m})")
print("digits before:", binary_digits(x, m), "after:", binary_digits(apply("T", x), m))
