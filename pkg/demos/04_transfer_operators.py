"""
Transfer operators and the two Markov chains
============================================

Apply the transfer operators of the folded maps in closed rational
form, exhibit their fixed densities, and iterate the two chain
operators: the uniform chain contracts toward the constant 1/2, the
index-weighted chain keeps its harmonic functions flat.
"""

from fractions import Fraction

from sternbrocot import (
    ONE,
    ExtRat,
    h1,
    harmonic_series_partial,
    lewis_zagier_residual,
    markov_apply,
    markov_power,
    rho,
    transfer_apply,
    transition_probs,
)

# The transfer operator of the Farey-type fold fixes the density
# 1/(y(1-y)) exactly, and the three-term functional equation at q=1 is
# solved by 1/y.
dens = lambda y: 1 / (y * (1 - y))
u = Fraction(3, 8)
print("farey transfer fixes 1/(y(1-y)):", transfer_apply("farey", 1, dens, u) == dens(u))
print("three-term residual of 1/y at q=1:", lewis_zagier_residual(lambda y: 1 / y, 1, Fraction(5, 7)))

# One step of either chain moves x to its two tree children.  The
# uniform chain flips a fair coin; the other weighs the children by
# denominator and numerator.
x = ExtRat(2, 5)
print(f"\ntransitions from {x}: MC0 {transition_probs('MC0', x)}, MC1 {transition_probs('MC1', x)}")

# rho - 1/2 is an eigenfunction of the uniform chain with eigenvalue
# 1/2, so n steps contract it by 2^-n exactly.
g = lambda y: rho(y).as_fraction() - Fraction(1, 2)
x = ExtRat(3, 5)
for n in (1, 4, 8):
    got = markov_power("MC0", g, x, n)
    print(f"MC0^{n} (rho - 1/2) at {x}: {got} == (rho(x)-1/2)/2^{n}:",
          got == g(x) / (1 << n))

# The weighted chain preserves harmonic functions on the nose: the
# endpoint indicator h1 and the constant 1 propagate unchanged.
print("\nMC1 keeps h1 flat:", markov_apply("MC1", h1, x) == h1(x))
print("MC1 keeps 1 flat: ", markov_apply("MC1", lambda y: 1, x) == 1)

# Summing the chain's one-sided branch weights gives an exact series:
# partial sums and tails add to one for the constant function.
for kind in ("MC0", "MC1"):
    partial, tail = harmonic_series_partial(kind, lambda y: 1, ONE, 6)
    print(f"{kind} series for h=1: partial {partial} + tail {tail} = {partial + tail}")
