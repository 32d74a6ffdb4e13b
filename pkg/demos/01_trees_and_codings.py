"""
Mediant trees and their binary codings
======================================

Walk the first levels of the Stern-Brocot, Farey and dyadic trees,
convert vertices to {L,R} words and 2x2 integer matrices, and check
the mediant rule and the hyperbinary counting sequence by hand.
"""

from sternbrocot import (
    ExtRat,
    TreeSpec,
    hyperbinary,
    level,
    matrix_from_word,
    mediant,
    parents,
    rat_from_word,
    word_from_rat,
)

# Level k of each tree holds 2^(k-1) vertices; the root is level 1.
# The permuted variant reverses the left-to-right order bit by bit.
for kind in ("sb", "farey", "dyadic"):
    for permuted in (False, True):
        spec = TreeSpec(kind, permuted=permuted)
        tag = kind + ("^" if permuted else " ")
        for k in range(1, 5):
            row = " ".join(str(x) for x in level(spec, k))
            print(f"{tag} level {k}: {row}")
    print()

# Every positive rational is the mediant of its two tree parents.
x = ExtRat(3, 5)
a, b = parents(x)
print(f"parents of {x}: {a} and {b}; mediant gives {mediant(a, b)}")

# The path from the root is an {L,R} word; the word maps to a product
# of the two elementary matrices, whose columns are the parents.
w = word_from_rat(x)
print(f"word of {x}: {w}, matrix {matrix_from_word(w)}, back to {rat_from_word(w)}")

# Stern's diatomic sequence b(n) counts hyperbinary representations of
# n (binary with digits 0, 1, 2).  Consecutive quotients b(n)/b(n+1)
# enumerate the positive rationals: the Calkin-Wilf order, which is the
# permuted Stern-Brocot tree read row by row.
row = [str(x) for x in level(TreeSpec("sb", permuted=True), 4)]
quotients = [f"{hyperbinary(n)}/{hyperbinary(n + 1)}" for n in range(7, 15)]
print("\npermuted row 4:  ", " ".join(row))
print("b(n)/b(n+1) n=7..14:", " ".join(quotients))
