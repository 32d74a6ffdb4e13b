"""
Command-line tour
=================

Every library capability is also reachable from the ``sternbrocot``
command (or ``python -m sternbrocot``).  This script shells out to the
CLI the way a user would and shows the raw CSV it prints.
"""

import subprocess
import sys

CMD = [sys.executable, "-m", "sternbrocot"]


def show(*args):
    print("$ sternbrocot", " ".join(args))
    out = subprocess.run(CMD + list(args), capture_output=True, text=True)
    sys.stdout.write(out.stdout)
    if out.returncode:
        sys.stdout.write(out.stderr)
        print(f"(exit {out.returncode})")
    print()


# One tree level per row: level, position, numerator, denominator.
show("tree", "--kind", "farey", "--depth", "3")

# Iterate a map; here R enumerates the rationals from 1/0.
show("enumerate", "--map", "R", "--start", "1/0", "--count", "9")

# Exact ? values, inverses, and continued-fraction enclosures.
show("qmark", "2/5")
show("qmark", "--inverse", "3/2^3")
show("qmark", "--enclosure", "[0;2,1,1]")

# Fourier coefficients of the limit distribution, two estimators.
show("fourier", "--n-max", "3", "--method", "both", "--depth", "10", "--iters", "1024")

# Random walks with a seed; the interval adds hitting-time columns.
show("simulate", "--chain", "mc0", "--walks", "5", "--horizon", "8", "--seed", "7")

# The invariant suite; --suite narrows to one module or check.
show("verify", "--suite", "core")
