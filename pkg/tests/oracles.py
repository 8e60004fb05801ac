"""Independent reference computations used to cross-check the library.

Nothing here shares code with epsalg's linear algebra or form machinery.
"""

from itertools import permutations

import sympy


def cyc_to_sympy(c):
    """Exact sympy value of a CycNum via zeta_N = exp(2 pi i / N)."""
    N = c.field.N
    z = {1: sympy.Integer(1), 2: sympy.Integer(-1), 4: sympy.I}.get(N, sympy.exp(2 * sympy.pi * sympy.I / N))
    return sympy.expand(sum(sympy.Rational(int(q.numerator), int(q.denominator)) * z ** j
                            for j, q in enumerate(c.coeffs)))


def numerically_zero(expr, digits=60) -> bool:
    return abs(complex(sympy.N(expr, digits))) < 1e-40


def sympy_rank(rows, ncols):
    """Rank of sparse rows {col: CycNum} with sympy's exact Matrix.rank."""
    if not rows:
        return 0
    M = sympy.zeros(len(rows), ncols)
    for r, row in enumerate(rows):
        for c, v in row.items():
            M[r, c] = cyc_to_sympy(v)
    return M.rank(simplify=True)


def brute_nullspace_dim(rows, ncols):
    """Dimension of the kernel by sympy's nullspace."""
    if not rows:
        return ncols
    M = sympy.zeros(len(rows), ncols)
    for r, row in enumerate(rows):
        for c, v in row.items():
            M[r, c] = cyc_to_sympy(v)
    return len(M.nullspace(simplify=True))


def wedge_by_permutations(omega, eta, args):
    """(omega ^ eta)(X_1..X_{p+q}) as a sum over all (p+q)! permutations divided by p! q!.

    ``args`` are member indices.  Each term carries 1/S(perm), where S is the factor a
    totally eps-antisymmetric form picks up under perm; S is built from the adjacent
    swaps of a bubble sort.  The f_1 factor moves the degree of eta past omega's slots.
    """
    from math import factorial

    B = omega.basis
    A = B.algebra
    fld = A.field
    G = A.group
    p, q = omega.n, eta.n
    total: dict = {}
    for perm in permutations(range(p + q)):
        # sign from sorting perm back to the identity by adjacent swaps
        cur = list(perm)
        sign = fld.one
        changed = True
        while changed:
            changed = False
            for t in range(len(cur) - 1):
                if cur[t] > cur[t + 1]:
                    a, b = args[cur[t]], args[cur[t + 1]]
                    # undoing Omega(..a,b..) = -eps(a,b) Omega(..b,a..)
                    sign = sign * (-A.eps(B.deg[b], B.deg[a]))
                    cur[t], cur[t + 1] = cur[t + 1], cur[t]
                    changed = True
        xs = [args[t] for t in perm]
        left = omega(*xs[:p])
        right = eta(*xs[p:])
        # eps(|eta|, sum |X| of omega's slots)
        dl = G.zero()
        for a in xs[:p]:
            dl = G.add(dl, B.deg[a])
        f = A.eps(eta.k, dl)
        prod = A.mul(left, right)
        for k, c in prod.items():
            total[k] = total.get(k, fld.zero) + sign * f * c
    scale = fld.rational(1) * fld.rational(factorial(p) * factorial(q)).inverse()
    return {k: v * scale for k, v in total.items() if v}
