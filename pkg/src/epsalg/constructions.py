"""Builders for the standard eps-graded algebras: graded matrix algebras with
elementary or fine gradings, Clifford and Grassmann algebras."""

from __future__ import annotations

from itertools import combinations

from .algebra import EpsAlgebra
from .groups import (CommFactor, FactorSet, FinAbGroup, eps_from_sigma, natural_z, natural_z2,
                     sign_factor, trivial_factor)
from .scalars import field

GRASSMANN_MAX = 6

# Pauli factor set on Z2 x Z2; pairs not listed are fixed by tau_a^2 = 1 and e_0 = 1
PAULI_SIGMA = {
    ((1, 0), (0, 1)): "i",
    ((0, 1), (1, 0)): "-i",
    ((1, 0), (1, 1)): "-i",
    ((1, 1), (1, 0)): "i",
    ((0, 1), (1, 1)): "i",
    ((1, 1), (0, 1)): "-i",
}

# explicit matrices, for documentation and cross-checks only
PAULI_MATRICES = {
    "1": [[1, 0], [0, 1]],
    "tau1": [[0, 1], [1, 0]],
    "tau2": [[0, "-i"], ["i", 0]],
    "tau3": [[1, 0], [0, -1]],
}


def elementary_matrix(D: int, phi, eps: CommFactor, label: str = "") -> EpsAlgebra:
    """D x D matrices with |E_ij| = phi(i) - phi(j); E_ij E_kl = delta_jk E_il.

    Basis index of E_ij (0-based i, j) is i*D + j.
    """
    G = eps.group
    phi = [G.reduce(p) for p in phi]
    if len(phi) != D:
        raise ValueError(f"phi must have {D} entries")
    fld = eps.field
    degrees = [G.sub(phi[i], phi[j]) for i in range(D) for j in range(D)]
    cons = []
    for i in range(D):
        for j in range(D):
            for l in range(D):
                cons.append((i * D + j, j * D + l, i * D + l, fld.one))
    unit = {i * D + i: fld.one for i in range(D)}
    inv = None
    if eps.hermitean:
        inv = [{j * D + i: fld.one} for i in range(D) for j in range(D)]
    names = [f"E{i+1}{j+1}" if D < 10 else f"E{i+1}_{j+1}" for i in range(D) for j in range(D)]
    A = EpsAlgebra(eps, degrees, cons, unit, inv, label=label or f"M_{D}{phi}", names=names)
    A.phi = phi
    A.D = D
    return A


def tr_eps_elementary(A: EpsAlgebra) -> dict:
    """tr_eps(a) = sum_i eps(phi(i),phi(i)) a_ii, as a covector."""
    D, phi = A.D, A.phi
    return {i * D + i: A.eps(phi[i], phi[i]) for i in range(D)}


def supermatrix(m: int, n: int, N: int = 4) -> EpsAlgebra:
    """M(m,n): Z2-graded by phi = (0^m, 1^n) with eps = (-1)^(ij)."""
    eps = natural_z2(N)
    return elementary_matrix(m + n, [(0,)] * m + [(1,)] * n, eps, label=f"M({m},{n})")


def plain_matrix(D: int, N: int = 4) -> EpsAlgebra:
    """M_D with the trivial grading."""
    eps = trivial_factor(FinAbGroup(()), N)
    return elementary_matrix(D, [()] * D, eps, label=f"M_{D}")


COLOR_BLOCKS = [(0, 0), (1, 0), (0, 1), (1, 1)]


def color_factor(variant: str, N: int = 4) -> CommFactor:
    G = FinAbGroup([2, 2])
    if variant == "color":
        return sign_factor(G, [[0, 1], [1, 0]], N)
    if variant == "super":
        return sign_factor(G, [[1, 0], [0, 1]], N)
    raise ValueError(f"unknown variant {variant!r}; use 'color' or 'super'")


def color_matrix(m: int, n: int, r: int, s: int, variant: str = "color", N: int = 4) -> EpsAlgebra:
    """M(m,n,r,s) graded by Z2 x Z2, blocks of degrees (0,0),(1,0),(0,1),(1,1)."""
    if m + n + r + s < 1:
        raise ValueError("need at least one row")
    eps = color_factor(variant, N)
    phi = []
    for size, deg in zip((m, n, r, s), COLOR_BLOCKS):
        phi += [deg] * size
    return elementary_matrix(len(phi), phi, eps, label=f"M({m},{n},{r},{s})[{variant}]")


def fine_crossed(group: FinAbGroup, sigma: FactorSet, eps: CommFactor | None = None,
                 order=None, names=None, involution: bool = False, label: str = "") -> EpsAlgebra:
    """Crossed product K x_sigma G: basis e_a, e_a e_b = sigma(a,b) e_{a+b}.

    ``eps`` defaults to eps_sigma.  With ``involution`` the antilinear map
    e_a -> conj(sigma(a,-a))^{-1}... is not general; only e_a* = e_{-a} is offered,
    and validation rejects it when it is not an involution.
    """
    if eps is None:
        eps = eps_from_sigma(sigma)
    if eps.group != group:
        raise ValueError("factor and factor set live on different groups")
    fld = sigma.field
    order = [group.reduce(a) for a in (order or group.elements())]
    pos = {a: t for t, a in enumerate(order)}
    cons = []
    for a in order:
        for b in order:
            cons.append((pos[a], pos[b], pos[group.add(a, b)], sigma(a, b)))
    z = group.zero()
    unit = {pos[z]: sigma(z, z).inverse()}
    inv = None
    if involution:
        inv = [{pos[group.neg(a)]: fld.one} for a in order]
    names = names or ["e" + "".join(map(str, a)) for a in order]
    A = EpsAlgebra(eps, order, cons, unit, inv, label=label or f"crossed({group})", names=names)
    A.sigma = sigma
    A.order = order
    return A


def clifford_sigma(n: int, N: int = 4) -> FactorSet:
    G = FinAbGroup([2] * n)
    fld = field(N)
    table = {}
    for a in G.elements():
        for b in G.elements():
            e = sum(a[p] * b[q] for p in range(n) for q in range(p + 1, n))
            table[(a, b)] = fld.rational((-1) ** e)
    return FactorSet(G, table, fld)


def clifford(n: int, eps: CommFactor | None = None, N: int = 4) -> EpsAlgebra:
    """Crossed product of (Z2)^n with sigma(i,j) = (-1)^(sum_{p<q} i_p j_q)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    sigma = clifford_sigma(n, N)
    return fine_crossed(sigma.group, sigma, eps, label=f"Cl({n})")


def pauli_sigma(N: int = 4) -> FactorSet:
    G = FinAbGroup([2, 2])
    fld = field(N)
    table = {(a, b): fld.one for a in G.elements() for b in G.elements()}
    for k, v in PAULI_SIGMA.items():
        table[k] = fld.coerce(v)
    return FactorSet(G, table, fld)


def pauli(variant: str = "super", N: int = 4) -> EpsAlgebra:
    """M_2 finely graded by Z2 x Z2 with basis 1, tau1, tau2, tau3.

    variant 'color' uses eps_sigma = (-1)^(j1k2+j2k1); 'super' uses (-1)^(j1k1+j2k2).
    """
    sigma = pauli_sigma(N)
    eps = color_factor(variant, N)
    A = fine_crossed(sigma.group, sigma, eps, order=[(0, 0), (1, 0), (0, 1), (1, 1)],
                     names=["1", "tau1", "tau2", "tau3"], involution=True,
                     label=f"Pauli[{variant}]")
    return A


def grassmann(q: int, grading: str = "Z", N: int = 4) -> EpsAlgebra:
    """Exterior algebra on theta_1..theta_q, each of degree 1 with eps = (-1)^(pq).

    ``grading`` is 'Z' (default) or 'Z2'.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if q > GRASSMANN_MAX:
        raise ValueError(f"q={q} exceeds the bound {GRASSMANN_MAX}")
    eps = natural_z(N) if grading == "Z" else natural_z2(N)
    fld = eps.field
    subsets = [S for k in range(q + 1) for S in combinations(range(q), k)]
    pos = {S: t for t, S in enumerate(subsets)}
    cons = []
    for S in subsets:
        for T in subsets:
            if set(S) & set(T):
                continue
            seq = list(S) + list(T)
            inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
            cons.append((pos[S], pos[T], pos[tuple(sorted(seq))], fld.rational((-1) ** inversions)))
    degrees = [(len(S),) for S in subsets]
    names = ["1" if not S else "".join(f"t{a+1}" for a in S) for S in subsets]
    A = EpsAlgebra(eps, degrees, cons, {0: fld.one}, label=f"Lambda({q})", names=names)
    A.subsets = subsets
    A.q = q
    return A


def grassmann_generator(A: EpsAlgebra, a: int) -> dict:
    """Sparse vector of theta_{a+1}."""
    return {A.subsets.index((a,)): A.field.one}


BUILDERS = ("elementary", "crossed", "clifford", "grassmann", "supermatrix", "color", "pauli", "matrix")


def build_from_spec(spec: str, N: int = 4) -> EpsAlgebra:
    """Build from a short spec such as 'supermatrix:2,1', 'color:1,1,1,1:super',
    'pauli:super', 'clifford:2', 'grassmann:2', 'matrix:2'."""
    parts = spec.split(":")
    name = parts[0].strip().lower()
    args = parts[1] if len(parts) > 1 else ""
    extra = parts[2] if len(parts) > 2 else None
    if name == "pauli":
        return pauli(args or "super", N=N)
    nums = [int(x) for x in args.split(",") if x.strip()] if args else []
    if name == "supermatrix":
        return supermatrix(*nums, N=N)
    if name == "color":
        return color_matrix(*nums, variant=extra or "color", N=N)
    if name == "clifford":
        return clifford(*nums, N=N)
    if name == "grassmann":
        return grassmann(*nums, grading=extra or "Z", N=N)
    if name in ("matrix", "m"):
        return plain_matrix(*nums, N=N)
    raise ValueError(f"unknown algebra builder {name!r}")


def sl_eps_basis(A: EpsAlgebra) -> list:
    """Basis of the eps-traceless matrices: E_ij (i != j) and
    H_i = E_ii - s_i s_{i+1} E_{i+1,i+1} with s_i = eps(phi(i), phi(i))."""
    D, phi = A.D, A.phi
    fld = A.field
    out = []
    for i in range(D):
        for j in range(D):
            if i != j:
                out.append({i * D + j: fld.one})
    for i in range(D - 1):
        s = A.eps(phi[i], phi[i]) * A.eps(phi[i + 1], phi[i + 1])
        out.append({i * D + i: fld.one, (i + 1) * D + i + 1: -s})
    return out


# --- fine gradings ------------------------------------------------------------

def fine_derivation_coords(A: EpsAlgebra, X) -> dict:
    """x_alpha with X(e_alpha) = sigma(|X|, alpha) x_alpha e_{alpha+|X|}."""
    G = A.group
    d = X.degree
    pos = {a: t for t, a in enumerate(A.order)}
    out = {}
    for a in A.order:
        img = X(A.basis_vec(pos[a]))
        tgt = pos[G.add(a, d)]
        if any(k != tgt for k in img):
            raise ValueError("derivation does not shift the fine grading")
        c = img.get(tgt)
        out[a] = c * A.sigma(d, a).inverse() if c else A.field.zero
    return out


def fine_derivation_relation(A: EpsAlgebra, X) -> bool:
    """x_{a+b} = x_a + (eps eps_sigma^{-1})(|X|, a) x_b for all a, b in the support."""
    from .groups import eps_from_sigma
    G = A.group
    es = eps_from_sigma(A.sigma)
    d = X.degree
    x = fine_derivation_coords(A, X)
    for a in A.order:
        f = A.eps(d, a) * es(d, a).inverse()
        for b in A.order:
            if x[G.add(a, b)] != x[a] + f * x[b]:
                return False
    return True
