"""Derivation-based differential calculus on an eps-graded algebra.

Forms are stored on canonical index tuples over a chosen basis of
eps-derivations (a :class:`DerBasis`): non-decreasing tuples of member
indices, with a repeat allowed only at members of degree d with
eps(d,d) = -1.  Any other argument order is reduced to the canonical one by
adjacent swaps, each contributing -eps(|X_i|,|X_{i+1}|).

Elements of the Z-span of the members ("Z-derivations") are lists of
``(member index, z)`` with z a homogeneous central vector, meaning
sum z.X_c with (z.X)(a) = z.(X(a)).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from . import linalg
from .scalars import CycNum
from .algebra import (Derivation, EpsAlgebra, HomMap, center, decompose_in_span,
                      derivation_space_all, vadd, vaxpy, vscale)


class DerBasisError(ValueError):
    """Members are not free over the center, or their brackets leave the span."""


class DerBasis:
    """Homogeneous eps-derivations X_0..X_{r-1}, free over Z_eps(A) and closed under the bracket."""

    def __init__(self, algebra: EpsAlgebra, members, check: bool = True):
        self.algebra = A = algebra
        self.members: list[Derivation] = []
        for X in members:
            if not isinstance(X, Derivation):
                raise TypeError("members must be Derivation instances")
            if check and not X.leibniz_check():
                raise DerBasisError("a member fails the eps-Leibniz rule")
            self.members.append(X)
        self.r = len(self.members)
        self.deg = [X.degree for X in self.members]
        self.cols = [X.cols for X in self.members]
        self.center = center(A)
        self._zprod = self._z_products()
        if check:
            self._check_free()
        self.brackets = self._bracket_constants()
        self._sq = [A.eps(d, d) for d in self.deg]
        self._rmul_cache: dict = {}
        self._tdeg: dict = {}

    # --- module structure -------------------------------------------------
    def _z_products(self):
        """All z_b.X_c as (c, z_b, flattened map)."""
        out = []
        for c, X in enumerate(self.members):
            for z in self.center:
                out.append((c, z, X.left_mul(z).flat()))
        return out

    def _check_free(self):
        rows = [fl for _, _, fl in self._zprod]
        if any(not fl for fl in rows) or linalg.rank(rows, self.algebra.field) < len(rows):
            raise DerBasisError("members are not free over the eps-center")

    def express(self, X: Derivation):
        """Write X as sum z.X_c; returns a Z-derivation list or raises."""
        target = X.flat()
        vecs = [fl for _, _, fl in self._zprod]
        sol = decompose_in_span(vecs, target, self.algebra.field) if vecs else ({} if not target else None)
        if sol is None:
            raise DerBasisError("derivation is not in the Z-span of the members")
        A = self.algebra
        acc: dict = {}
        for t, coef in sol.items():
            c, z, _ = self._zprod[t]
            acc[c] = vadd(acc.get(c, {}), vscale(coef, z))
        out = []
        for c in sorted(acc):
            for d, zh in sorted(A.homogeneous_parts(acc[c]).items()):
                out.append((c, zh))
        return out

    def _bracket_constants(self):
        out = {}
        for a in range(self.r):
            for b in range(self.r):
                br = self.members[a].bracket(self.members[b])
                out[(a, b)] = self.express(br)
        return out

    def zder_degree(self, zd):
        A = self.algebra
        degs = {A.group.add(A.deg_of(z), self.deg[c]) for c, z in zd}
        if len(degs) > 1:
            raise ValueError("Z-derivation is not homogeneous")
        return degs.pop() if degs else None

    def zder_bracket(self, x, y):
        """[X,Y]_eps for Z-derivations given as member indices or lists."""
        X = self.as_derivation(x)
        Y = self.as_derivation(y)
        return self.express(X.bracket(Y))

    def as_derivation(self, x) -> Derivation:
        A = self.algebra
        if isinstance(x, int):
            return self.members[x]
        parts = []
        for c, z in x:
            parts.extend(self.members[c].left_mul(z).parts.values())
        if not parts:
            return Derivation(A, [HomMap(A, A.group.zero(), [{} for _ in range(A.dim)])])
        return Derivation(A, parts)

    def as_zder(self, x):
        if isinstance(x, int):
            return [(x, dict(self.algebra.unit))]
        return list(x)

    def apply_member(self, c: int, v: dict) -> dict:
        out: dict = {}
        cols = self.cols[c]
        for j, a in v.items():
            vaxpy(out, a, cols[j])
        return out

    # --- tuples ----------------------------------------------------------
    def canon(self, idx):
        """(canonical tuple, sign) or (None, 0) when the evaluation vanishes."""
        A = self.algebra
        idx = list(idx)
        sign = A.field.one
        n = len(idx)
        for s in range(n):
            for t in range(s + 1, n):
                if idx[s] > idx[t]:
                    sign = -sign * A.eps(self.deg[idx[s]], self.deg[idx[t]])
                elif idx[s] == idx[t] and self._sq[idx[s]].is_one():
                    return None, 0
        return tuple(sorted(idx)), sign

    def is_canonical(self, T) -> bool:
        for a, b in zip(T, T[1:]):
            if a > b or (a == b and self._sq[a].is_one()):
                return False
        return True

    def canonical_tuples(self, n: int) -> list:
        return _canonical_tuples(n, tuple(s.is_one() for s in self._sq))

    def tuple_degree(self, T):
        key = tuple(sorted(T))
        d = self._tdeg.get(key)
        if d is None:
            G = self.algebra.group
            d = G.zero()
            for t in key:
                d = G.add(d, self.deg[t])
            self._tdeg[key] = d
        return d

    def value_degree(self, k, T):
        return self.algebra.group.add(k, self.tuple_degree(T))

    def form_degrees(self, n: int) -> list:
        """Gamma-degrees k with Omega^{n,k} nonzero."""
        A = self.algebra
        G = A.group
        ks = set()
        for T in self.canonical_tuples(n):
            td = self.tuple_degree(T)
            for s in A.support():
                ks.add(G.sub(s, td))
        return sorted(ks)

    def form_space_dim(self, n: int, k) -> int:
        A = self.algebra
        return sum(len(A.basis_of_degree(self.value_degree(k, T))) for T in self.canonical_tuples(n))

    def right_mul_cols(self, z: dict) -> list:
        key = tuple(sorted((k, v.coeffs) for k, v in z.items()))
        out = self._rmul_cache.get(key)
        if out is None:
            A = self.algebra
            out = [A.mul(A.basis_vec(j), z) for j in range(A.dim)]
            self._rmul_cache[key] = out
        return out


@lru_cache(maxsize=None)
def _canonical_tuples(n: int, strict: tuple) -> list:
    r = len(strict)
    out = []

    def rec(prefix, start):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for c in range(start, r):
            rec(prefix + [c], c + 1 if strict[c] else c)

    rec([], 0)
    return out


def der_basis_make(A: EpsAlgebra, members=None) -> DerBasis:
    """Validate members, or pick a free Z-basis of Der greedily when none are given."""
    if members is not None:
        return DerBasis(A, members)
    Z = center(A)
    chosen: list = []
    rows: list = []
    all_der = derivation_space_all(A)
    for d in sorted(all_der):
        for X in all_der[d]:
            new = [X.left_mul(z).flat() for z in Z]
            if linalg.rank(rows + new, A.field) == len(rows) + len(new):
                rows += new
                chosen.append(X)
    B = DerBasis(A, chosen)
    for d, ders in all_der.items():
        for X in ders:
            B.express(X)
    return B


def inner_der_basis(A: EpsAlgebra, elements) -> DerBasis:
    """DerBasis made of ad_u for the given sparse vectors u."""
    return DerBasis(A, [Derivation.ad(A, u) for u in elements])


class EpsForm:
    """Element of Omega^{n,k}: components on canonical tuples, values in A."""

    __slots__ = ("basis", "n", "k", "comps")

    def __init__(self, basis: DerBasis, n: int, k, comps=None, check: bool = True):
        self.basis = basis
        self.n = n
        self.k = basis.algebra.group.reduce(k)
        self.comps = {}
        for T, v in (comps or {}).items():
            T = tuple(T)
            v = {j: c for j, c in v.items() if c}
            if not v:
                continue
            if check:
                if len(T) != n or not basis.is_canonical(T):
                    raise ValueError(f"{T} is not a canonical {n}-tuple")
                want = basis.value_degree(self.k, T)
                A = basis.algebra
                if any(A.degrees[j] != want for j in v):
                    raise ValueError(f"component at {T} is not of degree {want}")
            self.comps[T] = v

    @classmethod
    def zero(cls, basis, n, k):
        return cls(basis, n, k, {}, check=False)

    @classmethod
    def scalar(cls, basis, v: dict):
        """0-form from a homogeneous algebra element."""
        A = basis.algebra
        k = A.deg_of(v)
        return cls(basis, 0, k if k is not None else A.group.zero(), {(): v})

    def __call__(self, *idx) -> dict:
        T, sign = self.basis.canon(idx)
        if T is None:
            return {}
        return vscale(sign, self.comps.get(T, {}))

    def _same(self, other):
        if other.basis is not self.basis or other.n != self.n:
            raise ValueError("forms live in different spaces")
        if other.k != self.k and other.comps and self.comps:
            raise ValueError("forms have different Gamma-degrees")

    def __add__(self, other):
        self._same(other)
        k = self.k if self.comps or not other.comps else other.k
        out = dict(self.comps)
        for T, v in other.comps.items():
            w = vadd(out.get(T, {}), v)
            if w:
                out[T] = w
            else:
                out.pop(T, None)
        return EpsForm(self.basis, self.n, k, out, check=False)

    def __neg__(self):
        return EpsForm(self.basis, self.n, self.k,
                       {T: {j: -c for j, c in v.items()} for T, v in self.comps.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "EpsForm":
        return EpsForm(self.basis, self.n, self.k,
                       {T: vscale(c, v) for T, v in self.comps.items()}, check=False)

    def right_mul(self, a: dict) -> "EpsForm":
        """(omega a)(X..) = omega(X..) a for homogeneous a."""
        A = self.basis.algebra
        da = A.deg_of(a)
        k = A.group.add(self.k, da) if da is not None else self.k
        return EpsForm(self.basis, self.n, k,
                       {T: A.mul(v, a) for T, v in self.comps.items()}, check=False)

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, EpsForm):
            return NotImplemented
        if self.n != other.n:
            return False
        if not self.comps and not other.comps:
            return True
        return self.k == other.k and self.comps == other.comps

    def flat(self) -> dict:
        return {(T, j): c for T, v in self.comps.items() for j, c in v.items()}

    def __repr__(self):
        A = self.basis.algebra
        body = ", ".join(f"{T}: {A.fmt(v)}" for T, v in sorted(self.comps.items()))
        return f"EpsForm(n={self.n}, k={self.k}, {{{body}}})"

    def to_json(self):
        from .scalars import format_cyc
        return {"n": self.n, "k": list(self.k),
                "components": [[list(T), [[j, format_cyc(c)] for j, c in sorted(v.items())]]
                               for T, v in sorted(self.comps.items())]}


# --- evaluation on Z-derivations --------------------------------------------

def evaluate(omega: EpsForm, args) -> dict:
    """omega(Y_1..Y_n) for members (ints) or Z-derivations (lists of (c, z)).

    Uses omega(.., z.X_i, ..) = eps(|z|, |X_i| + |X_{i+1}| + ..) omega(.., X_i, ..) z
    applied from the last slot to the first.
    """
    B = omega.basis
    A = B.algebra
    G = A.group
    expansions = [[(a, None)] if isinstance(a, int) else list(a) for a in args]
    out: dict = {}
    for combo in itertools.product(*expansions):
        idx = [c for c, _ in combo]
        T, sign = B.canon(idx)
        if T is None:
            continue
        val = omega.comps.get(T)
        if not val:
            continue
        factor = sign
        tail = G.zero()
        tails = [None] * len(idx)
        for i in range(len(idx) - 1, -1, -1):
            tail = G.add(tail, B.deg[idx[i]])
            tails[i] = tail
        zs = []
        for i, (c, z) in enumerate(combo):
            if z is None:
                continue
            factor = factor * A.eps(A.deg_of(z), tails[i])
            zs.append(z)
        v = vscale(factor, val)
        for z in zs:
            v = A.mul(v, z)
        out = vadd(out, v)
    return out


# --- product ------------------------------------------------------------------

def _perm_sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def wedge(omega: EpsForm, eta: EpsForm) -> EpsForm:
    """Product of forms, summing over (p,q)-shuffles with the factor f_1."""
    B = omega.basis
    if eta.basis is not B:
        raise ValueError("forms use different derivation bases")
    A = B.algebra
    G = A.group
    p, q = omega.n, eta.n
    k = G.add(omega.k, eta.k)
    comps = {}
    for T in B.canonical_tuples(p + q):
        acc: dict = {}
        for P in itertools.combinations(range(p + q), p):
            Qs = [t for t in range(p + q) if t not in P]
            sigma = list(P) + Qs
            a = omega(*[T[t] for t in P])
            if not a:
                continue
            b = eta(*[T[t] for t in Qs])
            if not b:
                continue
            f = A.field.rational(_perm_sign(sigma))
            for m in range(p + q):
                for n_ in range(m + 1, p + q):
                    if sigma[m] > sigma[n_]:
                        f = f * A.eps(B.deg[T[sigma[n_]]], B.deg[T[sigma[m]]])
            for m in range(p):
                f = f * A.eps(eta.k, B.deg[T[sigma[m]]])
            vaxpy(acc, f, A.mul(a, b))
        if acc:
            comps[T] = acc
    return EpsForm(B, p + q, k, comps, check=False)


# --- differential -------------------------------------------------------------

def differential(omega: EpsForm) -> EpsForm:
    """d omega from the defining formula with factors f_2, f_3."""
    B = omega.basis
    A = B.algebra
    n, k = omega.n, omega.k
    comps = {}
    for T in B.canonical_tuples(n + 1):
        acc: dict = {}
        degs = [B.deg[t] for t in T]
        for m in range(n + 1):
            f = A.eps(k, degs[m])
            for a in range(m):
                f = f * A.eps(degs[a], degs[m])
            if m % 2:
                f = -f
            rest = T[:m] + T[m + 1:]
            val = omega(*rest)
            if val:
                vaxpy(acc, f, B.apply_member(T[m], val))
        for m in range(n + 1):
            for nn in range(m + 1, n + 1):
                f = A.eps(degs[nn], degs[m])
                for a in range(m):
                    f = f * A.eps(degs[a], degs[m])
                for a in range(nn):
                    f = f * A.eps(degs[a], degs[nn])
                if (m + nn) % 2:
                    f = -f
                br = B.brackets[(T[m], T[nn])]
                if not br:
                    continue
                rest = [T[j] for j in range(n + 1) if j != m and j != nn]
                val = evaluate(omega, [br] + rest)
                vaxpy(acc, f, val)
        if acc:
            comps[T] = acc
    return EpsForm(B, n + 1, k, comps, check=False)


def inner_product(x, omega: EpsForm) -> EpsForm:
    """i_X omega (X..) = eps(|X|,|omega|) omega(X, X..); zero on 0-forms."""
    B = omega.basis
    A = B.algebra
    dx = B.deg[x] if isinstance(x, int) else B.zder_degree(x)
    if dx is None:
        return EpsForm.zero(B, max(omega.n - 1, 0), omega.k)
    k = A.group.add(omega.k, dx)
    if omega.n == 0:
        return EpsForm.zero(B, 0, k)
    f = A.eps(dx, omega.k)
    comps = {}
    for T in B.canonical_tuples(omega.n - 1):
        v = evaluate(omega, [x] + list(T))
        if v:
            comps[T] = vscale(f, v)
    return EpsForm(B, omega.n - 1, k, comps, check=False)


def lie_derivative(x, omega: EpsForm, d=differential) -> EpsForm:
    """L_X = i_X d + d i_X."""
    a = inner_product(x, d(omega))
    if omega.n == 0:
        return a
    return a + d(inner_product(x, omega))


def cartan_identities(basis: DerBasis, x: int, y: int, omega: EpsForm, d=None) -> dict:
    """The four graded commutator identities of i, L and d on one sample."""
    A = basis.algebra
    if d is None:
        cache: dict = {}
        d = lambda w: apply_d_fast(w, cache)
    e = A.eps(basis.deg[x], basis.deg[y])
    xy = basis.brackets[(x, y)]
    iX = lambda w: inner_product(x, w)
    iY = lambda w: inner_product(y, w)
    LX = lambda w: lie_derivative(x, w, d)
    LY = lambda w: lie_derivative(y, w, d)
    out = {}
    out["i_i"] = (iX(iY(omega)) + iY(iX(omega)).scale(e)).is_zero()
    out["L_i"] = LX(iY(omega)) - iY(LX(omega)).scale(e) == inner_product(xy, omega)
    out["L_d"] = (LX(d(omega)) - d(LX(omega))).is_zero()
    out["L_L"] = LX(LY(omega)) - LY(LX(omega)).scale(e) == lie_derivative(xy, omega, d)
    return out


def zder_add(x, y):
    return list(x) + list(y)


# --- assembled differential matrices ---------------------------------------------

def _rational_cols(cols):
    out = []
    for col in cols:
        if any(not c.is_rational() for c in col.values()):
            return None
        out.append({j: c.coeffs[0] for j, c in col.items()})
    return out


class DMatrix:
    """Sparse matrix of d: Omega^{n,k} -> Omega^{n+1,k}, columns keyed by (T, j).

    When every sign and every map involved is rational the entries are kept
    as plain rationals (``self.rational``); values are lifted back to the
    field on the way out.
    """

    def __init__(self, basis: DerBasis, n: int, k):
        self.basis = basis
        self.n = n
        self.k = basis.algebra.group.reduce(k)
        self.cols: dict = {}
        self.rational = False
        self._qcache: dict = {}
        self._build()

    def _build(self):
        B = self.basis
        A = B.algebra
        G = A.group
        n, k = self.n, self.k
        cols = self.cols
        self.rational = (all(_rational_cols(c) is not None for c in B.cols)
                         and all(A.eps(a, b).is_rational() for a in A.support() for b in A.support())
                         and all(_rational_cols([z]) is not None and _rational_cols(B.right_mul_cols(z)) is not None
                                 for br in B.brackets.values() for _, z in br))
        r = B.r
        # sign tables over member indices, in the arithmetic actually used
        conv = (lambda x: x.coeffs[0]) if self.rational else (lambda x: x)
        EM = [[conv(A.eps(B.deg[a], B.deg[b])) for b in range(r)] for a in range(r)]
        EK = [conv(A.eps(k, B.deg[c])) for c in range(r)]
        zeps: dict = {}
        for T in B.canonical_tuples(n + 1):
            terms = []
            for m in range(n + 1):
                tm = T[m]
                f = EK[tm]
                for a in range(m):
                    f = f * EM[T[a]][tm]
                if m % 2:
                    f = -f
                terms.append((T[:m] + T[m + 1:], f, B.cols[tm]))
            for m in range(n + 1):
                for nn in range(m + 1, n + 1):
                    br = B.brackets[(T[m], T[nn])]
                    if not br:
                        continue
                    f = EM[T[nn]][T[m]]
                    for a in range(m):
                        f = f * EM[T[a]][T[m]]
                    for a in range(nn):
                        f = f * EM[T[a]][T[nn]]
                    if (m + nn) % 2:
                        f = -f
                    rest = [T[j] for j in range(n + 1) if j != m and j != nn]
                    restdeg = B.tuple_degree(rest)
                    for c, z in br:
                        S, sign = B.canon([c] + rest)
                        if S is None:
                            continue
                        key = (id(z), c, restdeg)
                        e = zeps.get(key)
                        if e is None:
                            e = conv(A.eps(A.deg_of(z), G.add(B.deg[c], restdeg)))
                            zeps[key] = e
                        g = f * conv(sign) * e
                        terms.append((S, g, B.right_mul_cols(z)))
            for S, f, mcols in terms:
                if self.rational:
                    mc = self._qcache.get(id(mcols))
                    if mc is None:
                        mc = self._qcache[id(mcols)] = _rational_cols(mcols)
                    mcols = mc
                for j in A.basis_of_degree(B.value_degree(k, S)):
                    img = mcols[j]
                    if not img:
                        continue
                    col = cols.setdefault((S, j), {})
                    for l, c in img.items():
                        key = (T, l)
                        w = col.get(key)
                        w = f * c if w is None else w + f * c
                        if w:
                            col[key] = w
                        else:
                            del col[key]

    def domain_keys(self) -> list:
        B = self.basis
        A = B.algebra
        return [(S, j) for S in B.canonical_tuples(self.n)
                for j in A.basis_of_degree(B.value_degree(self.k, S))]

    def apply(self, vec: dict) -> dict:
        """Image of a sparse vector; field values in, field values out."""
        if not self.rational:
            return self._apply(vec)
        fld = self.basis.algebra.field
        if any(not c.is_rational() for c in vec.values()):
            return self._apply_mixed(vec)
        out = self._apply({key: c.coeffs[0] for key, c in vec.items()})
        return {key: fld.rational(c) for key, c in out.items()}

    def _apply(self, vec: dict) -> dict:
        out: dict = {}
        for key, c in vec.items():
            col = self.cols.get(key)
            if col:
                vaxpy(out, c, col)
        return out

    def _apply_mixed(self, vec: dict) -> dict:
        # the matrix is rational, so apply it to each zeta-power slice separately
        fld = self.basis.algebra.field
        deg = fld.degree
        slices = [self._apply({key: c.coeffs[t] for key, c in vec.items() if c.coeffs[t]})
                  for t in range(deg)]
        keys = set().union(*slices)
        zero = fld.zero.coeffs[0]
        out = {}
        for key in keys:
            v = CycNum(fld, tuple(sl.get(key, zero) for sl in slices))
            if v:
                out[key] = v
        return out

    def rows(self) -> list:
        keys = self.domain_keys()
        pos = {key: t for t, key in enumerate(keys)}
        rows: dict = {}
        for key, col in self.cols.items():
            t = pos[key]
            for r, c in col.items():
                rows.setdefault(r, {})[t] = c
        return list(rows.values())

    def rank(self) -> int:
        return linalg.rank(self.rows(), self.basis.algebra.field)


def d_matrix(basis: DerBasis, n: int, k) -> DMatrix:
    return DMatrix(basis, n, k)


def apply_d_fast(omega: EpsForm, cache: dict | None = None) -> EpsForm:
    key = (omega.n, omega.k)
    D = cache.get(key) if cache is not None else None
    if D is None:
        D = DMatrix(omega.basis, omega.n, omega.k)
        if cache is not None:
            cache[key] = D
    img = D.apply(omega.flat())
    comps: dict = {}
    for (T, l), c in img.items():
        comps.setdefault(T, {})[l] = c
    return EpsForm(omega.basis, omega.n + 1, omega.k, comps, check=False)


def d_squared_zero(basis: DerBasis, n: int, k) -> bool:
    """Checks d o d = 0 on every basis form of Omega^{n,k}."""
    D1 = DMatrix(basis, n, k)
    D2 = DMatrix(basis, n + 1, k)
    for key, col in D1.cols.items():
        if D1.rational and D2.rational:
            if D2._apply(col):
                return False
        elif D2.apply(_lift_col(col, basis.algebra.field)):
            return False
    return True


def _lift_col(col, fld):
    return {r: v if hasattr(v, "field") else fld.rational(v) for r, v in col.items()}


def cohomology_dim(basis: DerBasis, n: int, k=None) -> dict:
    """Ranks of d around Omega^{n,k}: kernel, image of the previous d, and H."""
    A = basis.algebra
    k = A.group.zero() if k is None else A.group.reduce(k)
    dim = basis.form_space_dim(n, k)
    r_out = DMatrix(basis, n, k).rank()
    r_in = DMatrix(basis, n - 1, k).rank() if n > 0 else 0
    ker = dim - r_out
    return {"n": n, "k": list(k), "dim": dim, "kernel": ker, "image": r_in, "H": ker - r_in}


# --- basis forms and random sampling -------------------------------------------

def basis_forms(basis: DerBasis, n: int, k) -> list:
    A = basis.algebra
    out = []
    for T in basis.canonical_tuples(n):
        for j in A.basis_of_degree(basis.value_degree(k, T)):
            out.append(EpsForm(basis, n, k, {T: {j: A.field.one}}, check=False))
    return out


def random_form(basis: DerBasis, n: int, k, rng, density: float = 1.0, scalars=(-2, -1, 1, 2, 3)) -> EpsForm:
    A = basis.algebra
    fld = A.field
    comps = {}
    for T in basis.canonical_tuples(n):
        v = {}
        for j in A.basis_of_degree(basis.value_degree(k, T)):
            if rng.random() <= density:
                c = fld.rational(rng.choice(scalars))
                if fld.degree > 1 and rng.random() < 0.3:
                    c = c * fld.zeta(1)
                v[j] = c
        if v:
            comps[T] = v
    return EpsForm(basis, n, k, comps, check=False)


# --- Lie-algebra cochains and the ad_* transport -------------------------------

class LieCochains:
    """Cochains on a homogeneous basis e_0..e_{r-1} of an eps-Lie subalgebra of A,
    with values in A under the adjoint action, stored on all ordered tuples."""

    def __init__(self, algebra: EpsAlgebra, elements):
        self.algebra = A = algebra
        self.elements = [dict(e) for e in elements]
        self.r = len(self.elements)
        self.deg = [A.deg_of(e) for e in self.elements]
        self.struct = {}
        for a in range(self.r):
            for b in range(self.r):
                br = A.bracket(self.elements[a], self.elements[b])
                sol = decompose_in_span(self.elements, br, A.field) if br else {}
                if sol is None:
                    raise ValueError("elements do not span an eps-Lie subalgebra")
                self.struct[(a, b)] = sol

    def tuples(self, n):
        return list(itertools.product(range(self.r), repeat=n))

    def value_degree(self, k, T):
        G = self.algebra.group
        d = k
        for t in T:
            d = G.add(d, self.deg[t])
        return d

    def random(self, n, k, rng):
        """Random 1-cochain (n must be 0 or 1; higher ones are built by products)."""
        A = self.algebra
        fld = A.field
        if n > 1:
            raise ValueError("use products and differentials for higher cochains")
        out = {}
        for T in self.tuples(n):
            v = {j: fld.rational(rng.choice((-2, -1, 1, 2))) for j in A.basis_of_degree(self.value_degree(k, T))
                 if rng.random() < 0.7}
            out[T] = v
        return (n, A.group.reduce(k), out)

    def d(self, w):
        n, k, vals = w
        A = self.algebra
        out = {}
        for T in self.tuples(n + 1):
            acc: dict = {}
            degs = [self.deg[t] for t in T]
            for m in range(n + 1):
                g = A.eps(k, degs[m])
                for a in range(m):
                    g = g * A.eps(degs[a], degs[m])
                if m % 2:
                    g = -g
                val = vals.get(T[:m] + T[m + 1:], {})
                if val:
                    vaxpy(acc, g, A.bracket(self.elements[T[m]], val))
            for m in range(n + 1):
                for nn in range(m + 1, n + 1):
                    g = A.eps(degs[nn], degs[m])
                    for a in range(m):
                        g = g * A.eps(degs[a], degs[m])
                    for a in range(nn):
                        g = g * A.eps(degs[a], degs[nn])
                    if (m + nn) % 2:
                        g = -g
                    rest = tuple(T[j] for j in range(n + 1) if j != m and j != nn)
                    for c, coef in self.struct[(T[m], T[nn])].items():
                        val = vals.get((c,) + rest, {})
                        if val:
                            vaxpy(acc, g * coef, val)
            if acc:
                out[T] = acc
        return (n + 1, k, out)

    def wedge(self, w1, w2):
        """Full-permutation product with the 1/(p!q!) normalization."""
        p, k1, v1 = w1
        q, k2, v2 = w2
        A = self.algebra
        G = A.group
        from math import factorial
        norm = A.field.rational(1) / (factorial(p) * factorial(q))
        out = {}
        for T in self.tuples(p + q):
            acc: dict = {}
            for sigma in itertools.permutations(range(p + q)):
                a = v1.get(tuple(T[s] for s in sigma[:p]), {})
                b = v2.get(tuple(T[s] for s in sigma[p:]), {})
                if not a or not b:
                    continue
                g = A.field.rational(_perm_sign(sigma))
                for m in range(p + q):
                    for n_ in range(m + 1, p + q):
                        if sigma[m] > sigma[n_]:
                            g = g * A.eps(self.deg[T[sigma[n_]]], self.deg[T[sigma[m]]])
                for m in range(p):
                    g = g * A.eps(k2, self.deg[T[sigma[m]]])
                vaxpy(acc, g, A.mul(a, b))
            if acc:
                out[T] = vscale(norm, acc)
        return (p + q, G.add(k1, k2), out)

    def der_basis(self) -> DerBasis:
        return inner_der_basis(self.algebra, self.elements)

    def push(self, w, basis: DerBasis) -> EpsForm:
        """ad_*: read the cochain on canonical tuples of the ad-basis."""
        n, k, vals = w
        comps = {T: vals[T] for T in basis.canonical_tuples(n) if vals.get(T)}
        return EpsForm(basis, n, k, comps, check=False)


# --- Grassmann algebras ------------------------------------------------------------

def grassmann_duals(A: EpsAlgebra) -> list:
    """The odd derivations alpha^j (degree -1) dual to the generators theta_j."""
    G = A.group
    out = []
    for j in range(A.q):
        cols = []
        for S in A.subsets:
            col = {}
            if j in S:
                p = S.index(j)
                rest = S[:p] + S[p + 1:]
                col[A.subsets.index(rest)] = A.field.rational((-1) ** p)
            cols.append(col)
        out.append(Derivation.homogeneous(A, G.neg(G.reduce((1,) * G.rank)), cols))
    return out


def grassmann_der_basis(A: EpsAlgebra) -> DerBasis:
    return DerBasis(A, grassmann_duals(A))


def grassmann_element(A: EpsAlgebra, idx) -> dict:
    """theta_{i_1} ... theta_{i_k} (0-based indices, any order) as a sparse vector."""
    v = dict(A.unit)
    for i in idx:
        v = A.mul(v, {A.subsets.index((i,)): A.field.one})
    return v


def sym_form(basis: DerBasis, js) -> EpsForm:
    """theta_{j_1} v ... v theta_{j_n}: the n-form of degree n with
    value (-1)^{n(n-1)/2} sum_sigma prod delta(j_m, l_sigma(m)) on (alpha^{l_1}, ...)."""
    from collections import Counter
    A = basis.algebra
    n = len(js)
    want = Counter(js)
    sign = A.field.rational((-1) ** (n * (n - 1) // 2))
    comps = {}
    for T in basis.canonical_tuples(n):
        if Counter(T) == want:
            mult = 1
            for c in want.values():
                mult *= _factorial(c)
            comps[T] = {0: sign * A.field.rational(mult)}
    k = A.group.reduce((n,) * A.group.rank)
    return EpsForm(basis, n, k, comps, check=False)


def _factorial(n):
    from math import factorial
    return factorial(n)


def grassmann_form(basis: DerBasis, I, J) -> EpsForm:
    """(theta_I) (x) (v theta_J), read as the product of the 0-form theta_I with the symmetric form."""
    A = basis.algebra
    return wedge(EpsForm.scalar(basis, grassmann_element(A, I)), sym_form(basis, J))


def grassmann_transfer(basis: DerBasis, I, J, printed: bool = False) -> EpsForm:
    """Move one theta from the antisymmetric factor to the symmetric one:
    - sum_l (-1)^{k-l} theta_{I minus i_l} (x) (theta_{i_l} v theta_J).

    With ``printed`` the global sign (-1)^n of the uncorrected variant is
    used instead of -1; the two agree only for odd n.
    """
    A = basis.algebra
    k, n = len(I), len(J)
    acc = None
    for l in range(1, k + 1):
        c = ((-1) ** n if printed else -1) * (-1) ** (k - l)
        term = grassmann_form(basis, I[:l - 1] + I[l:], (I[l - 1],) + tuple(J)).scale(A.field.rational(c))
        acc = term if acc is None else acc + term
    if acc is None:
        return EpsForm.zero(basis, n + 1, A.group.reduce((k - n,)))
    return acc


# --- the ad isomorphism on elementary matrix algebras ------------------------------

def ad_kernel(A: EpsAlgebra, elements) -> list:
    """Coefficient vectors c with ad(sum c_i u_i) = 0."""
    flats = [Derivation.ad(A, u).flat() for u in elements]
    keys = sorted({key for f in flats for key in f})
    pos = {key: t for t, key in enumerate(keys)}
    rows = [dict() for _ in keys]
    for i, f in enumerate(flats):
        for key, c in f.items():
            rows[pos[key]][i] = c
    return linalg.nullspace(rows, len(elements), A.field)


def ad_transport_check(A: EpsAlgebra, elements, max_n: int = 2, rng=None, samples: int = 10) -> dict:
    """Compare Lie-algebra cochains on span(elements) with forms on the ad-basis.

    Checks, for all basis cochains up to degree max_n built from the basis
    0- and 1-cochains: the stored values match at every ordered argument
    tuple; ad_* commutes with d; and ad_* maps products to products (all
    pairs of basis 1-cochains when rng is None, otherwise ``samples`` pairs).
    """
    L = LieCochains(A, elements)
    B = L.der_basis()
    G = A.group
    fld = A.field
    counts = {"values": 0, "values_ok": 0, "d": 0, "d_ok": 0, "wedge": 0, "wedge_ok": 0}

    def basis_cochains(n):
        out = []
        for T in L.tuples(n):
            for j in range(A.dim):
                k = G.sub(A.degrees[j], L.value_degree(G.zero(), T))
                out.append((n, k, {T: {j: fld.one}}))
        return out

    def check_values(w):
        n, k, vals = w
        f = L.push(w, B)
        for T in L.tuples(n):
            counts["values"] += 1
            if f(*T) == vals.get(T, {}):
                counts["values_ok"] += 1

    def check_d(w):
        counts["d"] += 1
        if L.push(L.d(w), B) == differential(L.push(w, B)):
            counts["d_ok"] += 1

    zero = basis_cochains(0)
    one = basis_cochains(1)
    for w in zero:
        check_values(w)
        check_d(w)
        if max_n >= 2:
            check_values(L.d(w))
    for w in one:
        check_values(w)
        if max_n >= 2:
            check_d(w)
            check_values(L.d(w))
    if max_n >= 2:
        pairs = [(a, b) for a in one for b in one]
        if rng is not None:
            pairs = [rng.choice(pairs) for _ in range(samples)]
        for a, b in pairs:
            ab = L.wedge(a, b)
            check_values(ab)
            counts["wedge"] += 1
            if L.push(ab, B) == wedge(L.push(a, B), L.push(b, B)):
                counts["wedge_ok"] += 1
    counts["ok"] = all(counts[k] == counts[k + "_ok"] for k in ("values", "d", "wedge"))
    return counts
