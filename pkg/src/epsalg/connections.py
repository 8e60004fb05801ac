"""eps-connections on free graded right modules.

A module element m = sum_i e_i a_i is a list of sparse vectors ``[a_0, ...]``;
e_i has degree ``shifts[i]``.  Module-valued p-forms (:class:`ModForm`) are
stored like EpsForm, with module elements as values.  A connection is fixed
by the module elements nabla(e_i)(X_c) on the members of a DerBasis.
"""

from __future__ import annotations

import itertools

from . import linalg
from .algebra import Derivation, EpsAlgebra, reality_check, vadd, vaxpy, vscale, vsub
from .diffcalc import DerBasis, EpsForm, wedge


class ConnectionError_(ValueError):
    pass


class GradedModule:
    """Free right module sum_i e_i A with deg(e_i) = shifts[i]."""

    def __init__(self, algebra: EpsAlgebra, shifts=None, pairing: bool = True):
        self.algebra = algebra
        G = algebra.group
        self.shifts = [G.reduce(s) for s in (shifts if shifts is not None else [G.zero()])]
        self.rank = len(self.shifts)
        self.pairing = pairing

    def zero(self):
        return [{} for _ in range(self.rank)]

    def basis_elem(self, i: int):
        m = self.zero()
        m[i] = dict(self.algebra.unit)
        return m

    def elem(self, i: int, a: dict):
        m = self.zero()
        m[i] = dict(a)
        return m

    def add(self, m, n):
        return [vadd(a, b) for a, b in zip(m, n)]

    def sub(self, m, n):
        return [vsub(a, b) for a, b in zip(m, n)]

    def scale(self, c, m):
        return [vscale(c, a) for a in m]

    def right_mul(self, m, a: dict):
        A = self.algebra
        return [A.mul(x, a) for x in m]

    def is_zero(self, m) -> bool:
        return not any(m)

    def degree(self, m):
        """Degree of a homogeneous module element (None for zero)."""
        A = self.algebra
        G = A.group
        ds = set()
        for s, a in zip(self.shifts, m):
            for j in a:
                ds.add(G.add(s, A.degrees[j]))
        if len(ds) > 1:
            raise ValueError("module element is not homogeneous")
        return ds.pop() if ds else None

    def homogeneous_parts(self, m) -> dict:
        A = self.algebra
        G = A.group
        out: dict = {}
        for i, (s, a) in enumerate(zip(self.shifts, m)):
            for j, c in a.items():
                d = G.add(s, A.degrees[j])
                out.setdefault(d, self.zero())[i][j] = c
        return out

    def component_degree(self, i, total):
        """Degree that the coefficient of e_i must have in an element of degree ``total``."""
        return self.algebra.group.sub(total, self.shifts[i])

    def basis_elements(self, degree) -> list:
        """e_i E_j spanning M^degree."""
        A = self.algebra
        out = []
        for i in range(self.rank):
            for j in A.basis_of_degree(self.component_degree(i, degree)):
                out.append(self.elem(i, {j: A.field.one}))
        return out

    def inner(self, m, n) -> dict:
        """<m, n> = sum_i m_i^* n_i."""
        if not self.pairing:
            raise ConnectionError_("module has no hermitean pairing installed")
        A = self.algebra
        out: dict = {}
        for a, b in zip(m, n):
            if a and b:
                out = vadd(out, A.mul(A.star(a), b))
        return out


# --- module-valued forms --------------------------------------------------------

class ModForm:
    """Module-valued n-form of Gamma-degree k on a DerBasis, canonical-tuple storage."""

    __slots__ = ("module", "basis", "n", "k", "comps")

    def __init__(self, module: GradedModule, basis: DerBasis, n: int, k, comps=None):
        self.module = module
        self.basis = basis
        self.n = n
        self.k = basis.algebra.group.reduce(k)
        self.comps = {}
        for T, m in (comps or {}).items():
            if any(m):
                self.comps[tuple(T)] = [dict(a) for a in m]

    @classmethod
    def from_element(cls, module, basis, m):
        d = module.degree(m)
        if d is None:
            d = basis.algebra.group.zero()
        return cls(module, basis, 0, d, {(): m})

    def __call__(self, *idx):
        T, sign = self.basis.canon(idx)
        if T is None or T not in self.comps:
            return self.module.zero()
        return self.module.scale(sign, self.comps[T])

    def evaluate(self, args):
        """Value on members or Z-derivations (lists of (c, z)), as in diffcalc.evaluate."""
        B = self.basis
        A = B.algebra
        G = A.group
        M = self.module
        expansions = [[(a, None)] if isinstance(a, int) else list(a) for a in args]
        out = M.zero()
        for combo in itertools.product(*expansions):
            idx = [c for c, _ in combo]
            val = self(*idx)
            if M.is_zero(val):
                continue
            tail = G.zero()
            tails = [None] * len(idx)
            for i in range(len(idx) - 1, -1, -1):
                tail = G.add(tail, B.deg[idx[i]])
                tails[i] = tail
            f = A.field.one
            zs = []
            for i, (c, z) in enumerate(combo):
                if z is not None:
                    f = f * A.eps(A.deg_of(z), tails[i])
                    zs.append(z)
            val = M.scale(f, val)
            for z in zs:
                val = M.right_mul(val, z)
            out = M.add(out, val)
        return out

    def __add__(self, other):
        out = {T: list(m) for T, m in self.comps.items()}
        for T, m in other.comps.items():
            out[T] = self.module.add(out[T], m) if T in out else m
        k = self.k if self.comps else other.k
        return ModForm(self.module, self.basis, self.n, k, out)

    def __sub__(self, other):
        return self + other.scale(-self.basis.algebra.field.one)

    def scale(self, c):
        return ModForm(self.module, self.basis, self.n, self.k,
                       {T: self.module.scale(c, m) for T, m in self.comps.items()})

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, ModForm):
            return NotImplemented
        return self.n == other.n and (self - other).is_zero()

    def components(self) -> list:
        """One EpsForm per module basis vector."""
        G = self.basis.algebra.group
        out = []
        for i, s in enumerate(self.module.shifts):
            comps = {T: m[i] for T, m in self.comps.items() if m[i]}
            out.append(EpsForm(self.basis, self.n, G.sub(self.k, s), comps, check=False))
        return out

    @classmethod
    def from_components(cls, module, basis, forms, k):
        comps: dict = {}
        for i, f in enumerate(forms):
            for T, v in f.comps.items():
                comps.setdefault(T, module.zero())[i] = v
        n = forms[0].n if forms else 0
        return cls(module, basis, n, k, comps)

    def wedge(self, eta: EpsForm) -> "ModForm":
        """Right action of algebra-valued forms: (omega eta)."""
        G = self.basis.algebra.group
        forms = [wedge(f, eta) for f in self.components()]
        return ModForm.from_components(self.module, self.basis, forms, G.add(self.k, eta.k))

    def apply_phi(self, phi) -> "ModForm":
        return ModForm(self.module, self.basis, self.n, self.k,
                       {T: phi(m) for T, m in self.comps.items()})


def random_modform(module, basis, n, k, rng, density=0.5) -> ModForm:
    A = basis.algebra
    fld = A.field
    comps = {}
    for T in basis.canonical_tuples(n):
        total = basis.value_degree(k, T)
        m = module.zero()
        for i in range(module.rank):
            for j in A.basis_of_degree(module.component_degree(i, total)):
                if rng.random() < density:
                    m[i][j] = fld.rational(rng.choice((-2, -1, 1, 2, 3)))
        if any(m):
            comps[T] = m
    return ModForm(module, basis, n, k, comps)


# --- connections --------------------------------------------------------------

class EpsConnection:
    """nabla on a free module, from the values omega[(i, c)] = nabla(e_i)(X_c)."""

    def __init__(self, module: GradedModule, basis: DerBasis, omega=None, check: bool = True):
        self.module = module
        self.basis = basis
        A = basis.algebra
        G = A.group
        self.omega = {}
        for i in range(module.rank):
            for c in range(basis.r):
                m = (omega or {}).get((i, c)) or module.zero()
                m = [dict(a) for a in m]
                if check:
                    d = module.degree(m)
                    want = G.add(module.shifts[i], basis.deg[c])
                    if d is not None and d != want:
                        raise ConnectionError_(f"nabla(e_{i})(X_{c}) has degree {d}, expected {want}")
                self.omega[(i, c)] = m

    def apply(self, m, x):
        return connection_apply(self, m, x)

    def __sub__(self, other):
        M = self.module
        return {key: M.sub(v, other.omega[key]) for key, v in self.omega.items()}


def connection_apply(nabla: EpsConnection, m, x):
    """nabla(m)(X) for a module element m and a member index or Z-derivation X."""
    B = nabla.basis
    A = B.algebra
    M = nabla.module
    if not isinstance(x, int):
        out = M.zero()
        for c, z in x:
            v = connection_apply(nabla, m, c)
            f = A.eps(A.deg_of(z), B.deg[c])
            out = M.add(out, M.scale(f, M.right_mul(v, z)))
        return out
    dx = B.deg[x]
    out = M.zero()
    for i, a in enumerate(m):
        for da, ah in A.homogeneous_parts(a).items():
            f = A.eps(da, dx)
            t = M.right_mul(nabla.omega[(i, x)], ah)
            t[i] = vadd(t[i], B.apply_member(x, ah))
            out = M.add(out, M.scale(f, t))
    return out


def connection_form(nabla: EpsConnection, m) -> ModForm:
    """nabla(m) as a module-valued 1-form."""
    B = nabla.basis
    M = nabla.module
    d = M.degree(m)
    if d is None:
        return ModForm(M, B, 1, B.algebra.group.zero())
    return ModForm(M, B, 1, d, {(c,): connection_apply(nabla, m, c) for c in range(B.r)})


def connection_extend(nabla: EpsConnection, omega: ModForm) -> ModForm:
    """nabla on module-valued p-forms, with the factors f_4 and f_5."""
    B = nabla.basis
    A = B.algebra
    M = nabla.module
    p = omega.n
    comps = {}
    for T in B.canonical_tuples(p + 1):
        degs = [B.deg[t] for t in T]
        acc = M.zero()
        for m in range(p + 1):
            f = A.field.one
            for a in range(m + 1, p + 1):
                f = f * A.eps(degs[m], degs[a])
            if m % 2:
                f = -f
            val = omega(*(T[:m] + T[m + 1:]))
            if any(val):
                acc = M.add(acc, M.scale(f, connection_apply(nabla, val, T[m])))
        for m in range(p + 1):
            for nn in range(m + 1, p + 1):
                br = B.brackets[(T[m], T[nn])]
                if not br:
                    continue
                f = A.eps(degs[nn], degs[m])
                for a in range(m):
                    f = f * A.eps(degs[a], degs[m])
                for a in range(nn):
                    f = f * A.eps(degs[a], degs[nn])
                if (m + nn) % 2:
                    f = -f
                rest = [T[j] for j in range(p + 1) if j != m and j != nn]
                acc = M.add(acc, M.scale(f, omega.evaluate([br] + rest)))
        if any(acc):
            comps[T] = acc
    return ModForm(M, B, p + 1, omega.k, comps)


def curvature_value(nabla: EpsConnection, m, x, y):
    """R(m)(X,Y) = eps(|X|,|Y|) nabla(nabla(m)(Y))(X) - nabla(nabla(m)(X))(Y) - nabla(m)([X,Y])."""
    B = nabla.basis
    A = B.algebra
    M = nabla.module
    f = A.eps(B.deg[x], B.deg[y])
    t1 = connection_apply(nabla, connection_apply(nabla, m, y), x)
    t2 = connection_apply(nabla, connection_apply(nabla, m, x), y)
    t3 = connection_apply(nabla, m, B.brackets[(x, y)])
    return M.sub(M.sub(M.scale(f, t1), t2), t3)


class Curvature:
    """Table R(e_i)(X_a, X_b) over canonical pairs; right-linear extension."""

    def __init__(self, nabla: EpsConnection):
        self.nabla = nabla
        B = nabla.basis
        self.values = {}
        for i in range(nabla.module.rank):
            e = nabla.module.basis_elem(i)
            for a in range(B.r):
                for b in range(B.r):
                    self.values[(i, a, b)] = curvature_value(nabla, e, a, b)

    def __call__(self, m, x, y):
        """R(m)(X_x, X_y) = sum_i eps(|m_i|, |X|+|Y|) R(e_i)(X,Y) m_i (right-linearity)."""
        M = self.nabla.module
        B = self.nabla.basis
        A = B.algebra
        dxy = A.group.add(B.deg[x], B.deg[y])
        out = M.zero()
        for i, a in enumerate(m):
            for da, ah in A.homogeneous_parts(a).items():
                t = M.right_mul(self.values[(i, x, y)], ah)
                out = M.add(out, M.scale(A.eps(da, dxy), t))
        return out

    def is_zero(self) -> bool:
        return all(not any(v) for v in self.values.values())


def curvature(nabla: EpsConnection) -> Curvature:
    return Curvature(nabla)


def trivial_connection(module: GradedModule, basis: DerBasis) -> EpsConnection:
    return EpsConnection(module, basis, {})


def random_connection(module, basis, rng, density=0.6) -> EpsConnection:
    A = basis.algebra
    G = A.group
    fld = A.field
    omega = {}
    for i in range(module.rank):
        for c in range(basis.r):
            total = G.add(module.shifts[i], basis.deg[c])
            m = module.zero()
            for l in range(module.rank):
                for j in A.basis_of_degree(module.component_degree(l, total)):
                    if rng.random() < density:
                        m[l][j] = fld.rational(rng.choice((-2, -1, 1, 2)))
            omega[(i, c)] = m
    return EpsConnection(module, basis, omega)


# --- the canonical connection on matrix algebras ----------------------------------

def ad_inverse(basis: DerBasis, sl) -> list:
    """For each member X_c, the eps-traceless M_c in span(sl) with ad_{M_c} = X_c."""
    A = basis.algebra
    flats = [Derivation.ad(A, u).flat() for u in sl]
    out = []
    from .algebra import decompose_in_span
    for X in basis.members:
        sol = decompose_in_span(flats, X.flat(), A.field)
        if sol is None:
            raise ConnectionError_("member is not inner on the given traceless span")
        v: dict = {}
        for t, c in sol.items():
            vaxpy(v, c, sl[t])
        out.append(v)
    return out


def canonical_connection(basis: DerBasis, sl, sign: int = -1) -> EpsConnection:
    """Rank-one connection with nabla(1)(X) = sign * ad^{-1}(X).

    sign = -1 gives nabla(a)(X) = -a M_X, the gauge invariant flat choice.
    """
    A = basis.algebra
    M = GradedModule(A)
    mats = ad_inverse(basis, sl)
    omega = {(0, c): [vscale(A.field.rational(sign), mats[c])] for c in range(basis.r)}
    return EpsConnection(M, basis, omega)


# --- gauge transformations ------------------------------------------------------

class Gauge:
    """Right-linear module map Phi(sum e_j a_j) = sum_i e_i (sum_j Phi[i][j] a_j)."""

    def __init__(self, module: GradedModule, matrix, check: bool = True):
        self.module = module
        self.matrix = [[dict(x) for x in row] for row in matrix]
        if check:
            A = module.algebra
            G = A.group
            for i, row in enumerate(self.matrix):
                for j, x in enumerate(row):
                    want = G.sub(module.shifts[i], module.shifts[j])
                    if any(A.degrees[t] != want for t in x):
                        raise ConnectionError_(f"Phi[{i}][{j}] is not of degree {want}")

    def __call__(self, m):
        A = self.module.algebra
        out = self.module.zero()
        for i, row in enumerate(self.matrix):
            for j, x in enumerate(row):
                if x and m[j]:
                    out[i] = vadd(out[i], A.mul(x, m[j]))
        return out

    def linear_rows(self):
        """Matrix of Phi on the K-vector space M = A^r (rows keyed by output index)."""
        A = self.module.algebra
        n = A.dim
        r = self.module.rank
        rows = [dict() for _ in range(r * n)]
        for j in range(r):
            for t in range(n):
                img = self(self.module.elem(j, A.basis_vec(t)))
                for i, v in enumerate(img):
                    for s, c in v.items():
                        rows[i * n + s][j * n + t] = c
        return rows

    def inverse(self) -> "Gauge":
        A = self.module.algebra
        n = A.dim
        r = self.module.rank
        rows = self.linear_rows()
        red, piv = linalg.rref([{**row, r * n + k: A.field.one} for k, row in enumerate(rows)], A.field)
        if piv[:r * n] != list(range(r * n)):
            raise ConnectionError_("gauge transformation is not invertible")
        inv = [dict() for _ in range(r * n)]
        for row, p in zip(red, piv):
            for col, c in row.items():
                if col >= r * n:
                    inv[p][col - r * n] = c
        # inverse applied to e_j gives column j*n + unit
        mat = [[{} for _ in range(r)] for _ in range(r)]
        for j in range(r):
            for u, cu in A.unit.items():
                src = j * n + u
                for i in range(r):
                    for s in range(n):
                        c = inv[i * n + s].get(src)
                        if c:
                            mat[i][j][s] = mat[i][j].get(s, A.field.zero) + c * cu
        mat = [[{s: c for s, c in x.items() if c} for x in row] for row in mat]
        return Gauge(self.module, mat)

    def is_invertible(self) -> bool:
        A = self.module.algebra
        return linalg.rank(self.linear_rows(), A.field) == A.dim * self.module.rank


def gauge_transform(phi: Gauge, nabla: EpsConnection) -> EpsConnection:
    """nabla^Phi = Phi o nabla o Phi^{-1}."""
    inv = phi.inverse()
    M = nabla.module
    omega = {}
    for i in range(M.rank):
        pre = inv(M.basis_elem(i))
        for c in range(nabla.basis.r):
            omega[(i, c)] = phi(connection_apply(nabla, pre, c))
    return EpsConnection(M, nabla.basis, omega)


def unitary_gauge_check(phi: Gauge) -> bool:
    """<Phi m, Phi n> = <m, n> on basis vectors e_i a (a basis of A)."""
    M = phi.module
    A = M.algebra
    elems = [M.elem(i, A.basis_vec(j)) for i in range(M.rank) for j in range(A.dim)]
    for m in elems:
        pm = phi(m)
        for n in elems:
            if M.inner(pm, phi(n)) != M.inner(m, n):
                return False
    return True


# --- hermitean connections ---------------------------------------------------------

def real_derivations(basis: DerBasis) -> list:
    """Real eps-derivations made from the members: X + X^dagger and iX + (iX)^dagger."""
    A = basis.algebra
    G = A.group
    fld = A.field
    out = []
    for X in basis.members:
        for c in (fld.one, fld.i if fld.N % 4 == 0 else None):
            if c is None:
                continue
            Xc = X.scaled(c)
            k = Xc.degree
            cols = []
            for j in range(A.dim):
                b = A.basis_vec(j)
                bs = A.star(b)
                img = A.star(Xc(bs))
                f = A.eps(G.neg(A.degrees[j]), k).inverse()
                cols.append(vscale(f, img))
            dag = Derivation.homogeneous(A, G.neg(k), cols)
            R = Xc + dag
            if not R.is_zero() and reality_check(R):
                out.append(R)
    return out


def hermitean_check(nabla: EpsConnection, reals=None) -> bool:
    """The hermitean condition on all homogeneous pairs e_i a, e_j b and the given real derivations."""
    M = nabla.module
    B = nabla.basis
    A = B.algebra
    G = A.group
    reals = real_derivations(B) if reals is None else reals
    elems = [M.elem(i, A.basis_vec(j)) for i in range(M.rank) for j in range(A.dim)]
    for X in reals:
        parts = {k: B.express(Derivation(A, [p])) for k, p in X.parts.items() if not p.is_zero()}
        for m in elems:
            dm = M.degree(m)
            nm = {k: connection_apply(nabla, m, zx) for k, zx in parts.items()}
            for n in elems:
                dn = M.degree(n)
                lhs: dict = {}
                for k, v in nm.items():
                    vaxpy(lhs, A.eps(G.sub(dn, dm), k), M.inner(v, n))
                for k, zx in parts.items():
                    lhs = vadd(lhs, M.inner(m, connection_apply(nabla, n, zx)))
                mn = M.inner(m, n)
                rhs: dict = {}
                for k, p in X.parts.items():
                    for d, h in A.homogeneous_parts(mn).items():
                        vaxpy(rhs, A.eps(d, k), p(h))
                if lhs != rhs:
                    return False
    return True


# --- gauge potentials on rank-one modules -----------------------------------------

def potentials(nabla: EpsConnection) -> list:
    """A_X for each member, from nabla(1)(X) = -i A_X."""
    A = nabla.basis.algebra
    i = A.field.i
    return [vscale(i, nabla.omega[(0, c)][0]) for c in range(nabla.basis.r)]


def potential_curvature(nabla: EpsConnection, x: int, y: int) -> dict:
    """F_{X,Y} = X(A_Y) - eps Y(A_X) - i [A_X, A_Y]_eps - A_{[X,Y]}; R(1)(X,Y) = -i F."""
    B = nabla.basis
    A = B.algebra
    i = A.field.i
    pot = potentials(nabla)
    f = A.eps(B.deg[x], B.deg[y])
    out = vsub(B.apply_member(x, pot[y]), vscale(f, B.apply_member(y, pot[x])))
    out = vsub(out, vscale(i, A.bracket(pot[x], pot[y])))
    # A_{zX} = i nabla(1)(zX) with the Z-linear rule of connection_apply
    one = nabla.module.basis_elem(0)
    a_br = vscale(i, connection_apply(nabla, one, B.brackets[(x, y)])[0])
    trivial = EpsConnection(nabla.module, B, {})
    a_br = vsub(a_br, vscale(i, connection_apply(trivial, one, B.brackets[(x, y)])[0]))
    return vsub(out, a_br)
