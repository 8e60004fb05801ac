"""Moyal star product on polynomials and the Z2-graded algebra built from it.

Polynomials in x_1..x_D carry coefficients that are Laurent polynomials in
theta and polynomials in alpha over Q(zeta_N).  A term is stored flat as
``(x-exponents, theta-exp, alpha-exp) -> CycNum``.  Theta = theta * Sigma, so
every identity below is checked as a polynomial identity in theta, alpha, x.

On polynomials the star product is the terminating bidifferential series
a * b = sum_n (i/2)^n / n! Theta^{m1 n1}..Theta^{mk nk} (d_m.. a)(d_n.. b).
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .scalars import MoyalScalar, field, format_moyal, parse_generic


class MoyalError(ValueError):
    pass


class MoyalContext:
    """Dimension D (even), skew invertible rational Sigma, conductor N (multiple of 4)."""

    def __init__(self, D: int = 2, Sigma=None, N: int = 4):
        if D < 2 or D % 2:
            raise MoyalError("D must be a positive even integer")
        if N % 4:
            raise MoyalError("the Moyal algebra needs i, so N must be a multiple of 4")
        self.D = D
        self.N = N
        self.field = fld = field(N)
        if Sigma is None:
            Sigma = [[0] * D for _ in range(D)]
            for b in range(0, D, 2):
                Sigma[b][b + 1] = 1
                Sigma[b + 1][b] = -1
        self.Sigma = [[Fraction(v) for v in row] for row in Sigma]
        for m in range(D):
            for n in range(D):
                if self.Sigma[m][n] != -self.Sigma[n][m]:
                    raise MoyalError("Sigma must be skew-symmetric")
        try:
            inv = linalg.matrix_inverse([[fld.rational(v) for v in row] for row in self.Sigma], fld)
        except ZeroDivisionError:
            raise MoyalError("Sigma must be invertible") from None
        self.Sigma_inv = inv
        self.i = fld.i
        self.half = fld.rational(Fraction(1, 2))

    def theta(self, m, n) -> "MPoly":
        """Theta_{mn} = theta Sigma_{mn} as a constant polynomial."""
        return MPoly.scalar(self, self.field.rational(self.Sigma[m][n]), 1, 0)

    def theta_inv(self, m, n) -> "MPoly":
        """(Theta^{-1})_{mn} = theta^{-1} (Sigma^{-1})_{mn}."""
        return MPoly.scalar(self, self.Sigma_inv[m][n], -1, 0)

    def alpha(self) -> "MPoly":
        return MPoly.scalar(self, self.field.one, 0, 1)

    def x(self, m) -> "MPoly":
        e = [0] * self.D
        e[m] = 1
        return MPoly(self, {(tuple(e), 0, 0): self.field.one})

    def const(self, c) -> "MPoly":
        return MPoly.scalar(self, self.field.coerce(c), 0, 0)

    def zero(self) -> "MPoly":
        return MPoly(self, {})

    def poly(self, text: str) -> "MPoly":
        return MPoly.parse(self, text)


class MPoly:
    """Commutative polynomial with theta/alpha-dependent coefficients."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: MoyalContext, terms=None):
        self.ctx = ctx
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def scalar(cls, ctx, c, p=0, q=0):
        return cls(ctx, {((0,) * ctx.D, p, q): c})

    @classmethod
    def parse(cls, ctx, text):
        raw = parse_generic(text, ctx.N)
        terms = {}
        for (xs, p, q), c in raw.items():
            if len(xs) > ctx.D:
                raise MoyalError(f"{text!r} uses a variable beyond x{ctx.D}")
            xs = tuple(xs) + (0,) * (ctx.D - len(xs))
            terms[(xs, p, q)] = c
        return cls(ctx, terms)

    @classmethod
    def from_moyal_scalar(cls, ctx, s: MoyalScalar):
        return cls(ctx, {((0,) * ctx.D, p, q): c for (p, q), c in s.terms.items()})

    # --- ring structure (pointwise) --------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            w = t.get(k)
            t[k] = v if w is None else w + v
        return MPoly(self.ctx, t)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        """Pointwise product (use :func:`star` for the Moyal product)."""
        other = self._lift(other)
        t: dict = {}
        for (x1, p1, q1), c1 in self.terms.items():
            for (x2, p2, q2), c2 in other.terms.items():
                k = (tuple(a + b for a, b in zip(x1, x2)), p1 + p2, q1 + q2)
                w = t.get(k)
                t[k] = c1 * c2 if w is None else w + c1 * c2
        return MPoly(self.ctx, t)

    __rmul__ = __mul__

    def _lift(self, other):
        if isinstance(other, MPoly):
            return other
        if isinstance(other, MoyalScalar):
            return MPoly.from_moyal_scalar(self.ctx, other)
        return MPoly.scalar(self.ctx, self.ctx.field.coerce(other))

    def deriv(self, m: int) -> "MPoly":
        t = {}
        for (xs, p, q), c in self.terms.items():
            if xs[m]:
                ys = list(xs)
                ys[m] -= 1
                t[(tuple(ys), p, q)] = c * xs[m]
        return MPoly(self.ctx, t)

    def conj(self) -> "MPoly":
        """Complex conjugation: x, theta and alpha are real."""
        return MPoly(self.ctx, {k: v.conj() for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(not any(xs) for (xs, _, _) in self.terms)

    def degree(self) -> int:
        return max((sum(xs) for (xs, _, _) in self.terms), default=-1)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def by_monomial(self) -> dict:
        """x-exponents -> MoyalScalar coefficient."""
        out: dict = {}
        for (xs, p, q), c in self.terms.items():
            out.setdefault(xs, {})[(p, q)] = c
        return {xs: MoyalScalar(t, self.ctx.field) for xs, t in out.items()}

    def __repr__(self):
        return f"MPoly({format_mpoly(self)})"

    def __str__(self):
        return format_mpoly(self)


def format_mpoly(a: MPoly) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for xs, coeff in sorted(a.by_monomial().items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0]))):
        mono = "*".join(f"x{m + 1}" + (f"^{e}" if e > 1 else "") for m, e in enumerate(xs) if e)
        c = format_moyal(coeff)
        if not mono:
            parts.append(c)
        elif c == "1":
            parts.append(mono)
        elif c == "-1":
            parts.append("-" + mono)
        elif " " in c or "+" in c[1:] or "-" in c[1:]:
            parts.append(f"({c})*{mono}")
        else:
            parts.append(f"{c}*{mono}")
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


# --- the star product ---------------------------------------------------------

def star(a: MPoly, b: MPoly, ctx: MoyalContext | None = None) -> MPoly:
    ctx = ctx or a.ctx
    D = ctx.D
    fld = ctx.field
    sig = [(m, n, fld.rational(ctx.Sigma[m][n])) for m in range(D) for n in range(D) if ctx.Sigma[m][n]]
    # bi-terms: (xa, xb, p, q) -> coefficient
    cur: dict = {}
    for (xa, pa, qa), ca in a.terms.items():
        for (xb, pb, qb), cb in b.terms.items():
            k = (xa, xb, pa + pb, qa + qb)
            w = cur.get(k)
            cur[k] = ca * cb if w is None else w + ca * cb
    out: dict = {}
    n = 0
    pref = fld.one
    step = fld.i * ctx.half
    while cur:
        for (xa, xb, p, q), c in cur.items():
            if not c:
                continue
            k = (tuple(u + v for u, v in zip(xa, xb)), p, q)
            w = out.get(k)
            val = pref * c
            out[k] = val if w is None else w + val
        n += 1
        pref = pref * step * fld.rational(Fraction(1, n))
        nxt: dict = {}
        for (xa, xb, p, q), c in cur.items():
            for m, nn, s in sig:
                if xa[m] and xb[nn]:
                    ya = list(xa)
                    ya[m] -= 1
                    yb = list(xb)
                    yb[nn] -= 1
                    k = (tuple(ya), tuple(yb), p + 1, q)
                    val = c * s * (xa[m] * xb[nn])
                    w = nxt.get(k)
                    nxt[k] = val if w is None else w + val
        cur = {k: v for k, v in nxt.items() if v}
    return MPoly(ctx, out)


def commutator(a, b):
    return star(a, b) - star(b, a)


def anticommutator(a, b):
    return star(a, b) + star(b, a)


# --- generators ----------------------------------------------------------------

def xtilde(ctx: MoyalContext, m: int) -> MPoly:
    """x~_m = 2 (Theta^{-1})_{mn} x_n."""
    out = ctx.zero()
    for n in range(ctx.D):
        if ctx.Sigma_inv[m][n]:
            out = out + ctx.theta_inv(m, n) * ctx.x(n) * 2
    return out


def generators(ctx: MoyalContext):
    """(gamma, xi, eta): gamma = 1, xi_m = -x~_m/2, eta_mn = x~_m x~_n / 2 (pointwise)."""
    gamma = ctx.const(1)
    xt = [xtilde(ctx, m) for m in range(ctx.D)]
    xi = [xt[m] * (-ctx.half) for m in range(ctx.D)]
    eta = [[xt[m] * xt[n] * ctx.half for n in range(ctx.D)] for m in range(ctx.D)]
    return gamma, xi, eta


# --- the superalgebra ------------------------------------------------------------

class SuperElem:
    """(phi_0, phi_1) with phi_0 of degree 0 and phi_1 of degree 1."""

    __slots__ = ("even", "odd")

    def __init__(self, even: MPoly, odd: MPoly):
        self.even = even
        self.odd = odd

    @property
    def ctx(self):
        return self.even.ctx

    def __add__(self, other):
        return SuperElem(self.even + other.even, self.odd + other.odd)

    def __sub__(self, other):
        return SuperElem(self.even - other.even, self.odd - other.odd)

    def __neg__(self):
        return SuperElem(-self.even, -self.odd)

    def scale(self, c) -> "SuperElem":
        """Multiply by a scalar (CycNum, MoyalScalar or constant MPoly)."""
        return SuperElem(self.even * c, self.odd * c)

    def __eq__(self, other):
        if not isinstance(other, SuperElem):
            return NotImplemented
        return self.even == other.even and self.odd == other.odd

    def is_zero(self) -> bool:
        return self.even.is_zero() and self.odd.is_zero()

    def degree(self):
        """0, 1, or None for zero; raises for mixed elements."""
        if self.odd.is_zero():
            return None if self.even.is_zero() else 0
        if self.even.is_zero():
            return 1
        raise MoyalError("element is not homogeneous")

    def star_conj(self) -> "SuperElem":
        """The involution (phi_0^dagger, phi_1^dagger)."""
        return SuperElem(self.even.conj(), self.odd.conj())

    def __repr__(self):
        return f"({format_mpoly(self.even)}, {format_mpoly(self.odd)})"


def super_make(ctx, even=None, odd=None) -> SuperElem:
    return SuperElem(even if even is not None else ctx.zero(), odd if odd is not None else ctx.zero())


def super_mul(phi: SuperElem, psi: SuperElem, ctx=None) -> SuperElem:
    """(a,b)(c,d) = (a*c + alpha b*d, a*d + b*c)."""
    ctx = ctx or phi.ctx
    a, b, c, d = phi.even, phi.odd, psi.even, psi.odd
    return SuperElem(star(a, c) + ctx.alpha() * star(b, d), star(a, d) + star(b, c))


def super_bracket(phi: SuperElem, psi: SuperElem, ctx=None) -> SuperElem:
    """[phi,psi]_eps = ([p0,q0] + alpha {p1,q1}, [p0,q1] + [p1,q0]), eps(i,j) = (-1)^{ij}."""
    ctx = ctx or phi.ctx
    e = commutator(phi.even, psi.even) + ctx.alpha() * anticommutator(phi.odd, psi.odd)
    o = commutator(phi.even, psi.odd) + commutator(phi.odd, psi.even)
    return SuperElem(e, o)


def super_bracket_graded(phi: SuperElem, psi: SuperElem, ctx=None) -> SuperElem:
    """phi psi - eps(|phi|,|psi|) psi phi, summed over homogeneous parts (independent path)."""
    ctx = ctx or phi.ctx
    z = ctx.zero()
    parts = lambda s: [(0, SuperElem(s.even, z)), (1, SuperElem(z, s.odd))]
    out = SuperElem(z, z)
    for dp, p in parts(phi):
        for dq, q in parts(psi):
            t = super_mul(p, q, ctx) - super_mul(q, p, ctx).scale(ctx.field.rational((-1) ** (dp * dq)))
            out = out + t
    return out


# --- the Lie algebra g of inner derivations ------------------------------------------

def g_labels(ctx: MoyalContext) -> list:
    """Labels of the generators: ('gamma',), ('xi0', m), ('xi1', m), ('eta', m, n) with m <= n."""
    D = ctx.D
    out = [("gamma",)]
    out += [("xi0", m) for m in range(D)]
    out += [("xi1", m) for m in range(D)]
    out += [("eta", m, n) for m in range(D) for n in range(m, D)]
    return out


def g_degree(label) -> int:
    return 1 if label[0] in ("gamma", "xi1") else 0


def g_element(ctx: MoyalContext, label) -> SuperElem:
    """(0, i gamma), (i xi_m, 0), (0, i xi_m), (i eta_mn, 0)."""
    gamma, xi, eta = generators(ctx)
    i = ctx.i
    kind = label[0]
    if kind == "gamma":
        return super_make(ctx, odd=gamma * i)
    if kind == "xi0":
        return super_make(ctx, even=xi[label[1]] * i)
    if kind == "xi1":
        return super_make(ctx, odd=xi[label[1]] * i)
    if kind == "eta":
        return super_make(ctx, even=eta[label[1]][label[2]] * i)
    raise MoyalError(f"unknown generator {label!r}")


def canon_label(label):
    if label[0] == "eta" and label[1] > label[2]:
        return ("eta", label[2], label[1])
    return tuple(label)


def _in_xtilde(ctx: MoyalContext, p: MPoly) -> dict:
    """Rewrite a polynomial of degree <= 2 in the variables x~: returns
    {(): c0, (m,): c_m, (m, n): c_mn (m <= n)} with constant MPoly coefficients."""
    D = ctx.D
    # x_n = (1/2) Theta_{n l} x~_l
    sub = {}
    for n in range(D):
        row = {}
        for l in range(D):
            if ctx.Sigma[n][l]:
                row[l] = ctx.theta(n, l) * ctx.half
        sub[n] = row
    out: dict = {}

    def put(key, c):
        out[key] = out.get(key, ctx.zero()) + c

    for xs, coeff in p.by_monomial().items():
        c = MPoly.from_moyal_scalar(ctx, coeff)
        deg = sum(xs)
        if deg == 0:
            put((), c)
        elif deg == 1:
            n = xs.index(1)
            for l, s in sub[n].items():
                put((l,), c * s)
        elif deg == 2:
            vs = [m for m in range(D) for _ in range(xs[m])]
            for l1, s1 in sub[vs[0]].items():
                for l2, s2 in sub[vs[1]].items():
                    put(tuple(sorted((l1, l2))), c * s1 * s2)
        else:
            raise MoyalError("element leaves the span of the generators")
    return {k: v for k, v in out.items() if not v.is_zero()}


def decompose_g(ctx: MoyalContext, s: SuperElem):
    """Write s = (c, 0) + sum_g coeff_g g with c constant; coefficients are constant MPolys.

    Constants (c, 0) are eps-central, so ad of them vanishes."""
    i = ctx.i
    coeffs: dict = {}
    const = ctx.zero()
    for key, c in _in_xtilde(ctx, s.even).items():
        if key == ():
            const = const + c
        elif len(key) == 1:
            # c x~ = -2c xi = 2ic (i xi)
            coeffs[("xi0", key[0])] = c * (i * 2)
        else:
            # c x~_m x~_n = 2c eta_mn = -2ic (i eta)
            coeffs[("eta",) + key] = c * (-i * 2)
    for key, c in _in_xtilde(ctx, s.odd).items():
        if key == ():
            coeffs[("gamma",)] = c * (-i)
        elif len(key) == 1:
            coeffs[("xi1", key[0])] = c * (i * 2)
        else:
            raise MoyalError("odd quadratic terms are not in g")
    return const, {k: v for k, v in coeffs.items() if not v.is_zero()}


# --- printed and corrected closed forms -------------------------------------------------

BRACKET_TYPES = [
    (("gamma",), ("gamma",)),
    (("xi0", "m"), ("gamma",)),
    (("xi1", "m"), ("gamma",)),
    (("eta", "m", "n"), ("gamma",)),
    (("xi0", "m"), ("xi0", "n")),
    (("xi0", "m"), ("xi1", "n")),
    (("xi1", "m"), ("xi1", "n")),
    (("eta", "m", "n"), ("xi0", "r")),
    (("eta", "m", "n"), ("xi1", "r")),
    (("eta", "m", "n"), ("eta", "r", "s")),
]


def _instances(ctx, kind):
    """All index assignments for one bracket type."""
    import itertools
    names = []
    for lab in kind:
        for t in lab[1:]:
            if t not in names:
                names.append(t)
    for vals in itertools.product(range(ctx.D), repeat=len(names)):
        env = dict(zip(names, vals))
        yield tuple(tuple([lab[0]] + [env[t] for t in lab[1:]]) for lab in kind), env


def bracket_closed_form(ctx: MoyalContext, entry: int, env: dict, corrected: bool = False) -> SuperElem:
    """Right-hand side of bracket-table entry ``entry`` (0-based) at indices env.

    ``corrected`` replaces the factor i/2 of the last three entries by 2i,
    the value the calculation rules actually give."""
    gamma, xi, eta = generators(ctx)
    i, a = ctx.i, ctx.alpha()
    ti = ctx.theta_inv
    z = ctx.zero()
    m, n, r, s = (env.get(k) for k in ("m", "n", "r", "s"))
    h = i * 2 if corrected else i * ctx.half
    if entry == 0:
        return SuperElem(a * -2, z)
    if entry == 1:
        return SuperElem(z, z)
    if entry == 2:
        return SuperElem(a * xi[m] * -2, z)
    if entry == 3:
        return SuperElem(z, z)
    if entry == 4:
        return SuperElem(ti(m, n) * i, z)
    if entry == 5:
        return SuperElem(z, ti(m, n) * gamma * i)
    if entry == 6:
        return SuperElem(-(a * eta[m][n]), z)
    if entry == 7:
        return SuperElem((xi[m] * ti(n, r) + xi[n] * ti(m, r)) * h, z)
    if entry == 8:
        return SuperElem(z, (xi[m] * ti(n, r) + xi[n] * ti(m, r)) * h)
    if entry == 9:
        return SuperElem((eta[m][r] * ti(n, s) + eta[m][s] * ti(n, r)
                          + eta[n][r] * ti(m, s) + eta[n][s] * ti(m, r)) * h, z)
    raise MoyalError("bracket table has entries 0..9")


def g_bracket_table(ctx: MoyalContext) -> list:
    """Each entry: computed bracket vs printed and corrected closed forms over all indices."""
    rows = []
    for e, kind in enumerate(BRACKET_TYPES):
        printed_ok = corrected_ok = True
        count = 0
        for labels, env in _instances(ctx, kind):
            X = g_element(ctx, labels[0])
            Y = g_element(ctx, labels[1])
            val = super_bracket(X, Y, ctx)
            count += 1
            if val != bracket_closed_form(ctx, e, env, False):
                printed_ok = False
            if val != bracket_closed_form(ctx, e, env, True):
                corrected_ok = False
        rows.append({"entry": e + 1, "pair": [list(k) for k in kind], "instances": count,
                     "printed": printed_ok, "corrected": corrected_ok})
    return rows


# --- calculation rules ----------------------------------------------------------------

def relations_check(ctx: MoyalContext, a: MPoly, b: MPoly) -> dict:
    """The four basic identities; 'xx_printed' uses the coefficient i/2, 'xx' uses 2i."""
    D = ctx.D
    xt = [xtilde(ctx, m) for m in range(D)]
    i = ctx.i
    out = {"leibniz": True, "xt_commutator": True, "xt_anticommutator": True,
           "xx_printed": True, "xx": True}
    ab = star(a, b)
    for m in range(D):
        if ab.deriv(m) != star(a.deriv(m), b) + star(a, b.deriv(m)):
            out["leibniz"] = False
        if commutator(xt[m], a) != a.deriv(m) * (i * 2):
            out["xt_commutator"] = False
        if anticommutator(xt[m], a) != xt[m] * a * 2:
            out["xt_anticommutator"] = False
        for n in range(D):
            lhs = commutator(xt[m] * xt[n], a)
            rhs = xt[m] * a.deriv(n) + xt[n] * a.deriv(m)
            if lhs != rhs * (i * ctx.half):
                out["xx_printed"] = False
            if lhs != rhs * (i * 2):
                out["xx"] = False
    return out


def calcrules_check(ctx: MoyalContext, phi: MPoly) -> dict:
    gamma, xi, eta = generators(ctx)
    i = ctx.i
    D = ctx.D
    out = {"gamma_commutator": commutator(gamma * i, phi).is_zero(),
           "gamma_anticommutator": anticommutator(gamma * i, phi) == gamma * phi * (i * 2),
           "xi_commutator": True, "xi_anticommutator": True, "eta_printed": True, "eta": True}
    for m in range(D):
        if commutator(xi[m] * i, phi) != phi.deriv(m):
            out["xi_commutator"] = False
        if anticommutator(xi[m] * i, phi) != xi[m] * phi * (i * 2):
            out["xi_anticommutator"] = False
        for n in range(D):
            lhs = commutator(eta[m][n] * i, phi)
            rhs = xi[m] * phi.deriv(n) + xi[n] * phi.deriv(m)
            if lhs != rhs * ctx.half:
                out["eta_printed"] = False
            if lhs != rhs * 2:
                out["eta"] = False
    return out


def epsilon_jacobi(ctx, a: SuperElem, b: SuperElem, c: SuperElem) -> bool:
    """eps(|c|,|a|)[a,[b,c]] + eps(|a|,|b|)[b,[c,a]] + eps(|b|,|c|)[c,[a,b]] = 0 for homogeneous a, b, c."""
    da, db, dc = (x.degree() or 0 for x in (a, b, c))
    sg = lambda p, q: ctx.field.rational((-1) ** (p * q))
    br = lambda x, y: super_bracket(x, y, ctx)
    tot = (br(a, br(b, c)).scale(sg(dc, da)) + br(b, br(c, a)).scale(sg(da, db))
           + br(c, br(a, b)).scale(sg(db, dc)))
    return tot.is_zero()


def reality_check_g(ctx, label, samples) -> bool:
    """ad_g is real: (X(a))^* = eps(|a|,|X|) X(a^*) for homogeneous samples a (X has X_{-k} = X_k in Z2)."""
    X = g_element(ctx, label)
    dX = g_degree(label)
    for a in samples:
        da = a.degree() or 0
        lhs = super_bracket(X, a, ctx).star_conj()
        rhs = super_bracket(X, a.star_conj(), ctx).scale(ctx.field.rational((-1) ** (da * dX)))
        if lhs != rhs:
            return False
    return True


# --- gauge potentials and curvature --------------------------------------------------------

class MoyalFields:
    """A0_m, A1_m, phi and symmetric G_mn as polynomials."""

    def __init__(self, ctx, A0, A1, phi, G):
        self.ctx = ctx
        self.A0 = list(A0)
        self.A1 = list(A1)
        self.phi = phi
        D = ctx.D
        self.G = [[None] * D for _ in range(D)]
        for m in range(D):
            for n in range(D):
                if isinstance(G, dict):
                    g = G.get((m, n)) if (m, n) in G else G.get((n, m))
                else:
                    g = G[m][n]
                self.G[m][n] = g if g is not None else ctx.zero()

    @classmethod
    def zero(cls, ctx):
        z = ctx.zero()
        return cls(ctx, [z] * ctx.D, [z] * ctx.D, z, [[z] * ctx.D for _ in range(ctx.D)])

    @classmethod
    def random(cls, ctx, rng, degree: int = 2, density: float = 0.6):
        D = ctx.D
        mk = lambda: random_poly(ctx, rng, degree, density)
        G = {}
        for m in range(D):
            for n in range(m, D):
                G[(m, n)] = mk()
        return cls(ctx, [mk() for _ in range(D)], [mk() for _ in range(D)], mk(), G)

    def potential(self, label) -> SuperElem:
        """A_X from nabla(1)(ad_X) = -i A_X."""
        ctx = self.ctx
        kind = label[0]
        if kind == "gamma":
            return super_make(ctx, odd=self.phi)
        if kind == "xi0":
            return super_make(ctx, even=self.A0[label[1]])
        if kind == "xi1":
            return super_make(ctx, odd=self.A1[label[1]])
        return super_make(ctx, even=self.G[label[1]][label[2]])

    def to_json(self):
        D = self.ctx.D
        return {"A0": [str(p) for p in self.A0], "A1": [str(p) for p in self.A1], "phi": str(self.phi),
                "G": [[str(self.G[m][n]) for n in range(D)] for m in range(D)]}

    @classmethod
    def from_json(cls, ctx, obj):
        P = lambda t: MPoly.parse(ctx, t)
        D = ctx.D
        G = obj.get("G", [["0"] * D for _ in range(D)])
        return cls(ctx, [P(t) for t in obj["A0"]], [P(t) for t in obj["A1"]], P(obj["phi"]),
                   [[P(t) for t in row] for row in G])


def random_poly(ctx, rng, degree=2, density=0.6, complex_coeffs=True) -> MPoly:
    import itertools
    fld = ctx.field
    terms = {}
    for xs in itertools.product(range(degree + 1), repeat=ctx.D):
        if sum(xs) > degree or rng.random() > density:
            continue
        c = fld.rational(rng.choice((-3, -2, -1, 1, 2, 3)))
        if complex_coeffs and rng.random() < 0.3:
            c = c * fld.i
        p = rng.choice((-1, 0, 0, 1))
        q = rng.choice((0, 0, 1))
        terms[(xs, p, q)] = c
    return MPoly(ctx, terms)


def _potential_combo(fields, coeffs) -> SuperElem:
    ctx = fields.ctx
    out = super_make(ctx)
    for lab, c in coeffs.items():
        out = out + fields.potential(lab).scale(c)
    return out


def curvature_abstract(fields: MoyalFields, X, Y) -> SuperElem:
    """F_{X,Y} = X(A_Y) - eps Y(A_X) - i [A_X, A_Y]_eps - A_{[X,Y]}."""
    ctx = fields.ctx
    a, b = g_element(ctx, X), g_element(ctx, Y)
    AX, AY = fields.potential(X), fields.potential(Y)
    e = ctx.field.rational((-1) ** (g_degree(X) * g_degree(Y)))
    _, coeffs = decompose_g(ctx, super_bracket(a, b, ctx))
    out = super_bracket(a, AY, ctx) - super_bracket(b, AX, ctx).scale(e)
    out = out - super_bracket(AX, AY, ctx).scale(ctx.i)
    return out - _potential_combo(fields, coeffs)


def curvature_from_connection(fields: MoyalFields, X, Y) -> SuperElem:
    """i R(1)(X,Y) from nabla(b)(X) = eps(|b|,|X|) (nabla(1)(X) b + X(b)), nabla(1)(X) = -i A_X."""
    ctx = fields.ctx
    i = ctx.i
    sg = lambda p, q: ctx.field.rational((-1) ** (p * q))
    dX, dY = g_degree(X), g_degree(Y)

    def nab1(lab):
        return fields.potential(lab).scale(-i)

    def nabla(b: SuperElem, lab) -> SuperElem:
        z = ctx.zero()
        out = super_make(ctx)
        for db, part in ((0, SuperElem(b.even, z)), (1, SuperElem(z, b.odd))):
            if part.is_zero():
                continue
            t = super_mul(nab1(lab), part, ctx) + super_bracket(g_element(ctx, lab), part, ctx)
            out = out + t.scale(sg(db, g_degree(lab)))
        return out

    _, coeffs = decompose_g(ctx, super_bracket(g_element(ctx, X), g_element(ctx, Y), ctx))
    t1 = nabla(nab1(Y), X).scale(sg(dX, dY))
    t2 = nabla(nab1(X), Y)
    t3 = super_make(ctx)
    for lab, c in coeffs.items():
        t3 = t3 + nab1(lab).scale(c)
    R = t1 - t2 - t3
    return R.scale(i)


CURVATURE_TYPES = BRACKET_TYPES[:4] + BRACKET_TYPES[4:7] + [
    (("xi0", "m"), ("eta", "n", "r")),
    (("xi1", "m"), ("eta", "n", "r")),
    (("eta", "m", "n"), ("eta", "r", "s")),
]


def curvature_moy1(fields: MoyalFields, entry: int, env: dict, corrected: bool = False) -> SuperElem:
    """Closed forms in terms of the fields (printed, or with the misprints fixed)."""
    ctx = fields.ctx
    i, a = ctx.i, ctx.alpha()
    ti = ctx.theta_inv
    xt = [xtilde(ctx, m) for m in range(ctx.D)]
    z = ctx.zero()
    A0, A1, phi, G = fields.A0, fields.A1, fields.phi, fields.G
    m, n, r, s = (env.get(k) for k in ("m", "n", "r", "s"))
    C, AC = commutator, anticommutator
    if entry == 0:
        first = (a * phi * (i * 4)) if corrected else (a * phi * (i * 2))
        return SuperElem(first - a * star(phi, phi) * (i * 2), z)
    if entry == 1:
        return SuperElem(z, phi.deriv(m) - C(A0[m], phi) * i)
    if entry == 2:
        return SuperElem(-(a * xt[m] * phi * i) - a * AC(A1[m], phi) * i + a * (A1[m] - A0[m]) * (i * 2), z)
    if entry == 3:
        c = ctx.field.one if corrected else ctx.field.rational(Fraction(1, 4))
        return SuperElem(z, -(xt[m] * phi.deriv(n) * c) - xt[n] * phi.deriv(m) * c - C(G[m][n], phi) * i)
    if entry == 4:
        return SuperElem(A0[n].deriv(m) - A0[m].deriv(n) - C(A0[m], A0[n]) * i, z)
    if entry == 5:
        return SuperElem(z, A1[n].deriv(m) - A0[m].deriv(n) - C(A0[m], A1[n]) * i - ti(m, n) * phi)
    if entry == 6:
        return SuperElem(-(a * xt[m] * A1[n] * i) - a * xt[n] * A1[m] * i - a * AC(A1[m], A1[n]) * i
                         - a * G[m][n] * i, z)
    if entry in (7, 8):
        Am = (A0 if entry == 7 else A1)
        val = (G[n][r].deriv(m) + xt[n] * Am[m].deriv(r) + xt[r] * Am[m].deriv(n) - C(Am[m], G[n][r]) * i
               + ti(n, m) * Am[r] * 2 + ti(r, m) * Am[n] * 2)
        return SuperElem(val, z) if entry == 7 else SuperElem(z, val)
    if entry == 9:
        val = (-(xt[m] * G[r][s].deriv(n)) - xt[n] * G[r][s].deriv(m) + xt[r] * G[m][n].deriv(s)
               + xt[s] * G[m][n].deriv(r) - C(G[m][n], G[r][s]) * i
               - ti(m, r) * G[n][s] * 2 - ti(n, r) * G[m][s] * 2 - ti(m, s) * G[n][r] * 2 - ti(n, s) * G[m][r] * 2)
        return SuperElem(val, z)
    raise MoyalError("curvature table has entries 0..9")


def covariant_coordinates(fields: MoyalFields):
    """(A0 + x~/2, A1 + x~/2, phi - 1, G - x~ x~ / 2)."""
    ctx = fields.ctx
    D = ctx.D
    xt = [xtilde(ctx, m) for m in range(D)]
    h = ctx.half
    cA0 = [fields.A0[m] + xt[m] * h for m in range(D)]
    cA1 = [fields.A1[m] + xt[m] * h for m in range(D)]
    Phi = fields.phi - ctx.const(1)
    cG = [[fields.G[m][n] - xt[m] * xt[n] * h for n in range(D)] for m in range(D)]
    return cA0, cA1, Phi, cG


def curvature_moy2(fields: MoyalFields, entry: int, env: dict) -> SuperElem:
    """Closed forms in the covariant coordinates."""
    ctx = fields.ctx
    i, a = ctx.i, ctx.alpha()
    ti = ctx.theta_inv
    z = ctx.zero()
    A0, A1, Phi, G = covariant_coordinates(fields)
    m, n, r, s = (env.get(k) for k in ("m", "n", "r", "s"))
    C, AC = commutator, anticommutator
    if entry == 0:
        return SuperElem(a * (i * 2) - a * star(Phi, Phi) * (i * 2), z)
    if entry == 1:
        return SuperElem(z, -(C(A0[m], Phi) * i))
    if entry == 2:
        return SuperElem(-(a * AC(A1[m], Phi) * i) - a * A0[m] * (i * 2), z)
    if entry == 3:
        return SuperElem(z, -(C(G[m][n], Phi) * i))
    if entry == 4:
        return SuperElem(ti(m, n) - C(A0[m], A0[n]) * i, z)
    if entry == 5:
        return SuperElem(z, -(C(A0[m], A1[n]) * i) - ti(m, n) * Phi)
    if entry == 6:
        return SuperElem(-(a * AC(A1[m], A1[n]) * i) - a * G[m][n] * i, z)
    if entry in (7, 8):
        Am = (A0 if entry == 7 else A1)
        val = -(C(Am[m], G[n][r]) * i) + ti(n, m) * Am[r] * 2 + ti(r, m) * Am[n] * 2
        return SuperElem(val, z) if entry == 7 else SuperElem(z, val)
    if entry == 9:
        val = (-(C(G[m][n], G[r][s]) * i) - ti(m, r) * G[n][s] * 2 - ti(n, r) * G[m][s] * 2
               - ti(m, s) * G[n][r] * 2 - ti(n, s) * G[m][r] * 2)
        return SuperElem(val, z)
    raise MoyalError("curvature table has entries 0..9")


def gauge_curvature(fields: MoyalFields, ctx=None) -> list:
    """Per curvature entry: agreement of the abstract formula with the connection
    computation, the printed and corrected closed forms, and the covariant forms."""
    ctx = ctx or fields.ctx
    rows = []
    for e, kind in enumerate(CURVATURE_TYPES):
        row = {"entry": e + 1, "pair": [list(k) for k in kind], "instances": 0,
               "connection": True, "moy1_printed": True, "moy1": True, "moy2": True}
        for labels, env in _instances(ctx, kind):
            X, Y = labels
            F = curvature_abstract(fields, X, Y)
            row["instances"] += 1
            if curvature_from_connection(fields, X, Y) != F:
                row["connection"] = False
            if curvature_moy1(fields, e, env, False) != F:
                row["moy1_printed"] = False
            if curvature_moy1(fields, e, env, True) != F:
                row["moy1"] = False
            if curvature_moy2(fields, e, env) != F:
                row["moy2"] = False
        rows.append(row)
    return rows


# --- gauge transformations by constant unitaries --------------------------------------------

def gauge_transform_fields(g, fields: MoyalFields, ctx=None) -> MoyalFields:
    """Transformed fields for a constant g with g conj(g) = 1."""
    ctx = ctx or fields.ctx
    g = ctx.field.coerce(g)
    if not (g * g.conj()).is_one():
        raise MoyalError("g must be unitary")
    D = ctx.D
    G = MPoly.scalar(ctx, g)
    Gd = G.conj()
    xt = [xtilde(ctx, m) for m in range(D)]
    i = ctx.i
    conj3 = lambda p: star(star(G, p), Gd)
    A0 = [conj3(fields.A0[m]) + star(G, Gd.deriv(m)) * i for m in range(D)]
    A1 = [conj3(fields.A1[m]) + star(G, Gd.deriv(m)) * i for m in range(D)]
    phi = conj3(fields.phi)
    quarter = ctx.field.rational(Fraction(1, 4))
    Gm = [[conj3(fields.G[m][n]) - star(G, xt[m] * Gd.deriv(n)) * (i * quarter)
           - star(G, xt[n] * Gd.deriv(m)) * (i * quarter) for n in range(D)] for m in range(D)]
    return MoyalFields(ctx, A0, A1, phi, Gm)


def gauge_covariance_check(g, fields: MoyalFields) -> bool:
    """F^g = g F g^* on every curvature entry."""
    ctx = fields.ctx
    gf = gauge_transform_fields(g, fields)
    gs = super_make(ctx, even=MPoly.scalar(ctx, ctx.field.coerce(g)))
    gd = gs.star_conj()
    for kind in CURVATURE_TYPES:
        for (X, Y), _ in _instances(ctx, kind):
            lhs = curvature_abstract(gf, X, Y)
            rhs = super_mul(super_mul(gs, curvature_abstract(fields, X, Y), ctx), gd, ctx)
            if lhs != rhs:
                return False
    return True
