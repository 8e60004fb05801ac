"""Finite-dimensional eps-graded algebras given by structure constants.

Vectors are sparse dicts ``{basis index: CycNum}``; :class:`AlgElem` wraps
such a dict together with its algebra for user-facing arithmetic.
"""

from __future__ import annotations

import itertools

from . import linalg
from .groups import CommFactor, FactorError, FinAbGroup
from .scalars import CycNum, field, format_cyc, parse_cyc


class AlgebraError(ValueError):
    """Structure constants violate an algebra axiom."""

    def __init__(self, message, violated=None, at=None):
        super().__init__(message)
        self.violated = violated
        self.at = at

    def as_dict(self):
        return {"violated": self.violated, "at": list(self.at) if self.at is not None else None}


# --- sparse vector helpers --------------------------------------------------

def vadd(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, c in v.items():
        w = out.get(k)
        w = c if w is None else w + c
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def vsub(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, c in v.items():
        w = out.get(k)
        w = -c if w is None else w - c
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def vscale(c, v: dict) -> dict:
    if not c:
        return {}
    if isinstance(c, CycNum) and c.is_one():
        return dict(v)
    return {k: c * x for k, x in v.items() if c * x}


def vaxpy(acc: dict, c, v: dict) -> None:
    """acc += c*v in place."""
    if not c:
        return
    for k, x in v.items():
        w = acc.get(k)
        w = c * x if w is None else w + c * x
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)


class EpsAlgebra:
    """Associative unital Gamma-graded algebra with a commutation factor."""

    def __init__(self, factor: CommFactor, degrees, constants, unit,
                 involution=None, label: str = "", names=None, validate: bool = True):
        self.factor = factor
        self.group: FinAbGroup = factor.group
        self.field = factor.field
        self.degrees = [self.group.reduce(d) for d in degrees]
        self.dim = n = len(self.degrees)
        fld = self.field
        mult: list[list[dict]] = [[{} for _ in range(n)] for _ in range(n)]
        if isinstance(constants, dict):
            items = ((i, j, k, c) for (i, j, k), c in constants.items())
        else:
            items = constants
        for i, j, k, c in items:
            c = fld.coerce(c)
            if c:
                mult[i][j][k] = mult[i][j].get(k, fld.zero) + c
        self.mult = [[{k: c for k, c in d.items() if c} for d in row] for row in mult]
        self.unit = {k: fld.coerce(c) for k, c in dict(unit).items() if c}
        self.involution = None
        if involution is not None:
            self.involution = [{k: fld.coerce(c) for k, c in dict(col).items() if c}
                               for col in involution]
        self.label = label
        self.names = list(names) if names else [f"x{i}" for i in range(n)]
        self._by_degree: dict = {}
        for i, d in enumerate(self.degrees):
            self._by_degree.setdefault(d, []).append(i)
        if validate:
            self.validate()

    # --- structure -----------------------------------------------------
    def basis_of_degree(self, d) -> list:
        return self._by_degree.get(self.group.reduce(d), [])

    def support(self) -> list:
        return sorted(self._by_degree)

    def eps(self, a, b) -> CycNum:
        return self.factor(a, b)

    def deg_of(self, v: dict):
        """Degree of a homogeneous nonzero vector, None for zero; raises if inhomogeneous."""
        ds = {self.degrees[k] for k in v}
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError("element is not homogeneous")
        return ds.pop()

    def homogeneous_parts(self, v: dict) -> dict:
        out: dict = {}
        for k, c in v.items():
            out.setdefault(self.degrees[k], {})[k] = c
        return out

    def validate(self):
        n = self.dim
        G = self.group
        for i in range(n):
            for j in range(n):
                want = G.add(self.degrees[i], self.degrees[j])
                for k in self.mult[i][j]:
                    if self.degrees[k] != want:
                        raise AlgebraError(
                            f"x{i}*x{j} has a component on x{k} of degree {self.degrees[k]}, expected {want}",
                            "grading", (i, j, k))
        for i in range(n):
            e = {i: self.field.one}
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                raise AlgebraError(f"unit fails on x{i}", "unit", (i,))
        for d in self.degrees_of(self.unit):
            if d != G.zero():
                raise AlgebraError("unit is not of degree 0", "unit degree", None)
        for i in range(n):
            for j in range(n):
                ij = self.mult[i][j]
                for k in range(n):
                    lhs: dict = {}
                    for m, c in ij.items():
                        vaxpy(lhs, c, self.mult[m][k])
                    rhs: dict = {}
                    for m, c in self.mult[j][k].items():
                        vaxpy(rhs, c, self.mult[i][m])
                    if lhs != rhs:
                        raise AlgebraError(f"associativity fails on (x{i},x{j},x{k})",
                                           "associativity", (i, j, k))
        if self.involution is not None:
            if len(self.involution) != n:
                raise AlgebraError("involution table has wrong size", "involution", None)
            if not self.involution_check():
                raise AlgebraError("involution axioms fail", "involution", None)

    def degrees_of(self, v: dict) -> set:
        return {self.degrees[k] for k in v}

    # --- arithmetic on sparse vectors ---------------------------------------
    def mul(self, u: dict, v: dict) -> dict:
        out: dict = {}
        mult = self.mult
        for i, a in u.items():
            row = mult[i]
            for j, b in v.items():
                cs = row[j]
                if cs:
                    vaxpy(out, a * b, cs)
        return out

    def bracket(self, u: dict, v: dict) -> dict:
        """eps-bracket, extended bilinearly over homogeneous parts."""
        out: dict = {}
        pu = self.homogeneous_parts(u)
        pv = self.homogeneous_parts(v)
        for du, hu in pu.items():
            for dv, hv in pv.items():
                out = vadd(out, self.mul(hu, hv))
                out = vsub(out, vscale(self.eps(du, dv), self.mul(hv, hu)))
        return out

    def basis_vec(self, i: int) -> dict:
        return {i: self.field.one}

    def elem(self, v) -> "AlgElem":
        if isinstance(v, AlgElem):
            return v
        if isinstance(v, int):
            return AlgElem(self, vscale(self.field.rational(v), self.unit))
        return AlgElem(self, dict(v))

    def one(self) -> "AlgElem":
        return AlgElem(self, dict(self.unit))

    def basis(self) -> list:
        return [AlgElem(self, self.basis_vec(i)) for i in range(self.dim)]

    def star(self, v: dict) -> dict:
        """Antilinear involution applied to a vector."""
        if self.involution is None:
            raise AlgebraError("algebra has no involution", "missing involution", None)
        out: dict = {}
        for k, c in v.items():
            vaxpy(out, c.conj(), self.involution[k])
        return out

    # --- linear maps -------------------------------------------------------
    def left_mult_cols(self, u: dict) -> list:
        return [self.mul(u, self.basis_vec(j)) for j in range(self.dim)]

    def ad_cols(self, u: dict) -> list:
        """Columns of ad_u = [u, .]_eps."""
        return [self.bracket(u, self.basis_vec(j)) for j in range(self.dim)]

    def involution_check(self) -> bool:
        if self.involution is None:
            raise AlgebraError("algebra has no involution", "missing involution", None)
        G = self.group
        n = self.dim
        for i in range(n):
            e = self.basis_vec(i)
            s = self.star(e)
            if self.star(s) != e:
                return False
            if any(self.degrees[k] != G.neg(self.degrees[i]) for k in s):
                return False
        for i in range(n):
            for j in range(n):
                lhs = self.star(self.mul(self.basis_vec(i), self.basis_vec(j)))
                rhs = self.mul(self.star(self.basis_vec(j)), self.star(self.basis_vec(i)))
                if lhs != rhs:
                    return False
        return True

    def is_unitary(self, g) -> bool:
        g = g.coords if isinstance(g, AlgElem) else g
        return self.mul(self.star(g), g) == self.unit and self.mul(g, self.star(g)) == self.unit

    # --- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        cons = []
        for i in range(self.dim):
            for j in range(self.dim):
                for k in sorted(self.mult[i][j]):
                    cons.append([i, j, k, format_cyc(self.mult[i][j][k])])
        obj = {
            "label": self.label,
            "factor": self.factor.to_json(),
            "degrees": [list(d) for d in self.degrees],
            "names": self.names,
            "constants": cons,
            "unit": [[k, format_cyc(c)] for k, c in sorted(self.unit.items())],
        }
        if self.involution is not None:
            obj["involution"] = [[[k, format_cyc(c)] for k, c in sorted(col.items())]
                                 for col in self.involution]
        return obj

    @classmethod
    def from_json(cls, obj) -> "EpsAlgebra":
        factor = CommFactor.from_json(obj["factor"])
        N = factor.field.N
        cons = [(i, j, k, parse_cyc(str(c), N)) for i, j, k, c in obj["constants"]]
        unit = {k: parse_cyc(str(c), N) for k, c in obj["unit"]}
        inv = None
        if "involution" in obj:
            inv = [{k: parse_cyc(str(c), N) for k, c in col} for col in obj["involution"]]
        return cls(factor, [tuple(d) for d in obj["degrees"]], cons, unit, inv,
                   label=obj.get("label", ""), names=obj.get("names"))

    def fmt(self, v: dict) -> str:
        if not v:
            return "0"
        parts = []
        for k in sorted(v):
            c = format_cyc(v[k])
            if c == "1":
                parts.append(self.names[k])
            elif c == "-1":
                parts.append("-" + self.names[k])
            elif "+" in c or " - " in c:
                parts.append(f"({c})*{self.names[k]}")
            else:
                parts.append(f"{c}*{self.names[k]}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"EpsAlgebra({self.label or 'unnamed'}, dim={self.dim}, group={self.group})"


def algebra_make(factor, degrees, constants, unit, involution=None, label="", names=None) -> EpsAlgebra:
    return EpsAlgebra(factor, degrees, constants, unit, involution, label, names)


class AlgElem:
    """Element of an EpsAlgebra."""

    __slots__ = ("owner", "coords")

    def __init__(self, owner: EpsAlgebra, coords: dict):
        self.owner = owner
        self.coords = {k: c for k, c in coords.items() if c}

    def _same(self, other):
        if isinstance(other, AlgElem):
            if other.owner is not self.owner:
                raise AlgebraError("elements belong to different algebras", "owner", None)
            return other.coords
        return None

    def __add__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return AlgElem(self.owner, vadd(self.coords, o))

    def __sub__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return AlgElem(self.owner, vsub(self.coords, o))

    def __neg__(self):
        return AlgElem(self.owner, {k: -c for k, c in self.coords.items()})

    def __mul__(self, other):
        if isinstance(other, AlgElem):
            o = self._same(other)
            return AlgElem(self.owner, self.owner.mul(self.coords, o))
        c = self.owner.field.coerce(other)
        return AlgElem(self.owner, vscale(c, self.coords))

    def __rmul__(self, other):
        c = self.owner.field.coerce(other)
        return AlgElem(self.owner, vscale(c, self.coords))

    def __eq__(self, other):
        if isinstance(other, AlgElem):
            return self.owner is other.owner and self.coords == other.coords
        if other == 0:
            return not self.coords
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coords.items()))

    def is_zero(self):
        return not self.coords

    @property
    def degree(self):
        return self.owner.deg_of(self.coords)

    def parts(self) -> dict:
        return {d: AlgElem(self.owner, v) for d, v in self.owner.homogeneous_parts(self.coords).items()}

    def star(self) -> "AlgElem":
        return AlgElem(self.owner, self.owner.star(self.coords))

    def __repr__(self):
        return f"AlgElem({self.owner.fmt(self.coords)})"

    __str__ = lambda self: self.owner.fmt(self.coords)


def bracket(a: AlgElem, b: AlgElem) -> AlgElem:
    if a.owner is not b.owner:
        raise AlgebraError("elements belong to different algebras", "owner", None)
    return AlgElem(a.owner, a.owner.bracket(a.coords, b.coords))


# --- linear maps and derivations ---------------------------------------------

class HomMap:
    """Homogeneous linear map A -> A given by its columns (images of basis vectors)."""

    def __init__(self, algebra: EpsAlgebra, degree, cols):
        self.algebra = algebra
        self.degree = algebra.group.reduce(degree)
        self.cols = [dict(c) for c in cols]

    def __call__(self, v: dict) -> dict:
        out: dict = {}
        for j, c in v.items():
            vaxpy(out, c, self.cols[j])
        return out

    def is_homogeneous(self) -> bool:
        A = self.algebra
        G = A.group
        for j, col in enumerate(self.cols):
            want = G.add(A.degrees[j], self.degree)
            if any(A.degrees[k] != want for k in col):
                return False
        return True

    def flat(self) -> dict:
        """Sparse vector indexed by (row, col) pairs flattened as row*n+col."""
        n = self.algebra.dim
        out = {}
        for j, col in enumerate(self.cols):
            for k, c in col.items():
                out[k * n + j] = c
        return out

    def is_zero(self) -> bool:
        return not any(self.cols)


class Derivation:
    """eps-derivation given by its homogeneous parts {degree: HomMap}."""

    def __init__(self, algebra: EpsAlgebra, parts):
        self.algebra = algebra
        if isinstance(parts, HomMap):
            parts = [parts]
        self.parts: dict = {}
        for p in parts:
            if p.degree in self.parts:
                cols = [vadd(a, b) for a, b in zip(self.parts[p.degree].cols, p.cols)]
                self.parts[p.degree] = HomMap(algebra, p.degree, cols)
            else:
                self.parts[p.degree] = p

    @classmethod
    def homogeneous(cls, algebra, degree, cols) -> "Derivation":
        return cls(algebra, [HomMap(algebra, degree, cols)])

    @classmethod
    def ad(cls, algebra: EpsAlgebra, u: dict) -> "Derivation":
        parts = [HomMap(algebra, d, algebra.ad_cols(h)) for d, h in algebra.homogeneous_parts(u).items()]
        return cls(algebra, parts)

    @property
    def degree(self):
        nz = [d for d, p in self.parts.items() if not p.is_zero()]
        if len(nz) > 1:
            raise ValueError("derivation is not homogeneous")
        if not nz:
            return next(iter(self.parts)) if self.parts else self.algebra.group.zero()
        return nz[0]

    @property
    def cols(self) -> list:
        return self.parts[self.degree].cols

    def __call__(self, v: dict) -> dict:
        out: dict = {}
        for p in self.parts.values():
            out = vadd(out, p(v))
        return out

    def leibniz_check(self) -> bool:
        A = self.algebra
        n = A.dim
        for d, X in self.parts.items():
            if not X.is_homogeneous():
                return False
            for i in range(n):
                ei = A.basis_vec(i)
                for j in range(n):
                    ej = A.basis_vec(j)
                    lhs = X(A.mul(ei, ej))
                    rhs = vadd(A.mul(X(ei), ej), vscale(A.eps(d, A.degrees[i]), A.mul(ei, X(ej))))
                    if lhs != rhs:
                        return False
        return True

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts.values())

    def scaled(self, c) -> "Derivation":
        return Derivation(self.algebra, [HomMap(self.algebra, d, [vscale(c, col) for col in p.cols])
                                         for d, p in self.parts.items()])

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.algebra, list(self.parts.values()) + list(other.parts.values()))

    def __sub__(self, other):
        return self + other.scaled(-self.algebra.field.one)

    def left_mul(self, z: dict) -> "Derivation":
        """(z.X)(a) = z.(X(a)) for z in the eps-center."""
        A = self.algebra
        parts = []
        for zd, zh in A.homogeneous_parts(z).items():
            for d, p in self.parts.items():
                cols = [A.mul(zh, col) for col in p.cols]
                parts.append(HomMap(A, A.group.add(zd, d), cols))
        return Derivation(A, parts)

    def right_mul(self, z: dict) -> "Derivation":
        """(X.z) = eps(|z|,|X|)^{-1} z.X, i.e. (X.z)(a) = eps(|X|,|z|) z.X(a)."""
        A = self.algebra
        parts = []
        for zd, zh in A.homogeneous_parts(z).items():
            for d, p in self.parts.items():
                f = A.eps(d, zd)
                cols = [vscale(f, A.mul(zh, col)) for col in p.cols]
                parts.append(HomMap(A, A.group.add(zd, d), cols))
        return Derivation(A, parts)

    def compose(self, other: "Derivation") -> list:
        """Parts of self o other as HomMaps."""
        A = self.algebra
        out = []
        for d1, p1 in self.parts.items():
            for d2, p2 in other.parts.items():
                out.append(HomMap(A, A.group.add(d1, d2), [p1(col) for col in p2.cols]))
        return out

    def bracket(self, other: "Derivation") -> "Derivation":
        """[X,Y]_eps = XY - eps(|X|,|Y|) YX, bilinear over parts."""
        A = self.algebra
        parts = []
        for d1, p1 in self.parts.items():
            for d2, p2 in other.parts.items():
                xy = [p1(col) for col in p2.cols]
                yx = [p2(col) for col in p1.cols]
                f = A.eps(d1, d2)
                parts.append(HomMap(A, A.group.add(d1, d2),
                                    [vsub(a, vscale(f, b)) for a, b in zip(xy, yx)]))
        return Derivation(A, parts)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return all(self(self.algebra.basis_vec(j)) == other(self.algebra.basis_vec(j))
                   for j in range(self.algebra.dim))

    def flat(self) -> dict:
        out: dict = {}
        for p in self.parts.values():
            out = vadd(out, p.flat())
        return out


# --- subspace computations ----------------------------------------------------

def center(A: EpsAlgebra) -> list:
    """Homogeneous basis (sparse vectors) of the eps-center."""
    out = []
    n = A.dim
    for d in A.support():
        idx = A.basis_of_degree(d)
        rows = []
        for j in range(n):
            f = A.eps(d, A.degrees[j])
            # coefficient of x_k in [x_i, x_j]
            acc: dict = {}
            for t, i in enumerate(idx):
                col = vsub(A.mult[i][j], vscale(f, A.mult[j][i]))
                for k, c in col.items():
                    acc.setdefault(k, {})[t] = c
            rows.extend(acc.values())
        for v in linalg.nullspace(rows, len(idx), A.field):
            out.append({idx[t]: c for t, c in v.items()})
    return out


def trace_space(A: EpsAlgebra) -> list:
    """Basis of eps-traces as covectors {basis index: value}."""
    n = A.dim
    rows = []
    for i in range(n):
        for j in range(n):
            f = A.eps(A.degrees[i], A.degrees[j])
            r = vsub(A.mult[i][j], vscale(f, A.mult[j][i]))
            if r:
                rows.append(r)
    return linalg.nullspace(rows, n, A.field)


def trace_apply(T: dict, v: dict):
    tot = None
    for k, c in v.items():
        t = T.get(k)
        if t:
            tot = t * c if tot is None else tot + t * c
    return tot if tot is not None else 0


def achievable_degrees(A: EpsAlgebra) -> list:
    G = A.group
    return sorted({G.sub(a, b) for a in A.support() for b in A.support()})


def derivation_space(A: EpsAlgebra, delta) -> list:
    """Basis of homogeneous eps-derivations of degree delta."""
    G = A.group
    delta = G.reduce(delta)
    n = A.dim
    var = {}
    for j in range(n):
        tgt = G.add(A.degrees[j], delta)
        for k in A.basis_of_degree(tgt):
            var[(k, j)] = len(var)
    if not var:
        return []
    cols_vars: list[list] = [[] for _ in range(n)]
    for (k, j), t in var.items():
        cols_vars[j].append((k, t))
    rows = []
    for i in range(n):
        f = A.eps(delta, A.degrees[i])
        for j in range(n):
            acc: dict = {}

            def put(l, t, c):
                r = acc.setdefault(l, {})
                w = r.get(t)
                w = c if w is None else w + c
                if w:
                    r[t] = w
                else:
                    r.pop(t, None)

            # X(x_i x_j)
            for m, c in A.mult[i][j].items():
                for k, t in cols_vars[m]:
                    put(k, t, c)
            # - X(x_i) x_j
            for k, t in cols_vars[i]:
                for l, c in A.mult[k][j].items():
                    put(l, t, -c)
            # - eps x_i X(x_j)
            for k, t in cols_vars[j]:
                for l, c in A.mult[i][k].items():
                    put(l, t, -f * c)
            rows.extend(r for r in acc.values() if r)
    inv = {t: kj for kj, t in var.items()}
    out = []
    for v in linalg.nullspace(rows, len(var), A.field):
        cols = [dict() for _ in range(n)]
        for t, c in v.items():
            k, j = inv[t]
            cols[j][k] = c
        out.append(Derivation.homogeneous(A, delta, cols))
    return out


def derivation_space_all(A: EpsAlgebra) -> dict:
    return {d: derivation_space(A, d) for d in achievable_degrees(A)}


def inner_space(A: EpsAlgebra, delta) -> list:
    """Basis of ad_u, u in A^delta, as (u, Derivation) pairs with independent maps."""
    idx = A.basis_of_degree(delta)
    out = []
    rows: list = []
    for i in idx:
        D = Derivation.ad(A, A.basis_vec(i))
        fl = D.flat()
        if fl and linalg.rank(rows + [fl], A.field) > len(rows):
            rows.append(fl)
            out.append((A.basis_vec(i), D))
    return out


def inner_outer(A: EpsAlgebra) -> dict:
    """Per degree: dim Der, dim Int, dim Out, dim A^d, dim Z^d."""
    Z = center(A)
    zdeg: dict = {}
    for z in Z:
        d = A.deg_of(z)
        zdeg[d] = zdeg.get(d, 0) + 1
    report = {}
    for d in achievable_degrees(A):
        der = derivation_space(A, d)
        inner = inner_space(A, d)
        report[d] = {
            "der": len(der),
            "int": len(inner),
            "out": len(der) - len(inner),
            "dim_A": len(A.basis_of_degree(d)),
            "dim_Z": zdeg.get(d, 0),
            "inner_basis": [u for u, _ in inner],
        }
    return report


def tensor_product(A: EpsAlgebra, B: EpsAlgebra) -> EpsAlgebra:
    """eps-graded tensor product: (a x b)(c x d) = eps(|b|,|c|) (ac) x (bd)."""
    if A.factor != B.factor:
        raise FactorError("tensor product needs the same commutation factor", "same factor", None)
    G = A.group
    nA, nB = A.dim, B.dim
    idx = lambda a, b: a * nB + b
    degrees = [G.add(A.degrees[a], B.degrees[b]) for a in range(nA) for b in range(nB)]
    cons = []
    for a in range(nA):
        for b in range(nB):
            for c in range(nA):
                f = A.eps(B.degrees[b], A.degrees[c])
                ac = A.mult[a][c]
                if not ac:
                    continue
                for d in range(nB):
                    bd = B.mult[b][d]
                    for k1, c1 in ac.items():
                        for k2, c2 in bd.items():
                            cons.append((idx(a, b), idx(c, d), idx(k1, k2), f * c1 * c2))
    unit = {idx(k1, k2): c1 * c2 for k1, c1 in A.unit.items() for k2, c2 in B.unit.items()}
    inv = None
    if A.involution is not None and B.involution is not None:
        # (a x b)* = eps(|b|,|a|) a* x b* is compatible with the twisted product
        inv = []
        for a in range(nA):
            for b in range(nB):
                f = A.eps(B.degrees[b], A.degrees[a])
                col = {}
                for k1, c1 in A.involution[a].items():
                    for k2, c2 in B.involution[b].items():
                        col[idx(k1, k2)] = f * c1 * c2
                inv.append(col)
    names = [f"{A.names[a]}(x){B.names[b]}" for a in range(nA) for b in range(nB)]
    return EpsAlgebra(A.factor, degrees, cons, unit, inv,
                      label=f"({A.label})(x)({B.label})", names=names)


def ground_field(factor: CommFactor) -> EpsAlgebra:
    fld = factor.field
    return EpsAlgebra(factor, [factor.group.zero()], [(0, 0, 0, fld.one)], {0: fld.one},
                      involution=[{0: fld.one}], label="K", names=["1"])


def is_eps_commutative(A: EpsAlgebra) -> bool:
    n = A.dim
    for i in range(n):
        for j in range(n):
            f = A.eps(A.degrees[i], A.degrees[j])
            if A.mult[i][j] != vscale(f, A.mult[j][i]):
                return False
    return True


def reality_check(X: Derivation) -> bool:
    """(X_k(a))* = eps(|a|,|X_k|) X_{-k}(a*) on all basis vectors a."""
    A = X.algebra
    G = A.group
    for k, Xk in X.parts.items():
        mk = G.neg(k)
        Xmk = X.parts.get(mk)
        for i in range(A.dim):
            a = A.basis_vec(i)
            lhs = A.star(Xk(a))
            rhs = Xmk(A.star(a)) if Xmk is not None else {}
            rhs = vscale(A.eps(A.degrees[i], k), rhs)
            if lhs != rhs:
                return False
    return True


def involution_check(A: EpsAlgebra) -> bool:
    return A.involution_check()


def is_unitary(g: AlgElem) -> bool:
    return g.owner.is_unitary(g.coords)


def decompose_in_span(vectors: list, target: dict, fld=None):
    """Coefficients c with sum c_i vectors[i] = target, or None."""
    fld = fld or field()
    keys = sorted({k for v in vectors for k in v} | set(target))
    pos = {k: t for t, k in enumerate(keys)}
    rows = [dict() for _ in keys]
    for i, v in enumerate(vectors):
        for k, c in v.items():
            rows[pos[k]][i] = c
    rhs = [target.get(k, 0) for k in keys]
    return linalg.solve(rows, rhs, len(vectors), fld)


def all_pairs(n):
    return itertools.product(range(n), repeat=2)
