"""Finitely generated abelian groups, commutation factors and factor sets."""

from __future__ import annotations

import itertools
import re
from functools import reduce
from math import gcd

from .scalars import CycNum, field, parse_cyc

GroupElem = tuple  # reduced integer coordinates


class FactorError(ValueError):
    """A commutation factor or factor set violates its defining identities.

    ``violated`` names the condition, ``at`` gives 1-based generator indices
    (or group elements for factor sets).
    """

    def __init__(self, message, violated=None, at=None):
        super().__init__(message)
        self.violated = violated
        self.at = at

    def as_dict(self):
        return {"violated": self.violated, "at": list(self.at) if self.at is not None else None}


class FinAbGroup:
    """Z_{m_1} x ... x Z_{m_k}; an order of 0 means an infinite cyclic factor."""

    def __init__(self, orders):
        orders = tuple(int(m) for m in orders)
        if any(m < 0 for m in orders):
            raise ValueError("cyclic orders must be non-negative")
        self.orders = orders

    @classmethod
    def parse(cls, text: str) -> "FinAbGroup":
        """Read 'Z2xZ2', 'Z', 'Z3xZ', '0' (trivial)."""
        text = text.strip().replace(" ", "")
        if text in ("0", "1", "trivial", ""):
            return cls(())
        orders = []
        for part in re.split(r"[x*]", text):
            m = re.fullmatch(r"Z(\d*)", part)
            if not m:
                raise ValueError(f"cannot parse group factor {part!r}")
            orders.append(int(m.group(1)) if m.group(1) else 0)
        return cls(orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    def is_finite(self) -> bool:
        return all(m > 0 for m in self.orders)

    def size(self) -> int:
        if not self.is_finite():
            raise ValueError("infinite group")
        return reduce(lambda a, b: a * b, self.orders, 1)

    def reduce(self, coords) -> GroupElem:
        coords = tuple(coords)
        if len(coords) != len(self.orders):
            raise ValueError(f"element {coords} has wrong length for {self}")
        return tuple(c % m if m else c for c, m in zip(coords, self.orders))

    def zero(self) -> GroupElem:
        return (0,) * len(self.orders)

    def add(self, a, b) -> GroupElem:
        return tuple((x + y) % m if m else x + y for x, y, m in zip(a, b, self.orders))

    def neg(self, a) -> GroupElem:
        return tuple((-x) % m if m else -x for x, m in zip(a, self.orders))

    def sub(self, a, b) -> GroupElem:
        return self.add(a, self.neg(b))

    def scale(self, n: int, a) -> GroupElem:
        return tuple((n * x) % m if m else n * x for x, m in zip(a, self.orders))

    def elements(self) -> list:
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        return list(itertools.product(*[range(m) for m in self.orders]))

    def generators(self) -> list:
        k = len(self.orders)
        return [tuple(1 if j == r else 0 for j in range(k)) for r in range(k)]

    def product(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup(self.orders + other.orders)

    def __eq__(self, other):
        return isinstance(other, FinAbGroup) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    def __repr__(self):
        return f"FinAbGroup({list(self.orders)})"

    def __str__(self):
        if not self.orders:
            return "0"
        return "x".join(f"Z{m}" if m else "Z" for m in self.orders)


def _root_exponent(v: CycNum):
    """k with v = zeta_N^k, or None if v is not an N-th root of unity."""
    fld = v.field
    for k in range(fld.N):
        if fld._powers[k] == v.coeffs:
            return k
    return None


class CommFactor:
    """Commutation factor eps on a FinAbGroup, stored by generator values.

    Evaluation uses bimultiplicativity: eps(i,j) = prod E[r][s]^(i_r j_s).
    """

    def __init__(self, group: FinAbGroup, gen_values, hermitean: bool = False,
                 fld=None, validate: bool = True):
        self.group = group
        k = group.rank
        if fld is None:
            fld = next((v.field for row in gen_values for v in row if isinstance(v, CycNum)), field())
        self.field = fld
        if len(gen_values) != k or any(len(row) != k for row in gen_values):
            raise FactorError(f"generator table must be {k}x{k}", "table shape", None)
        self.E = tuple(tuple(fld.coerce(v) for v in row) for row in gen_values)
        self.hermitean = bool(hermitean)
        if validate:
            self._validate()
        self._exp = [[_root_exponent(v) for v in row] for row in self.E]
        self._roots = all(e is not None for row in self._exp for e in row)
        self._cache: dict = {}

    # --- validation ----------------------------------------------------
    def _validate(self):
        E, m = self.E, self.group.orders
        k = len(m)
        for r in range(k):
            d = E[r][r]
            if m[r] % 2 == 1:
                if not d.is_one():
                    raise FactorError(
                        f"eps(e_{r+1},e_{r+1}) must be 1 since m_{r+1}={m[r]} is odd, got {d}",
                        "eps(e_r,e_r)=1 for m_r odd", (r + 1, r + 1))
            elif not (d.is_one() or d.is_minus_one()):
                raise FactorError(
                    f"eps(e_{r+1},e_{r+1}) must be 1 or -1, got {d}",
                    "eps(e_r,e_r)=±1", (r + 1, r + 1))
        for r in range(k):
            for s in range(k):
                if not (E[r][s] * E[s][r]).is_one():
                    raise FactorError(
                        f"eps(e_{r+1},e_{s+1}) eps(e_{s+1},e_{r+1}) != 1",
                        "eps(e_r,e_s)eps(e_s,e_r)=1", (r + 1, s + 1))
                g = gcd(m[r], m[s])
                if g and not (E[r][s] ** g).is_one():
                    raise FactorError(
                        f"eps(e_{r+1},e_{s+1})^{g} != 1",
                        "eps(e_r,e_s)^m_rs=1", (r + 1, s + 1))
        if self.hermitean:
            for r in range(k):
                for s in range(k):
                    if E[r][s].conj() != E[s][r]:
                        raise FactorError(
                            f"conj(eps(e_{r+1},e_{s+1})) != eps(e_{s+1},e_{r+1})",
                            "conj(eps(i,j))=eps(j,i)", (r + 1, s + 1))

    # --- evaluation ----------------------------------------------------
    def __call__(self, i, j) -> CycNum:
        key = (i, j)
        v = self._cache.get(key)
        if v is not None:
            return v
        fld = self.field
        if self._roots:
            tot = 0
            for r, a in enumerate(i):
                if a:
                    row = self._exp[r]
                    for s, b in enumerate(j):
                        if b:
                            tot += row[s] * a * b
            v = CycNum(fld, fld._powers[tot % fld.N])
        else:
            v = fld.one
            for r, a in enumerate(i):
                for s, b in enumerate(j):
                    if a and b:
                        v = v * self.E[r][s] ** (a * b)
        self._cache[key] = v
        return v

    def eval(self, i, j) -> CycNum:
        return self(self.group.reduce(i), self.group.reduce(j))

    def signature(self, i) -> CycNum:
        """psi_eps(i) = eps(i,i), always +1 or -1."""
        return self(i, i)

    def is_proper(self) -> bool:
        return all(self.E[r][r].is_one() for r in range(self.group.rank))

    def gamma0(self) -> list:
        """Elements with eps(i,i) = 1 (finite groups)."""
        return [g for g in self.group.elements() if self.signature(g).is_one()]

    def signature_factor(self) -> "CommFactor":
        """s(eps)(i,j) = -1 iff both i and j are odd for psi_eps."""
        fld = self.field
        odd = [not self.E[r][r].is_one() for r in range(self.group.rank)]
        vals = [[-fld.one if (odd[r] and odd[s]) else fld.one for s in range(len(odd))]
                for r in range(len(odd))]
        return CommFactor(self.group, vals, hermitean=True, fld=fld)

    def is_trivial(self) -> bool:
        return all(v.is_one() for row in self.E for v in row)

    def __eq__(self, other):
        return (isinstance(other, CommFactor) and self.group == other.group
                and self.E == other.E)

    def __hash__(self):
        return hash((self.group, self.E))

    def table(self) -> dict:
        """Full table for finite groups."""
        els = self.group.elements()
        return {(a, b): self(a, b) for a in els for b in els}

    def to_json(self):
        from .scalars import format_cyc
        return {"group": str(self.group), "conductor": self.field.N,
                "values": [[format_cyc(v) for v in row] for row in self.E],
                "hermitean": self.hermitean}

    @classmethod
    def from_json(cls, obj, N=None):
        N = N or obj.get("conductor", 4)
        group = FinAbGroup.parse(obj["group"])
        vals = [[parse_cyc(str(v), N) for v in row] for row in obj["values"]]
        return cls(group, vals, hermitean=obj.get("hermitean", False), fld=field(N))

    def __repr__(self):
        from .scalars import format_cyc
        vals = [[format_cyc(v) for v in row] for row in self.E]
        return f"CommFactor({self.group}, {vals})"


def factor_make(group: FinAbGroup, gen_values, hermitean: bool = False, N: int | None = None) -> CommFactor:
    fld = field(N) if N else None
    if fld is not None:
        gen_values = [[parse_cyc(v, N) if isinstance(v, str) else v for v in row] for row in gen_values]
    else:
        gen_values = [[parse_cyc(v) if isinstance(v, str) else v for v in row] for row in gen_values]
    return CommFactor(group, gen_values, hermitean=hermitean, fld=fld)


def factor_eval(eps: CommFactor, i, j) -> CycNum:
    return eps.eval(i, j)


def trivial_factor(group: FinAbGroup, N: int = 4) -> CommFactor:
    fld = field(N)
    k = group.rank
    return CommFactor(group, [[fld.one] * k for _ in range(k)], hermitean=True, fld=fld)


def sign_factor(group: FinAbGroup, matrix, N: int = 4) -> CommFactor:
    """eps(j,k) = (-1)^(j^T M k) for an integer matrix M."""
    fld = field(N)
    vals = [[fld.rational((-1) ** (int(x) % 2)) for x in row] for row in matrix]
    return CommFactor(group, vals, hermitean=True, fld=fld)


def natural_z2(N: int = 4) -> CommFactor:
    """(-1)^(ij) on Z2."""
    return sign_factor(FinAbGroup([2]), [[1]], N)


def natural_z(N: int = 4) -> CommFactor:
    """(-1)^(pq) on Z."""
    return sign_factor(FinAbGroup([0]), [[1]], N)


def factor_product(e1: CommFactor, e2: CommFactor) -> CommFactor:
    """Factor on G1 x G2 with eps((i1,i2),(j1,j2)) = e1(i1,j1) e2(i2,j2)."""
    if e1.field is not e2.field:
        raise FactorError("factors live over different conductors", "same conductor", None)
    fld = e1.field
    k1, k2 = e1.group.rank, e2.group.rank
    vals = [[fld.one] * (k1 + k2) for _ in range(k1 + k2)]
    for r in range(k1):
        for s in range(k1):
            vals[r][s] = e1.E[r][s]
    for r in range(k2):
        for s in range(k2):
            vals[k1 + r][k1 + s] = e2.E[r][s]
    return CommFactor(e1.group.product(e2.group), vals,
                      hermitean=e1.hermitean and e2.hermitean, fld=fld)


# --- factor sets ------------------------------------------------------------

class FactorSet:
    """2-cocycle sigma: G x G -> K^* on a finite group, stored as a full table."""

    def __init__(self, group: FinAbGroup, table: dict, fld=None, validate: bool = True):
        if not group.is_finite():
            raise ValueError("factor sets are only supported on finite groups")
        self.group = group
        self.field = fld or next(iter(table.values())).field
        els = group.elements()
        self.table = {}
        for a in els:
            for b in els:
                v = table.get((a, b), 1)
                self.table[(a, b)] = self.field.coerce(v)
        if validate:
            self._validate()

    def __call__(self, i, j) -> CycNum:
        return self.table[(i, j)]

    def _validate(self):
        G = self.group
        els = G.elements()
        for (a, b), v in self.table.items():
            if v.is_zero():
                raise FactorError(f"sigma{(a, b)} = 0", "sigma(i,j) != 0", (a, b))
        for i in els:
            for j in els:
                for k in els:
                    lhs = self(i, G.add(j, k)) * self(j, k)
                    rhs = self(i, j) * self(G.add(i, j), k)
                    if lhs != rhs:
                        raise FactorError(
                            f"cocycle identity fails at {i},{j},{k}",
                            "sigma(i,j+k)sigma(j,k)=sigma(i,j)sigma(i+j,k)", (i, j, k))


def eps_from_sigma(sigma: FactorSet) -> CommFactor:
    """eps_sigma(i,j) = sigma(i,j)/sigma(j,i), read off on generators."""
    G = sigma.group
    gens = G.generators()
    vals = [[sigma(a, b) / sigma(b, a) for b in gens] for a in gens]
    herm = all(v.conj() * v == 1 for row in vals for v in row)
    eps = CommFactor(G, vals, hermitean=herm, fld=sigma.field)
    return eps


def eps_from_sigma_table(sigma: FactorSet) -> dict:
    """Full table of sigma(i,j)/sigma(j,i), independent of bimultiplicativity."""
    els = sigma.group.elements()
    return {(a, b): sigma(a, b) / sigma(b, a) for a in els for b in els}


def sigma_from_eps(eps: CommFactor) -> FactorSet:
    """sigma(i,j) = prod_{r<s} eps(e_r,e_s)^(i_r j_s); requires eps proper."""
    if not eps.is_proper():
        raise FactorError("sigma_from_eps needs a proper commutation factor",
                          "eps proper", None)
    G = eps.group
    fld = eps.field
    k = G.rank
    table = {}
    for a in G.elements():
        for b in G.elements():
            v = fld.one
            for r in range(k):
                for s in range(r + 1, k):
                    if a[r] and b[s]:
                        v = v * eps.E[r][s] ** (a[r] * b[s])
            table[(a, b)] = v
    return FactorSet(G, table, fld)


def _check_same_group(e1, e2):
    if e1.group != e2.group:
        raise FactorError("factors are defined on different groups", "same group", None)


def gamma_common(e1: CommFactor, e2: CommFactor) -> list:
    """{i : e1(i,j) = e2(i,j) for all j}."""
    _check_same_group(e1, e2)
    els = e1.group.elements()
    return [i for i in els if all(e1(i, j) == e2(i, j) for j in els)]


def r_common(e1: CommFactor, e2: CommFactor) -> list:
    """{i : e1(i-j,j) = e2(i-j,j) for all j}."""
    _check_same_group(e1, e2)
    G = e1.group
    els = G.elements()
    return [i for i in els if all(e1(G.sub(i, j), j) == e2(G.sub(i, j), j) for j in els)]


def automorphisms(group: FinAbGroup, limit: int = 64):
    """Yield automorphisms as tuples of generator images."""
    n = group.size()
    if n > limit:
        raise ValueError(f"group of order {n} exceeds the brute-force bound {limit}")
    els = group.elements()
    gens = group.generators()
    orders = group.orders

    def image(imgs, x):
        out = group.zero()
        for c, g in zip(x, imgs):
            out = group.add(out, group.scale(c, g))
        return out

    for imgs in itertools.product(els, repeat=len(gens)):
        # well-defined: m_r * image(e_r) = 0
        if any(group.scale(m, g) != group.zero() for m, g in zip(orders, imgs)):
            continue
        if len({image(imgs, x) for x in els}) != n:
            continue
        yield imgs


def apply_hom(group: FinAbGroup, imgs, x):
    out = group.zero()
    for c, g in zip(x, imgs):
        out = group.add(out, group.scale(c, g))
    return out


def pullback(eps: CommFactor, imgs) -> CommFactor:
    """f*eps with f given by generator images: (f*eps)(i,j) = eps(f i, f j)."""
    G = eps.group
    gens = G.generators()
    vals = [[eps(apply_hom(G, imgs, a), apply_hom(G, imgs, b)) for b in gens] for a in gens]
    return CommFactor(G, vals, hermitean=eps.hermitean, fld=eps.field)


def equivalence_brute(e1: CommFactor, e2: CommFactor, limit: int = 64):
    """Generator images of an automorphism f with e2 = f*e1, or None."""
    _check_same_group(e1, e2)
    for imgs in automorphisms(e1.group, limit):
        if pullback(e1, imgs) == e2:
            return imgs
    return None


def check_axioms(eps: CommFactor, i, j, k) -> bool:
    """eps(i,j)eps(j,i)=1 and bimultiplicativity at one triple."""
    G = eps.group
    return ((eps(i, j) * eps(j, i)).is_one()
            and eps(i, G.add(j, k)) == eps(i, j) * eps(i, k)
            and eps(G.add(i, j), k) == eps(i, k) * eps(j, k))
