"""Exact scalars.

Two rings live here:

* :class:`CycNum`, elements of the cyclotomic field Q(zeta_N), stored as
  rational coordinates on 1, zeta, ..., zeta^(d-1) with d = phi(N) and reduced
  modulo the N-th cyclotomic polynomial (so the quotient is a field);
* :class:`MoyalScalar`, finite sums of theta^p alpha^q with CycNum
  coefficients, p in Z and q >= 0.

A small literal parser (:func:`parse_literal`) reads strings such as
``"3/2"``, ``"zeta^1@4"``, ``"i"``, ``"theta^-1"``, ``"2*alpha^2 - i/3"``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from math import gcd

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

DEFAULT_CONDUCTOR = 4


class ConductorError(ValueError):
    """Raised for unsupported conductors or mixing of different fields."""


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # integer polynomials, coefficient lists low -> high, den monic
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return out, num


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ConductorError(f"conductor must be >= 1, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_poly(d)))
            assert not any(rem)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


class CyclotomicField:
    """The field Q(zeta_N), zeta_N = exp(2 pi i / N)."""

    def __init__(self, N: int):
        if not isinstance(N, int) or N < 1:
            raise ConductorError(f"conductor must be a positive integer, got {N!r}")
        self.N = N
        phi = cyclotomic_poly(N)
        self.degree = d = len(phi) - 1
        # zeta^k reduced, for 0 <= k < max(N, 2d - 1)
        top = max(N, 2 * d - 1)
        powers = []
        cur = [Q(0)] * d
        cur[0] = Q(1)
        for _ in range(top):
            powers.append(tuple(cur))
            nxt = [Q(0)] + cur[:-1]
            lead = cur[-1]
            if lead:
                for j in range(d):
                    nxt[j] -= lead * phi[j]
            cur = nxt
        self._powers = tuple(powers)
        self.zero = CycNum(self, (Q(0),) * d)
        self.one = CycNum(self, (Q(1),) + (Q(0),) * (d - 1))

    def __repr__(self):
        return f"CyclotomicField({self.N})"

    def __reduce__(self):
        return (field, (self.N,))

    def __call__(self, value) -> "CycNum":
        return self.coerce(value)

    def coerce(self, value) -> "CycNum":
        if isinstance(value, CycNum):
            if value.field is not self:
                if value.is_rational():
                    return self.rational(value.coeffs[0])
                raise ConductorError(
                    f"cannot mix Q(zeta_{value.field.N}) and Q(zeta_{self.N})")
            return value
        if isinstance(value, (int, type(Q(0)))) or hasattr(value, "denominator"):
            return self.rational(value)
        if isinstance(value, str):
            out = parse_literal(value, self.N)
            if isinstance(out, MoyalScalar):
                return out.as_cyc()
            return out
        raise TypeError(f"cannot convert {value!r} to CycNum")

    def rational(self, q) -> "CycNum":
        return CycNum(self, (Q(q),) + (Q(0),) * (self.degree - 1))

    def zeta(self, k: int = 1, order: int | None = None) -> "CycNum":
        """zeta_order^k as an element of this field (order defaults to N)."""
        if order is None:
            order = self.N
        if order < 1:
            raise ConductorError("root of unity order must be positive")
        g = gcd(k % order, order) if k % order else order
        true_order = order // g
        if self.N % true_order:
            raise ConductorError(
                f"a primitive {true_order}-th root of unity is not in Q(zeta_{self.N})")
        exp = (k * self.N // order) % self.N
        return CycNum(self, self._powers[exp])

    @property
    def i(self) -> "CycNum":
        return self.zeta(1, 4)

    def _reduce(self, raw: list) -> tuple:
        d = self.degree
        out = list(raw[:d])
        for k in range(d, len(raw)):
            c = raw[k]
            if c:
                pk = self._powers[k]
                for j in range(d):
                    if pk[j]:
                        out[j] += c * pk[j]
        return tuple(out)


@lru_cache(maxsize=None)
def field(N: int = DEFAULT_CONDUCTOR) -> CyclotomicField:
    """Shared field instance for conductor N."""
    return CyclotomicField(N)


class CycNum:
    """Immutable element of Q(zeta_N)."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, fld: CyclotomicField, coeffs: tuple):
        self.field = fld
        self.coeffs = coeffs
        self._hash = None

    # --- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and self.is_rational()

    def is_minus_one(self) -> bool:
        return self.coeffs[0] == -1 and self.is_rational()

    # --- arithmetic ---------------------------------------------------
    def _other(self, other):
        if isinstance(other, CycNum):
            if other.field is self.field:
                return other
            return self.field.coerce(other)
        if isinstance(other, (int,)) or hasattr(other, "denominator"):
            return self.field.rational(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return CycNum(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return CycNum(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return CycNum(self.field, tuple(-a for a in self.coeffs))

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not any(b[1:]):
            c = b[0]
            if c == 1:
                return self
            return CycNum(self.field, tuple(x * c for x in a))
        if not any(a[1:]):
            c = a[0]
            if c == 1:
                return o
            return CycNum(self.field, tuple(x * c for x in b))
        d = len(a)
        raw = [Q(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        raw[i + j] += x * y
        return CycNum(self.field, self.field._reduce(raw))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_N)")
        a = self.coeffs
        if not any(a[1:]):
            return CycNum(self.field, (1 / a[0],) + a[1:])
        # solve (mult-by-self) x = 1 by elimination on the d x d rational matrix
        fld = self.field
        d = fld.degree
        cols = []
        for j in range(d):
            cols.append((self * CycNum(fld, fld._powers[j])).coeffs)
        rows = [[cols[j][i] for j in range(d)] + [Q(1) if i == 0 else Q(0)] for i in range(d)]
        for c in range(d):
            p = next(r for r in range(c, d) if rows[r][c])
            rows[c], rows[p] = rows[p], rows[c]
            piv = rows[c][c]
            rows[c] = [v / piv for v in rows[c]]
            for r in range(d):
                if r != c and rows[r][c]:
                    f = rows[r][c]
                    rows[r] = [v - f * w for v, w in zip(rows[r], rows[c])]
        return CycNum(fld, tuple(rows[i][d] for i in range(d)))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_rational():
            return self.field.rational(self.coeffs[0] ** e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "CycNum":
        """Complex conjugation, zeta -> zeta^(N-1)."""
        if self.is_rational():
            return self
        fld = self.field
        raw = [Q(0)] * max(fld.N, 1)
        for j, c in enumerate(self.coeffs):
            if c:
                raw[(-j) % fld.N] += c
        out = [Q(0)] * fld.degree
        for k, c in enumerate(raw):
            if c:
                pk = fld._powers[k]
                for j in range(fld.degree):
                    out[j] += c * pk[j]
        return CycNum(fld, tuple(out))

    def to_complex(self) -> complex:
        import cmath
        z = cmath.exp(2j * cmath.pi / self.field.N)
        return sum(float(c) * z ** j for j, c in enumerate(self.coeffs))

    # --- comparison / hashing ----------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycNum):
            if other.field is self.field:
                return self.coeffs == other.coeffs
            if self.is_rational() and other.is_rational():
                return self.coeffs[0] == other.coeffs[0]
            return False
        if isinstance(other, int) or hasattr(other, "denominator"):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.field.N, self.coeffs))
        return self._hash

    def __repr__(self):
        return f"CycNum({format_cyc(self)!r}, N={self.field.N})"

    def __str__(self):
        return format_cyc(self)


def cyc_make(N: int, value=1, zeta_power: int | None = None, order: int | None = None) -> CycNum:
    """Build a scalar of Q(zeta_N): a rational, a literal string, or zeta_order^k."""
    fld = field(N)
    if zeta_power is not None:
        return value * fld.zeta(zeta_power, order) if value != 1 else fld.zeta(zeta_power, order)
    return fld.coerce(value)


def cyc_conj(a: CycNum) -> CycNum:
    return a.conj()


def _fmt_q(q) -> str:
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_cyc(a: CycNum) -> str:
    """Canonical literal for a CycNum; parse_literal reads it back."""
    N = a.field.N
    parts = []
    for j, c in enumerate(a.coeffs):
        if not c:
            continue
        if j == 0:
            atom = None
        elif N == 4 and j == 1:
            atom = "i"
        else:
            atom = f"zeta^{j}@{N}"
        mag = _fmt_q(abs(c))
        sign = "-" if c < 0 else "+"
        if atom is None:
            body = mag
        elif mag == "1":
            body = atom
        else:
            body = f"{mag}*{atom}"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class MoyalScalar:
    """Finite sum of c * theta^p * alpha^q, p in Z, q >= 0, c in Q(zeta_N).

    A ring, not a field: only monomials are invertible.
    """

    __slots__ = ("terms", "field", "_hash")

    def __init__(self, terms=None, fld: CyclotomicField | None = None):
        fld = fld or field()
        clean = {}
        for (p, q), c in (terms or {}).items():
            if q < 0:
                raise ValueError("alpha exponent must be non-negative")
            c = fld.coerce(c)
            if c:
                clean[(p, q)] = c
        self.terms = clean
        self.field = fld
        self._hash = None

    @classmethod
    def const(cls, c, fld=None) -> "MoyalScalar":
        fld = fld or (c.field if isinstance(c, CycNum) else field())
        return cls({(0, 0): c}, fld)

    @classmethod
    def monomial(cls, theta_exp=0, alpha_exp=0, coeff=1, fld=None) -> "MoyalScalar":
        return cls({(theta_exp, alpha_exp): coeff}, fld)

    @classmethod
    def _raw(cls, terms, fld):
        out = cls.__new__(cls)
        out.terms = terms
        out.field = fld
        out._hash = None
        return out

    def _other(self, other):
        if isinstance(other, MoyalScalar):
            return other
        if isinstance(other, CycNum) or isinstance(other, int) or hasattr(other, "denominator"):
            c = self.field.coerce(other)
            return MoyalScalar._raw({(0, 0): c} if c else {}, self.field)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for k, c in o.terms.items():
            v = t.get(k)
            v = c if v is None else v + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return MoyalScalar._raw(t, self.field)

    __radd__ = __add__

    def __neg__(self):
        return MoyalScalar._raw({k: -c for k, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        t: dict = {}
        for (p1, q1), c1 in self.terms.items():
            for (p2, q2), c2 in o.terms.items():
                k = (p1 + p2, q1 + q2)
                v = t.get(k)
                v = c1 * c2 if v is None else v + c1 * c2
                t[k] = v
        return MoyalScalar._raw({k: v for k, v in t.items() if v}, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # division only by invertible elements: nonzero constants times a theta power
        o = self._other(other)
        if o is None:
            return NotImplemented
        if len(o.terms) != 1:
            raise ArithmeticError("MoyalScalar is a ring; only monomials can be divided by")
        (p, q), c = next(iter(o.terms.items()))
        if q != 0:
            raise ArithmeticError("alpha is not invertible in the Moyal coefficient ring")
        return self * MoyalScalar._raw({(-p, 0): c.inverse()}, self.field)

    def __pow__(self, e: int):
        if e < 0:
            return (MoyalScalar.const(1, self.field) / self) ** (-e)
        out = MoyalScalar.const(1, self.field)
        for _ in range(e):
            out = out * self
        return out

    def conj(self) -> "MoyalScalar":
        # theta and alpha are real parameters
        return MoyalScalar._raw({k: c.conj() for k, c in self.terms.items()}, self.field)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_const(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def as_cyc(self) -> CycNum:
        if not self.is_const():
            raise ValueError(f"{self} is not a constant")
        return self.terms.get((0, 0), self.field.zero)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"MoyalScalar({format_moyal(self)!r})"

    def __str__(self):
        return format_moyal(self)


def moyal_scalar_arith(a: MoyalScalar, b: MoyalScalar, op: str) -> MoyalScalar:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op in ("div", "truediv"):
        raise ArithmeticError("division is not supported: MoyalScalar is a ring")
    raise ValueError(f"unknown operation {op!r}")


def _fmt_monomial(p: int, q: int) -> str:
    bits = []
    if p:
        bits.append("theta" if p == 1 else f"theta^{p}")
    if q:
        bits.append("alpha" if q == 1 else f"alpha^{q}")
    return "*".join(bits)


def _fmt_term(c: CycNum, mono: str) -> tuple[str, str]:
    """(sign, body) for coefficient c times monomial string."""
    s = format_cyc(c)
    simple = "+" not in s[1:] and " - " not in s
    neg = s.startswith("-") and simple
    body = s[1:] if neg else s
    if not simple:
        body = f"({s})"
    if mono:
        if body == "1":
            body = mono
        else:
            body = f"{body}*{mono}"
    return ("-" if neg else "+", body)


def format_moyal(a: MoyalScalar) -> str:
    if not a.terms:
        return "0"
    items = sorted(a.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    parts = [_fmt_term(c, _fmt_monomial(p, q)) for (p, q), c in items]
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# --- literal parser -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(zeta|theta|alpha|i\b|x\d+)|(.))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, sym = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif name is not None:
            toks.append(("name", name))
        elif sym is not None and not sym.isspace():
            toks.append(("sym", sym))
        pos = m.end()
    return toks


class LiteralError(ValueError):
    """Malformed scalar or polynomial literal."""


class _Gen:
    """Generic term map used only while parsing: (xexps, p, q) -> CycNum."""

    def __init__(self, fld, terms=None):
        self.fld = fld
        self.t = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, fld, c):
        return cls(fld, {((), 0, 0): fld.coerce(c)})

    def __add__(self, o):
        t = dict(self.t)
        for k, v in o.t.items():
            t[k] = t[k] + v if k in t else v
        return _Gen(self.fld, t)

    def __neg__(self):
        return _Gen(self.fld, {k: -v for k, v in self.t.items()})

    def __mul__(self, o):
        t = {}
        for (x1, p1, q1), c1 in self.t.items():
            for (x2, p2, q2), c2 in o.t.items():
                n = max(len(x1), len(x2))
                xs = tuple((x1[j] if j < len(x1) else 0) + (x2[j] if j < len(x2) else 0)
                           for j in range(n))
                while xs and xs[-1] == 0:
                    xs = xs[:-1]
                k = (xs, p1 + p2, q1 + q2)
                t[k] = t[k] + c1 * c2 if k in t else c1 * c2
        return _Gen(self.fld, t)

    def invert(self):
        if len(self.t) != 1:
            raise LiteralError("can only divide by a single term")
        (xs, p, q), c = next(iter(self.t.items()))
        if xs or q:
            raise LiteralError("cannot divide by a polynomial variable or alpha")
        return _Gen(self.fld, {((), -p, 0): c.inverse()})

    def power(self, e):
        if e < 0:
            return self.invert().power(-e)
        out = _Gen.const(self.fld, 1)
        for _ in range(e):
            out = out * self
        return out


class _Parser:
    def __init__(self, text, fld):
        self.toks = _tokenize(text)
        self.pos = 0
        self.fld = fld
        self.text = text

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_sym(self, s):
        tok = self.take()
        if tok != ("sym", s):
            raise LiteralError(f"expected {s!r} in {self.text!r}")

    def signed_int(self):
        sign = 1
        while self.peek()[0] == "sym" and self.peek()[1] in "+-":
            if self.take()[1] == "-":
                sign = -sign
        kind, val = self.take()
        if kind != "num":
            raise LiteralError(f"expected integer in {self.text!r}")
        return sign * val

    def parse(self):
        if not self.toks:
            raise LiteralError("empty literal")
        out = self.expr()
        if self.pos != len(self.toks):
            raise LiteralError(f"unexpected trailing input in {self.text!r}")
        return out

    def expr(self):
        out = self.term()
        while self.peek()[0] == "sym" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            out = out + (rhs if op == "+" else -rhs)
        return out

    def term(self):
        out = self.unary()
        while self.peek()[0] == "sym" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.unary()
            out = out * (rhs if op == "*" else rhs.invert())
        return out

    def unary(self):
        if self.peek()[0] == "sym" and self.peek()[1] in "+-":
            op = self.take()[1]
            val = self.unary()
            return -val if op == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            base = base.power(self.signed_int())
        return base

    def atom(self):
        kind, val = self.take()
        fld = self.fld
        if kind == "num":
            return _Gen.const(fld, val)
        if kind == "name":
            if val == "i":
                return _Gen.const(fld, fld.i)
            if val == "theta":
                return _Gen(fld, {((), 1, 0): fld.one})
            if val == "alpha":
                return _Gen(fld, {((), 0, 1): fld.one})
            if val == "zeta":
                k = 1
                if self.peek() == ("sym", "^"):
                    self.take()
                    k = self.signed_int()
                order = fld.N
                if self.peek() == ("sym", "@"):
                    self.take()
                    order = self.signed_int()
                return _Gen.const(fld, fld.zeta(k, order))
            if val.startswith("x"):
                idx = int(val[1:])
                if idx < 1:
                    raise LiteralError("polynomial variables are x1, x2, ...")
                xs = (0,) * (idx - 1) + (1,)
                return _Gen(fld, {(xs, 0, 0): fld.one})
        if (kind, val) == ("sym", "("):
            out = self.expr()
            self.expect_sym(")")
            return out
        raise LiteralError(f"unexpected token {val!r} in {self.text!r}")


def parse_generic(text: str, N: int = DEFAULT_CONDUCTOR) -> dict:
    """Parse into a map (x-exponents, theta-exp, alpha-exp) -> CycNum."""
    if not isinstance(text, str):
        text = str(text)
    return _Parser(text, field(N)).parse().t


def parse_literal(text: str, N: int = DEFAULT_CONDUCTOR):
    """Parse a scalar literal: a CycNum if theta/alpha are absent, else a MoyalScalar."""
    terms = parse_generic(text, N)
    fld = field(N)
    if any(xs for (xs, _, _) in terms):
        raise LiteralError(f"{text!r} contains polynomial variables; not a scalar")
    if all(p == 0 and q == 0 for (_, p, q) in terms):
        return terms.get(((), 0, 0), fld.zero)
    return MoyalScalar({(p, q): c for (_, p, q), c in terms.items()}, fld)


def parse_cyc(text, N: int = DEFAULT_CONDUCTOR) -> CycNum:
    if isinstance(text, CycNum):
        return field(N).coerce(text)
    if isinstance(text, int):
        return field(N).rational(text)
    out = parse_literal(text, N)
    if isinstance(out, MoyalScalar):
        raise LiteralError(f"{text!r} is not a constant of Q(zeta_{N})")
    return out
