"""Exact sparse linear algebra over Q(zeta_N).

Matrices are lists of sparse rows, each a dict ``{column: scalar}``.  Scalars
are CycNum (or anything with field arithmetic and truthiness meaning nonzero).
Systems whose entries are all rational are eliminated on plain rationals,
which is several times faster than going through CycNum.
"""

from __future__ import annotations

from .scalars import CycNum, Q, field


def _all_rational(rows) -> bool:
    for r in rows:
        for v in r.values():
            if isinstance(v, CycNum) and not v.is_rational():
                return False
    return True


def _to_q(rows):
    out = []
    for r in rows:
        nr = {}
        for c, v in r.items():
            q = v.coeffs[0] if isinstance(v, CycNum) else Q(v)
            if q:
                nr[c] = q
        out.append(nr)
    return out


def _clean(rows):
    return [{c: v for c, v in r.items() if v} for r in rows]


def _eliminate(rows):
    """Reduced row echelon form. Returns (rows, pivot columns) with rows[i] pivoted at pivots[i]."""
    pivot_rows: dict[int, dict] = {}
    order: list[int] = []
    for row in rows:
        row = dict(row)
        # reduce against existing pivots
        changed = True
        while changed and row:
            changed = False
            for c in [c for c in row if c in pivot_rows]:
                f = row.get(c)
                if not f:
                    continue
                for cc, vv in pivot_rows[c].items():
                    nv = row.get(cc)
                    nv = -f * vv if nv is None else nv - f * vv
                    if nv:
                        row[cc] = nv
                    else:
                        row.pop(cc, None)
                changed = True
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {c: v * inv for c, v in row.items()}
        # back-substitute into older pivot rows
        for c in order:
            prow = pivot_rows[c]
            f = prow.get(p)
            if f:
                for cc, vv in row.items():
                    nv = prow.get(cc)
                    nv = -f * vv if nv is None else nv - f * vv
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        pivot_rows[p] = row
        order.append(p)
    order.sort()
    return [pivot_rows[c] for c in order], order


def _lift(v, fld):
    if isinstance(v, CycNum):
        return v
    return fld.rational(v)


def rref(rows, fld=None):
    """Row-reduce; returns (reduced rows, pivot columns)."""
    fld = fld or field()
    rows = _clean(rows)
    if _all_rational(rows):
        red, piv = _eliminate(_to_q(rows))
        return [{c: fld.rational(v) for c, v in r.items()} for r in red], piv
    rows = [{c: _lift(v, fld) for c, v in r.items()} for r in rows]
    return _eliminate(rows)


def rank(rows, fld=None) -> int:
    rows = _clean(rows)
    if _all_rational(rows):
        return len(_eliminate(_to_q(rows))[1])
    return len(rref(rows, fld)[1])


def nullspace(rows, ncols: int, fld=None) -> list[dict]:
    """Basis of {v : rows . v = 0} as sparse vectors; deterministic order."""
    fld = fld or field()
    red, piv = rref(rows, fld)
    pset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pset:
            continue
        v = {f: fld.one}
        for r, p in zip(red, piv):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def solve(rows, rhs, ncols: int, fld=None):
    """One solution x of rows . x = rhs (sparse), or None if inconsistent."""
    fld = fld or field()
    aug = []
    for r, b in zip(rows, rhs):
        nr = dict(r)
        if b:
            nr[ncols] = b
        aug.append(nr)
    red, piv = rref(aug, fld)
    if piv and piv[-1] == ncols:
        return None
    x = {}
    for r, p in zip(red, piv):
        c = r.get(ncols)
        if c:
            x[p] = c
    return x


def dense_to_rows(mat) -> list[dict]:
    return [{j: v for j, v in enumerate(row) if v} for row in mat]


def matrix_inverse(mat, fld=None):
    """Inverse of a dense square matrix over Q(zeta_N); raises ZeroDivisionError if singular."""
    fld = fld or field()
    n = len(mat)
    rows = []
    for i, row in enumerate(mat):
        r = {j: v for j, v in enumerate(row) if v}
        r[n + i] = fld.one
        rows.append(r)
    red, piv = rref(rows, fld)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [[r.get(n + j, fld.zero) for j in range(n)] for r in red[:n]]


def span_contains(basis_rows, vec, fld=None) -> bool:
    """True if the sparse vector lies in the row span of basis_rows."""
    return rank(list(basis_rows) + [vec], fld) == rank(basis_rows, fld)
