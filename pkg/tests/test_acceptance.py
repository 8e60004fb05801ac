"""Acceptance criteria, one test each.  Every test prints a single line

    criterion <n>: PASS|FAIL  <what>  (<seconds> s, budget <seconds> s)

Budgets are the pinned runtime limits; all comparisons are exact.
"""

import itertools
import json
import random
import subprocess
import sys
import time

import pytest

from epsalg import diffcalc as dc
from epsalg import moyal as my
from epsalg import verify as v
from epsalg.constructions import plain_matrix, sl_eps_basis, supermatrix
from epsalg.groups import CommFactor, FinAbGroup, eps_from_sigma, sigma_from_eps
from epsalg.scalars import field

from oracles import brute_nullspace_dim

SEED = 42


def _report(capsys, n, ok, what, secs, budget=None):
    ok = bool(ok) and (budget is None or secs < budget)
    b = f", budget {budget} s" if budget is not None else ""
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {what}  ({secs:.2f} s{b})")
    return ok


def _timed(f):
    t = time.perf_counter()
    r = f()
    return r, time.perf_counter() - t


def test_criterion_01_factor_axioms(capsys):
    r, dt = _timed(lambda: v.check_factor_axioms(random.Random(f"{SEED}:factor"), 1000))
    names = set(r["factors"])
    assert {"trivial Z2xZ3", "natural Z2", "Z2xZ2 color", "Z2xZ2 super"} <= names
    assert any(n.startswith("product") for n in names)
    assert _report(capsys, 1, r["status"] == "PASS", "factor axioms, 1000 triples per factor", dt, 1.0)


def test_criterion_02_sigma(capsys):
    def run():
        ok = v.check_sigma_roundtrip()["pauli_eps_sigma"]
        # every sign assignment on the generators, filtered by properness
        fld = field(4)
        G = FinAbGroup([2, 2])
        proper = 0
        for a, b, c in itertools.product((1, -1), repeat=3):
            e = CommFactor(G, [[fld.rational(a), fld.rational(c)], [fld.rational(c), fld.rational(b)]], fld=fld)
            if e.is_proper():
                proper += 1
                ok &= eps_from_sigma(sigma_from_eps(e)) == e
        return ok and proper == 2
    ok, dt = _timed(run)
    assert _report(capsys, 2, ok, "eps_sigma of the Pauli table and roundtrip on all proper Z2xZ2 factors", dt, 1.0)


def test_criterion_03_elementary(capsys):
    r, dt = _timed(v.check_elementary)
    assert _report(capsys, 3, r["status"] == "PASS", "center, trace signs, outer derivations", dt, 10.0)


def test_criterion_04_calcdiff(capsys):
    def run():
        A = supermatrix(2, 1)
        sl = sl_eps_basis(A)
        full = dc.ad_transport_check(A, sl, 2)
        r = v.check_calcdiff(random.Random(f"{SEED}:calcdiff"))
        return r["status"] == "PASS" and full["ok"] and r["M(1,1)"]["ad_kernel"] > 0
    ok, dt = _timed(run)
    assert _report(capsys, 4, ok, "ad bijective on traceless M(2,1), transport to degree 2, M(1,1) kernel", dt)


def test_criterion_05_fine(capsys):
    r, dt = _timed(v.check_fine)
    p = r["pauli"]
    ok = (r["status"] == "PASS" and p["color"]["der_dim"] == 0 and p["super"]["inner"] == ["tau1", "tau2"]
          and p["super"]["trace_support"] == p["super"]["R_set"])
    assert _report(capsys, 5, ok, "Pauli centers, derivations, trace support, coordinates", dt, 1.0)


def test_criterion_06_calculus(capsys):
    def run():
        algs = v.calculus_algebras()
        d2 = v.check_d_squared(3, algs)
        ca = v.check_cartan(random.Random(f"{SEED}:cartan"), 200, algs)
        gr = v.check_grassmann(4)
        return d2["status"] == "PASS" and ca["status"] == "PASS" and not gr["dimension_mismatches"]
    ok, dt = _timed(run)
    assert _report(capsys, 6, ok, "d^2 = 0 for n <= 3, Cartan on 200 samples, Grassmann dimensions", dt, 60.0)


def test_criterion_07_cohomology(capsys):
    def run():
        A = plain_matrix(2)
        B = dc.der_basis_make(A)
        dims = [dc.cohomology_dim(B, n)["H"] for n in range(4)]
        ranks = []
        for n in range(4):
            D = dc.DMatrix(B, n, A.group.zero())
            rows = [{c: x if hasattr(x, "field") else A.field.rational(x) for c, x in r.items()}
                    for r in D.rows()]
            ncols = len(D.domain_keys())
            kern = brute_nullspace_dim(rows, ncols)
            ranks.append((ncols - kern, kern))
        H = [ranks[n][1] - (ranks[n - 1][0] if n else 0) for n in range(4)]
        return dims == [1, 0, 0, 1] and H == dims
    ok, dt = _timed(run)
    assert _report(capsys, 7, ok, "H^n(M_2) = [1,0,0,1], rank and nullspace oracle agree", dt, 30.0)


def test_criterion_08_connections(capsys):
    r, dt = _timed(lambda: v.check_connections(random.Random(f"{SEED}:conn"), 100, 20))
    assert _report(capsys, 8, r["status"] == "PASS", "right-linearity, affine, covariance, d+ad^-1, hermitean", dt)


def test_criterion_09_moyal(capsys):
    """The printed closed forms are what the criterion asks to match.  The
    corrected forms are reported next to them."""
    def run():
        ctx = my.MoyalContext()
        rng = random.Random(f"{SEED}:moyal")
        assoc = True
        for _ in range(100):
            a, b, c = (my.random_poly(ctx, rng, rng.randint(0, 4), 0.4) for _ in range(3))
            assoc &= my.star(my.star(a, b), c) == my.star(a, my.star(b, c))
        rel = {}
        for _ in range(5):
            for k, x in my.relations_check(ctx, my.random_poly(ctx, rng, 3), my.random_poly(ctx, rng, 3)).items():
                rel[k] = rel.get(k, True) and x
        table = my.g_bracket_table(ctx)
        curv = {}
        for _ in range(10):
            for r in my.gauge_curvature(my.MoyalFields.random(ctx, rng)):
                c = curv.setdefault(r["entry"], dict.fromkeys(("connection", "moy1_printed", "moy1", "moy2"), True))
                for k in c:
                    c[k] &= r[k]
        printed = {
            "associativity": assoc,
            "relations": rel["leibniz"] and rel["xt_commutator"] and rel["xt_anticommutator"] and rel["xx_printed"],
            "bracket_table": all(r["printed"] for r in table),
            "curvature": all(c["connection"] and c["moy1_printed"] and c["moy2"] for c in curv.values()),
        }
        corrected = {
            "relations": rel["leibniz"] and rel["xt_commutator"] and rel["xt_anticommutator"] and rel["xx"],
            "bracket_table": all(r["corrected"] for r in table),
            "curvature": all(c["connection"] and c["moy1"] and c["moy2"] for c in curv.values()),
        }
        detail = {"relation_xx_printed": rel["xx_printed"],
                  "bracket_entries_off": [r["entry"] for r in table if not r["printed"]],
                  "moy1_entries_off": sorted(e for e, c in curv.items() if not c["moy1_printed"])}
        return printed, corrected, detail
    (printed, corrected, detail), dt = _timed(run)
    ok = all(printed.values())
    with capsys.disabled():
        print(f"\n  printed forms: {printed}\n  corrected forms: {corrected}\n  mismatches: {detail}")
    assert printed["associativity"] and all(corrected.values())
    assert _report(capsys, 9, ok, "star associativity, relations, bracket table, curvature vs printed forms", dt, 60.0)


@pytest.mark.slow
def test_criterion_10_cli_determinism(capsys):
    def once():
        return subprocess.run([sys.executable, "-m", "epsalg.cli", "verify-all", "--seed", "42", "--format", "json"],
                              capture_output=True, timeout=900)
    def run():
        a, b = once(), once()
        return a.returncode == 0 and b.returncode == 0 and a.stdout == b.stdout and json.loads(a.stdout)["overall"] == "PASS"
    ok, dt = _timed(run)
    assert _report(capsys, 10, ok, "verify-all --seed 42 twice: byte-identical JSON, exit 0", dt)
