"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line.  Run with
``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import itertools
import math
import random
import sys
import time

import pytest

from icubes.errors import HypothesisViolated, PreconditionFailed
from icubes.explore import (
    conjecture8_sweep,
    enumerate_orthogonal,
    hecke_count,
    obstruction_soundness,
    orthoregular_examples,
    scan_orthobalanced,
    verify_paper_counterexamples,
)
from icubes.hermitian import HermForm2, build_orthoregular, is_orthobalanced
from icubes.icube import (
    extend3,
    extend3_with_snf,
    extend4,
    extend4_with_snf,
    generate_random_icube,
    necessary_conditions,
    random_monomial,
    snf4_hypothesis,
    snf_pairing_check,
)
from icubes.lattice import det_divisors, from_columns, inner, kernel_basis, mat_mul, q_prime_data, snf, xh_vectors
from icubes.quat import Quat, lipschitz_left_divisor
from icubes.ring import (
    GaussInt,
    QuadRingElem,
    Ring,
    eps_delta_split,
    exact_div,
    factor_int,
    gauss_factor,
    gcd_many,
    is_absolute_square,
    is_square,
    is_sum_k_squares,
    norm,
    normalize,
    quadring_left_divisors,
    split_prime,
)

RESULTS = {}


def report(number, ok, detail, capsys=None):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    RESULTS[number] = ok
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


def _conj(x):
    return x.conjugate() if isinstance(x, GaussInt) else x


def _gauss_box(r):
    return [GaussInt(a, b) for a in range(-r, r + 1) for b in range(-r, r + 1)]


# ---------------------------------------------------------------------------
# input spaces shared by several criteria


def criterion1_space():
    return [list(v) for v in itertools.product(range(-15, 16), repeat=3)]


def criterion2_space():
    return [list(v) for v in itertools.product(_gauss_box(4), repeat=3)]


def criterion3_instances(count=2000, seed=4):
    """Seeded 1-, 2- and 3-icubes in Z[i]^4 with entry parts at most 10."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = 1 + len(out) % 3
        if k == 1:
            v = [GaussInt(rng.randint(-10, 10), rng.randint(-10, 10)) for _ in range(4)]
            if any(v):
                out.append([v])
            continue
        v = [GaussInt(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(4)]
        if not any(v):
            continue
        A = extend4(v, Ring.ZI).rows()
        A = mat_mul(random_monomial(rng, 4, Ring.ZI), A)
        A = mat_mul(A, random_monomial(rng, 4, Ring.ZI))
        cols = [list(c) for c in zip(*A)][:k]
        if all(abs(x.re) <= 10 and abs(x.im) <= 10 for c in cols for x in c):
            out.append(cols)
    return out


def _within(seconds, limit):
    return seconds < limit


# ---------------------------------------------------------------------------


def test_criterion_01_extend3_over_z(capsys):
    t0 = time.perf_counter()
    vs = [v for v in criterion1_space() if any(v) and is_square(sum(x * x for x in v))]
    bad = []
    for v in vs:
        ic = extend3([[x] for x in v], Ring.Z)
        if ic.columns()[0] != v or ic.lam != sum(x * x for x in v):
            bad.append(v)
    dt = time.perf_counter() - t0
    report(1, not bad and _within(dt, 120),
           f"{len(vs)} square-norm vectors in [-15,15]^3 extended, {len(bad)} failures, {dt:.1f}s", capsys)


def test_criterion_02_extend3_over_zi(capsys):
    t0 = time.perf_counter()
    count = 0
    bad = []
    for v in criterion2_space():
        if not any(v) or not is_sum_k_squares(sum(norm(x) for x in v), 2):
            continue
        count += 1
        ic = extend3([[x] for x in v], Ring.ZI)
        if ic.columns()[0] != v:
            bad.append(v)
    dt = time.perf_counter() - t0
    report(2, not bad and _within(dt, 300),
           f"{count} vectors in Z[i]^3 (parts in [-4,4]) extended, {len(bad)} failures, {dt:.1f}s", capsys)


def test_criterion_03_extend4_over_zi(capsys):
    t0 = time.perf_counter()
    insts = criterion3_instances()
    bad = []
    for cols in insts:
        ic = extend4(from_columns(cols), Ring.ZI)
        if ic.columns()[: len(cols)] != cols or ic.n != 4 or ic.k != 4:
            bad.append(cols)
    dt = time.perf_counter() - t0
    ranks = {k: sum(len(c) == k for c in insts) for k in (1, 2, 3)}
    report(3, not bad and len(insts) == 2000 and _within(dt, 300),
           f"{len(insts)} icubes (ranks {ranks}) extended to 4-icubes, {len(bad)} failures, {dt:.1f}s", capsys)


def test_criterion_04_golden_fixtures(capsys):
    records = [r for r in verify_paper_counterexamples()
               if r["name"] in ("10x10-icube", "z10-pair-parity", "z18-10-icube", "z36-28-icube")]
    ok = len(records) == 4 and all(r["passed"] for r in records)
    names = ", ".join(f"{r['name']}={'ok' if r['passed'] else 'FAILED'}" for r in records)
    report(4, ok, names, capsys)


def test_criterion_05_orthoregular_examples(capsys):
    checks = {}
    checks["|2+sqrt17 j|^2=21"] = QuadRingElem(2, 1, 17).norm() == 21
    # exhaustive: every r + s sqrt(17) j of norm 21, tested by exact division
    cands = [QuadRingElem(r, s, 17) for r in range(-5, 6) for s in range(-2, 3)
             if r * r + 17 * s * s == 21]
    no_div = all(not u.divides(QuadRingElem(4, t, 17)) for u in cands for t in (5, -5))
    checks["4+-5sqrt17 j has no divisor of norm 21"] = (
        no_div and len(cands) == 4
        and not quadring_left_divisors(QuadRingElem(4, 5, 17), 21)
        and not quadring_left_divisors(QuadRingElem(4, -5, 17), 21))
    M = HermForm2(21, 4, 21)
    try:
        build_orthoregular(M, 21)
        constructive_absent = False
    except PreconditionFailed:
        constructive_absent = True
    constructive_absent = constructive_absent and all(
        build_orthoregular(M, 25, delta=d) is None for d in (5, -5))
    checks["[[21,4],[4,21]] constructive path absent"] = constructive_absent
    checks["[[21,4],[4,21]] brute-force scan empty"] = (
        not scan_orthobalanced(M, 21, 17) and not scan_orthobalanced(M, 21, 1)
        and not scan_orthobalanced(M, 25, 1) and not scan_orthobalanced(M, 25, 17))
    checks["eps_delta_split(425,Z)=(25,17)"] = eps_delta_split(425, Ring.Z) == (25, 17)
    checks["fixtures"] = all(r["passed"] for r in orthoregular_examples())
    failed = [k for k, v in checks.items() if not v]
    report(5, not failed, f"{len(checks) - len(failed)}/{len(checks)} example checks hold" +
           (f"; failed: {failed}" if failed else ""), capsys)


def _generated_square_icubes():
    out = []
    seed = 0
    for ring in (Ring.Z, Ring.ZI):
        for n in (2, 3, 4, 6):
            for _ in range(63 if (ring, n) != (Ring.ZI, 6) else 59):
                out.append(generate_random_icube(ring, n, seed))
                seed += 1
    return out


def test_criterion_06_snf_pairing(capsys):
    icubes = _generated_square_icubes()
    bad = [ic for ic in icubes if not snf_pairing_check(ic)[0]]
    report(6, len(icubes) >= 500 and not bad,
           f"pairing conj(d_j) d_(n+1-j) = lambda on {len(icubes)} icubes, n in (2,3,4,6), both rings; "
           f"{len(bad)} failures", capsys)


def _divisors(n):
    out = [1]
    for p, e in factor_int(n).items():
        out = [d * p ** k for d in out for k in range(e + 1)]
    return out


def test_criterion_07_quaternion_factorization(capsys):
    t0 = time.perf_counter()
    rng = random.Random(7)
    calls = bad = 0
    for _ in range(1000):
        t = Quat(*(rng.randint(-20, 20) for _ in range(4)))
        while not t:
            t = Quat(*(rng.randint(-20, 20) for _ in range(4)))
        for m in _divisors(t.norm()):
            calls += 1
            u, v = lipschitz_left_divisor(t, m)
            if u * v != t or u.norm() != m:
                bad += 1
    dt = time.perf_counter() - t0
    report(7, bad == 0 and _within(dt, 180),
           f"{calls} (t, m) pairs over 1000 quaternions, {bad} failures, {dt:.1f}s", capsys)


def _forms_for_alpha(alpha):
    forms = [HermForm2(alpha, 0, alpha)]
    for beta in range(1, alpha):
        for gamma in range(1, 4 * alpha + 4):
            d = alpha * gamma - beta * beta
            if d > 0 and is_square(d):
                forms.append(HermForm2(alpha, beta, gamma))
                return forms
    return forms


def test_criterion_08_orthoregular_boundary(capsys):
    checked = mismatches = 0
    for alpha in range(1, 51):
        for M in _forms_for_alpha(alpha):
            assert M.eps == 1
            for nu in range(1, 51):
                lam = M.Delta * nu
                B = build_orthoregular(M, lam)
                present = B is not None and is_orthobalanced(M, B.a1, B.a2, lam)
                checked += 1
                if present != is_sum_k_squares(alpha * nu, 2):
                    mismatches += 1
    report(8, mismatches == 0, f"{checked} (form, nu) pairs with alpha, nu <= 50; {mismatches} mismatches", capsys)


def test_criterion_09_discriminants_and_gram(capsys):
    disc_checked = disc_bad = 0
    for ic in _generated_square_icubes():
        rows = ic.rows()
        for k in range(1, ic.n):
            A0 = [r[:k] for r in rows]
            lb = kernel_basis(A0, ic.ring)
            dk = det_divisors(A0, ic.ring)[k - 1]
            disc_checked += 1
            if lb.disc * norm(dk) != ic.lam ** k:
                disc_bad += 1
    gram_checked = gram_bad = qp_bad = 0
    seed = 10_000
    while gram_checked < 500:
        ring = (Ring.Z, Ring.ZI)[gram_checked % 2]
        ic = generate_random_icube(ring, 4, seed, size=4)
        seed += 1
        A0 = [r[:2] for r in ic.rows()]
        form, lb, d2 = q_prime_data(A0, ring)
        if form.mu != norm(d2):
            qp_bad += 1
        xs = xh_vectors(A0, ring)
        a1, a2 = [r[0] for r in A0], [r[1] for r in A0]
        lam = ic.lam
        for h in range(4):
            for g in range(4):
                s = a1[g] * _conj(a1[h]) + a2[g] * _conj(a2[h])
                want = lam * (lam - s) if g == h else -lam * s
                if inner(xs[h], xs[g]) != want:
                    gram_bad += 1
        gram_checked += 1
    ok = disc_bad == 0 and gram_bad == 0 and qp_bad == 0
    report(9, ok, f"disc identity on {disc_checked} sub-icubes ({disc_bad} bad); det Q' = |d2|^2 and "
                  f"x_h Gram formulas on {gram_checked} 2-icubes ({qp_bad}, {gram_bad} bad)", capsys)


def _snf3_instances(rng, count):
    out = []
    while len(out) < count:
        ring = (Ring.Z, Ring.ZI)[len(out) % 2]
        if ring is Ring.Z:
            a1 = [rng.randint(-12, 12) for _ in range(3)]
        else:
            a1 = [GaussInt(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(3)]
        if not any(a1) or norm(gcd_many(a1)) != 1:
            continue
        delta = sum(norm(x) for x in a1)
        if not is_absolute_square(delta, ring):
            continue
        if ring is Ring.Z:
            alphas = [math.isqrt(delta), -math.isqrt(delta)]
        else:
            r = math.isqrt(delta)
            alphas = [z for z in _gauss_box(r) if z.norm() == delta]
        out.append((a1, rng.choice(alphas), ring))
    return out


def _gauss_divisors(z):
    out = [GaussInt(1, 0)]
    for p, e in gauss_factor(z).factors:
        out = [d * p ** k for d in out for k in range(e + 1)]
    return out


def _snf4_instances(rng, count):
    out = []
    seed = 0
    primes = [p for p in range(5, 60) if p % 4 == 1 and factor_int(p) == {p: 1}]
    while len(out) < count:
        if len(out) % 2:
            ic = generate_random_icube(Ring.ZI, 4, 50_000 + seed, size=3)
            seed += 1
            A0 = [r[:2] for r in ic.rows()]
            try:
                d2 = snf4_hypothesis(A0)
            except HypothesisViolated:
                continue
            out.append((A0, rng.choice(_gauss_divisors(d2))))
        else:
            # a1 with a zero coordinate j and a2 = ell * e_j gives d2 = ell
            ell = split_prime(rng.choice(primes))
            if rng.random() < 0.5:
                ell = ell * split_prime(rng.choice(primes))
            if norm(gcd_many([ell, ell.conjugate()])) != 1:
                continue
            lam = norm(ell)
            a = enumerate_orthogonal((3, []), lam, Ring.ZI, limit=40).vectors
            a = [list(v) for v in a if norm(gcd_many(v)) == 1]
            if not a:
                continue
            base = rng.choice(a)
            j = rng.randrange(4)
            a1 = base[:j] + [GaussInt(0, 0)] + base[j:]
            a2 = [GaussInt(0, 0)] * 4
            a2[j] = ell
            out.append((from_columns([a1, a2]), rng.choice(_gauss_divisors(ell))))
    return out


def test_criterion_10_prescribed_snf(capsys):
    rng = random.Random(10)
    bad3 = bad4 = 0
    nontrivial = 0
    for a1, alpha, ring in _snf3_instances(rng, 100):
        ic = extend3_with_snf(a1, alpha, ring)
        delta = sum(norm(x) for x in a1)
        want = (1 if ring is Ring.Z else GaussInt(1, 0), normalize(alpha),
                delta if ring is Ring.Z else GaussInt(delta, 0))
        if snf(ic.rows(), ring).diag != want or ic.columns()[0] != a1:
            bad3 += 1
    for A0, alpha in _snf4_instances(rng, 100):
        ic = extend4_with_snf(A0, alpha)
        lam = ic.lam
        want = (GaussInt(1, 0), normalize(alpha), normalize(exact_div(GaussInt(lam, 0), alpha.conjugate())),
                GaussInt(lam, 0))
        nontrivial += norm(alpha) > 1
        if snf(ic.rows(), Ring.ZI).diag != want:
            bad4 += 1
    report(10, bad3 == 0 and bad4 == 0,
           f"100 extend3_with_snf ({bad3} bad) and 100 extend4_with_snf ({bad4} bad, "
           f"{nontrivial} with alpha2 != unit) instances have the prescribed Smith form", capsys)


def _s2_brute(N):
    r = math.isqrt(N)
    return sum(
        1
        for a in range(-r, r + 1) for b in range(-r, r + 1)
        for c in range(-r, r + 1) for d in range(-r, r + 1)
        if a * a + b * b + c * c + d * d == N and math.gcd(a * a + b * b, N) == 1
    )


def test_criterion_11_hecke_counts(capsys):
    t0 = time.perf_counter()
    parts = []
    ok = True
    for p1, p2 in ((5, 13), (5, 17), (13, 17)):
        N = p1 * p2
        two = hecke_count(2, p1, p2)
        brute = _s2_brute(N)
        three = hecke_count(3, p1, p2, max_matrices=20)
        four = hecke_count(4, p1, p2, max_matrices=20)
        ok &= two.count == brute and two.count >= N and three.count >= 1 and four.count >= 1
        parts.append(f"N={N}: #S2={two.count} (brute {brute}), S3>={three.count}, S4>={four.count}")
    dt = time.perf_counter() - t0
    report(11, ok and _within(dt, 120), "; ".join(parts) + f"; {dt:.1f}s", capsys)


def test_criterion_12_obstruction_soundness(capsys):
    t0 = time.perf_counter()
    r1 = obstruction_soundness(criterion1_space(), Ring.Z)
    r2 = obstruction_soundness(criterion2_space(), Ring.ZI)
    flagged3 = sum(necessary_conditions(cols[0], Ring.ZI).obstructed for cols in criterion3_instances())
    dt = time.perf_counter() - t0
    ok = r1.ok and r2.ok and flagged3 == 0
    report(12, ok,
           f"Z^3: {r1.obstructed}/{r1.checked} orbit representatives obstructed, {len(r1.disagreements)} "
           f"disagreements; Z[i]^3: {r2.obstructed}/{r2.checked}, {len(r2.disagreements)} disagreements; "
           f"criterion 3 inputs flagged: {flagged3}; {dt:.1f}s", capsys)


def test_criterion_13_conjecture_sweep(capsys):
    a = conjecture8_sweep(25, samples=0)
    b = conjecture8_sweep(25, samples=0)
    deterministic = a.jsonl() == b.jsonl()
    all_ok = a.counts == {"extendable": len(a.records)}
    line = f"(informational) {a.summary()}; deterministic report: {deterministic}"
    RESULTS[13] = all_ok and deterministic
    with capsys.disabled():
        print(f"\n{'PASS' if RESULTS[13] else 'FAIL'} criterion 13: {line}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
