"""Property suites shared by ``rqlab verify`` and the acceptance tests.

Each suite compares two independent computations over a whole family and
returns a :class:`SuiteResult`; nothing here raises on a mismatch.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .arith import is_square, is_squarefree, jacobi, primes_in_class
from .biquad import fsu_classify, is_square_in_K1, kubota_kuroda_A1, unit_product
from .pell import convergents_sqrt, continued_fraction_sqrt, fundamental_unit, sqrt_product_in_K1_test
from .qforms import (
    ambiguous_forms,
    in_principal_genus,
    redei_four_rank,
    represents_by_principal,
    two_sylow,
)
from .verdict import T_CASE2, azizi_condition, classify_case, evaluate, scholz_classify

__all__ = ["SuiteResult", "SUITES", "run_suite", "pell_values", "principal_represents_oracle"]


@dataclass
class SuiteResult:
    name: str
    total: int = 0
    passed: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    unit: str = "cases"

    @property
    def ok(self) -> bool:
        return self.passed == self.total and not self.failures

    def check(self, cond: bool, label: str):
        self.total += 1
        if cond:
            self.passed += 1
        else:
            self.failures.append(label)

    def summary(self) -> str:
        word = "match" if self.ok else "match, FAIL"
        return f"{self.name}: {self.passed}/{self.total} {self.unit} {word} ({self.seconds:.1f}s)"


def _squarefree(lo: int, hi: int):
    return [D for D in range(lo, hi + 1) if is_squarefree(D) and math.isqrt(D) ** 2 != D]


def pq_family(max_d: int, p_class=(5, 8), q_class=(3, 4)):
    """D = p*q <= max_d with p, q in the given residue classes (p != q), ascending."""
    out = set()
    for p in primes_in_class(*p_class, max_d // 3 + 1):
        for q in primes_in_class(*q_class, max_d // p + 1):
            if p != q and p * q <= max_d:
                out.add(p * q)
    return sorted(out)


def case2_family(max_d: int):
    """D = p*q1*q2 <= max_d, p = 5 mod 8, q1, q2 = 3 mod 8, (p/q1) = (p/q2) = -1."""
    out = []
    for p in primes_in_class(5, 8, max_d // 33 + 1):
        qs = [q for q in primes_in_class(3, 8, max_d // (3 * p) + 1) if jacobi(p, q) == -1]
        for i, q1 in enumerate(qs):
            for q2 in qs[i + 1 :]:
                if p * q1 * q2 <= max_d:
                    out.append(p * q1 * q2)
    return sorted(out)


def scholz_pairs(limit: int = 197):
    ps = primes_in_class(1, 4, limit + 1)
    return [(p, q) for i, p in enumerate(ps) for q in ps[i + 1 :]]


# ---------------------------------------------------------------------------
# an oracle for principal representation that does not use forms


def pell_values(D: int) -> set[int]:
    """Values x^2 - D*y^2 at the convergents x/y of sqrt(D) over two periods."""
    _, period = continued_fraction_sqrt(D)
    return {x * x - D * y * y for x, y in convergents_sqrt(D, 2 * len(period) + 1)}


def principal_represents_oracle(D: int, m: int) -> bool:
    """x^2 - D*y^2 = m primitively, decided from continued fractions.

    Lagrange: for |m| < sqrt(D) every primitive solution comes from a
    convergent of sqrt(D).  For m | D with |m| > sqrt(D) the value -D/m is used
    instead, which is represented exactly when m is.
    """
    if m == 1:
        return True
    if m * m >= D:
        if D % m:
            raise ValueError(f"oracle needs |m| < sqrt({D}) or m | {D}, got {m}")
        m = -D // m
    return m in pell_values(D)


def _bounded_units(d: int, y_max: int) -> list[tuple[int, int]]:
    """Units (x + y sqrt d)/k, k = 2 if d = 1 mod 4 else 1, with 1 <= y <= y_max (y scaled by k)."""
    k = 2 if d % 4 == 1 else 1
    out = []
    for y in range(1, y_max + 1):
        for n in (-(k * k), k * k):
            x2 = d * y * y + n
            if x2 > 0 and is_square(x2):
                out.append((math.isqrt(x2), y))
    return out


# ---------------------------------------------------------------------------
# suites


def suite_scholz() -> SuiteResult:
    r = SuiteResult("scholz", unit="pairs")
    for p, q in scholz_pairs():
        pred = scholz_classify(p, q)
        t = two_sylow(p * q)
        norm = fundamental_unit(p * q).norm
        r.check(pred.matches(t.h2_narrow, t.h2, norm), f"({p},{q}) branch {pred.branch}: h2+={t.h2_narrow} h2={t.h2} N={norm}")
    return r


def suite_genus(max_d: int = 5000) -> SuiteResult:
    r = SuiteResult("genus", unit="D")
    for D in _squarefree(2, max_d):
        s = sum(1 for f in ambiguous_forms(D) if in_principal_genus(f))
        r4 = redei_four_rank(D)
        r.check(s == 2 ** (r4 + 1), f"D={D}: s={s}, r4={r4}")
    return r


def suite_redei(max_d: int = 3000) -> SuiteResult:
    r = SuiteResult("redei", unit="D")
    for D in _squarefree(2, max_d):
        a, b = redei_four_rank(D), two_sylow(D).four_rank
        r.check(a == b, f"D={D}: Redei {a}, enumeration {b}")
    return r


def suite_prop_case1(max_d: int = 30000) -> SuiteResult:
    r = SuiteResult("prop-case1", unit="D")
    for D in pq_family(max_d):
        rec, v = evaluate(D)
        ok = (
            rec.h2 == 2
            and is_square_in_K1(unit_product(D, (1, 1, 0)))[0]
            and rec.hasse_q == 2
            and rec.a1 == 2
            and v.kind == "A0"
            and v.structure == [2]
            and v.confidence == "proven"
        )
        r.check(ok, f"D={D}: h2={rec.h2} Q={rec.hasse_q} a1={rec.a1} verdict={v.line()}")
    return r


def suite_azizi(max_d: int = 30000) -> SuiteResult:
    r = SuiteResult("azizi", unit="pairs")
    ps = primes_in_class(5, 8, max_d // 5 + 1)
    for i, p in enumerate(ps):
        for q in ps[i + 1 :]:
            if p * q > max_d:
                break
            if jacobi(p, q) != -1:
                continue
            a = azizi_condition(p, q)
            sq = is_square_in_K1(unit_product(p * q, (1, 1, 1)))[0]
            r.check((a == -1) == sq, f"({p},{q}): symbol product {a}, square {sq}")
    return r


def suite_case3() -> SuiteResult:
    r = SuiteResult("case3")
    rec, v = evaluate(85)
    r.check(
        v.kind == "A0" and v.structure == [2] and v.confidence == "proven" and v.theorem.endswith("item i"),
        f"D=85: {v.line()}",
    )
    rec, v = evaluate(221)
    r.check(
        v.kind == "A1" and v.order == 4 and v.confidence == "proven" and v.theorem.endswith("item iv"),
        f"D=221: {v.line()}",
    )
    r.check(rec.structure_2d == [4, 2] and rec.structure_narrow_2d == [4, 2], f"D=442 structure {rec.structure_2d}")
    r.check(rec.norm_eps_2d == -1 and rec.q % 16 == 1, "D=221: N(eps_442) = -1, q = 1 mod 16")
    return r


def suite_case2(max_d: int = 30000) -> SuiteResult:
    r = SuiteResult("case2-family", unit="D")
    r.check(sqrt_product_in_K1_test(9645, 5) is True, "D=9645: p(r+1) square")
    r.check(sqrt_product_in_K1_test(645, 5) is False, "D=645: p(r+1) not square (frozen)")
    for D in case2_family(max_d):
        tag = classify_case(D)
        if sqrt_product_in_K1_test(D, tag.p):
            continue
        rec, v = evaluate(D)
        r.check(
            v.kind == "A1" and v.confidence == "proven" and v.theorem == T_CASE2,
            f"D={D}: {v.line()}",
        )
    return r


# fundamental units quoted as fixtures: d -> (x, y, k, norm) meaning (x + y sqrt d)/k
UNIT_FIXTURES = {2: (1, 1, 1, -1), 5: (1, 1, 2, -1), 65: (8, 1, 1, -1), 442: (21, 1, 1, -1)}


def suite_units() -> SuiteResult:
    r = SuiteResult("units")
    for d, (x, y, k, norm) in UNIT_FIXTURES.items():
        u = fundamental_unit(d)
        r.check((u.x * k, u.y * k, u.norm) == (x, y, norm), f"eps_{d} = {u}")
        r.check(x * x - d * y * y == norm * k * k, f"Pell identity for eps_{d}")
        smaller = [(a, b) for a, b in _bounded_units(d, y) if (b, a) < (y, x)]
        r.check(not smaller, f"eps_{d}: smaller units {smaller}")
    return r


def _principality_pairs():
    """(D, m) pairs met by the family suites: -1 in every D, and the ramified q, p of cases 2, 3."""
    pairs = set()
    for p, q in scholz_pairs():
        pairs.add((p * q, -1))
    for D in pq_family(30000):
        pairs.add((D, -1))
        pairs.add((2 * D, -1))
    for D in pq_family(30000, (5, 8), (5, 8)):
        pairs.add((D, -1))
        pairs.add((2 * D, -1))
    for D in pq_family(30000, (5, 8), (1, 8)):
        tag = classify_case(D)
        if tag.case != "Case3":
            continue
        for m in (tag.q, -tag.q):
            pairs.add((D, m))
            pairs.add((2 * D, m))
        pairs.add((D, -1))
        pairs.add((2 * D, -1))
    for D in case2_family(30000):
        tag = classify_case(D)
        pairs.update({(D, tag.p), (D, -tag.p), (D, -1), (2 * D, -1)})
    return sorted(pairs)


def suite_principality() -> SuiteResult:
    r = SuiteResult("principality", unit="pairs")
    for D, m in _principality_pairs():
        a, b = represents_by_principal(D, m), principal_represents_oracle(D, m)
        r.check(a == b, f"(D={D}, m={m}): forms {a}, continued fraction {b}")
    return r


def suite_fixtures() -> SuiteResult:
    r = SuiteResult("fixtures")
    for sub in (suite_units(), suite_case3()):
        r.total += sub.total
        r.passed += sub.passed
        r.failures += sub.failures
    r.check(sqrt_product_in_K1_test(9645, 5) is True, "D=9645: p(r+1) square")
    r.check(sqrt_product_in_K1_test(645, 5) is False, "D=645: p(r+1) not square (frozen)")
    fsu = {D: fsu_classify(D) for D in (15, 85, 221)}
    r.check((fsu[15].case_id, fsu[15].hasse_index) == (4, 2), "D=15: unit system 4, Q=2")
    r.check((fsu[85].case_id, fsu[85].hasse_index) == (1, 1), "D=85: unit system 1, Q=1")
    r.check((fsu[221].case_id, fsu[221].hasse_index) == (1, 1), "D=221: unit system 1, Q=1")
    r.check([kubota_kuroda_A1(D) for D in (15, 85, 221)] == [2, 2, 4], "|A1| for 15, 85, 221")
    r.check(classify_case(205).case == "OutOfScope", "D=205 out of scope")
    r.check(any("X_inf = A2" in n for n in evaluate(9645)[1].notes), "D=9645 carries the layer-2 annotation")
    return r


SUITES = {
    "scholz": suite_scholz,
    "genus": suite_genus,
    "redei": suite_redei,
    "prop-case1": suite_prop_case1,
    "azizi": suite_azizi,
    "case2-family": suite_case2,
    "principality": suite_principality,
    "fixtures": suite_fixtures,
}


def run_suite(name: str) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    t = time.perf_counter()
    r = SUITES[name]()
    r.seconds = time.perf_counter() - t
    return r
