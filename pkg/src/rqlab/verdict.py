"""Family classification, invariant records and verdicts on X_inf.

The verdict engine only repeats what the known results allow: each family
statement is applied when its hypotheses were checked by machine, and Fukuda's
stability theorem turns |A1| = |A0| into X_inf = A0.  Whenever two statements
apply they must agree on |X_inf|; otherwise :class:`InconsistencyError` is
raised, because that can only be an arithmetic bug.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

from .arith import (
    GaussianInt,
    factorize,
    gaussian_quadratic_symbol,
    is_prime,
    is_squarefree,
    jacobi,
    primary_prime_over,
    quartic_symbol,
    quartic_symbol_mod2,
)
from .biquad import fsu_classify, is_square_in_K1, kubota_kuroda_A1, unit_product
from .pell import fundamental_unit, sqrt_product_in_K1_test
from .qforms import ideal_over_is_principal, redei_four_rank, two_sylow

__all__ = [
    "CASES",
    "CaseTag",
    "ScholzPrediction",
    "InvariantRecord",
    "Verdict",
    "InconsistencyError",
    "classify_case",
    "scholz_classify",
    "azizi_condition",
    "azizi_predicts_sqrt",
    "build_record",
    "decide",
    "evaluate",
    "PAPER_ANNOTATIONS",
]

CASES = ("Case1-q3mod4", "Case1-q5mod8", "Case2", "Case3", "OutOfScope")

# X_inf for these D needs layer-2 data; the values are quoted, not recomputed
PAPER_ANNOTATIONS = {
    5 * 3 * 163: "reported in the literature: X_inf = A1 (needs layer 2, not recomputed)",
    5 * 3 * 643: "reported in the literature: X_inf = A2 (needs layer 2, not recomputed)",
}

# principality of the prime over q is tested directly up to this size
PRINCIPALITY_LIMIT = 10**7

T_CASE1 = "Proposition on D=pq, p=5 mod 8, q=3 mod 4"
T_CASE1_Q5 = "Proposition on D=pq, p=q=5 mod 8"
T_CASE2 = "Theorem on D=pq1q2 with (p/q1)=(p/q2)=-1"
T_PQCASE = "Corollary on D=pq, q=1 mod 8"
T_FUKUDA = "Fukuda stability (|A1| = |A0|)"
T_CONJ = "open conjecture for q = 9 mod 16"


class InconsistencyError(AssertionError):
    """Two applicable statements (or a statement and the computed data) disagree."""


@dataclass(frozen=True)
class CaseTag:
    case: str
    primes: tuple[int, ...]
    p: int | None = None
    q: int | None = None
    q1: int | None = None
    q2: int | None = None

    def describe(self) -> str:
        classes = ", ".join(f"{r}={r % 8} mod 8" for r in self.primes)
        return f"{self.case} [{classes}]"


def classify_case(D: int) -> CaseTag:
    """Which of the three families D belongs to, if any."""
    if D <= 1 or not is_squarefree(D):
        raise ValueError(f"D must be squarefree and > 1, got {D}")
    primes = tuple(sorted(factorize(D)))
    out = CaseTag("OutOfScope", primes)
    if D % 2 == 0:
        return out
    fives = [r for r in primes if r % 8 == 5]
    if len(primes) == 2 and fives:
        p = fives[0]
        q = primes[0] if primes[1] == p else primes[1]
        if q % 4 == 3:
            return CaseTag("Case1-q3mod4", primes, p=p, q=q)
        if q % 8 == 5:
            return CaseTag("Case1-q5mod8", primes, p=p, q=q)
        if quartic_symbol(2, q) != quartic_symbol_mod2(q):
            return CaseTag("Case3", primes, p=p, q=q)
        return out
    if len(primes) == 3 and len(fives) == 1:
        p = fives[0]
        rest = [r for r in primes if r != p]
        if all(r % 4 == 3 for r in rest) and any(r % 8 == 3 for r in rest):
            # q1 = 3 mod 8; when both are, the smaller one
            q1 = rest[0] if rest[0] % 8 == 3 else rest[1]
            q2 = rest[1] if q1 == rest[0] else rest[0]
            return CaseTag("Case2", primes, p=p, q1=q1, q2=q2)
    return out


# ---------------------------------------------------------------------------
# Scholz and the symbol criterion


@dataclass(frozen=True)
class ScholzPrediction:
    """Scholz's branch restated on 2-parts: h2_narrow/h2 exact, or a lower bound."""

    branch: str
    h2_narrow: int | None
    h2_narrow_at_least: int
    h2: int | None
    norm: int | None

    def matches(self, h2_narrow: int, h2: int, norm: int) -> bool:
        if self.h2_narrow is not None and h2_narrow != self.h2_narrow:
            return False
        if h2_narrow < self.h2_narrow_at_least:
            return False
        if self.h2 is not None and h2 != self.h2:
            return False
        return self.norm is None or norm == self.norm


def scholz_classify(p: int, q: int) -> ScholzPrediction:
    """Branch of Scholz's theorem for primes p != q, both = 1 mod 4."""
    if p == q or p % 4 != 1 or q % 4 != 1 or not (is_prime(p) and is_prime(q)):
        raise ValueError(f"need distinct primes = 1 mod 4, got {p}, {q}")
    if jacobi(p, q) == -1:
        # h+ = h = 2 mod 4
        return ScholzPrediction("1", 2, 2, 2, -1)
    s, t = quartic_symbol(p, q), quartic_symbol(q, p)
    if s != t:
        # h+ = 2h = 4 mod 8
        return ScholzPrediction("2i", 4, 4, 2, 1)
    if s == -1:
        # h+ = h = 4 mod 8
        return ScholzPrediction("2ii", 4, 4, 4, -1)
    # h+ = 0 mod 8
    return ScholzPrediction("2iii", None, 8, None, None)


def _check_five_mod_eight(p: int, q: int):
    if p == q or p % 8 != 5 or q % 8 != 5 or not (is_prime(p) and is_prime(q)):
        raise ValueError(f"need distinct primes = 5 mod 8, got {p}, {q}")


def _gaussian_symbols(p: int, q: int) -> tuple[int, int]:
    eps = fundamental_unit(p * q)
    if eps.norm != -1:
        raise ValueError(f"the Gaussian criterion needs N(eps_{p * q}) = -1")
    x = int(eps.x)
    one_plus_i = GaussianInt(1, 1)
    return (
        gaussian_quadratic_symbol(one_plus_i, primary_prime_over(p, x)),
        gaussian_quadratic_symbol(one_plus_i, primary_prime_over(q, x)),
    )


def azizi_condition(p: int, q: int) -> int:
    """Symbol criterion for sqrt(eps_D eps_2D eps_2) in K1, D = pq, p = q = 5 mod 8.

    For (p/q) = -1 this is (pq/2)_4 (2p/q)_4 (2q/p)_4, and -1 means the root
    exists.  For (p/q) = +1 it is +1 iff (1+i/pi1)_2 = (1+i/pi2)_2 at the
    primary primes pi1 | p, pi2 | q dividing x + i, where eps_D = x + y sqrt D;
    here +1 means the root exists.  See :func:`azizi_predicts_sqrt`.
    """
    _check_five_mod_eight(p, q)
    if jacobi(p, q) == -1:
        return quartic_symbol_mod2(p * q) * quartic_symbol(2 * p, q) * quartic_symbol(2 * q, p)
    s1, s2 = _gaussian_symbols(p, q)
    return 1 if s1 == s2 else -1


def azizi_predicts_sqrt(p: int, q: int) -> bool:
    """Whether the symbol criterion says sqrt(eps_D eps_2D eps_2) lies in K1."""
    value = azizi_condition(p, q)
    return value == -1 if jacobi(p, q) == -1 else value == 1


# ---------------------------------------------------------------------------
# records


@dataclass
class InvariantRecord:
    """Everything computed for one D.  ``None`` marks a field that does not apply."""

    d: int
    case: str
    primes: list[int]
    p: int | None = None
    q: int | None = None
    q1: int | None = None
    q2: int | None = None
    eps_d: str = ""
    norm_eps_d: int = 0
    eps_2d: str | None = None
    norm_eps_2d: int | None = None
    h2: int = 0
    h2_narrow: int = 0
    structure: list[int] = field(default_factory=list)
    structure_narrow: list[int] = field(default_factory=list)
    r4: int = 0
    h2_2d: int | None = None
    h2_narrow_2d: int | None = None
    structure_2d: list[int] | None = None
    structure_narrow_2d: list[int] | None = None
    r4_2d: int | None = None
    symbols: dict[str, int] = field(default_factory=dict)
    scholz_branch: str | None = None
    sqrt_test: bool | None = None
    sqrt_test_triple: bool | None = None
    pr1_square: bool | None = None
    fsu_case: int | None = None
    fsu_system: list[str] | None = None
    hasse_q: int | None = None
    a1: int | None = None
    a1_prime: int | None = None
    principal_q_k: bool | None = None
    principal_q_k2: bool | None = None
    n0_k: int = 0
    n0_k2: int = 1
    annotations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "InvariantRecord":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


@dataclass
class Verdict:
    """kind is one of "A0", "A1", "growth", "undetermined"."""

    kind: str
    theorem: str
    confidence: str
    structure: list[int] | None = None
    order: int | None = None
    notes: list[str] = field(default_factory=list)

    def short(self) -> str:
        if self.kind == "A0":
            return "A0=" + _cyclic_name(self.structure)
        if self.kind == "A1":
            return f"A1(order {self.order})"
        return self.kind

    def line(self) -> str:
        if self.kind == "A0":
            head = f"X_inf = {_cyclic_name(self.structure)}"
        elif self.kind == "A1":
            head = f"X_inf = A1, |A1| = {self.order}"
        elif self.kind == "growth":
            head = f"X_inf undetermined, |A1| = 2|A0| = {self.order}"
        else:
            head = "X_inf undetermined"
        return f"{head} ({self.confidence}; {self.theorem})"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Verdict":
        return cls(**data)


def _cyclic_name(structure) -> str:
    if not structure:
        return "1"
    return " x ".join(f"C{n}" for n in structure)


def build_record(D: int) -> InvariantRecord:
    """Compute all invariants for D (deterministic)."""
    tag = classify_case(D)
    rec = InvariantRecord(D, tag.case, list(tag.primes), tag.p, tag.q, tag.q1, tag.q2)
    eps = fundamental_unit(D)
    rec.eps_d, rec.norm_eps_d = str(eps), eps.norm
    t0 = two_sylow(D)
    rec.h2, rec.h2_narrow = t0.h2, t0.h2_narrow
    rec.structure, rec.structure_narrow = list(t0.ordinary), list(t0.narrow)
    rec.r4 = redei_four_rank(D)
    if D in PAPER_ANNOTATIONS:
        rec.annotations.append(PAPER_ANNOTATIONS[D])
    if D % 2 == 0:
        return rec

    eps2 = fundamental_unit(2 * D)
    rec.eps_2d, rec.norm_eps_2d = str(eps2), eps2.norm
    t1 = two_sylow(2 * D)
    rec.h2_2d, rec.h2_narrow_2d = t1.h2, t1.h2_narrow
    rec.structure_2d, rec.structure_narrow_2d = list(t1.ordinary), list(t1.narrow)
    rec.r4_2d = redei_four_rank(2 * D)
    fsu = fsu_classify(D)
    rec.fsu_case, rec.fsu_system, rec.hasse_q = fsu.case_id, list(fsu.labels), fsu.hasse_index
    rec.a1 = kubota_kuroda_A1(D)
    rec.sqrt_test = (1, 1, 0) in fsu.square_classes
    rec.sqrt_test_triple = is_square_in_K1(unit_product(D, (1, 1, 1)))[0]

    p, q = tag.p, tag.q
    sym = rec.symbols
    if tag.case in ("Case1-q5mod8", "Case3"):
        sym["(p/q)"] = jacobi(p, q)
        if sym["(p/q)"] == 1:
            sym["(p/q)_4"] = quartic_symbol(p, q)
            sym["(q/p)_4"] = quartic_symbol(q, p)
        rec.scholz_branch = scholz_classify(p, q).branch
    if tag.case == "Case1-q5mod8":
        if sym["(p/q)"] == -1 or eps.norm == -1:
            sym["azizi"] = azizi_condition(p, q)
    elif tag.case == "Case1-q3mod4":
        sym["(p/q)"] = jacobi(p, q)
    elif tag.case == "Case3":
        sym["(2/q)_4"] = quartic_symbol(2, q)
        sym["(q/2)_4"] = quartic_symbol_mod2(q)
        if jacobi(2 * p, q) == 1:
            sym["(2p/q)_4"] = quartic_symbol(2 * p, q)
        if q <= PRINCIPALITY_LIMIT:
            rec.principal_q_k = ideal_over_is_principal(D, q)
            rec.principal_q_k2 = ideal_over_is_principal(2 * D, q)
    elif tag.case == "Case2":
        sym["(p/q1)"] = jacobi(p, tag.q1)
        sym["(p/q2)"] = jacobi(p, tag.q2)
        rec.pr1_square = sqrt_product_in_K1_test(D, p)
        rec.a1_prime = 4
    return rec


# ---------------------------------------------------------------------------
# verdicts


def _require(ok: bool, what: str, D: int):
    if not ok:
        raise InconsistencyError(f"D={D}: {what}")


def _cross_checks(rec: InvariantRecord):
    """Consistency of the computed data with the statements it must satisfy."""
    D, sym = rec.d, rec.symbols
    if rec.a1 is not None and rec.fsu_case is not None:
        _require(rec.a1 * 4 == rec.hasse_q * rec.h2 * rec.h2_2d, "Kubota-Kuroda formula", D)
    if rec.scholz_branch is not None:
        pred = scholz_classify(rec.p, rec.q)
        _require(pred.matches(rec.h2_narrow, rec.h2, rec.norm_eps_d), f"Scholz branch {pred.branch}", D)
    if rec.case == "Case1-q3mod4":
        _require(rec.structure == [2], "A0 = C2 for q = 3 mod 4", D)
        _require(rec.fsu_case == 4 and rec.sqrt_test, "sqrt(eps_D eps_2D) in K1 for q = 3 mod 4", D)
    if "azizi" in sym:
        _require(
            azizi_predicts_sqrt(rec.p, rec.q) == rec.sqrt_test_triple,
            "symbol criterion vs sqrt(eps_D eps_2D eps_2)",
            D,
        )
    if _double_minus_one(rec):
        _require(rec.fsu_case in (1, 4), "unit system 1 or {sqrt(eps_D eps_2D), eps_D, eps_2}", D)
    if rec.pr1_square is not None and _double_minus_one(rec):
        _require(rec.pr1_square == rec.sqrt_test, "p(r+1) square test vs sqrt(eps_D eps_2D)", D)
    if rec.case == "Case3":
        pq, s, t = sym["(p/q)"], sym.get("(p/q)_4"), sym.get("(q/p)_4")
        if rec.norm_eps_d == -1 and rec.principal_q_k is not None:
            _require(not rec.principal_q_k, "N(eps_D) = -1 forces q non-principal in K", D)
        if rec.norm_eps_2d == -1 and rec.principal_q_k2 is not None:
            _require(not rec.principal_q_k2, "N(eps_2D) = -1 forces q non-principal in K'", D)
        if pq == -1:
            _require(rec.structure_2d == [2, 2] and rec.fsu_case == 1, "A0' = C2 x C2 and unit system 1", D)
        if pq == 1 and s == t == 1:
            _require(rec.norm_eps_2d == 1, "both quartic symbols +1 force N(eps_2D) = 1", D)
            if rec.principal_q_k2 is not None:
                _require(rec.principal_q_k2, "both quartic symbols +1 force q principal in K'", D)
        if pq == 1 and s != t and rec.principal_q_k2 is not None:
            _require(
                (not rec.principal_q_k2) == (rec.norm_eps_2d == -1),
                "q non-principal in K' iff N(eps_2D) = -1",
                D,
            )
        if pq == 1 and s != t and rec.q % 16 == 1:
            if rec.norm_eps_2d == -1:
                _require(rec.fsu_case == 1 and 2 * rec.a1 == rec.h2_2d, "|A1| = |A0'|/2", D)
            else:
                _require(rec.fsu_case == 4, "unit system {sqrt(eps_D eps_2D), eps_D, eps_2}", D)
            if sym.get("(2p/q)_4") == -1:
                _require(
                    rec.norm_eps_2d == -1 and rec.a1 == 4 and rec.structure_2d == [4, 2],
                    "(2p/q)_4 = -1 forces N(eps_2D) = -1, |A1| = 4, A0' = C4 x C2",
                    D,
                )


def _double_minus_one(rec: InvariantRecord) -> bool:
    # D = p q1 q2 with q1 = q2 = 3 mod 8 and (p/q1) = (p/q2) = -1
    return (
        rec.case == "Case2"
        and rec.q1 % 8 == 3
        and rec.q2 % 8 == 3
        and rec.symbols["(p/q1)"] == rec.symbols["(p/q2)"] == -1
    )


def _family_verdict(rec: InvariantRecord) -> Verdict | None:
    sym = rec.symbols
    a0 = rec.structure
    if rec.case == "Case1-q3mod4":
        return Verdict("A0", T_CASE1, "proven", [2], 2)
    if rec.case == "Case1-q5mod8":
        pq, s, t = sym["(p/q)"], sym.get("(p/q)_4"), sym.get("(q/p)_4")
        if pq == 1 and s != t:
            return Verdict("A0", T_CASE1_Q5 + ", part 1", "proven", a0, rec.h2)
        if pq == 1 and s == t == 1 and rec.norm_eps_d == 1:
            return Verdict("A0", T_CASE1_Q5 + ", part 3(i)", "proven", a0, rec.h2)
        part = "part 2" if (pq == -1 or s == -1) else "part 3(ii)"
        if not rec.sqrt_test_triple:
            return Verdict("A0", f"{T_CASE1_Q5}, {part}", "proven", a0, rec.h2)
        return Verdict("growth", f"{T_CASE1_Q5}, {part}", "undetermined", None, 2 * rec.h2)
    if rec.case == "Case2":
        if _double_minus_one(rec) and not rec.sqrt_test:
            return Verdict("A1", T_CASE2, "proven", None, rec.a1)
        return None
    if rec.case == "Case3":
        pq, s, t = sym["(p/q)"], sym.get("(p/q)_4"), sym.get("(q/p)_4")
        if pq == -1:
            return Verdict("A0", T_PQCASE + ", item i", "proven", a0, rec.h2)
        if s == t == -1:
            return Verdict("A0", T_PQCASE + ", item ii", "proven", a0, rec.h2)
        if s == t == 1:
            if rec.principal_q_k is False:
                return Verdict("A0", T_PQCASE + ", item iii", "proven", a0, rec.h2)
            if rec.principal_q_k is None and rec.norm_eps_d == -1:
                return Verdict("A0", T_PQCASE + ", item iii via N(eps_D) = -1", "conditional", a0, rec.h2)
            return None
        if rec.q % 16 == 1:
            if rec.principal_q_k2 is False:
                return Verdict("A1", T_PQCASE + ", item iv", "proven", None, rec.a1)
            if rec.principal_q_k2 is None and rec.norm_eps_2d == -1:
                return Verdict("A1", T_PQCASE + ", item iv via N(eps_2D) = -1", "conditional", None, rec.a1)
        return None
    return None


def _conjecture_applies(rec: InvariantRecord) -> bool:
    sym = rec.symbols
    return (
        rec.case == "Case3"
        and sym.get("(p/q)") == 1
        and sym.get("(p/q)_4") != sym.get("(q/p)_4")
        and rec.q % 16 == 9
        and rec.norm_eps_2d == -1
    )


def decide(rec: InvariantRecord) -> Verdict:
    """Verdict from a record, strongest applicable statement first."""
    if rec.case == "OutOfScope":
        return Verdict("undetermined", "outside the three families", "undetermined")
    _cross_checks(rec)
    family = _family_verdict(rec)
    fukuda = None
    if rec.a1 is not None and rec.a1 == rec.h2:
        fukuda = Verdict("A0", T_FUKUDA, "proven", rec.structure, rec.h2)
    if family is not None and fukuda is not None and family.kind in ("A0", "A1"):
        _require(family.order == fukuda.order, f"{family.theorem} vs {T_FUKUDA}", rec.d)
    if family is not None and family.kind == "A0":
        _require(family.order == rec.h2 and family.structure == rec.structure, f"{family.theorem} vs A0", rec.d)
        _require(rec.a1 is None or rec.a1 == rec.h2, f"{family.theorem} needs |A1| = |A0|", rec.d)
    if family is not None and family.kind == "growth":
        _require(rec.a1 == 2 * rec.h2, f"{family.theorem}: |A1| = 2|A0|", rec.d)
        _require(fukuda is None, "growth and stability at once", rec.d)
    verdict = family if family is not None and family.kind != "growth" else (fukuda or family)
    if verdict is None:
        verdict = Verdict("undetermined", "no applicable statement", "undetermined")
    if _conjecture_applies(rec):
        verdict.notes.append(f"conjectured X_inf = A1, unproven ({T_CONJ})")
    if rec.case == "Case2":
        verdict.notes.append("|A1'| = 4 taken from the class group lemma for K1', not computed")
        verdict.notes.append("|A2| = (q(K2)/2)*|A1| with q(K2) the unit index of K2 (display only, not computed)")
        if rec.sqrt_test_triple:
            verdict.notes.append("sqrt(eps_D eps_2D eps_2) lies in K1")
    verdict.notes.extend(rec.annotations)
    return verdict


def evaluate(D: int) -> tuple[InvariantRecord, Verdict]:
    rec = build_record(D)
    return rec, decide(rec)
