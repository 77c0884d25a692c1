"""Stepanov-style polynomial certificates for Paley cliques.

For a clique C = {a_1 = 0, a_2, ..., a_N} of P_q and a parameter n with
binom(n - 1 + (q-1)/2, (q-1)/2) != 0 mod p, the coefficients c_1..c_n solve
the Vandermonde system

    sum_i c_i (-a_i)^j = 0   (0 <= j <= n-2),    sum_i c_i (-a_i)^(n-1) = 1,

and f(x) = sum_i c_i (x - a_i)^(n-1+(q-1)/2) - 1 has degree exactly (q-1)/2,
vanishes to order n-1 at a_1..a_n and to order n at the rest of C.  Counting
roots gives (N-1) n <= (q-1)/2.

The variant system replaces the full moment conditions by those indexed by
L(n) plus a single normalising moment m, giving n (N-2) <= (q-3)/2 whenever
it is solvable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .digits import (binom_mod_p, compute_L, compute_M, is_special_form, select_n_cubic,
                     select_n_general, to_base_p)
from .errors import (BadForm, BadSubset, HypothesisFails, NOutOfRange, NoAdmissibleN,
                     NotAClique, OutOfWindow, PreconditionM)
from .ffield import Field, field_for_q
from .paley import Clique, verify_clique_euler
from .polyfq import (Matrix, Poly, gaussian_solve, multiplicity_at_least_via_hyper, pivot_columns,
                     root_multiplicity, row_reduce)

# f is stored densely only up to this q; above it checks use closed forms
MATERIALIZE_LIMIT = 10**5


def _field(clique: Clique, field: Field | None) -> Field:
    if field is None:
        return field_for_q(clique.q)
    if field.q != clique.q:
        raise BadForm(f"clique over q={clique.q} used with field of order {field.q}")
    return field


def normalize(field: Field, vertices: Sequence[int]) -> tuple[list[int], int]:
    """Translate so the first (smallest-label) vertex is 0.

    Returns the translated vertices (0 first, the rest by label) and the shift.
    """
    vs = sorted(vertices)
    if not vs:
        return [], 0
    shift = vs[0]
    moved = sorted(field.sub(v, shift) for v in vs)
    return moved, shift


def _require_clique(field: Field, vertices: Sequence[int]) -> None:
    if len(set(vertices)) != len(vertices) or not verify_clique_euler(field, list(vertices)):
        raise NotAClique(f"{list(vertices)} is not a clique of P_{field.q}")


def _neg_powers(field: Field, nodes: Sequence[int], exponents: Iterable[int]) -> list[list[int]]:
    negs = [field.neg(a) for a in nodes]
    return [[field.pow(x, l) for x in negs] for l in exponents]


def _closed_form_hyper(field: Field, nodes: Sequence[int], coeffs: Sequence[int], e: int,
                       k: int, x: int, constant: int = 0) -> int:
    """E^(k) of sum_i c_i (X - d_i)^e + constant, evaluated at X = x."""
    F = field
    b = binom_mod_p(e, k, F.p)
    acc = 0
    if b:
        for c, d in zip(coeffs, nodes):
            if c:
                acc = F.add(acc, F.mul(c, F.pow(F.sub(x, d), e - k)))
        acc = F.scale_int(acc, b)
    if k == 0:
        acc = F.add(acc, constant)
    return acc


# --- certificates ------------------------------------------------------------

@dataclass
class StepanovCertificate:
    field: Field
    vertices: tuple[int, ...]           # normalised: vertices[0] == 0
    shift: int                          # label subtracted from the input clique
    n: int
    coefficients: tuple[int, ...]
    f: Poly | None
    claimed_degree: int
    multiplicities: dict[int, int]
    required: dict[int, int]
    conclusion: tuple[int, int]         # ((N-1) n, (q-1)/2)

    @property
    def N(self) -> int:
        return len(self.vertices)

    @property
    def holds(self) -> bool:
        return self.conclusion[0] <= self.conclusion[1]

    def conclusion_text(self) -> str:
        lhs, rhs = self.conclusion
        return f"(N-1)*n = ({self.N}-1)*{self.n} = {lhs} ≤ {rhs} = (q-1)/2"

    def to_dict(self) -> dict:
        return {
            "kind": "stepanov-certificate",
            "field": self.field.to_dict(),
            "clique": Clique(self.field.q, self.vertices).to_dict(),
            "shift": self.shift,
            "n": self.n,
            "coefficients": list(self.coefficients),
            "f": None if self.f is None else list(self.f.coeffs),
            "claimed_degree": self.claimed_degree,
            "multiplicities": [[v, self.multiplicities[v]] for v in self.vertices],
            "required": [[v, self.required[v]] for v in self.vertices],
            "conclusion": list(self.conclusion),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StepanovCertificate":
        field = Field.from_dict(d["field"])
        verts = d["clique"]["vertices"]
        # keep 0 first: the stored order is the normalised one
        order = sorted(verts)
        return cls(
            field=field,
            vertices=tuple(order),
            shift=d.get("shift", 0),
            n=d["n"],
            coefficients=tuple(d["coefficients"]),
            f=None if d.get("f") is None else Poly(field, d["f"]),
            claimed_degree=d["claimed_degree"],
            multiplicities={v: m for v, m in d["multiplicities"]},
            required={v: m for v, m in d.get("required", [])},
            conclusion=tuple(d["conclusion"]),
        )


def solve_system_F(field: Field, nodes: Sequence[int]) -> list[int]:
    """Unique c with sum c_i (-a_i)^j = [j == n-1] for 0 <= j < n."""
    n = len(nodes)
    A = Matrix(field, _neg_powers(field, nodes, range(n)))
    rhs = [0] * (n - 1) + [1]
    sol = gaussian_solve(A, rhs)
    if sol is None:
        raise NotAClique("repeated vertices make system (F) singular")
    return sol


def _certificate_poly(field: Field, nodes: Sequence[int], coeffs: Sequence[int], e: int,
                      constant: int) -> Poly:
    """sum_i c_i (x - a_i)^e + constant via moments: the x^(e-k) coefficient
    is binom(e, k) * sum_i c_i (-a_i)^k."""
    F = field
    negs = [F.neg(a) for a in nodes]
    powers = [1] * len(nodes)
    out = [0] * (e + 1)
    for k in range(e + 1):
        b = binom_mod_p(e, k, F.p)
        if b:
            moment = 0
            for c, pw in zip(coeffs, powers):
                if c and pw:
                    moment = F.add(moment, F.mul(c, pw))
            out[e - k] = F.scale_int(moment, b)
        powers = [F.mul(pw, x) for pw, x in zip(powers, negs)]
    out[0] = F.add(out[0], constant)
    return Poly(F, out)


def build_certificate(clique: Clique | Sequence[int], n: int, field: Field | None = None,
                      materialize: bool | None = None) -> StepanovCertificate:
    if not isinstance(clique, Clique):
        if field is None:
            raise ValueError("a bare vertex list needs an explicit field")
        clique = Clique(field.q, tuple(clique))
    F = _field(clique, field)
    _require_clique(F, clique.vertices)
    verts, shift = normalize(F, clique.vertices)
    N = len(verts)
    if not 2 <= n <= N:
        raise NOutOfRange(f"need 2 <= n <= N = {N}, got n = {n}")
    half = F.half
    e = n - 1 + half
    lead = binom_mod_p(e, half, F.p)
    if lead == 0:
        raise HypothesisFails(f"binom({e}, {half}) is 0 mod {F.p}")
    chosen = verts[:n]
    coeffs = solve_system_F(F, chosen)
    if materialize is None:
        materialize = F.q <= MATERIALIZE_LIMIT
    required = {v: (n - 1 if i < n else n) for i, v in enumerate(verts)}
    f = None
    if materialize:
        f = _certificate_poly(F, chosen, coeffs, e, F.neg(1))
        mults = {v: root_multiplicity(f, v) for v in verts}
    else:
        mults = {}
        for i, v in enumerate(verts):
            top = required[v]
            ok = all(_closed_form_hyper(F, chosen, coeffs, e, k, v, F.neg(1)) == 0
                     for k in range(top))
            mults[v] = top if ok else 0
    return StepanovCertificate(
        field=F, vertices=tuple(verts), shift=shift, n=n, coefficients=tuple(coeffs), f=f,
        claimed_degree=half, multiplicities=mults, required=required,
        conclusion=((N - 1) * n, half))


@dataclass
class CertificateReport:
    checks: dict[str, bool] = dc_field(default_factory=dict)
    notes: list[str] = dc_field(default_factory=list)
    total_required: int = 0
    total_multiplicity: int = 0
    degree: int | None = None

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def fail(self, name: str, note: str) -> None:
        self.checks[name] = False
        self.notes.append(note)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "notes": list(self.notes),
                "total_required": self.total_required,
                "total_multiplicity": self.total_multiplicity, "degree": self.degree}


def verify_certificate(cert: StepanovCertificate | dict) -> CertificateReport:
    """Re-check a certificate from scratch; failures become report entries."""
    if isinstance(cert, dict):
        cert = StepanovCertificate.from_dict(cert)
    rep = CertificateReport()
    F = cert.field
    verts = list(cert.vertices)
    n, N, half = cert.n, len(verts), F.half
    e = n - 1 + half

    distinct = len(set(verts)) == N and all(0 <= v < F.q for v in verts)
    rep.checks["clique"] = distinct and bool(verts) and verts[0] == 0 and verify_clique_euler(F, verts)
    if not rep.checks["clique"]:
        rep.notes.append("NotAClique: vertex list is not a normalised clique")
    rep.checks["n_range"] = 2 <= n <= N
    lead = binom_mod_p(e, half, F.p)
    rep.checks["hypothesis"] = lead != 0
    if not (rep.checks["n_range"] and distinct):
        rep.notes.append("NOutOfRange or repeated vertices: remaining checks skipped")
        return rep

    chosen = verts[:n]
    coeffs = list(cert.coefficients)
    if len(coeffs) != n:
        rep.fail("system_F", f"expected {n} coefficients, got {len(coeffs)}")
        return rep
    residual = Matrix(F, _neg_powers(F, chosen, range(n))).apply(coeffs)
    rep.checks["system_F"] = residual == [0] * (n - 1) + [1]
    if not rep.checks["system_F"]:
        rep.notes.append(f"system (F) residual {residual}")

    required = {v: (n - 1 if i < n else n) for i, v in enumerate(verts)}
    rep.total_required = sum(required.values())

    # closed-form derivative evaluations, independent of any stored polynomial
    closed = True
    for i, v in enumerate(verts):
        for k in range(required[v]):
            if _closed_form_hyper(F, chosen, coeffs, e, k, v, F.neg(1)) != 0:
                closed = False
                rep.notes.append(f"E^({k}) f({v}) != 0")
    rep.checks["hyper_closed_form"] = closed

    if cert.f is not None:
        # rebuild f by expanding each (x - a_i)^e separately
        rebuilt = Poly(F, [F.neg(1)])
        for c, a in zip(coeffs, chosen):
            rebuilt = rebuilt + Poly.linear_power(F, a, e).scale(c)
        rep.checks["f_matches"] = rebuilt == cert.f
        f = cert.f
        rep.degree = f.degree
        rep.checks["degree"] = (f.degree == half == cert.claimed_degree
                                and f.coeffs[half] == F.scale_int(1, lead))
        if f.is_zero():
            rep.fail("multiplicity_division", "f is the zero polynomial")
            return rep
        div_ok = hyp_ok = True
        total = 0
        for v in verts:
            mult = root_multiplicity(f, v)
            total += mult
            if mult < required[v] or cert.multiplicities.get(v) != mult:
                div_ok = False
                rep.notes.append(f"multiplicity at {v}: found {mult}, need {required[v]}")
            if not multiplicity_at_least_via_hyper(f, v, required[v]):
                hyp_ok = False
                rep.notes.append(f"hyper-derivative criterion fails at {v}")
        rep.total_multiplicity = total
        rep.checks["multiplicity_division"] = div_ok
        rep.checks["multiplicity_hyper"] = hyp_ok
        rep.checks["ledger"] = rep.total_required <= total <= f.degree
    else:
        rep.degree = half if lead else None
        rep.checks["degree"] = bool(lead) and cert.claimed_degree == half
        rep.total_multiplicity = sum(cert.multiplicities.get(v, 0) for v in verts)
        rep.checks["ledger"] = closed and rep.total_required <= half
    rep.checks["conclusion"] = (tuple(cert.conclusion) == ((N - 1) * n, half)
                                and (N - 1) * n <= half)
    return rep


# --- choosing n --------------------------------------------------------------

@dataclass
class CertificateBound:
    q: int
    N: int
    n: int
    bound: int                 # largest N' with (N'-1) n <= (q-1)/2
    method: str
    selected_n: int | None     # n from the digit construction, when it applies
    odd_power_case: bool        # q an odd power of p = 1 mod 4
    admissible: list[int]
    certificate: StepanovCertificate

    def to_dict(self) -> dict:
        return {"q": self.q, "N": self.N, "n": self.n, "bound": self.bound,
                "method": self.method, "selected_n": self.selected_n,
                "odd_power_case": self.odd_power_case, "admissible": self.admissible}


def certificate_bound_for_clique(clique: Clique, field: Field | None = None,
                        materialize: bool | None = None) -> CertificateBound:
    F = _field(clique, field)
    _require_clique(F, clique.vertices)
    N = len(clique.vertices)
    p, r, half = F.p, F.r, F.half
    odd_power_case = r % 2 == 1 and p % 4 == 1
    selected = None
    if odd_power_case and r >= 3:
        s = (r - 1) // 2
        try:
            selected = select_n_cubic(N, p) if s == 1 else select_n_general(N, p, s)
        except (OutOfWindow, BadForm):
            selected = None
    admissible = [n for n in range(2, N + 1) if binom_mod_p(n - 1 + half, half, p)]
    if not admissible:
        raise NoAdmissibleN(f"no n in [2, {N}] satisfies the binomial hypothesis for q={F.q}")
    n = max(admissible)
    method = "select_n" if selected == n else "scan"
    cert = build_certificate(clique, n, F, materialize=materialize)
    return CertificateBound(q=F.q, N=N, n=n, bound=half // n + 1, method=method, selected_n=selected,
                   odd_power_case=odd_power_case, admissible=admissible, certificate=cert)


# --- the variant system ------------------------------------------------------

@dataclass
class VariantReport:
    q: int
    n: int
    m: int
    D: tuple[int, ...]
    L: tuple[int, ...]
    solvable: bool
    coefficients: tuple[int, ...] | None = None
    checks: dict[str, bool] = dc_field(default_factory=dict)
    conclusion: tuple[int, int] | None = None   # (n (N-2), (q-3)/2)

    @property
    def holds(self) -> bool | None:
        return None if self.conclusion is None else self.conclusion[0] <= self.conclusion[1]

    def to_dict(self) -> dict:
        return {"q": self.q, "n": self.n, "m": self.m, "D": list(self.D), "L": list(self.L),
                "solvable": self.solvable,
                "coefficients": None if self.coefficients is None else list(self.coefficients),
                "checks": dict(self.checks),
                "conclusion": None if self.conclusion is None else list(self.conclusion)}


def _check_m(n: int, m: int, F: Field) -> None:
    if not n <= m <= F.half:
        raise PreconditionM(f"m = {m} outside [{n}, {F.half}]")
    if binom_mod_p(n - 1 + F.half, m, F.p) == 0:
        raise PreconditionM(f"binom({n - 1 + F.half}, {m}) vanishes mod {F.p}")


def build_variant_system(clique: Clique, D: Iterable[int], n: int, m: int,
                         field: Field | None = None, materialize: bool | None = None,
                         L: Sequence[int] | None = None) -> VariantReport:
    """Assemble and solve the variant system for the n-subset D of the clique.

    D is given in the clique's own labels; both are translated together so
    that the clique's smallest label becomes 0.
    """
    F = _field(clique, field)
    _require_clique(F, clique.vertices)
    if n < 2:
        raise NOutOfRange("the variant system needs n >= 2")
    D = sorted(set(D))
    if len(D) != n or not set(D) <= set(clique.vertices):
        raise BadSubset(f"D = {D} is not an {n}-subset of the clique")
    _check_m(n, m, F)
    verts, shift = normalize(F, clique.vertices)
    Dn = sorted(F.sub(d, shift) for d in D)
    N = len(verts)
    L = sorted(compute_L(n, F.q, F.p)) if L is None else sorted(L)
    A = Matrix(F, _neg_powers(F, Dn, L + [m]), ncols=n)
    rhs = [0] * len(L) + [1]
    sol = gaussian_solve(A, rhs)
    rep = VariantReport(q=F.q, n=n, m=m, D=tuple(Dn), L=tuple(L), solvable=sol is not None)
    if sol is None:
        return rep
    rep.coefficients = tuple(sol)
    e = n - 1 + F.half
    required = {v: (n - 1 if v in Dn else n) for v in verts}
    if materialize is None:
        materialize = F.q <= MATERIALIZE_LIMIT
    if materialize:
        f = _certificate_poly(F, Dn, sol, e, 0)
        rep.checks["nonzero"] = not f.is_zero()
        rep.checks["m_coefficient"] = (f.coeffs[e - m] if e - m <= f.degree else 0) == \
            F.scale_int(1, binom_mod_p(e, m, F.p))
        if f.is_zero():
            return rep
        div_ok = all(root_multiplicity(f, v) >= required[v] for v in verts)
        hyp_ok = all(multiplicity_at_least_via_hyper(f, v, required[v]) for v in verts)
        rep.checks["multiplicity_division"] = div_ok
        rep.checks["multiplicity_hyper"] = hyp_ok
        rep.checks["ledger"] = sum(required.values()) <= f.degree <= e
    else:
        ok = all(_closed_form_hyper(F, Dn, sol, e, k, v) == 0
                 for v in verts for k in range(required[v]))
        rep.checks["hyper_closed_form"] = ok
        rep.checks["ledger"] = ok and sum(required.values()) <= e
    if all(rep.checks.values()):
        rep.conclusion = (n * (N - 2), (F.q - 3) // 2)
    return rep


def build_A_matrix(clique: Clique, n: int, m: int, field: Field | None = None,
                   L: Sequence[int] | None = None) -> Matrix:
    """Rows ((-a_i)^l)_i for l in sorted L(n), then l = m; one column per vertex."""
    F = _field(clique, field)
    _require_clique(F, clique.vertices)
    _check_m(n, m, F)
    verts, _ = normalize(F, clique.vertices)
    L = sorted(compute_L(n, F.q, F.p)) if L is None else sorted(L)
    return Matrix(F, _neg_powers(F, verts, L + [m]), ncols=len(verts))


# --- the conjecture scan -----------------------------------------------------

@dataclass
class ConjectureScanReport:
    q: int
    n: int
    N: int
    L: tuple[int, ...]
    M_size: int
    first_rows_rank: int
    verdicts: list[tuple[int, bool]]       # (m, last row independent of the L rows)
    strict: bool
    digit_lemma_ok: bool | None = None
    variants: list[VariantReport] = dc_field(default_factory=list)
    implied_bound: tuple[int, int] | None = None
    conditional_constant: float | None = None
    notes: list[str] = dc_field(default_factory=list)

    @property
    def exists_independent(self) -> bool:
        return any(ind for _, ind in self.verdicts)

    @property
    def independent_ms(self) -> list[int]:
        return [m for m, ind in self.verdicts if ind]

    def to_dict(self) -> dict:
        return {"q": self.q, "n": self.n, "N": self.N, "L": list(self.L),
                "L_size": len(self.L), "M_size": self.M_size,
                "first_rows_rank": self.first_rows_rank,
                "verdicts": [[m, ind] for m, ind in self.verdicts],
                "exists_independent": self.exists_independent, "strict": self.strict,
                "digit_lemma_ok": self.digit_lemma_ok,
                "variants": [v.to_dict() for v in self.variants],
                "implied_bound": None if self.implied_bound is None else list(self.implied_bound),
                "conditional_constant": self.conditional_constant, "notes": list(self.notes)}


def digit_lemma_holds(L: Iterable[int], p: int, s: int) -> bool:
    """Every l has l_0 <= (p+1)/2 and l_j <= (p-1)/2 for 1 <= j <= s-2."""
    h = (p - 1) // 2
    for l in L:
        d = to_base_p(l, p)
        if d[0] > h + 1 or any(d[j] > h for j in range(1, s - 1)):
            return False
    return True


def _candidate_subsets(verts: list[int], core: list[int], n: int, cap: int):
    """n-subsets containing ``core``, lexicographic in label order."""
    rest = [v for v in verts if v not in core]
    need = n - len(core)
    if need < 0 or need > len(rest):
        return
    for i, extra in enumerate(itertools.combinations(rest, need)):
        if i >= cap:
            return
        yield sorted(core + list(extra))


def conjecture_scan(clique: Clique, n: int, field: Field | None = None, strict: bool = False,
                    try_variant: bool = True, max_variant_m: int = 3,
                    max_subsets: int = 200) -> ConjectureScanReport:
    F = _field(clique, field)
    _require_clique(F, clique.vertices)
    p, r, q = F.p, F.r, F.q
    s = (r - 1) // 2
    if strict:
        if r % 2 == 0 or s < 2 or p % 4 != 1:
            raise BadForm(f"strict mode needs q = p^(2s+1) with s >= 2 and p = 1 mod 4, got q={q}")
        if not is_special_form(n, p, s):
            raise BadForm(f"n = {n} does not have the special digit shape")
    if n < 2:
        raise NOutOfRange("the scan needs n >= 2")
    verts, _ = normalize(F, clique.vertices)
    N = len(verts)
    L = sorted(compute_L(n, q, p))
    M = sorted(compute_M(n, q, p)) if n <= F.half else []

    # reduce the L rows once; each m row is then independent iff a residual survives
    L_rows = _neg_powers(F, verts, L)
    basis = [list(row) for row in L_rows]
    pivots = row_reduce(F, basis, N)
    basis = basis[:len(pivots)]
    report = ConjectureScanReport(q=q, n=n, N=N, L=tuple(L), M_size=len(M),
                                  first_rows_rank=len(pivots), verdicts=[], strict=strict)
    if s >= 2 and r % 2 == 1:
        report.digit_lemma_ok = digit_lemma_holds(L, p, s)
    if len(pivots) < len(L):
        report.notes.append(f"|L(n)| = {len(L)} exceeds the clique size {N}; "
                            "the L rows cannot be independent")

    negs = [F.neg(a) for a in verts]
    for m in M:
        row = [F.pow(x, m) for x in negs]
        for prow, col in zip(basis, pivots):
            c = row[col]
            if c:
                row = [F.sub(a, F.mul(c, b)) for a, b in zip(row, prow)]
        report.verdicts.append((m, any(row)))

    if try_variant:
        clique_n = Clique(q, tuple(verts))
        tried = 0
        for m in report.independent_ms:
            if tried >= max_variant_m:
                break
            tried += 1
            A = Matrix(F, _neg_powers(F, verts, L + [m]), ncols=N)
            core = [verts[c] for c in pivot_columns(A)]
            if n > N:
                report.notes.append(f"m = {m}: n = {n} exceeds N = {N}; no n-subset D exists")
                continue
            if len(core) <= n:
                subsets = _candidate_subsets(verts, core, n, max_subsets)
            else:
                subsets = itertools.islice(itertools.combinations(verts, n), max_subsets)
            for D in subsets:
                vr = build_variant_system(clique_n, D, n, m, F, L=L)
                if vr.solvable:
                    report.variants.append(vr)
                    if vr.conclusion is not None:
                        report.implied_bound = vr.conclusion
                    break
        if report.implied_bound is not None and strict:
            report.conditional_constant = math.sqrt(q / 2) + (12 + math.sqrt(2)) / 8 * p ** (s - 1)
    return report
