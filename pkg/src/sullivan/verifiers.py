"""Theorem-level checkers.

Published theorems serve as test oracles for the implementation, not the
other way round: a fail verdict on a certified model means an
implementation bug until the model and the computation survive an audit.
Reports carry every derived quantity needed to re-check a verdict from
the serialized model text alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import monomial_basis
from .cohomology import engine_for
from .linalg import RatMatrix, rank
from .model import SullivanModel, length_profile
from .toomer import e0_spectrum, toomer_of_algebra

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class VerificationReport:
    theorem_id: str
    model_id: str
    verdict: str
    witnesses: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS


def _model_id(model: SullivanModel) -> str:
    return model.name or "anonymous"


def _not_applicable(theorem_id, model, reason, derived=None) -> VerificationReport:
    return VerificationReport(
        theorem_id, _model_id(model), NOT_APPLICABLE,
        {"reason": reason}, derived or {},
    )


def _hypotheses(model: SullivanModel, need_homogeneous: bool = True):
    """Common hypothesis screen: returns (profile, certificate, reason)."""
    profile = length_profile(model)
    if need_homogeneous and not profile.is_homogeneous:
        return profile, None, "differential is not of homogeneous length"
    cert = engine_for(model).certify()
    if not cert.ok:
        return profile, cert, f"no ellipticity certificate ({cert.verdict}: {cert.witness})"
    return profile, cert, None


def _e_formula(model: SullivanModel, l: int) -> int:
    return len(model.odd_generators) + (l - 2) * len(model.even_generators)


def verify_theorem2(model: SullivanModel) -> VerificationReport:
    """Category formula, no gaps, and the location conditions:
    (A) e0 = dim V^odd + (l-2) dim V^even, (B) every length 0..e0 is
    realized, (C) the n_k/N_k ladder climbs by at least the connectivity."""
    profile, cert, reason = _hypotheses(model)
    if reason:
        return _not_applicable("theorem2", model, reason)
    engine = engine_for(model)
    l = profile.l
    e = _e_formula(model, l)
    report = e0_spectrum(model)
    table = engine.bigraded_profile()
    p = model.min_degree

    derived = {
        "e": e, "l": l, "p": p,
        "e0": report.e0_algebra,
        "mu": list(report.spectrum),
        "n_k": list(table.n_k),
        "N_k": list(table.N_k),
    }
    derived.update(_quotient_ladder(model))
    witnesses = {}
    a_ok = report.e0_algebra == e
    if not a_ok:
        witnesses["A"] = f"toomer_of_algebra = {report.e0_algebra} != e = {e}"
    b_ok = len(report.spectrum) == e + 1 and all(m > 0 for m in report.spectrum)
    if not b_ok:
        witnesses["B"] = f"spectrum {list(report.spectrum)} has a gap below e = {e}"
    c_ok, c_witness = _condition_c(table, p, e)
    if not c_ok:
        witnesses["C"] = c_witness
    verdict = PASS if (a_ok and b_ok and c_ok) else FAIL
    return VerificationReport("theorem2", _model_id(model), verdict, witnesses, derived)


def _quotient_ladder(model: SullivanModel) -> dict:
    """The quotient model's own e/n_k/N_k (the induction bookkeeping):
    f = e(Lambda W), m_k/M_k its extremes, when W is homogeneous and
    certified."""
    from .cohomology import NotEllipticError, NotHomogeneousError
    from .model import quotient_model

    if not model.generators:
        return {}
    try:
        quotient = quotient_model(model, model.generators[0])
        if not quotient.generators:
            return {"f": 0, "m_k": [0], "M_k": [0]}
        table = engine_for(quotient).bigraded_profile()
    except (NotEllipticError, NotHomogeneousError):
        return {}
    return {"f": table.e_top, "m_k": list(table.n_k), "M_k": list(table.N_k)}


def _condition_c(table, p: int, e: int):
    n_k, N_k = table.n_k, table.N_k
    if e == 0:
        return True, None
    if len(n_k) <= e or any(v is None for v in n_k[: e + 1]):
        return False, "some H_k vanishes, the ladder is undefined"
    if n_k[1] != p:
        return False, f"n_1 = {n_k[1]} != p = {p}"
    for k in range(1, e):
        if n_k[k + 1] < n_k[k] + p:
            return False, f"n_{k + 1} = {n_k[k + 1]} < n_{k} + p = {n_k[k] + p}"
    for k in range(0, e - 1):
        if N_k[k + 1] < N_k[k] + p:
            return False, f"N_{k + 1} = {N_k[k + 1]} < N_{k} + p = {N_k[k] + p}"
    if N_k[e] != N_k[e - 1] + p:
        return False, f"N_e = {N_k[e]} != N_(e-1) + p = {N_k[e - 1] + p}"
    return True, None


def verify_lemma1(model: SullivanModel) -> VerificationReport:
    """Bigraded Poincare-duality bookkeeping: n_k = N - N_(e-k) and the
    equivalence of the two ladder conditions."""
    profile, cert, reason = _hypotheses(model)
    if reason:
        return _not_applicable("lemma1", model, reason)
    engine = engine_for(model)
    table = engine.bigraded_profile()
    e = table.e_top
    n = table.formal_dimension
    if any(table.length_dims()[k] == 0 for k in range(1, e)):
        return _not_applicable(
            "lemma1", model, "H_k = 0 for some middle k; lemma hypotheses unmet"
        )
    p = model.min_degree
    derived = {
        "e": e, "N": n, "p": p,
        "n_k": list(table.n_k), "N_k": list(table.N_k),
    }
    witnesses = {}
    dual_ok = True
    for k in range(1, e):
        if table.n_k[k] != n - table.N_k[e - k]:
            dual_ok = False
            witnesses[f"duality k={k}"] = (
                f"n_{k} = {table.n_k[k]} != N - N_(e-{k}) = {n - table.N_k[e - k]}"
            )
    cond_a = _lemma_condition_a(table, p, e)
    cond_b = _lemma_condition_b(table, p, e)
    derived["condition_a"] = cond_a
    derived["condition_b"] = cond_b
    equiv_ok = cond_a == cond_b
    if not equiv_ok:
        witnesses["equivalence"] = f"(a) = {cond_a} but (b) = {cond_b}"
    verdict = PASS if (dual_ok and equiv_ok) else FAIL
    return VerificationReport("lemma1", _model_id(model), verdict, witnesses, derived)


def _lemma_condition_a(table, p, e) -> bool:
    n_k = table.n_k
    if e == 0:
        return True
    if n_k[1] != p:
        return False
    return all(n_k[k + 1] >= n_k[k] + p for k in range(1, e))


def _lemma_condition_b(table, p, e) -> bool:
    N_k = table.N_k
    if e == 0:
        return True
    if any(N_k[k + 1] < N_k[k] + p for k in range(0, e - 1)):
        return False
    return N_k[e] == N_k[e - 1] + p


def odd_cocycle_kernel_dimension(model: SullivanModel) -> int:
    """dim ker(d restricted to the span of odd-degree generators),
    computed per degree so cocycles hiding behind a basis change of V are
    detected."""
    gens = model.generators
    total = 0
    degrees = {g.degree for g in model.odd_generators}
    for j in sorted(degrees):
        cols = [g for g in model.odd_generators if g.degree == j]
        target = monomial_basis(gens, j + 1)
        index = {m: r for r, m in enumerate(target)}
        entries = {}
        for c, g in enumerate(cols):
            for m, v in model.d_of(g.index).items():
                entries[(index[m], c)] = v
        mat = RatMatrix(len(target), len(cols), entries)
        total += len(cols) - rank(mat)
    return total


def verify_theorem3(model: SullivanModel) -> VerificationReport:
    """With an odd spherical generator, every middle length is realized
    at least twice."""
    profile, cert, reason = _hypotheses(model)
    if reason:
        return _not_applicable("theorem3", model, reason)
    l = profile.l
    e = _e_formula(model, l)
    report = e0_spectrum(model)
    derived = {"e": e, "l": l, "mu": list(report.spectrum)}
    kernel_dim = odd_cocycle_kernel_dimension(model)
    derived["odd_cocycle_kernel"] = kernel_dim
    if kernel_dim == 0:
        return _not_applicable(
            "theorem3", model,
            "ker(d: V^odd -> Lambda V) = 0; hypothesis unmet", derived,
        )
    witnesses = {}
    ok = True
    for k in range(1, e):
        if report.spectrum[k] < 2:
            ok = False
            witnesses[f"k={k}"] = f"dim H_{k} = {report.spectrum[k]} < 2"
    return VerificationReport(
        "theorem3", _model_id(model), PASS if ok else FAIL, witnesses, derived
    )


def verify_corollary4(model: SullivanModel) -> VerificationReport:
    """dim H >= 2 e0, sharp cases flagged."""
    profile, cert, reason = _hypotheses(model)
    if reason:
        return _not_applicable("corollary4", model, reason)
    engine = engine_for(model)
    total = engine.cohomology_table().total_dimension
    e0 = toomer_of_algebra(model)
    derived = {"total_dim_H": total, "e0": e0, "sharp": total == 2 * e0}
    kernel_dim = odd_cocycle_kernel_dimension(model)
    derived["odd_cocycle_kernel"] = kernel_dim
    if kernel_dim == 0:
        return _not_applicable(
            "corollary4", model,
            "ker(d: V^odd -> Lambda V) = 0; hypothesis unmet", derived,
        )
    ok = total >= 2 * e0
    witnesses = {} if ok else {"bound": f"dim H = {total} < 2 e0 = {2 * e0}"}
    return VerificationReport(
        "corollary4", _model_id(model), PASS if ok else FAIL, witnesses, derived
    )


def verify_remark2(model: SullivanModel) -> VerificationReport:
    """Lower bound e0 >= dim V^odd + (l-2) dim V^even for differentials
    of length at least l (homogeneity not required)."""
    profile = length_profile(model)
    cert = engine_for(model).certify()
    if not cert.ok:
        return _not_applicable(
            "remark2", model, f"no ellipticity certificate ({cert.verdict})"
        )
    l = profile.l
    bound = _e_formula(model, l)
    e0 = toomer_of_algebra(model)
    derived = {"l": l, "bound": bound, "e0": e0, "profile": profile.kind}
    ok = e0 >= bound
    witnesses = {} if ok else {"bound": f"e0 = {e0} < {bound}"}
    return VerificationReport(
        "remark2", _model_id(model), PASS if ok else FAIL, witnesses, derived
    )


def verify_nilmanifold(model: SullivanModel) -> VerificationReport:
    """Dixmier-type bounds for nilmanifold models (all generators in
    degree 1): b_i >= 2 for middle i, dim H >= 2 dim X, e0 = dim X."""
    if any(g.degree != 1 for g in model.generators):
        return _not_applicable(
            "nilmanifold", model, "not a nilmanifold model (generators above degree 1)"
        )
    cert = engine_for(model).certify()
    if not cert.ok:
        return _not_applicable("nilmanifold", model, "no ellipticity certificate")
    engine = engine_for(model)
    n = len(model.generators)
    table = engine.cohomology_table()
    e0 = toomer_of_algebra(model)
    derived = {
        "dim_manifold": n,
        "betti": list(table.betti),
        "total_dim_H": table.total_dimension,
        "e0": e0,
    }
    witnesses = {}
    ok = True
    for i in range(1, n):
        if table.betti[i] < 2:
            ok = False
            witnesses[f"b_{i}"] = f"b_{i} = {table.betti[i]} < 2"
    if table.total_dimension < 2 * n:
        ok = False
        witnesses["total"] = f"dim H = {table.total_dimension} < 2 dim X = {2 * n}"
    if e0 != n:
        ok = False
        witnesses["e0"] = f"e0 = {e0} != dim X = {n}"
    return VerificationReport(
        "nilmanifold", _model_id(model), PASS if ok else FAIL, witnesses, derived
    )


@dataclass(frozen=True)
class Conjecture5Record:
    model_id: str
    branch: str  # 'two-dimensional' | 'truncated-polynomial' | 'counterexample'
    e: int
    mu: tuple[int, ...]
    detail: str


def classify_conjecture5(model: SullivanModel) -> Conjecture5Record:
    """Branch (i): dim H_k >= 2 for all middle k.  Branch (ii): H is a
    truncated polynomial algebra on one generator, detected by the Betti
    pattern plus cup-power spanning.  Anything else is branch (iii), a
    counterexample to the conjecture."""
    profile, cert, reason = _hypotheses(model)
    if reason:
        raise ValueError(f"conjecture 5 scan needs homogeneous certified models: {reason}")
    engine = engine_for(model)
    report = e0_spectrum(model)
    e = report.e0_algebra
    mu = report.spectrum
    if all(mu[k] >= 2 for k in range(1, e)):
        return Conjecture5Record(
            _model_id(model), "two-dimensional", e, mu,
            "dim H_k >= 2 for k = 1..e-1",
        )
    if _is_truncated_polynomial(engine):
        return Conjecture5Record(
            _model_id(model), "truncated-polynomial", e, mu,
            "H is a truncated polynomial algebra on one generator",
        )
    return Conjecture5Record(
        _model_id(model), "counterexample", e, mu,
        "neither branch holds -- a research-grade finding if the model is audited",
    )


def _is_truncated_polynomial(engine) -> bool:
    table = engine.cohomology_table()
    n = table.formal_dimension
    if any(b not in (0, 1) for b in table.betti):
        return False
    nonzero = [i for i in range(1, n + 1) if table.betti[i]]
    if not nonzero:
        return n == 0
    p = nonzero[0]
    if n % p != 0:
        return False
    t = n // p
    if nonzero != [p * j for j in range(1, t + 1)]:
        return False
    # cup powers of the bottom class must span every step
    from .algebra import multiply

    z = engine.classes(p)[0].representative
    power = dict(z)
    for j in range(2, t + 1):
        power = multiply(engine.gens, power, z)
        coords = engine.class_coordinates(p * j, power)
        if not any(coords):
            return False
    return True


def scan_conjecture5(corpus) -> list[Conjecture5Record]:
    records = [classify_conjecture5(m) for m in corpus]
    records.sort(key=lambda r: r.model_id)
    return records


def verify_conjecture5(model: SullivanModel) -> VerificationReport:
    """Single-model view of the conjecture scan: pass on either branch,
    fail only on a counterexample (which the scan preserves loudly)."""
    profile, cert, reason = _hypotheses(model)
    if reason:
        return _not_applicable("conjecture5", model, reason)
    record = classify_conjecture5(model)
    derived = {"branch": record.branch, "e": record.e, "mu": list(record.mu)}
    if record.branch == "counterexample":
        return VerificationReport(
            "conjecture5", _model_id(model), FAIL,
            {"counterexample": record.detail}, derived,
        )
    return VerificationReport("conjecture5", _model_id(model), PASS, {}, derived)


ALL_THEOREMS = {
    "theorem2": verify_theorem2,
    "lemma1": verify_lemma1,
    "theorem3": verify_theorem3,
    "corollary4": verify_corollary4,
    "remark2": verify_remark2,
    "nilmanifold": verify_nilmanifold,
    "conjecture5": verify_conjecture5,
}


def verify_all(model: SullivanModel) -> list[VerificationReport]:
    return [check(model) for check in ALL_THEOREMS.values()]
