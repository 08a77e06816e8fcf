"""Sullivan models: construction, validation, length profiles, quotients,
the Wang derivation, and seeded random elliptic models."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Derivation,
    Generator,
    Monomial,
    Polynomial,
    apply_derivation,
    monomial_degree,
    poly,
    poly_str,
    word_length,
)


@dataclass(frozen=True)
class Violation:
    """One failed validation condition, pinned to a generator."""

    generator: str
    condition: str
    message: str

    def __str__(self) -> str:
        return f"{self.generator}: {self.condition}: {self.message}"


class ModelValidationError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class SullivanModel:
    """A minimal Sullivan algebra (Lambda V, d).

    Immutable after validation by convention; generator order is the
    declaration order and fixes the canonical monomial form, the
    triangularity requirement and quotient semantics.
    """

    def __init__(self, generators, differential: Derivation,
                 simply_connected: bool = True, name: str | None = None):
        self.generators = tuple(generators)
        self.differential = differential
        self.simply_connected = simply_connected
        self.name = name
        self.validated = False
        self._engine = None

    # -- convenience ---------------------------------------------------

    @property
    def n_gens(self) -> int:
        return len(self.generators)

    @property
    def odd_generators(self) -> list[Generator]:
        return [g for g in self.generators if g.is_odd]

    @property
    def even_generators(self) -> list[Generator]:
        return [g for g in self.generators if not g.is_odd]

    @property
    def min_degree(self) -> int:
        return min(g.degree for g in self.generators)

    def d_of(self, index: int) -> Polynomial:
        return self.differential.value_on(index)

    def d(self, p: Polynomial) -> Polynomial:
        return apply_derivation(self.generators, self.differential, p)

    def generator_named(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SullivanModel)
            and self.generators == other.generators
            and self.differential.values == other.differential.values
            and self.simply_connected == other.simply_connected
        )

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"SullivanModel({self.name or 'anonymous'}: {gens})"


def make_model(spec_gens, diffs=None, simply_connected=None, name=None) -> SullivanModel:
    """Convenience constructor: spec_gens = [(name, degree), ...],
    diffs = {gen_name: Polynomial}.  Auto-detects simple connectivity
    when the flag is not forced."""
    gens = tuple(Generator(i, n, d) for i, (n, d) in enumerate(spec_gens))
    diffs = diffs or {}
    unknown = set(diffs) - {g.name for g in gens}
    if unknown:
        raise KeyError(f"differentials for undeclared generators: {sorted(unknown)}")
    values = [poly(diffs.get(g.name, {})) for g in gens]
    if simply_connected is None:
        simply_connected = all(g.degree >= 2 for g in gens)
    model = SullivanModel(gens, Derivation(1, tuple(values)), simply_connected, name)
    return validate(model)


def check_model(model: SullivanModel) -> list[Violation]:
    """All validation violations, in staged order per generator.

    Stage 1 checks the shape of each d(v): degree shift +1 and
    decomposability.  Triangularity and d^2 = 0 are only meaningful for a
    well-shaped differential, so they run as stage 2 for generators that
    passed stage 1.
    """
    gens = model.generators
    violations: list[Violation] = []
    shape_ok: list[bool] = []

    for g in gens:
        ok = True
        if g.degree < 1:
            violations.append(Violation(g.name, "degree", "generator degree must be >= 1"))
            ok = False
        elif g.degree == 1 and model.simply_connected:
            violations.append(
                Violation(g.name, "simply-connected",
                          "degree-1 generator requires the non-simply-connected flag")
            )
            ok = False
        dv = model.d_of(g.index)
        for m in dv:
            deg = monomial_degree(gens, m)
            if deg != g.degree + 1:
                violations.append(
                    Violation(g.name, "degree-shift",
                              f"term of degree {deg}, expected {g.degree + 1}")
                )
                ok = False
                break
        for m in dv:
            if word_length(m) < 2:
                violations.append(
                    Violation(g.name, "decomposable",
                              "differential has a term of word length < 2")
                )
                ok = False
                break
        shape_ok.append(ok)

    for g in gens:
        if not shape_ok[g.index]:
            continue
        dv = model.d_of(g.index)
        for m in dv:
            if any(e and i >= g.index for i, e in enumerate(m)):
                violations.append(
                    Violation(g.name, "triangular",
                              "differential references this generator or a later one")
                )
                break
        dd = model.d(dv)
        if dd:
            violations.append(
                Violation(g.name, "d-squared", f"d(d({g.name})) = {poly_str(gens, dd)}")
            )
    return violations


def validate(model: SullivanModel) -> SullivanModel:
    """Return the model with its validated flag set, or raise
    ModelValidationError listing every violation."""
    violations = check_model(model)
    if violations:
        raise ModelValidationError(violations)
    model.validated = True
    return model


# -- length profile ----------------------------------------------------


@dataclass(frozen=True)
class LengthProfile:
    """Word-length profile of the differential.

    kind 'homogeneous': every d(v) term has length exactly l.
    kind 'bounded_below': every term has length >= l, l maximal; reported
    as the mixed case of Remark-2 type models.
    A zero differential counts as homogeneous of length 2 (coformal).
    """

    kind: str  # 'homogeneous' | 'bounded_below'
    l: int

    @property
    def is_homogeneous(self) -> bool:
        return self.kind == "homogeneous"


def length_profile(model: SullivanModel) -> LengthProfile:
    lengths = set()
    for g in model.generators:
        for m in model.d_of(g.index):
            lengths.add(word_length(m))
    if not lengths:
        return LengthProfile("homogeneous", 2)
    if len(lengths) == 1:
        return LengthProfile("homogeneous", lengths.pop())
    return LengthProfile("bounded_below", min(lengths))


# -- quotient by the first generator and the Wang derivation ------------


class QuotientError(ValueError):
    pass


def _strip_first(m: Monomial) -> Monomial:
    return m[1:]


def quotient_model(model: SullivanModel, gen: Generator) -> SullivanModel:
    """Lambda W = Lambda(v2, ..., vn) with dbar = d minus every term
    containing the stripped generator.  Requires gen to be the first
    generator and a cocycle."""
    if gen.index != 0:
        raise QuotientError(f"{gen.name} is not the first generator")
    if model.d_of(0):
        raise QuotientError(f"d({gen.name}) != 0; cannot factor out a non-cocycle")
    new_gens = tuple(
        Generator(g.index - 1, g.name, g.degree) for g in model.generators[1:]
    )
    values = []
    for g in model.generators[1:]:
        dv = model.d_of(g.index)
        stripped = {_strip_first(m): c for m, c in dv.items() if m[0] == 0}
        values.append(poly(stripped))
    quotient = SullivanModel(
        new_gens,
        Derivation(1, tuple(values)),
        simply_connected=all(g.degree >= 2 for g in new_gens),
        name=f"{model.name}/{gen.name}" if model.name else None,
    )
    return validate(quotient)


def wang_derivation(model: SullivanModel, gen: Generator) -> Derivation:
    """The derivation theta on Lambda W defined by splitting
    d(chi) = dbar(chi) + x1 * theta(chi) for an odd cocycle first
    generator x1; theta has degree shift -(|x1| - 1)."""
    if gen.index != 0:
        raise QuotientError(f"{gen.name} is not the first generator")
    if not gen.is_odd:
        raise QuotientError(f"{gen.name} has even degree; the Wang split needs an odd generator")
    if model.d_of(0):
        raise QuotientError(f"d({gen.name}) != 0")
    values = []
    for g in model.generators[1:]:
        dv = model.d_of(g.index)
        # x1 is leftmost in canonical order, so each x1-term is exactly
        # x1 * (monomial with the exponent dropped) -- no sign appears.
        part = {_strip_first(m): c for m, c in dv.items() if m[0] == 1}
        values.append(poly(part))
    return Derivation(-(gen.degree - 1), tuple(values))


# -- random elliptic models ---------------------------------------------


@dataclass(frozen=True)
class RandomModelParams:
    """Shape parameters for random pure (two-stage) models: n_even even
    cocycle generators, n_odd odd generators with homogeneous length-l
    differentials in the evens.  leading_odd_sphere prepends one odd
    cocycle generator so the Wang sequence applies."""

    n_even: int = 2
    n_odd: int = 2
    l: int = 2
    min_even_degree: int = 2
    max_even_degree: int = 2
    leading_odd_sphere: bool = False
    max_attempts: int = 64


class GenerationBudgetError(RuntimeError):
    pass


def random_elliptic_model(seed: int, params: RandomModelParams) -> SullivanModel:
    """Seeded pure-model sampler, rejection-checked against the
    ellipticity certificate.  Raises GenerationBudgetError rather than
    ever returning an uncertified model."""
    from .cohomology import certify_elliptic  # deferred: engine depends on model

    if params.n_odd < params.n_even:
        raise ValueError(
            "infeasible parameters: a pure model needs at least as many odd "
            "generators as even ones to be elliptic"
        )
    if params.l < 2:
        raise ValueError("differential length must be >= 2")
    rng = random.Random(seed)
    for attempt in range(params.max_attempts):
        model = _sample_pure(rng, params, seed, attempt)
        cert = certify_elliptic(model)
        if cert.verdict == "certificate":
            return model
    raise GenerationBudgetError(
        f"no elliptic model found in {params.max_attempts} attempts (seed {seed})"
    )


def _sample_pure(rng, params: RandomModelParams, seed: int, attempt: int) -> SullivanModel:
    even_degrees = [
        rng.randrange(params.min_even_degree, params.max_even_degree + 1, 2)
        for _ in range(params.n_even)
    ]
    spec_gens = []
    if params.leading_odd_sphere:
        spec_gens.append(("u", 1 + 2 * rng.randint(1, 2)))
    spec_gens += [(f"x{i + 1}", even_degrees[i]) for i in range(params.n_even)]

    diffs: dict[str, Polynomial] = {}
    odd_names = []
    for j in range(params.n_odd):
        if params.n_even == 0:
            # no evens to hit: a free odd generator (an odd-sphere factor)
            odd_names.append((f"y{j + 1}", 1 + 2 * rng.randint(1, 3), {}))
            continue
        # target degree: a random length-l monomial in the evens fixes it
        picks = [rng.randrange(params.n_even) for _ in range(params.l)]
        target = sum(even_degrees[i] for i in picks)
        candidates = _even_monomials(even_degrees, target, params.l)
        coeffs = {}
        for mono in candidates:
            c = rng.randint(-2, 2)
            if c:
                coeffs[mono] = c
        if not coeffs:
            coeffs[candidates[rng.randrange(len(candidates))]] = 1
        name = f"y{j + 1}"
        odd_names.append((name, target - 1, coeffs))

    offset = 1 if params.leading_odd_sphere else 0
    n_total = offset + params.n_even + params.n_odd
    for name, degree, coeffs in odd_names:
        spec_gens.append((name, degree))
        dy: Polynomial = {}
        for mono, c in coeffs.items():
            full = [0] * n_total
            for i, e in enumerate(mono):
                full[offset + i] = e
            dy[tuple(full)] = Fraction(c)
        diffs[name] = dy
    label = f"random(seed={seed},attempt={attempt})"
    return make_model(spec_gens, diffs, name=label)


def _even_monomials(degrees, target: int, length: int) -> list[Monomial]:
    """Exponent tuples over the even generators with given total degree
    and word length."""
    n = len(degrees)
    out = []

    def rec(idx, remaining_deg, remaining_len, prefix):
        if idx == n:
            if remaining_deg == 0 and remaining_len == 0:
                out.append(tuple(prefix))
            return
        cap = min(remaining_deg // degrees[idx], remaining_len)
        for e in range(cap + 1):
            prefix.append(e)
            rec(idx + 1, remaining_deg - e * degrees[idx], remaining_len - e, prefix)
            prefix.pop()

    rec(0, target, length, [])
    return out
