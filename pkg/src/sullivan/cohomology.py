"""Cohomology of a validated Sullivan model: ungraded H^i, the
word-length bigraded H^i_k for homogeneous models, formal dimension,
heuristic ellipticity certification, fundamental class and the
Poincare-duality pairing.

All per-degree and per-(i,k) computations are memoized on a per-model
engine; entries are pure and write-once, so concurrent recomputation is
harmless.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Monomial,
    Polynomial,
    monomial_basis,
    multiply,
    poly_str,
    word_length,
)
from .linalg import Echelon, RatMatrix, Vector, kernel_basis, rank
from .model import SullivanModel, length_profile


class NotEllipticError(RuntimeError):
    """Raised when an operation requires an ellipticity certificate the
    model does not have."""


class NotHomogeneousError(RuntimeError):
    """Raised when a bigraded operation is asked of a mixed-length model;
    use the ungraded cohomology instead."""


class InternalInvariantError(RuntimeError):
    """A computed quantity contradicts an invariant the certificate
    guaranteed; always a bug, never user error."""


@dataclass(frozen=True)
class CochainSlice:
    """One degree of the cochain complex: ordered monomial basis and the
    differential matrix into the next degree's basis."""

    degree: int
    basis: tuple[Monomial, ...]
    d_matrix: RatMatrix
    length: int | None = None  # word-length strand, None = full slice


@dataclass(frozen=True)
class CohomologyClass:
    degree: int
    representative: Polynomial
    word_length: int | None = None

    def pretty(self, gens) -> str:
        return poly_str(gens, self.representative)


@dataclass(frozen=True)
class CohomologyTable:
    betti: tuple[int, ...]  # degrees 0..formal_dimension
    formal_dimension: int
    total_dimension: int
    classes: tuple[tuple[CohomologyClass, ...], ...]


@dataclass(frozen=True)
class BigradedTable:
    """Dimensions h[i][k] of H^i_k plus the n_k / N_k extremes.

    n_k[k] / N_k[k] are None when H^*_k = 0 (cannot happen for k <= e on
    certified homogeneous models, by the no-gap theorem this package
    exists to check).
    """

    h: tuple[tuple[int, ...], ...]  # h[i][k], i = 0..N, k = 0..e_top
    n_k: tuple[int | None, ...]
    N_k: tuple[int | None, ...]
    e_top: int
    formal_dimension: int

    def dim(self, i: int, k: int) -> int:
        if 0 <= i < len(self.h) and 0 <= k < len(self.h[i]):
            return self.h[i][k]
        return 0

    def length_dims(self) -> tuple[int, ...]:
        """Total dimension of H^*_k per k."""
        return tuple(
            sum(self.h[i][k] for i in range(len(self.h)))
            for k in range(self.e_top + 1)
        )


@dataclass(frozen=True)
class EllipticityCertificate:
    verdict: str  # 'certificate' | 'refutation' | 'inconclusive'
    formal_dimension: int
    window: int
    pd_checked: bool
    witness: str | None = None
    heuristic: bool = True

    @property
    def ok(self) -> bool:
        return self.verdict == "certificate"


class _DegreeCohomology:
    """H at one degree: canonical representatives and the echelon
    structure used to put arbitrary cocycles into class coordinates."""

    __slots__ = ("degree", "basis", "index", "dim", "reps", "echelon", "boundary_rank")

    def __init__(self, degree, basis, index, dim, reps, echelon, boundary_rank):
        self.degree = degree
        self.basis = basis
        self.index = index
        self.dim = dim
        self.reps = reps  # list of coordinate vectors, one per class
        self.echelon = echelon  # boundaries (unlabelled) + reps (labelled 0..dim-1)
        self.boundary_rank = boundary_rank

    def coordinates(self, vec) -> Vector:
        residual, coeffs = self.echelon.reduce_with_coeffs(vec)
        if any(residual):
            raise InternalInvariantError(
                f"vector in degree {self.degree} is not a cocycle modulo boundaries"
            )
        return tuple(coeffs.get(s, Fraction(0)) for s in range(self.dim))


class CohomologyEngine:
    """Per-model memo of bases, differential matrices and cohomology."""

    def __init__(self, model: SullivanModel):
        if not model.validated:
            raise ValueError("model must be validated first")
        self.model = model
        self.gens = model.generators
        self._basis: dict[int, list[Monomial]] = {}
        self._dmono: dict[Monomial, Polynomial] = {}
        self._dmat: dict[tuple, RatMatrix] = {}
        self._full: dict[int, _DegreeCohomology] = {}
        self._strand: dict[tuple[int, int], _DegreeCohomology] = {}
        self._certificates: dict[int | None, EllipticityCertificate] = {}
        self._profile = length_profile(model)

    # -- bases and matrices ---------------------------------------------

    def basis(self, i: int) -> list[Monomial]:
        if i not in self._basis:
            self._basis[i] = monomial_basis(self.gens, i)
        return self._basis[i]

    def strand_basis(self, i: int, k: int) -> list[Monomial]:
        return [m for m in self.basis(i) if word_length(m) == k]

    def d_mono(self, m: Monomial) -> Polynomial:
        val = self._dmono.get(m)
        if val is None:
            val = self.model.d({m: Fraction(1)})
            self._dmono[m] = val
        return val

    def vectorize(self, p: Polynomial, basis_index: dict) -> Vector:
        vec = [Fraction(0)] * len(basis_index)
        for m, c in p.items():
            vec[basis_index[m]] = c
        return tuple(vec)

    def d_matrix(self, i: int, k: int | None = None) -> RatMatrix:
        """Differential matrix out of degree i (word-length-k strand when
        k is given; homogeneous models only)."""
        key = (i, k)
        if key in self._dmat:
            return self._dmat[key]
        if k is None:
            src = self.basis(i)
            dst = self.basis(i + 1)
        else:
            src = self.strand_basis(i, k)
            dst = self.strand_basis(i + 1, k + self._profile.l - 1)
        dst_index = {m: r for r, m in enumerate(dst)}
        entries = {}
        for j, m in enumerate(src):
            for m2, c in self.d_mono(m).items():
                entries[(dst_index[m2], j)] = c
        mat = RatMatrix(len(dst), len(src), entries)
        self._dmat[key] = mat
        return mat

    def slice(self, i: int, k: int | None = None) -> CochainSlice:
        if k is None:
            basis = tuple(self.basis(i))
        else:
            self._require_homogeneous()
            basis = tuple(self.strand_basis(i, k))
        return CochainSlice(i, basis, self.d_matrix(i, k), k)

    def _require_homogeneous(self):
        if not self._profile.is_homogeneous:
            raise NotHomogeneousError(
                "the differential mixes word lengths; the bigraded tables are "
                "undefined -- use the ungraded cohomology"
            )

    # -- cohomology -----------------------------------------------------

    def _build(self, i: int, k: int | None) -> _DegreeCohomology:
        if k is None:
            basis = self.basis(i)
        else:
            basis = self.strand_basis(i, k)
        index = {m: r for r, m in enumerate(basis)}
        ech = Echelon(len(basis))
        if i >= 1:
            if k is None:
                prev = self.basis(i - 1)
            else:
                kk = k - (self._profile.l - 1)
                prev = self.strand_basis(i - 1, kk) if kk >= 0 else []
            for m in prev:
                dm = self.d_mono(m)
                if dm:
                    ech.add(self.vectorize(dm, index))
        boundary_rank = ech.rank
        reps = []
        for vec in kernel_basis(self.d_matrix(i, k)):
            row = ech.add(vec, label=len(reps))
            if row is not None:
                reps.append(row)
        return _DegreeCohomology(i, basis, index, len(reps), reps, ech, boundary_rank)

    def full(self, i: int) -> _DegreeCohomology:
        if i < 0:
            return _DegreeCohomology(i, [], {}, 0, [], Echelon(0), 0)
        got = self._full.get(i)
        if got is None:
            got = self._build(i, None)
            self._full[i] = got
        return got

    def strand(self, i: int, k: int) -> _DegreeCohomology:
        self._require_homogeneous()
        if i < 0 or k < 0:
            return _DegreeCohomology(i, [], {}, 0, [], Echelon(0), 0)
        key = (i, k)
        got = self._strand.get(key)
        if got is None:
            got = self._build(i, k)
            self._strand[key] = got
        return got

    def classes(self, i: int, k: int | None = None) -> list[CohomologyClass]:
        dc = self.full(i) if k is None else self.strand(i, k)
        out = []
        for vec in dc.reps:
            rep = {dc.basis[j]: c for j, c in enumerate(vec) if c}
            lengths = {word_length(m) for m in rep}
            wl = k if k is not None else (lengths.pop() if len(lengths) == 1 else None)
            out.append(CohomologyClass(i, rep, wl))
        return out

    def betti(self, i: int, k: int | None = None) -> int:
        return (self.full(i) if k is None else self.strand(i, k)).dim

    def class_coordinates(self, i: int, p: Polynomial, k: int | None = None) -> Vector:
        """Coordinates of a cocycle's class in the canonical basis of
        H^i (or H^i_k)."""
        dc = self.full(i) if k is None else self.strand(i, k)
        return dc.coordinates(self.vectorize(p, dc.index))

    def classes_equal(self, i: int, p: Polynomial, q: Polynomial) -> bool:
        """Class equality: the difference is a coboundary."""
        return self.class_coordinates(i, p) == self.class_coordinates(i, q)

    # -- ellipticity ----------------------------------------------------

    def formal_dimension_formula(self) -> int:
        odd = sum(g.degree for g in self.model.odd_generators)
        even = sum(g.degree - 1 for g in self.model.even_generators)
        return odd - even

    def certify(self, window: int | None = None) -> EllipticityCertificate:
        key = window
        got = self._certificates.get(key)
        if got is None:
            got = self._certify(window)
            self._certificates[key] = got
        return got

    def _certify(self, window: int | None) -> EllipticityCertificate:
        n_form = self.formal_dimension_formula()
        base = max(n_form, 0)
        # default window: at least the formal dimension, and deep enough to
        # see the first nonzero positive degree of any non-elliptic model
        # (H^p != 0 for p the minimal generator degree)
        max_deg = max((g.degree for g in self.model.generators), default=1)
        w = window if window is not None else max(base, max_deg, 1)
        if w < 1:
            return EllipticityCertificate(
                "inconclusive", n_form, w, False, "empty vanishing window"
            )
        for i in range(base + 1, base + w + 1):
            if self.betti(i):
                cls = self.classes(i)[0]
                return EllipticityCertificate(
                    "refutation", n_form, w, False,
                    f"H^{i} != 0 beyond the formal dimension {n_form}: "
                    f"[{cls.pretty(self.gens)}]",
                )
        if n_form < 0:
            return EllipticityCertificate(
                "inconclusive", n_form, w, False,
                f"formula gives negative formal dimension {n_form} but no "
                f"witness class found in the window",
            )
        if self.betti(n_form) != 1:
            return EllipticityCertificate(
                "refutation", n_form, w, False,
                f"dim H^{n_form} = {self.betti(n_form)} != 1 at the formal dimension",
            )
        for i in range(0, n_form + 1):
            mat, ok = self.pd_pairing(i)
            if not ok:
                return EllipticityCertificate(
                    "refutation", n_form, w, True,
                    f"Poincare pairing H^{i} x H^{n_form - i} is degenerate "
                    f"({mat.rows}x{mat.cols}, rank deficient)",
                )
        return EllipticityCertificate("certificate", n_form, w, True)

    def require_certificate(self, window: int | None = None) -> EllipticityCertificate:
        cert = self.certify(window)
        if not cert.ok:
            raise NotEllipticError(
                f"model is not certified elliptic ({cert.verdict}): {cert.witness}"
            )
        return cert

    def fundamental_class(self) -> CohomologyClass:
        cert = self.require_certificate()
        n = cert.formal_dimension
        classes = self.classes(n)
        if len(classes) != 1:
            raise InternalInvariantError(
                f"dim H^{n} = {len(classes)} != 1 contradicts the certificate"
            )
        return classes[0]

    def pd_pairing(self, i: int) -> tuple[RatMatrix, bool]:
        """Matrix of H^i x H^(N-i) -> H^N = Q and its nondegeneracy flag.

        Used inside certification, so it must not require a certificate;
        it does require dim H^N = 1 (checked by the caller)."""
        n = self.formal_dimension_formula()
        top = self.full(n)
        if top.dim != 1:
            raise InternalInvariantError(f"dim H^{n} != 1, pairing undefined")
        left = self.classes(i)
        right = self.classes(n - i)
        entries = {}
        for s, a in enumerate(left):
            for t, b in enumerate(right):
                prod = multiply(self.gens, a.representative, b.representative)
                coord = top.coordinates(self.vectorize(prod, top.index))
                if coord[0]:
                    entries[(s, t)] = coord[0]
        mat = RatMatrix(len(left), len(right), entries)
        ok = mat.rows == mat.cols and rank(mat) == mat.rows
        return mat, ok

    # -- tables ----------------------------------------------------------

    def cohomology_table(self) -> CohomologyTable:
        cert = self.require_certificate()
        n = cert.formal_dimension
        betti = tuple(self.betti(i) for i in range(n + 1))
        classes = tuple(tuple(self.classes(i)) for i in range(n + 1))
        return CohomologyTable(betti, n, sum(betti), classes)

    def max_length(self) -> int:
        if not self.gens:
            return 0
        n = self.formal_dimension_formula()
        return max(n, 0) // self.model.min_degree

    def bigraded_profile(self) -> BigradedTable:
        self._require_homogeneous()
        cert = self.require_certificate()
        n = cert.formal_dimension
        kmax = self.max_length()
        h = [[self.strand(i, k).dim for k in range(kmax + 1)] for i in range(n + 1)]
        e_top = 0
        for k in range(kmax, -1, -1):
            if any(h[i][k] for i in range(n + 1)):
                e_top = k
                break
        h = [row[: e_top + 1] for row in h]
        n_k: list[int | None] = []
        N_k: list[int | None] = []
        for k in range(e_top + 1):
            hit = [i for i in range(n + 1) if h[i][k]]
            n_k.append(hit[0] if hit else None)
            N_k.append(hit[-1] if hit else None)
        return BigradedTable(
            tuple(tuple(row) for row in h), tuple(n_k), tuple(N_k), e_top, n
        )


def engine_for(model: SullivanModel) -> CohomologyEngine:
    eng = getattr(model, "_engine", None)
    if eng is None:
        eng = CohomologyEngine(model)
        model._engine = eng
    return eng


# -- module-level operations (the spec surface) --------------------------


def cohomology(model: SullivanModel, i: int) -> tuple[int, list[CohomologyClass]]:
    eng = engine_for(model)
    return eng.betti(i), eng.classes(i)


def bigraded_cohomology(model: SullivanModel, i: int, k: int) -> tuple[int, list[CohomologyClass]]:
    eng = engine_for(model)
    return eng.strand(i, k).dim, eng.classes(i, k)


def formal_dimension_formula(model: SullivanModel) -> int:
    return engine_for(model).formal_dimension_formula()


def certify_elliptic(model: SullivanModel, window: int | None = None) -> EllipticityCertificate:
    return engine_for(model).certify(window)


def fundamental_class(model: SullivanModel) -> CohomologyClass:
    return engine_for(model).fundamental_class()


def pd_pairing(model: SullivanModel, i: int) -> tuple[RatMatrix, bool]:
    eng = engine_for(model)
    eng.require_certificate()
    return eng.pd_pairing(i)


def bigraded_profile(model: SullivanModel) -> BigradedTable:
    return engine_for(model).bigraded_profile()


def cohomology_table(model: SullivanModel) -> CohomologyTable:
    return engine_for(model).cohomology_table()
