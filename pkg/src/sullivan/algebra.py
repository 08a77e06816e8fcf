"""Free graded-commutative algebra on a fixed generator list.

Monomials are exponent tuples in generator-index order (the canonical
form); polynomials are dicts mapping monomial -> Fraction with zero
coefficients never stored.  All Koszul signs are computed at
normalization time, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Monomial = tuple[int, ...]
Polynomial = dict[Monomial, Fraction]


@dataclass(frozen=True)
class Generator:
    """A graded generator: position in the fixed list, name, degree."""

    index: int
    name: str
    degree: int

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1

    def __str__(self) -> str:
        return f"{self.name}:{self.degree}"


@dataclass(frozen=True)
class Derivation:
    """A derivation given by its values on generators, extended by the
    graded Leibniz rule D(ab) = D(a)b + (-1)^(shift*|a|) a D(b)."""

    degree_shift: int
    values: tuple[Polynomial, ...]

    def value_on(self, index: int) -> Polynomial:
        return self.values[index]


def unit_monomial(n_gens: int) -> Monomial:
    return (0,) * n_gens


def monomial_degree(gens, m: Monomial) -> int:
    return sum(e * g.degree for e, g in zip(m, gens))


def word_length(m: Monomial) -> int:
    return sum(m)


def koszul_sign(gens, m1: Monomial, m2: Monomial) -> int:
    """Sign of sorting the concatenation m1·m2 into canonical order.

    Returns 0 when the product vanishes (a shared odd generator), else
    (-1)^t where t counts odd-odd transpositions.  Even generators
    commute freely and contribute nothing.
    """
    odds1 = [i for i, e in enumerate(m1) if e and gens[i].is_odd]
    if not odds1:
        return 1
    odds2 = [i for i, e in enumerate(m2) if e and gens[i].is_odd]
    if not odds2:
        return 1
    set1 = set(odds1)
    transpositions = 0
    for j in odds2:
        if j in set1:
            return 0
        transpositions += sum(1 for i in odds1 if i > j)
    return -1 if transpositions % 2 else 1


def multiply_monomials(gens, m1: Monomial, m2: Monomial) -> tuple[Monomial, int]:
    sign = koszul_sign(gens, m1, m2)
    if sign == 0:
        return m1, 0
    return tuple(a + b for a, b in zip(m1, m2)), sign


def poly(terms=None) -> Polynomial:
    """Build a polynomial, dropping zero coefficients."""
    out: Polynomial = {}
    if terms:
        for m, c in dict(terms).items():
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c != 0:
                out[m] = c
    return out


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def poly_scale(p: Polynomial, c) -> Polynomial:
    c = c if isinstance(c, Fraction) else Fraction(c)
    if c == 0:
        return {}
    return {m: v * c for m, v in p.items()}


def multiply(gens, p: Polynomial, q: Polynomial) -> Polynomial:
    """Bilinear Koszul-signed product."""
    out: Polynomial = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m, sign = multiply_monomials(gens, m1, m2)
            if sign == 0:
                continue
            s = out.get(m, 0) + sign * c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def poly_degree(gens, p: Polynomial) -> int | None:
    """Common degree of all terms; None for the zero polynomial.

    Raises ValueError when terms mix degrees (degree queries are only
    well-defined on homogeneous polynomials).
    """
    degs = {monomial_degree(gens, m) for m in p}
    if not degs:
        return None
    if len(degs) > 1:
        raise ValueError(f"inhomogeneous polynomial, degrees {sorted(degs)}")
    return degs.pop()


def apply_derivation(gens, deriv: Derivation, p: Polynomial) -> Polynomial:
    out: Polynomial = {}
    for m, c in p.items():
        for m_out, c_out in _derive_monomial(gens, deriv, m).items():
            s = out.get(m_out, 0) + c * c_out
            if s:
                out[m_out] = s
            else:
                out.pop(m_out, None)
    return out


def _derive_monomial(gens, deriv: Derivation, m: Monomial) -> Polynomial:
    """Leibniz expansion of D on one canonical monomial.

    Peels generators off the front: for m = v^e * rest,
    D(m) = D(v^e)*rest + (-1)^(shift*e*|v|) v^e * D(rest), with
    D(v^e) = e v^(e-1) D(v) (e <= 1 for odd v).
    """
    support = [i for i, e in enumerate(m) if e]
    if not support:
        return {}
    i = support[0]
    e = m[i]
    g = gens[i]
    rest = list(m)
    rest[i] = 0
    rest = tuple(rest)
    head_only = tuple(e if j == i else 0 for j in range(len(m)))

    out: Polynomial = {}
    dv = deriv.value_on(i)
    if dv:
        # D(v^e) = e * v^(e-1) * D(v); the e-1 power of an even v needs no sign
        head_less = tuple(e - 1 if j == i else 0 for j in range(len(m)))
        lead = multiply(gens, multiply(gens, {head_less: Fraction(e)}, dv), {rest: Fraction(1)})
        out = poly_add(out, lead)
    if any(rest):
        tail = _derive_monomial(gens, deriv, rest)
        if tail:
            sign = -1 if (deriv.degree_shift * e * g.degree) % 2 else 1
            tail = multiply(gens, {head_only: Fraction(sign)}, tail)
            out = poly_add(out, tail)
    return out


def monomial_basis(gens, degree: int, max_length: int | None = None) -> list[Monomial]:
    """All canonical monomials of the given total degree (word length
    <= max_length when given), in ascending lexicographic exponent order.

    The enumeration order is part of the public contract: stable
    representative cocycles depend on it.
    """
    if degree < 0:
        return []
    n = len(gens)
    out: list[Monomial] = []

    def rec(idx: int, remaining: int, length_left: int | None, prefix: list[int]):
        if remaining == 0:
            out.append(tuple(prefix + [0] * (n - idx)))
            return
        if idx == n:
            return
        g = gens[idx]
        cap = remaining // g.degree
        if g.is_odd:
            cap = min(cap, 1)
        if length_left is not None:
            cap = min(cap, length_left)
        for e in range(cap + 1):
            prefix.append(e)
            rec(
                idx + 1,
                remaining - e * g.degree,
                None if length_left is None else length_left - e,
                prefix,
            )
            prefix.pop()

    rec(0, degree, max_length, [])
    return out


def max_word_length(gens, degree: int) -> int:
    """Largest word length any monomial of total degree <= degree can have."""
    if not gens or degree <= 0:
        return 0
    dmin = min(g.degree for g in gens)
    return degree // dmin


def poly_str(gens, p: Polynomial) -> str:
    """Render a polynomial in the model-file syntax (also used by repr)."""
    if not p:
        return "0"
    parts = []
    for m in sorted(p):
        c = p[m]
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(gens[i].name)
            elif e > 1:
                factors.append(f"{gens[i].name}^{e}")
        body = "*".join(factors) if factors else "1"
        if c == 1 and factors:
            term = body
        elif c == -1 and factors:
            term = f"-{body}"
        else:
            coeff = str(c)
            term = f"{coeff}*{body}" if factors else coeff
        parts.append(term)
    text = parts[0]
    for term in parts[1:]:
        text += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return text
