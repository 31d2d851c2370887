"""Exact arithmetic for spin-network invariant values.

The value ring is built in three layers:

* ``RadicalCoefficient`` -- rationals extended by formal radicals of primes
  (and of -1, which houses roots of unity such as i = (-1)^(1/2)).
* ``LaurentQ`` -- finite Laurent sums sum_r c_r * q^r with rational exponents r
  and RadicalCoefficient coefficients.
* ``ExactValue`` -- sums of fractions of LaurentQ carrying a formal radical
  factor prod_j Delta_j^(e_j) over named quantum dimensions Delta_j (keyed by
  twice the spin).  Integer powers of a Delta base are folded into the Laurent
  part, so radical exponents stay in (0, 1) with denominator dividing 4.

The variable q is a formal stand-in for exp(2*pi*i/k); kappa = 2*pi*i/k, so
q^r expands as exp(r*kappa).  ``KappaSeries`` holds truncated power series in
kappa used for classical limits and Vassiliev coefficients.

All objects are immutable after construction and safe to share.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import mpmath

Rational = Fraction

# A radical monomial: sorted tuple of (base, exponent) with exponent in (0,1).
# base is -1 or a prime >= 2.
Mono = tuple[tuple[int, Fraction], ...]

_ONE_MONO: Mono = ()


class RepresentationLimit(Exception):
    """The requested operation leaves the supported value ring."""


class SeriesDenominatorZero(Exception):
    """Denominator series vanished identically through the requested order."""


def _factor(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 by trial division (inputs are small)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _normalize_mono(powers: Mapping[int, Fraction]) -> tuple[Fraction, Mono]:
    """Reduce base exponents mod 1, returning the carried rational factor."""
    carry = Fraction(1)
    kept: list[tuple[int, Fraction]] = []
    for base, exp in sorted(powers.items()):
        n = exp.numerator // exp.denominator  # floor
        frac = exp - n
        if base == -1:
            if n % 2:
                carry = -carry
        else:
            carry *= Fraction(base) ** n
        if frac:
            kept.append((base, frac))
    return carry, tuple(kept)


class RadicalCoefficient:
    """Element of Q extended by prime radicals p^e (and (-1)^e), e rational.

    Stored as a finite sum of radical monomials with rational multipliers::

        sum_m  c_m * prod_(p,e) in m  p^e      (0 < e < 1)

    Multiplication is closed: p^a * p^b carries floor(a+b) into the rational
    multiplier.  The base -1 carries roots of unity ((-1)^(1/2) = i).
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Mono, Fraction] | None = None):
        self._terms: dict[Mono, Fraction] = {
            m: c for m, c in (terms or {}).items() if c
        }

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_rational(r: Fraction | int) -> "RadicalCoefficient":
        r = Fraction(r)
        return RadicalCoefficient({_ONE_MONO: r} if r else {})

    @staticmethod
    def zero() -> "RadicalCoefficient":
        return RadicalCoefficient({})

    @staticmethod
    def one() -> "RadicalCoefficient":
        return RadicalCoefficient({_ONE_MONO: Fraction(1)})

    @staticmethod
    def root_of_rational(r: Fraction | int, e: Fraction) -> "RadicalCoefficient":
        """Exact r**e for nonzero rational r, as sign * prime-radical monomial."""
        r = Fraction(r)
        if r == 0:
            raise ZeroDivisionError("0 has no radical power here")
        powers: dict[int, Fraction] = {}
        if r < 0:
            powers[-1] = e
            r = -r
        for p, k in _factor(r.numerator).items():
            powers[p] = powers.get(p, Fraction(0)) + k * e
        for p, k in _factor(r.denominator).items():
            powers[p] = powers.get(p, Fraction(0)) - k * e
        carry, mono = _normalize_mono(powers)
        return RadicalCoefficient({mono: carry})

    @staticmethod
    def i_power(n: int) -> "RadicalCoefficient":
        """i**n for integer n, with i = (-1)^(1/2)."""
        n %= 4
        sign = Fraction(1) if n < 2 else Fraction(-1)
        mono: Mono = ((-1, Fraction(1, 2)),) if n % 2 else _ONE_MONO
        return RadicalCoefficient({mono: sign})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or set(self._terms) == {_ONE_MONO}

    def rational_part(self) -> Fraction:
        return self._terms.get(_ONE_MONO, Fraction(0))

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise RepresentationLimit(f"not a rational: {self}")
        return self.rational_part()

    def is_single_monomial(self) -> bool:
        return len(self._terms) == 1

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "RadicalCoefficient") -> "RadicalCoefficient":
        terms = dict(self._terms)
        for m, c in other._terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return RadicalCoefficient(terms)

    def __neg__(self) -> "RadicalCoefficient":
        return RadicalCoefficient({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "RadicalCoefficient") -> "RadicalCoefficient":
        return self + (-other)

    def __mul__(self, other: "RadicalCoefficient") -> "RadicalCoefficient":
        out: dict[Mono, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                powers = {b: e for b, e in m1}
                for b, e in m2:
                    powers[b] = powers.get(b, Fraction(0)) + e
                carry, mono = _normalize_mono(powers)
                c = c1 * c2 * carry
                s = out.get(mono, Fraction(0)) + c
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return RadicalCoefficient(out)

    def scale(self, r: Fraction | int) -> "RadicalCoefficient":
        r = Fraction(r)
        if not r:
            return RadicalCoefficient.zero()
        return RadicalCoefficient({m: c * r for m, c in self._terms.items()})

    def inverse(self) -> "RadicalCoefficient":
        """Inverse of a single-monomial value; sums are a representation limit."""
        if not self._terms:
            raise ZeroDivisionError("inverse of zero")
        if len(self._terms) != 1:
            raise RepresentationLimit(
                "cannot invert a multi-term radical sum exactly"
            )
        (mono, c), = self._terms.items()
        powers = {b: -e for b, e in mono}
        carry, inv_mono = _normalize_mono(powers)
        return RadicalCoefficient({inv_mono: carry / c})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RadicalCoefficient):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- numerics and rendering ---------------------------------------------

    def numeric(self) -> mpmath.mpc:
        total = mpmath.mpc(0)
        for mono, c in self._terms.items():
            v = mpmath.mpc(c.numerator) / c.denominator
            for base, e in mono:
                if base == -1:
                    v *= mpmath.expjpi(mpmath.mpf(e.numerator) / e.denominator)
                else:
                    v *= mpmath.power(base, mpmath.mpf(e.numerator) / e.denominator)
            total += v
        return total

    def __repr__(self) -> str:
        return f"RadicalCoefficient({self.render()})"

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in sorted(self._terms.items()):
            factors = [] if c == 1 and mono else [str(c)]
            for base, e in mono:
                b = "-1" if base == -1 else str(base)
                if e == Fraction(1, 2):
                    factors.append(f"sqrt({b})")
                elif e.denominator == 4:
                    factors.append(f"qroot4({b}^{e.numerator})")
                else:
                    factors.append(f"({b})^({e})")
            parts.append("*".join(factors) if factors else str(c))
        return " + ".join(parts)


_RC_ZERO = RadicalCoefficient.zero()
_RC_ONE = RadicalCoefficient.one()


class LaurentQ:
    """Finite Laurent sum sum_r c_r q^r, r rational, c_r RadicalCoefficient."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Fraction, RadicalCoefficient] | None = None):
        self._terms: dict[Fraction, RadicalCoefficient] = {
            r: c for r, c in (terms or {}).items() if not c.is_zero()
        }

    @staticmethod
    def zero() -> "LaurentQ":
        return LaurentQ({})

    @staticmethod
    def one() -> "LaurentQ":
        return LaurentQ({Fraction(0): _RC_ONE})

    @staticmethod
    def q_power(r: Fraction | int, coeff: RadicalCoefficient | None = None) -> "LaurentQ":
        return LaurentQ({Fraction(r): coeff if coeff is not None else _RC_ONE})

    @staticmethod
    def from_coefficient(c: RadicalCoefficient) -> "LaurentQ":
        return LaurentQ({Fraction(0): c})

    def items(self) -> Iterable[tuple[Fraction, RadicalCoefficient]]:
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def monomial(self) -> tuple[Fraction, RadicalCoefficient]:
        (r, c), = self._terms.items()
        return r, c

    def has_rational_coeffs(self) -> bool:
        return all(c.is_rational() for c in self._terms.values())

    def constant_coefficient(self) -> RadicalCoefficient:
        return self._terms.get(Fraction(0), _RC_ZERO)

    def __add__(self, other: "LaurentQ") -> "LaurentQ":
        terms = dict(self._terms)
        for r, c in other._terms.items():
            s = terms.get(r, _RC_ZERO) + c
            if s.is_zero():
                terms.pop(r, None)
            else:
                terms[r] = s
        return LaurentQ(terms)

    def __neg__(self) -> "LaurentQ":
        return LaurentQ({r: -c for r, c in self._terms.items()})

    def __sub__(self, other: "LaurentQ") -> "LaurentQ":
        return self + (-other)

    def __mul__(self, other: "LaurentQ") -> "LaurentQ":
        out: dict[Fraction, RadicalCoefficient] = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in other._terms.items():
                r = r1 + r2
                c = c1 * c2
                s = out.get(r, _RC_ZERO) + c
                if s.is_zero():
                    out.pop(r, None)
                else:
                    out[r] = s
        return LaurentQ(out)

    def scale(self, c: RadicalCoefficient) -> "LaurentQ":
        if c.is_zero():
            return LaurentQ.zero()
        return LaurentQ({r: c0 * c for r, c0 in self._terms.items()})

    def invert_q(self) -> "LaurentQ":
        """Substitute q -> 1/q (mirror image of diagram values)."""
        return LaurentQ({-r: c for r, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentQ):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset((r, c) for r, c in self._terms.items()))

    def kappa_series(self, order: int) -> "KappaSeries":
        """Substitute q^r -> exp(r*kappa), truncated at kappa^order."""
        coeffs = [_RC_ZERO] * (order + 1)
        for r, c in self._terms.items():
            rn = Fraction(1)
            fact = 1
            for n in range(order + 1):
                if n:
                    rn *= r
                    fact *= n
                coeffs[n] = coeffs[n] + c.scale(rn / fact)
        return KappaSeries(order, coeffs)

    def evaluate(self, q_power: Callable[[Fraction], mpmath.mpc]) -> mpmath.mpc:
        total = mpmath.mpc(0)
        for r, c in self._terms.items():
            total += c.numeric() * q_power(r)
        return total

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for r in sorted(self._terms, reverse=True):
            c = self._terms[r]
            cs = c.render()
            if r == 0:
                parts.append(cs)
            else:
                qs = "q" if r == 1 else f"q^({r})"
                parts.append(qs if cs == "1" else f"{cs}*{qs}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentQ({self.render()})"


_LQ_ONE = LaurentQ.one()


def delta_laurent(two_j: int) -> LaurentQ:
    """Quantum dimension Delta_j = q^j + q^(j-1) + ... + q^(-j) as a Laurent sum."""
    if two_j < 0:
        raise ValueError("negative spin")
    return LaurentQ({
        Fraction(two_j, 2) - m: _RC_ONE for m in range(two_j + 1)
    })


# A summand: (numerator, denominator, radical factor {two_j: exponent}).
RadicalFactor = tuple[tuple[int, Fraction], ...]


def _normalize_radical(
    num: LaurentQ, den: LaurentQ, rad
) -> tuple[LaurentQ, LaurentQ, RadicalFactor]:
    """Fold integer Delta powers into num/den; keep exponents in (0,1)."""
    items = rad.items() if hasattr(rad, "items") else rad
    kept: list[tuple[int, Fraction]] = []
    for two_j, e in sorted(items):
        if two_j == 0 or not e:
            continue  # Delta_0 = 1
        n = e.numerator // e.denominator
        frac = e - n
        if n > 0:
            d = delta_laurent(two_j)
            for _ in range(n):
                num = num * d
        elif n < 0:
            d = delta_laurent(two_j)
            for _ in range(-n):
                den = den * d
        if frac:
            if frac.denominator not in (2, 4):
                raise RepresentationLimit(
                    f"radical exponent {frac} for Delta_(2j={two_j}) not supported"
                )
            kept.append((two_j, frac))
    return num, den, tuple(kept)


class ExactValue:
    """Exact invariant value: a sum of (LaurentQ fraction) * (Delta radical) terms.

    Most values are a single summand; formal multi-term sums appear when adding
    values whose radical factors differ.  Denominators always have purely
    rational coefficients, so numeric evaluation and series expansion stay
    well-defined.
    """

    __slots__ = ("_summands",)

    def __init__(self, summands: Iterable[tuple[LaurentQ, LaurentQ, Mapping[int, Fraction]]]):
        merged: dict[RadicalFactor, tuple[LaurentQ, LaurentQ]] = {}
        for num, den, rad in summands:
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if not den.has_rational_coeffs():
                raise RepresentationLimit("denominator must have rational coefficients")
            num, den, key = _normalize_radical(num, den, rad)
            if num.is_zero():
                continue
            if key in merged:
                n0, d0 = merged[key]
                if d0 == den:
                    merged[key] = (n0 + num, d0)
                else:
                    merged[key] = (n0 * den + num * d0, d0 * den)
            else:
                merged[key] = (num, den)
        self._summands = tuple(
            (n, d, key) for key, (n, d) in sorted(merged.items()) if not n.is_zero()
        )

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "ExactValue":
        return ExactValue([])

    @staticmethod
    def one() -> "ExactValue":
        return ExactValue.from_int(1)

    @staticmethod
    def from_int(n: int) -> "ExactValue":
        return ExactValue.from_rational(Fraction(n))

    @staticmethod
    def from_rational(r: Fraction) -> "ExactValue":
        if not r:
            return ExactValue([])
        return ExactValue([(LaurentQ.from_coefficient(RadicalCoefficient.from_rational(r)),
                            _LQ_ONE, {})])

    @staticmethod
    def from_coefficient(c: RadicalCoefficient) -> "ExactValue":
        return ExactValue([(LaurentQ.from_coefficient(c), _LQ_ONE, {})])

    @staticmethod
    def from_laurent(p: LaurentQ) -> "ExactValue":
        return ExactValue([(p, _LQ_ONE, {})])

    @staticmethod
    def q_power(r: Fraction | int) -> "ExactValue":
        return ExactValue([(LaurentQ.q_power(Fraction(r)), _LQ_ONE, {})])

    @staticmethod
    def from_radical(rad: Mapping[int, Fraction]) -> "ExactValue":
        """prod Delta_(2j)^e as a value (integer parts fold into the Laurent part)."""
        return ExactValue([(_LQ_ONE, _LQ_ONE, rad)])

    # -- structure ----------------------------------------------------------

    def summands(self) -> tuple[tuple[LaurentQ, LaurentQ, RadicalFactor], ...]:
        return self._summands

    def is_zero(self) -> bool:
        return not self._summands

    def is_single(self) -> bool:
        return len(self._summands) <= 1

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "ExactValue") -> "ExactValue":
        return ExactValue([*self._summands, *other._summands])

    def __neg__(self) -> "ExactValue":
        return ExactValue([(-n, d, dict(r)) for n, d, r in self._summands])

    def __sub__(self, other: "ExactValue") -> "ExactValue":
        return self + (-other)

    def __mul__(self, other: "ExactValue") -> "ExactValue":
        out = []
        for n1, d1, r1 in self._summands:
            for n2, d2, r2 in other._summands:
                rad = {b: e for b, e in r1}
                for b, e in r2:
                    rad[b] = rad.get(b, Fraction(0)) + e
                out.append((n1 * n2, d1 * d2, rad))
        return ExactValue(out)

    def scale(self, c: RadicalCoefficient) -> "ExactValue":
        return ExactValue([(n.scale(c), d, dict(r)) for n, d, r in self._summands])

    def inverse(self) -> "ExactValue":
        """Inverse of a single-summand value (divisors in the skein calculus).

        The numerator must be a monomial or have purely rational coefficients;
        anything else signals a representation limit rather than approximating.
        """
        if self.is_zero():
            raise ZeroDivisionError("division by zero value")
        if len(self._summands) > 1:
            raise RepresentationLimit("cannot divide by a multi-term radical sum")
        num, den, rad = self._summands[0]
        inv_rad = {b: -e for b, e in rad}
        if num.has_rational_coeffs():
            return ExactValue([(den, num, inv_rad)])
        if num.is_monomial():
            r, c = num.monomial()
            inv_num = den * LaurentQ.q_power(-r, c.inverse())
            return ExactValue([(inv_num, _LQ_ONE, inv_rad)])
        raise RepresentationLimit(
            "cannot divide by a radical-coefficient Laurent sum"
        )

    def __truediv__(self, other: "ExactValue") -> "ExactValue":
        return self * other.inverse()

    def __pow__(self, n: int) -> "ExactValue":
        if n < 0:
            return self.inverse() ** (-n)
        out = ExactValue.one()
        for _ in range(n):
            out = out * self
        return out

    def invert_q(self) -> "ExactValue":
        """Substitute q -> 1/q exactly (Delta bases are q <-> 1/q symmetric)."""
        return ExactValue([(n.invert_q(), d.invert_q(), dict(r))
                           for n, d, r in self._summands])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactValue):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:
        # Hash only on the radical keys; full equality does the real work.
        return hash(tuple(r for _, _, r in self._summands))

    # -- analysis -----------------------------------------------------------

    def expand_kappa(self, order: int) -> "KappaSeries":
        """Power series in kappa = 2*pi*i/k, truncated at kappa^order."""
        total = KappaSeries(order, [_RC_ZERO] * (order + 1))
        for num, den, rad in self._summands:
            # Allow removable singularities: factor kappa^v out of num and den.
            v = _series_valuation(den, order)
            num_s = num.kappa_series(order + v)
            den_s = den.kappa_series(order + v)
            if v:
                if any(not num_s.coeffs[i].is_zero() for i in range(v)):
                    raise SeriesDenominatorZero(
                        "pole in kappa expansion (numerator valuation below denominator)"
                    )
                num_s = num_s.shift_down(v, order)
                den_s = den_s.shift_down(v, order)
            part = num_s.divide(den_s)
            for two_j, e in rad:
                part = part * _delta_power_series(two_j, e, order)
            total = total + part
        return total

    def substitute_classical(self) -> RadicalCoefficient:
        """The q -> 1 value, via the kappa^0 series coefficient."""
        return self.expand_kappa(0).coeffs[0]

    def evaluate_numeric(self, k, digits: int = 30, k_shift: int = 0) -> mpmath.mpc:
        """Complex value at q = exp(2*pi*i/(k + k_shift)).

        Rational powers of q are evaluated as exp(2*pi*i*r/(k+k_shift)), and
        radicals on the principal branch (Delta bases are positive near q=1).
        """
        with mpmath.workdps(digits + 10):
            keff = mpmath.mpf(k) + k_shift

            def q_power(r: Fraction) -> mpmath.mpc:
                return mpmath.expjpi(2 * mpmath.mpf(r.numerator) / r.denominator / keff)

            total = mpmath.mpc(0)
            for num, den, rad in self._summands:
                v = num.evaluate(q_power) / den.evaluate(q_power)
                for two_j, e in rad:
                    base = delta_laurent(two_j).evaluate(q_power)
                    v *= mpmath.power(base, mpmath.mpf(e.numerator) / e.denominator)
                total += v
            return +total

    # -- serialization and rendering -----------------------------------------

    def to_json_obj(self) -> object:
        def laurent_obj(p: LaurentQ) -> list:
            out = []
            for r in sorted(p._terms, reverse=True):
                c = p._terms[r]
                coeff = []
                for mono, frac in sorted(c._terms.items()):
                    coeff.append({
                        "rat": str(frac),
                        "rad": {str(b): str(e) for b, e in mono},
                    })
                out.append({"q_exp": str(r), "coeff": coeff})
            return out

        def summand_obj(num, den, rad) -> dict:
            return {
                "terms": laurent_obj(num),
                "den": laurent_obj(den),
                "radical": {f"delta_{two_j}": str(e) for two_j, e in rad},
            }

        if not self._summands:
            return {"terms": [], "den": laurent_obj(_LQ_ONE), "radical": {}}
        if len(self._summands) == 1:
            return summand_obj(*self._summands[0])
        return {"summands": [summand_obj(*s) for s in self._summands]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @staticmethod
    def from_json_obj(obj) -> "ExactValue":
        def parse_laurent(items) -> LaurentQ:
            terms: dict[Fraction, RadicalCoefficient] = {}
            for t in items:
                coeff: dict[Mono, Fraction] = {}
                for c in t["coeff"]:
                    mono = tuple(sorted(
                        (int(b), Fraction(e)) for b, e in c.get("rad", {}).items()
                    ))
                    coeff[mono] = coeff.get(mono, Fraction(0)) + Fraction(c["rat"])
                terms[Fraction(t["q_exp"])] = RadicalCoefficient(coeff)
            return LaurentQ(terms)

        def parse_summand(o) -> tuple[LaurentQ, LaurentQ, dict[int, Fraction]]:
            rad = {}
            for key, e in o.get("radical", {}).items():
                if not key.startswith("delta_"):
                    raise ValueError(f"unknown radical base {key!r}")
                rad[int(key[len("delta_"):])] = Fraction(e)
            den = parse_laurent(o["den"]) if o.get("den") else _LQ_ONE
            return parse_laurent(o["terms"]), den, rad

        if "summands" in obj:
            return ExactValue([parse_summand(s) for s in obj["summands"]])
        return ExactValue([parse_summand(obj)])

    @staticmethod
    def from_json(s: str) -> "ExactValue":
        return ExactValue.from_json_obj(json.loads(s))

    def render(self) -> str:
        if not self._summands:
            return "0"
        parts = []
        for num, den, rad in self._summands:
            s = num.render()
            if len(num._terms) > 1 and (rad or not den == _LQ_ONE):
                s = f"({s})"
            if s == "1" and rad:
                s = ""
            for two_j, e in rad:
                base = f"delta_{Fraction(two_j, 2)}"
                piece = f"sqrt({base})" if e == Fraction(1, 2) else f"qroot4({base}^{e.numerator})"
                s = piece if not s else f"{s}*{piece}"
            if not den == _LQ_ONE:
                s += f" / ({den.render()})"
            parts.append(s)
        return "  +  ".join(parts)

    def __repr__(self) -> str:
        return f"ExactValue({self.render()})"


def _series_valuation(p: LaurentQ, order: int) -> int:
    """Index of the first nonzero kappa coefficient of p's series."""
    for probe in (order, order + 8):
        s = p.kappa_series(probe)
        for i, c in enumerate(s.coeffs):
            if not c.is_zero():
                return i
    raise SeriesDenominatorZero(
        f"series of {p!r} vanishes through order {order + 8}"
    )


_DELTA_SERIES_CACHE: dict[tuple[int, Fraction, int], "KappaSeries"] = {}


def _delta_power_series(two_j: int, e: Fraction, order: int) -> "KappaSeries":
    """Series of Delta_j^e: (2j+1)^e * (1+u)^e with u = Delta_j/(2j+1) - 1."""
    key = (two_j, e, order)
    cached = _DELTA_SERIES_CACHE.get(key)
    if cached is not None:
        return cached
    d = delta_laurent(two_j).kappa_series(order)
    classical = Fraction(two_j + 1)
    u = d.scale_rational(1 / classical) - KappaSeries.one(order)
    out = u.binomial_power(e).scale(RadicalCoefficient.root_of_rational(classical, e))
    _DELTA_SERIES_CACHE[key] = out
    return out


class KappaSeries:
    """Truncated power series in kappa with RadicalCoefficient coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[RadicalCoefficient]):
        self.order = order
        cs = list(coeffs)
        if len(cs) != order + 1:
            raise ValueError("coefficient count must be order+1")
        self.coeffs = tuple(cs)

    @staticmethod
    def zero(order: int) -> "KappaSeries":
        return KappaSeries(order, [_RC_ZERO] * (order + 1))

    @staticmethod
    def one(order: int) -> "KappaSeries":
        return KappaSeries(order, [_RC_ONE] + [_RC_ZERO] * order)

    def __add__(self, other: "KappaSeries") -> "KappaSeries":
        n = min(self.order, other.order)
        return KappaSeries(n, [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    def __neg__(self) -> "KappaSeries":
        return KappaSeries(self.order, [-c for c in self.coeffs])

    def __sub__(self, other: "KappaSeries") -> "KappaSeries":
        return self + (-other)

    def __mul__(self, other: "KappaSeries") -> "KappaSeries":
        n = min(self.order, other.order)
        out = [_RC_ZERO] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a.is_zero():
                continue
            for jj in range(n + 1 - i):
                b = other.coeffs[jj]
                if not b.is_zero():
                    out[i + jj] = out[i + jj] + a * b
        return KappaSeries(n, out)

    def scale(self, c: RadicalCoefficient) -> "KappaSeries":
        return KappaSeries(self.order, [a * c for a in self.coeffs])

    def scale_rational(self, r: Fraction) -> "KappaSeries":
        return KappaSeries(self.order, [a.scale(r) for a in self.coeffs])

    def shift_down(self, v: int, order: int) -> "KappaSeries":
        """Divide by kappa^v (the first v coefficients must already vanish)."""
        return KappaSeries(order, list(self.coeffs[v:v + order + 1]))

    def divide(self, den: "KappaSeries") -> "KappaSeries":
        n = min(self.order, den.order)
        c0 = den.coeffs[0]
        if c0.is_zero():
            raise SeriesDenominatorZero("denominator series has zero constant term")
        inv0 = c0.inverse()
        out: list[RadicalCoefficient] = []
        for i in range(n + 1):
            acc = self.coeffs[i]
            for jj in range(i):
                acc = acc - out[jj] * den.coeffs[i - jj]
            out.append(acc * inv0)
        return KappaSeries(n, out)

    def binomial_power(self, e: Fraction) -> "KappaSeries":
        """(1 + self)^e via the binomial series; self must have zero constant term."""
        if not self.coeffs[0].is_zero():
            raise ValueError("binomial_power needs zero constant term")
        n = self.order
        out = KappaSeries.one(n)
        term = KappaSeries.one(n)
        coeff = Fraction(1)
        for m in range(1, n + 1):
            coeff *= (e - (m - 1)) / m
            term = term * self
            out = out + term.scale_rational(coeff)
        return out

    def log(self) -> "KappaSeries":
        """Formal log; constant term must be exactly 1."""
        if self.coeffs[0] != _RC_ONE:
            raise ValueError("log requires constant term 1")
        n = self.order
        u = self - KappaSeries.one(n)
        out = KappaSeries.zero(n)
        term = KappaSeries.one(n)
        for m in range(1, n + 1):
            term = term * u
            out = out + term.scale_rational(Fraction((-1) ** (m + 1), m))
        return out

    def exp(self) -> "KappaSeries":
        """Formal exp; constant term must vanish."""
        if not self.coeffs[0].is_zero():
            raise ValueError("exp requires zero constant term")
        n = self.order
        out = KappaSeries.one(n)
        term = KappaSeries.one(n)
        fact = 1
        for m in range(1, n + 1):
            term = term * self
            fact *= m
            out = out + term.scale_rational(Fraction(1, fact))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KappaSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def evaluate_numeric(self, kappa: mpmath.mpc) -> mpmath.mpc:
        total = mpmath.mpc(0)
        power = mpmath.mpc(1)
        for c in self.coeffs:
            total += c.numeric() * power
            power *= kappa
        return total

    def __repr__(self) -> str:
        parts = [f"({c.render()})*k^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return "KappaSeries(" + (" + ".join(parts) or "0") + f", O(k^{self.order + 1}))"


def log_series(s: KappaSeries) -> KappaSeries:
    return s.log()


def exp_series(s: KappaSeries) -> KappaSeries:
    return s.exp()


def expand_kappa(a: ExactValue, order: int) -> KappaSeries:
    return a.expand_kappa(order)


def substitute_classical(a: ExactValue) -> RadicalCoefficient:
    return a.substitute_classical()


def evaluate_numeric(a: ExactValue, k, digits: int = 30, k_shift: int = 0) -> mpmath.mpc:
    return a.evaluate_numeric(k, digits=digits, k_shift=k_shift)
