"""Closed-form recoupling data of the q-deformed SU(2) theory.

Quantum dimensions, theta values, twist phases, fusion/crossing coefficients,
tetrahedra and q-Racah symbols, all as exact values in the normalization where
a spin-j loop evaluates to Delta_j = [2j+1] (positive) and a theta network to
sqrt(Delta_a Delta_b Delta_c).

Conventions fixed here (and exercised by the move-invariance test battery):

* q^x means exp(2*pi*i*x/k); h_j = j(j+1)/k, so twist phases are q-monomials
  with exponent j(j+1).
* A *right* curl multiplies a strand's value by q^(-j(j+1)); left by the
  inverse.  Crossing signs are named so that a kink made from a positive
  crossing is a right curl.
* The channel phase of a positive crossing on strands (j1, j2) in channel i is
  (-1)^(j1+j2+i) q^((c1+c2-ci)/2) with c = j(j+1); the negative crossing uses
  the conjugate phase, which is exactly the Reidemeister-II constraint.  The
  literal printed phase with +ci in the exponent fails R2/R1 and is only
  available behind ``raw_channel_phase`` for comparison.
* Odd-parity triads (integer triad sum odd) carry an imaginary unit in their
  vertex normalization; racah coefficients on sites with an odd number of
  odd-parity triads are pure imaginary.  The sign conventions below were
  pinned against an explicit Clebsch-Gordan tensor model (see
  scripts/derive_recoupling_sign.py) and are frozen by regression tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from spinnet.scalar import (
    ExactValue,
    LaurentQ,
    RadicalCoefficient,
    delta_laurent,
)


class InadmissibleTriple(ValueError):
    """A spin triple violating the triangle/integrality condition."""


@dataclass(frozen=True, order=True)
class Spin:
    """SU(2) spin stored as twice its value (two_j = 1 means spin 1/2)."""

    two_j: int

    def __post_init__(self):
        if self.two_j < 0:
            raise ValueError("spin must be non-negative")

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def casimir(self) -> Fraction:
        """j(j+1), the exponent entering twist phases."""
        return Fraction(self.two_j * (self.two_j + 2), 4)

    @staticmethod
    def parse(text: str) -> "Spin":
        """Parse '1', '1/2', '3/2' into a Spin."""
        f = Fraction(text)
        two_j = 2 * f
        if two_j.denominator != 1:
            raise ValueError(f"spin {text!r}: twice the spin must be an integer")
        return Spin(int(two_j))

    def __str__(self) -> str:
        return str(Fraction(self.two_j, 2))


@dataclass(frozen=True)
class SpinTriple:
    a: Spin
    b: Spin
    c: Spin

    def is_admissible(self) -> bool:
        x, y, z = self.a.two_j, self.b.two_j, self.c.two_j
        return abs(x - y) <= z <= x + y and (x + y + z) % 2 == 0

    def require_admissible(self) -> "SpinTriple":
        if not self.is_admissible():
            raise InadmissibleTriple(f"inadmissible triple ({self.a}, {self.b}, {self.c})")
        return self

    def parity(self) -> int:
        """Parity of the integer triad sum j_a + j_b + j_c."""
        return ((self.a.two_j + self.b.two_j + self.c.two_j) // 2) % 2


class VertexOrientation:
    PLUS = "+"
    MINUS = "-"


def admissible(a: Spin, b: Spin, c: Spin) -> bool:
    return SpinTriple(a, b, c).is_admissible()


def channels(j1: Spin, j2: Spin) -> Iterator[Spin]:
    """Admissible intermediate spins of j1 (x) j2, from |j1-j2| to j1+j2."""
    for two_i in range(abs(j1.two_j - j2.two_j), j1.two_j + j2.two_j + 1, 2):
        yield Spin(two_i)


# -- quantum integers and factorials ------------------------------------------


@lru_cache(maxsize=None)
def _qint(n: int) -> LaurentQ:
    """[n] = q^((n-1)/2) + q^((n-3)/2) + ... + q^(-(n-1)/2)."""
    if n < 0:
        raise ValueError("negative quantum integer")
    return delta_laurent(n - 1) if n >= 1 else LaurentQ.zero()


@lru_cache(maxsize=None)
def _qfact(n: int) -> LaurentQ:
    """[n]! as an explicit Laurent polynomial."""
    if n <= 1:
        return LaurentQ.one()
    return _qfact(n - 1) * _qint(n)


def _qfact_bases(n: int) -> dict[int, int]:
    """[n]! as a multiset of Delta bases: {two_j: count} with [k] = Delta_((k-1)/2)."""
    return {k - 1: 1 for k in range(2, n + 1)}


def quantum_integer(n: int) -> ExactValue:
    """The quantum integer [n] as an explicit Laurent polynomial value."""
    if n < 1:
        raise ValueError("quantum_integer requires n >= 1")
    return ExactValue.from_laurent(_qint(n))


def delta(j: Spin) -> ExactValue:
    """Quantum dimension Delta_j = [2j+1], the value of an unknotted spin-j loop."""
    return ExactValue.from_laurent(delta_laurent(j.two_j))


def theta_wm(t: SpinTriple) -> ExactValue:
    """Theta-network value sqrt(Delta_a Delta_b Delta_c), kept in radical form."""
    t.require_admissible()
    half = Fraction(1, 2)
    rad: dict[int, Fraction] = {}
    for s in (t.a, t.b, t.c):
        rad[s.two_j] = rad.get(s.two_j, Fraction(0)) + half
    return ExactValue.from_radical(rad)


def curl_phase(j: Spin, handedness: str) -> ExactValue:
    """Eq-(10)-type framing monomial: right curl q^(-j(j+1)), left q^(+j(j+1))."""
    if handedness not in ("right", "left"):
        raise ValueError("handedness must be 'right' or 'left'")
    sign = -1 if handedness == "right" else 1
    return ExactValue.q_power(sign * j.casimir)


def vertex_twist_phase(t: SpinTriple) -> ExactValue:
    """Phase of twisting the first two legs of a vertex across the third.

    (-1)^(j1+j2+j3) q^((c1+c2-c3)/2), the vertex-twist skein factor for the
    twist handedness matching a positive crossing of the first two legs.
    """
    t.require_admissible()
    exponent = (t.a.casimir + t.b.casimir - t.c.casimir) / 2
    sign = RadicalCoefficient.from_rational((-1) ** t.parity())
    return ExactValue([(LaurentQ.q_power(exponent, sign), LaurentQ.one(), {})])


def fusion_coefficient(j1: Spin, j2: Spin, i: Spin) -> ExactValue:
    """Parallel-fusion weight sqrt(Delta_i / (Delta_j1 Delta_j2)) for channel i."""
    SpinTriple(j1, j2, i).require_admissible()
    half = Fraction(1, 2)
    rad: dict[int, Fraction] = {}
    for two_j, e in ((i.two_j, half), (j1.two_j, -half), (j2.two_j, -half)):
        rad[two_j] = rad.get(two_j, Fraction(0)) + e
    return ExactValue.from_radical(rad)


def channel_phase(j1: Spin, j2: Spin, i: Spin, sign: str,
                  raw_channel_phase: bool = False) -> ExactValue:
    """The pure phase multiplying the fusion weight in a crossing resolution."""
    t = SpinTriple(j1, j2, i)
    t.require_admissible()
    exponent = (j1.casimir + j2.casimir - i.casimir) / 2
    if raw_channel_phase:
        # Literal variant with +c_i in the exponent; breaks R1/R2, debug only.
        exponent = (j1.casimir + j2.casimir + i.casimir) / 2
    if sign == "under":
        exponent = -exponent
    elif sign != "over":
        raise ValueError("crossing sign must be 'over' or 'under'")
    s = RadicalCoefficient.from_rational((-1) ** t.parity())
    return ExactValue([(LaurentQ.q_power(exponent, s), LaurentQ.one(), {})])


def crossing_coefficient(j1: Spin, j2: Spin, i: Spin, sign: str,
                         raw_channel_phase: bool = False) -> ExactValue:
    """Channel weight of a resolved crossing: fusion coefficient times phase.

    ``sign='over'`` is the positive crossing (a kink of it is a right curl);
    'under' uses the conjugate phase so that composing the two is the identity.
    """
    return fusion_coefficient(j1, j2, i) * channel_phase(
        j1, j2, i, sign, raw_channel_phase=raw_channel_phase)


# -- tetrahedra and q-Racah symbols --------------------------------------------


def _triangle_radical(x: Spin, y: Spin, z: Spin) -> tuple[dict[int, int], dict[int, int]]:
    """Delta-base multisets (num, den) with sqrt(num/den) the triangle factor.

    Triangle(x,y,z)^2 = [x+y-z]! [x-y+z]! [-x+y+z]! / [x+y+z+1]! and every
    quantum factorial is a product of quantum integers, i.e. Delta bases.
    """
    num: dict[int, int] = {}
    den: dict[int, int] = {}
    for arg in ((x.two_j + y.two_j - z.two_j) // 2,
                (x.two_j - y.two_j + z.two_j) // 2,
                (-x.two_j + y.two_j + z.two_j) // 2):
        for b, c in _qfact_bases(arg).items():
            num[b] = num.get(b, 0) + c
    for b, c in _qfact_bases((x.two_j + y.two_j + z.two_j) // 2 + 1).items():
        den[b] = den.get(b, 0) + c
    return num, den


@lru_cache(maxsize=None)
def _racah_cached(tj1: int, tj2: int, tj3: int, tj4: int, tj: int, tl: int) -> ExactValue:
    j1, j2, j3, j4, j, l = (Spin(t) for t in (tj1, tj2, tj3, tj4, tj, tl))
    triads = (
        SpinTriple(j1, j2, j),
        SpinTriple(j3, j4, j),
        SpinTriple(j1, j4, l),
        SpinTriple(j2, j3, l),
    )
    for t in triads:
        t.require_admissible()

    # Integer triad sums and square sums bounding the summation index.
    T = [(t.a.two_j + t.b.two_j + t.c.two_j) // 2 for t in triads]
    Q = [
        (tj1 + tj2 + tj3 + tj4) // 2,
        (tj1 + tj3 + tj + tl) // 2,
        (tj2 + tj4 + tj + tl) // 2,
    ]

    total = ExactValue.zero()
    for t in range(max(T), min(Q) + 1):
        num = _qfact(t + 1)
        den = LaurentQ.one()
        for Ti in T:
            den = den * _qfact(t - Ti)
        for Qk in Q:
            den = den * _qfact(Qk - t)
        sign = RadicalCoefficient.from_rational((-1) ** (t % 2))
        total = total + ExactValue([(num.scale(sign), den, {})])

    # Radical prefactor: the four triangle factors and sqrt(Delta_j Delta_l).
    rad: dict[int, Fraction] = {}

    def bump(two_j: int, e: Fraction):
        if two_j:
            rad[two_j] = rad.get(two_j, Fraction(0)) + e

    for t in triads:
        tri_num, tri_den = _triangle_radical(t.a, t.b, t.c)
        for b, c in tri_num.items():
            bump(b, Fraction(c, 2))
        for b, c in tri_den.items():
            bump(b, Fraction(-c, 2))
    bump(tj, Fraction(1, 2))
    bump(tl, Fraction(1, 2))

    value = total * ExactValue.from_radical(rad)

    # Phase convention: each odd-parity triad contributes an imaginary unit to
    # its vertex normalization; the W-tree pair conjugates, the D-tree pair
    # does not.  Pinned against the tensor model and frozen by tests.
    phase_power = (triads[2].parity() + triads[3].parity()
                   - triads[0].parity() - triads[1].parity())
    if phase_power % 4:
        value = value.scale(RadicalCoefficient.i_power(phase_power))
    return value


def racah(j1: Spin, j2: Spin, j3: Spin, j4: Spin, j: Spin, l: Spin) -> ExactValue:
    """q-Racah recoupling coefficient between the two four-leg trees.

    Expands the tree with vertices (j1,j2,j),(j3,j4,j) over trees with
    vertices (j1,j4,l),(j2,j3,l); equals the tetrahedron value divided by
    sqrt(Delta_1 Delta_2 Delta_3 Delta_4).
    """
    return _racah_cached(j1.two_j, j2.two_j, j3.two_j, j4.two_j, j.two_j, l.two_j)


def racah_matrix(j1: Spin, j2: Spin, j3: Spin, j4: Spin) -> dict[tuple[Spin, Spin], ExactValue]:
    """All recoupling coefficients of a four-leg family, keyed by (j, l)."""
    out: dict[tuple[Spin, Spin], ExactValue] = {}
    for j in channels(j1, j2):
        if not admissible(j3, j4, j):
            continue
        for l in channels(j1, j4):
            if not admissible(j2, j3, l):
                continue
            out[(j, l)] = racah(j1, j2, j3, j4, j, l)
    return out


def tet(j1: Spin, j2: Spin, j3: Spin, j4: Spin, j: Spin, l: Spin) -> ExactValue:
    """Tetrahedron network value, vertices (j1,j2,j),(j3,j4,j),(j1,j4,l),(j2,j3,l).

    Opposite edge pairs are (j1,j3), (j2,j4), (j,l).
    """
    half = Fraction(1, 2)
    rad: dict[int, Fraction] = {}
    for s in (j1, j2, j3, j4):
        if s.two_j:
            rad[s.two_j] = rad.get(s.two_j, Fraction(0)) + half
    return racah(j1, j2, j3, j4, j, l) * ExactValue.from_radical(rad)


def vertex_normalization(t: SpinTriple, orientation: str) -> ExactValue:
    """Orientation-normalization factor of a trivalent vertex.

    exp(+-i*pi*(j1+j2+j3)/2) times the fourth root of the product of the
    classical dimensions (2j+1).
    """
    t.require_admissible()
    if orientation not in (VertexOrientation.PLUS, VertexOrientation.MINUS):
        raise ValueError("orientation must be '+' or '-'")
    total = (t.a.two_j + t.b.two_j + t.c.two_j) // 2
    if orientation == VertexOrientation.MINUS:
        total = -total
    phase = RadicalCoefficient.i_power(total)
    dims = (t.a.two_j + 1) * (t.b.two_j + 1) * (t.c.two_j + 1)
    root = RadicalCoefficient.root_of_rational(Fraction(dims), Fraction(1, 4))
    return ExactValue.from_coefficient(phase * root)


def export_table(kind: str, max_two_j: int) -> list[dict]:
    """JSON-ready rows of racah/tet values up to a spin cutoff."""
    if kind not in ("racah", "tet"):
        raise ValueError("kind must be 'racah' or 'tet'")
    fn = racah if kind == "racah" else tet
    rows = []
    spins = [Spin(t) for t in range(max_two_j + 1)]
    for j1 in spins:
        for j2 in spins:
            for j3 in spins:
                for j4 in spins:
                    for j in channels(j1, j2):
                        if j.two_j > max_two_j or not admissible(j3, j4, j):
                            continue
                        for l in channels(j1, j4):
                            if l.two_j > max_two_j or not admissible(j2, j3, l):
                                continue
                            rows.append({
                                "j1": j1.two_j, "j2": j2.two_j,
                                "j3": j3.two_j, "j4": j4.two_j,
                                "j": j.two_j, "l": l.two_j,
                                "value": fn(j1, j2, j3, j4, j, l).to_json_obj(),
                            })
    return rows
