"""Farey sequences as periodic BCZ orbits, with a brute-force oracle and statistics.

The orbit of (1/Q, 1) is periodic of period N(Q) = sum_{q <= Q} phi(q) and
visits exactly the points (q_i/Q, q_{i+1}/Q) indexed by the Farey sequence
F(Q) = {0/1 = gamma_1 < ... < gamma_N} of level Q.  Denominators are
recovered as Q*a along the orbit, so the whole orbit runs in integer
arithmetic:

    (q, q') -> (q', floor((Q + q)/q') * q' - q)

which is the BCZ step with denominators cleared.  All empirical statistics
of F(Q) (gaps, h-gaps, indices, denominator moments, excursion functionals)
are averages against the uniform measure on the orbit points whose fraction
lands in a prescribed interval I.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

PI2_3 = math.pi**2 / 3

_totients_upto: np.ndarray = np.array([0, 1], dtype=np.int64)  # phi(0) unused


def _extend_totients(n: int) -> None:
    global _totients_upto
    if n < len(_totients_upto):
        return
    phi = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if phi[p] == p:  # p prime
            phi[p::p] -= phi[p::p] // p
    _totients_upto = phi


def totient(q: int) -> int:
    _extend_totients(q)
    return int(_totients_upto[q])


def farey_cardinality(Q: int) -> int:
    """N(Q) = sum_{q <= Q} phi(q), the length of F(Q) (0/1 included, 1/1 not)."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    _extend_totients(Q)
    return int(_totients_upto[1 : Q + 1].sum())


class FareySequence:
    """Level-Q Farey fractions with parallel denominator/numerator arrays.

    Denominators are stored eagerly (they fall out of the orbit); numerators
    are recovered on demand from the unimodularity recurrence
    p_{i+1} = (1 + p_i q_{i+1}) / q_i.
    """

    def __init__(self, level: int, denominators: np.ndarray, numerators=None):
        self.level = level
        self.denominators = denominators
        self._numerators = numerators

    def __len__(self) -> int:
        return len(self.denominators)

    @property
    def numerators(self) -> np.ndarray:
        if self._numerators is None:
            q = self.denominators.tolist()
            p = [0] * len(q)
            for i in range(len(q) - 1):
                p[i + 1] = (1 + p[i] * q[i + 1]) // q[i]
            self._numerators = np.array(p, dtype=np.int64)
        return self._numerators

    def fractions(self) -> list:
        return [Fraction(int(p), int(q)) for p, q in zip(self.numerators, self.denominators)]

    def orbit_points(self):
        """Section points (q_i/Q, q_{i+1}/Q), the i-th associated with gamma_i."""
        Q = self.level
        q = self.denominators
        return [
            (Fraction(int(q[i]), Q), Fraction(int(q[(i + 1) % len(q)]), Q))
            for i in range(len(q))
        ]


_orbit_cache: dict[int, FareySequence] = {}


def farey_orbit(Q: int) -> FareySequence:
    """F(Q) generated by iterating the BCZ map from (1/Q, 1) until first return."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    cached = _orbit_cache.get(Q)
    if cached is not None:
        return cached
    n = farey_cardinality(Q)
    qs = np.empty(n, dtype=np.int64)
    q, r = 1, Q
    for i in range(n):
        qs[i] = q
        q, r = r, ((Q + q) // r) * r - q
    if (q, r) != (1, Q):
        raise RuntimeError(f"orbit of (1/{Q}, 1) did not close after N({Q}) = {n} steps")
    seq = FareySequence(Q, qs)
    _orbit_cache[Q] = seq
    return seq


def farey_bruteforce(Q: int) -> FareySequence:
    """Ground-truth F(Q): enumerate reduced p/q, 0 <= p < q <= Q, and sort.

    The sort key floor(p * 2^64 / q) is an order-preserving integer since
    distinct level-Q fractions differ by more than 2^-64 for any sane Q.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    pairs = [(0, 1)]
    for q in range(2, Q + 1):
        pairs.extend((p, q) for p in range(1, q) if math.gcd(p, q) == 1)
    pairs.sort(key=lambda pq: (pq[0] << 64) // pq[1])
    return FareySequence(
        Q,
        np.array([q for _, q in pairs], dtype=np.int64),
        np.array([p for p, _ in pairs], dtype=np.int64),
    )


def orbit_flow_period(Q: int) -> Fraction:
    """Exact sum of return times along the orbit of (1/Q, 1); equals Q^2.

    Accumulated as a raw (num, den) pair: the partial sums telescope to
    Q^2 p_{i+1}/q_{i+1}, so denominators stay <= Q and the arithmetic is cheap.
    """
    q = farey_orbit(Q).denominators.tolist()
    n = len(q)
    Q2 = Q * Q
    num, den = 0, 1
    for i in range(n):
        qq = q[i] * q[(i + 1) % n]
        num = num * qq + Q2 * den
        den *= qq
        g = math.gcd(num, den)
        num //= g
        den //= g
    return Fraction(num, den)


# -- interval selection and the empirical measure ---------------------------

def _as_interval(interval) -> tuple[Fraction, Fraction]:
    lo, hi = interval
    lo, hi = Fraction(lo), Fraction(hi)
    if not (0 <= lo <= hi <= 1):
        raise ValueError(f"interval [{lo}, {hi}] not inside [0, 1]")
    return lo, hi


def _interval_mask(seq: FareySequence, interval) -> np.ndarray:
    """Boolean mask of gamma_i in the closed interval (exact comparisons)."""
    lo, hi = _as_interval(interval)
    p, q = seq.numerators, seq.denominators
    # int64 cross-multiplication is exact only while the products fit
    bound = max(lo.denominator, abs(lo.numerator), hi.denominator, hi.numerator)
    if bound * seq.level < 2**62:
        return (p * lo.denominator >= lo.numerator * q) & (p * hi.denominator <= hi.numerator * q)
    pl, ql = p.tolist(), q.tolist()
    return np.array([lo <= Fraction(a, b) <= hi for a, b in zip(pl, ql)])


def interval_count(Q: int, interval=(0, 1)) -> int:
    """N_I(Q) = |F(Q) ∩ I|."""
    if interval == (0, 1):
        return farey_cardinality(Q)
    return int(np.count_nonzero(_interval_mask(farey_orbit(Q), interval)))


def _selected_pairs(Q: int, interval):
    """Denominator pairs (q_i, q_{i+1}) for the fractions gamma_i in I."""
    seq = farey_orbit(Q)
    q = seq.denominators
    qn = np.roll(q, -1)
    if interval == (0, 1):
        return q, qn
    mask = _interval_mask(seq, interval)
    if not mask.any():
        raise ValueError(f"no Farey fraction of level {Q} in {interval}")
    return q[mask], qn[mask]


class EmpiricalMeasure:
    """Uniform probability on the orbit points (q_i/Q, q_{i+1}/Q), gamma_i in I."""

    def __init__(self, level: int, interval, qi: np.ndarray, qn: np.ndarray):
        self.level = level
        self.interval = interval
        self.qi = qi
        self.qn = qn

    def __len__(self) -> int:
        return len(self.qi)

    @property
    def weight(self) -> float:
        return 1.0 / len(self.qi)

    def support(self) -> list:
        Q = self.level
        return [(Fraction(int(a), Q), Fraction(int(b), Q)) for a, b in zip(self.qi, self.qn)]

    def integral(self, G: Callable) -> float:
        """G is called once with the two float coordinate arrays."""
        return float(np.mean(G(self.qi / self.level, self.qn / self.level)))


def empirical_measure(Q: int, interval=(0, 1)) -> EmpiricalMeasure:
    qi, qn = _selected_pairs(Q, interval)
    return EmpiricalMeasure(Q, interval, qi, qn)


def empirical_integral(Q: int, interval, G: Callable) -> float:
    """rho_{Q,I}(G): mean of G over the orbit points with gamma_i in I."""
    return empirical_measure(Q, interval).integral(G)


def normalized_gaps(Q: int, interval=(0, 1)) -> np.ndarray:
    """(3/pi^2) |I| Q^2 (gamma_{i+1} - gamma_i) for the selected gamma_i."""
    lo, hi = _as_interval(interval)
    length = float(hi - lo)
    qi, qn = _selected_pairs(Q, interval)
    return (3 / math.pi**2) * length * Q * Q / (qi.astype(float) * qn)


def spacing_proportion(Q: int, interval, c: float, d: float) -> float:
    """Fraction of selected gaps with normalized value in the open interval (c, d)."""
    if not 0 <= c <= d:
        raise ValueError("need 0 <= c <= d")
    g = normalized_gaps(Q, interval)
    return float(np.count_nonzero((g > c) & (g < d)) / len(g))


def h_spacing_proportion(Q: int, interval, box: Sequence[tuple]) -> float:
    """Fraction of i (gamma_i in I) whose h consecutive normalized gaps lie in the box.

    The j-th component of the gap tuple at gamma_i is the normalized gap
    between gamma_{i+j-1} and gamma_{i+j}; indices wrap cyclically.
    """
    if len(box) < 1:
        raise ValueError("box must contain at least one interval")
    lo, hi = _as_interval(interval)
    length = float(hi - lo)
    seq = farey_orbit(Q)
    q = seq.denominators
    qn = np.roll(q, -1)
    gaps = (3 / math.pi**2) * length * Q * Q / (q.astype(float) * qn)
    if interval == (0, 1):
        mask = np.ones(len(q), dtype=bool)
    else:
        mask = _interval_mask(seq, interval)
        if not mask.any():
            raise ValueError(f"no Farey fraction of level {Q} in {interval}")
    inside = mask.copy()
    for j, (cj, dj) in enumerate(box):
        gj = np.roll(gaps, -j)
        inside &= (gj > cj) & (gj < dj)
    return float(np.count_nonzero(inside) / np.count_nonzero(mask))


def index_values(Q: int, interval=(0, 1)) -> np.ndarray:
    """Farey indices nu(gamma_i) = (q_{i-1} + q_{i+1}) / q_i for gamma_i in I.

    Neighbors are cyclic; division is exact (a Farey-neighbor identity),
    checked at runtime.
    """
    if Q < 2:
        raise ValueError("indices need Q >= 2")
    seq = farey_orbit(Q)
    q = seq.denominators
    s = np.roll(q, 1) + np.roll(q, -1)
    if np.any(s % q):
        raise RuntimeError("index identity (q_{i-1}+q_{i+1}) | q_i failed")
    nu = s // q
    if interval == (0, 1):
        return nu
    mask = _interval_mask(seq, interval)
    return nu[mask]


def index_values_via_kappa(Q: int) -> np.ndarray:
    """The same indices through the section map: nu(gamma_i) = kappa(T^{i-2}(1/Q, 1))."""
    q = farey_orbit(Q).denominators
    qm = np.roll(q, 1)
    return (Q + qm) // q


def moment_sum(Q: int, interval, s, t):
    """Normalized denominator moment sum (1/(N_I Q^{s+t})) sum q_i^s q_{i+1}^t.

    Equals the empirical integral of x^s y^t; complex exponents supported.
    """
    qi, qn = _selected_pairs(Q, interval)
    a = qi / Q
    b = qn / Q
    if isinstance(s, complex) or isinstance(t, complex):
        val = np.mean(np.exp(s * np.log(a) + t * np.log(b)))
        return complex(val)
    return float(np.mean(a**float(s) * b**float(t)))


def counting_bound_check(Q: int, interval=(0, 1)) -> bool:
    """N_I(Q) >= min(|I|/(18 pi), |I|^2/4) * Q^2."""
    n = interval_count(Q, interval)
    if n <= 0:
        raise ValueError("counting bound undefined for an empty selection")
    lo, hi = _as_interval(interval)
    length = float(hi - lo)
    c1 = min(length / (18 * math.pi), length * length / 4)
    return n >= c1 * Q * Q
