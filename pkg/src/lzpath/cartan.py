"""Affine Cartan data and classical (level-zero) weights.

Classical weights are stored as integer pairing vectors ``(mu(h_0), ..., mu(h_l))``
in the order of the index set ``I = (0, 1, ..., l)``. Node ``0`` is the special
vertex of the affine diagram, ``I_0`` is the rest.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

Weight = tuple[int, ...]

SUPPORTED = (
    "A (affine A_{l-1}^(1), l >= 2)",
    "B (affine B_n^(1), n >= 3)",
    "C (affine C_n^(1), n >= 2)",
    "D (affine D_n^(1), n >= 4)",
)

ORBIT_CAP = 10**6


class UnsupportedTypeError(ValueError):
    pass


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class AffineCartanDatum:
    family: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    marks: tuple[int, ...]
    comarks: tuple[int, ...]
    root_form: tuple[tuple[int, ...], ...]

    @property
    def index_set(self) -> range:
        return range(len(self.cartan))

    @property
    def classical_index_set(self) -> range:
        return range(1, len(self.cartan))

    @property
    def a0(self) -> int:
        return self.marks[0]

    @property
    def label(self) -> str:
        if self.family == "A":
            return f"A_{self.rank - 1}^(1)"
        return f"{self.family}_{self.rank}^(1)"

    def simple_root(self, j: int) -> Weight:
        """cl(alpha_j) as a pairing vector; its i-th entry is a_ij."""
        return tuple(row[j] for row in self.cartan)

    def level(self, mu: Sequence[int | Fraction]) -> int | Fraction:
        return sum(a * m for a, m in zip(self.comarks, mu))

    def __str__(self) -> str:
        return self.label


def _check_datum(d: AffineCartanDatum) -> None:
    n = len(d.cartan)
    A = d.cartan
    for i in range(n):
        if A[i][i] != 2:
            raise AssertionError(f"{d.label}: a_{i}{i} != 2")
        for j in range(n):
            if i != j and (A[i][j] > 0 or (A[i][j] == 0) != (A[j][i] == 0)):
                raise AssertionError(f"{d.label}: bad off-diagonal entry ({i},{j})")
        if sum(A[i][j] * d.marks[j] for j in range(n)) != 0:
            raise AssertionError(f"{d.label}: marks not in the kernel (row {i})")
    for j in range(n):
        if sum(d.comarks[i] * A[i][j] for i in range(n)) != 0:
            raise AssertionError(f"{d.label}: comarks not in the cokernel (column {j})")
    B = d.root_form
    for i in range(n):
        if B[i][i] <= 0:
            raise AssertionError(f"{d.label}: (alpha_{i}, alpha_{i}) <= 0")
        for j in range(n):
            if B[i][j] != B[j][i] or 2 * B[i][j] != A[i][j] * B[i][i]:
                raise AssertionError(f"{d.label}: root form inconsistent at ({i},{j})")


def _root_form(cartan, marks, comarks):
    n = len(cartan)
    # (alpha_i, alpha_j) = a_i^vee / a_i * a_ij, rescaled to the smallest integral form
    raw = [[Fraction(comarks[i], marks[i]) * cartan[i][j] for j in range(n)] for i in range(n)]
    scale = lcm(*(x.denominator for row in raw for x in row))
    return tuple(tuple(int(x * scale) for x in row) for row in raw)


def _matrix(n: int, edges: Iterable[tuple[int, int, int, int]]):
    """Cartan matrix from edges ``(i, j, a_ij, a_ji)``."""
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j, aij, aji in edges:
        A[i][j] = aij
        A[j][i] = aji
    return tuple(tuple(row) for row in A)


def _type_a(ell: int):
    if ell < 2:
        raise UnsupportedTypeError(f"type A needs l >= 2 (got {ell}); supported: {', '.join(SUPPORTED)}")
    if ell == 2:
        cartan = ((2, -2), (-2, 2))
    else:
        cartan = _matrix(ell, [(i, (i + 1) % ell, -1, -1) for i in range(ell)])
    return cartan, (1,) * ell, (1,) * ell


def _type_b(n: int):
    if n < 3:
        raise UnsupportedTypeError(f"type B needs n >= 3 (got {n}); supported: {', '.join(SUPPORTED)}")
    edges = [(0, 2, -1, -1), (1, 2, -1, -1)]
    edges += [(i, i + 1, -1, -1) for i in range(2, n - 1)]
    edges.append((n - 1, n, -1, -2))
    marks = (1, 1) + (2,) * (n - 1)
    comarks = (1, 1) + (2,) * (n - 2) + (1,)
    return _matrix(n + 1, edges), marks, comarks


def _type_c(n: int):
    if n < 2:
        raise UnsupportedTypeError(f"type C needs n >= 2 (got {n}); supported: {', '.join(SUPPORTED)}")
    edges = [(0, 1, -1, -2)]
    edges += [(i, i + 1, -1, -1) for i in range(1, n - 1)]
    edges.append((n - 1, n, -2, -1))
    marks = (1,) + (2,) * (n - 1) + (1,)
    return _matrix(n + 1, edges), marks, (1,) * (n + 1)


def _type_d(n: int):
    if n < 4:
        raise UnsupportedTypeError(f"type D needs n >= 4 (got {n}); supported: {', '.join(SUPPORTED)}")
    edges = [(0, 2, -1, -1), (1, 2, -1, -1)]
    edges += [(i, i + 1, -1, -1) for i in range(2, n - 2)]
    edges += [(n - 2, n - 1, -1, -1), (n - 2, n, -1, -1)]
    marks = (1, 1) + (2,) * (n - 3) + (1, 1)
    return _matrix(n + 1, edges), marks, marks


_TABLES = {"A": _type_a, "B": _type_b, "C": _type_c, "D": _type_d}


@lru_cache(maxsize=None)
def datum_for(family: str, rank: int) -> AffineCartanDatum:
    """Cartan datum of an untwisted affine type, numbered as in Kac's Aff 1 table.

    For type ``A`` the ``rank`` is ``l`` in ``A_{l-1}^(1)`` (so the index set has
    ``l`` nodes); for ``B``, ``C``, ``D`` it is the usual ``n``.
    """
    fam = family.strip().upper()
    if fam not in _TABLES:
        raise UnsupportedTypeError(f"unsupported type {family!r}; supported: {', '.join(SUPPORTED)}")
    cartan, marks, comarks = _TABLES[fam](rank)
    d = AffineCartanDatum(fam, rank, cartan, marks, comarks, _root_form(cartan, marks, comarks))
    _check_datum(d)
    return d


# ---------------------------------------------------------------- weights


@dataclass(frozen=True, order=True)
class DominantWeight:
    """lambda = sum_i mults[i-1] * varpi_i over i in I_0."""

    mults: tuple[int, ...]

    def __post_init__(self):
        if any(m < 0 for m in self.mults):
            raise WeightError(f"negative multiplicity in {self.mults}")

    @classmethod
    def fundamental(cls, datum: AffineCartanDatum, i: int) -> "DominantWeight":
        if i not in datum.classical_index_set:
            raise WeightError(f"{i} is not in I_0 for {datum.label}")
        return cls(tuple(int(k == i) for k in datum.classical_index_set))

    @classmethod
    def from_sequence(cls, datum: AffineCartanDatum, seq: Sequence[int]) -> "DominantWeight":
        total = [0] * (len(datum.cartan) - 1)
        for i in seq:
            if i not in datum.classical_index_set:
                raise WeightError(f"{i} is not in I_0 for {datum.label}")
            total[i - 1] += 1
        return cls(tuple(total))

    def __add__(self, other: "DominantWeight") -> "DominantWeight":
        return DominantWeight(tuple(a + b for a, b in zip(self.mults, other.mults)))

    def is_zero(self) -> bool:
        return not any(self.mults)

    def cl(self, datum: AffineCartanDatum) -> Weight:
        if len(self.mults) != len(datum.cartan) - 1:
            raise WeightError(f"{self.mults} has wrong length for {datum.label}")
        h0 = -sum(m * datum.comarks[i] for i, m in enumerate(self.mults, start=1))
        return (h0,) + self.mults

    def as_sequence(self) -> tuple[int, ...]:
        """A weakly decreasing sequence i with sum of varpi_{i_k} equal to this weight."""
        return tuple(i for i in range(len(self.mults), 0, -1) for _ in range(self.mults[i - 1]))

    def __str__(self) -> str:
        terms = [f"{m}w{i}" if m != 1 else f"w{i}" for i, m in enumerate(self.mults, start=1) if m]
        return "+".join(terms) or "0"


def fundamental_cl(datum: AffineCartanDatum, i: int) -> Weight:
    """cl(varpi_i) with varpi_i = Lambda_i - a_i^vee Lambda_0."""
    return DominantWeight.fundamental(datum, i).cl(datum)


def reflect(datum: AffineCartanDatum, j: int, mu: Sequence) -> tuple:
    c = mu[j]
    if c == 0:
        return tuple(mu)
    return tuple(m - c * a for m, a in zip(mu, datum.simple_root(j)))


def is_dominant(datum: AffineCartanDatum, mu: Sequence) -> bool:
    return all(mu[j] >= 0 for j in datum.classical_index_set)


def is_antidominant(datum: AffineCartanDatum, mu: Sequence) -> bool:
    return all(mu[j] <= 0 for j in datum.classical_index_set)


def finite_orbit(datum: AffineCartanDatum, mu: Sequence[int], *, indices=None, cap: int = ORBIT_CAP) -> frozenset:
    """Closure of ``{mu}`` under the simple reflections ``r_j``, ``j`` in ``I_0``.

    ``indices`` may be widened to the full index set; for level-zero weights the
    result is the same.
    """
    mu = tuple(mu)
    if datum.level(mu) != 0:
        raise WeightError(f"{mu} is not level zero")
    js = datum.classical_index_set if indices is None else indices
    seen = {mu}
    todo = deque([mu])
    while todo:
        nu = todo.popleft()
        for j in js:
            r = reflect(datum, j, nu)
            if r not in seen:
                seen.add(r)
                if len(seen) > cap:
                    raise WeightError(f"orbit of {mu} exceeds {cap} elements")
                todo.append(r)
    return frozenset(seen)


def anti_dominant(datum: AffineCartanDatum, mu: Sequence[int]) -> Weight:
    mu = tuple(mu)
    if datum.level(mu) != 0:
        raise WeightError(f"{mu} is not level zero")
    # walk downhill; the finite Weyl group reaches the antidominant chamber
    while True:
        for j in datum.classical_index_set:
            if mu[j] > 0:
                mu = reflect(datum, j, mu)
                break
        else:
            return mu


def dominant(datum: AffineCartanDatum, mu: Sequence[int]) -> Weight:
    mu = tuple(mu)
    while True:
        for j in datum.classical_index_set:
            if mu[j] < 0:
                mu = reflect(datum, j, mu)
                break
        else:
            return mu


def _solve(M: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(M)
    A = [row[:] + [b[i]] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [A[r][n] for r in range(n)]


def root_coordinates(datum: AffineCartanDatum, mu: Sequence) -> list[Fraction]:
    """Coefficients ``c_j`` (j in I_0) with ``mu = sum_j c_j cl(alpha_j)``."""
    if datum.level(mu) != 0:
        raise WeightError(f"{tuple(mu)} is not level zero")
    I0 = datum.classical_index_set
    M = [[Fraction(datum.cartan[i][j]) for j in I0] for i in I0]
    return _solve(M, [Fraction(mu[i]) for i in I0])


def cl_form(datum: AffineCartanDatum, mu: Sequence, nu: Sequence) -> Fraction:
    """The form ``(mu, nu)_cl`` on level-zero classical weights."""
    c = root_coordinates(datum, mu)
    d = c if tuple(mu) == tuple(nu) else root_coordinates(datum, nu)
    I0 = list(datum.classical_index_set)
    B = datum.root_form
    return sum(
        (c[a] * d[b] * B[i][j] for a, i in enumerate(I0) for b, j in enumerate(I0)),
        Fraction(0),
    )
