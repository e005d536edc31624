"""Classically restricted one-dimensional sums and Kostka-Foulkes polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cartan import AffineCartanDatum, DominantWeight, Weight, WeightError, is_dominant
from .crystal import CrystalGraph, fundamental_tensor, generate
from .energy import degree_table, energy_D_ext, energy_values
from .laurent import LaurentPolynomial


def restricted_highest(graph: CrystalGraph) -> list:
    """Elements killed by every classical raising operator, in element order."""
    I0 = graph.datum.classical_index_set
    return [b for b in graph.elements if all(graph.raise_(b, j) is None for j in I0)]


def one_dim_sum(datum: AffineCartanDatum, seq: Sequence[int], mu: Sequence[int]) -> LaurentPolynomial:
    """X(B_i, mu; q)."""
    seq = tuple(seq)
    mu = tuple(mu)
    g = fundamental_tensor(datum, seq)
    D = energy_values(datum, seq)
    return LaurentPolynomial.from_exponents(D[b] for b in restricted_highest(g) if g.wt(b) == mu)


def normalized_sum(datum: AffineCartanDatum, seq: Sequence[int], mu: Sequence[int]) -> LaurentPolynomial:
    """q^{-D_ext} X(B_i, mu; q)."""
    return one_dim_sum(datum, seq, mu).shift(-energy_D_ext(datum, tuple(seq)))


def path_degree_sum(datum: AffineCartanDatum, lam: DominantWeight, mu: Sequence[int]) -> LaurentPolynomial:
    """Sum of q^{Deg(eta)} over classically highest eta in B(lam)_cl ending at mu."""
    mu = tuple(mu)
    table = degree_table(datum, lam)
    g = table.graph
    return LaurentPolynomial.from_exponents(table[b] for b in restricted_highest(g) if g.wt(b) == mu)


def highest_weights(datum: AffineCartanDatum, lam: DominantWeight) -> list[Weight]:
    """Distinct weights of classically highest elements, sorted."""
    g = generate(datum, lam)
    return sorted({g.wt(b) for b in restricted_highest(g)})


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = tuple(int(x) for x in self.parts)
        while p and p[-1] == 0:
            p = p[:-1]
        if any(x <= 0 for x in p) or any(a < b for a, b in zip(p, p[1:])):
            raise ValueError(f"{self.parts} is not a partition")
        object.__setattr__(self, "parts", p)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for x in self.parts if x > k) for k in range(self.parts[0])))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions(n: int, max_part: int | None = None, max_len: int | None = None):
    """Partitions of n in reverse lexicographic order."""
    max_part = n if max_part is None else max_part
    if n == 0:
        yield Partition(())
        return
    if max_len == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first, None if max_len is None else max_len - 1):
            yield Partition((first,) + rest.parts)


def _require_type_a(datum: AffineCartanDatum) -> int:
    if datum.family != "A":
        raise WeightError(f"partition identification needs type A, got {datum.label}")
    return datum.rank


def weight_to_partition(datum: AffineCartanDatum, mu: Sequence[int], n: int) -> Partition | None:
    """The partition (sum_{i>=1} mu^(i), sum_{i>=2} mu^(i), ..., mu^(l-1), 0),
    padded by full columns of height l to have n boxes; None if impossible."""
    ell = _require_type_a(datum)
    mu = tuple(mu)
    if datum.level(mu) != 0 or not is_dominant(datum, mu):
        raise WeightError(f"{mu} is not a level-zero dominant weight")
    mults = mu[1:]
    parts = [sum(mults[k:]) for k in range(ell - 1)] + [0]
    deficit = n - sum(parts)
    if deficit < 0 or deficit % ell:
        return None
    c = deficit // ell
    return Partition(tuple(p + c for p in parts))


def partition_to_weight(datum: AffineCartanDatum, p: Partition) -> Weight:
    """Inverse of weight_to_partition on partitions with at most l parts."""
    ell = _require_type_a(datum)
    if len(p) > ell:
        raise WeightError(f"{p} has more than {ell} parts")
    parts = list(p.parts) + [0] * (ell - len(p))
    mults = [parts[k] - parts[k + 1] for k in range(ell - 1)]
    return DominantWeight(tuple(mults)).cl(datum)


def kostka_foulkes_paths(datum: AffineCartanDatum, seq: Sequence[int], mu: Sequence[int]) -> LaurentPolynomial:
    """K_{mu^t, lambda^dagger}(q) as the sum of q^{-Deg} over classically highest paths."""
    _require_type_a(datum)
    seq = tuple(seq)
    if any(a < b for a, b in zip(seq, seq[1:])):
        raise ValueError(f"sequence {seq} is not weakly decreasing")
    lam = DominantWeight.from_sequence(datum, seq)
    return path_degree_sum(datum, lam, mu).invert()


def kostka_indices(datum: AffineCartanDatum, seq: Sequence[int], mu: Sequence[int]) -> tuple[Partition, Partition] | None:
    """(mu^t, lambda^dagger) for the charge oracle, or None if mu has the wrong box count."""
    n = sum(seq)
    p = weight_to_partition(datum, mu, n)
    if p is None:
        return None
    return p.conjugate(), Partition(tuple(sorted(seq, reverse=True)))
