"""Local energies H, the degree function Deg, the energy D_i and the checks
that tie them together.

Both H and Deg are built by propagation along crystal edges from an anchor,
and every edge (not just a spanning tree) is re-checked, so each table is an
over-determined computation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

from .cartan import AffineCartanDatum, DominantWeight, anti_dominant, fundamental_cl, reflect
from .crystal import (
    CheckResult,
    CrystalError,
    CrystalGraph,
    element_key,
    fundamental_tensor,
    generate,
    pair_tensor,
    psi,
    psi_pair,
    r_matrix,
    tensor_route,
)
from .paths import ClPath, straight


class ConsistencyError(CrystalError):
    """An over-determined recursion produced two different values."""


LEFT, RIGHT = 0, 1


@dataclass(eq=False)
class EnergyTable:
    datum: AffineCartanDatum
    lam: DominantWeight
    lam2: DominantWeight
    graph: CrystalGraph
    values: dict
    edges_checked: int = 0

    def __getitem__(self, b) -> int:
        return self.values[b]

    def to_json(self) -> dict:
        return {
            "shape": [str(self.lam), str(self.lam2)],
            "values": {element_key(b): self.values[b] for b in self.graph.elements},
        }


@dataclass(eq=False)
class DegreeTable:
    datum: AffineCartanDatum
    lam: DominantWeight
    graph: CrystalGraph
    values: dict
    edges_checked: int = 0

    def __getitem__(self, b) -> int:
        return self.values[b]

    def to_json(self) -> dict:
        return {
            "shape": str(self.lam),
            "values": {element_key(b): self.values[b] for b in self.graph.elements},
        }


def _propagate(graph: CrystalGraph, start_value: int, step, what: str):
    """Fill a table with ``value(e_j b) = value(b) + step(b, j)`` and check every edge."""
    values = {graph.source: start_value}
    todo = deque([graph.source])
    while todo:
        b = todo.popleft()
        for j in graph.datum.index_set:
            up = graph.raise_(b, j)
            if up is not None and up not in values:
                values[up] = values[b] + step(b, j)
                todo.append(up)
            down = graph.lower(b, j)
            if down is not None and down not in values:
                values[down] = values[b] - step(down, j)
                todo.append(down)
    if len(values) != len(graph):
        raise ConsistencyError(f"{what}: only {len(values)} of {len(graph)} elements reached")
    checked = 0
    for j in graph.datum.index_set:
        for b, up in graph.e[j].items():
            expected = values[b] + step(b, j)
            if values[up] != expected:
                raise ConsistencyError(
                    f"{what}: conflict along e_{j} from {element_key(b)}: "
                    f"table has {values[up]}, edge gives {expected}"
                )
            checked += 1
    return values, checked


@lru_cache(maxsize=None)
def local_energy(datum: AffineCartanDatum, lam: DominantWeight, lam2: DominantWeight) -> EnergyTable:
    """H_{lam,lam2}, normalized to 0 at the tensor of the two dominant straight lines."""
    graph = pair_tensor(datum, lam, lam2)
    R = r_matrix(datum, lam, lam2)
    image_factors = R.dst.factors

    def step(b, j):
        if j != 0:
            return 0
        here = tensor_route(b, 0, graph.factors, raising=True)
        there = tensor_route(R(b), 0, image_factors, raising=True)
        if here == there == LEFT:
            return 1
        if here == there == RIGHT:
            return -1
        return 0

    values, checked = _propagate(graph, 0, step, f"H_{{{lam},{lam2}}}")
    return EnergyTable(datum, lam, lam2, graph, values, checked)


def _fund(datum: AffineCartanDatum, i: int) -> DominantWeight:
    return DominantWeight.fundamental(datum, i)


def H(datum: AffineCartanDatum, i: int, i2: int, b1: ClPath, b2: ClPath) -> int:
    return local_energy(datum, _fund(datum, i), _fund(datum, i2))[(b1, b2)]


@lru_cache(maxsize=None)
def degree_table(datum: AffineCartanDatum, lam: DominantWeight) -> DegreeTable:
    """Deg_lam from Deg(straight line) = 0 and its e_j recursion."""
    graph = generate(datum, lam)

    def step(b, j):
        if j != 0:
            return 0
        iota = b.initial
        after = graph.raise_(b, 0).initial
        if after == iota:
            return -1
        if after == reflect(datum, 0, iota):
            return -iota[0] - 1
        raise ConsistencyError(f"initial direction of e_0 {element_key(b)} is neither kept nor reflected")

    values, checked = _propagate(graph, 0, step, f"Deg_{lam}")
    for b, v in values.items():
        if v > 0:
            raise ConsistencyError(f"Deg_{lam}({element_key(b)}) = {v} > 0")
    return DegreeTable(datum, lam, graph, values, checked)


def deg(datum: AffineCartanDatum, lam: DominantWeight, eta: ClPath) -> int:
    return degree_table(datum, lam)[eta]


def deg_max_check(datum: AffineCartanDatum, lam: DominantWeight) -> CheckResult:
    """Closed form of Deg(e_j^max eta) for eta with iota(eta)(h_j) <= 0."""
    table = degree_table(datum, lam)
    graph = table.graph
    out = CheckResult("deg_max")
    for eta in graph.elements:
        for j in datum.index_set:
            if eta.initial[j] > 0 or graph.raise_(eta, j) is None:
                continue
            top = graph.raise_max(eta, j)
            if j == 0:
                want = table[eta] - graph.eps(eta, 0) - eta.initial[0]
            else:
                want = table[eta]
            out.record(table[top] == want, {"element": element_key(eta), "j": j, "table": table[top], "formula": want})
    return out


# ----------------------------------------------------------------- D_i


def eta_shifted(datum: AffineCartanDatum, seq: Sequence[int], b: tuple, k: int, l: int) -> ClPath:
    """eta_l^{(k)} for 1 <= k <= l <= n: move the l-th factor to position k by R-matrices."""
    n = len(seq)
    if not 1 <= k <= l <= n or len(b) != n:
        raise IndexError(f"need 1 <= k <= l <= {n}, got k={k}, l={l}")
    y = b[l - 1]
    target = _fund(datum, seq[l - 1])
    for m in range(l - 1, k - 1, -1):
        y, _ = r_matrix(datum, _fund(datum, seq[m - 1]), target)((b[m - 1], y))
    return y


def flat_candidates(datum: AffineCartanDatum, i: int) -> list[ClPath]:
    """Elements of B(varpi_i)_cl killed by every classical f_j."""
    g = generate(datum, _fund(datum, i))
    return [b for b in g.elements if all(g.lower(b, j) is None for j in datum.classical_index_set)]


@lru_cache(maxsize=None)
def eta_flat(datum: AffineCartanDatum, i: int) -> ClPath:
    """The canonical choice: the straight line to the anti-dominant orbit element."""
    eta = straight(anti_dominant(datum, fundamental_cl(datum, i)), datum)
    g = generate(datum, _fund(datum, i))
    if eta not in g or any(g.lower(eta, j) is not None for j in datum.classical_index_set):
        raise ConsistencyError(f"anti-dominant line {eta} is not a valid flat element")
    return eta


def _flats(datum, seq, flats):
    if flats is None:
        return [eta_flat(datum, i) for i in seq]
    if len(flats) != len(seq):
        raise ValueError("one flat element per tensor factor")
    return list(flats)


def energy_D(datum: AffineCartanDatum, seq: Sequence[int], b: tuple, flats=None) -> int:
    seq = tuple(seq)
    n = len(seq)
    fl = _flats(datum, seq, flats)
    total = 0
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            total += H(datum, seq[k - 1], seq[l - 1], b[k - 1], eta_shifted(datum, seq, b, k + 1, l))
    for k in range(1, n + 1):
        total += H(datum, seq[k - 1], seq[k - 1], fl[k - 1], eta_shifted(datum, seq, b, 1, k))
    return total


def energy_D_ext(datum: AffineCartanDatum, seq: Sequence[int], flats=None) -> int:
    seq = tuple(seq)
    fl = _flats(datum, seq, flats)
    return sum(
        H(datum, i, i, f, straight(fundamental_cl(datum, i))) for i, f in zip(seq, fl)
    )


@lru_cache(maxsize=None)
def energy_values(datum: AffineCartanDatum, seq: tuple[int, ...]) -> dict:
    g = fundamental_tensor(datum, seq)
    return {b: energy_D(datum, seq, b) for b in g.elements}


def pairwise_D(datum: AffineCartanDatum, lam: DominantWeight, lam2: DominantWeight, b: tuple) -> int:
    """D_{lam,lam2}(b1 (x) b2) = H(b1 (x) b2) + Deg_lam(b1) + Deg_lam2(first factor of R(b))."""
    tilde2, _ = r_matrix(datum, lam, lam2)(b)
    return local_energy(datum, lam, lam2)[b] + deg(datum, lam, b[0]) + deg(datum, lam2, tilde2)


# ----------------------------------------------------------------- verification


@dataclass
class VerifyReport:
    label: str
    seq: tuple
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "type": self.label,
            "seq": list(self.seq),
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
        }


def check_step2(datum: AffineCartanDatum, i: int) -> CheckResult:
    """Deg_{varpi_i}(eta) = H(flat (x) eta) - H(flat (x) dominant line), for every flat candidate."""
    out = CheckResult("step2")
    lam = _fund(datum, i)
    table = degree_table(datum, lam)
    top = straight(fundamental_cl(datum, i))
    for fl in flat_candidates(datum, i):
        base = H(datum, i, i, fl, top)
        for eta in table.graph.elements:
            got = H(datum, i, i, fl, eta) - base
            out.record(got == table[eta], {"i": i, "flat": element_key(fl), "element": element_key(eta), "deg": table[eta], "rhs": got})
    return out


def check_eng(datum: AffineCartanDatum, lam: DominantWeight, lam2: DominantWeight) -> CheckResult:
    """Deg_{lam+lam2} = D_{lam,lam2} o Psi_{lam,lam2}."""
    out = CheckResult("prop_eng")
    iso = psi_pair(datum, lam, lam2)
    table = degree_table(datum, lam + lam2)
    for eta in table.graph.elements:
        got = pairwise_D(datum, lam, lam2, iso(eta))
        out.record(got == table[eta], {"pair": [str(lam), str(lam2)], "element": element_key(eta), "deg": table[eta], "rhs": got})
    return out


def check_eng_max(datum: AffineCartanDatum, lam: DominantWeight, lam2: DominantWeight) -> CheckResult:
    """D_{lam,lam2} is unchanged by e_j^max for classical j."""
    out = CheckResult("eng_max")
    g = pair_tensor(datum, lam, lam2)
    for b in g.elements:
        v = pairwise_D(datum, lam, lam2, b)
        for j in datum.classical_index_set:
            top = g.raise_max(b, j)
            w = pairwise_D(datum, lam, lam2, top)
            out.record(v == w, {"pair": [str(lam), str(lam2)], "element": element_key(b), "j": j})
    return out


def verify_main(datum: AffineCartanDatum, seq: Sequence[int]) -> VerifyReport:
    seq = tuple(seq)
    n = len(seq)
    lam = DominantWeight.from_sequence(datum, seq)
    table = degree_table(datum, lam)
    iso = psi(datum, seq)
    d_ext = energy_D_ext(datum, seq)
    Dvals = energy_values(datum, seq)

    main = CheckResult("main")
    step1 = CheckResult("step1")
    for eta in table.graph.elements:
        b = iso(eta)
        rhs = Dvals[b] - d_ext
        main.record(rhs == table[eta], {"element": element_key(eta), "deg": table[eta], "rhs": rhs})
        s = 0
        for k in range(1, n + 1):
            for l in range(k + 1, n + 1):
                s += H(datum, seq[k - 1], seq[l - 1], b[k - 1], eta_shifted(datum, seq, b, k + 1, l))
        for k in range(1, n + 1):
            s += deg(datum, _fund(datum, seq[k - 1]), eta_shifted(datum, seq, b, 1, k))
        step1.record(s == table[eta], {"element": element_key(eta), "deg": table[eta], "rhs": s})

    step2 = CheckResult("step2")
    for i in sorted(set(seq)):
        step2.merge(check_step2(datum, i))

    # any admissible choice of flat elements must give the same D - D_ext
    alt = CheckResult("flat_choice")
    canon = [eta_flat(datum, i) for i in seq]
    for k, i in enumerate(seq):
        for fl in flat_candidates(datum, i):
            if fl == canon[k]:
                continue
            choice = canon[:k] + [fl] + canon[k + 1:]
            ext = energy_D_ext(datum, seq, choice)
            for eta in table.graph.elements:
                rhs = energy_D(datum, seq, iso(eta), choice) - ext
                alt.record(rhs == table[eta], {"position": k + 1, "flat": element_key(fl), "element": element_key(eta)})

    eng = CheckResult("prop_eng")
    eng_max = CheckResult("eng_max")
    for a, c in combinations_with_replacement(sorted(set(seq)), 2):
        for x, y in {(a, c), (c, a)}:
            eng.merge(check_eng(datum, _fund(datum, x), _fund(datum, y)))
            eng_max.merge(check_eng_max(datum, _fund(datum, x), _fund(datum, y)))

    recursion = CheckResult("recursion")
    recursion.checked = table.edges_checked
    dm = deg_max_check(datum, lam)
    return VerifyReport(datum.label, seq, [main, step1, step2, alt, eng, eng_max, recursion, dm])


def values_json(datum: AffineCartanDatum, seq: Sequence[int]) -> dict:
    """Deg, D and D_ext values for golden-file comparison."""
    seq = tuple(seq)
    lam = DominantWeight.from_sequence(datum, seq)
    table = degree_table(datum, lam)
    iso = psi(datum, seq)
    Dvals = energy_values(datum, seq)
    return {
        "deg": {element_key(eta): table[eta] for eta in table.graph.elements},
        "D": {element_key(iso(eta)): Dvals[iso(eta)] for eta in table.graph.elements},
        "D_ext": energy_D_ext(datum, seq),
    }


def clear_caches() -> None:
    """Drop every memoized crystal, isomorphism and table."""
    from . import crystal

    for fn in (local_energy, degree_table, eta_flat, energy_values):
        fn.cache_clear()
    for fn in (crystal.generate, crystal._tensor_graph, crystal.fundamental_tensor, crystal.pair_tensor,
               crystal.psi, crystal.psi_pair, crystal.r_matrix):
        fn.cache_clear()
