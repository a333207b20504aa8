"""Exact density parameters of fixed target graphs.

Everything is exact rational arithmetic (fractions.Fraction): the threshold
exponents these feed differ by razor-thin rationals, so no floats.  All
searches are exhaustive with a hard size guard; the tool refuses rather
than approximates.

Conventions for tiny (sub)graphs follow the source definitions: the
2-density of a single edge is 1 and of an isolated vertex 0, and both enter
the maxima over subgraphs, so any graph containing an edge has m2 >= 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Graph, bits, mask_of

SIZE_GUARD = 12


class SizeGuardError(ValueError):
    pass


class ZeroDensityError(ValueError):
    """Raised when a threshold exponent is requested for density 0."""


def _check_guard(h: Graph) -> None:
    if h.n > SIZE_GUARD:
        raise SizeGuardError(
            f"exhaustive density search refuses n={h.n} > {SIZE_GUARD}"
        )


def _edge_counts(h: Graph) -> list[int]:
    """edges_in[mask] = number of edges inside the vertex mask."""
    n = h.n
    counts = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        counts[mask] = counts[rest] + (h.adj[v] & rest).bit_count()
    return counts


def density(h: Graph) -> Fraction:
    """d(H) = e/v."""
    if h.n == 0:
        return Fraction(0)
    return Fraction(h.m, h.n)


def two_density_value(e: int, v: int) -> Fraction:
    """d2 on v >= 3 vertices; conventions for v <= 2."""
    if v <= 2:
        return Fraction(1) if e >= 1 else Fraction(0)
    return Fraction(e - 1, v - 2)


def max_density(h: Graph) -> Fraction:
    return max_density_witnessed(h)[0]


def max_density_witnessed(h: Graph) -> tuple[Fraction, int]:
    """m(H) = max over nonempty vertex subsets of e(H[S])/|S|.

    Ties break to the numerically smallest witness mask.
    """
    _check_guard(h)
    if h.n == 0:
        return Fraction(0), 0
    counts = _edge_counts(h)
    best, best_mask = Fraction(0), 1
    for mask in range(1, 1 << h.n):
        val = Fraction(counts[mask], mask.bit_count())
        if val > best:
            best, best_mask = val, mask
    return best, best_mask


def two_density(h: Graph) -> Fraction:
    return two_density_witnessed(h)[0]


def two_density_witnessed(h: Graph) -> tuple[Fraction, int]:
    """m2(H): max of d2 over all subgraphs, tiny-graph conventions included.

    Scanning induced subgraphs suffices (deleting edges only lowers d2).
    """
    _check_guard(h)
    if h.n == 0:
        return Fraction(0), 0
    counts = _edge_counts(h)
    best, best_mask = Fraction(0), 1
    if h.m >= 1:
        e = min(h.edges)
        best, best_mask = Fraction(1), (1 << e[0]) | (1 << e[1])
    for mask in range(1, 1 << h.n):
        if mask.bit_count() < 3:
            continue
        val = Fraction(counts[mask] - 1, mask.bit_count() - 2)
        if val > best:
            best, best_mask = val, mask
    return best, best_mask


def _m_table(h: Graph) -> list[Fraction]:
    """m(H[mask]) for every vertex mask, via one pass over submasks."""
    counts = _edge_counts(h)
    size = 1 << h.n
    table = [Fraction(0)] * size
    # m over the submask lattice: m(mask) = max(d(mask), m of mask minus one vertex)
    for mask in range(1, size):
        best = Fraction(counts[mask], mask.bit_count())
        mm = mask
        while mm:
            low = mm & -mm
            mm ^= low
            sub = table[mask ^ low]
            if sub > best:
                best = sub
        table[mask] = best
    return table


def _m2_table(h: Graph) -> list[Fraction]:
    counts = _edge_counts(h)
    size = 1 << h.n
    table = [Fraction(0)] * size
    for mask in range(1, size):
        c = mask.bit_count()
        if c <= 2:
            best = Fraction(1) if counts[mask] >= 1 else Fraction(0)
        else:
            best = Fraction(counts[mask] - 1, c - 2)
        mm = mask
        while mm:
            low = mm & -mm
            mm ^= low
            sub = table[mask ^ low]
            if sub > best:
                best = sub
        table[mask] = best
    return table


def _partitions_into_at_most(vertices: list[int], r: int):
    """Canonical set partitions with <= r blocks (restricted growth)."""
    n = len(vertices)
    blocks: list[list[int]] = []

    def rec(i: int):
        if i == n:
            yield [list(b) for b in blocks]
            return
        v = vertices[i]
        for b in blocks:
            b.append(v)
            yield from rec(i + 1)
            b.pop()
        if len(blocks) < r:
            blocks.append([v])
            yield from rec(i + 1)
            blocks.pop()

    yield from rec(0)


def r_partite_density(h: Graph, r: int) -> tuple[Fraction, list[int]]:
    """m^(r)(H): min over partitions of V(H) into <= r parts of the max
    part density m(H[P_i]).  Returns (value, witness partition as masks)."""
    return _r_partite(h, r, _m_table)


def r_partite_two_density(h: Graph, r: int) -> tuple[Fraction, list[int]]:
    """m2^(r)(H), analogously with the 2-density per part."""
    return _r_partite(h, r, _m2_table)


def _r_partite(h: Graph, r: int, table_fn) -> tuple[Fraction, list[int]]:
    if r < 1:
        raise ValueError("r must be >= 1")
    _check_guard(h)
    if h.n == 0:
        return Fraction(0), []
    table = table_fn(h)
    best: Fraction | None = None
    best_parts: list[int] = []
    for parts in _partitions_into_at_most(list(range(h.n)), r):
        masks = [mask_of(p) for p in parts]
        val = max(table[m] for m in masks)
        if best is None or val < best:
            best, best_parts = val, masks
            if best == 0:
                break
    assert best is not None
    return best, best_parts


def chromatic_number(h: Graph) -> int:
    """Exact chi(H) by backtracking, vertices in descending-degree order."""
    n = h.n
    if n == 0:
        return 0
    if h.m == 0:
        return 1
    order = sorted(range(n), key=lambda v: -h.degree(v))
    colour = [-1] * n

    def colourable(k: int, i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        used = set()
        for w in bits(h.adj[v]):
            if colour[w] >= 0:
                used.add(colour[w])
        # symmetry break: only allow one brand-new colour index
        cap = min(k, max(colour[order[j]] for j in range(i)) + 2) if i else 1
        for c in range(cap):
            if c in used:
                continue
            colour[v] = c
            if colourable(k, i + 1):
                colour[v] = -1
                return True
            colour[v] = -1
        return False

    for k in range(2, n + 1):
        if colourable(k, 0):
            return k
    return n


@dataclass(frozen=True)
class TargetPattern:
    """A fixed target graph H, optionally with a chosen r-partition."""

    h: Graph
    partition: tuple[int, ...] | None = None  # vertex masks

    def __post_init__(self):
        if self.partition is not None:
            cover = 0
            for pm in self.partition:
                if pm & cover:
                    raise ValueError("partition blocks overlap")
                cover |= pm
            if cover != self.h.full_mask:
                raise ValueError("partition must cover V(H)")


@dataclass
class DensityReport:
    d: Fraction
    m: Fraction
    d2: Fraction
    m2: Fraction
    m_r: dict[int, Fraction]
    m2_r: dict[int, Fraction]
    m_witness: int
    m2_witness: int
    m_r_witness: dict[int, list[int]]
    m2_r_witness: dict[int, list[int]]


def density_report(h: Graph, rs: tuple[int, ...] = (2, 3)) -> DensityReport:
    m_val, m_wit = max_density_witnessed(h)
    m2_val, m2_wit = two_density_witnessed(h)
    m_r, m2_r, m_rw, m2_rw = {}, {}, {}, {}
    for r in rs:
        m_r[r], m_rw[r] = r_partite_density(h, r)
        m2_r[r], m2_rw[r] = r_partite_two_density(h, r)
    return DensityReport(
        d=density(h),
        m=m_val,
        d2=two_density_value(h.m, h.n),
        m2=m2_val,
        m_r=m_r,
        m2_r=m2_r,
        m_witness=m_wit,
        m2_witness=m2_wit,
        m_r_witness=m_rw,
        m2_r_witness=m2_rw,
    )


def threshold_exponent(kind: str, h: Graph, r: int = 2) -> Fraction:
    """-1/density for the requested density kind, as an exact rational.

    kind: one of "m", "m2", "m_r", "m2_r".  Density 0 raises
    ZeroDensityError (for the r-partite 2-density that means chi(H) <= r
    and no random edges are needed).
    """
    if kind == "m":
        val = max_density(h)
    elif kind == "m2":
        val = two_density(h)
    elif kind == "m_r":
        val = r_partite_density(h, r)[0]
    elif kind == "m2_r":
        val = r_partite_two_density(h, r)[0]
    else:
        raise ValueError(f"unknown density kind {kind!r}")
    if val == 0:
        if kind == "m2_r":
            raise ZeroDensityError(
                f"m2^({r}) is 0: chi(H) <= {r}, the dense board alone suffices (p=0)"
            )
        raise ZeroDensityError(f"{kind} density is 0; no finite exponent")
    return Fraction(-1, 1) / val
