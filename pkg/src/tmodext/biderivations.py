"""Biderivations between t-modules and their reduction to canonical form.

A biderivation from a source module Phi (dimension s) to a target module Psi
(dimension d) is a d x s matrix delta of twisted polynomials; it presents the
extension whose t-action is the block matrix [[Phi_t, 0], [delta, Psi_t]].
The inner biderivations delta^(U) = U*Phi_t - Psi_t*U (U any d x s matrix)
present split extensions, and two biderivations present the same extension
class exactly when they differ by an inner one.

``reduce_canonical`` rewrites a biderivation as (canonical + inner witness)
for a family of module shapes where the canonical form is unique, so that
canonical forms are literal representatives of extension classes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MixedPairs, UnsupportedRegime
from .modules_t import TModule
from .skewpoly import (
    SkewMatrix,
    SkewPoly,
    const_inverse,
    const_mul,
    const_twist,
    twist_sign,
)

DRINFELD_FORWARD = "drinfeld-forward"
DRINFELD_REVERSED = "drinfeld-reversed"
MATRIX_SOURCE = "matrix-source"
TRIANGULAR_SOURCE = "triangular-source"
CARLITZ_TARGET = "carlitz-target"
TRIANGULAR_TARGET_REVERSED = "triangular-target-reversed"
DIAGONAL_PAIRS = "diagonal-pairs"

FORWARD_REGIMES = frozenset({
    DRINFELD_FORWARD, MATRIX_SOURCE, TRIANGULAR_SOURCE, CARLITZ_TARGET})


@dataclass(frozen=True)
class Biderivation:
    source: TModule
    target: TModule
    matrix: SkewMatrix

    def __post_init__(self):
        if self.source.spec != self.target.spec or \
                self.matrix.spec != self.source.spec:
            raise MixedPairs("biderivation data over mixed domains")
        if self.source.var != self.target.var or \
                self.matrix.var != self.source.var:
            raise MixedPairs("biderivation data over mixed twisted variables")
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise MixedPairs(
                f"a biderivation here is a {self.target.dim}x"
                f"{self.source.dim} matrix, got {self.matrix.nrows}x"
                f"{self.matrix.ncols}")

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, SkewMatrix.zeros(
            source.spec, source.var, target.dim, source.dim))

    def is_zero(self):
        return self.matrix.is_zero()

    def __add__(self, other):
        if not isinstance(other, Biderivation):
            return NotImplemented
        if (self.source, self.target) != (other.source, other.target):
            raise MixedPairs("biderivations between different module pairs")
        return Biderivation(self.source, self.target,
                            self.matrix + other.matrix)

    def __neg__(self):
        return Biderivation(self.source, self.target, -self.matrix)

    def __sub__(self, other):
        if not isinstance(other, Biderivation):
            return NotImplemented
        return self + (-other)


def inner_matrix(source, target, u):
    """delta^(U) = U*Phi_t - Psi_t*U."""
    return u * source.t_matrix - target.t_matrix * u


def inner(source, target, u):
    return Biderivation(source, target, inner_matrix(source, target, u))


# ---------------------------------------------------------------------------
# Extension assembly.


@dataclass(frozen=True)
class Assembly:
    """The extension module of a biderivation with its structure maps.

    The middle module has t-action [[Phi_t, 0], [delta, Psi_t]]; inclusion
    embeds the target as the lower block and projection maps onto the
    source coordinates, giving 0 -> target -> middle -> source -> 0.
    """

    middle: TModule
    inclusion: SkewMatrix
    projection: SkewMatrix


def assemble(delta):
    source, target = delta.source, delta.target
    spec, var = source.spec, source.var
    s, d = source.dim, target.dim
    gamma = SkewMatrix.block([
        [source.t_matrix, SkewMatrix.zeros(spec, var, s, d)],
        [delta.matrix, target.t_matrix],
    ])
    inclusion = SkewMatrix.block([
        [SkewMatrix.zeros(spec, var, s, d)],
        [SkewMatrix.identity(spec, var, d)],
    ])
    projection = SkewMatrix.block([
        [SkewMatrix.identity(spec, var, s), SkewMatrix.zeros(spec, var, s, d)],
    ])
    return Assembly(TModule(spec, gamma), inclusion, projection)


# ---------------------------------------------------------------------------
# Regime selection.


def select_regime(source, target):
    """Choose the reduction strategy for the module pair, or explain why
    none applies."""
    if source.spec != target.spec:
        raise MixedPairs("source and target over different domains")
    if source.var != target.var:
        raise MixedPairs("source and target over different twisted variables")

    if source.dim == 1 and target.dim == 1:
        if source.is_drinfeld and target.is_drinfeld:
            n, m = source.rank, target.rank
            if n > m:
                return DRINFELD_FORWARD
            if n < m:
                return DRINFELD_REVERSED
            raise UnsupportedRegime(
                "equal-rank pairs have no unique canonical form here; "
                "use the split test or a bounded search instead")
        raise UnsupportedRegime(
            "dimension-one reduction needs Drinfeld modules on both sides")

    if target.dim == 1 and target.is_drinfeld and source.dim > 1:
        m = target.rank
        if source.rank > m and source.has_invertible_leading():
            return MATRIX_SOURCE
        if source.is_lower_triangular() and source.diagonal_is_drinfeld() \
                and all(n > m for n in source.diagonal_ranks()):
            return TRIANGULAR_SOURCE
        raise UnsupportedRegime(
            "the source must have an invertible leading matrix of rank above "
            "the target's, or be lower triangular with diagonal ranks above "
            "the target's")

    if target.is_carlitz_power() and target.dim >= 2:
        if source.rank >= 2 and source.has_invertible_leading():
            return CARLITZ_TARGET
        raise UnsupportedRegime(
            "reduction into a Carlitz tensor power needs a source of rank "
            "at least 2 with invertible leading matrix")

    if source.dim == 1 and source.is_drinfeld and target.dim > 1:
        n = source.rank
        if target.is_lower_triangular() and target.diagonal_is_drinfeld() \
                and all(nv > n for nv in target.diagonal_ranks()):
            return TRIANGULAR_TARGET_REVERSED
        raise UnsupportedRegime(
            "a higher-dimensional target must be lower triangular with "
            "diagonal ranks above the source's rank")

    if source.is_diagonal() and target.is_diagonal() and \
            source.diagonal_is_drinfeld() and target.diagonal_is_drinfeld():
        if all(ni != mw for ni in source.diagonal_ranks()
               for mw in target.diagonal_ranks()):
            return DIAGONAL_PAIRS
        raise UnsupportedRegime(
            "diagonal pairs need every source rank different from every "
            "target rank")

    raise UnsupportedRegime(
        f"no reduction strategy for a {source.dim}-dimensional source of "
        f"rank {source.rank} and a {target.dim}-dimensional target of rank "
        f"{target.rank}")


# ---------------------------------------------------------------------------
# Canonical slots: the free positions of the canonical form, in basis order.
# A slot (row, col, deg) addresses the coefficient of var^deg in the matrix
# entry at (row, col).


def canonical_slots(source, target, regime=None):
    if regime is None:
        regime = select_regime(source, target)
    if regime == DRINFELD_FORWARD:
        return tuple((0, 0, k) for k in range(source.rank))
    if regime == DRINFELD_REVERSED:
        return tuple((0, 0, k) for k in range(target.rank))
    if regime == MATRIX_SOURCE:
        return tuple((0, j, k)
                     for j in range(source.dim)
                     for k in range(source.rank))
    if regime == TRIANGULAR_SOURCE:
        ranks = source.diagonal_ranks()
        return tuple((0, j, k)
                     for j in reversed(range(source.dim))
                     for k in range(ranks[j]))
    if regime == CARLITZ_TARGET:
        return tuple((i, j, k)
                     for i in range(target.dim)
                     for j in range(source.dim)
                     for k in range(source.rank))
    if regime == TRIANGULAR_TARGET_REVERSED:
        ranks = target.diagonal_ranks()
        return tuple((v, 0, k)
                     for v in range(target.dim)
                     for k in range(ranks[v]))
    if regime == DIAGONAL_PAIRS:
        src = source.diagonal_ranks()
        tgt = target.diagonal_ranks()
        return tuple((w, i, k)
                     for i in range(source.dim)
                     for w in range(target.dim)
                     for k in range(max(src[i], tgt[w])))
    raise UnsupportedRegime(f"unknown regime {regime!r}")


# ---------------------------------------------------------------------------
# Scalar reduction steps.


def _scalar_forward(phi, psi, delta):
    spec, var = delta.spec, delta.var
    sign = twist_sign(var)
    n = phi.degree
    lead = phi.leading()[1]
    witness = SkewPoly.zero(spec, var)
    while delta.degree >= n:
        deg, c = delta.leading()
        k = deg - n
        u = SkewPoly.term(spec, var, c / lead.twist(sign * k), k)
        delta = delta - (u * phi - psi * u)
        witness = witness + u
    return delta, witness


def _scalar_reversed(phi, psi, delta):
    spec, var = delta.spec, delta.var
    sign = twist_sign(var)
    m = psi.degree
    lead = psi.leading()[1]
    witness = SkewPoly.zero(spec, var)
    while delta.degree >= m:
        deg, c = delta.leading()
        k = deg - m
        u = SkewPoly.term(spec, var, ((-c) / lead).twist(-sign * m), k)
        delta = delta - (u * phi - psi * u)
        witness = witness + u
    return delta, witness


def _scalar_pair(phi, psi, delta):
    if phi.degree > psi.degree:
        return _scalar_forward(phi, psi, delta)
    return _scalar_reversed(phi, psi, delta)


# ---------------------------------------------------------------------------
# Matrix reduction loops.


def _layer_matrix(spec, var, grid, k):
    return SkewMatrix.from_rows(spec, var, [
        [SkewPoly.term(spec, var, c, k) for c in row] for row in grid])


def _reduce_layered(source, target, matrix):
    """Kill whole top layers with the inverse of the source's leading
    matrix (matrix-source and carlitz-target regimes)."""
    spec, var = matrix.spec, matrix.var
    sign = twist_sign(var)
    n = source.rank
    lead_inv = const_inverse(source.leading_matrix())
    witness = SkewMatrix.zeros(spec, var, matrix.nrows, matrix.ncols)
    while matrix.max_degree >= n:
        deg = matrix.max_degree
        k = deg - n
        v = matrix.coefficient_matrix(deg)
        u = _layer_matrix(spec, var, const_mul(v, const_twist(lead_inv,
                                                              sign * k)), k)
        matrix = matrix - inner_matrix(source, target, u)
        witness = witness + u
    return matrix, witness


def _reduce_triangular_source(source, target, matrix):
    spec, var = matrix.spec, matrix.var
    sign = twist_sign(var)
    phi = source.t_matrix
    witness = SkewMatrix.zeros(spec, var, 1, source.dim)
    for j in reversed(range(source.dim)):
        xj = phi.entry(j, j)
        nj = xj.degree
        lead = xj.leading()[1]
        while matrix.entry(0, j).degree >= nj:
            deg, c = matrix.entry(0, j).leading()
            k = deg - nj
            u = SkewMatrix.zeros(spec, var, 1, source.dim).with_entry(
                0, j, SkewPoly.term(spec, var, c / lead.twist(sign * k), k))
            matrix = matrix - inner_matrix(source, target, u)
            witness = witness + u
    return matrix, witness


def _reduce_triangular_target(source, target, matrix):
    spec, var = matrix.spec, matrix.var
    sign = twist_sign(var)
    psi = target.t_matrix
    witness = SkewMatrix.zeros(spec, var, target.dim, 1)
    for v in range(target.dim):
        yv = psi.entry(v, v)
        nv = yv.degree
        lead = yv.leading()[1]
        while matrix.entry(v, 0).degree >= nv:
            deg, c = matrix.entry(v, 0).leading()
            k = deg - nv
            u = SkewMatrix.zeros(spec, var, target.dim, 1).with_entry(
                v, 0, SkewPoly.term(spec, var,
                                    ((-c) / lead).twist(-sign * nv), k))
            matrix = matrix - inner_matrix(source, target, u)
            witness = witness + u
    return matrix, witness


def _reduce_diagonal_pairs(source, target, matrix):
    spec, var = matrix.spec, matrix.var
    can_rows = []
    wit_rows = []
    for w in range(target.dim):
        can_row = []
        wit_row = []
        for i in range(source.dim):
            c, u = _scalar_pair(source.t_matrix.entry(i, i),
                                target.t_matrix.entry(w, w),
                                matrix.entry(w, i))
            can_row.append(c)
            wit_row.append(u)
        can_rows.append(can_row)
        wit_rows.append(wit_row)
    return (SkewMatrix.from_rows(spec, var, can_rows),
            SkewMatrix.from_rows(spec, var, wit_rows))


# ---------------------------------------------------------------------------
# Top-level reduction.


@dataclass(frozen=True)
class ReductionResult:
    canonical: Biderivation
    witness: SkewMatrix
    regime: str


def reduce_canonical(delta, regime=None):
    """Rewrite delta as canonical + delta^(witness) with the canonical form
    unique in its extension class."""
    source, target = delta.source, delta.target
    if regime is None:
        regime = select_regime(source, target)
    matrix = delta.matrix
    if regime in (DRINFELD_FORWARD, DRINFELD_REVERSED):
        phi = source.scalar_poly()
        psi = target.scalar_poly()
        if regime == DRINFELD_FORWARD:
            c, u = _scalar_forward(phi, psi, matrix.entry(0, 0))
        else:
            c, u = _scalar_reversed(phi, psi, matrix.entry(0, 0))
        spec, var = matrix.spec, matrix.var
        canonical = SkewMatrix.from_rows(spec, var, [[c]])
        witness = SkewMatrix.from_rows(spec, var, [[u]])
    elif regime in (MATRIX_SOURCE, CARLITZ_TARGET):
        canonical, witness = _reduce_layered(source, target, matrix)
    elif regime == TRIANGULAR_SOURCE:
        canonical, witness = _reduce_triangular_source(source, target, matrix)
    elif regime == TRIANGULAR_TARGET_REVERSED:
        canonical, witness = _reduce_triangular_target(source, target, matrix)
    elif regime == DIAGONAL_PAIRS:
        canonical, witness = _reduce_diagonal_pairs(source, target, matrix)
    else:
        raise UnsupportedRegime(f"unknown regime {regime!r}")
    assert (delta.matrix - inner_matrix(source, target, witness)) \
        == canonical, "reduction self-check failed"
    return ReductionResult(Biderivation(source, target, canonical), witness,
                           regime)
