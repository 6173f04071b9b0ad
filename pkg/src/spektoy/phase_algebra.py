"""Exact linear algebra on the discrete phase space Z_d^{2n}.

Conventions used by the whole package:

* Phase-space points and observable functionals are length-2n integer
  vectors mod d in **interleaved** order (x0, p0, x1, p1, ...).  Every other
  module inherits this order; nothing is ever transposed silently.
* d is a small prime (2, 3 and 5 are supported; everything is exercised at
  2 and 3).  Subspace arithmetic relies on the field structure.
* The symplectic form is J = diag of 2x2 blocks [[0, 1], [-1, 0]], one per
  subsystem.  The *Euclidean* dot product and the symplectic product are
  both used, for different purposes, and never interchanged: cosets of
  epistemic states use the Euclidean perp, joint-knowability uses the
  symplectic product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _modmath as mm
from .errors import DimensionMismatch, GuardExceeded

SUPPORTED_PRIMES = (2, 3, 5)

#: hard cap on coset/subspace enumerations (number of points)
COSET_GUARD = 1 << 20

#: hard cap on |Sp(2n, Z_d)| * d^{2n} for affine-map enumeration
AFFINE_ENUM_GUARD = 5_000_000


def _check_dn(d: int, n: int) -> None:
    if d not in SUPPORTED_PRIMES:
        raise DimensionMismatch(f"d={d} unsupported; primes {SUPPORTED_PRIMES} only")
    if n < 1:
        raise DimensionMismatch(f"n={n} must be >= 1")


def as_vector(coords, d: int, n: int) -> np.ndarray:
    v = mm.modp(np.asarray(coords, dtype=np.int64).reshape(-1), d)
    if v.shape[0] != 2 * n:
        raise DimensionMismatch(f"expected length {2 * n}, got {v.shape[0]}")
    return v


def point(coords, d: int) -> tuple[int, ...]:
    """Normalize a phase-space point / functional to a canonical tuple."""
    return tuple(int(c) % d for c in coords)


@lru_cache(maxsize=None)
def symplectic_form(n: int, d: int) -> np.ndarray:
    """Block-diagonal J with per-site blocks [[0, 1], [-1, 0]] mod d."""
    J = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for k in range(n):
        J[2 * k, 2 * k + 1] = 1
        J[2 * k + 1, 2 * k] = (-1) % d
    J.setflags(write=False)
    return J


def evaluate(sigma, lam, d: int) -> int:
    """Value of the functional on the point: sum_j (a_j x_j + b_j p_j) mod d."""
    s = mm.modp(np.asarray(sigma, dtype=np.int64), d)
    l = mm.modp(np.asarray(lam, dtype=np.int64), d)
    if s.shape != l.shape or s.ndim != 1 or s.shape[0] % 2:
        raise DimensionMismatch(f"shapes {s.shape} vs {l.shape}")
    return int((s @ l) % d)


def symplectic_product(s1, s2, d: int) -> int:
    """s1^T J s2 mod d; antisymmetric.  Zero iff jointly knowable."""
    a = mm.modp(np.asarray(s1, dtype=np.int64), d)
    b = mm.modp(np.asarray(s2, dtype=np.int64), d)
    if a.shape != b.shape or a.ndim != 1 or a.shape[0] % 2:
        raise DimensionMismatch(f"shapes {a.shape} vs {b.shape}")
    n = a.shape[0] // 2
    J = symplectic_form(n, d)
    return int((a @ J @ b) % d)


@dataclass(frozen=True)
class Subspace:
    """Row span of a generator list over Z_d, stored in canonical rref form.

    Equality and hashing go through the canonical form, so set-level
    assertions on subspaces are exact.
    """

    gens: tuple[tuple[int, ...], ...]
    d: int
    n: int

    @classmethod
    def from_generators(cls, gens, d: int, n: int) -> "Subspace":
        _check_dn(d, n)
        rows = [as_vector(g, d, n) for g in gens]
        if rows:
            R, _ = mm.rref(np.stack(rows), d)
        else:
            R = np.zeros((0, 2 * n), dtype=np.int64)
        return cls(tuple(tuple(int(x) for x in r) for r in R), d, n)

    @classmethod
    def zero(cls, d: int, n: int) -> "Subspace":
        return cls.from_generators([], d, n)

    @classmethod
    def full(cls, d: int, n: int) -> "Subspace":
        return cls.from_generators(np.eye(2 * n, dtype=np.int64), d, n)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.gens, dtype=np.int64).reshape(len(self.gens), 2 * self.n)

    @property
    def dim(self) -> int:
        return len(self.gens)

    def contains(self, vec) -> bool:
        return mm.in_rowspace(as_vector(vec, self.d, self.n), self.matrix, self.d)

    def vectors(self) -> tuple[tuple[int, ...], ...]:
        """All member vectors, lexicographically sorted."""
        if self.d ** self.dim > COSET_GUARD:
            raise GuardExceeded(f"subspace has {self.d ** self.dim} > {COSET_GUARD} points")
        vecs = mm.span_vectors(self.matrix, self.d)
        return tuple(sorted(tuple(int(x) for x in v) for v in vecs))

    def __add__(self, other: "Subspace") -> "Subspace":
        if (self.d, self.n) != (other.d, other.n):
            raise DimensionMismatch("subspace sum across different (d, n)")
        return Subspace.from_generators(
            list(self.gens) + list(other.gens), self.d, self.n
        )

    def intersect(self, other: "Subspace") -> "Subspace":
        if (self.d, self.n) != (other.d, other.n):
            raise DimensionMismatch("subspace intersection across different (d, n)")
        basis = mm.intersect(self.matrix, other.matrix, self.d)
        return Subspace.from_generators(basis, self.d, self.n)


def perp(V: Subspace) -> Subspace:
    """Euclidean orthogonal complement {a : a . b = 0 for all b in V}.

    This is *not* the symplectic complement; it is the complement entering
    the coset supports of epistemic states.
    """
    basis = mm.nullspace(V.matrix, V.d) if V.dim else np.eye(2 * V.n, dtype=np.int64)
    return Subspace.from_generators(basis, V.d, V.n)


def symplectic_commutant(V: Subspace) -> Subspace:
    """{sigma : [sigma, tau] = 0 for all tau in V}."""
    J = symplectic_form(V.n, V.d)
    if V.dim == 0:
        return Subspace.full(V.d, V.n)
    rows = mm.modp(V.matrix @ J.T, V.d)  # [sigma, tau_i] = sigma . (J tau_i)
    return Subspace.from_generators(mm.nullspace(rows, V.d), V.d, V.n)


def is_isotropic(V: Subspace) -> bool:
    """True iff the symplectic product vanishes on all generator pairs."""
    g = V.matrix
    J = symplectic_form(V.n, V.d)
    return not np.any(mm.modp(g @ J @ g.T, V.d))


def coset_members(U: Subspace, w) -> tuple[tuple[int, ...], ...]:
    """The coset U + w as a lexicographically ordered tuple of points.

    Callers pass the support-direction subspace directly (typically V-perp).
    """
    wv = as_vector(w, U.d, U.n)
    if U.d ** U.dim > COSET_GUARD:
        raise GuardExceeded(f"coset has {U.d ** U.dim} > {COSET_GUARD} points")
    vecs = mm.span_vectors(U.matrix, U.d)
    return tuple(sorted(tuple(int(x) for x in mm.modp(v + wv, U.d)) for v in vecs))


@dataclass(frozen=True, eq=False)
class AffineSymplectic:
    """A phase-space map lam -> S lam + a with S^T J S = J mod d.

    Compare via key(); ndarray fields make the generated __eq__ a trap.
    """

    S: np.ndarray
    a: np.ndarray
    d: int
    n: int = field(default=0)

    def __post_init__(self):
        S = mm.modp(self.S, self.d)
        n = S.shape[0] // 2
        a = as_vector(self.a, self.d, n)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "n", n)
        J = symplectic_form(n, self.d)
        if np.any(mm.modp(S.T @ J @ S - J, self.d)):
            raise DimensionMismatch("matrix does not preserve the symplectic form")
        self.S.setflags(write=False)
        self.a.setflags(write=False)

    @classmethod
    def identity(cls, n: int, d: int) -> "AffineSymplectic":
        return cls(np.eye(2 * n, dtype=np.int64), np.zeros(2 * n, dtype=np.int64), d)

    def apply(self, lam) -> tuple[int, ...]:
        v = as_vector(lam, self.d, self.n)
        return tuple(int(x) for x in mm.modp(self.S @ v + self.a, self.d))

    def compose(self, other: "AffineSymplectic") -> "AffineSymplectic":
        """self after other: lam -> S1 (S2 lam + a2) + a1."""
        if (self.d, self.n) != (other.d, other.n):
            raise DimensionMismatch("composition across different (d, n)")
        return AffineSymplectic(
            mm.modp(self.S @ other.S, self.d),
            mm.modp(self.S @ other.a + self.a, self.d),
            self.d,
        )

    def inverse(self) -> "AffineSymplectic":
        Sinv = mm.inv_mat(self.S, self.d)
        return AffineSymplectic(Sinv, mm.modp(-(Sinv @ self.a), self.d), self.d)

    def key(self) -> tuple:
        return (self.S.tobytes(), self.a.tobytes())


def sp_order(n: int, d: int) -> int:
    """|Sp(2n, Z_d)| = d^{n^2} prod_{j=1..n} (d^{2j} - 1)."""
    total = d ** (n * n)
    for j in range(1, n + 1):
        total *= d ** (2 * j) - 1
    return total


def _site_embed(block: np.ndarray, site: int, n: int, d: int) -> np.ndarray:
    S = np.eye(2 * n, dtype=np.int64)
    S[2 * site : 2 * site + 2, 2 * site : 2 * site + 2] = block
    return mm.modp(S, d)


def _sum_embed(i: int, j: int, n: int, d: int) -> np.ndarray:
    # x_j += x_i, p_i -= p_j: the two-site entangling generator
    S = np.eye(2 * n, dtype=np.int64)
    S[2 * j, 2 * i] = 1
    S[2 * i + 1, 2 * j + 1] = (-1) % d
    return mm.modp(S, d)


def _sp_generators(n: int, d: int) -> list[np.ndarray]:
    fourier = np.array([[0, -1], [1, 0]], dtype=np.int64)
    shear = np.array([[1, 0], [1, 1]], dtype=np.int64)
    gens = []
    for k in range(n):
        gens.append(_site_embed(fourier, k, n, d))
        gens.append(_site_embed(shear, k, n, d))
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(_sum_embed(i, j, n, d))
    return gens


@lru_cache(maxsize=8)
def symplectic_matrices(n: int, d: int) -> tuple[np.ndarray, ...]:
    """All of Sp(2n, Z_d), enumerated by breadth-first closure of a
    standard generator set.  The count is asserted against the group-order
    formula, which certifies exhaustiveness.  Order is BFS discovery order
    (identity first), which puts shallow group elements early.
    """
    _check_dn(d, n)
    order = sp_order(n, d)
    gens = _sp_generators(n, d)
    J = symplectic_form(n, d)
    for g in gens:
        assert not np.any(mm.modp(g.T @ J @ g - J, d)), "bad symplectic generator"
    identity = np.eye(2 * n, dtype=np.int64)
    seen = {identity.tobytes()}
    out = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for S in frontier:
            for g in gens:
                T = mm.modp(S @ g, d)
                key = T.tobytes()
                if key not in seen:
                    seen.add(key)
                    out.append(T)
                    nxt.append(T)
        frontier = nxt
    if len(out) != order:
        raise AssertionError(
            f"symplectic closure found {len(out)} elements, expected {order}"
        )
    for S in out:
        S.setflags(write=False)
    return tuple(out)


def enumerate_affine_symplectics(n: int, d: int):
    """Duplicate-free exhaustive stream of all affine symplectic maps.

    Yields every (S, a) with S in Sp(2n, Z_d) and a in Z_d^{2n}.  Matrices
    come in BFS order from the generator walk, translations in lex order.
    Each emitted element re-validates S^T J S = J on construction.
    """
    _check_dn(d, n)
    total = sp_order(n, d) * d ** (2 * n)
    if total > AFFINE_ENUM_GUARD:
        raise GuardExceeded(
            f"affine symplectic enumeration needs {total} elements; "
            f"guard is {AFFINE_ENUM_GUARD}"
        )
    for S in symplectic_matrices(n, d):
        for a in itertools.product(range(d), repeat=2 * n):
            yield AffineSymplectic(S, np.array(a, dtype=np.int64), d)


def all_points(d: int, n: int) -> tuple[tuple[int, ...], ...]:
    """All of Z_d^{2n} in lexicographic order (the canonical point order)."""
    return tuple(itertools.product(range(d), repeat=2 * n))


def point_code(lam, d: int) -> int:
    """Index of a point in the lexicographic order of all_points."""
    code = 0
    for x in lam:
        code = code * d + int(x) % d
    return code


@lru_cache(maxsize=16)
def maximal_isotropic_subspaces(d: int, n: int) -> tuple[Subspace, ...]:
    """All dimension-n isotropic subspaces of Z_d^{2n}, canonically ordered.

    Grown by repeatedly extending isotropic subspaces inside their own
    symplectic commutant; deduplicated through the canonical rref form.
    Counts follow prod_{k=1..n} (d^k + 1).
    """
    _check_dn(d, n)
    level = {Subspace.zero(d, n)}
    for _ in range(n):
        nxt = set()
        for V in level:
            comm = symplectic_commutant(V)
            for vec in comm.vectors():
                if not any(vec) or V.contains(vec):
                    continue
                nxt.add(Subspace.from_generators(list(V.gens) + [vec], d, n))
        level = nxt
    expected = 1
    for k in range(1, n + 1):
        expected *= d**k + 1
    result = tuple(sorted(level, key=lambda V: V.gens))
    assert len(result) == expected, (len(result), expected)
    return result
