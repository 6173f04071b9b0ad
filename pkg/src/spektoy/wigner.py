"""Discrete Wigner machinery: Weyl operators, phase-point operators, tables,
covariance fitting and transition matrices.

Three named constructions are provided:

* ``gross``: odd d, quadratic prefactor chi(2^{-1} q.p) on Z(p)X(q).  With
  the X(a)|k> = |k-a> shift convention this is the unique sign for which
  the Weyl operators form a projective representation whose phases vanish
  on symplectically commuting pairs (T(t mu) = T(mu)^t in particular).
* ``delfosse-rebit``: d=2, no prefactor, phase-point sum restricted to the
  labels with q.p = 0 mod 2 (exactly the Hermitian Weyl operators).
* ``factorisable-rebit``: d=2, no prefactor, full sum.  Phase points are
  non-Hermitian but factorize as tensor products across sites.

Phase-point operators are normalized to unit trace; table normalizations
are computed, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import dense_oracle as do
from . import phase_algebra as pa
from .errors import DimensionMismatch, GuardExceeded

SPEC_NAMES = ("gross", "delfosse-rebit", "factorisable-rebit")


@dataclass(frozen=True)
class WignerSpec:
    """A phase-function choice fixing Weyl and phase-point operators.

    gamma_exp(lam) is the chi-exponent of the Weyl prefactor; restricted
    marks the phase-point sum as running over Hermitian labels only.
    """

    name: str
    d: int
    n: int
    restricted: bool = False

    def __post_init__(self):
        if self.name == "gross" and self.d % 2 == 0:
            raise DimensionMismatch("gross construction requires odd d")
        if self.name in ("delfosse-rebit", "factorisable-rebit") and self.d != 2:
            raise DimensionMismatch(f"{self.name} requires d=2")

    def gamma_exp(self, lam) -> int:
        if self.name != "gross":
            return 0
        q = lam[0::2]
        p = lam[1::2]
        return (pow(2, -1, self.d) * sum(int(a) * int(b) for a, b in zip(q, p))) % self.d

    def label_allowed(self, lam) -> bool:
        """Whether the label participates in the phase-point sum."""
        if not self.restricted:
            return True
        q = lam[0::2]
        p = lam[1::2]
        return sum(int(a) * int(b) for a, b in zip(q, p)) % 2 == 0

    def labels(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            lam for lam in pa.all_points(self.d, self.n) if self.label_allowed(lam)
        )


def gross_spec(d: int, n: int) -> WignerSpec:
    return WignerSpec("gross", d, n)


def delfosse_rebit_spec(n: int) -> WignerSpec:
    return WignerSpec("delfosse-rebit", 2, n, restricted=True)


def factorisable_rebit_spec(n: int) -> WignerSpec:
    return WignerSpec("factorisable-rebit", 2, n)


def spec_by_name(name: str, d: int, n: int) -> WignerSpec:
    name = name.lower()
    if name == "gross":
        return gross_spec(d, n)
    if name == "delfosse-rebit":
        if d != 2:
            raise DimensionMismatch("delfosse-rebit requires d=2")
        return delfosse_rebit_spec(n)
    if name == "factorisable-rebit":
        if d != 2:
            raise DimensionMismatch("factorisable-rebit requires d=2")
        return factorisable_rebit_spec(n)
    raise DimensionMismatch(f"unknown construction {name!r}; choose from {SPEC_NAMES}")


def weyl(lam, spec: WignerSpec) -> np.ndarray:
    """Weyl operator T(lam) = w^{gamma(lam)} Z(p) X(q)."""
    lam = pa.point(lam, spec.d)
    if len(lam) != 2 * spec.n:
        raise DimensionMismatch(f"point length {len(lam)} != {2 * spec.n}")
    q = lam[0::2]
    p = lam[1::2]
    return do.chi(spec.gamma_exp(lam), spec.d) * do.pauli(q, p, spec.d)


@lru_cache(maxsize=32)
def _weyl_stack(spec: WignerSpec) -> np.ndarray:
    pts = pa.all_points(spec.d, spec.n)
    return np.stack([weyl(lam, spec) for lam in pts])


@lru_cache(maxsize=32)
def _phase_point_stack(spec: WignerSpec) -> np.ndarray:
    """A(lam) for every lam (lex order), each of unit trace."""
    d, n = spec.d, spec.n
    pts = pa.all_points(d, n)
    J = pa.symplectic_form(n, d)
    codes = np.array(pts, dtype=np.int64)
    # chi([lam, lam']) for all pairs
    sympl = (codes @ J @ codes.T) % d
    phases = np.exp(2j * np.pi * sympl / d)
    mask = np.array([spec.label_allowed(lam) for lam in pts], dtype=float)
    T = _weyl_stack(spec)
    raw = np.tensordot(phases * mask[None, :], T, axes=(1, 0))
    # unit-trace normalisation, checked to be lam-independent
    traces = np.trace(raw, axis1=1, axis2=2)
    if abs(traces[0]) < 1e-12:
        raise DimensionMismatch("phase-point normalisation degenerate")
    norm = traces[0].real
    assert np.allclose(traces, norm, atol=1e-9)
    out = raw / norm
    out.setflags(write=False)
    return out


def phase_point(lam, spec: WignerSpec) -> np.ndarray:
    """Unit-trace phase-point operator at lam."""
    return _phase_point_stack(spec)[pa.point_code(lam, spec.d)]


def hermitian_part(A: np.ndarray) -> np.ndarray:
    return (A + A.conj().T) / 2


@dataclass(frozen=True)
class WignerTable:
    """Real table over phase space, indexed by the lex order of points.

    values holds the real parts; imag_residue records the largest imaginary
    part dropped.  Tables of states inside a matching subtheory are real to
    rounding; a non-Hermitian construction applied to an outside state can
    leave a genuine residue, which counts against non-negativity.
    """

    spec: WignerSpec
    values: np.ndarray
    imag_residue: float = 0.0

    def __post_init__(self):
        self.values.setflags(write=False)

    def value(self, lam) -> float:
        return float(self.values[pa.point_code(lam, self.spec.d)])

    def total(self) -> float:
        return float(self.values.sum())

    def support(self, tol: float = 1e-9) -> tuple[tuple[int, ...], ...]:
        pts = pa.all_points(self.spec.d, self.spec.n)
        return tuple(p for p, v in zip(pts, self.values) if abs(v) > tol)

    def min_value(self) -> float:
        return float(self.values.min())

    def as_json(self) -> dict:
        pts = pa.all_points(self.spec.d, self.spec.n)
        return {
            "spec_name": self.spec.name,
            "d": self.spec.d,
            "n": self.spec.n,
            "entries": [
                [list(p), round(float(v), 12)] for p, v in zip(pts, self.values)
            ],
            "sum": round(self.total(), 12),
        }


def _as_density(rho: np.ndarray) -> np.ndarray:
    if rho.ndim == 1:
        return np.outer(rho, rho.conj())
    return rho


def _raw_table(rho: np.ndarray, spec: WignerSpec) -> tuple[np.ndarray, float]:
    A = _phase_point_stack(spec)
    dm = _as_density(rho)
    vals = np.einsum("kij,ji->k", A, dm)
    return vals.real, float(np.abs(vals.imag).max())


def wigner_of_state(rho: np.ndarray, spec: WignerSpec) -> WignerTable:
    """Normalized table of a state: values sum to 1."""
    vals, resid = _raw_table(rho, spec)
    total = vals.sum()
    if abs(total) < 1e-12:
        raise DimensionMismatch("state table sums to zero")
    return WignerTable(spec, vals / total, resid / abs(total))


def wigner_of_measurement(Pi: np.ndarray, spec: WignerSpec) -> WignerTable:
    """Normalized table of a measurement element (same formula, its own
    normalisation)."""
    return wigner_of_state(Pi, spec)


def is_nonnegative(table: WignerTable, tol: float = 1e-9):
    """(verdict, offending points with their values).

    A table with a genuine imaginary residue is not a probability
    distribution, so it fails with every point of nonzero residue listed.
    """
    pts = pa.all_points(table.spec.d, table.spec.n)
    offending = [(p, float(v)) for p, v in zip(pts, table.values) if v < -tol]
    if table.imag_residue > tol:
        offending.append((("imag_residue",), table.imag_residue))
    return (len(offending) == 0, offending)


def is_coset_indicator(table: WignerTable, tol: float = 1e-9) -> bool:
    """True iff the table is uniform on an affine subspace and 0 elsewhere."""
    supp = table.support(tol)
    if not supp:
        return False
    vals = [table.value(p) for p in supp]
    if max(vals) - min(vals) > tol or abs(sum(vals) - 1) > tol:
        return False
    d = table.spec.d
    base = np.array(supp[0], dtype=np.int64)
    diffs = (np.array(supp, dtype=np.int64) - base) % d
    from . import _modmath as mm

    span = mm.span_vectors(mm.rref(diffs, d)[0], d)
    if span.shape[0] != len(supp):
        return False
    span_set = {tuple(int(x) for x in (v + base) % d) for v in span}
    return span_set == set(supp)


# ---------------------------------------------------------------------------
# covariance

def fit_covariance(
    U: np.ndarray, spec: WignerSpec, state_set
) -> pa.AffineSymplectic | None:
    """Exhaustive search for (S, a) with W_{U rho U*}(lam) = W_rho(S lam + a)
    for every state in state_set at every lam.

    Searches the full affine symplectic stream; translations are pruned
    (soundly) through an anchor support point of the first table, so a
    ``None`` answer is still an exhaustive no-witness certificate.  Raises
    GuardExceeded outside enumeration guards.
    """
    if not state_set:
        raise DimensionMismatch("state_set must be nonempty")
    d, n = spec.d, spec.n
    befores = [wigner_of_state(rho, spec).values for rho in state_set]
    afters = [
        wigner_of_state(U @ _as_density(rho) @ U.conj().T, spec).values
        for rho in state_set
    ]
    order = sorted(
        range(len(befores)), key=lambda i: np.count_nonzero(np.abs(afters[i]) > 1e-9)
    )
    befores = [befores[i] for i in order]
    afters = [afters[i] for i in order]
    pts = np.array(pa.all_points(d, n), dtype=np.int64)
    weights = d ** np.arange(2 * n - 1, -1, -1)
    anchor_after = afters[0]
    anchor_code = int(np.argmax(np.abs(anchor_after) > 1e-9))
    anchor_val = anchor_after[anchor_code]
    anchor_pt = pts[anchor_code]
    candidate_targets = [
        pts[c] for c in np.nonzero(np.abs(befores[0] - anchor_val) < 1e-9)[0]
    ]
    total = pa.sp_order(n, d) * d ** (2 * n)
    if total > pa.AFFINE_ENUM_GUARD:
        raise GuardExceeded(
            f"covariance search needs {total} candidates; guard is "
            f"{pa.AFFINE_ENUM_GUARD}"
        )
    for S in pa.symplectic_matrices(n, d):
        base = (S @ anchor_pt) % d
        for target in candidate_targets:
            a = (target - base) % d
            perm = ((pts @ S.T + a) % d) @ weights
            ok = True
            for before, after in zip(befores, afters):
                if not np.allclose(after, before[perm], atol=1e-9):
                    ok = False
                    break
            if ok:
                return pa.AffineSymplectic(S.copy(), a, d)
    return None


def phase_space_action(U: np.ndarray, spec: WignerSpec) -> pa.AffineSymplectic | None:
    """Covariance witness extracted by transporting phase-point operators.

    Matches U* A(lam) U against the phase-point stack; if every lam maps to
    a unique partner and the map is affine symplectic, that map witnesses
    covariance for *all* states at once.  Returns None when the transport
    does not close (which does not by itself rule out table-level
    covariance; use fit_covariance for certificates).
    """
    d, n = spec.d, spec.n
    A = _phase_point_stack(spec)
    pts = pa.all_points(d, n)
    Ud = U.conj().T
    mapping = np.full(len(pts), -1, dtype=np.int64)
    for i in range(len(pts)):
        img = Ud @ A[i] @ U
        hits = np.nonzero(np.abs(A - img).reshape(len(pts), -1).max(axis=1) < 1e-9)[0]
        if hits.size != 1:
            return None
        mapping[i] = hits[0]
    if len(set(mapping.tolist())) != len(pts):
        return None
    arr = np.array(pts, dtype=np.int64)
    a = arr[mapping[0]]
    cols = []
    for j in range(2 * n):
        e = np.zeros(2 * n, dtype=np.int64)
        e[j] = 1
        cols.append((arr[mapping[pa.point_code(e, d)]] - a) % d)
    S = np.stack(cols, axis=1)
    g = pa.AffineSymplectic(S, a, d)  # raises if not symplectic
    for i, lam in enumerate(pts):
        if g.apply(lam) != pts[mapping[i]]:
            return None
    return g


def covariance_witness(
    U: np.ndarray, spec: WignerSpec, state_set, exhaustive: bool = False
) -> pa.AffineSymplectic | None:
    """Find (S, a) witnessing covariance on state_set.

    Tries the operator-transport shortcut first (works at any supported n);
    the resulting witness is verified on the state tables.  With
    exhaustive=True, or when the shortcut fails, falls back to the
    guard-limited exhaustive search, which can also certify non-existence.
    """
    if not exhaustive:
        g = phase_space_action(U, spec)
        if g is not None and verify_covariance(U, spec, state_set, g):
            return g
    return fit_covariance(U, spec, state_set)


def verify_covariance(U, spec: WignerSpec, state_set, g: pa.AffineSymplectic) -> bool:
    d, n = spec.d, spec.n
    pts = np.array(pa.all_points(d, n), dtype=np.int64)
    weights = d ** np.arange(2 * n - 1, -1, -1)
    perm = ((pts @ g.S.T + g.a) % d) @ weights
    for rho in state_set:
        before = wigner_of_state(rho, spec).values
        after = wigner_of_state(U @ _as_density(rho) @ U.conj().T, spec).values
        if not np.allclose(after, before[perm], atol=1e-9):
            return False
    return True


@dataclass(frozen=True)
class TransitionMatrix:
    """Stochastic matrix P[lam, lam'] moving tables: after = P @ before."""

    spec: WignerSpec
    matrix: np.ndarray

    def is_permutation(self) -> bool:
        m = self.matrix
        return (
            np.all((np.abs(m) < 1e-12) | (np.abs(m - 1) < 1e-12))
            and np.all(np.abs(m.sum(axis=0) - 1) < 1e-12)
            and np.all(np.abs(m.sum(axis=1) - 1) < 1e-12)
        )


def transition_matrix(
    U: np.ndarray,
    spec: WignerSpec,
    state_set,
    witness: pa.AffineSymplectic | None = None,
) -> TransitionMatrix:
    """Point-mass-column transition matrix realizing a covariant gate.

    Built from a covariance witness (found if not supplied); verified to
    reproduce every state's table: W_after(lam) = sum_{lam'} P[lam, lam']
    W_before(lam').  Raises if called for a gate with no witness.
    """
    if witness is None:
        witness = covariance_witness(U, spec, state_set)
    if witness is None:
        raise DimensionMismatch("no covariance witness: transition matrix undefined")
    d, n = spec.d, spec.n
    pts = pa.all_points(d, n)
    size = len(pts)
    P = np.zeros((size, size))
    for i, lam in enumerate(pts):
        P[i, pa.point_code(witness.apply(lam), d)] = 1.0
    tm = TransitionMatrix(spec, P)
    for rho in state_set:
        before = wigner_of_state(rho, spec).values
        after = wigner_of_state(U @ _as_density(rho) @ U.conj().T, spec).values
        if not np.allclose(after, P @ before, atol=1e-9):
            raise AssertionError("transition matrix fails to transport a table")
    return tm


# ---------------------------------------------------------------------------
# the rebit equivalence of restricted and factorisable constructions

def verify_hermitian_criterion(n: int) -> bool:
    """T(lam) is Hermitian iff q.p = 0 mod 2, checked densely."""
    spec = factorisable_rebit_spec(n)
    for lam in pa.all_points(2, n):
        T = weyl(lam, spec)
        herm = np.allclose(T, T.conj().T, atol=1e-12)
        q = lam[0::2]
        p = lam[1::2]
        if herm != (sum(a * b for a, b in zip(q, p)) % 2 == 0):
            return False
    return True


def css_states(n: int) -> list[np.ndarray]:
    """All n-qubit stabilizer states whose stabilizer group splits into a
    pure-X part and a pure-Z part."""
    from . import _modmath as mm

    out = []
    # subspaces Q of Z_2^n (X part); Z part is forced to be Q-perp
    seen = set()
    for V in _all_subspaces_gf2(n):
        key = V.tobytes()
        if key in seen:
            continue
        seen.add(key)
        Q = V
        P = mm.nullspace(Q, 2) if Q.shape[0] else np.eye(n, dtype=np.int64)
        gens = []
        for q in Q:
            gens.append(("X", tuple(int(x) for x in q)))
        for p in P:
            gens.append(("Z", tuple(int(x) for x in p)))
        k = len(gens)
        assert k == n
        import itertools as it

        for signs in it.product((1, -1), repeat=k):
            labels = []
            for s, (kind, vec) in zip(signs, gens):
                word = "".join(
                    ("X" if kind == "X" else "Z") if v else "I" for v in vec
                )
                labels.append(("+" if s == 1 else "-") + word)
            out.append(do.stabilizer_state(labels, d=2, n=n))
    return out


def _all_subspaces_gf2(n: int) -> list[np.ndarray]:
    """Every subspace of Z_2^n as a canonical rref basis (including {0})."""
    from . import _modmath as mm
    import itertools as it

    seen = {}
    vectors = [np.array(v, dtype=np.int64) for v in it.product((0, 1), repeat=n)]
    nonzero = [v for v in vectors if v.any()]
    # closure by dimension
    frontier = [np.zeros((0, n), dtype=np.int64)]
    seen[frontier[0].tobytes()] = frontier[0]
    while frontier:
        nxt = []
        for B in frontier:
            for v in nonzero:
                if mm.in_rowspace(v, B, 2):
                    continue
                B2 = mm.rref(np.vstack([B, v]), 2)[0]
                key = B2.tobytes()
                if key not in seen:
                    seen[key] = B2
                    nxt.append(B2)
        frontier = nxt
    return list(seen.values())


def verify_hermitian_equivalence(n: int) -> dict:
    """Check that the restricted (Hermitian) construction is the Hermitian
    part of the factorisable one, entrywise and on all CSS-state tables.

    Returns a report dict; any mismatch is recorded as a counterexample.
    """
    if n > 3:
        raise GuardExceeded("equivalence check capped at n<=3")
    spec_r = delfosse_rebit_spec(n)
    spec_f = factorisable_rebit_spec(n)
    Ar = _phase_point_stack(spec_r)
    Af = _phase_point_stack(spec_f)
    report = {
        "n": n,
        "operator_identity": True,
        "table_agreement": True,
        "hermitian_criterion": verify_hermitian_criterion(n),
        "counterexamples": [],
    }
    for i, lam in enumerate(pa.all_points(2, n)):
        if not np.allclose(Ar[i], hermitian_part(Af[i]), atol=1e-12):
            report["operator_identity"] = False
            report["counterexamples"].append({"kind": "operator", "lam": list(lam)})
    states = css_states(n)
    for idx, psi in enumerate(states):
        tr = wigner_of_state(psi, spec_r).values
        tf = wigner_of_state(psi, spec_f).values
        if not np.allclose(tr, tf, atol=1e-9):
            report["table_agreement"] = False
            report["counterexamples"].append({"kind": "table", "state_index": idx})
    report["css_state_count"] = len(states)
    return report
