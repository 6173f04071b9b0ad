"""Deriving closed, non-negatively represented gate/state/observable sets
from a Wigner construction, and the concrete subtheories used everywhere
else: the minimal CSS-without-Hadamard rebit family and full odd-d
stabilizer mechanics.

The derivation recipe:
  1. allowed observables: labels whose Weyl product phase vanishes against
     every symplectically commuting label,
  2. allowed states: joint eigenstates of maximal label subgroups generated
     inside the allowed set,
  3. allowed gates: candidates that permute the allowed states (up to
     phase) and act covariantly on their tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _modmath as mm
from . import dense_oracle as do
from . import phase_algebra as pa
from . import wigner as wg
from .errors import DimensionMismatch, GuardExceeded


# ---------------------------------------------------------------------------
# Weyl product phases

def beta(lam, lam2, spec: wg.WignerSpec) -> int:
    """Exponent b with T(lam) T(lam2) = chi(b) T(lam + lam2).

    Computed from the phase bookkeeping and verified against dense Weyl
    multiplication; raises if the product phase is not a chi power (which
    would mean a malformed construction).
    """
    d = spec.d
    lam = pa.point(lam, d)
    lam2 = pa.point(lam2, d)
    q, p2 = lam[0::2], lam2[1::2]
    s = sum(a * b for a, b in zip(q, p2))
    lam_sum = tuple((a + b) % d for a, b in zip(lam, lam2))
    b = (spec.gamma_exp(lam) + spec.gamma_exp(lam2) - spec.gamma_exp(lam_sum) + s) % d
    lhs = wg.weyl(lam, spec) @ wg.weyl(lam2, spec)
    rhs = do.chi(b, d) * wg.weyl(lam_sum, spec)
    if not np.allclose(lhs, rhs, atol=1e-10):
        for e in range(d):
            if np.allclose(lhs, do.chi(e, d) * wg.weyl(lam_sum, spec), atol=1e-10):
                return e
        raise DimensionMismatch("Weyl product phase is not a chi power")
    return b


def _beta_table(spec: wg.WignerSpec) -> np.ndarray:
    """beta over all label pairs, computed in bulk (no dense check)."""
    d, n = spec.d, spec.n
    pts = np.array(pa.all_points(d, n), dtype=np.int64)
    gamma = np.array([spec.gamma_exp(tuple(l)) for l in pts], dtype=np.int64)
    qdotp = pts[:, 0::2] @ pts[:, 1::2].T
    sums = (pts[:, None, :] + pts[None, :, :]) % d
    weights = d ** np.arange(2 * n - 1, -1, -1)
    sum_codes = sums @ weights
    gamma_sum = gamma[sum_codes]
    return (gamma[:, None] + gamma[None, :] - gamma_sum + qdotp) % d


def allowed_observables(spec: wg.WignerSpec) -> tuple[tuple[int, ...], ...]:
    """Labels lam with beta(lam, lam') = 0 for every commuting lam'."""
    d, n = spec.d, spec.n
    if d ** (4 * n) > 1 << 26:
        raise GuardExceeded("observable enumeration too large")
    pts = np.array(pa.all_points(d, n), dtype=np.int64)
    J = pa.symplectic_form(n, d)
    commuting = (pts @ J @ pts.T) % d == 0
    bt = _beta_table(spec)
    keep = ~np.any(commuting & (bt != 0), axis=1)
    return tuple(tuple(int(x) for x in pts[i]) for i in np.nonzero(keep)[0])


def nonmixing_labels(d: int, n: int) -> tuple[tuple[int, ...], ...]:
    """{X(q)} ∪ {Z(p)} labels: no site mixing across the whole label."""
    out = set()
    for q in itertools.product(range(d), repeat=n):
        lam = [0] * (2 * n)
        lam[0::2] = q
        out.add(tuple(lam))
    for p in itertools.product(range(d), repeat=n):
        lam = [0] * (2 * n)
        lam[1::2] = p
        out.add(tuple(lam))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# states

@lru_cache(maxsize=16)
def all_stabilizer_states(d: int, n: int) -> tuple[np.ndarray, ...]:
    """Every joint eigenstate of a maximal commuting Weyl-label subgroup,
    i.e. the full stabilizer-state census (6, 60, 1080 / 12, 360 ...)."""
    out = []
    for M in pa.maximal_isotropic_subspaces(d, n):
        gens = [np.array(g) for g in M.gens]
        for ks in itertools.product(range(d), repeat=len(gens)):
            labels = [(do.PauliLabel.from_point(g, d), k) for g, k in zip(gens, ks)]
            out.append(do.stabilizer_state(labels, d=d, n=n))
    for s in out:
        s.setflags(write=False)
    return tuple(out)


def allowed_states(spec: wg.WignerSpec) -> tuple[np.ndarray, ...]:
    """Joint eigenstates of maximal label subgroups generated inside the
    allowed observable set, deduplicated up to global phase."""
    allowed = set(allowed_observables(spec))
    d, n = spec.d, spec.n
    out = []
    for M in pa.maximal_isotropic_subspaces(d, n):
        members = M.vectors()
        inside = [v for v in members if v in allowed]
        if not inside:
            continue
        if mm.rank(np.array(inside, dtype=np.int64), d) != n:
            continue
        gens = [np.array(g) for g in M.gens]
        for ks in itertools.product(range(d), repeat=len(gens)):
            labels = [(do.PauliLabel.from_point(g, d), k) for g, k in zip(gens, ks)]
            out.append(do.stabilizer_state(labels, d=d, n=n))
    return tuple(out)


def is_css(psi: np.ndarray, n: int) -> bool:
    """Stabilizer group splits into a pure-X and a pure-Z part."""
    cx = sum(
        1
        for q in itertools.product(range(2), repeat=n)
        if abs(abs(np.vdot(psi, do.pauli(q, (0,) * n, 2) @ psi)) - 1) < 1e-9
    )
    cz = sum(
        1
        for p in itertools.product(range(2), repeat=n)
        if abs(abs(np.vdot(psi, do.pauli((0,) * n, p, 2) @ psi)) - 1) < 1e-9
    )
    return cx * cz == 2**n


def is_real_state(psi: np.ndarray) -> bool:
    return bool(np.abs(do.canonical_phase(psi).imag).max() < 1e-9)


# ---------------------------------------------------------------------------
# gate sets

@dataclass(frozen=True)
class GateGen:
    name: str
    wires: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def label(self) -> str:
        return f"{self.name}({','.join(map(str, self.wires))})"


def named_gate_pool(d: int, n: int, max_wires: int = 3) -> list[GateGen]:
    """The default candidate generators: named single- and two-site
    Clifford-type gates on every wire combination."""
    if d == 2:
        one = ["X", "Y", "Z", "H", "S"]
        two = ["CNOT", "CZ", "SWAP"]
    else:
        one = ["X", "Z", "F", "P"]
        two = ["SUM", "SWAP"]
    pool = []
    for name in one:
        for w in range(n):
            pool.append(GateGen(name, (w,), do.gate(name, (w,), n, d)))
    if n >= 2:
        for name in two:
            for i in range(n):
                for j in range(n):
                    if i != j and not (name in ("CZ", "SWAP") and i > j):
                        pool.append(GateGen(name, (i, j), do.gate(name, (i, j), n, d)))
    return pool


def _state_index(states, psi) -> int | None:
    for i, s in enumerate(states):
        if do.states_equal(s, psi):
            return i
    return None


def permutes_states(U: np.ndarray, states) -> tuple[bool, int | None]:
    """Whether U maps the state set onto itself up to global phase.

    Returns (ok, index of first counterexample state)."""
    for i, s in enumerate(states):
        if _state_index(states, U @ s) is None:
            return False, i
    return True, None


def allowed_gates(
    spec: wg.WignerSpec, candidates: list[GateGen] | None = None
) -> list[tuple[GateGen, pa.AffineSymplectic]]:
    """Filter candidates by closure over the allowed states and table
    covariance, returning each survivor with its phase-space witness."""
    states = allowed_states(spec)
    if candidates is None:
        candidates = named_gate_pool(spec.d, spec.n)
    kept = []
    for cand in candidates:
        ok, _ = permutes_states(cand.matrix, states)
        if not ok:
            continue
        witness = wg.covariance_witness(cand.matrix, spec, states)
        if witness is not None:
            kept.append((cand, witness))
    return kept


# ---------------------------------------------------------------------------
# concrete subtheories

@dataclass(frozen=True)
class Subtheory:
    name: str
    spec: wg.WignerSpec
    states: tuple[np.ndarray, ...]
    gate_generators: tuple[GateGen, ...]
    observables: tuple[tuple[int, ...], ...]

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def n(self) -> int:
        return self.spec.n

    def gate_names(self) -> tuple[str, ...]:
        return tuple(sorted({g.name for g in self.gate_generators}))

    def manifest(self, certificates: dict | None = None) -> dict:
        return {
            "spec": {"name": self.spec.name, "d": self.d, "n": self.n},
            "observables": [
                do.PauliLabel.from_point(l, self.d).name() for l in self.observables
            ],
            "gate_generators": [g.label() for g in self.gate_generators],
            "state_count": len(self.states),
            "certificates": certificates or {},
        }


def _pauli_cnot_gens(n: int) -> tuple[GateGen, ...]:
    gens = []
    for w in range(n):
        gens.append(GateGen("X", (w,), do.gate("X", (w,), n, 2)))
        gens.append(GateGen("Z", (w,), do.gate("Z", (w,), n, 2)))
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(GateGen("CNOT", (i, j), do.gate("CNOT", (i, j), n, 2)))
    return tuple(gens)


@lru_cache(maxsize=8)
def minimal_rebit_subtheory(n: int) -> Subtheory:
    """CSS states and non-mixing X/Z observables with gates generated by
    CNOT and the Pauli rotations only (no global Hadamard)."""
    spec = wg.delfosse_rebit_spec(n)
    return Subtheory(
        name="minimal-rebit",
        spec=spec,
        states=allowed_states(spec),
        gate_generators=_pauli_cnot_gens(n),
        observables=nonmixing_labels(2, n),
    )


@lru_cache(maxsize=8)
def css_rebit_subtheory(n: int) -> Subtheory:
    """The maximal rebit reference: minimal set plus the global Hadamard."""
    base = minimal_rebit_subtheory(n)
    hh = do.gate("H", (0,), n, 2)
    for w in range(1, n):
        hh = hh @ do.gate("H", (w,), n, 2)
    return Subtheory(
        name="css-rebit",
        spec=base.spec,
        states=base.states,
        gate_generators=base.gate_generators
        + (GateGen("H*", tuple(range(n)), hh),),
        observables=base.observables,
    )


@lru_cache(maxsize=8)
def qudit_stabilizer_subtheory(d: int, n: int) -> Subtheory:
    """Full stabilizer mechanics at odd prime d (the maximal case)."""
    spec = wg.gross_spec(d, n)
    gens = []
    for w in range(n):
        for name in ("X", "Z", "F", "P"):
            gens.append(GateGen(name, (w,), do.gate(name, (w,), n, d)))
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(GateGen("SUM", (i, j), do.gate("SUM", (i, j), n, d)))
    return Subtheory(
        name=f"qudit-stabilizer-d{d}",
        spec=spec,
        states=all_stabilizer_states(d, n),
        gate_generators=tuple(gens),
        observables=tuple(pa.all_points(d, n)),
    )


@lru_cache(maxsize=8)
def full_qubit_stabilizer_subtheory(n: int, spec_name: str = "delfosse-rebit") -> Subtheory:
    """All qubit stabilizer states and Clifford generators, paired with a
    rebit construction: the canonical *failing* candidate."""
    spec = wg.spec_by_name(spec_name, 2, n)
    gens = []
    for w in range(n):
        for name in ("X", "Z", "H", "S"):
            gens.append(GateGen(name, (w,), do.gate(name, (w,), n, 2)))
    for i in range(n):
        for j in range(n):
            if i != j:
                gens.append(GateGen("CNOT", (i, j), do.gate("CNOT", (i, j), n, 2)))
    labels = tuple(
        lam
        for lam in pa.all_points(2, n)
        if sum(a * b for a, b in zip(lam[0::2], lam[1::2])) % 2 == 0
    )
    return Subtheory(
        name="full-qubit-stabilizer",
        spec=spec,
        states=all_stabilizer_states(2, n),
        gate_generators=tuple(gens),
        observables=labels,
    )


def subtheory_by_name(name: str, n: int, d: int = 2) -> Subtheory:
    name = name.lower()
    if name in ("minimal-rebit", "minimal"):
        return minimal_rebit_subtheory(n)
    if name in ("css-rebit", "css"):
        return css_rebit_subtheory(n)
    if name in ("qudit-stabilizer", "gross"):
        return qudit_stabilizer_subtheory(d if d % 2 else 3, n)
    if name == "full-qubit-stabilizer":
        return full_qubit_stabilizer_subtheory(n)
    raise DimensionMismatch(f"unknown subtheory {name!r}")


# ---------------------------------------------------------------------------
# certificates

def is_closed(sub: Subtheory):
    """Every generator maps every allowed state to an allowed state.

    Returns (verdict, counterexample) with the counterexample naming the
    gate and the escaping state index."""
    for gen in sub.gate_generators:
        ok, idx = permutes_states(gen.matrix, sub.states)
        if not ok:
            return False, {"gate": gen.label(), "state_index": idx}
    return True, None


def observable_projector_tables(sub: Subtheory):
    """Wigner tables of every outcome projector of every allowed
    observable (the measurement-side duals)."""
    d, n = sub.d, sub.n
    tables = []
    for lam in sub.observables:
        if not any(lam):
            continue
        label = do.PauliLabel.from_point(lam, d)
        if d == 2:
            herm = label.hermitian_operator()
            eye = np.eye(2**n)
            projs = [(eye + herm) / 2, (eye - herm) / 2]
        else:
            projs = do.weyl_char_projectors(label.operator(), d)
        for k, P in enumerate(projs):
            tables.append((label.name(), k, wg.wigner_of_measurement(P, sub.spec)))
    return tables


def is_spekkens_subtheory(sub: Subtheory, covariance_mode: str = "auto") -> dict:
    """Run the three certificates: closure, non-negativity (states and
    measurement duals), covariance of every generator.

    covariance_mode: "auto" uses the operator-transport witness and falls
    back to the exhaustive search within guards; "exhaustive" forces the
    search (and may raise GuardExceeded).  The report records which mode
    produced each witness.
    """
    report: dict = {"name": sub.name, "d": sub.d, "n": sub.n}
    closed, cex = is_closed(sub)
    report["closure"] = {"passed": closed, "counterexample": cex}

    neg_witness = None
    coset_fail = None
    for i, psi in enumerate(sub.states):
        table = wg.wigner_of_state(psi, sub.spec)
        ok, off = wg.is_nonnegative(table)
        if not ok and neg_witness is None:
            neg_witness = {"state_index": i, "offending": off[:3]}
        if not wg.is_coset_indicator(table) and coset_fail is None:
            coset_fail = {"state_index": i}
    dual_witness = None
    for name, k, table in observable_projector_tables(sub):
        ok, off = wg.is_nonnegative(table)
        if not ok:
            dual_witness = {"observable": name, "outcome": k, "offending": off[:3]}
            break
    report["nonnegativity"] = {
        "passed": neg_witness is None and dual_witness is None,
        "state_witness": neg_witness,
        "dual_witness": dual_witness,
        "coset_indicator_failure": coset_fail,
    }

    cov: dict = {"passed": True, "witnesses": {}, "failures": []}
    for gen in sub.gate_generators:
        mode = covariance_mode
        witness = None
        how = None
        if mode in ("auto",):
            witness = wg.phase_space_action(gen.matrix, sub.spec)
            if witness is not None and wg.verify_covariance(
                gen.matrix, sub.spec, sub.states, witness
            ):
                how = "transport"
            else:
                witness = None
        if witness is None:
            try:
                witness = wg.fit_covariance(gen.matrix, sub.spec, sub.states)
                how = "exhaustive"
            except GuardExceeded:
                witness = None
                how = "guard-exceeded"
        if witness is None:
            cov["passed"] = False
            cov["failures"].append({"gate": gen.label(), "mode": how})
        else:
            cov["witnesses"][gen.label()] = {
                "S": witness.S.tolist(),
                "a": witness.a.tolist(),
                "mode": how,
            }
    report["covariance"] = cov
    report["passed"] = bool(
        report["closure"]["passed"]
        and report["nonnegativity"]["passed"]
        and cov["passed"]
    )
    return report


# ---------------------------------------------------------------------------
# generated gate groups (for membership assertions like SWAP-in / CZ-out)

def _unitary_key(U: np.ndarray) -> bytes:
    # canonical phase: first entry above half the max magnitude (stable
    # across representatives); +0.0 erases -0.0 sign bits before hashing
    flat = U.reshape(-1)
    mags = np.abs(flat)
    idx = int(np.argmax(mags > 0.5 * mags.max()))
    phase = flat[idx] / mags[idx]
    canon = np.round(U / phase, 6) + (0.0 + 0.0j)
    return canon.astype(np.complex128).tobytes()


def generated_gate_group(
    generators: list[np.ndarray], max_size: int = 400_000
) -> set[bytes]:
    """BFS closure of the generated unitary group, up to global phase."""
    gens = [np.asarray(g, dtype=complex) for g in generators]
    dim = gens[0].shape[0]
    eye = np.eye(dim, dtype=complex)
    seen = {_unitary_key(eye)}
    frontier = [eye]
    while frontier:
        nxt = []
        for U in frontier:
            for g in gens:
                V = U @ g
                key = _unitary_key(V)
                if key not in seen:
                    seen.add(key)
                    nxt.append(V)
                    if len(seen) > max_size:
                        raise GuardExceeded(f"gate group exceeds {max_size} elements")
        frontier = nxt
    return seen


def group_contains(group: set[bytes], U: np.ndarray) -> bool:
    return _unitary_key(np.asarray(U, dtype=complex)) in group
