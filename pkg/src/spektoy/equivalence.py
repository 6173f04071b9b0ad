"""Operational equivalence between the dense oracle and the toy model.

The dictionary between the two sides is fixed by the Wigner construction:

* a Weyl label mu measured on the quantum side corresponds to the
  functional J^T mu on the toy side, with identical outcome residues
  (outcome k <-> eigenvalue chi(k));
* a state of maximal knowledge (V, w) corresponds to the joint eigenstate
  of the Weyl operators at labels J sigma_j with exponents sigma_j . w;
* an allowed gate corresponds to the affine map witnessing its covariance.

Given those three maps, circuit statistics on the two sides must agree
exactly; this module generates random host circuits and checks that they
do, and audits text-format circuits against a host before comparing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _modmath as mm
from . import dense_oracle as do
from . import phase_algebra as pa
from . import subtheory as stt
from . import toy_model as toy
from . import wigner as wg
from .circuits import Circuit, Correct, Gate, Measure
from .errors import AuditError, DimensionMismatch


def functional_for_label(mu, d: int) -> tuple[int, ...]:
    """Toy functional measured by the Weyl observable at label mu."""
    n = len(mu) // 2
    J = pa.symplectic_form(n, d)
    return tuple(int(x) for x in mm.modp(J.T @ np.array(mu, dtype=np.int64), d))


def label_for_functional(sigma, d: int) -> tuple[int, ...]:
    """Weyl label whose measurement learns the given functional."""
    n = len(sigma) // 2
    J = pa.symplectic_form(n, d)
    return tuple(int(x) for x in mm.modp(J @ np.array(sigma, dtype=np.int64), d))


def quantum_state_for(
    epistemic: toy.EpistemicState, spec: wg.WignerSpec
) -> np.ndarray:
    """Dense state matching a maximal-knowledge epistemic state.

    Generators are the construction's own Weyl operators (the phased ones),
    so the eigenvalue exponents match the functional values exactly even on
    mixed labels."""
    V = epistemic.V
    if V.dim != V.n:
        raise DimensionMismatch("only maximal-knowledge states map to pure states")
    d = V.d
    dim = d**V.n
    rho = np.eye(dim, dtype=complex)
    for sigma in V.gens:
        mu = label_for_functional(sigma, d)
        k = pa.evaluate(sigma, epistemic.w, d)
        projs = do.weyl_char_projectors(wg.weyl(mu, spec), d)
        rho = rho @ projs[k]
    vals, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    if abs(vals[-1] - 1.0) > 1e-9:
        raise DimensionMismatch("knowledge state does not pin a pure state")
    return do.canonical_phase(vecs[:, -1])


def epistemic_state_for(psi: np.ndarray, spec: wg.WignerSpec) -> toy.EpistemicState:
    """Epistemic state read off a non-negative coset-indicator table."""
    table = wg.wigner_of_state(psi, spec)
    if not wg.is_coset_indicator(table):
        raise DimensionMismatch("state table is not a coset indicator")
    supp = table.support()
    base = np.array(supp[0], dtype=np.int64)
    diffs = (np.array(supp, dtype=np.int64) - base) % spec.d
    U = pa.Subspace.from_generators(mm.rref(diffs, spec.d)[0], spec.d, spec.n)
    V = pa.perp(U)
    return toy.make_epistemic(V, tuple(int(x) for x in base))


def measurement_projectors(mu, spec: wg.WignerSpec) -> list[np.ndarray]:
    """Outcome projectors of the Weyl observable at label mu, indexed by
    the character exponent (matching the toy functional's residues)."""
    return do.weyl_char_projectors(wg.weyl(mu, spec), spec.d)


@dataclass
class HostModel:
    """A subtheory together with the cached toy transport of its gates."""

    sub: stt.Subtheory

    def __post_init__(self):
        self._gate_cache: dict[tuple[str, tuple[int, ...]], pa.AffineSymplectic] = {}

    @property
    def d(self) -> int:
        return self.sub.d

    @property
    def n(self) -> int:
        return self.sub.n

    @property
    def spec(self) -> wg.WignerSpec:
        return self.sub.spec

    def gate_action(self, name: str, wires: tuple[int, ...]) -> pa.AffineSymplectic:
        """Forward ontic transport of a named gate (support push-forward).

        The covariance witness g satisfies table_after(lam) =
        table_before(g(lam)), i.e. it pulls supports back; the toy model
        pushes supports forward, so the gate acts as g^{-1}."""
        return self._action(
            (name.upper(), tuple(wires)),
            lambda: do.gate(name, wires, self.n, self.d),
        )

    def gate_action_for(self, gen: stt.GateGen) -> pa.AffineSymplectic:
        """Forward transport keyed by a generator (covers compound ones
        like the global Hadamard that have no single gate name)."""
        return self._action((gen.label(),), lambda: gen.matrix)

    def _action(self, key, matrix_fn) -> pa.AffineSymplectic:
        if key not in self._gate_cache:
            witness = wg.covariance_witness(matrix_fn(), self.spec, self.sub.states)
            if witness is None:
                raise AuditError(f"gate {key} has no covariant action")
            self._gate_cache[key] = witness.inverse()
        return self._gate_cache[key]

    def allowed_gate_names(self) -> set[str]:
        names = {g.name for g in self.sub.gate_generators}
        names.add("SWAP")
        if "SUM" in names:
            names.add("CNOT")
        if self.d == 2:
            names.add("Y")  # X.Z composition up to phase
        return names

    def audit_circuit(self, circuit: Circuit) -> None:
        """Raise AuditError naming the first element outside the host."""
        allowed = self.allowed_gate_names()
        observables = set(self.sub.observables)
        for ins in circuit.instructions:
            if isinstance(ins, (Gate, Correct)):
                if ins.name.upper() not in allowed:
                    raise AuditError(
                        f"gate {ins.name!r} is not available in host "
                        f"{self.sub.name!r} (allowed: {sorted(allowed)})"
                    )
            elif isinstance(ins, Measure):
                lam = _basis_label(ins.basis, ins.wires, self.n, self.d)
                if lam not in observables:
                    raise AuditError(
                        f"measurement basis {ins.basis!r} on wires {ins.wires} "
                        f"is not an allowed observable of host {self.sub.name!r}"
                    )
        if circuit.init_spec is not None:
            psi = do.parse_state_spec(circuit.init_spec, d=self.d, n=self.n)
            if not any(do.states_equal(psi, s) for s in self.sub.states):
                raise AuditError(
                    f"initial state {circuit.init_spec!r} is not an allowed state"
                )


def _basis_label(basis: str, wires, n: int, d: int) -> tuple[int, ...]:
    lam = [0] * (2 * n)
    for c, w in zip(basis.upper(), wires):
        if c == "I":
            continue
        if c == "X":
            lam[2 * w] = 1
        elif c == "Z":
            lam[2 * w + 1] = 1
        elif c == "Y" and d == 2:
            lam[2 * w] = 1
            lam[2 * w + 1] = 1
        else:
            raise AuditError(f"basis letter {c!r} unsupported for d={d}")
    return tuple(lam)


@lru_cache(maxsize=16)
def host_model(name: str, n: int, d: int = 2) -> HostModel:
    return HostModel(stt.subtheory_by_name(name, n, d))


# ---------------------------------------------------------------------------
# paired random circuits

@dataclass
class PairedCircuit:
    """One random host circuit in both representations."""

    epistemic: toy.EpistemicState
    dense_state: np.ndarray
    toy_steps: list
    dense_steps: list  # ("gate", U) | ("measure", [projectors])
    description: list[str]


def _random_css_knowledge(n: int, rng) -> pa.Subspace:
    """Random maximal isotropic V from position/momentum functionals."""
    raw = rng.integers(0, 2, size=(rng.integers(0, n + 1), n))
    Q = mm.rref(raw, 2)[0] if raw.size else np.zeros((0, n), dtype=np.int64)
    P = mm.nullspace(Q, 2) if Q.shape[0] else np.eye(n, dtype=np.int64)
    gens = []
    for q in Q:
        v = np.zeros(2 * n, dtype=np.int64)
        v[0::2] = q
        gens.append(v)
    for p in P:
        v = np.zeros(2 * n, dtype=np.int64)
        v[1::2] = p
        gens.append(v)
    return pa.Subspace.from_generators(gens, 2, n)


def random_paired_circuit(host: HostModel, rng, depth: int = 5) -> PairedCircuit:
    d, n = host.d, host.n
    if d == 2:
        # rebit hosts: knowledge built from position/momentum functionals
        # (whose duals are the X/Z-split stabilizer groups)
        V = _random_css_knowledge(n, rng)
    else:
        isos = pa.maximal_isotropic_subspaces(d, n)
        V = isos[int(rng.integers(0, len(isos)))]
    w = tuple(int(x) for x in rng.integers(0, d, size=2 * n))
    epistemic = toy.make_epistemic(V, w)
    dense_state = quantum_state_for(epistemic, host.spec)

    toy_steps = []
    dense_steps = []
    description = []
    gens = host.sub.gate_generators
    nontrivial = [lam for lam in host.sub.observables if any(lam)]
    n_meas = 0
    for _ in range(depth):
        if rng.random() < 0.55 or n_meas >= 3:
            g = gens[int(rng.integers(0, len(gens)))]
            toy_steps.append(("gate", host.gate_action_for(g)))
            dense_steps.append(("gate", g.matrix))
            description.append(g.label())
        else:
            lam = nontrivial[int(rng.integers(0, len(nontrivial)))]
            sigma = functional_for_label(lam, d)
            toy_steps.append(("measure", toy.SharpMeasurement((sigma,), d, n)))
            dense_steps.append(("measure", measurement_projectors(lam, host.spec)))
            description.append(f"M[{do.PauliLabel.from_point(lam, d).name()}]")
            n_meas += 1
    return PairedCircuit(epistemic, dense_state, toy_steps, dense_steps, description)


def dense_statistics(state: np.ndarray, steps) -> dict[tuple, float]:
    """Exhaustive branch-tree distribution over outcome tuples."""
    branches = [((), 1.0, state)]
    for kind, op in steps:
        if kind == "gate":
            branches = [(o, p, op @ s) for o, p, s in branches]
        else:
            nxt = []
            for outcomes, prob, s in branches:
                for k, P in enumerate(op):
                    collapsed = P @ s
                    pk = float(np.vdot(collapsed, collapsed).real)
                    if pk <= 1e-14:
                        continue
                    nxt.append(
                        (outcomes + ((k,),), prob * pk, collapsed / np.sqrt(pk))
                    )
            branches = nxt
    out: dict[tuple, float] = {}
    for outcomes, prob, _ in branches:
        out[outcomes] = out.get(outcomes, 0.0) + prob
    return out


def compare_statistics(
    toy_dist: dict[tuple, Fraction], dense_dist: dict[tuple, float]
) -> float:
    """Largest absolute probability deviation over the union of outcomes."""
    keys = set(toy_dist) | set(dense_dist)
    dev = 0.0
    for k in keys:
        dev = max(dev, abs(float(toy_dist.get(k, 0)) - dense_dist.get(k, 0.0)))
    return dev


def check_random_equivalence(
    host: HostModel, n_circuits: int, seed: int = 0, depth: int = 5
) -> dict:
    """Run paired random circuits; report the worst deviation seen."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_desc: list[str] = []
    for _ in range(n_circuits):
        pc = random_paired_circuit(host, rng, depth)
        toy_dist = toy.statistics(pc.epistemic, pc.toy_steps)
        dense_dist = dense_statistics(pc.dense_state, pc.dense_steps)
        dev = compare_statistics(toy_dist, dense_dist)
        if dev > worst:
            worst = dev
            worst_desc = pc.description
    return {
        "host": host.sub.name,
        "d": host.d,
        "n": host.n,
        "circuits": n_circuits,
        "max_deviation": worst,
        "worst_circuit": worst_desc,
    }


# ---------------------------------------------------------------------------
# text-circuit comparison (CLI entry)

def circuit_statistics_both_ways(circuit: Circuit, host: HostModel):
    """Audit a text circuit against the host, then run it on both sides.

    Returns (toy distribution, dense distribution, max deviation); outcome
    keys are tuples of per-measurement residue tuples in program order.
    """
    host.audit_circuit(circuit)
    d, n = host.d, host.n
    if circuit.n_wires > n:
        raise DimensionMismatch(f"circuit needs {circuit.n_wires} wires, host has {n}")
    for ins in circuit.instructions:
        if isinstance(ins, Correct):
            raise AuditError("classically controlled corrections are not part of "
                             "the equivalence pipeline")
    if circuit.init_spec is None:
        psi = do.basis_state([0] * n, d)
    else:
        psi = do.parse_state_spec(circuit.init_spec, d=d, n=n)
    epistemic = epistemic_state_for(psi, host.spec)

    toy_steps = []
    dense_steps = []
    for ins in circuit.instructions:
        if isinstance(ins, Gate):
            toy_steps.append(("gate", host.gate_action(ins.name, ins.wires)))
            dense_steps.append(("gate", do.gate(ins.name, ins.wires, n, d)))
        elif isinstance(ins, Measure):
            lam = _basis_label(ins.basis, ins.wires, n, d)
            sigma = functional_for_label(lam, d)
            toy_steps.append(("measure", toy.SharpMeasurement((sigma,), d, n)))
            dense_steps.append(("measure", measurement_projectors(lam, host.spec)))
    toy_dist = toy.statistics(epistemic, toy_steps)
    dense_dist = dense_statistics(psi, dense_steps)
    return toy_dist, dense_dist, compare_statistics(toy_dist, dense_dist)
