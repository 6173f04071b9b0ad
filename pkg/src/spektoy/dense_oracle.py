"""Brute-force complex-matrix quantum mechanics at desk scale.

This is the ground truth every phase-space claim is checked against: exact
dense matrices, explicit eigenprojectors, exhaustive branch trees.  Hard
caps keep everything honest (6 qubits / 4 qutrits); there is no tableau
shortcut anywhere in this module on purpose.

Shift operators use the convention X(a)|k> = |k-a>.  For d=2 this agrees
with the usual Pauli X; for odd d it fixes the sign of every index identity
below and in the Wigner layer.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuits import Circuit, Correct, Gate, Measure, eval_expr
from .errors import (
    CircuitParseError,
    DimensionMismatch,
    GuardExceeded,
    InvalidGenerators,
)

ATOL_CONSTRUCT = 1e-12   # construction-level identities
ATOL_END2END = 1e-9      # end-to-end / branch-level identities

MAX_QUBITS = 6
MAX_QUDITS = {2: 6, 3: 4, 5: 3}


def chi(a: int, d: int) -> complex:
    """Primitive character exp(2 pi i a / d); exactly -1^a for d=2."""
    a = int(a) % d
    if d == 2:
        return -1.0 + 0j if a else 1.0 + 0j
    return cmath.exp(2j * cmath.pi * a / d)


def _check_scale(n: int, d: int) -> None:
    cap = MAX_QUDITS.get(d)
    if cap is None:
        raise DimensionMismatch(f"d={d} unsupported")
    if n > cap:
        raise GuardExceeded(f"dense oracle capped at n<={cap} for d={d}, got n={n}")


@lru_cache(maxsize=None)
def shift_x(a: int, d: int) -> np.ndarray:
    """Single-site X(a) = sum_k |k-a><k|."""
    m = np.zeros((d, d), dtype=complex)
    for k in range(d):
        m[(k - a) % d, k] = 1.0
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def phase_z(b: int, d: int) -> np.ndarray:
    """Single-site Z(b) = sum_k chi(k b) |k><k|."""
    m = np.diag([chi(k * b, d) for k in range(d)])
    m.setflags(write=False)
    return m


def pauli(q, p, d: int) -> np.ndarray:
    """Multi-site Z(p) X(q) with q the shift part and p the phase part."""
    q = tuple(int(x) % d for x in q)
    p = tuple(int(x) % d for x in p)
    if len(q) != len(p):
        raise DimensionMismatch("q and p length mismatch")
    _check_scale(len(q), d)
    out = np.array([[1.0 + 0j]])
    for qj, pj in zip(q, p):
        out = np.kron(out, phase_z(pj, d) @ shift_x(qj, d))
    return out


@dataclass(frozen=True)
class PauliLabel:
    """A Weyl-operator label: per-site shift part q and phase part p.

    The bare operator is Z(p)X(q) times chi(phase_exp).  Site letters in
    the printed name follow (q_j, p_j): I, X, Z, Y for (0,0), (1,0), (0,1),
    (1,1); for d=2 the (1,1) site operator is ZX = iY, not the Hermitian Y.
    """

    q: tuple[int, ...]
    p: tuple[int, ...]
    d: int = 2
    phase_exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(int(x) % self.d for x in self.q))
        object.__setattr__(self, "p", tuple(int(x) % self.d for x in self.p))
        if len(self.q) != len(self.p):
            raise DimensionMismatch("q and p length mismatch")

    @property
    def n(self) -> int:
        return len(self.q)

    @classmethod
    def from_point(cls, lam, d: int, phase_exp: int = 0) -> "PauliLabel":
        lam = tuple(int(x) % d for x in lam)
        return cls(lam[0::2], lam[1::2], d, phase_exp)

    def to_point(self) -> tuple[int, ...]:
        out = []
        for qj, pj in zip(self.q, self.p):
            out.extend((qj, pj))
        return tuple(out)

    def operator(self) -> np.ndarray:
        return chi(self.phase_exp, self.d) * pauli(self.q, self.p, self.d)

    def hermitian_operator(self) -> np.ndarray:
        """d=2 only: the Hermitian Pauli string (-i)^{q.p} Z(p)X(q)."""
        if self.d != 2:
            raise DimensionMismatch("hermitian form defined for d=2 only")
        w = sum(qj * pj for qj, pj in zip(self.q, self.p))
        return (-1j) ** (w % 4) * pauli(self.q, self.p, 2)

    def name(self) -> str:
        letters = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
        if self.d == 2:
            return "".join(letters[(qj, pj)] for qj, pj in zip(self.q, self.p))
        sites = []
        for qj, pj in zip(self.q, self.p):
            if qj == 0 and pj == 0:
                sites.append("I")
            else:
                part = ""
                if qj:
                    part += "X" if qj == 1 else f"X{qj}"
                if pj:
                    part += "Z" if pj == 1 else f"Z{pj}"
                sites.append(part)
        return ".".join(sites)


# ---------------------------------------------------------------------------
# named gates

_SQ2 = 1 / math.sqrt(2)

_QUBIT_GATES_1 = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, cmath.exp(1j * cmath.pi / 4)]], dtype=complex),
}
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
_CCZ = np.diag([1, 1, 1, 1, 1, 1, 1, -1]).astype(complex)


@lru_cache(maxsize=None)
def _qudit_gate_matrix(name: str, d: int) -> np.ndarray:
    if d == 2:
        table = {
            **{k: (v, 1) for k, v in _QUBIT_GATES_1.items()},
            "CNOT": (_CNOT, 2),
            "CX": (_CNOT, 2),
            "CZ": (_CZ, 2),
            "SWAP": (_SWAP, 2),
            "CCZ": (_CCZ, 3),
        }
    else:
        fourier = np.array(
            [[chi(j * k, d) for k in range(d)] for j in range(d)], dtype=complex
        ) / math.sqrt(d)
        shear = np.diag([chi(j * (j - 1) * pow(2, -1, d), d) for j in range(d)])
        summ = np.zeros((d * d, d * d), dtype=complex)
        for a in range(d):
            for b in range(d):
                summ[a * d + (a + b) % d, a * d + b] = 1.0
        swap = np.zeros((d * d, d * d), dtype=complex)
        for a in range(d):
            for b in range(d):
                swap[b * d + a, a * d + b] = 1.0
        table = {
            "X": (shift_x(1, d), 1),
            "Z": (phase_z(1, d), 1),
            "F": (fourier, 1),
            "P": (shear, 1),
            "SUM": (summ, 2),
            "CNOT": (summ, 2),
            "SWAP": (swap, 2),
        }
    if name not in table:
        raise CircuitParseError(f"unknown gate {name!r} for d={d}")
    mat, arity = table[name]
    out = np.array(mat, dtype=complex)
    out.setflags(write=False)
    return out


def gate_arity(name: str, d: int = 2) -> int:
    return int(round(math.log(len(_qudit_gate_matrix(name, d)), d)))


def embed(small: np.ndarray, wires: tuple[int, ...], n: int, d: int = 2) -> np.ndarray:
    """Embed a d^k x d^k operator acting on the given wires into n sites.

    Wire 0 is the most significant digit of the computational index.
    """
    _check_scale(n, d)
    k = len(wires)
    if len(set(wires)) != k:
        raise DimensionMismatch(f"wire collision in {wires}")
    if any(w < 0 or w >= n for w in wires):
        raise DimensionMismatch(f"wires {wires} outside 0..{n - 1}")
    if small.shape != (d**k, d**k):
        raise DimensionMismatch(f"operator shape {small.shape} != ({d**k}, {d**k})")
    dim = d**n
    op = small.reshape((d,) * (2 * k))
    cols = np.eye(dim, dtype=complex).reshape((d,) * n + (dim,))
    out = np.tensordot(op, cols, axes=(tuple(range(k, 2 * k)), wires))
    # out axes: k out-legs (in wire order), then untouched site axes, then batch
    rest = [ax for ax in range(n) if ax not in wires]
    perm = [0] * (n + 1)
    for i, w in enumerate(wires):
        perm[w] = i
    for i, ax in enumerate(rest):
        perm[ax] = k + i
    perm[n] = n
    return out.transpose(perm).reshape(dim, dim)


def gate(name: str, wires, n: int, d: int = 2) -> np.ndarray:
    """Named gate embedded on the given wires of an n-site register."""
    name = name.upper()
    wires = tuple(int(w) for w in wires)
    small = _qudit_gate_matrix(name, d)
    if len(wires) != gate_arity(name, d):
        raise DimensionMismatch(f"{name} takes {gate_arity(name, d)} wires, got {wires}")
    return embed(np.array(small), wires, n, d)


# ---------------------------------------------------------------------------
# states

def basis_state(digits, d: int = 2) -> np.ndarray:
    digits = tuple(int(x) for x in digits)
    _check_scale(len(digits), d)
    idx = 0
    for x in digits:
        idx = idx * d + (x % d)
    v = np.zeros(d ** len(digits), dtype=complex)
    v[idx] = 1.0
    return v


def plus_state(n: int, d: int = 2) -> np.ndarray:
    _check_scale(n, d)
    return np.full(d**n, 1 / math.sqrt(d**n), dtype=complex)


def states_equal(a: np.ndarray, b: np.ndarray, tol: float = ATOL_END2END) -> bool:
    """Equality up to global phase: |<a|b>| > 1 - tol for unit vectors."""
    if a.shape != b.shape:
        return False
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < tol or nb < tol:
        return na < tol and nb < tol
    return abs(np.vdot(a, b)) / (na * nb) > 1 - tol


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b)))


def canonical_phase(state: np.ndarray) -> np.ndarray:
    """Deterministic global-phase fix: largest-magnitude amplitude real > 0."""
    mags = np.abs(state)
    idx = int(np.argmax(mags - 1e-12 * np.arange(len(state))))
    if mags[idx] < ATOL_CONSTRUCT:
        return state.copy()
    return state * (mags[idx] / state[idx])


def num_sites(dim: int, d: int) -> int:
    n = int(round(math.log(dim, d)))
    if d**n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of {d}")
    return n


# ---------------------------------------------------------------------------
# stabilizer-style states

_PAULI_CHARS = {"I": np.eye(2, dtype=complex), **{k: _QUBIT_GATES_1[k] for k in "XYZ"}}


def pauli_string(s: str) -> tuple[int, np.ndarray]:
    """Parse a signed Hermitian Pauli string like '+XZ' or '-YY' (d=2).

    Returns (sign, matrix) with sign in {+1, -1}.
    """
    s = s.strip()
    sign = 1
    if s and s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        s = s[1:]
    if not s or any(c not in _PAULI_CHARS for c in s):
        raise CircuitParseError(f"bad Pauli string {s!r}")
    out = np.array([[1.0 + 0j]])
    for c in s:
        out = np.kron(out, _PAULI_CHARS[c])
    return sign, out


def weyl_char_projectors(op: np.ndarray, d: int) -> list[np.ndarray]:
    """Eigenprojectors of a unitary with op^d = I, indexed by the exponent k
    of the eigenvalue chi(k)."""
    dim = op.shape[0]
    powers = [np.eye(dim, dtype=complex)]
    for _ in range(d - 1):
        powers.append(powers[-1] @ op)
    if not np.allclose(powers[-1] @ op, np.eye(dim), atol=ATOL_CONSTRUCT * dim):
        raise InvalidGenerators("operator is not of order d")
    projs = []
    for k in range(d):
        P = sum(chi(-k * t, d) * powers[t] for t in range(d)) / d
        projs.append(P)
    return projs


def stabilizer_state(generators, d: int = 2, n: int | None = None) -> np.ndarray:
    """Joint eigenstate of commuting generalized-Pauli generators.

    Each generator is either a signed Hermitian Pauli string (d=2, e.g.
    '-XX') or a pair (label, k) with label a PauliLabel / interleaved point
    and k the eigenvalue exponent (eigenvalue chi(k)).  Returns the unique
    joint eigenvector when the set pins one state; returns the projector
    matrix for under-determined sets; raises InvalidGenerators for
    anticommuting, dependent, or inconsistent sets.
    """
    parsed: list[tuple[np.ndarray, np.ndarray]] = []  # (projector, operator)
    labels: list[tuple[int, ...]] = []
    for g in generators:
        if isinstance(g, str):
            sign, mat = pauli_string(g)
            if n is None:
                n = num_sites(mat.shape[0], d)
            proj = (np.eye(mat.shape[0]) + sign * mat) / 2
            parsed.append((proj, mat))
            lab = _pauli_string_label(g)
            labels.append(lab)
        else:
            label, k = g
            if not isinstance(label, PauliLabel):
                label = PauliLabel.from_point(label, d)
            if n is None:
                n = label.n
            if d == 2:
                # outcome k has eigenvalue (-1)^k of the Hermitian form
                mat = label.hermitian_operator()
                proj = (np.eye(mat.shape[0]) + (-1) ** (int(k) % 2) * mat) / 2
                parsed.append((proj, mat))
            else:
                mat = label.operator()
                projs = weyl_char_projectors(mat, d)
                parsed.append((projs[int(k) % d], mat))
            labels.append(label.to_point())
    if n is None:
        raise InvalidGenerators("empty generator set needs explicit n")
    dim = d**n
    for i in range(len(parsed)):
        for j in range(i + 1, len(parsed)):
            a, b = parsed[i][1], parsed[j][1]
            if not np.allclose(a @ b, b @ a, atol=ATOL_CONSTRUCT * dim):
                raise InvalidGenerators("generators do not commute")
    from . import _modmath as mm

    if labels:
        lab_mat = np.array(labels, dtype=np.int64)
        if mm.rank(lab_mat, d) != len(labels):
            raise InvalidGenerators("dependent generator set")
    rho = np.eye(dim, dtype=complex)
    for proj, _ in parsed:
        rho = rho @ proj
    tr = float(np.trace(rho).real)
    expected = dim / d ** len(parsed)
    if abs(tr - expected) > ATOL_CONSTRUCT * dim:
        raise InvalidGenerators(f"inconsistent generator signs (trace {tr})")
    if len(parsed) < n:
        return rho
    vals, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    state = vecs[:, -1]
    if abs(vals[-1] - 1.0) > 1e-9:
        raise InvalidGenerators("projector is not rank one")
    return canonical_phase(state)


def _pauli_string_label(s: str) -> tuple[int, ...]:
    s = s.strip().lstrip("+-")
    qp = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
    out = []
    for c in s:
        out.extend(qp[c])
    return tuple(out)


# ---------------------------------------------------------------------------
# measurement

def born(state: np.ndarray, projectors) -> list[tuple[float, np.ndarray]]:
    """Probabilities and renormalized collapsed states for a projective
    decomposition.  Raises on non-projective input."""
    dim = state.shape[0]
    total = np.zeros((dim, dim), dtype=complex)
    for P in projectors:
        if not np.allclose(P, P.conj().T, atol=ATOL_CONSTRUCT * dim):
            raise InvalidGenerators("measurement element not Hermitian")
        if not np.allclose(P @ P, P, atol=ATOL_CONSTRUCT * dim):
            raise InvalidGenerators("measurement element not idempotent")
        total += P
    if not np.allclose(total, np.eye(dim), atol=ATOL_CONSTRUCT * dim):
        raise InvalidGenerators("measurement elements do not sum to identity")
    out = []
    for P in projectors:
        collapsed = P @ state
        prob = float(np.vdot(collapsed, collapsed).real)
        if prob > ATOL_CONSTRUCT:
            collapsed = collapsed / math.sqrt(prob)
        out.append((prob, collapsed))
    assert abs(sum(p for p, _ in out) - 1.0) < ATOL_CONSTRUCT * dim
    return out


def measure_observable(state: np.ndarray, obs: np.ndarray):
    """Projective measurement of a Hermitian observable.

    Returns a list of (eigenvalue, probability, post_state) sorted by
    descending eigenvalue, eigenvalues merged within 1e-8.
    """
    dim = obs.shape[0]
    if not np.allclose(obs, obs.conj().T, atol=ATOL_CONSTRUCT * dim):
        raise InvalidGenerators("observable is not Hermitian")
    vals, vecs = np.linalg.eigh(obs)
    groups: list[tuple[float, list[int]]] = []
    for i, v in enumerate(vals):
        if groups and abs(groups[-1][0] - v) < 1e-8:
            groups[-1][1].append(i)
        else:
            groups.append((float(v), [i]))
    out = []
    for v, idxs in sorted(groups, key=lambda g: -g[0]):
        P = sum(np.outer(vecs[:, i], vecs[:, i].conj()) for i in idxs)
        collapsed = P @ state
        prob = float(np.vdot(collapsed, collapsed).real)
        if prob > ATOL_CONSTRUCT:
            collapsed = collapsed / math.sqrt(prob)
        out.append((v, prob, collapsed))
    return out


def basis_measurement_projectors(basis: str, wires, n: int, d: int = 2):
    """Projectors (indexed by outcome residue) for a MEAS instruction.

    The listed wires are measured jointly as one observable.  For d=2 the
    basis letters name the Hermitian Pauli string; outcome m has eigenvalue
    (-1)^m.  For d>2 letters are restricted to I/X/Z and the observable is
    the plain Weyl operator Z(p)X(q); outcome k has eigenvalue chi(k).
    """
    basis = basis.upper()
    if len(basis) != len(wires):
        raise CircuitParseError(f"basis {basis!r} does not fit wires {wires}")
    q = [0] * n
    p = [0] * n
    for c, w in zip(basis, wires):
        if c == "I":
            continue
        elif c == "X":
            q[w] = 1
        elif c == "Z":
            p[w] = 1
        elif c == "Y" and d == 2:
            q[w] = 1
            p[w] = 1
        else:
            raise CircuitParseError(f"basis letter {c!r} unsupported for d={d}")
    if d == 2:
        label = PauliLabel(tuple(q), tuple(p), 2)
        herm = label.hermitian_operator()
        eye = np.eye(2**n)
        return [(eye + herm) / 2, (eye - herm) / 2]
    op = pauli(q, p, d)
    return weyl_char_projectors(op, d)


# ---------------------------------------------------------------------------
# circuit execution

@dataclass
class Branch:
    outcomes: dict[str, int]
    prob: float
    state: np.ndarray

    @property
    def outcome_key(self) -> tuple[tuple[str, int], ...]:
        return tuple(sorted(self.outcomes.items()))


def run_circuit(
    circuit: Circuit,
    input_state: np.ndarray | None = None,
    d: int = 2,
    prune: float = 1e-12,
) -> list[Branch]:
    """Exhaustive branch tree for a circuit: no sampling anywhere.

    Returns one Branch per surviving outcome assignment, ordered by the
    outcome string in measurement order.  Branch probabilities sum to 1.
    """
    n = circuit.n_wires
    if input_state is not None:
        n = max(n, num_sites(input_state.shape[0], d))
    if n == 0:
        raise DimensionMismatch("empty circuit with no input state")
    _check_scale(n, d)
    if input_state is None:
        if circuit.init_spec is None:
            input_state = basis_state([0] * n, d)
        else:
            input_state = parse_state_spec(circuit.init_spec, d=d, n=n)
    if input_state.shape[0] != d**n:
        raise DimensionMismatch(
            f"input dim {input_state.shape[0]} != {d**n} for {n} wires"
        )
    branches = [Branch({}, 1.0, input_state.astype(complex))]
    for ins in circuit.instructions:
        if isinstance(ins, Gate):
            U = gate(ins.name, ins.wires, n, d)
            for br in branches:
                br.state = U @ br.state
        elif isinstance(ins, Measure):
            projs = basis_measurement_projectors(ins.basis, ins.wires, n, d)
            new_branches = []
            for br in branches:
                for k, P in enumerate(projs):
                    collapsed = P @ br.state
                    pk = float(np.vdot(collapsed, collapsed).real)
                    if pk <= prune:
                        continue
                    new_branches.append(
                        Branch(
                            {**br.outcomes, ins.var: k},
                            br.prob * pk,
                            collapsed / math.sqrt(pk),
                        )
                    )
            branches = new_branches
        elif isinstance(ins, Correct):
            U = gate(ins.name, ins.wires, n, d)
            for br in branches:
                times = eval_expr(ins.expr, br.outcomes, d)
                for _ in range(times):
                    br.state = U @ br.state
    total = sum(br.prob for br in branches)
    assert abs(total - 1.0) < ATOL_END2END, f"branch probabilities sum to {total}"
    return branches


def branch_distribution(branches: list[Branch]) -> dict[tuple[tuple[str, int], ...], float]:
    out: dict[tuple[tuple[str, int], ...], float] = {}
    for br in branches:
        out[br.outcome_key] = out.get(br.outcome_key, 0.0) + br.prob
    return out


# ---------------------------------------------------------------------------
# state-spec mini-language

_KET_RE = re.compile(r"^([A-Za-z]+)\|([0-9+\-]+)>$")
_SITE_RE = re.compile(r"([IXZY])([0-9]?)")


def _parse_generator_token(tok: str, d: int):
    tok = tok.strip()
    sign_exp = 0
    if tok and tok[0] in "+-":
        sign_exp = (d // 2) if tok[0] == "-" else 0  # only meaningful for d=2
        if tok[0] == "-" and d != 2:
            raise CircuitParseError("negative generator signs are d=2 only here")
        tok = tok[1:]
    if d == 2:
        if not tok or any(c not in "IXYZ" for c in tok):
            raise CircuitParseError(f"bad generator token {tok!r}")
        return ("pauli2", ("-" if sign_exp else "+") + tok, len(tok))
    sites = _SITE_RE.findall(tok)
    if "".join(a + b for a, b in sites) != tok or not sites:
        raise CircuitParseError(f"bad generator token {tok!r} for d={d}")
    q, p = [], []
    for letter, power in sites:
        e = int(power) if power else 1
        if letter == "I":
            q.append(0)
            p.append(0)
        elif letter == "X":
            q.append(e % d)
            p.append(0)
        elif letter == "Z":
            q.append(0)
            p.append(e % d)
        else:
            raise CircuitParseError(f"letter Y unsupported for d={d}")
    return ("weyl", (PauliLabel(tuple(q), tuple(p), d), 0), len(sites))


def parse_state_spec(spec: str, d: int = 2, n: int | None = None) -> np.ndarray:
    """Parse the state mini-language.

    Accepted forms:
      * ket literals: per-wire characters from 0..d-1 plus '+' (uniform
        superposition); for d=2 also '-'; e.g. "0", "+++", "01".
      * gate-applied kets: "T|+>", "CZ|++>", "CCZ|+++>".
      * signed generator strings: "+XX,+ZZ" (d=2: Hermitian Pauli strings),
        "X1X1,Z1Z2" (d>2: per-site X/Z powers; exponent-0 eigenstates).
    """
    spec = spec.strip()
    m = _KET_RE.match(spec)
    if m:
        name, ket = m.group(1).upper(), m.group(2)
        state = _ket_literal(ket, d)
        nk = num_sites(state.shape[0], d)
        U = gate(name, tuple(range(gate_arity(name, d))), nk, d)
        return U @ state
    if any(c in spec for c in "IXYZ"):
        gens = []
        width = None
        for tok in spec.split(","):
            kind, parsed, w = _parse_generator_token(tok, d)
            if width is None:
                width = w
            elif width != w:
                raise CircuitParseError("generator tokens of differing width")
            gens.append(parsed if kind != "pauli2" else parsed)
        result = stabilizer_state(gens, d=d, n=width)
        if result.ndim != 1:
            raise CircuitParseError(
                "generator string under-determines the state; add generators"
            )
        if n is not None and num_sites(result.shape[0], d) != n:
            raise CircuitParseError(f"state spec is not on {n} wires")
        return result
    state = _ket_literal(spec, d)
    if n is not None and num_sites(state.shape[0], d) != n:
        raise CircuitParseError(f"state spec is not on {n} wires")
    return state


def _ket_literal(ket: str, d: int) -> np.ndarray:
    if not ket:
        raise CircuitParseError("empty ket literal")
    site_vecs = []
    for c in ket:
        if c.isdigit():
            if int(c) >= d:
                raise CircuitParseError(f"digit {c} out of range for d={d}")
            v = np.zeros(d, dtype=complex)
            v[int(c)] = 1.0
        elif c == "+":
            v = np.full(d, 1 / math.sqrt(d), dtype=complex)
        elif c == "-" and d == 2:
            v = np.array([1, -1], dtype=complex) / math.sqrt(2)
        else:
            raise CircuitParseError(f"bad ket character {c!r} for d={d}")
        site_vecs.append(v)
    _check_scale(len(site_vecs), d)
    out = np.array([1.0 + 0j])
    for v in site_vecs:
        out = np.kron(out, v)
    return out
