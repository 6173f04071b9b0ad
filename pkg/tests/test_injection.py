import math

import numpy as np
import pytest

from spektoy import dense_oracle as do
from spektoy import injection as inj
from spektoy.errors import DimensionMismatch


class TestCorrectionClassification:
    def test_z_corrections_are_pauli(self):
        scheme = inj.scheme_for("Z")
        assert {c.kind for c in scheme.corrections.values()} == {"pauli"}
        assert scheme.corrections[(1,)].name == "X"  # ZXZ = -X up to phase

    def test_s_correction_is_pauli_y(self):
        scheme = inj.scheme_for("S")
        corr = scheme.corrections[(1,)]
        assert corr.kind == "pauli" and corr.name == "Y"
        # realized as X then Z on the same wire (the phase is global)
        assert set(corr.factors) == {("X", (0,)), ("Z", (0,))}

    def test_cz_correction_table(self):
        scheme = inj.scheme_for("CZ")
        names = {"".join(map(str, m)): c.name for m, c in scheme.corrections.items()}
        assert names == {"00": "II", "01": "ZX", "10": "XZ", "11": "YY"}
        assert all(c.kind == "pauli" for c in scheme.corrections.values())

    def test_ccz_single_bit_corrections_carry_cz(self):
        scheme = inj.scheme_for("CCZ")
        assert scheme.corrections[(1, 0, 0)].name == "XII*CZ(1,2)"
        assert scheme.corrections[(0, 1, 0)].name == "IXI*CZ(0,2)"
        assert scheme.corrections[(0, 0, 1)].name == "IIX*CZ(0,1)"
        assert scheme.corrections[(1, 0, 0)].kind == "pauli-cz"

    def test_t_correction_flagged_non_clifford(self):
        scheme = inj.scheme_for("T")
        assert scheme.corrections[(1,)].kind == "non-clifford"
        # the operator is (X + Y)/sqrt(2)
        X, Y = do.gate("X", (0,), 1), do.gate("Y", (0,), 1)
        assert np.allclose(
            scheme.corrections[(1,)].operator, (X + Y) / math.sqrt(2), atol=1e-12
        )

    def test_corrections_are_exact_conjugations(self):
        import itertools

        for name in ("Z", "S", "CZ", "CCZ", "T"):
            scheme = inj.scheme_for(name)
            n = scheme.n
            for m in itertools.product((0, 1), repeat=n):
                Xm = np.eye(2**n, dtype=complex)
                for j, mj in enumerate(m):
                    if mj:
                        Xm = Xm @ do.gate("X", (j,), n)
                expect = scheme.target @ Xm @ scheme.target.conj().T
                assert np.allclose(scheme.corrections[m].operator, expect, atol=1e-12)

    def test_non_diagonal_rejected(self):
        with pytest.raises(DimensionMismatch):
            inj.build_injection(do.gate("H", (0,), 1), 1)


class TestRunInjection:
    def test_s_on_plus(self):
        recs = inj.run_injection(inj.scheme_for("S"), do.plus_state(1))
        assert len(recs) == 2
        assert all(r.fidelity >= 1 - 1e-9 for r in recs)
        assert abs(sum(r.probability for r in recs) - 1) < 1e-12

    def test_cz_branch_example(self):
        # outcomes x=1, y=-1 <-> bits (0, 1): the applied correction is the
        # conjugated IX flip, i.e. Z on wire 0 and X on wire 1
        recs = inj.run_injection(inj.scheme_for("CZ"), do.plus_state(2))
        by_m = {r.outcomes: r for r in recs}
        assert by_m[(0, 1)].correction == "ZX"
        target = do.gate("CZ", (0, 1), 2) @ do.plus_state(2)
        for r in recs:
            assert r.fidelity >= 1 - 1e-9
            assert do.states_equal(r.final_state, target)

    def test_ccz_diagonal_eigenstate(self):
        recs = inj.run_injection(
            inj.scheme_for("CCZ"), do.basis_state([1, 1, 0]),
            injected=frozenset({"CZ"}),
        )
        assert len(recs) == 8
        for r in recs:
            assert r.fidelity >= 1 - 1e-9
            assert do.states_equal(r.final_state, do.basis_state([1, 1, 0]))

    @pytest.mark.parametrize("name", ["Z", "S", "CZ", "CCZ"])
    def test_random_inputs_every_branch(self, name):
        scheme = inj.scheme_for(name)
        rng = np.random.default_rng(hash(name) % 2**32)
        dim = 2**scheme.n
        for _ in range(10):
            psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            psi /= np.linalg.norm(psi)
            recs = inj.run_injection(
                scheme, psi, injected=frozenset({"CZ"})
            )
            assert len(recs) == dim
            assert all(r.fidelity >= 1 - 1e-9 for r in recs)

    def test_t_gate_branches_verified_but_flagged(self):
        audit = inj.AuditTrail()
        recs = inj.run_injection(inj.scheme_for("T"), do.plus_state(1), audit=audit)
        assert all(r.fidelity >= 1 - 1e-9 for r in recs)
        assert not audit.report()["clean"]
        assert any("non-clifford" in v for v in audit.report()["violations"])

    def test_uniform_branch_probabilities(self):
        recs = inj.run_injection(inj.scheme_for("CZ"), do.plus_state(2))
        assert all(abs(r.probability - 0.25) < 1e-12 for r in recs)


class TestAudits:
    def test_cz_injection_is_host_clean(self):
        audit = inj.AuditTrail()
        inj.run_injection(inj.scheme_for("CZ"), do.plus_state(2), audit=audit)
        rep = audit.report()
        assert rep["clean"]
        assert set(rep["elements"]) <= {"CNOT", "X", "Z", "MEAS Z", "RESOURCE CZ|+>^2"}

    def test_ccz_without_cz_permission_is_flagged(self):
        audit = inj.AuditTrail()
        inj.run_injection(inj.scheme_for("CCZ"), do.plus_state(3), audit=audit)
        assert "CZ" in audit.report()["violations"]

    def test_ccz_with_cz_permission_is_tier2(self):
        audit = inj.AuditTrail()
        inj.run_injection(
            inj.scheme_for("CCZ"), do.plus_state(3),
            injected=frozenset({"CZ"}), audit=audit,
        )
        rep = audit.report()
        assert rep["clean"]
        assert rep["tier2_gates"]["CZ"] == 12

    def test_minimality_probe(self):
        probe = inj.minimality_probe()
        assert set(probe) == {"CNOT", "X", "Z", "Z-measurement", "X-observables"}
        for element, entry in probe.items():
            assert entry["breaks"], element
            assert entry["violations"], element


class TestHadamardFromCZ:
    @pytest.mark.parametrize(
        "spec_str",
        ["0", "+", None],
    )
    def test_outputs_match_hadamard(self, spec_str):
        if spec_str is None:
            psi = np.array([1, 1j]) / math.sqrt(2)
        else:
            psi = do.parse_state_spec(spec_str)
        recs, audit = inj.hadamard_via_cz(psi)
        assert len(recs) == 2
        assert all(r.fidelity >= 1 - 1e-9 for r in recs)
        assert audit.report()["clean"]

    def test_ground_state_gives_plus(self):
        recs, _ = inj.hadamard_via_cz(do.basis_state([0]))
        for r in recs:
            assert do.states_equal(r.final_state, do.plus_state(1))

    def test_plus_gives_ground_state(self):
        recs, _ = inj.hadamard_via_cz(do.plus_state(1))
        for r in recs:
            assert do.states_equal(r.final_state, do.basis_state([0]))

    def test_fully_injected_variant(self):
        recs, audit = inj.hadamard_via_cz(do.basis_state([0]), use_injected_cz=True)
        assert len(recs) == 8
        assert all(r.fidelity >= 1 - 1e-9 for r in recs)
        assert audit.report()["clean"]
        assert "RESOURCE CZ|+>^2" in audit.report()["elements"]


class TestCCZPipeline:
    def test_plus_input_thirty_two_leaves(self):
        rep = inj.ccz_scheme_demo(do.plus_state(3))
        assert rep["leaf_count"] == 32
        assert rep["cz_branches"] == 4 and rep["ccz_branches"] == 8
        assert rep["all_leaves_match_target"]
        assert rep["min_fidelity"] >= 1 - 1e-9
        assert rep["audit"]["clean"]

    def test_all_ones_eigenstate(self):
        rep = inj.ccz_scheme_demo(do.basis_state([1, 1, 1]))
        assert rep["all_leaves_match_target"]

    def test_correction_table_names_the_caption_instance(self):
        # outcomes (-1, 1, 1) <-> bits (1, 0, 0): X on wire 0, CZ on (1, 2)
        rep = inj.ccz_scheme_demo(do.plus_state(3))
        assert rep["correction_table"]["100"] == "XII*CZ(1,2)"

    def test_resources_consumed(self):
        rep = inj.ccz_scheme_demo(do.plus_state(3))
        assert rep["resources"] == {"CZ|+>^2": 1, "CCZ|+>^3": 1}
        assert rep["cz_applications_in_corrections"] == 12


class TestCompletionChain:
    def test_full_chain(self):
        rep = inj.clifford_completion_demo()
        assert rep["passed"], rep
        assert rep["chain"] == ["CZ", "H", "S"]
        assert rep["single_qubit_clifford_order"] == 24
        steps = {s["step"]: s for s in rep["steps"]}
        assert steps["inject-CZ"]["corrections_host_native"]
        assert steps["inject-S"]["correction_name"] == "Y"
        assert all(v["verified"] for v in rep["unlocked_observables"].values())
        assert rep["unlocked_observables"]["CZ.XI.CZ"]["equals"] == "XZ"
        assert rep["unlocked_observables"]["CZ.IX.CZ"]["equals"] == "ZX"
        assert rep["unlocked_observables"]["CZ.XX.CZ"]["equals"] == "YY"
