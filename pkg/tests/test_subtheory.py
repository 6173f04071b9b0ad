import numpy as np
import pytest

from spektoy import dense_oracle as do
from spektoy import subtheory as stt
from spektoy import wigner as wg
from spektoy.errors import DimensionMismatch


class TestBeta:
    def test_zero_label_always_trivial(self):
        spec = wg.factorisable_rebit_spec(1)
        for lam in ((0, 0), (1, 0), (0, 1), (1, 1)):
            assert stt.beta((0, 0), lam, spec) == 0

    def test_rebit_ordering_asymmetry(self):
        spec = wg.factorisable_rebit_spec(1)
        assert stt.beta((1, 0), (0, 1), spec) == 1
        assert stt.beta((0, 1), (1, 0), spec) == 0

    def test_gross_random_pairs_against_dense(self):
        spec = wg.gross_spec(3, 1)
        rng = np.random.default_rng(1)
        for _ in range(20):
            l1 = tuple(rng.integers(0, 3, 2))
            l2 = tuple(rng.integers(0, 3, 2))
            b = stt.beta(l1, l2, spec)
            lhs = wg.weyl(l1, spec) @ wg.weyl(l2, spec)
            lsum = tuple((a + c) % 3 for a, c in zip(l1, l2))
            assert np.allclose(lhs, do.chi(b, 3) * wg.weyl(lsum, spec), atol=1e-12)

    def test_beta_vanishes_on_commuting_pairs_gross(self):
        spec = wg.gross_spec(3, 1)
        import itertools
        from spektoy import phase_algebra as pa

        for l1 in itertools.product(range(3), repeat=2):
            for l2 in itertools.product(range(3), repeat=2):
                if pa.symplectic_product(l1, l2, 3) == 0:
                    assert stt.beta(l1, l2, spec) == 0


class TestAllowedObservables:
    def test_rebit_n1(self):
        got = set(stt.allowed_observables(wg.factorisable_rebit_spec(1)))
        assert got == {(0, 0), (1, 0), (0, 1)}

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_rebit_equals_nonmixing_exactly(self, n):
        got = set(stt.allowed_observables(wg.delfosse_rebit_spec(n)))
        assert got == set(stt.nonmixing_labels(2, n))

    def test_y_type_labels_excluded(self):
        got = set(stt.allowed_observables(wg.delfosse_rebit_spec(2)))
        for bad in ((1, 1, 0, 0), (1, 1, 1, 1), (1, 0, 0, 1)):
            assert bad not in got

    def test_gross_criterion_vacuous(self):
        assert len(stt.allowed_observables(wg.gross_spec(3, 1))) == 9


class TestAllowedStates:
    def test_rebit_n1(self):
        states = stt.allowed_states(wg.factorisable_rebit_spec(1))
        assert len(states) == 4
        expected = [do.parse_state_spec(s) for s in ("0", "1", "+", "-")]
        for e in expected:
            assert any(do.states_equal(e, s) for s in states)

    def test_rebit_n2_css(self):
        states = stt.allowed_states(wg.delfosse_rebit_spec(2))
        assert len(states) == 20
        bell = do.stabilizer_state(["+XX", "+ZZ"])
        assert any(do.states_equal(bell, s) for s in states)
        iket = np.kron(do.parse_state_spec("S|+>"), do.basis_state([0]))
        assert not any(do.states_equal(iket, s) for s in states)
        for s in states:
            assert stt.is_css(s, 2)

    def test_gross_n1_all_twelve(self):
        assert len(stt.allowed_states(wg.gross_spec(3, 1))) == 12


class TestAllowedGates:
    def test_paulis_always_retained(self):
        kept = {g.label() for g, _ in stt.allowed_gates(wg.factorisable_rebit_spec(1))}
        assert {"X(0)", "Z(0)"} <= kept

    def test_single_site_hadamard_is_the_global_one_at_n1(self):
        kept = {g.label() for g, _ in stt.allowed_gates(wg.factorisable_rebit_spec(1))}
        assert "H(0)" in kept

    def test_s_rejected_by_closure(self):
        spec = wg.factorisable_rebit_spec(1)
        states = stt.allowed_states(spec)
        ok, idx = stt.permutes_states(do.gate("S", (0,), 1), states)
        assert not ok
        kept = {g.label() for g, _ in stt.allowed_gates(spec)}
        assert "S(0)" not in kept

    def test_n2_retention_and_rejection(self):
        kept = {g.label() for g, _ in stt.allowed_gates(wg.delfosse_rebit_spec(2))}
        assert {"CNOT(0,1)", "CNOT(1,0)", "SWAP(0,1)"} <= kept
        for bad in ("H(0)", "H(1)", "S(0)", "S(1)", "CZ(0,1)"):
            assert bad not in kept


class TestMinimalSubtheory:
    def test_n1_contents(self):
        sub = stt.minimal_rebit_subtheory(1)
        assert len(sub.states) == 4
        assert sub.gate_names() == ("X", "Z")

    def test_n2_swap_reachable_but_not_cz_hh_s(self):
        sub = stt.minimal_rebit_subtheory(2)
        group = stt.generated_gate_group([g.matrix for g in sub.gate_generators])
        assert stt.group_contains(group, do.gate("SWAP", (0, 1), 2))
        assert not stt.group_contains(group, do.gate("CZ", (0, 1), 2))
        hh = do.gate("H", (0,), 2) @ do.gate("H", (1,), 2)
        assert not stt.group_contains(group, hh)
        assert not stt.group_contains(group, do.gate("S", (0,), 2))

    def test_every_state_table_is_coset(self):
        for n in (1, 2):
            sub = stt.minimal_rebit_subtheory(n)
            for psi in sub.states:
                assert wg.is_coset_indicator(wg.wigner_of_state(psi, sub.spec))


class TestClosure:
    @pytest.mark.parametrize("n", [1, 2])
    def test_minimal_closed(self, n):
        ok, cex = stt.is_closed(stt.minimal_rebit_subtheory(n))
        assert ok and cex is None

    def test_adding_s_breaks_closure(self):
        base = stt.minimal_rebit_subtheory(1)
        sub = stt.Subtheory(
            "minimal+S",
            base.spec,
            base.states,
            base.gate_generators + (stt.GateGen("S", (0,), do.gate("S", (0,), 1)),),
            base.observables,
        )
        ok, cex = stt.is_closed(sub)
        assert not ok
        assert cex["gate"] == "S(0)"
        escaped = do.gate("S", (0,), 1) @ base.states[cex["state_index"]]
        assert not any(do.states_equal(escaped, s) for s in base.states)

    def test_gross_n1_closed(self):
        ok, _ = stt.is_closed(stt.qudit_stabilizer_subtheory(3, 1))
        assert ok


class TestCertificates:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_minimal_rebit_passes(self, n):
        rep = stt.is_spekkens_subtheory(stt.minimal_rebit_subtheory(n))
        assert rep["passed"], rep

    def test_css_with_global_hadamard_passes(self):
        rep = stt.is_spekkens_subtheory(stt.css_rebit_subtheory(2))
        assert rep["passed"], rep

    def test_full_qubit_stabilizer_fails(self):
        rep = stt.is_spekkens_subtheory(stt.full_qubit_stabilizer_subtheory(2))
        assert not rep["passed"]
        # the negativity witness is a real non-X/Z-split state
        assert rep["nonnegativity"]["state_witness"] is not None

    @pytest.mark.parametrize("n", [1, 2])
    def test_qudit_stabilizer_passes(self, n):
        rep = stt.is_spekkens_subtheory(stt.qudit_stabilizer_subtheory(3, n))
        assert rep["passed"], rep["covariance"]["failures"]

    def test_manifest_shape(self):
        sub = stt.minimal_rebit_subtheory(2)
        doc = sub.manifest(certificates={"closure": True})
        assert doc["spec"] == {"name": "delfosse-rebit", "d": 2, "n": 2}
        assert doc["state_count"] == 20
        assert "CNOT(0,1)" in doc["gate_generators"]
        assert doc["certificates"]["closure"] is True


class TestSubtheoryLookup:
    def test_names(self):
        assert stt.subtheory_by_name("minimal-rebit", 2).name == "minimal-rebit"
        assert stt.subtheory_by_name("css-rebit", 2).name == "css-rebit"
        assert stt.subtheory_by_name("gross", 1, 3).spec.name == "gross"
        with pytest.raises(DimensionMismatch):
            stt.subtheory_by_name("nonsense", 2)
