import itertools

import numpy as np
import pytest

from spektoy import dense_oracle as do
from spektoy import phase_algebra as pa
from spektoy import subtheory as stt
from spektoy import wigner as wg
from spektoy.errors import DimensionMismatch


I2 = np.eye(2)
X = do.gate("X", (0,), 1)
Y = do.gate("Y", (0,), 1)
Z = do.gate("Z", (0,), 1)


class TestWeyl:
    def test_origin_is_identity(self):
        for spec in (wg.factorisable_rebit_spec(1), wg.gross_spec(3, 1)):
            assert np.allclose(wg.weyl((0,) * 2, spec), np.eye(spec.d))

    def test_rebit_no_prefactor(self):
        spec = wg.delfosse_rebit_spec(1)
        assert np.allclose(wg.weyl((1, 1), spec), Z @ X)

    def test_gross_prefactor_sign(self):
        # with the minus shift convention the group-consistent prefactor is
        # chi(+2^{-1} q.p); chi(-2^{-1} q.p) breaks T(t mu) = T(mu)^t
        spec = wg.gross_spec(3, 1)
        inv2 = pow(2, -1, 3)
        expected = do.chi(inv2, 3) * do.pauli([1], [1], 3)
        assert np.allclose(wg.weyl((1, 1), spec), expected)

    @pytest.mark.parametrize("lam", list(itertools.product(range(3), repeat=2)))
    def test_gross_group_structure(self, lam):
        spec = wg.gross_spec(3, 1)
        T = wg.weyl(lam, spec)
        for t in range(3):
            scaled = tuple((t * x) % 3 for x in lam)
            assert np.allclose(
                np.linalg.matrix_power(T, t), wg.weyl(scaled, spec), atol=1e-12
            )

    def test_gross_requires_odd_d(self):
        with pytest.raises(DimensionMismatch):
            wg.gross_spec(2, 1)


class TestPhasePoint:
    def test_factorisable_origin(self):
        A = wg.phase_point((0, 0), wg.factorisable_rebit_spec(1))
        assert np.allclose(2 * A, I2 + X + Z + 1j * Y, atol=1e-12)

    def test_unit_trace_everywhere(self):
        for spec in (
            wg.factorisable_rebit_spec(2),
            wg.delfosse_rebit_spec(2),
            wg.gross_spec(3, 1),
        ):
            for lam in pa.all_points(spec.d, spec.n):
                assert abs(np.trace(wg.phase_point(lam, spec)) - 1) < 1e-12

    def test_factorisable_tensor_structure(self):
        one = wg.factorisable_rebit_spec(1)
        two = wg.factorisable_rebit_spec(2)
        for l1 in pa.all_points(2, 1):
            for l2 in pa.all_points(2, 1):
                assert np.allclose(
                    wg.phase_point(l1 + l2, two),
                    np.kron(wg.phase_point(l1, one), wg.phase_point(l2, one)),
                    atol=1e-12,
                )

    def test_restricted_label_set_n2(self):
        spec = wg.delfosse_rebit_spec(2)
        names = sorted(do.PauliLabel.from_point(l, 2).name() for l in spec.labels())
        assert names == sorted(
            ["II", "IX", "IZ", "XI", "ZI", "XX", "ZZ", "XZ", "ZX", "YY"]
        )

    def test_hermiticity(self):
        for lam in pa.all_points(2, 2):
            Ar = wg.phase_point(lam, wg.delfosse_rebit_spec(2))
            assert np.allclose(Ar, Ar.conj().T, atol=1e-12)
        for lam in pa.all_points(3, 1):
            Ag = wg.phase_point(lam, wg.gross_spec(3, 1))
            assert np.allclose(Ag, Ag.conj().T, atol=1e-12)
        Af = wg.phase_point((0, 0), wg.factorisable_rebit_spec(1))
        assert not np.allclose(Af, Af.conj().T, atol=1e-6)


class TestTables:
    def test_ground_state_both_rebit_specs(self):
        for spec in (wg.factorisable_rebit_spec(1), wg.delfosse_rebit_spec(1)):
            t = wg.wigner_of_state(do.basis_state([0]), spec)
            assert t.support() == ((0, 0), (0, 1))
            assert abs(t.value((0, 0)) - 0.5) < 1e-12

    def test_gross_ground_state(self):
        t = wg.wigner_of_state(do.basis_state([0], 3), wg.gross_spec(3, 1))
        assert t.support() == ((0, 0), (0, 1), (0, 2))
        assert abs(t.value((0, 1)) - 1 / 3) < 1e-12

    def test_tables_sum_to_one(self):
        rng = np.random.default_rng(0)
        for spec in (wg.factorisable_rebit_spec(2), wg.gross_spec(3, 1)):
            psi = rng.normal(size=spec.d**spec.n) + 1j * rng.normal(size=spec.d**spec.n)
            psi /= np.linalg.norm(psi)
            assert abs(wg.wigner_of_state(psi, spec).total() - 1) < 1e-9

    def test_cz_resource_state_is_negative(self):
        spec = wg.delfosse_rebit_spec(2)
        t = wg.wigner_of_state(do.parse_state_spec("CZ|++>"), spec)
        ok, offending = wg.is_nonnegative(t)
        assert not ok and len(offending) == 4

    def test_double_t_magic_is_negative(self):
        spec = wg.delfosse_rebit_spec(2)
        tt = np.kron(do.parse_state_spec("T|+>"), do.parse_state_spec("T|+>"))
        assert not wg.is_nonnegative(wg.wigner_of_state(tt, spec))[0]

    def test_single_site_magic_is_invisible_at_n1(self):
        # the Y component of a single qubit does not couple to the n=1
        # Hermitian labels {I, X, Z}: these tables are non-negative
        spec = wg.delfosse_rebit_spec(1)
        for s in ("T|+>", "S|+>"):
            t = wg.wigner_of_state(do.parse_state_spec(s), spec)
            assert wg.is_nonnegative(t)[0]

    def test_y_eigenstate_under_factorisable_has_imag_residue(self):
        spec = wg.factorisable_rebit_spec(1)
        t = wg.wigner_of_state(do.parse_state_spec("S|+>"), spec)
        assert t.imag_residue > 0.2
        ok, offending = wg.is_nonnegative(t)
        assert not ok
        assert any(p == ("imag_residue",) for p, _ in offending)

    def test_epistemic_coset_tables_nonnegative(self):
        spec = wg.delfosse_rebit_spec(2)
        for psi in stt.minimal_rebit_subtheory(2).states:
            t = wg.wigner_of_state(psi, spec)
            assert wg.is_nonnegative(t)[0]
            assert wg.is_coset_indicator(t)


class TestMeasurementDuality:
    def test_identity_gives_uniform(self):
        spec = wg.factorisable_rebit_spec(1)
        t = wg.wigner_of_measurement(np.eye(2) / 2, spec)
        assert np.allclose(t.values, 0.25)

    def test_rank1_projector_matches_state_table(self):
        spec = wg.factorisable_rebit_spec(1)
        psi = do.basis_state([0])
        t_state = wg.wigner_of_state(psi, spec)
        t_meas = wg.wigner_of_measurement(np.outer(psi, psi.conj()), spec)
        assert np.allclose(t_state.values, t_meas.values, atol=1e-12)

    def test_bell_projector_table(self):
        spec = wg.delfosse_rebit_spec(2)
        bell = do.stabilizer_state(["+XX", "+ZZ"])
        t = wg.wigner_of_measurement(np.outer(bell, bell.conj()), spec)
        assert wg.is_nonnegative(t)[0]
        assert len(t.support()) == 4


class TestHudsonDichotomy:
    """The real-amplitude census: non-negativity picks out exactly the
    X/Z-split states among real stabilizer states; complex stabilizer
    states have coarse-grained (mixture) tables that stay non-negative but
    are never sharp cosets."""

    def test_real_state_dichotomy_n2(self):
        spec = wg.delfosse_rebit_spec(2)
        reals = [s for s in stt.all_stabilizer_states(2, 2) if stt.is_real_state(s)]
        assert len(reals) == 24
        for psi in reals:
            nonneg = wg.is_nonnegative(wg.wigner_of_state(psi, spec))[0]
            assert nonneg == stt.is_css(psi, 2)

    def test_css_and_sharpness_over_all_sixty(self):
        spec = wg.delfosse_rebit_spec(2)
        states = stt.all_stabilizer_states(2, 2)
        assert len(states) == 60
        for psi in states:
            t = wg.wigner_of_state(psi, spec)
            sharp_and_nonneg = (
                wg.is_nonnegative(t)[0] and len(t.support()) == 4
            )
            assert sharp_and_nonneg == stt.is_css(psi, 2)

    def test_complex_states_have_mixture_tables(self):
        spec = wg.delfosse_rebit_spec(2)
        for psi in stt.all_stabilizer_states(2, 2):
            if stt.is_real_state(psi):
                continue
            t = wg.wigner_of_state(psi, spec)
            assert wg.is_nonnegative(t)[0]
            assert len(t.support()) == 8  # twice the sharp support


class TestCovariance:
    def test_identity_witness(self):
        spec = wg.factorisable_rebit_spec(1)
        states = [do.parse_state_spec(s) for s in ("0", "1", "+", "-")]
        g = wg.fit_covariance(np.eye(2, dtype=complex), spec, states)
        assert np.array_equal(g.S, np.eye(2, dtype=np.int64)) and not g.a.any()

    def test_cnot_witness_exists_delfosse(self):
        spec = wg.delfosse_rebit_spec(2)
        css = stt.minimal_rebit_subtheory(2).states
        g = wg.fit_covariance(do.gate("CNOT", (0, 1), 2), spec, css)
        assert g is not None
        assert wg.verify_covariance(do.gate("CNOT", (0, 1), 2), spec, css, g)

    def test_s_gate_has_no_witness_on_minimal_states(self):
        states = [do.parse_state_spec(s) for s in ("0", "1", "+", "-")]
        for spec in (wg.factorisable_rebit_spec(1), wg.delfosse_rebit_spec(1)):
            assert wg.fit_covariance(do.gate("S", (0,), 1), spec, states) is None

    def test_transport_agrees_with_exhaustive(self):
        spec = wg.delfosse_rebit_spec(2)
        css = stt.minimal_rebit_subtheory(2).states
        for name, wires in (("X", (0,)), ("Z", (1,)), ("CNOT", (0, 1))):
            U = do.gate(name, wires, 2)
            g1 = wg.phase_space_action(U, spec)
            assert g1 is not None
            assert wg.verify_covariance(U, spec, css, g1)
            g2 = wg.fit_covariance(U, spec, css)
            assert wg.verify_covariance(U, spec, css, g2)

    def test_gross_generators_pass_n1(self):
        spec = wg.gross_spec(3, 1)
        states = stt.all_stabilizer_states(3, 1)
        for name in ("F", "P", "X", "Z"):
            assert wg.fit_covariance(do.gate(name, (0,), 1, 3), spec, states) is not None


class TestTransitionMatrices:
    def test_identity_is_identity_permutation(self):
        spec = wg.factorisable_rebit_spec(1)
        states = [do.parse_state_spec(s) for s in ("0", "1", "+", "-")]
        tm = wg.transition_matrix(np.eye(2, dtype=complex), spec, states)
        assert np.allclose(tm.matrix, np.eye(4))

    def test_x_gate_translation(self):
        spec = wg.factorisable_rebit_spec(1)
        states = [do.parse_state_spec(s) for s in ("0", "1", "+", "-")]
        tm = wg.transition_matrix(do.gate("X", (0,), 1), spec, states)
        assert tm.is_permutation()
        assert not np.allclose(tm.matrix, np.eye(4))

    def test_cnot_16x16_permutation(self):
        spec = wg.delfosse_rebit_spec(2)
        css = stt.minimal_rebit_subtheory(2).states
        tm = wg.transition_matrix(do.gate("CNOT", (0, 1), 2), spec, css)
        assert tm.matrix.shape == (16, 16)
        assert tm.is_permutation()

    def test_no_witness_raises(self):
        spec = wg.delfosse_rebit_spec(1)
        states = [do.parse_state_spec(s) for s in ("0", "1", "+", "-")]
        with pytest.raises(DimensionMismatch):
            wg.transition_matrix(do.gate("S", (0,), 1), spec, states)


class TestHermitianPartEquivalence:
    def test_hermitian_input_unchanged(self):
        assert np.allclose(wg.hermitian_part(X), X)

    def test_single_site_example(self):
        Af = wg.phase_point((0, 0), wg.factorisable_rebit_spec(1))
        assert np.allclose(2 * wg.hermitian_part(Af), I2 + X + Z, atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_equivalence_report(self, n):
        rep = wg.verify_hermitian_equivalence(n)
        assert rep["operator_identity"]
        assert rep["table_agreement"]
        assert rep["hermitian_criterion"]
        assert rep["counterexamples"] == []

    def test_css_state_count_n2(self):
        assert wg.verify_hermitian_equivalence(2)["css_state_count"] == 20

    def test_hermiticity_criterion_instance(self):
        # Z on wire 0 times X on wire 1: q.p = 0, Hermitian
        T = wg.weyl((0, 1, 1, 0), wg.factorisable_rebit_spec(2))
        assert np.allclose(T, T.conj().T, atol=1e-12)


class TestGrossStabilizerTables:
    @pytest.mark.parametrize("n", [1, 2])
    def test_all_tables_are_sharp_cosets(self, n):
        spec = wg.gross_spec(3, n)
        for psi in stt.all_stabilizer_states(3, n):
            t = wg.wigner_of_state(psi, spec)
            assert wg.is_nonnegative(t)[0]
            assert wg.is_coset_indicator(t)
            assert len(t.support()) == 3**n

    def test_random_gate_compositions_stay_covariant(self):
        spec = wg.gross_spec(3, 1)
        states = stt.all_stabilizer_states(3, 1)
        rng = np.random.default_rng(9)
        names = ["F", "P", "X", "Z"]
        for _ in range(10):
            U = np.eye(3, dtype=complex)
            for _ in range(5):
                U = do.gate(names[rng.integers(0, 4)], (0,), 1, 3) @ U
            assert wg.fit_covariance(U, spec, states) is not None


class TestLargerPrime:
    """d=5 smoke: the odd-d construction is not hard-wired to d=3."""

    def test_single_site_tables_and_covariance(self):
        spec = wg.gross_spec(5, 1)
        states = stt.all_stabilizer_states(5, 1)
        assert len(states) == 30
        for psi in states:
            t = wg.wigner_of_state(psi, spec)
            assert wg.is_nonnegative(t)[0]
            assert wg.is_coset_indicator(t)
            assert len(t.support()) == 5
        for name in ("F", "P", "X", "Z"):
            assert wg.fit_covariance(do.gate(name, (0,), 1, 5), spec, states) is not None


class TestDualRouteCssEnumeration:
    """The subspace-pair construction and the observable-recipe route must
    enumerate the same states."""

    @pytest.mark.parametrize("n", [1, 2])
    def test_same_state_sets(self, n):
        via_recipe = stt.allowed_states(wg.delfosse_rebit_spec(n))
        via_pairs = wg.css_states(n)
        assert len(via_recipe) == len(via_pairs)
        for psi in via_pairs:
            assert any(do.states_equal(psi, s) for s in via_recipe)

    def test_counts(self):
        assert len(wg.css_states(1)) == 4
        assert len(wg.css_states(2)) == 20
        assert len(wg.css_states(3)) == 128
