import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from conftest import bell_dm
from qdiscord.entropy import (
    CUBIC,
    LINEAR,
    VON_NEUMANN,
    EntropyKind,
    entropy,
    f_derivative,
    f_second,
    f_value,
    spectral_entropy,
)
from qdiscord.errors import DomainError, InvalidStateError
from qdiscord.states import partial_trace, random_density_matrix

KINDS = [VON_NEUMANN, LINEAR, CUBIC, EntropyKind.tsallis(0.5), EntropyKind.tsallis(2.5)]


class TestFValue:
    @pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.label)
    def test_boundaries_and_normalization(self, kind):
        assert f_value(kind, 0.0) == 0.0
        assert f_value(kind, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert f_value(kind, 0.5) == pytest.approx(0.5, abs=1e-15)

    def test_formulas(self):
        p = 0.3
        assert f_value(VON_NEUMANN, p) == pytest.approx(-p * np.log2(p))
        assert f_value(LINEAR, p) == pytest.approx(2 * p * (1 - p))
        assert f_value(CUBIC, p) == pytest.approx((p - p**3) / 0.75)

    @pytest.mark.parametrize("delta", [-1e-4, 1e-4, -1e-6, 1e-6])
    def test_tsallis_limit(self, delta):
        # f_q = f_vN (1 + delta (ln p + ln 2)/2) + O(delta^2) with q = 1 + delta
        p = 0.3
        fvn = f_value(VON_NEUMANN, p)
        first_order = fvn * (1 + delta * (np.log(p) + np.log(2)) / 2)
        assert f_value(EntropyKind.tsallis(1 + delta), p) == pytest.approx(first_order, abs=1e-8)
        if abs(delta) <= 1e-6:
            assert f_value(EntropyKind.tsallis(1 + delta), p) == pytest.approx(fvn, abs=1e-6)

    def test_tsallis_two_is_linear(self):
        p = np.linspace(0, 1, 41)
        assert_allclose(f_value(EntropyKind.tsallis(2.0), p), f_value(LINEAR, p), atol=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            f_value(LINEAR, 1.1)
        with pytest.raises(DomainError):
            f_value(LINEAR, -0.01)

    def test_invalid_kinds(self):
        with pytest.raises(DomainError):
            EntropyKind.tsallis(1.0)
        with pytest.raises(DomainError):
            EntropyKind.tsallis(-2.0)
        with pytest.raises(DomainError):
            EntropyKind("renyi")

    def test_parse(self):
        assert EntropyKind.parse("vonNeumann") == VON_NEUMANN
        assert EntropyKind.parse("linear") == LINEAR
        assert EntropyKind.parse("tsallis:3") == CUBIC

    @pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.label)
    def test_strict_concavity(self, kind):
        p = np.linspace(0.01, 0.99, 99)
        assert np.all(f_second(kind, p) < 0)


class TestFDerivative:
    @pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.label)
    @pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.77])
    def test_finite_difference(self, kind, p):
        h = 1e-6
        fd = (f_value(kind, p + h) - f_value(kind, p - h)) / (2 * h)
        assert f_derivative(kind, p) == pytest.approx(fd, abs=1e-6)

    def test_linear_at_half(self):
        assert f_derivative(LINEAR, 0.5) == 0.0

    def test_cubic(self):
        for p in (0.0, 0.2, 0.9):
            assert f_derivative(CUBIC, p) == pytest.approx((1 - 3 * p * p) / 0.75)

    def test_von_neumann_diverges_at_zero(self):
        with pytest.raises(DomainError):
            f_derivative(VON_NEUMANN, 0.0)

    @pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.label)
    def test_second_derivative(self, kind):
        h = 1e-5
        for p in (0.2, 0.6):
            fd = (f_derivative(kind, p + h) - f_derivative(kind, p - h)) / (2 * h)
            assert f_second(kind, p) == pytest.approx(fd, rel=1e-6)


class TestEntropy:
    @pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.label)
    def test_pure_is_zero(self, kind):
        assert entropy(kind, bell_dm()) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_two_qubits(self):
        rho = np.eye(4) / 4
        assert entropy(VON_NEUMANN, rho) == pytest.approx(2.0)
        assert entropy(LINEAR, rho) == pytest.approx(1.5)
        # 4 f(1/4) = 4 (1/4 - 1/64) / (3/4)
        assert entropy(CUBIC, rho) == pytest.approx(1.25)

    def test_bell_marginal(self):
        assert entropy(VON_NEUMANN, partial_trace(bell_dm(), (2, 2), "B")) == pytest.approx(1.0)

    def test_invalid_state(self):
        with pytest.raises(InvalidStateError):
            entropy(LINEAR, np.diag([1.2, -0.2]))

    @pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.label)
    def test_concavity(self, kind, rng):
        for _ in range(20):
            r1, r2 = random_density_matrix(4, rng), random_density_matrix(4, rng, rank=1)
            t = rng.uniform()
            mix = entropy(kind, t * r1 + (1 - t) * r2)
            assert mix >= t * entropy(kind, r1) + (1 - t) * entropy(kind, r2) - 1e-10

    @pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.label)
    def test_permutation_invariance(self, kind, rng):
        p = rng.dirichlet(np.ones(5))
        assert spectral_entropy(kind, p) == spectral_entropy(kind, np.sort(p))

    @pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.label)
    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**31))
    def test_majorization_monotonicity(self, kind, seed):
        # averaging by a doubly stochastic matrix yields p' majorized by p
        rng = np.random.default_rng(seed)
        p = rng.dirichlet(np.ones(4))
        perms = [rng.permutation(4) for _ in range(3)]
        w = rng.dirichlet(np.ones(3))
        ds = sum(wi * np.eye(4)[perm] for wi, perm in zip(w, perms))
        q = ds @ p
        assert spectral_entropy(kind, q) >= spectral_entropy(kind, p) - 1e-12
