import math

import numpy as np
import pytest

from qrenyi.channels import (CqChannel, as_distribution, capacity_infinity, check_alpha_range,
                             chi_alpha, chi_infinity_form2, divergence_radius, holevo_quantity,
                             lifted_state, output_state, pinched_product_channel, product_channel,
                             product_distribution, renyi_capacity, sibson_minimizer, sibson_value)
from qrenyi.divergences import FLAT, PETZ, SANDWICHED, d_alpha, q_alpha
from qrenyi.errors import (DimensionCap, DimensionMismatch, InputError, InvalidAlphaRange,
                           UnknownLabel, UnsupportedAlphaVariant)
from qrenyi.operators import tensor
from qrenyi.sampling import random_state

# mpmath oracles (tests/oracles/generate_oracles.py)
BSC_HOLEVO = 0.3680642071684971
CLASSICAL_W = [[0.8, 0.2], [0.3, 0.7]]
CLASSICAL_P = [0.35, 0.65]
CLASSICAL_MI = {0.5: 0.06384651775623464, 2: 0.20535760281511262, 3: 0.26157746436352614}


def bsc(eps=0.1):
    return CqChannel.from_states([np.diag([1 - eps, eps]), np.diag([eps, 1 - eps])], ["0", "1"])


def random_channel(rng, k=2, d=2):
    return CqChannel.from_states([random_state(d, rng=rng) for _ in range(k)])


class TestChannelBasics:
    def test_labels_and_lookup(self):
        W = bsc()
        assert W["1"][0, 0] == pytest.approx(0.1)
        with pytest.raises(UnknownLabel):
            W["2"]

    def test_rejects_mixed_dimensions(self):
        with pytest.raises(DimensionMismatch):
            CqChannel.from_states([np.eye(2) / 2, np.eye(3) / 3])

    def test_distribution_forms(self):
        W = bsc()
        assert np.allclose(as_distribution(W), [0.5, 0.5])
        assert np.allclose(as_distribution(W, {"1": 0.25, "0": 0.75}), [0.75, 0.25])
        with pytest.raises(InputError):
            as_distribution(W, [0.5, 0.6])
        with pytest.raises(UnknownLabel):
            as_distribution(W, {"x": 1.0})

    def test_lifted_state_marginals(self, rng):
        W = random_channel(rng, k=3)
        L = lifted_state(W, [0.2, 0.3, 0.5])
        assert np.allclose(L.classical_marginal(), np.diag([0.2, 0.3, 0.5]))
        assert np.allclose(L.quantum_marginal(), output_state(W, [0.2, 0.3, 0.5]))

    def test_alpha_ranges(self):
        check_alpha_range(2.0, PETZ)
        check_alpha_range(0.5, SANDWICHED)
        with pytest.raises(InvalidAlphaRange):
            check_alpha_range(2.5, PETZ)
        with pytest.raises(InvalidAlphaRange):
            check_alpha_range(0.4, SANDWICHED)
        with pytest.raises(InvalidAlphaRange):
            check_alpha_range(1.0, FLAT)


class TestHolevo:
    def test_bsc(self):
        assert math.isclose(holevo_quantity(bsc()), BSC_HOLEVO, rel_tol=1e-12)

    def test_noiseless_and_constant(self):
        W = CqChannel.from_states([np.diag([1.0, 0]), np.diag([0, 1.0])])
        assert math.isclose(holevo_quantity(W), math.log(2), rel_tol=1e-12)
        same = CqChannel.from_states([np.eye(2) / 2] * 3)
        assert abs(holevo_quantity(same)) < 1e-12

    def test_equals_mutual_information_of_lifted_state(self, rng):
        W = random_channel(rng, k=3)
        P = [0.1, 0.6, 0.3]
        L = lifted_state(W, P)
        prod = tensor(L.classical_marginal(), L.quantum_marginal())
        assert math.isclose(holevo_quantity(W, P), d_alpha(L.joint, prod, 1), rel_tol=1e-9)


class TestChi:
    # petz at alpha = 3 lies outside its convex range
    @pytest.mark.parametrize("alpha,variant", [(a, v) for a in sorted(CLASSICAL_MI)
                                               for v in (PETZ, SANDWICHED, FLAT)
                                               if not (v is PETZ and a > 2)])
    def test_classical_channel(self, alpha, variant):
        W = CqChannel.from_states([np.diag(r) for r in CLASSICAL_W])
        res = chi_alpha(W, CLASSICAL_P, alpha, variant, 1)
        assert abs(res.value - CLASSICAL_MI[alpha]) < 1e-7

    def test_block_identity(self, rng):
        # Q(rho_XB || P (x) sigma) splits into sum_x P(x) Q(W(x) || sigma)
        W = random_channel(rng, k=3)
        P = np.array([0.2, 0.5, 0.3])
        L = lifted_state(W, P)
        for variant in (PETZ, SANDWICHED, FLAT):
            for _ in range(5):
                sigma = random_state(2, rng=rng)
                lhs = q_alpha(L.joint, tensor(np.diag(P), sigma), 2.0, variant)
                rhs = sum(p * q_alpha(S, sigma, 2.0, variant) for p, S in zip(P, W.outputs))
                assert math.isclose(lhs, rhs, rel_tol=1e-9)

    def test_optimum_beats_probes(self, rng):
        W = random_channel(rng, k=2)
        res = chi_alpha(W, [0.4, 0.6], 2.0, SANDWICHED, 2)
        for _ in range(30):
            sigma = random_state(2, rng=rng)
            val = 0.4 * d_alpha(W.outputs[0], sigma, 2, SANDWICHED) + 0.6 * d_alpha(W.outputs[1], sigma, 2, SANDWICHED)
            assert res.value <= val + 1e-9
        assert res.gap <= 1e-6

    def test_single_point_distribution(self, rng):
        W = random_channel(rng, k=2)
        assert chi_alpha(W, [1.0, 0.0], 2.0, SANDWICHED).value == 0.0

    def test_sibson_closed_form(self, rng):
        W = random_channel(rng, k=2)
        for alpha in (1.5, 2.0):
            generic = chi_alpha(W, [0.3, 0.7], alpha, PETZ, 1)
            closed = chi_alpha(W, [0.3, 0.7], alpha, PETZ, 1, method="sibson")
            assert abs(generic.value - closed.value) < 1e-6
            assert closed.value == sibson_value(W, [0.3, 0.7], alpha)
            assert math.isclose(np.trace(sibson_minimizer(W, [0.3, 0.7], alpha)).real, 1.0)

    def test_sibson_minimizer_probes(self, rng):
        W = random_channel(rng, k=3)
        P = [0.2, 0.3, 0.5]
        val = sibson_value(W, P, 1.7)
        sig = sibson_minimizer(W, P, 1.7)

        def form1(sigma):
            return math.log(sum(p * q_alpha(S, sigma, 1.7, PETZ) for p, S in zip(P, W.outputs))) / 0.7

        assert abs(form1(sig) - val) < 1e-9
        for _ in range(30):
            assert form1(random_state(2, rng=rng)) >= val - 1e-10

    def test_sibson_needs_petz(self, rng):
        with pytest.raises(InputError):
            chi_alpha(random_channel(rng), None, 2.0, SANDWICHED, method="sibson")

    def test_monotone_in_alpha(self, rng):
        W = random_channel(rng, k=2)
        vals = [chi_alpha(W, [0.5, 0.5], a, SANDWICHED, 1).value for a in (0.6, 0.8, 1.5, 2.0, 3.0)]
        assert np.all(np.diff(vals) >= -1e-7)

    def test_limit_at_one(self, rng):
        W = random_channel(rng, k=2)
        H = holevo_quantity(W, [0.5, 0.5])
        for variant in (PETZ, SANDWICHED, FLAT):
            for a in (1 - 1e-4, 1 + 1e-4):
                assert abs(chi_alpha(W, [0.5, 0.5], a, variant, 1).value - H) < 1e-3

    def test_additive_on_products(self, rng):
        W = random_channel(rng, k=2)
        P = np.array([0.3, 0.7])
        one = chi_alpha(W, P, 2.0, SANDWICHED, 1).value
        two = chi_alpha(product_channel(W, 2), product_distribution(P, 2), 2.0, SANDWICHED, 1).value
        assert abs(two - 2 * one) < 1e-5


class TestCapacities:
    def test_noiseless(self):
        W = CqChannel.from_states([np.diag([1.0, 0]), np.diag([0, 1.0])])
        assert abs(renyi_capacity(W, 2.0, SANDWICHED).value - math.log(2)) < 1e-6
        res = divergence_radius(W, 2.0, SANDWICHED)
        assert abs(res.value - math.log(2)) < 1e-6
        assert res.gap < 1e-5

    def test_bsc_capacity_is_uniform(self):
        W = bsc()
        res = renyi_capacity(W, 1.5, PETZ, 1, "sibson")
        assert np.allclose(res.weights, [0.5, 0.5], atol=1e-4)
        assert abs(res.value - sibson_value(W, [0.5, 0.5], 1.5)) < 1e-8

    def test_forms_and_radius_agree(self, rng):
        W = random_channel(rng, k=2)
        c1 = renyi_capacity(W, 2.0, SANDWICHED, 1).value
        c2 = renyi_capacity(W, 2.0, SANDWICHED, 2).value
        rad = divergence_radius(W, 2.0, SANDWICHED)
        assert abs(c1 - c2) < 2e-4
        assert abs(c1 - rad.value) < 2e-4
        assert rad.lower <= rad.value + 1e-12

    def test_single_input(self, rng):
        W = CqChannel.from_states([random_state(2, rng=rng)])
        assert renyi_capacity(W, 2.0).value == 0.0
        assert divergence_radius(W, 2.0).value == 0.0

    def test_infinity_commuting(self):
        W = bsc()
        # the dominating operator is diag(0.9, 0.9)
        assert math.isclose(capacity_infinity(W, SANDWICHED), math.log(1.8), rel_tol=1e-9)
        assert math.isclose(capacity_infinity(W, PETZ), math.log(1.8), rel_tol=1e-9)
        assert abs(capacity_infinity(W, FLAT) - math.log(1.8)) < 1e-6

    def test_infinity_sdp_noncommuting(self, rng):
        W = random_channel(rng, k=2)
        val = capacity_infinity(W, SANDWICHED)
        lower = capacity_infinity(W, FLAT)
        assert lower <= val + 1e-6
        with pytest.raises(UnsupportedAlphaVariant):
            capacity_infinity(W, PETZ)

    def test_flat_infinity_form2_below_radius(self, rng):
        W = random_channel(rng, k=2)
        assert chi_infinity_form2(W, [0.5, 0.5]) <= capacity_infinity(W, FLAT) + 1e-6


class TestProducts:
    def test_product_channel_labels(self):
        W2 = product_channel(bsc(), 2)
        assert W2.labels == ("0,0", "0,1", "1,0", "1,1")
        assert np.allclose(W2["0,1"], np.diag([0.09, 0.81, 0.01, 0.09]))

    def test_product_distribution(self):
        assert np.allclose(product_distribution(np.array([0.25, 0.75]), 2), [1 / 16, 3 / 16, 3 / 16, 9 / 16])

    def test_caps(self):
        from qrenyi.config import Config
        with pytest.raises(DimensionCap):
            product_channel(bsc(), 3, Config(alphabet_cap=4))

    def test_pinched_outputs_commute_with_universal_state(self, rng):
        from qrenyi.schur_weyl import universal_symmetric_state
        Wn = pinched_product_channel(random_channel(rng), 2)
        omega = universal_symmetric_state(2, 2)
        for S in Wn.outputs:
            assert np.allclose(S @ omega, omega @ S, atol=1e-12)


class TestSymmetricStructure:
    def test_symmetrized_minimizer_no_worse(self, rng):
        from qrenyi.schur_weyl import twirl
        W = CqChannel.from_states([random_state(2, rng=rng) for _ in range(2)])
        W2 = product_channel(W, 2)
        P2 = product_distribution(np.array([0.3, 0.7]), 2)
        res = chi_alpha(W2, P2, 2.0, SANDWICHED, 1)

        def form1(sigma):
            return math.log(sum(p * q_alpha(S, sigma, 2.0, SANDWICHED) for p, S in zip(P2, W2.outputs)))

        assert form1(twirl(res.sigma, 2, 2)) <= form1(res.sigma) + 1e-9

    def test_pinched_chain_two_copies(self, rng):
        from qrenyi.schur_weyl import v_nd
        W = CqChannel.from_states([random_state(2, rng=rng) for _ in range(2)])
        P = np.array([0.4, 0.6])
        P2 = product_distribution(P, 2)
        star = chi_alpha(product_channel(W, 2), P2, 2.0, SANDWICHED, 1).value
        flat = chi_alpha(pinched_product_channel(W, 2), P2, 2.0, FLAT, 1).value
        assert star - 3 * math.log(v_nd(2, 2)) <= flat <= star + 1e-6
