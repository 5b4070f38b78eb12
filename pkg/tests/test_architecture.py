import filecmp
import types

import numpy as np
import pytest

from encdec.approximator import FitRegion, LatentMap, fit_polynomial
from encdec.architecture import (
    FitConfig,
    FitWarning,
    apply_architecture,
    apply_with_flag,
    basisonet,
    classical_deeponet,
    compose,
    fit_architecture,
    fit_radius,
    frame_architecture,
    identity_operator,
    load_architecture,
    refit,
    save_architecture,
    schauder_deeponet,
    stack_latent,
    sup_error,
    zero_operator,
)
from encdec.codec import (
    BasisSpec,
    basis_decoder,
    basis_identity,
    build_frame,
    dense_substitution_codec,
    sampling_identity,
    smooth_perturber,
)
from encdec.covering import build_epsilon_covering, partition_of_unity
from encdec.errors import ConfigurationError, ParameterError, PreconditionError, ShapeError
from encdec.funcspace import GridFunction, SpaceTag, family_members, l2_distance, sup_distance
from encdec.harness.families import family_by_name
from encdec.harness.operators import CanonicalOperator, compose_operators

# regression baseline: Schauder DeepONet (sine coefficients in, perturbed sine atoms out),
# pointwise sine operator, n = 8, cubic latent map, seed 0, 25-member family
SCHAUDER_SIN_BASELINE = 0.007623514987074776

ANTI = CanonicalOperator("Antiderivative").spec()
SIN = CanonicalOperator("PointwiseSin").spec()
TRAIN = family_by_name("sine2")
TEST = family_by_name("sine2-shifted")


def sampling_arch(G, n, family=TRAIN, degree=1, seed=0):
    t = sampling_identity(n)
    return fit_architecture(G, t.encoder, t.decoder, t.encoder, t.decoder, FitConfig(n, degree=degree, seed=seed),
                            family)


class TestFitArchitecture:
    def test_identity_operator(self):
        arch = sampling_arch(identity_operator(), 8)
        t = sampling_identity(8)
        for f in family_members(TRAIN):
            assert sup_distance(arch(f), t(f)) <= 1e-8

    def test_linear_operator_realizable(self):
        arch = sampling_arch(ANTI, 8)
        assert arch.fit_report.residual <= 1e-6
        assert arch.fit_report.meets_target

    def test_zero_operator(self):
        arch = sampling_arch(zero_operator(), 4)
        for f in family_members(TEST):
            assert np.max(np.abs(arch(f).values)) <= 1e-10

    def test_radius_rule(self):
        t = sampling_identity(4)
        assert fit_radius(t.encoder, 4) == 4.0
        anchor = GridFunction.constant(2.0)
        assert fit_radius(t.encoder, 4, anchor) == pytest.approx(6.0)
        arch = sampling_arch(ANTI, 4)
        assert arch.fit_report.radius == 4.0
        assert arch.latent.fit_region.norm == "linf"

    def test_antiderivative_improves(self):
        f = GridFunction.from_callable(lambda x: np.sin(np.pi * x))
        exact = GridFunction.from_callable(lambda x: (1 - np.cos(np.pi * x)) / np.pi)
        e4 = sup_distance(sampling_arch(ANTI, 4)(f), exact)
        e16 = sup_distance(sampling_arch(ANTI, 16)(f), exact)
        assert e16 < e4

    def test_fit_failure_is_a_warning(self):
        with pytest.warns(FitWarning):
            arch = sampling_arch(SIN.__class__(lambda f: f * 20.0, name="scale"), 8, degree=0)
        assert arch.fit_report.warning is not None and not arch.fit_report.meets_target

    def test_empty_family(self):
        t = sampling_identity(4)
        empty = types.SimpleNamespace(_members=[])
        with pytest.raises(ConfigurationError):
            fit_architecture(ANTI, t.encoder, t.decoder, t.encoder, t.decoder, FitConfig(4), empty)

    def test_dimension_mismatch(self):
        t4, t8 = sampling_identity(4), sampling_identity(8)
        with pytest.raises(ShapeError):
            fit_architecture(ANTI, t4.encoder, t4.decoder, t4.encoder, t8.decoder, FitConfig(4), TRAIN)

    def test_config_validation(self):
        with pytest.raises(ParameterError):
            FitConfig(0)
        with pytest.raises(ParameterError):
            FitConfig(3, family="spline")
        assert FitConfig(3).resolved_family(7).value == "KernelRidge"
        assert FitConfig(3, degree=2).resolved_family(7).value == "Polynomial"

    def test_kernel_ridge_path(self):
        t = sampling_identity(8)
        arch = fit_architecture(ANTI, t.encoder, t.decoder, t.encoder, t.decoder, FitConfig(8, seed=1), TRAIN)
        assert arch.latent.family.value == "KernelRidge"
        assert sup_error(arch, ANTI, family_members(TRAIN)) < 0.2


class TestApply:
    def test_tag_mismatch(self):
        arch = sampling_arch(ANTI, 4)
        with pytest.raises(PreconditionError):
            apply_architecture(arch, GridFunction.constant(1.0, space_tag=SpaceTag.L2))

    def test_extrapolation_flag(self):
        arch = sampling_arch(ANTI, 4)
        _, inside = apply_with_flag(arch, family_members(TRAIN)[3])
        _, outside = apply_with_flag(arch, GridFunction.constant(50.0))
        assert not inside and outside

    def test_identity_latent_collapses(self):
        cov = build_epsilon_covering(TRAIN.domain, 1 / 8)
        arch = classical_deeponet(cov)
        t = sampling_identity(8)
        for f in family_members(TEST):
            np.testing.assert_allclose(arch(f).values, t(f).values, atol=1e-12)


class TestNamedArchitectures:
    def test_classical_constant_branch(self):
        cov = build_epsilon_covering(TRAIN.domain, 1 / 4)
        target = GridFunction.from_callable(lambda x: np.cos(3 * x))
        phi = LatentMap.constant(cov.k, [1.0])
        arch = classical_deeponet(cov, atoms=[target], phi=phi)
        for f in family_members(TRAIN):
            np.testing.assert_allclose(arch(f).values, target.values, atol=1e-14)

    def test_classical_refit_matches_fit(self, tmp_path):
        n = 8
        cov = build_epsilon_covering(TRAIN.domain, 1 / n)
        t = sampling_identity(n)
        cfg = FitConfig(n, degree=1, seed=5)
        a = refit(classical_deeponet(cov, partition_of_unity(cov)), ANTI, t.encoder, t.decoder, cfg, TRAIN)
        b = fit_architecture(ANTI, t.encoder, t.decoder, t.encoder, t.decoder, cfg, TRAIN, "classical_deeponet")
        save_architecture(a, tmp_path / "a")
        save_architecture(b, tmp_path / "b")
        for name in ("manifest.txt", "encoder.csv", "decoder.csv", "latent.csv"):
            assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name, shallow=False)

    def test_frame_architecture_identity(self):
        fs = build_frame(basis_decoder(BasisSpec.SINE, 6).atoms)
        arch = frame_architecture(fs, fs)
        t = basis_identity(BasisSpec.SINE, 6)
        f = GridFunction.from_callable(lambda x: x * (1 - x) * np.exp(x), space_tag=SpaceTag.L2)
        assert l2_distance(arch(f), t(f)) <= 1e-10

    def test_basisonet_zero_perturbation(self, rng):
        n = 6
        codec = dense_substitution_codec(n)
        t = basis_identity(BasisSpec.SINE, n)
        a = rng.normal(size=(n, n))
        phi = LatentMap.linear(a)
        arch = basisonet(codec, codec, phi)
        for _ in range(10):
            f = GridFunction(TRAIN.domain, TRAIN.shape, rng.normal(size=257), SpaceTag.L2)
            expected = t.decoder(a @ t.encoder(f))
            np.testing.assert_allclose(arch(f).values, expected.values, atol=1e-10)

    def test_schauder_deeponet_baseline(self):
        fam = family_by_name("sine2", space_tag=SpaceTag.L2)
        enc_y, dec_y, _ = dense_substitution_codec(8, perturber=smooth_perturber(), seed=0)
        arch = schauder_deeponet(BasisSpec.SINE, dec_y, n=8)
        arch = refit(arch, SIN, enc_y, basis_decoder(BasisSpec.SINE, 8), FitConfig(8, degree=3, seed=0), fam)
        err = sup_error(arch, SIN, family_members(fam))
        assert err <= SCHAUDER_SIN_BASELINE * (1 + 1e-9)

    def test_stack_latent(self):
        reg = FitRegion([0.0, 0.0], 1.0)
        x = np.random.default_rng(0).uniform(-0.5, 0.5, size=(20, 2))
        p1 = fit_polynomial(x, 1, reg, targets=x[:, 0])
        p2 = fit_polynomial(x, 2, reg, targets=x[:, 1] ** 2)
        both = stack_latent([p1, p2])
        np.testing.assert_allclose(both.evaluate_many(x), np.hstack([p1.evaluate_many(x), p2.evaluate_many(x)]),
                                   atol=1e-14)
        with pytest.raises(ConfigurationError):
            stack_latent([p1, fit_polynomial(x, 1, FitRegion([0.0, 0.0], 2.0), targets=x[:, 0])])


class TestProperties:
    def test_determinism(self, tmp_path):
        for tag in ("a", "b"):
            save_architecture(sampling_arch(SIN, 4, degree=2, seed=11), tmp_path / tag)
        for name in ("manifest.txt", "encoder.csv", "decoder.csv", "latent.csv"):
            assert filecmp.cmp(tmp_path / "a" / name, tmp_path / "b" / name, shallow=False)

    def test_save_load_roundtrip(self, tmp_path):
        arch = sampling_arch(ANTI, 4)
        save_architecture(arch, tmp_path / "x")
        back = load_architecture(tmp_path / "x")
        f = family_members(TEST)[2]
        assert np.array_equal(back.latent.coefficients, arch.latent.coefficients)
        assert np.array_equal(back.encoder.matrix, arch.encoder.matrix)
        np.testing.assert_allclose(back(f).values, arch(f).values, rtol=0, atol=1e-14)
        assert back.fit_report == arch.fit_report

    def test_concatenation(self):
        inner_outer = compose_operators(ANTI, ANTI)
        members = family_members(TEST)

        def err(n):
            h = compose(sampling_arch(ANTI, n), sampling_arch(ANTI, n))
            return max(sup_distance(inner_outer(f), h(f)) for f in members)

        assert err(16) <= err(4)

    def test_compact_set_independence(self):
        other = family_by_name("bumps")
        errs = {fam.name: [] for fam in (TEST, other)}
        for n in (4, 16):
            arch = sampling_arch(ANTI, n)
            for fam in (TEST, other):
                errs[fam.name].append(sup_error(arch, ANTI, family_members(fam)))
        for series in errs.values():
            assert series[1] < series[0]

    @pytest.mark.parametrize("n", [4, 8, 16])
    def test_latent_accuracy_propagation(self, n):
        # chain: |Gf - D phi E f| <= |Gf - T Gf| + L_Y (|E G f - E G T f| + residual)
        t = sampling_identity(n)
        arch = sampling_arch(ANTI, n)
        assert arch.fit_report.meets_target
        for f in family_members(TRAIN):
            gf = ANTI(f)
            bound = sup_distance(gf, t(gf)) + sup_distance(f, t(f)) + 1.0 / n
            assert sup_distance(gf, arch(f)) <= bound
