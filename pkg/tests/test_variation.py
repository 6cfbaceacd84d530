import numpy as np
import pytest

from qdbench.variation import (
    OperatorConfig,
    mutate,
    mutate_batch,
    mutate_gaussian,
    mutate_polynomial_bounded,
    random_genome,
    random_genome_batch,
)

LO, HI = -5.12, 5.12


class ScriptedRng:
    """Returns pre-chosen arrays in call order, standing in for a Generator."""

    def __init__(self, draws):
        self.draws = list(draws)

    def _next(self, shape):
        a = np.broadcast_to(np.asarray(self.draws.pop(0), dtype=float), shape)
        return np.array(a)

    def random(self, shape):
        return self._next(shape)

    def normal(self, mean, sigma, size):
        return mean + sigma * self._next(size)


def reference_polynomial_gene(x, u, eta, lo=LO, hi=HI):
    # straight-from-formula scalar implementation kept independent of the package
    if u < 0.5:
        d = (x - lo) / (hi - lo)
        val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d) ** (eta + 1.0)
        delta = val ** (1.0 / (eta + 1.0)) - 1.0
    else:
        d = (hi - x) / (hi - lo)
        val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d) ** (eta + 1.0)
        delta = 1.0 - val ** (1.0 / (eta + 1.0))
    return x + delta * (hi - lo)


def test_operator_config_validation():
    with pytest.raises(ValueError, match="kind"):
        OperatorConfig("cauchy")
    with pytest.raises(ValueError):
        OperatorConfig("gaussian", mutation_prob=1.5)
    with pytest.raises(ValueError):
        OperatorConfig("polynomial-bounded", eta=0.0)
    with pytest.raises(ValueError):
        OperatorConfig("gaussian", sigma=-1.0)
    cfg = OperatorConfig("polynomial-bounded")
    assert (cfg.mutation_prob, cfg.eta) == (0.5, 10.0)
    cfg = OperatorConfig("gaussian")
    assert (cfg.mutation_prob, cfg.mean, cfg.sigma) == (0.5, 0.0, 1.0)


def test_kind_mismatch_rejected():
    poly = OperatorConfig("polynomial-bounded")
    gauss = OperatorConfig("gaussian")
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        mutate_polynomial_bounded([0.0, 0.0], gauss, rng)
    with pytest.raises(ValueError):
        mutate_gaussian([0.0, 0.0], poly, rng)


def test_random_genome():
    rng = np.random.default_rng(17)
    g = random_genome(3, rng)
    assert g.shape == (3,)
    assert np.all((g >= LO) & (g <= HI))
    with pytest.raises(ValueError):
        random_genome(1, rng)
    assert np.array_equal(
        random_genome(5, np.random.default_rng(99)),
        random_genome(5, np.random.default_rng(99)),
    )


def test_random_genome_mean():
    # analytic mean is 0; 3 sigma over 1e5 draws is ~0.028
    rng = np.random.default_rng(23)
    draws = random_genome_batch(100_000, 2, rng)
    assert abs(draws.mean()) < 0.05


def test_polynomial_u_half_is_fixed_point():
    cfg = OperatorConfig("polynomial-bounded", mutation_prob=1.0)
    x = np.array([1.234, -3.3])
    out = mutate_polynomial_bounded(x, cfg, ScriptedRng([0.0, 0.5]))
    assert np.array_equal(out, x)


def test_polynomial_boundary_fixed_points():
    cfg = OperatorConfig("polynomial-bounded", mutation_prob=1.0)
    out = mutate_polynomial_bounded(
        np.array([LO, HI]), cfg, ScriptedRng([0.0, np.array([0.2, 0.9])])
    )
    assert out[0] == LO
    assert out[1] == HI


def test_polynomial_matches_reference_formula():
    cfg = OperatorConfig("polynomial-bounded", mutation_prob=1.0, eta=10.0)
    rng = np.random.default_rng(31)
    xs = rng.uniform(LO, HI, 500)
    us = rng.random(500)
    for x, u in zip(xs, us):
        out = mutate_polynomial_bounded(
            np.array([x, 0.0]), cfg, ScriptedRng([0.0, np.array([u, 0.5])])
        )
        assert out[0] == pytest.approx(reference_polynomial_gene(x, u, 10.0), abs=1e-12)


def test_polynomial_step_statistics_match_reference():
    # empirical mean |step| from the origin vs the independent formula
    rng = np.random.default_rng(7)
    reference = np.array(
        [abs(reference_polynomial_gene(0.0, u, 10.0)) for u in rng.random(100_000)]
    )
    cfg = OperatorConfig("polynomial-bounded", mutation_prob=1.0, eta=10.0)
    out = mutate_batch(np.zeros((100_000, 2)), cfg, np.random.default_rng(8))
    assert np.abs(out[:, 0]).mean() == pytest.approx(reference.mean(), rel=0.02)


def test_mutation_prob_zero_is_identity():
    x = np.array([1.0, -2.0, 3.3])
    rng = np.random.default_rng(0)
    for kind in ("polynomial-bounded", "gaussian"):
        cfg = OperatorConfig(kind, mutation_prob=0.0)
        assert np.array_equal(mutate(x, cfg, rng), x)


def test_gaussian_clamps_to_bounds():
    cfg = OperatorConfig("gaussian", mutation_prob=1.0, sigma=1.0)
    out = mutate_gaussian(
        np.array([5.0, -5.0]), cfg, ScriptedRng([0.0, np.array([0.5, -0.5])])
    )
    assert np.array_equal(out, [5.12, -5.12])


def test_gaussian_zero_step_is_identity():
    cfg = OperatorConfig("gaussian", mutation_prob=1.0)
    x = np.array([1.5, -0.25])
    assert np.array_equal(mutate_gaussian(x, cfg, ScriptedRng([0.0, 0.0])), x)


@pytest.mark.parametrize("kind", ["polynomial-bounded", "gaussian"])
def test_bound_safety(kind):
    cfg = OperatorConfig(kind, mutation_prob=1.0)
    rng = np.random.default_rng(13)
    genomes = rng.uniform(LO, HI, (100_000, 4))
    out = mutate_batch(genomes, cfg, np.random.default_rng(14))
    assert out.shape == genomes.shape
    assert np.all((out >= LO) & (out <= HI))


def test_gaussian_per_gene_change_fraction():
    cfg = OperatorConfig("gaussian", mutation_prob=0.5)
    rng = np.random.default_rng(19)
    x = np.zeros((100_000, 4))
    out = mutate_batch(x, cfg, rng)
    changed = np.mean(out != x)
    assert changed == pytest.approx(0.5, abs=0.01)


def test_inputs_never_modified():
    rng = np.random.default_rng(2)
    x = np.array([0.5, -0.5, 1.0])
    copy = x.copy()
    for kind in ("polynomial-bounded", "gaussian"):
        mutate(x, OperatorConfig(kind, mutation_prob=1.0), rng)
        assert np.array_equal(x, copy)


def test_determinism():
    for kind in ("polynomial-bounded", "gaussian"):
        cfg = OperatorConfig(kind)
        a = mutate([0.1, 0.2, 0.3], cfg, np.random.default_rng(5))
        b = mutate([0.1, 0.2, 0.3], cfg, np.random.default_rng(5))
        assert np.array_equal(a, b)


def test_out_of_bound_input_rejected():
    cfg = OperatorConfig("gaussian")
    with pytest.raises(ValueError):
        mutate([6.0, 0.0], cfg, np.random.default_rng(0))
