import json

import numpy as np
import pytest

from pointssim import ConfigError, DoesNotFit, connected_components, summarize
from pointssim.generators import (
    SCENARIOS,
    ScenarioConfig,
    gen_corner_mixture,
    gen_distorted_ellipses,
    gen_point_fields,
    gen_smoothed_noise,
    gen_structured_ellipses,
    generate,
    generate_one,
    realization_rng,
    write_batch,
)


@pytest.mark.parametrize("scenario", SCENARIOS)
def test_deterministic_and_never_full(scenario):
    size = 256 if scenario == "clustered_points" else 96  # 500 points need a 25px quadrat
    cfg = ScenarioConfig(scenario, size, seed=17, count=3)
    a, b = generate(cfg), generate(cfg)
    assert a == b
    for img in a:
        assert img.shape == (size, size)
        assert 0 < img.foreground_count < size * size


@pytest.mark.parametrize("scenario", SCENARIOS[1:])
def test_realization_independent_of_order(scenario):
    cfg = ScenarioConfig(scenario, 256 if scenario == "clustered_points" else 64, seed=5, count=4)
    assert generate_one(cfg, 3) == generate(cfg)[3]


def test_rng_streams_differ():
    a = realization_rng(1, 0).integers(1 << 30, size=4)
    b = realization_rng(1, 1).integers(1 << 30, size=4)
    assert not (a == b).all()


def test_config_validation():
    with pytest.raises(ConfigError):
        ScenarioConfig("mps")
    with pytest.raises(ConfigError):
        ScenarioConfig("random_points", size=16)
    with pytest.raises(ConfigError):
        ScenarioConfig("random_points", count=0)
    with pytest.raises(ConfigError):
        ScenarioConfig("random_points", params={"grid": (2, 2)})
    with pytest.raises(ConfigError):
        generate_one(ScenarioConfig("corner_mixture", params={"corner_margin": 0.5}), 0)
    with pytest.raises(ConfigError):
        generate_one(ScenarioConfig("regular_points", params={"n_points": 10}), 0)


def test_structured_ignores_seed():
    a = gen_structured_ellipses(ScenarioConfig("structured_ellipses", 128, seed=1, count=4))
    b = gen_structured_ellipses(ScenarioConfig("structured_ellipses", 128, seed=999, count=4))
    assert len(a) == 4 and len(set(map(lambda x: x.cells.tobytes(), a + b))) == 1


def test_structured_grid_components():
    one = generate_one(ScenarioConfig("structured_ellipses", 64,
                                      params={"grid": (1, 1), "semi_axes": (0.3, 0.3)}), 0)
    assert connected_components(one)[1] == 1
    nine = generate_one(ScenarioConfig("structured_ellipses", 90,
                                       params={"grid": (3, 3), "semi_axes": (0.15, 0.12)}), 0)
    assert connected_components(nine)[1] == 9


def test_clustered_does_not_fit():
    with pytest.raises(DoesNotFit):
        generate_one(ScenarioConfig("clustered_points", 64), 0)


def test_structured_does_not_fit():
    with pytest.raises(DoesNotFit):
        generate_one(ScenarioConfig("structured_ellipses", 64,
                                    params={"grid": (4, 4), "semi_axes": (0.2, 0.1)}), 0)


def test_distorted_zero_noise_is_plain_ellipses():
    cfg = ScenarioConfig("distorted_ellipses", 128, seed=3, count=2,
                         params={"noise_amplitude": 0.0, "n_objects": 1})
    img = gen_distorted_ellipses(cfg)[0]
    v = summarize(img)
    assert connected_components(img)[1] == 1 and v.v1 >= 1


def test_distorted_measures_vary():
    vs = np.array([summarize(x).as_tuple() for x in
                   gen_distorted_ellipses(ScenarioConfig("distorted_ellipses", 128, seed=0, count=10))])
    assert (vs.var(axis=0) > 0).all()


def test_corner_bound():
    cfg = ScenarioConfig("corner_mixture", 200, seed=8, count=5)
    margin = cfg.params["corner_margin"]
    reach = max(cfg.params["circle_radius"][1], cfg.params["ellipse_major"][1])
    lim = (margin + reach) * 200 + 1
    for img in gen_corner_mixture(cfg):
        r, c = np.nonzero(img.cells)
        near_x = (c + 0.5 <= lim) | (c + 0.5 >= 200 - lim)
        near_y = (r + 0.5 <= lim) | (r + 0.5 >= 200 - lim)
        assert (near_x & near_y).all()


def test_point_field_v4():
    reg = gen_point_fields(ScenarioConfig("regular_points", 200, count=1))[0]
    assert reg.foreground_count == 100 and summarize(reg).v4 == 0.0
    rnd = gen_point_fields(ScenarioConfig("random_points", 200, seed=2, count=10))
    assert 0.35 < np.mean([summarize(x).v4 for x in rnd]) < 0.65
    clu = gen_point_fields(ScenarioConfig("clustered_points", 256, seed=2, count=3))
    assert all(summarize(x).v4 > 0.9 for x in clu)


def test_smoothed_noise_proportion():
    for img in gen_smoothed_noise(ScenarioConfig("smoothed_noise", 128, seed=4, count=5)):
        assert abs(img.foreground_count / 128 ** 2 - 0.30) <= 0.01


def test_smoothing_reduces_components():
    def mean_components(radius):
        cfg = ScenarioConfig("smoothed_noise", 128, seed=6, count=5, params={"smoothing_radius": radius})
        return np.mean([connected_components(x)[1] for x in generate(cfg)])
    counts = [mean_components(r) for r in (1, 2, 4, 8)]
    assert all(a > b for a, b in zip(counts, counts[1:]))


def test_write_batch(tmp_path):
    cfg = ScenarioConfig("random_points", 64, seed=7, count=3, params={"n_points": 40})
    paths = write_batch(cfg, tmp_path)
    assert [p.name for p in paths] == [f"random_points_7_{k:03d}.png" for k in range(3)]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["schema_version"] == 1
    assert manifest["config"]["params"]["n_points"] == 40
    assert ScenarioConfig(**manifest["config"]) == cfg
