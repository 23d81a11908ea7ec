import numpy as np
import pytest

from syllarc.articulator import (ArticulatorMap, Calibration,
                                 compose_parameters, build_tracks)
from syllarc.errors import CompositionError, DataError
from syllarc.inventory import PARAM_NAMES
from syllarc.planner import plan_syllable


def test_origin_projects_to_offsets(calibration):
    p = calibration.project(np.array([0.0 + 0.0j]))
    assert np.allclose(p[0], calibration.omega, atol=1e-12)


def test_projection_is_linear(calibration):
    z1 = 0.3 - 0.4j
    z2 = -0.7 + 0.2j
    p1 = calibration.project(np.array([z1])) - calibration.omega
    p2 = calibration.project(np.array([z2])) - calibration.omega
    p12 = calibration.project(np.array([z1 + z2])) - calibration.omega
    assert np.allclose(p1 + p2, p12, atol=1e-12)


def test_composition_clamps_to_limits(calibration, inventory):
    amap = ArticulatorMap.for_consonant(calibration, inventory.get("b"))
    z = np.full(4, 50.0 + 50.0j)
    track = compose_parameters(z, z, amap)
    assert np.all(track.values <= 3.0)
    assert np.all(track.values >= -3.0)
    unclamped = compose_parameters(z, z, amap, clamp=False)
    assert np.any(np.abs(unclamped.values) > 3.0)


def test_selection_vectors_partition(calibration, inventory):
    for label in ("b", "d", "g_p", "g_v"):
        amap = ArticulatorMap.for_consonant(calibration, inventory.get(label))
        assert np.all(amap.s_v + amap.s_c == 1.0)
        recruited = {i + 1 for i in np.flatnonzero(amap.s_c)}
        assert recruited == set(inventory.get(label).articulators)


def test_unrecruited_parameters_follow_vowel_stream(calibration, inventory):
    amap = ArticulatorMap.for_consonant(calibration, inventory.get("b"))
    rng = np.random.default_rng(3)
    z_v = rng.normal(size=6) + 1j * rng.normal(size=6)
    z_c = rng.normal(size=6) + 1j * rng.normal(size=6)
    mixed = compose_parameters(z_v, z_c, amap, clamp=False).values
    vowel_only = compose_parameters(z_v, z_v, amap, clamp=False).values
    cons_only = compose_parameters(z_c, z_c, amap, clamp=False).values
    for i in range(7):
        source = cons_only if amap.s_c[i] else vowel_only
        assert np.allclose(mixed[:, i], source[:, i], atol=1e-12)


def test_identical_streams_reduce_to_statics(calibration, inventory):
    amap = ArticulatorMap.for_consonant(calibration, inventory.get("d"))
    z = np.array([0.25 - 0.5j, -0.8 + 0.1j])
    track = compose_parameters(z, z, amap, clamp=False)
    assert np.allclose(track.values, calibration.project(z), atol=1e-12)


def test_build_tracks_shape(calibration, inventory):
    t1, tc, t2 = inventory.resolve_vcv("y", "d", "u")
    plan = plan_syllable(t1, tc, t2)
    track = build_tracks(plan, calibration)
    assert track.values.shape == (plan.n_frames, 7)
    assert track.parameter("jaw").shape == (plan.n_frames,)


def test_mismatched_streams_raise(calibration, inventory):
    amap = ArticulatorMap.for_consonant(calibration, inventory.get("b"))
    with pytest.raises(CompositionError):
        compose_parameters(np.zeros(3, complex), np.zeros(4, complex), amap)


def test_calibration_validation():
    with pytest.raises(DataError):
        Calibration(omega=np.zeros(6), psi=np.zeros(7, complex),
                    articulator_sets={})
    with pytest.raises(CompositionError):
        ArticulatorMap(np.zeros(7), np.zeros(7, complex),
                       np.zeros(7), np.zeros(7))


def test_param_names_order():
    assert PARAM_NAMES == ("jaw", "body", "dorsum", "tip", "lipp", "liph", "hy")
