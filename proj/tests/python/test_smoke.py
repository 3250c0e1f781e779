import math

import numpy as np
import pytest

import phtess


def test_canonical_phi_round_trip():
    spec = phtess.canonical_phi("vmf:[{mu:[0,0,1],kappa:3,w:1}]", 3)
    assert phtess.canonical_phi(spec, 3) == spec
    with pytest.raises(ValueError):
        phtess.canonical_phi("smallcircle:{axis:[0,1],c:0.5}", 2)


def test_directions_are_unit_and_even():
    u = phtess.sample_directions("isotropic", 3, 20000, seed=1)
    assert u.shape == (20000, 3)
    assert np.allclose(np.linalg.norm(u, axis=1), 1.0)
    assert np.all(np.abs(u.mean(axis=0)) < 0.03)


def test_hyperplane_count_matches_intensity():
    counts = [len(phtess.sample_hyperplanes(1.5, "isotropic", 2, 2.0, seed=s)[1]) for s in range(2000)]
    assert abs(np.mean(counts) - 6.0) < 0.25
    normals, offsets = phtess.sample_hyperplanes(1.0, "isotropic", 2, 5.0, seed=3)
    assert np.all(np.abs(offsets) <= 5.0)


def test_phi_of_unit_square():
    A = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])
    b = np.full(4, 0.5)
    value, se = phtess.phi_functional(A, b)
    assert abs(value - 2.0 / math.pi) <= max(se, 1e-9) + 1e-12


def test_face_counts_of_three_lines():
    normals = np.array([[1.0, 0], [0, 1], [1, 1]]) / np.array([[1], [1], [math.sqrt(2)]])
    offsets = np.array([0.0, 0.0, 1.0])
    assert [phtess.count_k_faces(normals, offsets, k) for k in (0, 1, 2)] == [3, 9, 7]


def test_simplex_of_tuple():
    s = 1 / math.sqrt(2)
    t = phtess.simplex_of_tuple(np.array([[1.0, 0], [-s, s], [-s, -s]]), 2)
    assert t["in_Pk"]
    assert len(t["vertices"]) == 3
    assert t["jacobian"] == pytest.approx(1 + math.sqrt(2))
    assert not phtess.simplex_of_tuple(np.array([[1.0, 0], [0, 1], [s, s]]), 2)["in_Pk"]


def test_simulate_records():
    records, stats = phtess.simulate(2, 2, window_radius=8, obs_radius=4, reps=5, seed=2)
    assert stats["faces_admitted"] == len(records) > 0
    r = records[0]
    assert list(r) == ["rep", "k", "z", "r", "sigma", "fcount", "vcount", "norm_inradius",
                       "norm_volume", "norm_diameter", "defining"]
    assert all(np.linalg.norm(x["z"]) < 4 for x in records)
    again, _ = phtess.simulate(2, 2, window_radius=8, obs_radius=4, reps=5, seed=2, workers=3)
    assert again == records


def test_xi_and_typical_samplers():
    xi, c = phtess.sample_xi(2, 2, n=2000, seed=4)
    assert len(xi) == c["accepted"] == 2000
    assert all(x["vcount"] == 3 and x["w"] > 0 for x in xi)
    faces, c = phtess.sample_typical(2, 1, n=500, seed=5)
    assert c["zero_residual"] == 500
    assert all("w" in f for f in faces)
    with pytest.raises(phtess.SamplerAbort):
        phtess.sample_xi(2, 2, phi="atoms:[{u:[1,0],w:0.5},{u:[0,1],w:0.5}]", n=10)


def test_statistics():
    x = np.linspace(0, 1, 1000)
    assert phtess.weighted_ks(x, None, x, None) == 0.0
    assert phtess.weighted_ks(x, None, x + 2, None) == 1.0
    with pytest.raises(phtess.StatsError):
        phtess.weighted_ks([1.0, 2.0], None, x, None)
    rng = np.random.default_rng(0)
    assert phtess.poisson_gof(rng.poisson(3.0, 5000).tolist(), 3.0) > 1e-3


def test_change_of_variables():
    r = phtess.change_of_variables_check(2, 1, f="gauss_bump", n=20000, seed=6)
    assert abs(r["z"]) <= 4
    zero = phtess.change_of_variables_check(2, 2, f="zero", n=1000)
    assert zero["lhs"] == zero["rhs"] == 0
