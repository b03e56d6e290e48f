"""Smoke tests for the python bindings (run by ctest with PYTHONPATH set)."""

import math

import dimspec as ds

PHI = (1 + math.sqrt(5)) / 2


def test_symbolic():
    phi_shift = ds.beta_shift(PHI)
    assert not ds.is_word_admissible(phi_shift, [1, 1])
    assert ds.is_word_admissible(phi_shift, [0, 1, 0, 1])
    counts = [ds.count_language(phi_shift, n) for n in range(1, 8)]
    assert counts == [2, 3, 5, 8, 13, 21, 34]
    comps, flags = ds.scc_decomposition(ds.markov_shift(3, [(0, 1), (1, 0), (2, 2)]))
    assert comps == [[0, 1], [2]]
    assert all(flags)


def test_betashift():
    assert ds.greedy_expansion(0.5, 2.0, 4) == [0, 1, 1, 1]
    assert abs(ds.delta_bound(1.5, 1) - (math.sqrt(3.25) - 1.5)) < 1e-12
    assert ds.replace_word([1, 1], 1.5, 1.8, 1) == [1, 0]
    plan = ds.sparse_zero_replacement([1, 0, 1, 0, 1, 0, 1, 0], 1.5, 1.8, 1)
    assert plan["positions"] == [1, 3, 5, 7]


def test_dimension():
    cantor = ds.affine_system([1 / 3, 1 / 3], [0.0, 2 / 3])
    e = ds.dimension(ds.full_shift(2), cantor, target_width=1e-6)
    truth = math.log(2) / math.log(3)
    assert e.h_lo <= truth <= e.h_hi
    assert e.width <= 1e-6

    dyadic = ds.affine_system([0.5, 0.5], [0.0, 0.5])
    e2 = ds.dimension(ds.beta_shift(PHI), dyadic, target_width=0.05)
    truth2 = math.log(PHI) / math.log(2)
    assert e2.h_lo <= truth2 <= e2.h_hi


def test_inversion():
    dyadic = ds.affine_system([0.5, 0.5], [0.0, 0.5])
    inv = ds.invert_dimension(dyadic, 0.5, epsilon=0.005)
    assert abs(inv["beta"] - math.sqrt(2)) <= 0.01
    assert inv["converged"]


def test_pressure():
    cantor = ds.affine_system([1 / 3, 1 / 3], [0.0, 2 / 3])
    p = ds.pressure_enclosure(ds.full_shift(2), cantor, 4, math.log(2) / math.log(3))
    assert p.lower <= 0.0 <= p.upper
    assert p.method == "full-superadditive"


def main():
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
    print("python smoke: all tests passed")


if __name__ == "__main__":
    main()
