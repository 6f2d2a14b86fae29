import pytest
from hypothesis import given, settings, strategies as st

from zonelab import ConvexBody, Hyperplane, general_position_check
from zonelab.errors import GenerationFailure, MalformedInput
from zonelab.exact import feasible, rank
from zonelab.instances import (
    GenConfig,
    Instance,
    SplitMix64,
    generate,
    mix64,
    perturb,
    random_body,
    random_hyperplanes,
)


def test_splitmix64_reference_vector():
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_bounded_draws_stay_in_range():
    rng = SplitMix64(123)
    draws = [rng.randint(-3, 3) for _ in range(500)]
    assert set(draws) == set(range(-3, 4))


def test_mix64_separates_streams():
    assert mix64(4, 0) != mix64(0, 4)
    assert mix64(4, 0) == mix64(4, 0)


def test_hyperplane_golden():
    hs = random_hyperplanes(GenConfig(seed=3, n=3, d=2))
    assert hs == [Hyperplane((1, 7), 4), Hyperplane((4, -7), -9), Hyperplane((5, -3), -5)]
    assert random_hyperplanes(GenConfig(seed=3, n=0, d=2)) == []


def test_generation_runs_out_of_lines():
    with pytest.raises(GenerationFailure):
        random_hyperplanes(GenConfig(seed=0, n=100, d=2, coeff_bound=1))


def test_bad_configs():
    with pytest.raises(MalformedInput):
        random_hyperplanes(GenConfig(n=-1))
    with pytest.raises(MalformedInput):
        random_body(GenConfig(body_facets=0))
    with pytest.raises(MalformedInput):
        random_body(GenConfig(body_scale=0))


def test_box_mode():
    K = random_body(GenConfig(seed=5, d=3, box=True))
    assert len(K.halfspaces) == 6
    assert all(sum(1 for a in c.coefficients if a) == 1 for c in K.halfspaces)
    assert K.is_bounded


def test_single_halfspace_body():
    K = random_body(GenConfig(seed=5, d=2, body_facets=1))
    assert len(K.halfspaces) == 1 and not K.is_bounded and not K.is_empty


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 4), st.integers(1, 8))
def test_bodies_have_interior(seed, d, m):
    K = random_body(GenConfig(seed=seed, d=d, body_facets=m))
    assert not K.is_empty
    assert feasible(K.interior_constraints(), K.dim) is not None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 6), st.integers(1, 3))
def test_generation_is_deterministic(seed, n, d):
    cfg = GenConfig(seed=seed, n=n, d=d)
    assert generate(cfg).to_json() == generate(cfg).to_json()


def test_perturb_fixes_a_corner():
    K = ConvexBody.box((0, 0), (1, 1))
    H = [Hyperplane((1, 0), 0), Hyperplane((0, 1), 0)]
    moved = perturb(H, K, seed=1)
    assert general_position_check(moved, K) == []
    # offsets move first, so directions survive
    assert all(rank([a.normal, b.normal]) == 1 for a, b in zip(moved, H))


def test_perturb_fixes_parallel_lines():
    K = ConvexBody.box((5, 5), (6, 6))
    moved = perturb([((1, 0), 0), ((1, 0), 1)], K, seed=2)
    assert general_position_check(moved, K) == []


def test_perturb_leaves_good_input_alone(axes, strip_body):
    assert perturb(axes, strip_body) == axes


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 5))
def test_perturbed_instances_are_general(seed, n):
    inst = generate(GenConfig(seed=seed, n=n, d=2, coeff_bound=2))
    moved = perturb(inst.hyperplanes, inst.body, seed=seed)
    assert general_position_check(moved, inst.body) == []


def test_file_round_trip(tmp_path):
    inst = generate(GenConfig(seed=9, n=4, d=3))
    path = tmp_path / "inst.json"
    inst.write(path)
    back = Instance.read(path)
    assert back.hyperplanes == inst.hyperplanes
    assert back.body == inst.body
    assert back.seed == 9 and back.to_json() == inst.to_json()


def test_bad_files():
    with pytest.raises(MalformedInput):
        Instance.from_json("{")
    with pytest.raises(MalformedInput):
        Instance.from_json('{"dim": 2}')
    with pytest.raises(MalformedInput):
        Instance.from_json('{"dim": 2, "hyperplanes": [{"a": ["1"], "b": "0"}]}')
