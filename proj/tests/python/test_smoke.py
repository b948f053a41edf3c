import json

import pytest

import streamclust as sc


@pytest.fixture
def line():
    return sc.Space([[1.0], [2.0], [4.0], [5.0]])


def test_space_basics(line):
    assert len(line) == 4
    assert line.euclidean
    assert line.distance(0, 2) == 3.0
    assert line.points[3] == [5.0]


def test_matrix_space_and_validation():
    space = sc.Space.from_matrix(
        [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]], metric=True
    )
    assert len(space) == 3
    assert space.validate() == []

    broken = sc.Space.from_matrix([[0.0, 1.0], [2.0, 0.0]])
    assert any("symmetry" in v.lower() for v in broken.validate())


def test_structural_checkers(line):
    assert sc.is_perfect(line, [0, 0, 1, 1])
    assert not sc.is_perfect(line, [0, 1, 2, 2])

    nice, witness = sc.is_nice(line, [0, 0, 1, 2])
    assert nice and witness is None
    nice, witness = sc.is_nice(line, [0, 1, 0, 1])
    assert not nice
    x, same, other = witness
    assert line.distance(x, same) >= line.distance(x, other)

    core_sets, beta = sc.cores(line, [0, 0, 1, 1])
    assert core_sets == [[0, 1], [2, 3]]
    assert beta == 0.5

    assert sc.is_refinement([0, 1, 2, 2], [0, 0, 1, 1])
    assert not sc.is_refinement([0, 1, 0, 1], [0, 0, 1, 1])


def test_enumeration_and_induction(line):
    assert len(sc.enumerate_nice(line, 3)) == 2
    assert sc.enumerate_perfect(line, 2) == [[0, 0, 1, 1]]

    labels, center_cluster = sc.induce(line, items=[0, 2])
    assert labels == [0, 0, 1, 1]
    assert center_cluster == [0, 1]

    labels, center_cluster = sc.induce(line, coords=[[1.0], [1.0], [4.0]])
    assert center_cluster == [0, -1, 1]


def test_linkage(line):
    assert sc.linkage_dump(line) == "((0 1):1 (2 3):1):2"
    assert sc.candidates(line, 2) == [0, 2]


def test_hull_distance():
    distance, lower, iterations = sc.hull_distance(
        [[0.0], [1.0], [3.0], [5.0]], [0, 1], [2, 3]
    )
    assert abs(distance - 2.0) < 1e-6
    assert lower <= distance
    assert iterations >= 1


def test_generators_round_trip():
    inst = sc.generate("nice", k=3, n=12, dim=1, seed=5, certify_unique=True)
    assert inst["unique_certified"]
    nice, _ = sc.is_nice(inst["space"], inst["labels"])
    assert nice
    assert sc.enumerate_nice(inst["space"], 3) == [inst["labels"]] or (
        len(sc.enumerate_nice(inst["space"], 3)) == 1
    )

    core = sc.generate("core", k=3, n=60, beta=0.2, seed=9)
    assert core["measured_beta"] >= 0.2
    assert "cores" in core


def test_streaming_runs(line):
    result = sc.run(line, "seq-nn", k=2, order=[3, 1, 0, 2])
    assert result["steps"] == 4
    assert sorted(result["induced_labels"]) == [0, 0, 1, 1]

    result = sc.run(line, "seq-k-means", k=2, order=[0, 3, 1, 2])
    assert len(result["final_centers"]["coords"]) == 2

    result = sc.run(line, "subsample", k=2, seed=11, snapshot_every=2)
    assert [snap["step"] for snap in result["snapshots"]] == [2, 4]

    with pytest.raises(ValueError):
        sc.run(line, "no-such-algorithm", k=2)


def test_experiment_report():
    report = sc.experiment(
        "subsample", "core", k=3, n=60, beta=0.2, ell=20, trials=60, seed=3
    )
    assert report["trials"] == 60
    assert 0.0 <= report["rate"] <= 1.0
    assert report["bound"] == pytest.approx(
        sc.theoretical_bound(3, report["measured_beta"], 20)
    )
    parsed = json.loads(report["json"])
    assert parsed["trials"] == 60

    with pytest.raises(ValueError):
        sc.experiment("seq-l-means", "core", k=3, n=60, ell=10, trials=5)


def test_adversarial_constructions():
    config = sc.build_m_configuration(3)
    assert config["verified"]
    space = config["space"]
    assert sc.subset_nice2(
        space, config["hub"], config["spokes"], config["antipodes"], 2, [1, 3]
    )
    assert not sc.subset_nice2(
        space, config["hub"], config["spokes"], config["antipodes"], 2, [1, 2]
    )

    bad = sc.kmeans_badcase(seed=7)
    assert bad is not None
    assert bad["orderings_tried"] == 24
