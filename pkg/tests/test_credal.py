import random
from fractions import Fraction as F

import pytest

import credalkit.polytope as pt
from credalkit.credal import (
    CredalCollection,
    FiniteSeparation,
    check_marginal_consistency,
    check_permutation_consistency,
    closedness_witness,
    credal_set_from_hrep,
    credal_set_from_members,
    credal_set_from_vertices,
    extend_measure,
    lower_expectation,
    upper_expectation,
    verify_finite_separation,
    verify_witness_certificate,
)
from credalkit.exactq import DimensionError, dot
from credalkit.spaces import (
    make_space,
    point_mass,
    product_index,
    pushforward_matrix,
    uniform_measure,
)
from gen import generated_instance, random_simplex_point

AB = make_space(("a", "b"), ("0", "1"))


def full_simplex_set(space, tup):
    return credal_set_from_hrep(space, tup)


class TestConstruction:
    def test_vertices_must_be_measures(self):
        with pytest.raises(DimensionError):
            credal_set_from_vertices(AB, ("a",), [(F(1, 2), F(1, 3))])

    def test_empty_hrep_rejected(self):
        with pytest.raises(DimensionError):
            credal_set_from_hrep(
                AB, ("a",), ineqs=[((1, 0), F(-1))]  # x0 <= -1, impossible
            )

    def test_synthesized_requires_canonical(self):
        cset = credal_set_from_members(AB, ("b", "a"), [uniform_measure(4)])
        with pytest.raises(DimensionError):
            CredalCollection(AB, {("b", "a"): cset})

    def test_derived_permuted_variant(self):
        d01 = point_mass(4, product_index(AB, ("0", "1")))
        coll = CredalCollection(
            AB,
            {("a", "b"): credal_set_from_members(AB, ("a", "b"), [d01])},
        )
        derived = coll.credal_set(("b", "a"))
        assert derived.members() == (
            point_mass(4, product_index(AB, ("1", "0"))),
        )


class TestPermutationCheck:
    def test_synthesized_passes_by_construction(self):
        coll = CredalCollection(
            AB, {("a", "b"): full_simplex_set(AB, ("a", "b"))}
        )
        report = check_permutation_consistency(coll)
        assert report.passed

    def test_point_mass_mismatch_fails_with_witness(self):
        d01 = point_mass(4, product_index(AB, ("0", "1")))
        coll = CredalCollection(
            AB,
            {
                ("a", "b"): credal_set_from_members(AB, ("a", "b"), [d01]),
                ("b", "a"): credal_set_from_members(AB, ("b", "a"), [d01]),
            },
            policy="supplied",
        )
        report = check_permutation_consistency(coll)
        assert not report.passed
        failures = report.failures()
        assert failures
        for rec in failures:
            assert rec.witness is not None
            assert rec.certificate is not None

    def test_symmetric_set_passes(self):
        coll = CredalCollection(
            AB,
            {
                ("a", "b"): full_simplex_set(AB, ("a", "b")),
                ("b", "a"): full_simplex_set(AB, ("b", "a")),
            },
            policy="supplied",
        )
        assert check_permutation_consistency(coll).passed

    def test_unchecked_pair_notice(self):
        coll = CredalCollection(
            AB,
            {("a", "b"): full_simplex_set(AB, ("a", "b"))},
            policy="supplied",
        )
        report = check_permutation_consistency(coll)
        assert report.passed  # notices are not failures
        assert any(r.status == "unchecked" for r in report.records)


class TestMarginalCheck:
    def test_full_simplices_pass(self):
        coll = CredalCollection(
            AB,
            {
                ("a",): full_simplex_set(AB, ("a",)),
                ("b",): full_simplex_set(AB, ("b",)),
                ("a", "b"): full_simplex_set(AB, ("a", "b")),
            },
        )
        assert check_marginal_consistency(coll).passed

    def test_point_mass_conflict(self):
        coll = CredalCollection(
            AB,
            {
                ("a",): credal_set_from_members(AB, ("a",), [point_mass(2, 0)]),
                ("a", "b"): credal_set_from_members(
                    AB, ("a", "b"), [point_mass(4, 3)]
                ),
            },
        )
        report = check_marginal_consistency(coll)
        assert not report.passed
        rec = next(
            r
            for r in report.failures()
            if r.direction == "restriction within supplied set"
        )
        # the restriction of delta_(1,1) is delta_1, not delta_0
        assert rec.witness == point_mass(2, 1)
        assert verify_witness_certificate(
            rec.certificate, coll.sets[("a",)]
        )

    def test_matching_marginal_segments_pass(self):
        # V_(a) = V_(b) = {q d0 + (1-q) d1 : q in [1/4, 3/4]} and
        # V_(a,b) = all joints with both marginals in that segment
        seg_rows = [((-1, 0), F(-1, 4)), ((1, 0), F(3, 4))]
        joint_rows = [
            ((-1, -1, 0, 0), F(-1, 4)),
            ((1, 1, 0, 0), F(3, 4)),
            ((-1, 0, -1, 0), F(-1, 4)),
            ((1, 0, 1, 0), F(3, 4)),
        ]
        coll = CredalCollection(
            AB,
            {
                ("a",): credal_set_from_hrep(AB, ("a",), ineqs=seg_rows),
                ("b",): credal_set_from_hrep(AB, ("b",), ineqs=seg_rows),
                ("a", "b"): credal_set_from_hrep(AB, ("a", "b"), ineqs=joint_rows),
            },
        )
        assert check_marginal_consistency(coll).passed

    def test_pushforward_family_passes_both(self):
        rng = random.Random(100)
        for _ in range(3):
            _, coll, _ = generated_instance(rng, 3)
            assert check_permutation_consistency(coll).passed
            assert check_marginal_consistency(coll).passed

    def test_finite_mode_agrees_with_set_comparison(self):
        rng = random.Random(101)
        space = AB
        mu1 = random_simplex_point(rng, 4)
        mu2 = random_simplex_point(rng, 4)
        sets = {}
        for alpha in [("a",), ("b",), ("a", "b")]:
            m = pushforward_matrix(space, alpha)
            sets[alpha] = credal_set_from_members(
                space, alpha, [m.apply(mu1), m.apply(mu2)]
            )
        coll = CredalCollection(space, sets)
        report = check_marginal_consistency(coll)
        # oracle: direct set comparison
        for alpha, beta in [
            (("a", "b"), ("a",)),
            (("a", "b"), ("b",)),
        ]:
            from credalkit.spaces import restriction_matrix

            m = restriction_matrix(space, alpha, beta)
            image = {m.apply(v) for v in sets[alpha].members()}
            expected = image == set(sets[beta].members())
            records = [
                r
                for r in report.records
                if r.alpha == alpha and r.beta == beta
            ]
            assert all(r.status == "pass" for r in records) == expected


class TestExpectations:
    def test_indicator_over_full_simplex(self):
        cset = full_simplex_set(AB, ("a",))
        f = (1, 0)
        assert lower_expectation(cset, f) == 0
        assert upper_expectation(cset, f) == 1

    def test_constant_functional(self):
        cset = full_simplex_set(AB, ("a",))
        f = (F(3, 7), F(3, 7))
        assert lower_expectation(cset, f) == F(3, 7)
        assert upper_expectation(cset, f) == F(3, 7)

    def test_segment_bounds_lp_vs_endpoints(self):
        cset = credal_set_from_hrep(
            AB, ("a",), ineqs=[((-1, 0), F(-1, 3)), ((1, 0), F(2, 3))]
        )
        f = (1, 0)
        assert lower_expectation(cset, f) == F(1, 3)
        assert upper_expectation(cset, f) == F(2, 3)
        # endpoints oracle
        endpoints = [(F(1, 3), F(2, 3)), (F(2, 3), F(1, 3))]
        assert min(dot(f, e) for e in endpoints) == F(1, 3)
        assert max(dot(f, e) for e in endpoints) == F(2, 3)

    def test_lp_equals_vertex_enumeration_random(self):
        rng = random.Random(200)
        for _ in range(25):
            dim = rng.choice([2, 4])
            pts = [random_simplex_point(rng, dim) for _ in range(rng.randint(1, 5))]
            tup = ("a",) if dim == 2 else ("a", "b")
            cset = credal_set_from_vertices(AB, tup, pts)
            f = tuple(F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(dim))
            assert lower_expectation(cset, f) == min(dot(f, v) for v in pts)
            assert upper_expectation(cset, f) == max(dot(f, v) for v in pts)

    def test_finite_mode_enumeration(self):
        cset = credal_set_from_members(
            AB, ("a",), [(F(1, 3), F(2, 3)), (F(1, 2), F(1, 2))]
        )
        assert lower_expectation(cset, (1, 0)) == F(1, 3)
        assert upper_expectation(cset, (1, 0)) == F(1, 2)


class TestExtendMeasure:
    def test_uniform_split(self):
        assert extend_measure(3, [(0, 1), (2,)], [F(1, 2), F(1, 2)]) == (
            F(1, 4),
            F(1, 4),
            F(1, 2),
        )

    def test_singleton_partition_is_identity(self):
        masses = [F(1, 6), F(1, 3), F(1, 2)]
        assert extend_measure(3, [(0,), (1,), (2,)], masses) == tuple(masses)

    def test_reaggregation_oracle_random(self):
        rng = random.Random(300)
        for _ in range(20):
            size = 8
            indices = list(range(size))
            rng.shuffle(indices)
            atoms = []
            while indices:
                k = rng.randint(1, min(3, len(indices)))
                atoms.append(tuple(indices[:k]))
                indices = indices[k:]
            masses = random_simplex_point(rng, len(atoms))
            out = extend_measure(size, atoms, masses)
            assert sum(out) == 1 and all(v >= 0 for v in out)
            for atom, mass in zip(atoms, masses):
                assert sum(out[i] for i in atom) == mass

    def test_bad_partitions(self):
        with pytest.raises(DimensionError):
            extend_measure(3, [(0, 1), (1, 2)], [F(1, 2), F(1, 2)])
        with pytest.raises(DimensionError):
            extend_measure(3, [(0, 1)], [F(1)])
        with pytest.raises(DimensionError):
            extend_measure(3, [(0, 1), (2,)], [F(1, 3), F(1, 3)])


class TestClosednessWitness:
    def test_polytope_mode_delegates_to_separation(self):
        cset = credal_set_from_hrep(
            AB, ("a",), ineqs=[((-1, 0), F(-1, 3)), ((1, 0), F(2, 3))]
        )
        cert = closedness_witness(cset, (F(5, 6), F(1, 6)))
        assert pt.verify_separation(cert, cset.body)

    def test_finite_mode_outside_hull(self):
        cset = credal_set_from_members(AB, ("a",), [(F(1, 2), F(1, 2))])
        cert = closedness_witness(cset, (F(1), F(0)))
        assert isinstance(cert, pt.SeparationCertificate)
        assert verify_witness_certificate(cert, cset)

    def test_finite_mode_interior_point_gets_family(self):
        cset = credal_set_from_members(
            AB, ("a",), [point_mass(2, 0), point_mass(2, 1)]
        )
        cert = closedness_witness(cset, uniform_measure(2))
        assert isinstance(cert, FiniteSeparation)
        assert verify_finite_separation(cert)
        assert cert.gap == F(1, 2)

    def test_member_point_rejected(self):
        cset = credal_set_from_members(AB, ("a",), [uniform_measure(2)])
        with pytest.raises(pt.NotSeparableError):
            closedness_witness(cset, uniform_measure(2))
