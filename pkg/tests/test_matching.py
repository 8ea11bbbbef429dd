import random

import pytest

from rasched.core import SchedError, UnknownIdError
from rasched.generate import random_3dm, random_3dm_star
from rasched.matching import (
    MatchingCertificate,
    MatchingError,
    ThreeDM,
    ThreeDMStar,
    brute_force_match,
    build_3dm_star,
    element_degree,
    is_perfect_cover,
    zeta,
)


class TestBruteForceMatch:
    def test_no_cover_instance(self, no_cover_dm):
        assert brute_force_match(no_cover_dm) is None

    def test_single_triplet(self):
        dm = ThreeDM(1, ((1, 1, 1),))
        cert = brute_force_match(dm)
        assert cert is not None and cert.triplets == dm.element_triplets()

    def test_disjoint_pair_found(self):
        dm = ThreeDM(2, ((1, 1, 1), (2, 2, 2), (1, 2, 2)))
        cert = brute_force_match(dm)
        assert cert is not None
        assert sorted(cert.triplets) == sorted(
            ((("a", 1), ("b", 1), ("c", 1)), (("a", 2), ("b", 2), ("c", 2)))
        )

    def test_cap_exceeded(self, no_cover_dm):
        with pytest.raises(SchedError):
            brute_force_match(no_cover_dm, triplet_cap=3)

    def test_certificate_validated_independently(self):
        rng = random.Random(37)
        for _ in range(20):
            dm = random_3dm(rng, 2, rng.randint(2, 6))
            cert = brute_force_match(dm)
            if cert is not None:
                assert is_perfect_cover(dm, cert)

    def test_double_cover_rejected_by_validator(self):
        dm = ThreeDM(2, ((1, 1, 1), (2, 2, 2), (1, 2, 2)))
        bad = MatchingCertificate(
            ((("a", 1), ("b", 1), ("c", 1)), (("a", 1), ("b", 2), ("c", 2)))
        )
        assert not is_perfect_cover(dm, bad)


class TestElementDegree:
    def test_fixed_degrees(self, no_cover_dm):
        assert element_degree(no_cover_dm, ("a", 3)) == 3
        assert element_degree(no_cover_dm, ("c", 2)) == 2

    def test_degree_one(self, no_cover_dm):
        assert element_degree(no_cover_dm, ("b", 1)) == 1

    def test_unknown_element(self, no_cover_dm):
        with pytest.raises(UnknownIdError):
            element_degree(no_cover_dm, ("a", 9))

    def test_partition_identity(self, no_cover_dm):
        # Degrees over one element set partition the triplet family.
        for name in ("a", "b", "c"):
            total = sum(
                element_degree(no_cover_dm, (name, i)) for i in range(1, 4)
            )
            assert total == len(no_cover_dm.triplets)


class TestThreeDMStar:
    def test_zeta_first_block(self):
        assert [zeta(i) for i in (1, 2, 3)] == [2, 3, 1]

    def test_zeta_block_three_cycle(self):
        for i in range(1, 10):
            assert zeta(zeta(zeta(i))) == i
            assert zeta(i) != i

    def test_derived_family_size(self):
        star = build_3dm_star(
            1,
            (
                (("a", 1), ("b", 1), ("c", 1)),
                (("a'", 2), ("b", 2), ("c", 2)),
                (("a", 3), ("b", 3), ("c", 3)),
            ),
        )
        assert len(star.e2) == 6

    def test_uncovered_element_rejected(self):
        with pytest.raises(MatchingError):
            build_3dm_star(1, ((("a", 1), ("b", 1), ("c", 1)),))

    def test_shape_validation(self):
        with pytest.raises(MatchingError):
            build_3dm_star(1, ((("a", 1), ("b", 1), ("c", 2)),))

    def test_solvable_generator_agrees_with_search(self):
        rng = random.Random(41)
        yes = no = 0
        for k in range(14):
            star = random_3dm_star(rng, 1, extra=rng.randint(0, 2), solvable=k % 2 == 0)
            cert = brute_force_match(star)
            if cert is not None:
                assert is_perfect_cover(star, cert)
                yes += 1
            else:
                no += 1
        assert yes >= 3 and no >= 3


class TestValidation:
    def test_duplicate_triplets_rejected(self):
        with pytest.raises(MatchingError):
            ThreeDM(1, ((1, 1, 1), (1, 1, 1)))

    def test_coverage_assumption(self):
        with pytest.raises(MatchingError):
            ThreeDM(2, ((1, 1, 1),))

    def test_index_out_of_range(self):
        with pytest.raises(MatchingError):
            ThreeDM(1, ((1, 2, 1),))
