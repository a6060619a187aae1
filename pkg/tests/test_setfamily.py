import random

import pytest

from mtk.errors import ParseError, PreconditionError, SizeGuardError, UniquenessError
from mtk.oracles import random_family, random_invariant_subset, random_prop_family
from mtk.setfamily import (PermAction, SetFamily, decompose_intersection, decompose_set,
                           family_report, is_finitely_aligned, is_independent, primitive_parts,
                           saturate, saturation_is_minimal, transition_matrix,
                           verify_prop_equivalence)


def fam(*members):
    return SetFamily.of(members)


CROSS = fam({1, 2}, {2, 3}, {2})


class TestFamily:
    def test_validation(self):
        with pytest.raises(ValueError):
            fam({1}, set())
        with pytest.raises(ValueError):
            fam({1, 2}, {2, 1})
        with pytest.raises(ValueError):
            SetFamily.of({"a": {1}}, universe={2})

    def test_size_cap(self):
        with pytest.raises(SizeGuardError):
            fam(set(range(17)))
        assert len(SetFamily.of([set(range(20))], max_atoms=20)) == 1

    def test_json(self):
        doc = {"universe": [1, 2, 3], "members": {"a": [1, 2], "b": [2, 3], "c": [2]},
               "action": [["b", "a", "c"]]}
        f, h = SetFamily.from_json(doc)
        assert f.ids == ("a", "b", "c")
        assert h.generators == ({"a": "b", "b": "a", "c": "c"},)
        again, h2 = SetFamily.from_json(f.to_json(h))
        assert again == f and h2 == h

    def test_positional_action(self):
        doc = {"universe": [1, 2], "members": {"a": [1], "b": [2]}, "action": [[1, 0]]}
        assert SetFamily.from_json(doc)[1].generators == ({"a": "b", "b": "a"},)

    def test_bad_json(self):
        with pytest.raises(ParseError):
            SetFamily.from_json({"universe": [1], "members": {"a": [2]}})
        with pytest.raises(ParseError):
            SetFamily.from_json({"universe": [1, 2], "members": {"a": [1], "b": [2]},
                                 "action": [["a", "a"]]})


class TestPredicates:
    def test_independent(self):
        assert is_independent(CROSS)
        assert not is_independent(fam({1}, {2}, {1, 2}))
        assert is_independent(fam({1, 2, 3}))

    def test_aligned(self):
        assert is_finitely_aligned(CROSS)
        assert not is_finitely_aligned(fam({1, 2}, {2, 3}))
        assert is_finitely_aligned(fam({1}, {2}, {3, 4}))

    def test_decompose(self):
        assert decompose_intersection(CROSS, "0", "1") == ["2"]
        assert decompose_intersection(fam({1}, {2}), "0", "1") == []
        assert decompose_intersection(CROSS, "1", "1") == ["1"]
        assert decompose_set(CROSS, {1, 3}) is None

    def test_decompose_not_unique(self):
        f = fam({1}, {2}, {1, 2})
        with pytest.raises(UniquenessError):
            decompose_set(f, {1, 2})

    def test_unique_when_independent(self):
        rng = random.Random(11)
        for _ in range(300):
            f = random_family(rng)
            if not is_independent(f):
                continue
            for i in f.ids:
                for j in f.ids:
                    target = f[i] & f[j]
                    assert len(f.partitions(target, limit=10)) <= 1


class TestSaturate:
    def test_crossing_pair(self):
        assert saturate(CROSS, ["0", "1"]) == ["0", "1", "2"]

    def test_closed_set_unchanged(self):
        assert saturate(CROSS, ["0", "2"]) == ["0", "2"]
        assert saturate(CROSS, []) == []

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            saturate(fam({1, 2}, {2, 3}), ["0"])
        with pytest.raises(PreconditionError):
            saturate(CROSS, ["0"], PermAction(({"0": "1", "1": "0", "2": "2"},)))
        with pytest.raises(PreconditionError):
            saturate(CROSS, ["9"])

    def test_action_must_respect_containment(self):
        with pytest.raises(PreconditionError):
            saturate(CROSS, ["0", "1", "2"], PermAction(({"0": "2", "2": "0", "1": "1"},)))

    def test_mirrored_families(self):
        rng = random.Random(5)
        for _ in range(60):
            f, h = random_prop_family(rng, mirrored=True)
            F = random_invariant_subset(f, h, rng)
            J = saturate(f, F, h)
            assert set(F) <= set(J)
            assert h.is_invariant(J)
            assert is_finitely_aligned(f.subfamily(J))
            assert isinstance(saturation_is_minimal(f, F, J, h), bool)


class TestPrimitives:
    def test_examples(self):
        assert primitive_parts(fam({1, 2}, {2})) == {"0": {"1"}, "1": {"2"}}
        assert primitive_parts(fam({1}, {2, 3})) == {"0": {"1"}, "1": {"2", "3"}}
        chain = primitive_parts(fam({1}, {1, 2}, {1, 2, 3}))
        assert chain == {"0": {"1"}, "1": {"2"}, "2": {"3"}}

    def test_equivalence_examples(self):
        assert verify_prop_equivalence(CROSS) == (True, True)
        assert verify_prop_equivalence(fam({1}, {2}, {1, 2})) == (False, False)
        assert verify_prop_equivalence(fam({1})) == (True, True)

    def test_equivalence_fuzz(self):
        rng = random.Random(2)
        for _ in range(400):
            a, b = verify_prop_equivalence(random_family(rng))
            assert a == b


class TestTransition:
    def test_antichain(self):
        t = transition_matrix(fam({1}, {2}, {3}))
        assert t.matrix.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    def test_pair(self):
        t = transition_matrix(fam({1, 2}, {2}))
        assert t.order == ("1", "0")
        assert t.matrix.tolist() == [[1, 1], [0, 1]]

    def test_chain(self):
        t = transition_matrix(fam({1}, {1, 2}, {1, 2, 3}))
        assert t.matrix.tolist() == [[1, 1, 1], [0, 1, 1], [0, 0, 1]]
        assert t.matrix.det() == 1

    def test_rejects_failing_family(self):
        with pytest.raises(PreconditionError):
            transition_matrix(fam({1}, {2}, {1, 2}))

    def test_random_prop_families(self):
        rng = random.Random(9)
        for _ in range(100):
            f, _ = random_prop_family(rng)
            t = transition_matrix(f)
            assert set(x for row in t.matrix.tolist() for x in row) <= {0, 1}
            assert t.matrix.det() == 1


def test_report():
    r = family_report(CROSS, F=["0", "1"])
    assert r["independent"] and r["finitely_aligned"]
    assert r["intersections"]["0,1"] == ["2"]
    assert r["saturation"]["J"] == ["0", "1", "2"]
    assert r["transition_matrix"]["determinant"] == "1"

