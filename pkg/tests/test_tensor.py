import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import brute
from tensorloc import Tensor, build_tensor, load_fixture, symmetrize_from_representatives
from tensorloc.errors import (
    DimensionTooLargeForExhaustiveCheck,
    DuplicateEntry,
    DuplicateKey,
    IndexOutOfRange,
    InvalidInput,
    NotZTensor,
    PreconditionViolated,
    StorageCapExceeded,
    UnsortedKey,
)
from tensorloc.tensor import (
    SubsetPartition,
    all_partitions,
    classify,
    is_irreducible,
    is_symmetric,
    is_weakly_irreducible,
    m_tensor_split,
    max_dense_entries,
    representation_digraph,
    row_aggregates,
    row_sums,
    strongly_connected_components,
)


@pytest.fixture(scope="module")
def ex41():
    return load_fixture("ex41")


@pytest.fixture(scope="module")
def ex51():
    return load_fixture("ex51")


@pytest.fixture(scope="module")
def ex61():
    return load_fixture("ex61")


class TestTensor:
    def test_zero_tensor_from_empty_list(self):
        t = build_tensor(4, 3, [])
        assert t.data.shape == (3, 3, 3, 3)
        assert not t.data.any()

    def test_ex51_entry(self, ex51):
        assert ex51[3, 1, 1] == 15
        assert ex51[1, 1, 1] == 3

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            build_tensor(4, 3, [((1, 1, 1, 4), 1.0)])
        with pytest.raises(IndexOutOfRange):
            build_tensor(3, 3, [((0, 1, 1), 1.0)])

    def test_wrong_index_length(self):
        with pytest.raises(InvalidInput):
            build_tensor(3, 3, [((1, 1), 1.0)])

    def test_duplicate_entry(self):
        with pytest.raises(DuplicateEntry):
            build_tensor(3, 2, [((1, 1, 2), 1.0), ((1, 1, 2), 2.0)])

    @pytest.mark.parametrize("shape", [(3,), (2, 3), (1, 1, 1)])
    def test_bad_shapes(self, shape):
        with pytest.raises(InvalidInput):
            Tensor(np.zeros(shape))

    def test_non_finite(self):
        a = np.zeros((2, 2, 2))
        a[0, 1, 1] = np.nan
        with pytest.raises(InvalidInput):
            Tensor(a)

    def test_immutable(self, ex51):
        with pytest.raises(ValueError):
            ex51.data[0, 0, 0] = 1.0

    def test_copy_on_construction(self):
        a = np.ones((2, 2, 2))
        t = Tensor(a)
        a[0, 0, 0] = 5
        assert t[1, 1, 1] == 1

    def test_storage_cap(self, monkeypatch):
        monkeypatch.setenv("TENSORLOC_MAX_DENSE", "100")
        assert max_dense_entries() == 100
        with pytest.raises(StorageCapExceeded):
            build_tensor(3, 5, [])
        build_tensor(4, 3, [])

    def test_unit(self):
        u = Tensor.unit(3, 2)
        assert u[1, 1, 1] == 1 and u[2, 2, 2] == 1 and u.data.sum() == 2

    def test_equality_and_hash(self, ex51):
        again = Tensor(np.array(ex51.data))
        assert again == ex51 and hash(again) == hash(ex51)


class TestSymmetrize:
    def test_ex41_row_sum(self, ex41):
        assert is_symmetric(ex41)
        assert row_sums(ex41).r[0] == pytest.approx(3.9, abs=1e-12)

    def test_single_diagonal(self):
        t = symmetrize_from_representatives(4, 3, {(1, 1, 1, 1): 1.0})
        expected = np.zeros((3,) * 4)
        expected[0, 0, 0, 0] = 1.0
        assert np.array_equal(t.data, expected)

    def test_four_permutations(self):
        t = symmetrize_from_representatives(4, 2, {(1, 1, 1, 2): 1.0})
        nz = {tuple(int(k) + 1 for k in idx) for idx in np.argwhere(t.data)}
        assert nz == set(itertools.permutations((1, 1, 1, 2)))
        assert t.data.sum() == 4

    def test_unsorted_key(self):
        with pytest.raises(UnsortedKey):
            symmetrize_from_representatives(3, 2, {(2, 1, 1): 1.0})

    def test_duplicate_key(self):
        with pytest.raises(DuplicateKey):
            symmetrize_from_representatives(3, 2, [((1, 1, 2), 1.0), ((1, 1, 2), 3.0)])

    @pytest.mark.parametrize("order,n", [(m, n) for m in (2, 3, 4) for n in (2, 3)])
    def test_matches_brute_force(self, order, n):
        rng = np.random.default_rng(order * 10 + n)
        reps = {
            key: float(rng.normal())
            for key in itertools.combinations_with_replacement(range(1, n + 1), order)
        }
        t = symmetrize_from_representatives(order, n, reps)
        assert np.array_equal(t.data, brute.symmetrize(order, n, reps))
        for perm in itertools.permutations(range(order)):
            assert np.array_equal(np.transpose(t.data, perm), t.data)


class TestPartition:
    def test_complement(self):
        p = SubsetPartition(4, (3, 1))
        assert p.members == (1, 3) and p.complement == (2, 4)
        assert p.swapped().members == (2, 4)
        assert str(p) == "1,3" and p.label() == "{1,3}"

    @pytest.mark.parametrize("members", [(), (1, 2, 3)])
    def test_not_proper(self, members):
        with pytest.raises(InvalidInput):
            SubsetPartition(3, members)

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            SubsetPartition(3, (4,))

    def test_parse(self):
        assert SubsetPartition.parse("1, 2", 3).members == (1, 2)
        with pytest.raises(InvalidInput):
            SubsetPartition.parse("a,b", 3)
        with pytest.raises(InvalidInput):
            SubsetPartition.parse("1,1", 3)

    def test_enumeration_order(self):
        got = [p.members for p in all_partitions(3)]
        assert got == [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]
        assert len(list(all_partitions(4))) == 14
        assert [p.members for p in all_partitions(3, up_to_complement=True)] == [(1,), (2,), (3,)]
        assert len(list(all_partitions(4, up_to_complement=True))) == 7


class TestRowAggregates:
    def test_ex41_row1(self, ex41):
        p = SubsetPartition(3, (1, 2))
        agg = row_aggregates(ex41, 1, p)
        assert agg.r == pytest.approx(3.9, abs=1e-12)
        # r^{complement Δ^{S̄}}: relative to the complement set {3}
        sbar = row_aggregates(ex41, 1, p.swapped())
        assert sbar.r_delta_s_bar == pytest.approx(3.7, abs=1e-12)
        # tail multiplicities: 1112 x3, 1113 x3, 1122 x3, 1123 x6, 1222 x1, 1223 x3, 1233 x3, 1333 x1
        signed = 5.2 - 0.1 * 3 + 0.1 * 3 - 0.2 * 3 - 0.2 * 6 - 0.1 + 0.3 * 3 + 0.1 * 3 - 0.2
        assert agg.big_r == pytest.approx(signed, abs=1e-12)

    def test_ex41_row3(self, ex41):
        agg = row_aggregates(ex41, 3, SubsetPartition(3, (1, 2)))
        assert agg.r_delta_s_bar == pytest.approx(2.1, abs=1e-12)
        assert agg.r_delta_s == pytest.approx(1.7, abs=1e-12)
        assert agg.r == pytest.approx(3.8, abs=1e-12)

    def test_ex41_values_against_brute(self, ex41):
        a = ex41.data
        for part in all_partitions(3):
            s = tuple(part.s_idx)
            for i in range(1, 4):
                agg = row_aggregates(ex41, i, part)
                big_r, r, r_in, r_out = brute.aggregates(a, i - 1, s)
                assert agg.big_r == pytest.approx(big_r, abs=1e-12)
                assert agg.r == pytest.approx(r, abs=1e-12)
                assert agg.r_delta_s == pytest.approx(r_in, abs=1e-12)
                assert agg.r_delta_s_bar == pytest.approx(r_out, abs=1e-12)

    def test_unit(self):
        u = Tensor.unit(3, 3)
        agg = row_aggregates(u, 2, SubsetPartition(3, (1,)))
        assert (agg.r, agg.big_r, agg.r_delta_s, agg.r_delta_s_bar) == (0, 1, 0, 0)

    def test_r_minus_j(self, ex51):
        agg = row_aggregates(ex51, 3, SubsetPartition(3, (1,)))
        # a_311 = 15, a_322 = 1
        assert agg.r_minus_j(1) == pytest.approx(agg.r - 15)
        assert agg.r_minus_j(2) == pytest.approx(agg.r - 1)
        with pytest.raises(IndexOutOfRange):
            agg.r_minus_j(3)

    def test_row_out_of_range(self, ex51):
        with pytest.raises(IndexOutOfRange):
            row_aggregates(ex51, 4, SubsetPartition(3, (1,)))

    def test_ex51_row_sums(self, ex51):
        assert row_sums(ex51).big_r.tolist() == [9, 7, 30]

    def test_partition_dimension_mismatch(self, ex51):
        with pytest.raises(InvalidInput):
            row_sums(ex51, SubsetPartition(4, (1,)))


class TestClassify:
    def test_ex51(self, ex51):
        assert classify(ex51).as_dict() == {
            "nonnegative": True, "z_tensor": False, "symmetric": False, "positive_diagonal": True,
        }

    def test_ex61(self, ex61):
        assert classify(ex61).as_dict() == {
            "nonnegative": False, "z_tensor": True, "symmetric": False, "positive_diagonal": True,
        }

    def test_zero(self):
        assert classify(Tensor.zeros(3, 3)).as_dict() == {
            "nonnegative": True, "z_tensor": True, "symmetric": True, "positive_diagonal": False,
        }


class TestIrreducibility:
    def test_unit(self):
        u = Tensor.unit(3, 3)
        assert not is_weakly_irreducible(u)
        assert not is_irreducible(u)

    def test_ex61(self, ex61):
        assert is_weakly_irreducible(ex61)
        assert is_irreducible(ex61)

    def test_positive_dense(self):
        t = Tensor(np.random.default_rng(3).uniform(0.1, 1.0, (3, 3, 3)))
        adj = representation_digraph(t)
        assert adj.sum() == 6
        assert is_weakly_irreducible(t)

    def test_two_by_two(self):
        t = build_tensor(3, 2, [((1, 2, 2), 1.0), ((2, 1, 1), 2.0)])
        assert is_irreducible(t)
        assert brute.irreducible(t.data)

    def test_scc(self):
        adj = np.zeros((5, 5), dtype=bool)
        for i, j in [(0, 1), (1, 2), (2, 0), (3, 4)]:
            adj[i, j] = True
        comps = sorted(sorted(c) for c in strongly_connected_components(adj))
        assert comps == [[0, 1, 2], [3], [4]]

    def test_too_large(self):
        t = Tensor(np.zeros((21, 21)))
        with pytest.raises(DimensionTooLargeForExhaustiveCheck):
            is_irreducible(t)

    @given(
        m=st.integers(2, 4),
        n=st.integers(2, 4),
        seed=st.integers(0, 2**32 - 1),
        density=st.floats(0.02, 0.6),
    )
    def test_matches_subset_definition(self, m, n, seed, density):
        rng = np.random.default_rng(seed)
        a = np.where(rng.uniform(size=(n,) * m) < density, 1.0, 0.0)
        t = Tensor(a)
        assert is_weakly_irreducible(t) == brute.weakly_irreducible(a)
        assert is_irreducible(t) == brute.irreducible(a)
        if is_irreducible(t):
            assert is_weakly_irreducible(t)

    def test_weak_brute_force_n6(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a = np.where(rng.uniform(size=(6, 6, 6)) < 0.02, 1.0, 0.0)
            assert is_weakly_irreducible(Tensor(a)) == brute.weakly_irreducible(a)


class TestSplit:
    def test_ex61(self, ex61):
        split = m_tensor_split(ex61)
        assert split.s == 30
        assert split.b[2, 2, 2] == 0
        assert np.all(split.b.data >= 0)
        assert split.reconstruct() == ex61

    def test_two_identity(self):
        split = m_tensor_split(Tensor.unit(3, 2, 2.0))
        assert split.s == 2 and not split.b.data.any()

    def test_not_z(self, ex51):
        with pytest.raises(NotZTensor):
            m_tensor_split(ex51)

    def test_nonpositive_diagonal(self):
        with pytest.raises(PreconditionViolated):
            m_tensor_split(Tensor.zeros(3, 2))
