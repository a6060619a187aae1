import pytest

from mtk import CYCLIC, TRIVIAL, AbelianGroup, DiGraph, QuotientPresentation
from mtk.errors import PreconditionError
from mtk.ktheory import (adjacency_matrix, k_theory, six_term_report, stabiliser_matrices,
                         theta_induced)
from mtk.presentation import dual_quotient
from mtk.zmatrix import IntMatrix, direct_sum

from .conftest import bs_loop, rose

Z = AbelianGroup


def two_cycle(cls=TRIVIAL, omega=None):
    g = DiGraph.build("ab", [("ab", "a", "b"), ("ba", "b", "a"), ("aa", "a", "a")])
    return QuotientPresentation(g, {"a": cls, "b": cls}, omega or {})


class TestMatrices:
    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_rose_adjacency(self, n):
        assert adjacency_matrix(rose(n)).tolist() == [[n]]

    def test_two_cycle(self):
        assert adjacency_matrix(two_cycle()).tolist() == [[1, 1], [1, 0]]

    def test_free_dual(self, f2_gog):
        a = adjacency_matrix(dual_quotient(f2_gog))
        assert sorted(sum(row) for row in a.tolist()) == [3, 3, 3, 3]
        assert sum(x == 0 for row in a.tolist() for x in row) == 4

    @pytest.mark.parametrize("omega, a0, a1", [((2, 3), 2, 3), ((-2, 3), 2, -3), ((3, -2), 3, -2)])
    def test_single_loop(self, omega, a0, a1):
        m0, m1 = stabiliser_matrices(bs_loop(*omega))
        assert m0.tolist() == [[a0]] and m1.tolist() == [[a1]]

    def test_parallel_loops(self):
        g = DiGraph.build(["v"], [("e", "v", "v"), ("f", "v", "v")])
        p = QuotientPresentation(g, {"v": CYCLIC}, {"e": (2, 3), "f": (1, 1)})
        m0, m1 = stabiliser_matrices(p)
        assert m0.tolist() == [[3]] and m1.tolist() == [[4]]

    def test_unit_indices_recover_transpose(self):
        p = two_cycle(CYCLIC, {"ab": (1, 1), "ba": (-1, -1), "aa": (1, -1)})
        m0, _ = stabiliser_matrices(p)
        assert m0 == adjacency_matrix(p).T

    def test_trivial_rejected(self):
        with pytest.raises(PreconditionError):
            stabiliser_matrices(rose(2))

    def test_theta(self):
        assert theta_induced(bs_loop(2, 3), "e") == (2, 3)
        assert theta_induced(bs_loop(-2, 3), "e") == (2, -3)
        assert theta_induced(rose(1), "e0") == (1, 0)

    def test_sign_flip_invariance(self):
        for w, wb in [(2, 3), (-4, 1), (3, 3)]:
            assert stabiliser_matrices(bs_loop(w, wb)) == stabiliser_matrices(bs_loop(-w, -wb))


class TestGroups:
    @pytest.mark.parametrize("n, k0", [(1, Z(1)), (2, Z()), (3, Z(0, (2,))), (6, Z(0, (5,)))])
    def test_roses(self, n, k0):
        report = k_theory(rose(n))
        assert report.K0 == k0
        assert report.K1 == (Z(1) if n == 1 else Z())

    def test_bs23(self):
        report = k_theory(bs_loop(2, 3))
        assert report.K0 == Z() and report.K1 == Z(0, (2,))

    def test_bs12(self):
        # 1 - A0 = 0 and 1 - A1 = -1
        report = k_theory(bs_loop(1, 2))
        assert report.K0 == Z(1) and report.K1 == Z(1)

    def test_free_dual(self, f2_gog):
        report = k_theory(dual_quotient(f2_gog))
        assert report.K0 == Z(2) and report.K1 == Z(2)

    def test_components_sum(self):
        g = DiGraph.build(["v", "w"], [("a", "v", "v"), ("b", "v", "v"), ("c", "v", "v"), ("e", "w", "w")])
        p = QuotientPresentation(g, {"v": TRIVIAL, "w": CYCLIC}, {"e": (2, 3)})
        report = k_theory(p)
        assert len(report.components) == 2
        assert report.K0 == Z(0, (2,))
        assert report.K1 == Z(0, (2,))
        assert "K0 = Z/2" in report.to_text()


class TestSixTerm:
    def test_rose(self):
        r = six_term_report(rose(4))
        assert r.id_minus_alpha0.tolist() == [[-3]]
        assert r.degree1_basis == ()

    def test_bs23(self):
        r = six_term_report(bs_loop(2, 3))
        assert r.id_minus_alpha0.tolist() == [[-1]]
        assert r.id_minus_alpha1.tolist() == [[-2]]
        assert r.corners()["coker(id-alpha1)"] == Z(0, (2,))

    def test_block_diagonal(self):
        g = DiGraph.build(["v", "w"], [("e", "v", "v"), ("f", "w", "w")])
        p = QuotientPresentation(g, {"v": CYCLIC, "w": CYCLIC}, {"e": (2, 3), "f": (1, 4)})
        r = six_term_report(p)
        assert r.id_minus_alpha0 == IntMatrix.from_rows([[-1, 0], [0, 0]])
        assert r.id_minus_alpha1 == IntMatrix.from_rows([[-2, 0], [0, -3]])

    def test_matches_k_theory(self):
        p = two_cycle(CYCLIC, {"ab": (2, -1), "ba": (1, 3), "aa": (-2, 2)})
        r, k = six_term_report(p), k_theory(p)
        c = r.corners()

        assert k.K0 == direct_sum(c["coker(id-alpha0)"], c["ker(id-alpha1)"])
        assert k.K1 == direct_sum(c["coker(id-alpha1)"], c["ker(id-alpha0)"])
