import numpy as np
import pytest

from wplab.neighbors import BoxGrid, brute_force_nearest


def embedded_cloud(seed, n, dim):
    rng = np.random.default_rng(seed)
    # correlated coordinates, like a delay embedding
    base = np.cumsum(rng.normal(size=n + dim))
    return np.stack([base[j : j + n] for j in range(dim)], axis=1)


class TestNearest:
    @pytest.mark.parametrize("dim", [1, 2, 3, 5])
    def test_matches_brute_force(self, dim):
        pts = embedded_cloud(31 + dim, 1000, dim)
        grid = BoxGrid(pts)
        for i in range(0, 1000, 13):
            gj, gd = grid.nearest(i, theiler=0)
            bj, bd = brute_force_nearest(pts, i, theiler=0)
            assert gj == bj
            assert gd == pytest.approx(bd, abs=0.0)

    def test_matches_with_theiler_and_limit(self):
        pts = embedded_cloud(7, 1000, 3)
        grid = BoxGrid(pts)
        for i in range(0, 800, 17):
            gj, gd = grid.nearest(i, theiler=25, limit=800)
            bj, bd = brute_force_nearest(pts, i, theiler=25, limit=800)
            assert gj == bj

    def test_duplicate_points_tie_break(self):
        pts = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [5.0, 5.0]])
        grid = BoxGrid(pts)
        j, d = grid.nearest(3, theiler=0, exclude_zero=False)
        bj, bd = brute_force_nearest(pts, 3, theiler=0, exclude_zero=False)
        assert (j, d) == (bj, bd) == (1, 0.0)

    def test_exclude_zero(self):
        pts = np.array([[0.0, 0.0], [0.0, 0.0], [3.0, 4.0]])
        grid = BoxGrid(pts)
        j, d = grid.nearest(0, theiler=0, exclude_zero=True)
        assert j == 2
        assert d == pytest.approx(5.0)

    def test_no_candidates(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0]])
        grid = BoxGrid(pts)
        j, d = grid.nearest(0, theiler=10)
        assert j == -1

    def test_constant_coordinate(self):
        # degenerate span on one axis must not break the cell layout
        rng = np.random.default_rng(5)
        pts = np.column_stack((np.full(200, 2.0), rng.normal(size=200)))
        grid = BoxGrid(pts)
        for i in range(0, 200, 11):
            assert grid.nearest(i)[0] == brute_force_nearest(pts, i)[0]


class TestWithin:
    def test_matches_brute_force(self):
        pts = embedded_cloud(11, 1500, 3)
        grid = BoxGrid(pts)
        sigma = float(np.std(pts))
        for i in range(0, 1500, 97):
            for radius in (0.05 * sigma, 0.3 * sigma):
                got = grid.within(i, radius, theiler=10)
                diff = pts - pts[i]
                d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
                idx = np.arange(1500)
                expect = idx[(d <= radius) & (np.abs(idx - i) > 10)]
                assert np.array_equal(got, expect)

    def test_limit(self):
        pts = embedded_cloud(13, 500, 2)
        grid = BoxGrid(pts)
        got = grid.within(10, 100.0, theiler=0, limit=50)
        assert got.max() <= 50
