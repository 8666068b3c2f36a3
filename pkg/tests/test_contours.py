import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from lester.contours import (
    Contour,
    SimplifyParams,
    SubMask,
    can_simplify,
    contour_area,
    dilate,
    signed_area,
    simplify_all,
    simplify_dp,
    simplify_open_chain,
    split_submasks,
    trace_contours,
)
from lester.render import region_mask

from ._oracles import components_and_holes, dilate_brute, rdp_open, rdp_ring

small_bitmaps = hnp.arrays(
    dtype=bool, shape=st.tuples(st.integers(1, 24), st.integers(1, 24))
)


class TestSplitSubmasks:
    def test_partition(self):
        m = np.zeros((6, 6), np.uint8)
        m[0:3, :] = 1
        m[4:6, :] = 2
        subs = split_submasks(m)
        assert [s.label_id for s in subs] == [1, 2]
        union = np.zeros_like(m, dtype=bool)
        for s in subs:
            assert not (union & s.bitmap).any()  # pairwise disjoint
            union |= s.bitmap
        assert (union == (m != 0)).all()

    def test_all_zero(self):
        assert split_submasks(np.zeros((4, 4), np.uint8)) == []

    def test_disconnected_blobs_one_submask(self):
        m = np.zeros((8, 8), np.uint8)
        m[0, 0] = 3
        m[7, 7] = 3
        subs = split_submasks(m)
        assert len(subs) == 1
        assert subs[0].bitmap.sum() == 2

    def test_z_order(self):
        m = np.zeros((4, 4), np.uint8)
        m[0] = 1
        m[1] = 2
        assert [s.label_id for s in split_submasks(m, order=(2, 1))] == [2, 1]


class TestTraceContours:
    def test_solid_block(self):
        bm = np.zeros((5, 5), bool)
        bm[0:3, 0:3] = True
        cs = trace_contours(SubMask(1, bm))
        assert len(cs) == 1
        assert cs[0].role == "outer"
        assert cs[0].parent is None
        assert signed_area(cs[0].vertices) == 9.0

    def test_ring_with_hole(self):
        bm = np.zeros((5, 5), bool)
        bm[0:5, 0:5] = True
        bm[2, 2] = False
        cs = trace_contours(SubMask(1, bm))
        assert [c.role for c in cs] == ["outer", "hole"]
        assert cs[1].parent == 0
        assert signed_area(cs[0].vertices) == 25.0
        assert signed_area(cs[1].vertices) == -1.0
        # independent flood-fill oracle agrees on the topology
        assert components_and_holes(bm.tolist()) == (1, 1)

    def test_empty(self):
        assert trace_contours(SubMask(1, np.zeros((3, 3), bool))) == []

    def test_orientation_convention(self, rng):
        for _ in range(10):
            bm = rng.random((12, 12)) < 0.5
            for c in trace_contours(SubMask(1, bm)):
                if c.role == "outer":
                    assert signed_area(c.vertices) > 0
                else:
                    assert signed_area(c.vertices) < 0

    def test_topology_matches_flood_oracle(self, rng):
        for _ in range(20):
            bm = rng.random((14, 14)) < rng.uniform(0.3, 0.7)
            cs = trace_contours(SubMask(1, bm))
            outers = sum(1 for c in cs if c.role == "outer")
            holes = sum(1 for c in cs if c.role == "hole")
            assert (outers, holes) == components_and_holes(bm.tolist())

    def test_hole_parent_is_enclosing_outer(self):
        bm = np.zeros((10, 14), bool)
        bm[1:5, 1:5] = True
        bm[2, 2] = False  # hole in component A
        bm[1:8, 7:13] = True
        bm[3:5, 9:11] = False  # hole in component B
        cs = trace_contours(SubMask(1, bm))
        for c in cs:
            if c.role == "hole":
                outer = cs[c.parent]
                assert outer.role == "outer"
                # hole fully inside the outer's filled bbox
                ov, hv = outer.vertices, c.vertices
                assert ov[:, 0].min() <= hv[:, 0].min() <= hv[:, 0].max() <= ov[:, 0].max()
                assert ov[:, 1].min() <= hv[:, 1].min() <= hv[:, 1].max() <= ov[:, 1].max()

    def test_deterministic(self, rng):
        bm = rng.random((16, 16)) < 0.5
        a = trace_contours(SubMask(1, bm))
        b = trace_contours(SubMask(1, bm))
        assert len(a) == len(b)
        for ca, cb in zip(a, b):
            assert ca.role == cb.role and ca.parent == cb.parent
            assert (ca.vertices == cb.vertices).all()

    @settings(max_examples=60, deadline=None, derandomize=True)
    @given(bm=small_bitmaps)
    def test_roundtrip_property(self, bm):
        cs = trace_contours(SubMask(1, bm))
        h, w = bm.shape
        assert (region_mask(cs, w, h) == bm).all()


class TestContourArea:
    def test_square(self):
        c = Contour(np.array([[0, 0], [10, 0], [10, 10], [0, 10]], np.int32), "outer")
        assert contour_area(c) == 100.0

    def test_triangle(self):
        c = Contour(np.array([[0, 0], [4, 0], [0, 3]], np.int32), "outer")
        assert contour_area(c) == 6.0

    def test_two_vertices(self):
        c = Contour(np.array([[0, 0], [5, 5]], np.int32), "outer")
        assert contour_area(c) == 0.0


class TestDilate:
    def test_single_pixel_example(self):
        bm = np.zeros((12, 12), bool)
        bm[5, 5] = True
        out = dilate(SubMask(1, bm)).bitmap
        expect = np.zeros_like(bm)
        expect[4:8, 4:8] = True
        assert (out == expect).all()

    def test_empty(self):
        bm = np.zeros((6, 6), bool)
        assert not dilate(SubMask(1, bm)).bitmap.any()

    def test_full(self):
        bm = np.ones((6, 6), bool)
        assert dilate(SubMask(1, bm)).bitmap.all()

    @settings(max_examples=60, deadline=None, derandomize=True)
    @given(bm=small_bitmaps)
    def test_matches_brute_oracle(self, bm):
        out = dilate(SubMask(1, bm)).bitmap
        assert out.tolist() == dilate_brute(bm.tolist())

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(bm=small_bitmaps)
    def test_extensive_and_monotone(self, bm):
        d = dilate(SubMask(1, bm)).bitmap
        assert (d | bm == d).all()  # A subset of dilate(A)
        sub = bm.copy()
        sub[0 :: 2] = False
        ds = dilate(SubMask(1, sub)).bitmap
        assert (ds | d == d).all()  # monotone in the input


class TestSimplifyDp:
    def test_collinear_removed(self):
        out = simplify_open_chain(np.array([[0, 0], [5, 0], [10, 0]], float), 1.0)
        assert out.tolist() == [[0, 0], [10, 0]]

    def test_small_deviation_removed(self):
        out = simplify_open_chain(np.array([[0, 0], [5, 0.5], [10, 0]]), 1.0)
        assert out.tolist() == [[0, 0], [10, 0]]

    def test_large_deviation_kept(self):
        out = simplify_open_chain(np.array([[0, 0], [5, 3], [10, 0]], float), 1.0)
        assert out.tolist() == [[0, 0], [5, 3], [10, 0]]

    def test_requires_three_vertices(self):
        c = Contour(np.array([[0, 0], [1, 1]], np.int32), "outer")
        with pytest.raises(ValueError, match=">= 3"):
            simplify_dp(c, 1.0)

    def test_ring_matches_reference(self, rng):
        for _ in range(25):
            bm = rng.random((20, 20)) < rng.uniform(0.3, 0.7)
            for c in trace_contours(SubMask(1, bm)):
                for t in (0.5, 1.0, 2.0, 4.0):
                    got = simplify_dp(c, t).vertices.tolist()
                    want = [list(p) for p in rdp_ring([tuple(v) for v in c.vertices.tolist()], t)]
                    assert got == want

    def test_open_matches_reference(self, rng):
        for _ in range(50):
            n = int(rng.integers(3, 60))
            pts = rng.uniform(0, 40, size=(n, 2))
            for t in (0.5, 1.0, 2.0, 4.0):
                got = simplify_open_chain(pts, t).tolist()
                want = [list(p) for p in rdp_open([tuple(p) for p in pts.tolist()], t)]
                assert got == want

    def test_subset_and_deviation(self, rng):
        for _ in range(20):
            bm = rng.random((24, 24)) < 0.5
            for c in trace_contours(SubMask(1, bm)):
                t = float(rng.uniform(0.5, 4.0))
                out = simplify_dp(c, t).vertices
                in_set = {tuple(v) for v in c.vertices.tolist()}
                assert all(tuple(v) in in_set for v in out.tolist())
                from ._oracles import seg_dist2

                ring = out.tolist() + [out.tolist()[0]]
                for vx, vy in c.vertices.tolist():
                    dmin = min(
                        seg_dist2(vx, vy, ax, ay, bx, by)
                        for (ax, ay), (bx, by) in zip(ring, ring[1:])
                    )
                    assert dmin <= t * t + 1e-9


class TestCanSimplify:
    def test_large_noisy_square(self, rng):
        bm = np.zeros((40, 40), bool)
        bm[4:36, 4:36] = True
        noise = rng.random((40, 40)) < 0.05
        bm[4:36, 4:36] ^= noise[4:36, 4:36]
        for c in trace_contours(SubMask(1, bm)):
            if c.role == "outer" and contour_area(c) > 100:
                assert can_simplify(c, 2.0)

    def test_micro_contour_collapses(self):
        bm = np.zeros((8, 8), bool)
        bm[3, 3] = True
        c = trace_contours(dilate(SubMask(1, bm)))[0]
        assert can_simplify(c, 5.0) is False

    def test_t_zero_always_true(self, rng):
        for _ in range(10):
            bm = rng.random((12, 12)) < 0.5
            for c in trace_contours(SubMask(1, bm)):
                assert can_simplify(c, 0.0) is True


class TestSimplifyAll:
    def test_area_filter_drops_small(self):
        m = np.zeros((32, 32), bool)
        m[2, 2] = True  # dilates to 4x4 = 16 px^2, not > 16
        out = simplify_all([SubMask(1, m)], SimplifyParams(alpha=16.0, t=2.0))
        assert out == [[]]

    def test_micro_contour_keeps_dilated_vertices(self):
        m = np.zeros((32, 32), bool)
        m[5, 5] = True
        dilated = trace_contours(dilate(SubMask(1, m)))[0]
        out = simplify_all([SubMask(1, m)], SimplifyParams(alpha=10.0, t=10.0))
        assert len(out[0]) == 1
        assert (out[0][0].vertices == dilated.vertices).all()

    def test_blob_has_fewer_vertices(self, rng):
        m = np.zeros((32, 32), bool)
        yy, xx = np.mgrid[0:32, 0:32]
        m[((xx - 16) ** 2 + (yy - 14) ** 2) < 120] = True
        m ^= rng.random((32, 32)) < 0.02
        traced = trace_contours(dilate(SubMask(1, m)))
        out = simplify_all([SubMask(1, m)], SimplifyParams(alpha=16.0, t=3.0))
        traced_big = [c for c in traced if contour_area(c) > 16.0]
        assert sum(len(c.vertices) for c in out[0]) < sum(
            len(c.vertices) for c in traced_big
        )
        # cross-check counts against the reference ring DP
        for got, orig in zip(out[0], traced_big):
            if can_simplify(orig, 3.0):
                want = rdp_ring([tuple(v) for v in orig.vertices.tolist()], 3.0)
                assert len(got.vertices) == len(want)

    def test_parent_remap(self):
        m = np.zeros((32, 32), bool)
        m[2, 2] = True  # traced first; dilated area 16 <= alpha, so dropped
        m[8:28, 8:28] = True
        m[14:22, 14:22] = False  # 8x8 hole survives dilation as 5x5 (area 25)
        out = simplify_all([SubMask(1, m)], SimplifyParams(alpha=17.0, t=0.0))
        roles = [c.role for c in out[0]]
        assert roles == ["outer", "hole"]
        hole = out[0][roles.index("hole")]
        assert out[0][hole.parent].role == "outer"

    def test_t0_alpha0_preserves_regions(self, rng):
        for _ in range(10):
            bm = rng.random((16, 16)) < 0.5
            sub = SubMask(1, bm)
            out = simplify_all([sub], SimplifyParams(alpha=0.0, t=0.0))
            want = dilate(sub).bitmap
            assert (region_mask(out[0], 16, 16) == want).all()


def test_simplify_params_validation():
    with pytest.raises(ValueError):
        SimplifyParams(alpha=-1.0, t=0.0)
    with pytest.raises(ValueError):
        SimplifyParams(alpha=0.0, t=-0.5)
