"""Smoke tests for the Python bindings: exercise each main operation once."""

import math

import pytest

import braidrec as br


@pytest.fixture(scope="module")
def braid():
    return br.generate(br.BraidParams(), 3)


def test_generate_shapes(braid):
    assert braid.n_bunches == 3
    assert len(braid.centerlines) == 3
    assert len(braid.tube_strands) == 3 * 7  # centerline + 6 surface strands per bunch
    assert all(len(s) == 200 for s in braid.centerlines)
    assert len(braid.radius_profile) == 3


def test_generate_is_pure(braid):
    again = br.generate(br.BraidParams(), 3)
    assert braid.centerlines[0].points == again.centerlines[0].points


def test_params_validation():
    p = br.BraidParams()
    p.n_bunches = 1
    with pytest.raises(ValueError):
        p.validate()


def test_midlines_eq1():
    lines = br.midlines_eq1(2.0, 1.0, [0.0, 0.5, 1.0], 3)
    assert len(lines) == 3
    x, y, z = lines[0].points[1]
    assert x == pytest.approx(2.0 * math.sin(0.5))
    assert y == 0.5


def test_chamfer_self_zero(braid):
    assert br.chamfer(braid.tube_strands, braid.tube_strands) == 0.0


def test_chamfer_symmetry(braid):
    other = br.StrandSet([br.Strand("a", [(0, 0, 0), (1, 1, 1), (2, 0, 0)])])
    assert br.chamfer(braid.tube_strands, other) == br.chamfer(other, braid.tube_strands)


def test_projection_bce_ln2():
    real = br.GrayImage(4, 4, [0.0] * 8 + [1.0] * 8)
    half = br.GrayImage(4, 4, [0.5] * 16)
    assert br.projection_bce(real, half, 1e-7) == pytest.approx(math.log(2.0), abs=1e-12)


def test_depth_regularizer_linear_z():
    z = [0.25 * k for k in range(10)]
    assert br.depth_regularizer(z, 1.0, 10.0, 1.0) == 0.0
    assert br.depth_regularizer(z, 1.0, 12.0, 1.0) == 2.0


def test_rasterize_and_mask_strands(braid):
    spec = br.ProjectionSpec(64, 32)
    strand = br.Strand("s", [(10.0, 5.0, 0.0), (20.0, 5.0, 0.0)])
    img = br.rasterize_tube(br.StrandSet([strand]), [3.0, 3.0], spec, 1.0)
    assert img.at(5, 10) == 1.0
    inside, outside = br.mask_strands(br.StrandSet([strand]), img, spec, 0.5)
    assert len(inside) == 1 and len(outside) == 0


def test_canny_finds_an_edge():
    w, h = 32, 32
    pixels = [1.0 if c >= 16 else 0.0 for _ in range(h) for c in range(w)]
    edges = br.canny(br.GrayImage(w, h, pixels), br.CannyConfig())
    assert sum(edges.pixels) > 0
    assert set(edges.pixels) <= {0.0, 1.0}


def test_simulate_fit_refine_roundtrip(tmp_path):
    truth = br.BraidParams()
    truth.shift_x = [64.0] * truth.n_points
    spec = br.ProjectionSpec(128, 64)
    sim = br.simulate_coarse(truth, 0.5, 3, 11, spec)
    assert len(sim.strands) == 9
    assert set(sim.mask.pixels) <= {0.0, 1.0}

    cfg = br.FitConfig()
    cfg.epochs = 2
    cfg.seed = 11
    start = br.generate(truth, 11).params
    trace = br.fit_from(start, sim.strands, sim.edges, br.LossWeights(), cfg)
    assert not trace.diverged
    assert len(trace.reports) == cfg.epochs
    assert trace.final_report.l_total <= trace.reports[0].l_total

    braid = br.generate(trace.final_params, 11)
    refined = br.refine_all(sim.strands, sim.mask, braid, br.RefineConfig(), spec)
    assert sorted(s.id for s in refined.strands) == sorted(s.id for s in sim.strands.strands)


def test_allocate_and_reconstruct(braid):
    strand = br.Strand("lone", [(40.0, 0.0, 0.0), (40.0, 1.0, 0.0), (40.0, 2.0, 0.0)])
    alloc = br.allocate(br.StrandSet([strand]), braid, br.RefineConfig())
    assert "lone" in alloc.bunch_of or "lone" in alloc.rejected
    rec = br.reconstruct_bunch(br.StrandSet([strand]), braid, 0)
    assert len(rec.strands[0]) == 3
    for p in rec.strands[0].points:
        d, idx = br.centerline_distance(br.Point3(*p), braid, 0)
        assert d <= braid.radius_profile[0][idx] + 1e-9


def test_downsample_smooth_keeps_endpoints():
    pts = [(float(k), float(k), 0.0) for k in range(11)]
    out = br.downsample_smooth(br.StrandSet([br.Strand("s", pts)]), br.RefineConfig())
    assert out.strands[0].points[0] == pts[0]
    assert out.strands[0].points[-1] == pts[-1]


def test_io_roundtrips(tmp_path, braid):
    spath = str(tmp_path / "set.strands")
    br.save_strands(braid.tube_strands, spath)
    loaded = br.load_strands(spath)
    assert len(loaded) == len(braid.tube_strands)
    assert loaded.find("missing-id") is None

    ppath = str(tmp_path / "braid.params")
    br.save_params(braid.params, ppath)
    back = br.load_params(ppath)
    assert back.amplitude == braid.params.amplitude
    assert back.bunch_noise == braid.params.bunch_noise

    ipath = str(tmp_path / "mask.pgm")
    img = br.GrayImage(8, 4, [v / 31.0 for v in range(32)])
    br.save_pgm(img, ipath)
    reload = br.load_mask(ipath)
    assert reload.width == 8 and reload.height == 4

    apath = str(tmp_path / "mid.midline")
    br.save_annotation(br.MidLineAnnotation([(3.0, 0.0), (4.0, 9.0)], 12.5), apath)
    ann = br.load_annotation(apath)
    assert ann.width_px == 12.5 and ann.polyline[0] == (3.0, 0.0)

    br.export_ply(braid.tube_strands, None, str(tmp_path / "cloud.ply"))
    assert (tmp_path / "cloud.ply").read_text().startswith("ply")

    with pytest.raises(OSError):
        br.load_strands(str(tmp_path / "nope.strands"))
    (tmp_path / "bad.strands").write_text("STRANDS zero\n")
    with pytest.raises(ValueError):
        br.load_strands(str(tmp_path / "bad.strands"))
