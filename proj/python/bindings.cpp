// Python bindings for the braid reconstruction core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "braidrec/braid.hpp"
#include "braidrec/config.hpp"
#include "braidrec/fit.hpp"
#include "braidrec/io.hpp"
#include "braidrec/losses.hpp"
#include "braidrec/raster.hpp"
#include "braidrec/refine.hpp"
#include "braidrec/types.hpp"

namespace py = pybind11;
using namespace braidrec;

namespace {

std::vector<std::tuple<double, double, double>> points_as_tuples(const Strand& s) {
  std::vector<std::tuple<double, double, double>> out;
  out.reserve(s.size());
  for (const auto& p : s.points()) out.emplace_back(p.x, p.y, p.z);
  return out;
}

Strand strand_from_tuples(const std::string& id,
                          const std::vector<std::tuple<double, double, double>>& pts) {
  std::vector<Point3> converted;
  converted.reserve(pts.size());
  for (const auto& [x, y, z] : pts) converted.emplace_back(x, y, z);
  return Strand(id, std::move(converted));
}

}  // namespace

PYBIND11_MODULE(_braidrec, m) {
  m.doc() = "Strand-based braid reconstruction: synthesis, fitting, refinement";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Point3>(m, "Point3")
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
      .def_readonly("x", &Point3::x)
      .def_readonly("y", &Point3::y)
      .def_readonly("z", &Point3::z)
      .def("__repr__", [](const Point3& p) {
        return "Point3(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
               std::to_string(p.z) + ")";
      });

  py::class_<Strand>(m, "Strand")
      .def(py::init(&strand_from_tuples), py::arg("id"), py::arg("points"))
      .def_property_readonly("id", &Strand::id)
      .def_property_readonly("points", &points_as_tuples)
      .def("__len__", &Strand::size);

  py::class_<StrandSet>(m, "StrandSet")
      .def(py::init<>())
      .def(py::init<std::vector<Strand>>(), py::arg("strands"))
      .def_property_readonly("strands", &StrandSet::strands)
      .def("total_points", &StrandSet::total_points)
      .def("find",
           [](const StrandSet& s, const std::string& id) -> std::optional<Strand> {
             const Strand* found = s.find(id);
             if (found == nullptr) return std::nullopt;
             return *found;
           },
           py::arg("id"))
      .def("__len__", &StrandSet::size);

  py::class_<GrayImage>(m, "GrayImage")
      .def(py::init<int, int>(), py::arg("width"), py::arg("height"))
      .def(py::init<int, int, std::vector<double>>(), py::arg("width"), py::arg("height"),
           py::arg("pixels"))
      .def_property_readonly("width", &GrayImage::width)
      .def_property_readonly("height", &GrayImage::height)
      .def_property_readonly("pixels", &GrayImage::pixels)
      .def("at", &GrayImage::at, py::arg("row"), py::arg("col"));

  py::class_<MidLineAnnotation>(m, "MidLineAnnotation")
      .def(py::init([](const std::vector<std::pair<double, double>>& poly, double width_px) {
             std::vector<Point2> pts;
             pts.reserve(poly.size());
             for (const auto& [x, y] : poly) pts.emplace_back(x, y);
             return MidLineAnnotation(std::move(pts), width_px);
           }),
           py::arg("polyline"), py::arg("width_px"))
      .def_property_readonly("polyline",
                             [](const MidLineAnnotation& a) {
                               std::vector<std::pair<double, double>> out;
                               out.reserve(a.polyline().size());
                               for (const auto& p : a.polyline()) out.emplace_back(p.x, p.y);
                               return out;
                             })
      .def_property_readonly("width_px", &MidLineAnnotation::width_px);

  m.def("arc_length", &arc_length, py::arg("strand"));

  py::class_<BraidParams>(m, "BraidParams")
      .def(py::init<>())
      .def_readwrite("amplitude", &BraidParams::amplitude)
      .def_readwrite("depth_amplitude", &BraidParams::depth_amplitude)
      .def_readwrite("frequency", &BraidParams::frequency)
      .def_readwrite("t_step", &BraidParams::t_step)
      .def_readwrite("t_scale", &BraidParams::t_scale)
      .def_readwrite("n_points", &BraidParams::n_points)
      .def_readwrite("n_bunches", &BraidParams::n_bunches)
      .def_readwrite("radius", &BraidParams::radius)
      .def_readwrite("shift_z", &BraidParams::shift_z)
      .def_readwrite("shift_x", &BraidParams::shift_x)
      .def_readwrite("shift_y", &BraidParams::shift_y)
      .def_readwrite("bunch_noise", &BraidParams::bunch_noise)
      .def("validate", &BraidParams::validate)
      .def("t_at", &BraidParams::t_at, py::arg("k"));

  py::class_<SyntheticBraid>(m, "SyntheticBraid")
      .def_property_readonly("params", &SyntheticBraid::params)
      .def_property_readonly("centerlines", &SyntheticBraid::centerlines)
      .def_property_readonly("tube_strands", &SyntheticBraid::tube_strands)
      .def_property_readonly("bunch_of", &SyntheticBraid::bunch_of)
      .def_property_readonly("radius_profile", &SyntheticBraid::radius_profile)
      .def_property_readonly("n_bunches", &SyntheticBraid::n_bunches);

  m.def("generate", &generate, py::arg("params"), py::arg("seed") = 0);
  m.def("midlines_eq1", &midlines_eq1, py::arg("a"), py::arg("b"), py::arg("t_values"),
        py::arg("n_bunches"));
  m.def("centerline_distance", &centerline_distance, py::arg("point"), py::arg("braid"),
        py::arg("bunch"));

  py::class_<ProjectionSpec>(m, "ProjectionSpec")
      .def(py::init([](int width, int height) { return ProjectionSpec{width, height}; }),
           py::arg("width") = 256, py::arg("height") = 512)
      .def_readwrite("width", &ProjectionSpec::width)
      .def_readwrite("height", &ProjectionSpec::height);

  py::class_<CannyConfig>(m, "CannyConfig")
      .def(py::init<>())
      .def_readwrite("gaussian_sigma", &CannyConfig::gaussian_sigma)
      .def_readwrite("low_threshold", &CannyConfig::low_threshold)
      .def_readwrite("high_threshold", &CannyConfig::high_threshold)
      .def("validate", &CannyConfig::validate);

  m.def("rasterize_tube",
        [](const StrandSet& strands, const std::vector<double>& radii, const ProjectionSpec& spec,
           double softness) { return rasterize_tube(strands, radii, spec, softness); },
        py::arg("strands"), py::arg("radii"), py::arg("spec"), py::arg("softness"));
  m.def("edge_image_synthetic", &edge_image_synthetic, py::arg("braid"), py::arg("spec"),
        py::arg("softness"));
  m.def("canny", &canny, py::arg("image"), py::arg("cfg"));
  m.def("mask_strands", &mask_strands, py::arg("strands"), py::arg("mask"), py::arg("spec"),
        py::arg("threshold"));

  py::class_<LossWeights>(m, "LossWeights")
      .def(py::init<>())
      .def_readwrite("lambda_pc", &LossWeights::lambda_pc)
      .def_readwrite("lambda_proj", &LossWeights::lambda_proj)
      .def_readwrite("lambda_reg", &LossWeights::lambda_reg)
      .def_readwrite("lambda_reg_b", &LossWeights::lambda_reg_b)
      .def_readwrite("b_anchor", &LossWeights::b_anchor)
      .def_readwrite("bce_epsilon", &LossWeights::bce_epsilon)
      .def("validate", &LossWeights::validate);

  py::class_<LossReport>(m, "LossReport")
      .def_readonly("l_pc", &LossReport::l_pc)
      .def_readonly("l_proj", &LossReport::l_proj)
      .def_readonly("l_reg", &LossReport::l_reg)
      .def_readonly("l_total", &LossReport::l_total);

  m.def("chamfer", &chamfer, py::arg("s1"), py::arg("s2"));
  m.def("projection_bce", &projection_bce, py::arg("real_edges"), py::arg("synth_edges"),
        py::arg("eps") = 1e-7);
  m.def("depth_regularizer",
        [](const std::vector<double>& z, double delta_t, double b, double lambda,
           double b_anchor) { return depth_regularizer(z, delta_t, b, lambda, b_anchor); },
        py::arg("z"), py::arg("delta_t"), py::arg("b"), py::arg("lambda_"),
        py::arg("b_anchor") = 10.0);

  py::class_<LearnableMask>(m, "LearnableMask")
      .def(py::init<>())
      .def_readwrite("amplitude", &LearnableMask::amplitude)
      .def_readwrite("depth_amplitude", &LearnableMask::depth_amplitude)
      .def_readwrite("frequency", &LearnableMask::frequency)
      .def_readwrite("t_scale", &LearnableMask::t_scale)
      .def_readwrite("radius", &LearnableMask::radius)
      .def_readwrite("shift_z", &LearnableMask::shift_z);

  py::class_<FitConfig>(m, "FitConfig")
      .def(py::init<>())
      .def_readwrite("epochs", &FitConfig::epochs)
      .def_readwrite("lr", &FitConfig::lr)
      .def_readwrite("lr_drop_epochs", &FitConfig::lr_drop_epochs)
      .def_readwrite("lr_drop_factor", &FitConfig::lr_drop_factor)
      .def_readwrite("fd_step", &FitConfig::fd_step)
      .def_readwrite("learnable", &FitConfig::learnable)
      .def_readwrite("seed", &FitConfig::seed)
      .def_readwrite("n_points", &FitConfig::n_points)
      .def_readwrite("n_bunches", &FitConfig::n_bunches)
      .def_readwrite("softness", &FitConfig::softness)
      .def("validate", &FitConfig::validate);

  py::class_<FitTrace>(m, "FitTrace")
      .def_readonly("reports", &FitTrace::reports)
      .def_readonly("lrs", &FitTrace::lrs)
      .def_readonly("final_params", &FitTrace::final_params)
      .def_readonly("final_report", &FitTrace::final_report)
      .def_readonly("wall_seconds", &FitTrace::wall_seconds)
      .def_readonly("diverged", &FitTrace::diverged);

  m.def("initialize", &initialize, py::arg("midline"), py::arg("braid_strands"), py::arg("cfg"));
  m.def("fit_from", &fit_from, py::arg("start"), py::arg("coarse_braid"), py::arg("real_edges"),
        py::arg("weights"), py::arg("cfg"));
  m.def("fit", &fit, py::arg("coarse_braid"), py::arg("real_edges"), py::arg("midline"),
        py::arg("weights"), py::arg("cfg"));
  m.def("adjust_radius", &adjust_radius, py::arg("braid"));

  py::class_<RefineConfig>(m, "RefineConfig")
      .def(py::init<>())
      .def_readwrite("inclusion_factor", &RefineConfig::inclusion_factor)
      .def_readwrite("downsample_keep_every", &RefineConfig::downsample_keep_every)
      .def_readwrite("smooth_window", &RefineConfig::smooth_window)
      .def_readwrite("balance", &RefineConfig::balance)
      .def_readwrite("mask_threshold", &RefineConfig::mask_threshold)
      .def("validate", &RefineConfig::validate);

  py::class_<Allocation>(m, "Allocation")
      .def(py::init<>())
      .def_readwrite("bunch_of", &Allocation::bunch_of)
      .def_readwrite("rejected", &Allocation::rejected);

  m.def("allocate", &allocate, py::arg("coarse_braid"), py::arg("braid"), py::arg("cfg"));
  m.def("reconstruct_bunch", &reconstruct_bunch, py::arg("strands"), py::arg("braid"),
        py::arg("bunch"));
  m.def("replace_and_attach", &replace_and_attach, py::arg("original"), py::arg("reconstructed"),
        py::arg("allocation"));
  m.def("downsample_smooth", &downsample_smooth, py::arg("strands"), py::arg("cfg"));
  m.def("refine_all", &refine_all, py::arg("coarse_full"), py::arg("mask"), py::arg("braid"),
        py::arg("cfg"), py::arg("spec"));

  m.def("load_strands", &load_strands, py::arg("path"));
  m.def("save_strands", &save_strands, py::arg("set"), py::arg("path"));
  m.def("load_annotation", &load_annotation, py::arg("path"));
  m.def("save_annotation", &save_annotation, py::arg("midline"), py::arg("path"));
  m.def("load_mask", &load_mask, py::arg("path"));
  m.def("save_pgm", &save_pgm, py::arg("image"), py::arg("path"));
  m.def("export_ply", &export_ply, py::arg("set"), py::arg("color_by_bunch"), py::arg("path"));
  m.def("load_params", &load_params, py::arg("path"));
  m.def("save_params", &save_params, py::arg("params"), py::arg("path"));

  py::class_<SimulatedCoarse>(m, "SimulatedCoarse")
      .def_readonly("strands", &SimulatedCoarse::strands)
      .def_readonly("mask", &SimulatedCoarse::mask)
      .def_readonly("edges", &SimulatedCoarse::edges);

  m.def("simulate_coarse", &simulate_coarse, py::arg("truth"), py::arg("noise_sigma"),
        py::arg("strands_per_bunch"), py::arg("seed"), py::arg("spec"));
}
