#include "braidrec/io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "braidrec/rng.hpp"

namespace braidrec {

namespace {

std::string fmt_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

bool blank(const std::string& line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Reads lines and keeps a 1-based line counter for parse errors.
struct LineReader {
  std::istream& in;
  long line_no = 0;

  std::optional<std::string> next_content_line() {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!blank(line)) return line;
    }
    return std::nullopt;
  }
};

}  // namespace

StrandSet load_strands(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  LineReader reader{in};

  auto header = reader.next_content_line();
  if (!header) throw ParseError(1, "missing STRANDS header");
  std::istringstream hs(*header);
  std::string tag;
  long n = -1;
  if (!(hs >> tag >> n) || tag != "STRANDS" || n < 0) {
    throw ParseError(reader.line_no, "expected 'STRANDS <n>'");
  }
  std::string extra;
  if (hs >> extra) throw ParseError(reader.line_no, "trailing content after strand count");

  std::vector<Strand> strands;
  strands.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    auto sh = reader.next_content_line();
    if (!sh) throw ParseError(reader.line_no + 1, "unexpected end of file: expected 'S <id> <k>'");
    std::istringstream ss(*sh);
    std::string s_tag, id;
    long k = -1;
    if (!(ss >> s_tag >> id >> k) || s_tag != "S" || k < 2) {
      throw ParseError(reader.line_no, "expected 'S <id> <k>' with k >= 2");
    }
    if (ss >> extra) throw ParseError(reader.line_no, "trailing content after point count");
    const long strand_line = reader.line_no;

    std::vector<Point3> pts;
    pts.reserve(static_cast<std::size_t>(k));
    for (long j = 0; j < k; ++j) {
      auto pl = reader.next_content_line();
      if (!pl) throw ParseError(reader.line_no + 1, "unexpected end of file: expected coordinates");
      std::istringstream ps(*pl);
      double x, y, z;
      if (!(ps >> x >> y >> z)) throw ParseError(reader.line_no, "expected '<x> <y> <z>'");
      if (ps >> extra) throw ParseError(reader.line_no, "trailing content after coordinates");
      try {
        pts.emplace_back(x, y, z);
      } catch (const ValidationError& e) {
        throw ParseError(reader.line_no, e.what());
      }
    }
    try {
      strands.emplace_back(id, std::move(pts));
    } catch (const ValidationError& e) {
      throw ParseError(strand_line, e.what());
    }
  }
  if (auto tail = reader.next_content_line()) {
    throw ParseError(reader.line_no, "trailing content after last strand");
  }
  try {
    return StrandSet(std::move(strands));
  } catch (const ValidationError& e) {
    throw ParseError(reader.line_no, e.what());
  }
}

void save_strands(const StrandSet& set, const std::string& path) {
  for (const auto& s : set.strands()) {
    if (s.id().empty() || s.id().find_first_of(" \t\n\r") != std::string::npos) {
      throw ValidationError("bad-strand-id", "strand id unusable in text format: '" + s.id() + "'");
    }
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "STRANDS " << set.size() << "\n";
  for (const auto& s : set.strands()) {
    out << "S " << s.id() << " " << s.size() << "\n";
    for (const auto& p : s.points()) {
      out << fmt_g(p.x, 9) << " " << fmt_g(p.y, 9) << " " << fmt_g(p.z, 9) << "\n";
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

MidLineAnnotation load_annotation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  LineReader reader{in};

  auto header = reader.next_content_line();
  if (!header) throw ParseError(1, "missing MIDLINE header");
  std::istringstream hs(*header);
  std::string tag, width_field;
  long count = -1;
  if (!(hs >> tag >> count >> width_field) || tag != "MIDLINE" || count < 2) {
    throw ParseError(reader.line_no, "expected 'MIDLINE <count> width_px=<w>' with count >= 2");
  }
  constexpr const char* kPrefix = "width_px=";
  if (width_field.rfind(kPrefix, 0) != 0) {
    throw ParseError(reader.line_no, "expected width_px=<w> field");
  }
  double width = 0.0;
  std::istringstream ws(width_field.substr(std::strlen(kPrefix)));
  std::string extra;
  if (!(ws >> width) || (ws >> extra)) {
    throw ParseError(reader.line_no, "bad width_px value");
  }
  if (hs >> extra) throw ParseError(reader.line_no, "trailing content in MIDLINE header");

  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    auto pl = reader.next_content_line();
    if (!pl) throw ParseError(reader.line_no + 1, "unexpected end of file: expected '<x> <y>'");
    std::istringstream ps(*pl);
    double x, y;
    if (!(ps >> x >> y)) throw ParseError(reader.line_no, "expected '<x> <y>'");
    if (ps >> extra) throw ParseError(reader.line_no, "trailing content after point");
    try {
      pts.emplace_back(x, y);
    } catch (const ValidationError& e) {
      throw ParseError(reader.line_no, e.what());
    }
  }
  if (reader.next_content_line()) {
    throw ParseError(reader.line_no, "trailing content after mid-line points");
  }
  return MidLineAnnotation(std::move(pts), width);
}

void save_annotation(const MidLineAnnotation& midline, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "MIDLINE " << midline.polyline().size() << " width_px=" << fmt_g(midline.width_px(), 9)
      << "\n";
  for (const auto& p : midline.polyline()) {
    out << fmt_g(p.x, 9) << " " << fmt_g(p.y, 9) << "\n";
  }
  if (!out) throw IoError("write failed for " + path);
}

namespace {

// PGM header token reader: skips whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
    } else if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      break;
    }
  }
  while ((c = in.get()) != EOF && !std::isspace(c) && c != '#') {
    tok.push_back(static_cast<char>(c));
  }
  if (c == '#') in.unget();
  return tok;
}

long pgm_int(std::istream& in, const char* what) {
  const std::string tok = pgm_token(in);
  if (tok.empty()) throw ValidationError("decode-error", std::string("missing PGM ") + what);
  try {
    std::size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("decode-error", std::string("bad PGM ") + what + ": " + tok);
  }
}

GrayImage load_pgm(std::istream& in, bool binary) {
  const long w = pgm_int(in, "width");
  const long h = pgm_int(in, "height");
  const long maxval = pgm_int(in, "maxval");
  if (w <= 0 || h <= 0) throw ValidationError("decode-error", "bad PGM dimensions");
  if (maxval != 255) {
    throw ValidationError("unsupported-format", "only 8-bit PGM (maxval 255) is supported");
  }
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<double> px(count);
  if (binary) {
    // pgm_token already consumed the single whitespace after maxval
    std::vector<unsigned char> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
      throw ValidationError("decode-error", "truncated PGM payload");
    }
    for (std::size_t i = 0; i < count; ++i) px[i] = raw[i] / 255.0;
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const long v = pgm_int(in, "pixel");
      if (v < 0 || v > 255) throw ValidationError("decode-error", "PGM pixel out of range");
      px[i] = v / 255.0;
    }
  }
  return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(px));
}

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngReadGuard() {
    if (png != nullptr) png_destroy_read_struct(&png, info != nullptr ? &info : nullptr, nullptr);
    if (fp != nullptr) std::fclose(fp);
  }
};

GrayImage load_png(const std::string& path) {
  PngReadGuard g;
  g.fp = std::fopen(path.c_str(), "rb");
  if (g.fp == nullptr) throw IoError("cannot open " + path);

  png_byte sig[8];
  if (std::fread(sig, 1, 8, g.fp) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw ValidationError("decode-error", "not a PNG file: " + path);
  }
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (g.png == nullptr) throw IoError("libpng init failed");
  g.info = png_create_info_struct(g.png);
  if (g.info == nullptr) throw IoError("libpng init failed");

  if (setjmp(png_jmpbuf(g.png))) {
    throw ValidationError("decode-error", "PNG decode failed: " + path);
  }
  png_init_io(g.png, g.fp);
  png_set_sig_bytes(g.png, 8);
  png_read_info(g.png, g.info);

  const png_uint_32 w = png_get_image_width(g.png, g.info);
  const png_uint_32 h = png_get_image_height(g.png, g.info);
  const int depth = png_get_bit_depth(g.png, g.info);
  const int color = png_get_color_type(g.png, g.info);
  if (color != PNG_COLOR_TYPE_GRAY || depth != 8) {
    throw ValidationError("unsupported-format", "mask PNG must be 8-bit grayscale");
  }
  png_set_interlace_handling(g.png);
  png_read_update_info(g.png, g.info);
  if (png_get_rowbytes(g.png, g.info) != w) {
    throw ValidationError("decode-error", "unexpected PNG row size");
  }

  std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 r = 0; r < h; ++r) rows[r] = raw.data() + static_cast<std::size_t>(r) * w;
  png_read_image(g.png, rows.data());

  std::vector<double> px(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) px[i] = raw[i] / 255.0;
  return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(px));
}

}  // namespace

GrayImage load_mask(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open " + path);
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  if (probe.gcount() != 2) throw ValidationError("decode-error", "file too short: " + path);

  if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '2')) {
    return load_pgm(probe, magic[1] == '5');
  }
  if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
    probe.close();
    return load_png(path);
  }
  throw ValidationError("unsupported-format", "mask must be 8-bit grayscale PNG or PGM: " + path);
}

void save_pgm(const GrayImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
  std::vector<unsigned char> raw(image.pixels().size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = static_cast<unsigned char>(std::lround(image.pixels()[i] * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("write failed for " + path);
}

void export_ply(const StrandSet& set, const std::optional<Allocation>& color_by_bunch,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << set.total_points() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";

  static constexpr int kPalette[3][3] = {{255, 0, 0}, {0, 0, 255}, {0, 255, 0}};
  for (const auto& s : set.strands()) {
    int rgb[3] = {128, 128, 128};
    if (color_by_bunch) {
      const auto it = color_by_bunch->bunch_of.find(s.id());
      if (it != color_by_bunch->bunch_of.end()) {
        const int* c = kPalette[it->second % 3];  // colors repeat past three bunches
        rgb[0] = c[0];
        rgb[1] = c[1];
        rgb[2] = c[2];
      }
    }
    for (const auto& p : s.points()) {
      out << fmt_g(p.x, 9) << " " << fmt_g(p.y, 9) << " " << fmt_g(p.z, 9) << " " << rgb[0] << " "
          << rgb[1] << " " << rgb[2] << "\n";
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

namespace {

std::vector<double> parse_double_list(const std::string& value, long line) {
  std::vector<double> out;
  if (value.empty()) return out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError(line, "bad number in list: '" + item + "'");
    }
  }
  return out;
}

std::string join_double_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += fmt_g(values[i], 17);
  }
  return out;
}

}  // namespace

BraidParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  BraidParams p;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line) || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "amplitude") {
        p.amplitude = std::stod(value);
      } else if (key == "depth_amplitude") {
        p.depth_amplitude = std::stod(value);
      } else if (key == "frequency") {
        p.frequency = std::stod(value);
      } else if (key == "t_step") {
        p.t_step = std::stod(value);
      } else if (key == "t_scale") {
        p.t_scale = std::stod(value);
      } else if (key == "n_points") {
        p.n_points = std::stoi(value);
      } else if (key == "n_bunches") {
        p.n_bunches = std::stoi(value);
      } else if (key == "radius") {
        p.radius = std::stod(value);
      } else if (key == "shift_z") {
        p.shift_z = std::stod(value);
      } else if (key == "bunch_noise") {
        p.bunch_noise = parse_double_list(value, line_no);
      } else if (key == "shift_x") {
        p.shift_x = parse_double_list(value, line_no);
      } else if (key == "shift_y") {
        p.shift_y = parse_double_list(value, line_no);
      } else {
        throw ParseError(line_no, "unknown parameter key: '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad value for '" + key + "': '" + value + "'");
    }
  }
  p.validate();
  return p;
}

void save_params(const BraidParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "amplitude=" << fmt_g(params.amplitude, 17) << "\n";
  out << "depth_amplitude=" << fmt_g(params.depth_amplitude, 17) << "\n";
  out << "frequency=" << fmt_g(params.frequency, 17) << "\n";
  out << "t_step=" << fmt_g(params.t_step, 17) << "\n";
  out << "t_scale=" << fmt_g(params.t_scale, 17) << "\n";
  out << "n_points=" << params.n_points << "\n";
  out << "n_bunches=" << params.n_bunches << "\n";
  out << "radius=" << fmt_g(params.radius, 17) << "\n";
  out << "shift_z=" << fmt_g(params.shift_z, 17) << "\n";
  out << "bunch_noise=" << join_double_list(params.bunch_noise) << "\n";
  out << "shift_x=" << join_double_list(params.shift_x) << "\n";
  out << "shift_y=" << join_double_list(params.shift_y) << "\n";
  if (!out) throw IoError("write failed for " + path);
}

SimulatedCoarse simulate_coarse(const BraidParams& truth, double noise_sigma,
                                int strands_per_bunch, std::uint64_t seed,
                                const ProjectionSpec& spec) {
  truth.validate();
  spec.validate();
  if (strands_per_bunch < 1) {
    throw ValidationError("invalid-sim-config", "strands_per_bunch must be >= 1");
  }
  if (!(noise_sigma >= 0.0)) {
    throw ValidationError("invalid-sim-config", "noise_sigma must be >= 0");
  }

  const SyntheticBraid braid = generate(truth, seed);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);  // jitter stream, decorrelated from the noise draw

  std::vector<Strand> strands;
  strands.reserve(static_cast<std::size_t>(braid.n_bunches()) * strands_per_bunch);
  for (int i = 0; i < braid.n_bunches(); ++i) {
    const auto& center = braid.centerlines()[i].points();
    const auto& profile = braid.radius_profile()[i];
    const auto frames = transport_frames(center);
    for (int j = 0; j < strands_per_bunch; ++j) {
      const double theta = 2.0 * M_PI * j / strands_per_bunch;
      const double c = std::cos(theta), s = std::sin(theta);
      std::vector<Point3> pts;
      pts.reserve(center.size());
      for (std::size_t k = 0; k < center.size(); ++k) {
        Point3 p = center[k] + profile[k] * (c * frames[k].normal + s * frames[k].binormal);
        const double gx = rng.normal(), gy = rng.normal(), gz = rng.normal();
        pts.emplace_back(p.x + noise_sigma * gx, p.y + noise_sigma * gy, p.z + noise_sigma * gz);
      }
      strands.emplace_back("sim_b" + std::to_string(i) + "_s" + std::to_string(j),
                           std::move(pts));
    }
  }

  // Binary mask: hard rasterization of the tube silhouette (centerline discs).
  std::vector<double> radii;
  for (const auto& profile : braid.radius_profile()) {
    radii.insert(radii.end(), profile.begin(), profile.end());
  }
  const GrayImage raster = rasterize_tube(StrandSet(braid.centerlines()), radii, spec, 0.0);
  std::vector<double> mask_px(raster.pixels().size());
  for (std::size_t i = 0; i < mask_px.size(); ++i) {
    mask_px[i] = raster.pixels()[i] >= 0.5 ? 1.0 : 0.0;
  }

  return SimulatedCoarse{StrandSet(std::move(strands)),
                         GrayImage(spec.width, spec.height, std::move(mask_px)),
                         edge_image_synthetic(braid, spec, 1.0)};
}

}  // namespace braidrec
