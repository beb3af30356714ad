#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace braidrec {

// Base error for everything raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invariant violations, bad arguments, bad configs. CLI maps these to exit 1.
class ValidationError : public Error {
 public:
  ValidationError(std::string code, const std::string& msg)
      : Error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Malformed input files; carries a 1-based line number when known.
class ParseError : public ValidationError {
 public:
  ParseError(long line, const std::string& msg)
      : ValidationError("parse-error", "line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

// Filesystem failures. CLI maps these to exit 2.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error("io-error: " + msg) {}
};

// 3D point in image coordinates: x rightward (columns), y downward (rows),
// z toward the camera (larger z = nearer). Components must be finite.
struct Point3 {
  Point3() = default;
  Point3(double px, double py, double pz) : x(px), y(py), z(pz) {
    if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(z))) {
      throw ValidationError("non-finite-coordinate", "Point3 components must be finite");
    }
  }

  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(double s, const Point3& p) { return {s * p.x, s * p.y, s * p.z}; }

inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Point3& p) { return std::sqrt(dot(p, p)); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }
inline bool operator==(const Point3& a, const Point3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

// 2D point in pixel coordinates.
struct Point2 {
  Point2() = default;
  Point2(double px, double py) : x(px), y(py) {
    if (!(std::isfinite(x) && std::isfinite(y))) {
      throw ValidationError("non-finite-coordinate", "Point2 components must be finite");
    }
  }

  double x = 0.0;
  double y = 0.0;
};

// Ordered 3D polyline with an opaque identifier; the atomic hair unit.
// Immutable after construction. At least two points, consecutive points distinct.
class Strand {
 public:
  Strand(std::string id, std::vector<Point3> points);

  const std::string& id() const noexcept { return id_; }
  const std::vector<Point3>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

 private:
  std::string id_;
  std::vector<Point3> points_;
};

// Returns the violated rule for a prospective strand set, or nullopt if valid.
// Strand-level invariants are enforced by Strand itself; this checks set-level ones.
std::optional<std::string> find_violation(const std::vector<Strand>& strands);

// Collection of strands with unique ids. Immutable after construction.
class StrandSet {
 public:
  StrandSet() = default;
  explicit StrandSet(std::vector<Strand> strands);

  const std::vector<Strand>& strands() const noexcept { return strands_; }
  std::size_t size() const noexcept { return strands_.size(); }
  bool empty() const noexcept { return strands_.empty(); }
  std::size_t total_points() const noexcept;
  const Strand* find(const std::string& id) const noexcept;

 private:
  std::vector<Strand> strands_;
};

// H x W grid of values in [0,1], row-major. Immutable after construction.
class GrayImage {
 public:
  GrayImage(int width, int height);
  GrayImage(int width, int height, std::vector<double> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double at(int row, int col) const noexcept {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }
  const std::vector<double>& pixels() const noexcept { return pixels_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

// 2D polyline plus width describing a braid's center path in image coordinates.
// Stored root-first (smallest y first); construction reverses the polyline when
// needed and rejects polylines that are not monotone in y in either orientation.
class MidLineAnnotation {
 public:
  MidLineAnnotation(std::vector<Point2> polyline, double width_px);

  const std::vector<Point2>& polyline() const noexcept { return polyline_; }
  double width_px() const noexcept { return width_px_; }

 private:
  std::vector<Point2> polyline_;
  double width_px_ = 0.0;
};

// Sum of segment lengths of a strand.
double arc_length(const Strand& strand);

}  // namespace braidrec
