#ifndef PILLARFLOW_CORE_HPP
#define PILLARFLOW_CORE_HPP

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pillarflow {

/// 2D point / vector with the handful of operations the library needs.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }
inline double dist2(const Vec2& a, const Vec2& b) { return dot(a - b, a - b); }

namespace detail {

template <typename... Args>
std::string msg(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace detail

/// Thrown on violated preconditions and invalid inputs.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when an algorithm cannot complete (budget exceeded, singular pivot, ...).
class ComputeError : public std::runtime_error {
 public:
  explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

#define PF_REQUIRE(cond, ...)                                               \
  do {                                                                      \
    if (!(cond))                                                            \
      throw ::pillarflow::InvalidArgument(::pillarflow::detail::msg(__VA_ARGS__)); \
  } while (0)

#define PF_CHECK(cond, ...)                                                \
  do {                                                                     \
    if (!(cond))                                                           \
      throw ::pillarflow::ComputeError(::pillarflow::detail::msg(__VA_ARGS__)); \
  } while (0)

// --- small dense-vector helpers used throughout the solvers ---

using Vector = std::vector<double>;

inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

/// y += alpha * x
inline void axpy(double alpha, const Vector& x, Vector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(Vector& x, double alpha) {
  for (double& v : x) v *= alpha;
}

}  // namespace pillarflow

#endif  // PILLARFLOW_CORE_HPP
