#pragma once

// Numerical checks of the explicit coordinate fields used by the
// construction: the torus-destruction model, round handles, the gluing
// suspension field and the collar reference field.
//
// Charts mix circle coordinates (circumference 1) with interval coordinates.
// Trajectories are integrated in the universal cover and the field is always
// evaluated at wrapped coordinates.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "msflow/error.hpp"
#include "msflow/planner.hpp"

namespace msflow {

inline constexpr double kClosureTol = 1e-6;
inline constexpr double kTransverseTol = 1e-3;
inline constexpr double kBoundaryTol = 1e-12;
inline constexpr double kDefaultDt = 1e-3;

/// Closure tolerance, overridable through MSFLOW_TOL.
double closure_tolerance();

template <class Scalar>
using PointT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
struct ChartFieldT {
  /// true for circle coordinates, false for interval coordinates
  std::vector<bool> periodic;
  /// bounds of interval coordinates; ignored for circle coordinates
  PointT<Scalar> lower;
  PointT<Scalar> upper;
  std::function<PointT<Scalar>(const PointT<Scalar>&)> eval;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(periodic.size()); }

  PointT<Scalar> wrap(PointT<Scalar> p) const {
    using std::floor;
    for (Eigen::Index i = 0; i < dim(); ++i)
      if (periodic[i]) p(i) -= floor(p(i));
    return p;
  }

  bool inside(const PointT<Scalar>& p) const {
    for (Eigen::Index i = 0; i < dim(); ++i)
      if (!periodic[i] && (p(i) < lower(i) || p(i) > upper(i))) return false;
    return true;
  }

  PointT<Scalar> operator()(const PointT<Scalar>& cover_point) const {
    PointT<Scalar> v = eval(wrap(cover_point));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      using std::isfinite;
      if (!isfinite(v(i))) throw Error(ErrorKind::NonFinite, "field evaluation returned a non-finite value");
    }
    return v;
  }

  /// Same chart, field negated (backward time).
  ChartFieldT reversed() const {
    ChartFieldT r = *this;
    auto f = eval;
    r.eval = [f](const PointT<Scalar>& p) { return PointT<Scalar>(-f(p)); };
    return r;
  }
};

template <class Scalar>
struct TrajectoryT {
  std::vector<Scalar> times;
  /// wrapped chart coordinates
  std::vector<PointT<Scalar>> samples;
  /// universal-cover coordinates of the same samples
  std::vector<PointT<Scalar>> cover;
  Scalar step = 0;
  /// integration stopped because an interval coordinate left its bounds
  bool left_chart = false;

  const PointT<Scalar>& end() const { return cover.back(); }
};

using ChartField = ChartFieldT<double>;
using Trajectory = TrajectoryT<double>;
using Point = PointT<double>;

template <class Scalar>
PointT<Scalar> rk4_step(const ChartFieldT<Scalar>& field, const PointT<Scalar>& y, Scalar h) {
  const PointT<Scalar> k1 = field(y);
  const PointT<Scalar> k2 = field(y + h / 2 * k1);
  const PointT<Scalar> k3 = field(y + h / 2 * k2);
  const PointT<Scalar> k4 = field(y + h * k3);
  return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

/// Classical RK4 over [0, T]. The step is T / ceil(T / dt), so all gaps are
/// equal and never exceed dt. Stops early when the chart is left.
template <class Scalar>
TrajectoryT<Scalar> rk4_integrate(const ChartFieldT<Scalar>& field, const PointT<Scalar>& x0, Scalar dt, Scalar T) {
  using std::ceil;
  if (x0.size() != field.dim()) throw Error(ErrorKind::DimensionMismatch, "initial point has wrong dimension");
  if (!(dt > 0) || !(T > 0) || dt > T)
    throw Error(ErrorKind::PreconditionViolated, "rk4_integrate needs 0 < dt <= T");
  const long n = static_cast<long>(ceil(T / dt - Scalar(1e-9)));
  TrajectoryT<Scalar> tr;
  tr.step = T / Scalar(n);
  tr.times.reserve(n + 1);
  tr.samples.reserve(n + 1);
  tr.cover.reserve(n + 1);
  PointT<Scalar> y = x0;
  tr.times.push_back(0);
  tr.cover.push_back(y);
  tr.samples.push_back(field.wrap(y));
  for (long i = 1; i <= n; ++i) {
    y = rk4_step(field, y, tr.step);
    if (!field.inside(y)) {
      tr.left_chart = true;
      break;
    }
    tr.times.push_back(tr.step * Scalar(i));
    tr.cover.push_back(y);
    tr.samples.push_back(field.wrap(y));
  }
  return tr;
}

/// Writes "t,x0,x1,..." rows of the wrapped samples.
void write_trajectory_csv(const Trajectory& tr, const std::string& path);

// ---------------------------------------------------------------------------
// torus destruction model on S^1 x [-1,1] x S^1, coordinates (t, x, z)

struct TorusChartField {
  long lambda = 1;
  std::function<double(double)> bump;
  /// constant added to g; only used to build broken fields in tests
  double g_offset = 0;

  double f(double x) const;
  double g(double t, double x, double z) const;
  Eigen::Vector3d operator()(double t, double x, double z) const;
  ChartField chart() const;
};

/// sin^2(pi x / 2)
double default_bump(double x);

TorusChartField torus_chart_field(long lambda, std::function<double(double)> bump = default_bump);

struct DetectedOrbit {
  /// b = lambda z - t on the orbit, in [0, 1)
  double b = 0;
  /// starting point (t, x, z) on the section z = 0
  Eigen::Vector3d start;
  double period = 0;
  double closure_error = 0;
  /// forward-time signs (within T, transverse to T); -1 contracting, +1 expanding
  int sign_within = 0;
  int sign_transverse = 0;
  /// return-map multipliers in the direction the orbit was verified
  Eigen::Vector2d multipliers;
  bool verified_backward = false;
};

std::vector<DetectedOrbit> detect_torus_orbits(const TorusChartField& field, double dt = kDefaultDt,
                                               double tol = kClosureTol);

/// max |F - (1, -x, 1)| over random points with x = +-1.
double torus_boundary_error(const TorusChartField& field, int samples, unsigned seed);

// ---------------------------------------------------------------------------
// round handles on S^1 x [-1,1], coordinates (t, x)

ChartField round_handle_field(Stability stability);

// ---------------------------------------------------------------------------
// curves on the flat torus

/// Closed curve as a polyline in cover coordinates; the vertex after the
/// last one is points.front() + winding.
struct TorusCurve {
  std::vector<Eigen::Vector2d> points;
  Eigen::Vector2i winding = Eigen::Vector2i::Zero();

  static TorusCurve line(int p, int q, Eigen::Vector2d offset = Eigen::Vector2d::Zero(), int samples = 512);
  /// b = h(a) over one turn of a.
  static TorusCurve graph(const std::function<double(double)>& h, int samples = 512);

  std::size_t size() const { return points.size(); }
  Eigen::Vector2d vertex(long i) const;
  /// central-difference tangent at vertex i
  Eigen::Vector2d tangent(long i) const;
  TorusCurve translated(const Eigen::Vector2d& shift) const;
};

struct CurveIntersection {
  Eigen::Vector2d point;
  bool transverse = true;
  /// |normalized cross product of the tangents|
  double cross = 0;
};

std::vector<CurveIntersection> curve_intersections(const TorusCurve& c1, const TorusCurve& c2,
                                                   double tol = kTransverseTol);

/// Transverse points count once, tangencies twice.
int mod2_intersection(const std::vector<CurveIntersection>& points);

struct IntersectionSummary {
  int count = 0;
  int nontransverse = 0;
  int parity = 0;
  double min_cross = 0;
};

IntersectionSummary summarize(const std::vector<CurveIntersection>& points);

struct RepairReport {
  double displacement = 0;
  Eigen::Vector2d normal;
  double epsilon = 0.1;
  IntersectionSummary before;
  IntersectionSummary after;
  double suspension_error = 0;
  TorusCurve repaired;
  bool pass = false;
};

/// Smoothstep in time: 0 for t < eps, 1 for t > 1 - eps.
double isotopy_profile(double t, double eps);
double isotopy_profile_rate(double t, double eps);

RepairReport repair_transversality(const TorusCurve& L1, const TorusCurve& L2, double dt = kDefaultDt);

// ---------------------------------------------------------------------------
// collar [0,1] x T^2, coordinates (r, theta_fiber, theta_section)

struct CollarReport {
  int grid = 64;
  double min_max_fg = 0;
  double min_norm = 0;
  Eigen::Vector3d boundary_value;
  bool pass = false;
};

struct CollarField {
  std::function<double(double)> f;
  std::function<double(double)> g;
  ChartField chart() const;
};

double smoothstep(double x);

/// Checks the profile conditions and that the field never vanishes.
CollarReport collar_reference_field(const CollarField& field, int grid = 64);

// ---------------------------------------------------------------------------
// JSON reports used by the command line

nlohmann::json verify_torus_model(long lambda, double dt = kDefaultDt, const std::string& csv_path = {});
nlohmann::json verify_round_handle(const std::string& csv_path = {});
nlohmann::json verify_glue_demo();
nlohmann::json verify_collar();

}  // namespace msflow
