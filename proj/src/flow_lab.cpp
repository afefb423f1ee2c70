#include "msflow/flow_lab.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

namespace msflow {

using std::numbers::pi;

double closure_tolerance() {
  const char* env = std::getenv("MSFLOW_TOL");
  if (env == nullptr || *env == '\0') return kClosureTol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0) || !std::isfinite(v))
    throw Error(ErrorKind::MalformedSpec, std::string("MSFLOW_TOL must be a positive number, got '") + env + "'");
  return v;
}

void write_trajectory_csv(const Trajectory& tr, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::MalformedSpec, "cannot open '" + path + "' for writing");
  out.precision(17);
  out << "t";
  const auto dim = tr.samples.empty() ? 0 : tr.samples.front().size();
  for (Eigen::Index i = 0; i < dim; ++i) out << ",x" << i;
  out << "\n";
  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    out << tr.times[k];
    for (Eigen::Index i = 0; i < dim; ++i) out << "," << tr.samples[k](i);
    out << "\n";
  }
}

namespace {

double circle_diff(double d) { return d - std::round(d); }

Point vec(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

struct Hit {
  Point y;
  double time = 0;
};

// first crossing of z = target, refined by bisection on the last step
std::optional<Hit> next_section_hit(const ChartField& chart, Point y, double target, double h, double max_time) {
  double time = 0;
  auto side = [&](const Point& p) { return p(2) - target; };
  while (time < max_time) {
    Point next = rk4_step(chart, y, h);
    if (!chart.inside(next)) return std::nullopt;
    if (side(y) * side(next) <= 0 && side(next) != side(y)) {
      double lo = 0, hi = h;
      for (int it = 0; it < 80 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (side(rk4_step(chart, y, mid)) * side(y) > 0) lo = mid;
        else hi = mid;
      }
      const double s = 0.5 * (lo + hi);
      return Hit{rk4_step(chart, y, s), time + s};
    }
    y = std::move(next);
    time += h;
  }
  return std::nullopt;
}

// return map of the section z = 0 in (b, x); b = lambda z - t
struct ReturnMap {
  const ChartField* chart;
  long lambda;
  double direction;  // +1 forward, -1 backward
  double h;

  std::optional<std::pair<Eigen::Vector2d, double>> operator()(double b, double x) const {
    const auto hit = next_section_hit(*chart, vec({-b, x, 0.0}), direction, h, 40.0);
    if (!hit) return std::nullopt;
    const double b1 = double(lambda) * hit->y(2) - hit->y(0);
    return std::make_pair(Eigen::Vector2d(b1, hit->y(1)), hit->time);
  }
};

}  // namespace

// ---------------------------------------------------------------------------

double default_bump(double x) {
  const double s = std::sin(pi * x / 2);
  return s * s;
}

double TorusChartField::f(double x) const {
  const double rho = bump(x);
  const double l = double(lambda);
  return (1 - rho) + rho * (l + 1) / (l * l + 1);
}

double TorusChartField::g(double t, double x, double z) const {
  const double rho = bump(x);
  const double l = double(lambda);
  return (1 - rho) * std::cos(2 * pi * (l * z - t)) + rho * (l - 1) / (l * l + 1) + g_offset;
}

Eigen::Vector3d TorusChartField::operator()(double t, double x, double z) const {
  const double fv = f(x);
  const double gv = g(t, x, z);
  const double l = double(lambda);
  return fv * Eigen::Vector3d(l, 0, 1) + Eigen::Vector3d(0, -x, 0) + gv * Eigen::Vector3d(-1, 0, l);
}

ChartField TorusChartField::chart() const {
  ChartField c;
  c.periodic = {true, false, true};
  c.lower = vec({0, -1, 0});
  c.upper = vec({0, 1, 0});
  const TorusChartField self = *this;
  c.eval = [self](const Point& p) -> Point { return self(p(0), p(1), p(2)); };
  return c;
}

TorusChartField torus_chart_field(long lambda, std::function<double(double)> bump) {
  if (lambda == 0) throw Error(ErrorKind::ZeroLambda, "torus model needs lambda != 0");
  if (!bump) throw Error(ErrorKind::PreconditionViolated, "missing bump function");
  return TorusChartField{lambda, std::move(bump), 0.0};
}

double torus_boundary_error(const TorusChartField& field, int samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    const double t = u(rng), z = u(rng);
    for (double x : {-1.0, 1.0}) {
      const Eigen::Vector3d diff = field(t, x, z) - Eigen::Vector3d(1, -x, 1);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

std::vector<DetectedOrbit> detect_torus_orbits(const TorusChartField& field, double dt, double tol) {
  if (field.lambda == 0) throw Error(ErrorKind::ZeroLambda, "torus model needs lambda != 0");
  if (!(dt > 0)) throw Error(ErrorKind::PreconditionViolated, "dt must be positive");
  const ChartField forward = field.chart();
  const ChartField backward = forward.reversed();
  const ReturnMap fwd{&forward, field.lambda, 1.0, dt};
  const ReturnMap bwd{&backward, field.lambda, -1.0, dt};

  // scan the displacement of b under the forward return map on T
  constexpr int kScan = 64;
  constexpr double kShift = 0.37 / kScan;
  std::array<double, kScan + 1> bs{}, ds{};
  std::array<bool, kScan + 1> ok{};
  for (int i = 0; i <= kScan; ++i) {
    bs[i] = double(i) / kScan + kShift;
    const auto r = fwd(bs[i], 0.0);
    ok[i] = r.has_value();
    if (ok[i]) ds[i] = r->first(0) - bs[i];
  }

  struct Candidate {
    double b;
    bool attracting;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < kScan; ++i) {
    if (!ok[i] || !ok[i + 1] || ds[i] * ds[i + 1] > 0) continue;
    double lo = bs[i], hi = bs[i + 1], dlo = ds[i];
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto r = fwd(mid, 0.0);
      if (!r) break;
      const double d = r->first(0) - mid;
      if (d == 0) lo = hi = mid;
      else if ((d > 0) == (dlo > 0)) lo = mid;
      else hi = mid;
    }
    const double b = 0.5 * (lo + hi);
    candidates.push_back({b - std::floor(b), ds[i] > 0});
  }
  if (candidates.empty())
    throw Error(ErrorKind::OrbitNotClosed, "no closed orbit of the return map on the invariant torus");

  std::vector<DetectedOrbit> orbits;
  for (const auto& c : candidates) {
    DetectedOrbit o;
    o.b = c.b;
    o.verified_backward = !c.attracting;
    o.start = Eigen::Vector3d(-c.b, 0, 0);
    const ReturnMap& map = c.attracting ? fwd : bwd;
    const ChartField& chart = c.attracting ? forward : backward;

    const auto first = map(c.b, 0.0);
    if (!first) throw Error(ErrorKind::OrbitNotClosed, "orbit candidate does not return to the section");
    o.period = first->second;
    const auto tr = rk4_integrate(chart, Point(o.start), std::min(dt, o.period), o.period);
    if (tr.left_chart) throw Error(ErrorKind::OrbitNotClosed, "orbit candidate left the chart");
    const Point delta = tr.end() - Point(o.start);
    o.closure_error = 0;
    for (Eigen::Index i = 0; i < 3; ++i) o.closure_error = std::max(o.closure_error, std::abs(circle_diff(delta(i))));
    if (!(o.closure_error <= tol))
      throw Error(ErrorKind::OrbitNotClosed, "orbit at b = " + std::to_string(c.b) + " misses closure by " +
                                                 std::to_string(o.closure_error));

    // finite-difference Jacobian of the return map in (b, x)
    constexpr double kH = 1e-6;
    Eigen::Matrix2d J;
    for (int k = 0; k < 2; ++k) {
      const double db = k == 0 ? kH : 0, dx = k == 1 ? kH : 0;
      const auto plus = map(c.b + db, dx);
      const auto minus = map(c.b - db, -dx);
      if (!plus || !minus) throw Error(ErrorKind::OrbitNotClosed, "return map undefined near orbit");
      J.col(k) = (plus->first - minus->first) / (2 * kH);
    }
    Eigen::EigenSolver<Eigen::Matrix2d> es(J);
    const Eigen::Vector2d mu = es.eigenvalues().real();
    const Eigen::Matrix2d vecs = es.eigenvectors().real();
    int within = 0, transverse = 1;
    if (std::abs(vecs(1, 0)) > std::abs(vecs(0, 0))) std::swap(within, transverse);
    if (within == transverse) within = 0, transverse = 1;
    o.multipliers = Eigen::Vector2d(mu(within), mu(transverse));
    const int flip = c.attracting ? 1 : -1;
    o.sign_within = flip * (std::abs(o.multipliers(0)) < 1 ? -1 : 1);
    o.sign_transverse = flip * (std::abs(o.multipliers(1)) < 1 ? -1 : 1);
    orbits.push_back(o);
  }
  std::sort(orbits.begin(), orbits.end(), [](const auto& a, const auto& b) { return a.b < b.b; });
  return orbits;
}

// ---------------------------------------------------------------------------

ChartField round_handle_field(Stability stability) {
  ChartField c;
  c.periodic = {true, false};
  c.lower = vec({0, -1});
  c.upper = vec({0, 1});
  const double s = stability == Stability::Attracting ? -1.0 : 1.0;
  c.eval = [s](const Point& p) -> Point { return vec({1.0, s * p(1)}); };
  return c;
}

// ---------------------------------------------------------------------------

TorusCurve TorusCurve::line(int p, int q, Eigen::Vector2d offset, int samples) {
  if (p == 0 && q == 0) throw Error(ErrorKind::PreconditionViolated, "(0,0) is not a closed curve class");
  if (samples < 3) throw Error(ErrorKind::PreconditionViolated, "curve needs at least 3 samples");
  TorusCurve c;
  c.winding = Eigen::Vector2i(p, q);
  for (int i = 0; i < samples; ++i) c.points.push_back(offset + Eigen::Vector2d(p, q) * (double(i) / samples));
  return c;
}

TorusCurve TorusCurve::graph(const std::function<double(double)>& h, int samples) {
  if (samples < 3) throw Error(ErrorKind::PreconditionViolated, "curve needs at least 3 samples");
  TorusCurve c;
  c.winding = Eigen::Vector2i(1, 0);
  for (int i = 0; i < samples; ++i) {
    const double a = double(i) / samples;
    c.points.emplace_back(a, h(a));
  }
  if (std::abs(h(1.0) - h(0.0)) > 1e-9) throw Error(ErrorKind::PreconditionViolated, "graph curve is not closed");
  return c;
}

Eigen::Vector2d TorusCurve::vertex(long i) const {
  const long n = static_cast<long>(points.size());
  long k = i / n, r = i % n;
  if (r < 0) r += n, --k;
  return points[static_cast<std::size_t>(r)] + double(k) * winding.cast<double>();
}

Eigen::Vector2d TorusCurve::tangent(long i) const { return 0.5 * (vertex(i + 1) - vertex(i - 1)); }

TorusCurve TorusCurve::translated(const Eigen::Vector2d& shift) const {
  TorusCurve c = *this;
  for (auto& p : c.points) p += shift;
  return c;
}

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

Eigen::Vector2d wrap2(Eigen::Vector2d p) { return {p.x() - std::floor(p.x()), p.y() - std::floor(p.y())}; }

double torus_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return std::hypot(circle_diff(a.x() - b.x()), circle_diff(a.y() - b.y()));
}

}  // namespace

std::vector<CurveIntersection> curve_intersections(const TorusCurve& c1, const TorusCurve& c2, double tol) {
  if (c1.size() < 3 || c2.size() < 3) throw Error(ErrorKind::PreconditionViolated, "curves need at least 3 samples");
  constexpr double kEta = 1e-12;
  std::vector<CurveIntersection> out;

  struct Seg {
    Eigen::Vector2d p, r, lo, hi;
  };
  auto segment = [](const TorusCurve& c, long i) {
    const Eigen::Vector2d a = c.vertex(i), b = c.vertex(i + 1);
    const Eigen::Vector2d shift(std::floor(a.x()), std::floor(a.y()));
    Seg s{a - shift, b - a, {}, {}};
    s.lo = s.p.cwiseMin(s.p + s.r);
    s.hi = s.p.cwiseMax(s.p + s.r);
    return s;
  };
  std::vector<Seg> segs2;
  for (long j = 0; j < static_cast<long>(c2.size()); ++j) segs2.push_back(segment(c2, j));

  for (long i = 0; i < static_cast<long>(c1.size()); ++i) {
    const Seg s1 = segment(c1, i);
    for (long j = 0; j < static_cast<long>(c2.size()); ++j) {
      for (int du = -1; du <= 1; ++du)
        for (int dv = -1; dv <= 1; ++dv) {
          const Eigen::Vector2d shift(du, dv);
          const Seg& s2 = segs2[j];
          const Eigen::Vector2d q = s2.p + shift;
          if ((s2.lo + shift).x() > s1.hi.x() + kEta || (s2.hi + shift).x() < s1.lo.x() - kEta ||
              (s2.lo + shift).y() > s1.hi.y() + kEta || (s2.hi + shift).y() < s1.lo.y() - kEta)
            continue;
          const double denom = cross2(s1.r, s2.r);
          const Eigen::Vector2d qp = q - s1.p;
          if (std::abs(denom) <= 1e-14 * s1.r.norm() * s2.r.norm()) {
            if (std::abs(cross2(qp, s1.r)) > 1e-12 * s1.r.norm()) continue;
            const double r2 = s1.r.squaredNorm();
            const double t0 = qp.dot(s1.r) / r2, t1 = (qp + s2.r).dot(s1.r) / r2;
            const double lo = std::max(0.0, std::min(t0, t1)), hi = std::min(1.0, std::max(t0, t1));
            if ((hi - lo) * std::sqrt(r2) > 1e-9)
              throw Error(ErrorKind::DegenerateOverlap, "curves share a segment");
            continue;
          }
          const double s = cross2(qp, s2.r) / denom;
          const double u = cross2(qp, s1.r) / denom;
          if (s < -kEta || s > 1 + kEta || u < -kEta || u > 1 + kEta) continue;
          const Eigen::Vector2d point = wrap2(s1.p + s * s1.r);
          const double sc = std::clamp(s, 0.0, 1.0), uc = std::clamp(u, 0.0, 1.0);
          const Eigen::Vector2d t1 = ((1 - sc) * c1.tangent(i) + sc * c1.tangent(i + 1)).normalized();
          const Eigen::Vector2d t2 = ((1 - uc) * c2.tangent(j) + uc * c2.tangent(j + 1)).normalized();
          const double cr = std::abs(cross2(t1, t2));
          const bool seen = std::any_of(out.begin(), out.end(),
                                        [&](const CurveIntersection& x) { return torus_distance(x.point, point) < 1e-9; });
          if (!seen) out.push_back({point, cr > tol, cr});
        }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.point.x() != b.point.x() ? a.point.x() < b.point.x() : a.point.y() < b.point.y();
  });
  return out;
}

int mod2_intersection(const std::vector<CurveIntersection>& points) {
  int n = 0;
  for (const auto& p : points) n += p.transverse ? 1 : 2;
  return n % 2;
}

IntersectionSummary summarize(const std::vector<CurveIntersection>& points) {
  IntersectionSummary s;
  s.count = static_cast<int>(points.size());
  s.parity = mod2_intersection(points);
  s.min_cross = points.empty() ? 1.0 : points.front().cross;
  for (const auto& p : points) {
    if (!p.transverse) ++s.nontransverse;
    s.min_cross = std::min(s.min_cross, p.cross);
  }
  return s;
}

double isotopy_profile(double t, double eps) {
  const double u = std::clamp((t - eps) / (1 - 2 * eps), 0.0, 1.0);
  return u * u * (3 - 2 * u);
}

double isotopy_profile_rate(double t, double eps) {
  const double u = (t - eps) / (1 - 2 * eps);
  if (u <= 0 || u >= 1) return 0;
  return 6 * u * (1 - u) / (1 - 2 * eps);
}

RepairReport repair_transversality(const TorusCurve& L1, const TorusCurve& L2, double dt) {
  RepairReport rep;
  const auto before = curve_intersections(L1, L2);
  rep.before = summarize(before);
  if (rep.before.nontransverse == 0)
    throw Error(ErrorKind::PreconditionViolated, "curves already intersect transversally");

  Eigen::Vector2d d = L1.winding.cast<double>();
  if (d.isZero()) d = L1.tangent(0);
  rep.normal = Eigen::Vector2d(0.0 - d.y(), d.x()).normalized();

  bool found = false;
  for (int k = 1; k <= 5 && !found; ++k) {
    for (double sign : {-1.0, 1.0}) {
      const double s = sign * 0.05 * k;
      TorusCurve moved = L1.translated(s * rep.normal);
      const auto after = summarize(curve_intersections(moved, L2));
      if (after.nontransverse == 0 && after.parity == rep.before.parity) {
        rep.displacement = s;
        rep.after = after;
        rep.repaired = std::move(moved);
        found = true;
        break;
      }
    }
  }
  if (!found) throw Error(ErrorKind::RepairFailed, "no normal translation up to 0.25 makes the curves transverse");

  // suspension X' = d/dt + d(phi_t)/dt on [0,1] x K carries L1 to phi_1(L1)
  ChartField susp;
  susp.periodic = {false, true, true};
  susp.lower = vec({-1, 0, 0});
  susp.upper = vec({2, 0, 0});
  const double eps = rep.epsilon;
  const Eigen::Vector2d move = rep.displacement * rep.normal;
  susp.eval = [eps, move](const Point& p) -> Point {
    const double rate = isotopy_profile_rate(p(0), eps);
    return vec({1.0, rate * move.x(), rate * move.y()});
  };
  for (std::size_t i = 0; i < L1.size(); ++i) {
    const auto& p = L1.points[i];
    const auto tr = rk4_integrate(susp, vec({0.0, p.x(), p.y()}), dt, 1.0);
    const Point target = vec({1.0, p.x() + move.x(), p.y() + move.y()});
    rep.suspension_error = std::max(rep.suspension_error, (tr.end() - target).cwiseAbs().maxCoeff());
  }
  rep.pass = rep.after.nontransverse == 0 && rep.after.parity == rep.before.parity && rep.suspension_error < kClosureTol;
  return rep;
}

// ---------------------------------------------------------------------------

double smoothstep(double x) {
  const double u = std::clamp(x, 0.0, 1.0);
  return u * u * (3 - 2 * u);
}

ChartField CollarField::chart() const {
  ChartField c;
  c.periodic = {false, true, true};
  c.lower = vec({0, 0, 0});
  c.upper = vec({1, 0, 0});
  auto fp = f;
  auto gp = g;
  c.eval = [fp, gp](const Point& p) -> Point { return vec({gp(p(0)), fp(p(0)), 0.0}); };
  return c;
}

CollarReport collar_reference_field(const CollarField& field, int grid) {
  if (!field.f || !field.g) throw Error(ErrorKind::PreconditionViolated, "missing collar profile");
  if (grid < 2) throw Error(ErrorKind::PreconditionViolated, "collar grid needs at least 2 points per axis");
  constexpr double kEps = 1e-12;
  if (std::abs(field.f(0)) > kEps || std::abs(field.f(1) - 1) > kEps || std::abs(field.g(0) - 1) > kEps ||
      std::abs(field.g(1)) > kEps)
    throw Error(ErrorKind::PreconditionViolated, "collar profiles need f(0)=0, f(1)=1, g(0)=1, g(1)=0");
  for (int i = 1; i < grid; ++i) {
    const double r0 = double(i - 1) / (grid - 1), r1 = double(i) / (grid - 1);
    if (field.f(r1) < field.f(r0) - kEps || field.g(r1) > field.g(r0) + kEps)
      throw Error(ErrorKind::PreconditionViolated, "collar profiles must be monotone (f up, g down)");
  }

  const ChartField chart = field.chart();
  CollarReport rep;
  rep.grid = grid;
  rep.min_max_fg = std::numeric_limits<double>::infinity();
  rep.min_norm = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      for (int k = 0; k < grid; ++k) {
        const double r = double(i) / (grid - 1);
        const Point v = chart(vec({r, double(j) / grid, double(k) / grid}));
        const double m = std::max(v(0), v(1));
        if (!(m > 0))
          throw Error(ErrorKind::VanishingField, "collar field vanishes at r = " + std::to_string(r));
        rep.min_max_fg = std::min(rep.min_max_fg, m);
        rep.min_norm = std::min(rep.min_norm, v.norm());
      }
  rep.boundary_value = chart(vec({0.0, 0.25, 0.5}));
  rep.pass = rep.min_max_fg > 0 && rep.boundary_value == Eigen::Vector3d(1, 0, 0);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json summary_json(const IntersectionSummary& s) {
  return {{"intersections", s.count}, {"nontransverse", s.nontransverse}, {"parity", s.parity}, {"min_cross", s.min_cross}};
}

nlohmann::json repair_json(const RepairReport& r) {
  return {{"displacement", r.displacement},
          {"normal", {r.normal.x(), r.normal.y()}},
          {"before", summary_json(r.before)},
          {"after", summary_json(r.after)},
          {"suspension_error", r.suspension_error},
          {"pass", r.pass}};
}

}  // namespace

nlohmann::json verify_torus_model(long lambda, double dt, const std::string& csv_path) {
  const auto field = torus_chart_field(lambda);
  const double tol = closure_tolerance();
  const auto orbits = detect_torus_orbits(field, dt, tol);
  const double boundary = torus_boundary_error(field, 100, 7);

  nlohmann::json list = nlohmann::json::array();
  bool pass = orbits.size() == 2 && boundary <= kBoundaryTol;
  const double expected_b[] = {0.25, 0.75};
  const int expected_within[] = {-1, 1};
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const auto& o = orbits[i];
    list.push_back({{"b", o.b},
                    {"closure_error", o.closure_error},
                    {"period", o.period},
                    {"floquet", {o.sign_within, o.sign_transverse}},
                    {"multipliers", {o.multipliers(0), o.multipliers(1)}},
                    {"verified_backward", o.verified_backward}});
    if (i < 2)
      pass = pass && std::abs(o.b - expected_b[i]) < tol && o.closure_error < tol &&
             o.sign_within == expected_within[i] && o.sign_transverse == -1;
  }
  if (!csv_path.empty() && !orbits.empty()) {
    const auto& o = orbits.front();
    write_trajectory_csv(rk4_integrate(field.chart(), Point(o.start), dt, o.period), csv_path);
  }
  return {{"model", "torus-model"}, {"lambda", lambda},        {"dt", dt},
          {"tolerance", tol},       {"orbits", list},          {"boundary_error", boundary},
          {"pass", pass}};
}

nlohmann::json verify_round_handle(const std::string& csv_path) {
  const auto attracting = round_handle_field(Stability::Attracting);
  const auto repelling = round_handle_field(Stability::Repelling);

  const auto a = rk4_integrate(attracting, vec({0.0, 0.5}), kDefaultDt, 10.0);
  const double ratio = std::abs(a.end()(1)) / 0.5;

  const auto r = rk4_integrate(repelling, vec({0.0, 1e-3}), kDefaultDt, 10.0);
  bool monotone = true;
  for (std::size_t i = 1; i < r.cover.size(); ++i) monotone = monotone && r.cover[i](1) > r.cover[i - 1](1);

  const auto c = rk4_integrate(attracting, vec({0.3, 0.0}), kDefaultDt, 1.0);
  const double closure = std::max(std::abs(circle_diff(c.end()(0) - 0.3)), std::abs(c.end()(1)));

  // convergence order against x(t) = x0 e^{-t}
  auto err = [&](double h) { return std::abs(rk4_integrate(attracting, vec({0.0, 0.5}), h, 1.0).end()(1) - 0.5 * std::exp(-1.0)); };
  const double e1 = err(0.1), e2 = err(0.05);
  const double order_ratio = e1 / e2;

  if (!csv_path.empty()) write_trajectory_csv(a, csv_path);
  const bool pass = ratio < 1e-4 && monotone && r.left_chart && closure < 1e-9 && order_ratio >= 8;
  return {{"model", "round-handle"},
          {"attracting", {{"x0", 0.5}, {"x_T", a.end()(1)}, {"ratio", ratio}}},
          {"repelling", {{"x0", 1e-3}, {"monotone", monotone}, {"left_chart", r.left_chart}, {"exit_time", r.times.back()}}},
          {"closure_error", closure},
          {"order_ratio", order_ratio},
          {"pass", pass}};
}

nlohmann::json verify_glue_demo() {
  const auto L1 = TorusCurve::line(1, 0);
  const auto tangent = TorusCurve::graph([](double a) { return 0.1 * (1 - std::cos(2 * pi * a)); });
  const auto mixed =
      TorusCurve::graph([](double a) { return 0.1 * (1 - std::cos(2 * pi * a)) * std::cos(2 * pi * a); });
  const auto r1 = repair_transversality(L1, tangent);
  const auto r2 = repair_transversality(L1, mixed);
  return {{"model", "glue-demo"},
          {"tangency", repair_json(r1)},
          {"mixed", repair_json(r2)},
          {"pass", r1.pass && r2.pass && r1.after.count == 0}};
}

nlohmann::json verify_collar() {
  const CollarField field{smoothstep, [](double r) { return 1 - smoothstep(r); }};
  const auto rep = collar_reference_field(field);
  return {{"model", "collar"},
          {"grid", rep.grid},
          {"min_max_fg", rep.min_max_fg},
          {"min_norm", rep.min_norm},
          {"boundary", {rep.boundary_value(0), rep.boundary_value(1), rep.boundary_value(2)}},
          {"pass", rep.pass}};
}

}  // namespace msflow
