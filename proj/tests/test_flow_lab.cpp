#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "msflow/flow_lab.hpp"

using namespace msflow;
using std::numbers::pi;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::MalformedSpec;
}

Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

ChartField line_field(std::function<Point(const Point&)> f, int dim) {
  ChartField c;
  c.periodic.assign(static_cast<std::size_t>(dim), false);
  c.lower = Point::Constant(dim, -1e9);
  c.upper = Point::Constant(dim, 1e9);
  c.eval = std::move(f);
  return c;
}

double bump_tangency(double a) { return 0.1 * (1 - std::cos(2 * pi * a)); }

}  // namespace

TEST_CASE("rk4 integration examples") {
  const auto constant = line_field([](const Point&) { return pt({1.0}); }, 1);
  const auto tr = rk4_integrate(constant, pt({0.0}), 1e-3, 2.0);
  CHECK(tr.end()(0) == doctest::Approx(2.0).epsilon(1e-12));

  const auto decay = line_field([](const Point& p) { return Point(-p); }, 1);
  const auto d = rk4_integrate(decay, pt({1.0}), 1e-3, 10.0);
  CHECK(std::abs(d.end()(0) - std::exp(-10.0)) < 1e-6);
  for (std::size_t i = 1; i < d.times.size(); ++i) CHECK(d.times[i] > d.times[i - 1]);
  CHECK(d.times.back() == doctest::Approx(10.0));

  CHECK(kind_of([&] { rk4_integrate(decay, pt({1.0}), 2.0, 1.0); }) == ErrorKind::PreconditionViolated);
  CHECK(kind_of([&] { rk4_integrate(decay, pt({1.0}), 0.0, 1.0); }) == ErrorKind::PreconditionViolated);
  const auto bad = line_field([](const Point&) { return pt({std::nan("")}); }, 1);
  CHECK(kind_of([&] { rk4_integrate(bad, pt({1.0}), 0.1, 1.0); }) == ErrorKind::NonFinite);
  CHECK(kind_of([&] { rk4_integrate(decay, pt({1.0, 2.0}), 0.1, 1.0); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("rk4 is fourth order") {
  const auto decay = line_field([](const Point& p) { return Point(-p); }, 1);
  auto err = [&](double h) { return std::abs(rk4_integrate(decay, pt({1.0}), h, 1.0).end()(0) - std::exp(-1.0)); };
  CHECK(err(0.1) / err(0.05) >= 8.0);
}

TEST_CASE("integration commutes with deck translations") {
  const auto field = torus_chart_field(3).chart();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1), ux(-0.5, 0.5);
  for (int trial = 0; trial < 10; ++trial) {
    const Point p = pt({u(rng), ux(rng), u(rng)});
    const Point shift = pt({1.0, 0.0, -2.0});
    const auto a = rk4_integrate(field, p, 1e-2, 1.0);
    const auto b = rk4_integrate(field, Point(p + shift), 1e-2, 1.0);
    CHECK((b.end() - a.end() - shift).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("torus chart field") {
  CHECK(kind_of([] { torus_chart_field(0); }) == ErrorKind::ZeroLambda);
  for (long lambda : {-2L, 1L, 2L, 3L, 5L}) {
    const auto field = torus_chart_field(lambda);
    CHECK(torus_boundary_error(field, 200, 1) <= kBoundaryTol);
    // within the invariant torus b = lambda z - t obeys b' = (lambda^2 + 1) cos(2 pi b)
    std::mt19937_64 rng(static_cast<unsigned>(lambda + 10));
    std::uniform_real_distribution<double> u(0, 1);
    const double l = double(lambda);
    for (int trial = 0; trial < 50; ++trial) {
      const double t = u(rng), z = u(rng);
      const Eigen::Vector3d F = field(t, 0.0, z);
      CHECK(F(1) == 0.0);
      CHECK(l * F(2) - F(0) == doctest::Approx((l * l + 1) * std::cos(2 * pi * (l * z - t))).epsilon(1e-12));
    }
  }
  const auto f3 = torus_chart_field(3);
  const Eigen::Vector3d on_orbit = f3(0.0, 0.0, 0.25 / 3);
  CHECK((on_orbit - Eigen::Vector3d(3, 0, 1)).norm() < 1e-12);
  // one unit of time along the b = 1/4 orbit advances by the deck vector (3, 0, 1)
  const auto tr = rk4_integrate(f3.chart(), pt({0.0, 0.0, 0.25 / 3}), 1e-3, 1.0);
  CHECK((tr.end() - pt({3.0, 0.0, 1.0 + 0.25 / 3})).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("detected orbits on the invariant torus") {
  for (long lambda : {2L, 3L, 5L}) {
    const auto orbits = detect_torus_orbits(torus_chart_field(lambda));
    REQUIRE(orbits.size() == 2);
    CHECK(orbits[0].b == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(orbits[1].b == doctest::Approx(0.75).epsilon(1e-6));
    for (const auto& o : orbits) {
      CHECK(o.closure_error < kClosureTol);
      CHECK(o.sign_transverse == -1);
      CHECK(o.period == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(orbits[0].sign_within == -1);
    CHECK(orbits[1].sign_within == 1);
    CHECK(orbits[1].verified_backward);
  }
  auto shifted = torus_chart_field(3);
  shifted.g_offset = 1.5;
  CHECK(kind_of([&] { detect_torus_orbits(shifted); }) == ErrorKind::OrbitNotClosed);
  CHECK(kind_of([] { detect_torus_orbits(torus_chart_field(3), 0.0); }) == ErrorKind::PreconditionViolated);
}

TEST_CASE("closure tolerance override") {
  CHECK(closure_tolerance() == kClosureTol);
  setenv("MSFLOW_TOL", "1e-4", 1);
  CHECK(closure_tolerance() == 1e-4);
  setenv("MSFLOW_TOL", "abc", 1);
  CHECK(kind_of([] { closure_tolerance(); }) == ErrorKind::MalformedSpec);
  unsetenv("MSFLOW_TOL");
}

TEST_CASE("round handle") {
  const auto a = round_handle_field(Stability::Attracting);
  const auto tr = rk4_integrate(a, pt({0.0, 0.5}), 1e-3, 10.0);
  CHECK(std::abs(tr.end()(1)) / 0.5 < 1e-4);
  const auto r = rk4_integrate(round_handle_field(Stability::Repelling), pt({0.0, 1e-3}), 1e-3, 10.0);
  CHECK(r.left_chart);
  const auto j = verify_round_handle();
  CHECK(j["pass"] == true);
  CHECK(j["order_ratio"].get<double>() >= 8.0);
}

TEST_CASE("curve intersections") {
  const auto a = TorusCurve::line(1, 0, Eigen::Vector2d(0, 0.3));
  const auto b = TorusCurve::line(0, 1, Eigen::Vector2d(0.6, 0));
  const auto hits = curve_intersections(a, b);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].transverse);
  CHECK((hits[0].point - Eigen::Vector2d(0.6, 0.3)).norm() < 1e-9);
  CHECK(mod2_intersection(hits) == 1);

  // algebraic intersection of (p,q) and (r,s) lines is |ps - qr|
  const auto c = TorusCurve::line(1, 2, Eigen::Vector2d(0.013, 0.029));
  const auto d = TorusCurve::line(3, 1, Eigen::Vector2d(0.101, 0.07));
  CHECK(curve_intersections(c, d).size() == 5);

  const auto parallel = TorusCurve::line(1, 0, Eigen::Vector2d(0, 0.7));
  CHECK(curve_intersections(a, parallel).empty());
  CHECK(kind_of([&] { curve_intersections(a, a); }) == ErrorKind::DegenerateOverlap);

  const auto tangent = TorusCurve::graph(bump_tangency);
  const auto touch = summarize(curve_intersections(TorusCurve::line(1, 0), tangent));
  CHECK(touch.nontransverse == 1);
  CHECK(touch.parity == 0);
}

TEST_CASE("transversality repair") {
  const auto L1 = TorusCurve::line(1, 0);
  const auto r = repair_transversality(L1, TorusCurve::graph(bump_tangency));
  CHECK(r.pass);
  CHECK(r.after.count == 0);
  CHECK(r.displacement == doctest::Approx(-0.05));
  CHECK(r.suspension_error < kClosureTol);

  const auto mixed = repair_transversality(
      L1, TorusCurve::graph([](double a) { return bump_tangency(a) * std::cos(2 * pi * a); }));
  CHECK(mixed.pass);
  CHECK(mixed.before.nontransverse == 1);
  CHECK(mixed.after.nontransverse == 0);
  CHECK(mixed.after.parity == mixed.before.parity);

  CHECK(kind_of([&] { repair_transversality(L1, TorusCurve::line(0, 1)); }) == ErrorKind::PreconditionViolated);

  // randomized tangencies: parity is preserved by every successful repair
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> amp(0.05, 0.2);
  std::uniform_int_distribution<int> phase(0, 511);
  for (int trial = 0; trial < 8; ++trial) {
    // the minimum sits on a sample so the polygon really touches y = 0
    const double c = amp(rng), phi = phase(rng) / 512.0;
    const auto curve = TorusCurve::graph([=](double x) { return c * (1 - std::cos(2 * pi * (x - phi))); });
    const auto rep = repair_transversality(L1, curve);
    CHECK(rep.pass);
    CHECK(rep.after.parity == rep.before.parity);
  }

  CHECK(isotopy_profile(0.0, 0.1) == 0.0);
  CHECK(isotopy_profile(1.0, 0.1) == 1.0);
  CHECK(isotopy_profile_rate(0.05, 0.1) == 0.0);
}

TEST_CASE("collar reference field") {
  const auto rep = collar_reference_field({smoothstep, [](double r) { return 1 - smoothstep(r); }});
  CHECK(rep.pass);
  CHECK(rep.min_max_fg >= 0.5);
  CHECK(rep.boundary_value == Eigen::Vector3d(1, 0, 0));

  const CollarField gap{[](double r) { return std::clamp((r - 0.6) / 0.4, 0.0, 1.0); },
                        [](double r) { return std::clamp((0.4 - r) / 0.4, 0.0, 1.0); }};
  CHECK(kind_of([&] { collar_reference_field(gap); }) == ErrorKind::VanishingField);
  const CollarField wrong_ends{[](double r) { return r; }, [](double r) { return r; }};
  CHECK(kind_of([&] { collar_reference_field(wrong_ends); }) == ErrorKind::PreconditionViolated);
}
