#include <doctest.h>

#include <cmath>
#include <random>

#include "spincal/derivative.hpp"
#include "spincal/scenarios.hpp"

using namespace spincal;

TEST_CASE("derivative engine meets the smooth-function contract") {
  auto f = [](double x) { return std::sin(x); };
  CHECK(std::abs(fd::partial(std::function<double(double)>(f), 0.3) - std::cos(0.3)) <=
        1e-8 * std::abs(std::cos(0.3)));
  auto c = [](double) { return 4.2; };
  CHECK(fd::partial(std::function<double(double)>(c), 1.0) == doctest::Approx(0.0).epsilon(1e-12));

  auto g = [](const RVec& x) { return std::exp(x(0)) * std::cos(x(1)); };
  RVec p(2);
  p << 0.2, -0.4;
  const double exact = std::exp(0.2) * std::cos(-0.4);
  CHECK(std::abs(fd::partial(std::function<double(const RVec&)>(g), p, 0) - exact) <=
        1e-8 * exact);
  CHECK(std::abs(fd::second(std::function<double(const RVec&)>(g), p, 0) - exact) <=
        1e-7 * exact);
  const double mixed_exact = -std::exp(0.2) * std::sin(-0.4);
  CHECK(std::abs(fd::mixed(std::function<double(const RVec&)>(g), p, 0, 1) -
                 mixed_exact) <= 1e-7);
}

TEST_CASE("orthonormal frame: diagonal scaling and conformal families") {
  Signature sig{2, 0};
  RMat g = RMat::Zero(2, 2);
  g(0, 0) = 4.0;
  g(1, 1) = 9.0;
  RMat e = orthonormal_frame(g, sig);
  CHECK(e(0, 0) == doctest::Approx(0.5));
  CHECK(e(1, 1) == doctest::Approx(1.0 / 3.0));

  CHECK(max_abs(RMat(orthonormal_frame(RMat::Identity(3, 3), {3, 0}) -
                     RMat::Identity(3, 3))) == 0.0);

  const double scale = 1.7;
  RMat e_scaled = orthonormal_frame(RMat(scale * scale * g), sig);
  CHECK(max_abs(RMat(e_scaled - e / scale)) <= 1e-14);

  Signature lorentz{1, 1};
  RMat gl = RMat::Zero(2, 2);
  gl(0, 0) = 1.0;
  gl(1, 1) = -1.0;
  RMat el = orthonormal_frame(gl, lorentz);
  CHECK(max_abs(RMat(el.transpose() * gl * el - gl)) <= 1e-14);

  CHECK_THROWS_AS(orthonormal_frame(RMat::Zero(2, 2), sig), NumericalError);
}

TEST_CASE("sphere chart: closed-form Christoffels as the derivative oracle") {
  Scenario sc = scenario_by_name("sphere2-unit");
  RVec x(2);
  x << 1.1, 2.3;
  GeometryJet jet = geometry_jet(sc, x);
  const double theta = x(0);
  // nonzero symbols of the round chart: G^0_{11} = -sin cos, G^1_{01} = cot
  CHECK(std::abs(jet.christoffel[0](1, 1) + std::sin(theta) * std::cos(theta)) <= 1e-7);
  CHECK(std::abs(jet.christoffel[1](0, 1) - std::cos(theta) / std::sin(theta)) <= 1e-7);
  CHECK(std::abs(jet.christoffel[0](0, 0)) <= 1e-8);

  CHECK(jet.scalar == doctest::Approx(2.0).epsilon(1e-6));
  // ric = g reads as the identity matrix in frame components
  CHECK(max_abs(RMat(jet.ricci_frame - RMat::Identity(2, 2))) <= 1e-6);
}

TEST_CASE("flat, product, and curved scenarios") {
  std::mt19937_64 rng(17);
  for (const char* name : {"torus2-flat", "torus2-skew", "torus3-flat",
                           "minkowski2-flat", "minkowski3-flat", "r3-euclidean"}) {
    Scenario sc = scenario_by_name(name);
    const RVec x = sample_point(sc, rng);
    GeometryJet jet = geometry_jet(sc, x);
    CAPTURE(name);
    for (int i = 0; i < sc.sig.dim(); ++i)
      CHECK(max_abs(jet.christoffel[i]) <= 1e-8);
    CHECK(std::abs(jet.scalar) <= 1e-8);
    double worst_r = 0.0;
    for (int i = 0; i < sc.sig.dim(); ++i)
      for (int j = 0; j < sc.sig.dim(); ++j)
        for (int k = 0; k < sc.sig.dim(); ++k)
          for (int l = 0; l < sc.sig.dim(); ++l)
            worst_r = std::max(worst_r, std::abs(jet.riemann(i, j, k, l)));
    CHECK(worst_r <= 1e-8);
  }

  // r3-polar is flat Euclidean space in disguise
  Scenario polar = scenario_by_name("r3-polar");
  RVec y(3);
  y << 0.1, 1.3, 2.0;
  GeometryJet jet = geometry_jet(polar, y);
  CHECK(std::abs(jet.scalar) <= 1e-7);

  // stereographic charts agree with the round-chart curvature
  for (const char* name : {"sphere2-stereo-north", "sphere2-stereo-south"}) {
    Scenario sc = scenario_by_name(name);
    const RVec u = sample_point(sc, rng);
    CHECK(geometry_jet(sc, u).scalar == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("jet invariants at seeded points") {
  std::mt19937_64 rng(99);
  for (const char* name :
       {"torus2-curved", "sphere2-unit", "torus2-perturbed", "minkowski2-flat"}) {
    Scenario sc = scenario_by_name(name);
    const double t = sc.time_dependent ? 0.3 : 0.0;
    const int n = sc.sig.dim();
    for (int trial = 0; trial < 25; ++trial) {
      const RVec x = sample_point(sc, rng);
      GeometryJet jet = geometry_jet(sc, x, t);
      CAPTURE(name);

      RMat eps = RMat::Zero(n, n);
      for (int i = 0; i < n; ++i) eps(i, i) = sc.sig.eps(i);
      CHECK(max_abs(RMat(jet.frame.transpose() * jet.g * jet.frame - eps)) <= 1e-10);

      // metric compatibility of the frame connection
      for (int i = 0; i < n; ++i)
        CHECK(max_abs(RMat(jet.frame_connection[i] + jet.frame_connection[i].transpose())) <=
              1e-7);

      // curvature antisymmetries and pair symmetry
      double worst = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              worst = std::max(worst, std::abs(jet.riemann(i, j, k, l) +
                                               jet.riemann(j, i, k, l)));
              worst = std::max(worst, std::abs(jet.riemann(i, j, k, l) +
                                               jet.riemann(i, j, l, k)));
              worst = std::max(worst, std::abs(jet.riemann(i, j, k, l) -
                                               jet.riemann(k, l, i, j)));
              // first Bianchi
              const double bianchi = jet.riemann(i, j, k, l) +
                                     jet.riemann(j, k, i, l) +
                                     jet.riemann(k, i, j, l);
              worst = std::max(worst, std::abs(bianchi));
            }
      CHECK(worst <= 1e-6);
    }
  }
}

TEST_CASE("scenario catalog carries the advertised entries") {
  const auto catalog = scenario_catalog();
  auto has = [&](const std::string& name) {
    for (const auto& info : catalog)
      if (info.name == name) return true;
    return false;
  };
  CHECK(has("torus2-flat"));
  CHECK(has("cylinder-sphere-cone"));
  CHECK(has("torus2-magnetic"));
  CHECK(has("sphere2-in-r3"));
  CHECK(has("minkowski3-flat"));
  CHECK(scenario_by_name("torus2-flat").reference.scalar_curvature == 0.0);
  CHECK(*scenario_by_name("sphere2-unit").reference.first_dirac_eigenvalue_magnitude ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(scenario_by_name("no-such-chart"), ConfigError);

  // the cone family reduces to the conformal square at F = -id
  CylinderScenario cone = cylinder_by_name("cylinder-sphere-cone");
  RVec x(2);
  x << 1.2, 0.7;
  const RMat gt = cone.base.metric(0.25, x);
  const RMat g0 = cone.base.metric(0.0, x);
  CHECK(max_abs(RMat(gt - 1.25 * 1.25 * g0)) <= 1e-12);
}
