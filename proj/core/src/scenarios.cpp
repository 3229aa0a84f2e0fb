#include "spincal/scenarios.hpp"

#include <cmath>

#include "spincal/spinc.hpp"

namespace spincal {

namespace {

double param(const ScenarioParams& p, const std::string& key, double fallback) {
  for (const auto& [k, v] : p)
    if (k == key) return v;
  return fallback;
}

Domain box(std::initializer_list<double> lo, std::initializer_list<double> hi,
           std::initializer_list<bool> periodic) {
  Domain d;
  d.lo = RVec(static_cast<int>(lo.size()));
  d.hi = RVec(static_cast<int>(hi.size()));
  int i = 0;
  for (double v : lo) d.lo(i++) = v;
  i = 0;
  for (double v : hi) d.hi(i++) = v;
  d.periodic.assign(periodic.begin(), periodic.end());
  return d;
}

Scenario flat_torus(const std::string& name, const RMat& g) {
  const int n = static_cast<int>(g.rows());
  Scenario sc;
  sc.name = name;
  sc.sig = {n, 0};
  sc.metric = [g](double, const RVec&) { return g; };
  sc.domain.lo = RVec::Zero(n);
  sc.domain.hi = RVec::Constant(n, 2.0 * M_PI);
  sc.domain.periodic.assign(n, true);
  sc.reference.scalar_curvature = 0.0;
  sc.lattice_backend = true;
  return sc;
}

RMat sphere_metric(double radius, const RVec& x) {
  RMat g = RMat::Zero(2, 2);
  g(0, 0) = radius * radius;
  g(1, 1) = radius * radius * std::sin(x(0)) * std::sin(x(0));
  return g;
}

Scenario sphere_chart(double radius) {
  Scenario sc;
  sc.name = "sphere2-unit";
  sc.sig = {2, 0};
  sc.metric = [radius](double, const RVec& x) { return sphere_metric(radius, x); };
  sc.domain = box({0.1, 0.0}, {M_PI - 0.1, 2.0 * M_PI}, {false, true});
  sc.reference.scalar_curvature = 2.0 / (radius * radius);
  sc.reference.first_dirac_eigenvalue_magnitude = 1.0 / radius;
  sc.lattice_backend = false;
  return sc;
}

Scenario stereographic_chart(double radius, bool north) {
  Scenario sc;
  sc.name = north ? "sphere2-stereo-north" : "sphere2-stereo-south";
  sc.sig = {2, 0};
  sc.metric = [radius](double, const RVec& u) {
    const double r2 = radius * radius;
    const double den = r2 + u.squaredNorm();
    return RMat(4.0 * r2 * r2 / (den * den) * RMat::Identity(2, 2));
  };
  sc.domain = box({-1.4, -1.4}, {1.4, 1.4}, {false, false});
  sc.reference.scalar_curvature = 2.0 / (radius * radius);
  sc.lattice_backend = false;
  return sc;
}

Scenario polar_r3(double radius) {
  Scenario sc;
  sc.name = "r3-polar";
  sc.sig = {3, 0};
  sc.metric = [radius](double, const RVec& y) {
    RMat g = RMat::Zero(3, 3);
    const double rr = radius + y(0);
    g(0, 0) = 1.0;
    g(1, 1) = rr * rr;
    g(2, 2) = rr * rr * std::sin(y(1)) * std::sin(y(1));
    return g;
  };
  sc.domain =
      box({-0.4, 0.1, 0.0}, {0.4, M_PI - 0.1, 2.0 * M_PI}, {false, false, true});
  sc.reference.scalar_curvature = 0.0;
  sc.lattice_backend = false;
  return sc;
}

RMat perturbation_k(const RVec& x) {
  RMat k = RMat::Zero(2, 2);
  k(0, 0) = std::sin(x(1));
  return k;
}

Scenario perturbed_torus() {
  Scenario sc = flat_torus("torus2-perturbed", RMat::Identity(2, 2));
  sc.metric = [](double t, const RVec& x) {
    return RMat(RMat::Identity(2, 2) + t * perturbation_k(x));
  };
  sc.time_dependent = true;
  sc.reference = {};
  return sc;
}

Scenario curved_torus() {
  Scenario sc = flat_torus("torus2-curved", RMat::Identity(2, 2));
  sc.metric = [](double, const RVec& x) {
    RMat g(2, 2);
    const double c = 0.1 * std::sin(x(0) + x(1));
    g << 1.0 + 0.3 * std::sin(x(1)), c, c, 1.0 + 0.2 * std::cos(x(0));
    return g;
  };
  sc.spinc_a = [](const RVec& x) {
    RVec a(2);
    a << 0.0, 0.3 * std::sin(x(0));
    return a;
  };
  sc.reference = {};
  sc.lattice_backend = false;
  return sc;
}

Scenario magnetic_torus(int q) {
  Scenario sc = flat_torus("torus2-magnetic", RMat::Identity(2, 2));
  sc.flux = q;
  sc.pointwise_backend = false;
  return sc;
}

Scenario minkowski(const std::string& name, int r, int s) {
  const int n = r + s;
  Scenario sc;
  sc.name = name;
  sc.sig = {r, s};
  RMat g = RMat::Identity(n, n);
  for (int j = r; j < n; ++j) g(j, j) = -1.0;
  sc.metric = [g](double, const RVec&) { return g; };
  sc.domain.lo = RVec::Constant(n, -1.0);
  sc.domain.hi = RVec::Constant(n, 1.0);
  sc.domain.periodic.assign(n, false);
  sc.reference.scalar_curvature = 0.0;
  sc.lattice_backend = false;
  return sc;
}

Scenario flat_box2() {
  Scenario sc = minkowski("box2-flat", 2, 0);
  return sc;
}

CylinderScenario cylinder_from_family(const std::string& name, Scenario base,
                                      double t0, double t1) {
  CylinderScenario cyl;
  cyl.name = name;
  cyl.base = std::move(base);
  cyl.t0 = t0;
  cyl.t1 = t1;
  return cyl;
}

CylinderScenario cylinder_from_endo(const std::string& name, const Scenario& base0,
                                    const std::function<RMat(const RVec&)>& f_endo,
                                    double t0, double t1) {
  Scenario base = base0;
  auto metric0 = base0.metric;
  base.metric = [metric0, f_endo](double t, const RVec& x) {
    const RMat g0 = metric0(0.0, x);
    const int n = static_cast<int>(g0.rows());
    const RMat a = RMat::Identity(n, n) - t * f_endo(x);
    return RMat(g0 * a * a);
  };
  base.time_dependent = true;
  CylinderScenario cyl = cylinder_from_family(name, std::move(base), t0, t1);
  SymmetricTensorField f;
  f.eval = [metric0, f_endo](const RVec& x) {
    return RMat(metric0(0.0, x) * f_endo(x));
  };
  cyl.endo_F = f;
  return cyl;
}

}  // namespace

Scenario scenario_by_name(const std::string& name, const ScenarioParams& params) {
  const double radius = param(params, "radius", 1.0);
  if (name == "torus1-flat") {
    RMat g(1, 1);
    g << 1.0;
    return flat_torus(name, g);
  }
  if (name == "torus1-scaled") {
    RMat g(1, 1);
    g << 1.21;
    return flat_torus(name, g);
  }
  if (name == "torus2-flat") return flat_torus(name, RMat::Identity(2, 2));
  if (name == "torus2-skew") {
    RMat g(2, 2);
    g << 1.3, 0.2, 0.2, 0.9;
    return flat_torus(name, g);
  }
  if (name == "torus3-flat") return flat_torus(name, RMat::Identity(3, 3));
  if (name == "torus2-perturbed") return perturbed_torus();
  if (name == "torus2-curved") return curved_torus();
  if (name == "torus2-magnetic")
    return magnetic_torus(static_cast<int>(param(params, "flux", 3.0)));
  if (name == "sphere2-unit") return sphere_chart(radius);
  if (name == "sphere2-stereo-north") return stereographic_chart(radius, true);
  if (name == "sphere2-stereo-south") return stereographic_chart(radius, false);
  if (name == "r3-euclidean") return minkowski(name, 3, 0);
  if (name == "r3-polar") return polar_r3(radius);
  if (name == "box2-flat") return flat_box2();
  if (name == "minkowski2-flat") return minkowski(name, 1, 1);
  if (name == "minkowski3-flat") return minkowski(name, 1, 2);
  throw ConfigError("unknown scenario '" + name + "'");
}

CylinderScenario cylinder_by_name(const std::string& name,
                                  const ScenarioParams& params) {
  const double radius = param(params, "radius", 1.0);
  if (name == "cylinder-torus-static")
    return cylinder_from_family(name, scenario_by_name("torus2-skew"), -0.4, 0.4);
  if (name == "cylinder-torus-conformal") {
    Scenario base = scenario_by_name("torus2-flat");
    base.metric = [](double t, const RVec&) {
      return RMat((1.0 + t) * (1.0 + t) * RMat::Identity(2, 2));
    };
    base.time_dependent = true;
    return cylinder_from_family(name, std::move(base), -0.4, 0.4);
  }
  if (name == "cylinder-sphere-cone") {
    // F = -id/R makes g_t = (1 + t/R)^2 g: the flat cone over the sphere
    Scenario base = sphere_chart(radius);
    auto endo = [radius](const RVec&) {
      return RMat(-RMat::Identity(2, 2) / radius);
    };
    return cylinder_from_endo(name, base, endo, -0.4 * radius, 0.4 * radius);
  }
  if (name == "cylinder-torus-fourier") {
    Scenario base = scenario_by_name("torus2-flat");
    base.metric = [](double t, const RVec& x) {
      RMat k1 = RMat::Zero(2, 2), k2 = RMat::Zero(2, 2);
      k1(0, 0) = std::sin(x(1));
      k2(0, 1) = k2(1, 0) = 0.5 * std::cos(x(0));
      return RMat(RMat::Identity(2, 2) + 0.3 * std::sin(t) * k1 +
                  0.2 * (1.0 - std::cos(t)) * k2);
    };
    base.time_dependent = true;
    return cylinder_from_family(name, std::move(base), -0.4, 0.4);
  }
  if (name == "cylinder-torus-F-const") {
    RMat f(2, 2);
    f << 0.3, 0.0, 0.0, -0.2;
    return cylinder_from_endo(name, scenario_by_name("torus2-flat"),
                              [f](const RVec&) { return f; }, -0.4, 0.4);
  }
  if (name == "cylinder-torus-F-noncodazzi") {
    auto endo = [](const RVec& x) {
      RMat f = RMat::Zero(2, 2);
      f(0, 0) = 0.2 + 0.1 * std::sin(x(1));
      return f;
    };
    return cylinder_from_endo(name, scenario_by_name("torus2-flat"), endo, -0.4, 0.4);
  }
  if (name == "cylinder-box-flux") {
    CylinderScenario cyl =
        cylinder_from_family(name, scenario_by_name("box2-flat"), -0.4, 0.4);
    cyl.ambient_a_override = [](const RVec& y) {
      RVec a = RVec::Zero(3);
      a(2) = 0.4 * y(0) * y(1);  // a(dt) = 0 but omega(nu, .) != 0
      return a;
    };
    return cyl;
  }
  throw ConfigError("unknown cylinder scenario '" + name + "'");
}

Immersion immersion_by_name(const std::string& name, const ScenarioParams& params) {
  const double radius = param(params, "radius", 1.0);
  Immersion imm;
  imm.name = name;
  auto slice_embedding = [](double slice, int n) {
    return [slice, n](const RVec& u) {
      RVec y(n + 1);
      y(0) = slice;
      y.tail(n) = u;
      return y;
    };
  };
  auto axis_normal = [](int n) {
    return [n](const RVec&) { return RVec(RVec::Unit(n + 1, 0)); };
  };
  if (name == "slice-torus2-flat") {
    imm.ambient = cylinder_by_name("cylinder-torus-static").ambient();
    imm.base = scenario_by_name("torus2-skew");
    imm.base.name = name + ".base";
    imm.embedding = slice_embedding(0.1, 2);
    imm.normal = axis_normal(2);
    return imm;
  }
  if (name == "slice-torus2-warped") {
    const double slice = 0.2;
    imm.ambient = cylinder_by_name("cylinder-torus-conformal").ambient();
    imm.base = scenario_by_name("torus2-flat");
    imm.base.name = name + ".base";
    const double scale = (1.0 + slice) * (1.0 + slice);
    imm.base.metric = [scale](double, const RVec&) {
      return RMat(scale * RMat::Identity(2, 2));
    };
    imm.embedding = slice_embedding(slice, 2);
    imm.normal = axis_normal(2);
    return imm;
  }
  if (name == "sphere2-in-r3") {
    imm.ambient = polar_r3(radius);
    imm.base = sphere_chart(radius);
    imm.base.name = name + ".base";
    imm.embedding = slice_embedding(0.0, 2);
    imm.normal = axis_normal(2);  // outward: increasing radius
    return imm;
  }
  if (name == "slice-torus2-warped-a") {
    // warped slice with a smooth pulled-back line-bundle connection
    imm = immersion_by_name("slice-torus2-warped");
    imm.name = name;
    auto base_a = [](const RVec& u) {
      RVec a(2);
      a << 0.2 * std::sin(u(1)), 0.3 * std::sin(u(0));
      return a;
    };
    imm.base.spinc_a = base_a;
    imm.ambient.spinc_a = [base_a](const RVec& y) {
      RVec a = RVec::Zero(3);
      a.tail(2) = base_a(RVec(y.tail(2)));
      return a;
    };
    return imm;
  }
  if (name == "slice-torus1-flat") {
    Scenario base = scenario_by_name("torus1-scaled");
    imm.ambient =
        cylinder_from_family("cylinder-torus1-static", base, -0.4, 0.4).ambient();
    imm.base = base;
    imm.base.name = name + ".base";
    imm.embedding = slice_embedding(0.05, 1);
    imm.normal = axis_normal(1);
    return imm;
  }
  throw ConfigError("unknown immersion '" + name + "'");
}

bool is_cylinder_name(const std::string& name) {
  return name.rfind("cylinder-", 0) == 0;
}

bool is_immersion_name(const std::string& name) {
  return name.rfind("slice-", 0) == 0 || name == "sphere2-in-r3";
}

std::vector<ScenarioInfo> scenario_catalog() {
  std::vector<ScenarioInfo> out;
  for (const char* n :
       {"torus1-flat", "torus1-scaled", "torus2-flat", "torus2-skew", "torus3-flat",
        "torus2-perturbed", "torus2-curved", "torus2-magnetic", "sphere2-unit",
        "sphere2-stereo-north", "sphere2-stereo-south", "r3-euclidean", "r3-polar",
        "box2-flat", "minkowski2-flat", "minkowski3-flat"}) {
    Scenario sc = scenario_by_name(n);
    std::string backends;
    if (sc.pointwise_backend) backends = "pointwise";
    if (sc.lattice_backend) backends += backends.empty() ? "lattice" : "+lattice";
    out.push_back({n, "chart", sc.sig.dim(), sc.sig, backends,
                   sc.reference.scalar_curvature.has_value() ||
                       sc.reference.first_dirac_eigenvalue_magnitude.has_value()});
  }
  for (const char* n :
       {"cylinder-torus-static", "cylinder-torus-conformal", "cylinder-sphere-cone",
        "cylinder-torus-fourier", "cylinder-torus-F-const",
        "cylinder-torus-F-noncodazzi", "cylinder-box-flux"}) {
    CylinderScenario cyl = cylinder_by_name(n);
    out.push_back({n, "cylinder", cyl.base.sig.dim() + 1,
                   Signature{cyl.base.sig.r + 1, cyl.base.sig.s}, "pointwise", false});
  }
  for (const char* n : {"slice-torus2-flat", "slice-torus2-warped",
                        "slice-torus2-warped-a", "sphere2-in-r3",
                        "slice-torus1-flat"}) {
    Immersion imm = immersion_by_name(n);
    out.push_back({n, "immersion", imm.base.sig.dim(), imm.base.sig, "pointwise",
                   imm.base.reference.first_dirac_eigenvalue_magnitude.has_value()});
  }
  return out;
}

namespace {

// Half-angle lift of the planar rotation e_a -> cos(angle) e_a + sin(angle) e_b.
CMat planar_lift(const GammaRep& rep, int a, int b, double angle) {
  const CMat id = CMat::Identity(rep.dim(), rep.dim());
  return std::cos(0.5 * angle) * id +
         std::sin(0.5 * angle) * rep.gammas[a] * rep.gammas[b];
}

// Lift of the cyclic column permutation (x,y,z) -> (z,x,y): rotation by
// -2pi/3 about the diagonal axis.
CMat cyclic_lift(const GammaRep& rep) {
  const CMat id = CMat::Identity(rep.dim(), rep.dim());
  const CMat bivec = (rep.gammas[1] * rep.gammas[2] + rep.gammas[2] * rep.gammas[0] +
                      rep.gammas[0] * rep.gammas[1]) /
                     std::sqrt(3.0);
  const double half = -M_PI / 3.0;
  return std::cos(half) * id + std::sin(half) * bivec;
}

}  // namespace

SmoothSpinorField cone_parallel_spinor(const CVec& sigma_cartesian) {
  const GammaRep& rep = rep_for({3, 0});
  const CMat perm = cyclic_lift(rep);
  SmoothSpinorField f;
  f.eval = [perm, sigma_cartesian, &rep](const RVec& y) {
    // chart frame (nu, e_theta, e_phi) relates to the Cartesian frame by
    // Rz(phi) Ry(theta) followed by the cyclic column shuffle
    const CMat lift =
        planar_lift(rep, 0, 1, y(2)) * planar_lift(rep, 2, 0, y(1)) * perm;
    return CVec(lift.inverse() * sigma_cartesian);
  };
  return f;
}

KillingData sphere_killing_spinor(double radius, int which) {
  static const AlphaEmbedding emb = alpha_embed(rep_for({2, 0}), rep_for({3, 0}));

  CVec sigma = CVec::Zero(2);
  sigma(which % 2) = 1.0;
  SmoothSpinorField cone = cone_parallel_spinor(sigma);

  KillingData out;
  out.field.eval = [cone](const RVec& u) {
    RVec y(3);
    y << 0.0, u(0), u(1);
    return CVec(emb.restrict_map * cone.at(y));
  };
  out.tensor.eval = [radius](const RVec& u) {
    return RMat(-sphere_metric(radius, u) / radius);
  };
  out.sign = -1.0;
  return out;
}

}  // namespace spincal
