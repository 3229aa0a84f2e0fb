#include "spincal/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spincal/varbounds.hpp"

namespace spincal {

int worker_count() {
  if (const char* env = std::getenv("SPINCAL_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

ScenarioParams RunConfig::scenario_params() const {
  ScenarioParams p;
  p.emplace_back("radius", radius);
  if (flux) p.emplace_back("flux", static_cast<double>(*flux));
  return p;
}

RunConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: bad JSON: ") + e.what());
  }
  RunConfig c;
  for (const auto& [key, val] : j.items()) {
    if (key == "command") c.command = val.get<std::string>();
    else if (key == "scenario") c.scenario = val.get<std::string>();
    else if (key == "samples") c.samples = val.get<int>();
    else if (key == "seed") { c.seed = val.get<unsigned long long>(); c.seed_set = true; }
    else if (key == "tol") c.tol = val.get<double>();
    else if (key == "grid") c.grid = val.get<int>();
    else if (key == "flux") c.flux = val.get<int>();
    else if (key == "eigs") c.eigs = val.get<int>();
    else if (key == "h") c.h = val.get<double>();
    else if (key == "eps") c.eps_coupling = val.get<double>();
    else if (key == "lambda") {
      if (!val.is_string() || val.get<std::string>() != "auto")
        c.lambda = val.get<double>();
    } else if (key == "radius") c.radius = val.get<double>();
    else if (key == "out") c.out_path = val.get<std::string>();
    else if (key == "format") c.format = val.get<std::string>();
    else if (key == "k") c.k_spec = val.get<std::string>();
    else if (key == "field") c.field_spec = val.get<std::string>();
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  return c;
}

namespace {

JsonValue config_json(const RunConfig& c) {
  JsonValue j;
  j["command"] = c.command;
  j["scenario"] = c.scenario;
  j["samples"] = c.samples;
  j["seed"] = static_cast<long long>(c.seed);
  j["tol"] = c.tol;
  j["grid"] = c.grid;
  if (c.flux) j["flux"] = *c.flux;
  j["eigs"] = c.eigs;
  j["h"] = c.h;
  j["eps"] = c.eps_coupling;
  if (c.lambda) j["lambda"] = *c.lambda;
  j["radius"] = c.radius;
  if (!c.k_spec.empty()) j["k"] = c.k_spec;
  if (!c.field_spec.empty()) j["field"] = c.field_spec;
  j["format"] = c.format;
  return j;
}

JsonValue point_json(const RVec& x) {
  JsonValue arr{JsonValue::Array{}};
  for (int i = 0; i < x.size(); ++i) arr.push_back(x(i));
  return arr;
}

SmoothSpinorField default_ambient_field(const Immersion& imm) {
  const int sd = imm.ambient_rep().dim();
  if (imm.name == "sphere2-in-r3") {
    CVec sigma = CVec::Zero(2);
    sigma(0) = Complex(0.8, 0.1);
    sigma(1) = Complex(-0.25, 0.55);
    return cone_parallel_spinor(sigma);
  }
  // generic smooth literal on the ambient chart
  const int n = imm.ambient.sig.dim();
  SmoothSpinorField f;
  f.eval = [sd, n](const RVec& y) {
    CVec v(sd);
    for (int c = 0; c < sd; ++c) {
      double phase = 0.3 * y(0) + 0.2 * (c + 1);
      for (int a = 1; a < n; ++a) phase += (a == 1 ? 1.0 : -1.0) * y(a);
      v(c) = (0.6 + 0.1 * c) * std::exp(kI * phase) + Complex(0.2, -0.1 * c);
    }
    return v;
  };
  return f;
}

SymmetricTensorField named_k_mode(const std::string& spec) {
  SymmetricTensorField k;
  if (spec.empty() || spec == "diag-sin") {
    k.eval = [](const RVec& x) {
      RMat m = RMat::Zero(2, 2);
      m(0, 0) = std::sin(x(1));
      return m;
    };
  } else if (spec == "conformal") {
    k.eval = [](const RVec&) { return RMat(0.4 * RMat::Identity(2, 2)); };
  } else if (spec == "offdiag-cos") {
    k.eval = [](const RVec& x) {
      RMat m = RMat::Zero(2, 2);
      m(0, 1) = m(1, 0) = 0.5 * std::cos(x(0));
      return m;
    };
  } else {
    throw ConfigError("unknown k mode '" + spec + "' (diag-sin|conformal|offdiag-cos)");
  }
  return k;
}

std::vector<SymmetricTensorField> fourier_k_basis() {
  std::vector<SymmetricTensorField> out;
  auto add = [&](int slot, int wave) {
    SymmetricTensorField k;
    k.eval = [slot, wave](const RVec& x) {
      RMat m = RMat::Zero(2, 2);
      const double f = wave == 0   ? std::sin(x(0))
                       : wave == 1 ? std::sin(x(1))
                                   : std::cos(x(0) + x(1));
      if (slot == 0) m(0, 0) = f;
      else if (slot == 1) m(1, 1) = f;
      else m(0, 1) = m(1, 0) = f;
      return m;
    };
    out.push_back(k);
  };
  for (int slot = 0; slot < 3; ++slot)
    for (int wave = 0; wave < 3; ++wave) add(slot, wave);
  return out;
}

struct Checker {
  Report& report;
  JsonValue samples{JsonValue::Array{}};

  void add(const std::string& identity, const std::string& anchor, double residual,
           double tol, int nsamples) {
    CheckRecord r;
    r.identity = identity;
    r.anchor = anchor;
    r.residual = residual;
    r.tolerance = tol;
    r.pass = residual <= tol;
    r.samples = nsamples;
    report.checks.push_back(r);
  }
};

void run_immersion_checks(const RunConfig& c, Report& report) {
  Immersion imm = immersion_by_name(c.scenario, c.scenario_params());
  SmoothSpinorField psi = c.field_spec.empty()
                              ? default_ambient_field(imm)
                              : parse_field_literal(c.field_spec,
                                                    imm.ambient.sig.dim(),
                                                    imm.ambient_rep().dim());
  std::mt19937_64 rng(c.seed);
  const int n = imm.base.sig.dim();
  Checker chk{report};

  std::vector<RVec> points;
  for (int i = 0; i < c.samples; ++i) {
    points.push_back(sample_point(imm.base, rng));
    chk.samples.push_back(point_json(points.back()));
  }

  if (c.command == "verify.gauss") {
    const double tol = c.tol > 0 ? c.tol : 1e-5;
    double worst = 0.0;
    for (const RVec& u : points)
      for (int x = 0; x < n; ++x)
        worst = std::max(worst, max_abs(gauss_formula_residual(imm, psi, u, x)));
    chk.add("gauss.spinorial", "hypersurface spinor-derivative splitting", worst, tol,
            c.samples);
  } else if (c.command == "verify.dirac-gauss") {
    const double tol = c.tol > 0 ? c.tol : 1e-5;
    double worst = 0.0;
    for (const RVec& u : points)
      worst = std::max(worst, max_abs(dirac_gauss_residual(imm, psi, u)));
    chk.add("gauss.dirac", "hypersurface Dirac splitting with mean curvature", worst,
            tol, c.samples);
  } else if (c.command == "verify.omega-split") {
    const double tol_scalar = c.tol > 0 ? c.tol : 1e-8;
    const double tol_spinor = c.tol > 0 ? c.tol : 1e-6;
    double ws = 0.0, wv = 0.0;
    for (const RVec& u : points) {
      OmegaSplitResiduals r = omega_split_residuals(imm, psi, u);
      ws = std::max(ws, r.scalar);
      wv = std::max(wv, r.spinor);
    }
    chk.add("omega.split.norm", "bundle curvature norm split", ws, tol_scalar,
            c.samples);
    chk.add("omega.split.action", "bundle curvature action split", wv, tol_spinor,
            c.samples);
  } else if (c.command == "verify.morel") {
    const double tol = c.tol > 0 ? c.tol : 1e-6;
    double worst_ell = 0.0, worst_eq = 0.0;
    for (const RVec& u : points) {
      MorelReport r = morel_check(imm, psi, u);
      worst_ell = std::max(worst_ell, r.ell_plus_half_w);
      worst_eq = std::max(worst_eq, std::abs(r.equality_quantity));
    }
    chk.add("morel.shape", "restricted energy-momentum vs shape operator", worst_ell,
            tol, c.samples);
    chk.add("morel.equality", "equality-case quantity in the flat ambient", worst_eq,
            tol, c.samples);
  } else {
    throw ConfigError("unknown verify target '" + c.command + "'");
  }
  report.extra["samples"] = chk.samples;
}

void run_chart_checks(const RunConfig& c, Report& report) {
  Scenario sc = scenario_by_name(c.scenario, c.scenario_params());
  if (!sc.pointwise_backend)
    throw ConfigError("scenario '" + c.scenario + "' has no pointwise backend");
  const int n = sc.sig.dim();
  const int sd = rep_for(sc.sig).dim();
  SmoothSpinorField field;
  if (!c.field_spec.empty()) {
    field = parse_field_literal(c.field_spec, n, sd);
  } else {
    field.eval = [sd, n](const RVec& x) {
      CVec v(sd);
      for (int cc = 0; cc < sd; ++cc) {
        double phase = 0.4 * (cc + 1);
        for (int a = 0; a < n; ++a) phase += (a % 2 == 0 ? 1.0 : -1.0) * x(a);
        v(cc) = (0.5 + 0.15 * cc) * std::exp(kI * phase) + Complex(0.3, 0.05 * cc);
      }
      return v;
    };
  }
  const double t = sc.time_dependent ? 0.3 : 0.0;
  std::mt19937_64 rng(c.seed);
  Checker chk{report};
  double worst = 0.0;
  std::vector<RVec> points;
  for (int i = 0; i < c.samples; ++i) {
    points.push_back(sample_point(sc, rng));
    chk.samples.push_back(point_json(points.back()));
  }

  if (c.command == "verify.curvature-commutator") {
    const double tol = c.tol > 0 ? c.tol : 1e-5;
    for (const RVec& x : points)
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          const CVec lhs = spinor_curvature(field, sc, x, a, b, t);
          const CVec rhs = spinor_curvature_commutator(field, sc, x, a, b, t);
          worst = std::max(worst, max_abs(CVec(lhs - rhs)));
        }
    chk.add("curvature.commutator", "lifted curvature vs nested derivative commutator",
            worst, tol, c.samples);
  } else if (c.command == "verify.ricci-identity") {
    const double tol = c.tol > 0 ? c.tol : 1e-5;
    for (const RVec& x : points)
      for (int a = 0; a < n; ++a)
        worst = std::max(worst, max_abs(ricci_identity_residual(field, sc, x, a, t)));
    chk.add("ricci.identity", "contracted curvature identity with bundle term", worst,
            tol, c.samples);
  } else {
    throw ConfigError("unknown verify target '" + c.command + "'");
  }
  report.extra["samples"] = chk.samples;
}

void run_cylinder_checks(const RunConfig& c, Report& report) {
  CylinderScenario cyl = cylinder_by_name(c.scenario, c.scenario_params());
  std::mt19937_64 rng(c.seed);
  Checker chk{report};
  std::uniform_real_distribution<double> tdist(cyl.t0 * 0.85, cyl.t1 * 0.85);

  if (c.command == "verify.cylinder-curvature") {
    const double tol = c.tol > 0 ? c.tol : 1e-5;
    double w = 0, g = 0, cz = 0, rad = 0;
    for (int i = 0; i < c.samples; ++i) {
      const RVec x = sample_point(cyl.base, rng);
      const double t = tdist(rng);
      chk.samples.push_back(point_json(x));
      CylinderCurvatureResiduals r = cylinder_curvature_residuals(cyl, x, t);
      w = std::max(w, r.weingarten);
      g = std::max(g, r.gauss);
      cz = std::max(cz, r.codazzi);
      rad = std::max(rad, r.radial);
    }
    chk.add("cylinder.weingarten", "slice shape operator vs family derivative", w, tol,
            c.samples);
    chk.add("cylinder.gauss", "tangential curvature relation", g, tol, c.samples);
    chk.add("cylinder.codazzi", "mixed curvature relation", cz, tol, c.samples);
    chk.add("cylinder.radial", "radial curvature relation", rad, tol, c.samples);
  } else if (c.command == "verify.bala") {
    const double tol = c.tol > 0 ? c.tol : 1e-5;
    double rad = 0, cz = 0;
    for (int i = 0; i < c.samples; ++i) {
      const RVec x = sample_point(cyl.base, rng);
      const double t = tdist(rng);
      chk.samples.push_back(point_json(x));
      BalaResiduals r = bala_residuals(cyl, x, t);
      rad = std::max(rad, r.radial);
      cz = std::max(cz, r.codazzi);
    }
    chk.add("endo-cylinder.radial", "radial curvature vanishing for endomorphism families",
            rad, tol, c.samples);
    // the mixed component vanishes only under the integrability condition
    double codazzi_precheck = 0.0;
    for (int i = 0; i < std::min(c.samples, 20); ++i) {
      const RVec x = sample_point(cyl.base, rng);
      if (!cyl.endo_F) break;
      for (int a = 0; a < cyl.base.sig.dim(); ++a)
        for (int b = a + 1; b < cyl.base.sig.dim(); ++b)
          codazzi_precheck = std::max(
              codazzi_precheck,
              codazzi_residual(*cyl.endo_F, cyl.base, x, a, b).cwiseAbs().maxCoeff());
    }
    if (codazzi_precheck <= 1e-7)
      chk.add("endo-cylinder.mixed", "mixed curvature vanishing under the integrability condition",
              cz, tol, c.samples);
    else
      report.extra["mixed_residual_non_integrable"] = cz;
  } else if (c.command == "verify.commutator") {
    const double tol = c.tol > 0 ? c.tol : 1e-4;
    const GammaRep& rep = rep_for(cyl.base.sig);
    SmoothSpinorField phi0;
    const int sd = rep.dim();
    phi0.eval = [sd](const RVec& x) {
      CVec v(sd);
      for (int cc = 0; cc < sd; ++cc)
        v(cc) = (0.7 + 0.1 * cc) * std::exp(kI * (x(0) - 0.5 * x(1) + 0.3 * cc));
      return v;
    };
    double worst = 0.0;
    for (int i = 0; i < c.samples; ++i) {
      const RVec x = sample_point(cyl.base, rng);
      const double t = tdist(rng);
      chk.samples.push_back(point_json(x));
      worst = std::max(worst, max_abs(commutator_residual(cyl, phi0, x, t)));
    }
    chk.add("commutator.leafwise", "leafwise Dirac vs normal derivative commutator",
            worst, tol, c.samples);
  } else if (c.command == "verify.killing-to-parallel") {
    const double tol = c.tol > 0 ? c.tol : 1e-4;
    if (c.scenario != "cylinder-sphere-cone")
      throw ConfigError("killing-to-parallel: catalog Killing data exists for "
                        "cylinder-sphere-cone only");
    KillingData kd = sphere_killing_spinor(c.radius);
    AmbientTransportedField built = build_parallel_from_killing(
        cyl, kd.field, kd.tensor, std::min(c.samples, 40), c.seed);
    chk.add("killing.extension.normal", "normal-direction parallelism of the extension",
            built.report.max_nu_residual, tol, built.report.samples);
    chk.add("killing.extension.tangent", "tangent-direction parallelism of the extension",
            built.report.max_tangent_residual, tol, built.report.samples);
    report.extra["killing_precheck"] = built.report.killing_precheck;
    report.extra["codazzi_precheck"] = built.report.codazzi_precheck;
  } else {
    throw ConfigError("unknown verify target '" + c.command + "'");
  }
  report.extra["samples"] = chk.samples;
}

void run_spectrum(const RunConfig& c, Report& report) {
  ScenarioParams params = c.scenario_params();
  Scenario sc = scenario_by_name(c.scenario.empty() ? "torus2-flat" : c.scenario, params);
  std::vector<int> dims(sc.sig.dim(), c.grid);
  SpectrumResult spec = spectrum_with_estimate(sc, dims, c.eigs);

  Checker chk{report};
  LatticeGrid grid = make_grid(sc, dims);
  DiracMatrix d = assemble_dirac(grid);
  chk.add("lattice.hermiticity", "weighted self-adjointness of the assembled operator",
          d.hermiticity_defect, 1e-10, grid.sites());

  JsonValue eigs{JsonValue::Array{}};
  const int count = std::min<int>(static_cast<int>(spec.eigenvalues.size()),
                                  std::max(c.eigs * 2, 16));
  std::vector<size_t> order(spec.eigenvalues.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::abs(spec.eigenvalues[a]) < std::abs(spec.eigenvalues[b]);
  });
  for (int i = 0; i < count; ++i) {
    JsonValue row;
    row["index"] = i;
    row["lambda"] = spec.eigenvalues[order[i]];
    row["convergence_estimate"] = spec.convergence_estimate.empty()
                                      ? 0.0
                                      : spec.convergence_estimate[order[i]];
    eigs.push_back(row);
  }
  report.extra["eigenvalues"] = eigs;

  if (!c.out_path.empty() && c.format == "csv") {
    std::ofstream csv(c.out_path);
    csv << "index,lambda,convergence_estimate\n";
    for (int i = 0; i < count; ++i) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", i,
                    spec.eigenvalues[order[i]],
                    spec.convergence_estimate.empty() ? 0.0
                                                      : spec.convergence_estimate[order[i]]);
      csv << buf;
    }
  }
}

void run_variation(const RunConfig& c, Report& report) {
  Scenario sc = scenario_by_name(c.scenario.empty() ? "torus2-flat" : c.scenario);
  std::vector<int> dims(sc.sig.dim(), c.grid);
  LatticeGrid grid = make_grid(sc, dims);
  DiracMatrix d = assemble_dirac(grid);
  SpectrumResult spec = spectrum(d);
  int pick = -1;
  for (size_t i = 0; i < spec.eigenvalues.size(); ++i)
    if (spec.eigenvalues[i] > 0.5) {
      pick = static_cast<int>(i);
      break;
    }
  if (pick < 0) throw NumericalError("variation: no suitable eigenspinor");
  const CVec psi = spec.eigenvectors[pick];

  static const PairingCalibration cal = calibrate_pairing();
  SymmetricTensorField k = named_k_mode(c.k_spec);
  VariationReport rep = variation_check(sc, k, grid, psi, c.h, cal);
  OperatorVariationReport op = dirac_variation_operator_check(sc, k, grid, psi, c.h);

  Checker chk{report};
  const double tol = c.tol > 0 ? c.tol : 5e-3;
  chk.add("variation.form", "metric derivative of the Dirac form vs energy-momentum pairing",
          rep.agreement, tol, grid.sites());
  chk.add("variation.operator", "transported-operator derivative vs first-order formula",
          op.rms_residual, tol, grid.sites());
  report.extra["lhs"] = rep.lhs;
  report.extra["rhs"] = rep.rhs;
  report.extra["pairing_constant"] = cal.constant;
  report.extra["pairing_raw_ratio"] = cal.raw_ratio;
  report.extra["model_error_bound"] = rep.model_error_bound;
  report.extra["lambda"] = spec.eigenvalues[pick];
}

void run_frkim(const RunConfig& c, Report& report) {
  Scenario sc = scenario_by_name(c.scenario.empty() ? "torus2-flat" : c.scenario);
  std::vector<int> dims(sc.sig.dim(), c.grid);
  LatticeGrid grid = make_grid(sc, dims);
  DiracMatrix d = assemble_dirac(grid);

  // critical-point data: the parallel zero mode and lambda = 0 unless given
  SpectrumResult spec = spectrum(d);
  size_t zero_idx = 0;
  double best = 1e300;
  for (size_t i = 0; i < spec.eigenvalues.size(); ++i)
    if (std::abs(spec.eigenvalues[i]) < best) {
      best = std::abs(spec.eigenvalues[i]);
      zero_idx = i;
    }
  const CVec psi = spec.eigenvectors[zero_idx];
  const double lambda = c.lambda ? *c.lambda : spec.eigenvalues[zero_idx];

  FrkimReport rep = frkim_first_variation(sc, grid, d, psi, lambda, c.eps_coupling,
                                          fourier_k_basis(), c.h);
  Checker chk{report};
  const double tol = (c.tol > 0 ? c.tol : 1e-4) * rep.scale;
  double worst_dw = 0.0, worst_pair = 0.0;
  for (double v : rep.dW_dt) worst_dw = std::max(worst_dw, std::abs(v));
  for (double v : rep.pairing) worst_pair = std::max(worst_pair, std::abs(v));
  chk.add("lagrange.first-variation", "criticality of the coupled functional",
          worst_dw, tol, static_cast<int>(rep.dW_dt.size()));
  chk.add("lagrange.euler-lagrange", "vanishing pairing with the curvature-energy tensor",
          worst_pair, tol, static_cast<int>(rep.pairing.size()));
  chk.add("lagrange.eigen-residual", "eigen-equation part of the critical system",
          rep.eigen_residual, 1e-8, 1);
  report.extra["dW_dt"] = [&] {
    JsonValue arr{JsonValue::Array{}};
    for (double v : rep.dW_dt) arr.push_back(v);
    return arr;
  }();
  report.extra["pairing"] = [&] {
    JsonValue arr{JsonValue::Array{}};
    for (double v : rep.pairing) arr.push_back(v);
    return arr;
  }();
  report.extra["lambda"] = lambda;
  report.extra["scale"] = rep.scale;
}

void run_bound(const RunConfig& c, Report& report) {
  ScenarioParams params = c.scenario_params();
  Scenario sc = scenario_by_name(c.scenario.empty() ? "torus2-magnetic" : c.scenario,
                                 params);
  std::vector<int> dims(sc.sig.dim(), c.grid);
  std::vector<BoundReport> reps = bound_check(sc, dims, c.eigs);

  Checker chk{report};
  JsonValue rows{JsonValue::Array{}};
  double worst_violation = 0.0;
  double tol_used = 0.0;
  int zero_modes = 0;
  for (const BoundReport& b : reps) {
    JsonValue row;
    row["index"] = b.eigen_index;
    row["lambda"] = b.lambda;
    row["lambda_sq"] = b.lambda_sq;
    row["rhs_inf"] = b.rhs_inf;
    row["margin"] = b.margin;
    row["tol_disc"] = b.tol_disc;
    row["pass"] = b.pass;
    row["limit_residual_nabla"] = b.limit_residual_nabla;
    row["limit_residual_omega"] = b.limit_residual_omega;
    rows.push_back(row);
    worst_violation = std::max(worst_violation, -b.margin);
    tol_used = std::max(tol_used, b.tol_disc);
    if (std::abs(b.lambda) <= 0.05) ++zero_modes;
  }
  chk.add("bound.margin", "eigenvalue square vs curvature-energy infimum",
          worst_violation, tol_used, static_cast<int>(reps.size()));
  report.extra["eigenpairs"] = rows;
  report.extra["near_zero_modes"] = zero_modes;
}

}  // namespace

std::string list_scenarios_text() {
  std::ostringstream out;
  out << "name                        kind       dim  signature  backends"
         "   reference\n";
  for (const ScenarioInfo& info : scenario_catalog()) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-27s %-10s %-4d (%d,%d)      %-10s %s\n",
                  info.name.c_str(), info.kind.c_str(), info.dim, info.sig.r,
                  info.sig.s, info.backends.c_str(), info.has_reference ? "yes" : "no");
    out << buf;
  }
  return out.str();
}

JsonValue list_scenarios_json() {
  JsonValue arr{JsonValue::Array{}};
  for (const ScenarioInfo& info : scenario_catalog()) {
    JsonValue row;
    row["name"] = info.name;
    row["kind"] = info.kind;
    row["dim"] = info.dim;
    row["r"] = info.sig.r;
    row["s"] = info.sig.s;
    row["backends"] = info.backends;
    row["has_reference"] = info.has_reference;
    arr.push_back(row);
  }
  return arr;
}

RunResult run(const RunConfig& config) {
  RunResult result;
  result.report.tool_version = kToolVersion;
  result.report.config_echo = config_json(config);
  const auto start = std::chrono::steady_clock::now();

  try {
    const bool sampled = config.command.rfind("verify.", 0) == 0;
    if (sampled && !config.seed_set)
      throw ConfigError("sampled runs require an explicit seed");

    if (config.command == "list-scenarios") {
      result.report.extra["scenarios"] = list_scenarios_json();
    } else if (config.command == "verify.gauss" ||
               config.command == "verify.dirac-gauss" ||
               config.command == "verify.omega-split" ||
               config.command == "verify.morel") {
      run_immersion_checks(config, result.report);
    } else if (config.command == "verify.ricci-identity" ||
               config.command == "verify.curvature-commutator") {
      run_chart_checks(config, result.report);
    } else if (config.command == "verify.cylinder-curvature" ||
               config.command == "verify.bala" ||
               config.command == "verify.commutator" ||
               config.command == "verify.killing-to-parallel") {
      run_cylinder_checks(config, result.report);
    } else if (config.command == "spectrum") {
      run_spectrum(config, result.report);
    } else if (config.command == "variation") {
      run_variation(config, result.report);
    } else if (config.command == "frkim") {
      run_frkim(config, result.report);
    } else if (config.command == "bound") {
      run_bound(config, result.report);
    } else {
      throw ConfigError("unknown command '" + config.command + "'");
    }
    result.exit_code = result.report.all_pass() ? 0 : 2;
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.report.extra["error"] = std::string(e.what());
  }

  result.report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.out_path.empty() && config.format != "csv")
    write_report_atomic(config.out_path, result.report);
  return result;
}

}  // namespace spincal
