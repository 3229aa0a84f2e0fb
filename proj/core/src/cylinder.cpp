#include "spincal/cylinder.hpp"

#include <cmath>

#include "spincal/derivative.hpp"
#include "spincal/spinc.hpp"

namespace spincal {

Scenario CylinderScenario::ambient() const {
  const int n = base.sig.dim();
  Scenario amb;
  amb.name = name + ".ambient";
  amb.sig = {base.sig.r + 1, base.sig.s};
  auto base_metric = base.metric;
  amb.metric = [base_metric, n](double, const RVec& y) {
    RMat g = RMat::Zero(n + 1, n + 1);
    g(0, 0) = 1.0;
    g.block(1, 1, n, n) = base_metric(y(0), RVec(y.tail(n)));
    return g;
  };
  amb.domain.lo = RVec(n + 1);
  amb.domain.hi = RVec(n + 1);
  amb.domain.lo(0) = t0;
  amb.domain.hi(0) = t1;
  amb.domain.lo.tail(n) = base.domain.lo;
  amb.domain.hi.tail(n) = base.domain.hi;
  amb.domain.periodic.assign(n + 1, false);
  for (int a = 0; a < n; ++a) amb.domain.periodic[a + 1] = base.domain.periodic[a];
  if (ambient_a_override) {
    amb.spinc_a = ambient_a_override;
  } else if (base.spinc_a) {
    auto base_a = base.spinc_a;
    amb.spinc_a = [base_a, n](const RVec& y) {
      RVec a = RVec::Zero(n + 1);
      a.tail(n) = base_a(RVec(y.tail(n)));
      return a;
    };
  }
  amb.lattice_backend = false;
  return amb;
}

RMat CylinderScenario::g_dot(const RVec& x, double t) const {
  auto f = [this, &x](const RVec& tv) { return base.metric(tv(0), x); };
  RVec tvec(1);
  tvec << t;
  return fd::partial(std::function<RMat(const RVec&)>(f), tvec, 0);
}

RMat CylinderScenario::g_ddot(const RVec& x, double t) const {
  auto f = [this, &x](const RVec& tv) { return base.metric(tv(0), x); };
  RVec tvec(1);
  tvec << t;
  return fd::second(std::function<RMat(const RVec&)>(f), tvec, 0);
}

RMat CylinderScenario::endo_matrix(const RVec& x) const {
  if (!endo_F) throw ConfigError("cylinder: no endomorphism family");
  return RMat(base.metric(0.0, x).inverse() * endo_F->at(x));
}

namespace {

// Connection matrix of the normal direction in base spinor components:
// S_nu(t) = 1/4 sum_{j,l} eps_j eps_l <grad_nu e_j, e_l> g_j g_l + i/2 a(nu),
// with <grad_nu e_j, e_l> = (Edot_j + 1/2 g^{-1} gdot E_j)^T g E_l.
CMat transport_generator(const CylinderScenario& cyl, const GammaRep& rep,
                         const RVec& x, double t) {
  const int n = cyl.base.sig.dim();
  const RMat g = cyl.base.metric(t, x);
  const RMat gdot = cyl.g_dot(x, t);
  const RMat frame = orthonormal_frame(g, cyl.base.sig);

  auto framefun = [&](const RVec& tv) {
    return orthonormal_frame(cyl.base.metric(tv(0), x), cyl.base.sig);
  };
  RVec tvec(1);
  tvec << t;
  const RMat fdot = fd::partial(std::function<RMat(const RVec&)>(framefun), tvec, 0);

  const RMat cov = fdot + 0.5 * g.inverse() * gdot * frame;  // grad_nu e_j columns
  RMat c(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) c(j, l) = cov.col(j).transpose() * g * frame.col(l);

  CMat s = CMat::Zero(rep.dim(), rep.dim());
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      if (c(j, l) == 0.0) continue;
      s += 0.25 * cyl.base.sig.eps(j) * cyl.base.sig.eps(l) * c(j, l) *
           rep.gammas[j] * rep.gammas[l];
    }
  if (cyl.ambient_a_override) {
    RVec y(n + 1);
    y(0) = t;
    y.tail(n) = x;
    s += 0.5 * kI * cyl.ambient_a_override(y)(0) * CMat::Identity(rep.dim(), rep.dim());
  }
  return s;
}

CVec rk4_transport(const CylinderScenario& cyl, const GammaRep& rep, const RVec& x,
                   const CVec& sigma, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  CVec y = sigma;
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const CMat s1 = transport_generator(cyl, rep, x, t);
    const CMat s2 = transport_generator(cyl, rep, x, t + 0.5 * h);
    const CMat s3 = transport_generator(cyl, rep, x, t + h);
    const CVec k1 = -(s1 * y);
    const CVec k2 = -(s2 * (y + 0.5 * h * k1));
    const CVec k3 = -(s2 * (y + 0.5 * h * k2));
    const CVec k4 = -(s3 * (y + h * k3));
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace

TransportResult parallel_transport(const CylinderScenario& cyl, const RVec& x,
                                   const CVec& sigma, double t0, double t1,
                                   double tol) {
  const GammaRep& rep = rep_for(cyl.base.sig);
  TransportResult out;
  out.initial = sigma;
  out.t0 = t0;
  out.t1 = t1;
  if (t0 == t1) {
    out.final = sigma;
    out.steps = 0;
    return out;
  }
  const double len = std::abs(t1 - t0);
  int steps = std::max(8, static_cast<int>(len * 40));
  CVec coarse = rk4_transport(cyl, rep, x, sigma, t0, t1, steps);
  for (;;) {
    const int fine_steps = 2 * steps;
    if (fine_steps > (1 << 18))
      throw NumericalError("parallel_transport: step-size underflow before tolerance");
    CVec fine = rk4_transport(cyl, rep, x, sigma, t0, t1, fine_steps);
    if (max_abs(CVec(fine - coarse)) <= tol) {
      out.final = fine;
      out.steps = fine_steps;
      break;
    }
    coarse = fine;
    steps = fine_steps;
  }
  out.unitarity_defect =
      std::abs(rep.norm_sq(out.final) - rep.norm_sq(out.initial));
  return out;
}

CylinderCurvatureResiduals cylinder_curvature_residuals(const CylinderScenario& cyl,
                                                        const RVec& x, double t) {
  const int n = cyl.base.sig.dim();
  const Scenario amb = cyl.ambient();
  RVec y(n + 1);
  y(0) = t;
  y.tail(n) = x;

  GeometryJet zjet = geometry_jet(amb, y);          // (n+1)-dimensional route
  GeometryJet mjet = geometry_jet(cyl.base, x, t);  // base route at level t

  const RMat gdot = cyl.g_dot(x, t);
  const RMat gddot = cyl.g_ddot(x, t);
  const RMat e = mjet.frame;
  RMat gdot_f(n, n), gddot_f(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      gdot_f(i, j) = e.col(i).transpose() * gdot * e.col(j);
      gddot_f(i, j) = e.col(i).transpose() * gddot * e.col(j);
    }

  // left-route Weingarten from the ambient jet (frame is adapted, nu first)
  RMat w_lhs(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w_lhs(i, j) = -zjet.frame_connection[i + 1](0, j + 1);

  CylinderCurvatureResiduals res;
  res.weingarten = max_abs(RMat(w_lhs + 0.5 * gdot_f));

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double lhs = zjet.riemann(i + 1, j + 1, k + 1, l + 1);
          const double rhs =
              mjet.riemann(i, j, k, l) +
              0.25 * (gdot_f(i, k) * gdot_f(j, l) - gdot_f(i, l) * gdot_f(j, k));
          res.gauss = std::max(res.gauss, std::abs(lhs - rhs));
        }

  // grad gdot on (M, g_t): coordinate covariant derivative of the 2-tensor
  auto gdot_field = [&](const RVec& xx) { return cyl.g_dot(xx, t); };
  std::vector<RMat> dgdot(n);
  for (int a = 0; a < n; ++a)
    dgdot[a] = fd::partial(std::function<RMat(const RVec&)>(gdot_field), x, a);
  auto nabla_gdot = [&](int a, int b, int c) {  // (grad_a gdot)(b,c), coords
    double v = dgdot[a](b, c);
    for (int d = 0; d < n; ++d)
      v -= mjet.christoffel[d](a, b) * gdot(d, c) + mjet.christoffel[d](a, c) * gdot(b, d);
    return v;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double lhs = zjet.riemann(i + 1, j + 1, k + 1, 0);
        double dj = 0.0, di = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
              dj += e(a, j) * e(b, i) * e(c, k) * nabla_gdot(a, b, c);
              di += e(a, i) * e(b, j) * e(c, k) * nabla_gdot(a, b, c);
            }
        res.codazzi = std::max(res.codazzi, std::abs(lhs - 0.5 * (dj - di)));
      }

  // radial equation with the base-route Weingarten W = -1/2 g^{-1} gdot
  const RMat w_endo = -0.5 * mjet.g_inv * gdot;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double lhs = zjet.riemann(i + 1, 0, 0, j + 1);
      const double gw = (w_endo * e.col(i)).transpose() * gdot * e.col(j);
      res.radial = std::max(res.radial, std::abs(lhs + 0.5 * (gddot_f(i, j) + gw)));
    }
  return res;
}

BalaResiduals bala_residuals(const CylinderScenario& cyl, const RVec& x, double t) {
  if (!cyl.endo_F)
    throw ConfigError("bala_residuals: cylinder must be built from an endomorphism");
  const int n = cyl.base.sig.dim();
  const Scenario amb = cyl.ambient();
  RVec y(n + 1);
  y(0) = t;
  y.tail(n) = x;
  GeometryJet zjet = geometry_jet(amb, y);
  BalaResiduals res;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      res.radial = std::max(res.radial, std::abs(zjet.riemann(i + 1, 0, 0, j + 1)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        res.codazzi =
            std::max(res.codazzi, std::abs(zjet.riemann(i + 1, j + 1, k + 1, 0)));
  return res;
}

AmbientTransportedField build_parallel_from_killing(
    const CylinderScenario& cyl, const SmoothSpinorField& phi,
    const SymmetricTensorField& killing_F, int samples, unsigned long long seed,
    double ode_tol) {
  const int n = cyl.base.sig.dim();
  const GammaRep& rep = rep_for(cyl.base.sig);
  AmbientTransportedField out;
  std::mt19937_64 rng(seed);

  std::vector<RVec> base_points;
  for (int i = 0; i < samples; ++i) base_points.push_back(sample_point(cyl.base, rng));

  for (const RVec& u : base_points) {
    for (int k = 0; k < n; ++k) {
      const double kr = max_abs(killing_residual(phi, killing_F, cyl.base, u, k, 0.0));
      out.report.killing_precheck = std::max(out.report.killing_precheck, kr);
      for (int l = k + 1; l < n; ++l) {
        const RVec cz = codazzi_residual(killing_F, cyl.base, u, k, l, 0.0);
        out.report.codazzi_precheck =
            std::max(out.report.codazzi_precheck, cz.cwiseAbs().maxCoeff());
      }
    }
  }
  if (out.report.killing_precheck > 1e-7)
    throw NumericalError("build_parallel_from_killing: Killing precondition fails, residual " +
                         std::to_string(out.report.killing_precheck));
  if (out.report.codazzi_precheck > 1e-7)
    throw NumericalError("build_parallel_from_killing: Codazzi precondition fails, residual " +
                         std::to_string(out.report.codazzi_precheck));

  const Signature amb_sig{cyl.base.sig.r + 1, cyl.base.sig.s};
  const AlphaEmbedding emb = alpha_embed(rep, rep_for(amb_sig));
  const CMat lift = emb.restrict_map.completeOrthogonalDecomposition().pseudoInverse();

  CylinderScenario cyl_copy = cyl;
  out.field.eval = [cyl_copy, phi, lift, ode_tol, n](const RVec& y) {
    const RVec x = y.tail(n);
    const CVec start = phi.at(x);
    if (y(0) == 0.0) return CVec(lift * start);
    TransportResult tr = parallel_transport(cyl_copy, x, start, 0.0, y(0), ode_tol);
    return CVec(lift * tr.final);
  };
  out.report.base_restriction = phi;  // tau over an empty interval is identity

  const Scenario amb = cyl.ambient();
  std::uniform_real_distribution<double> tdist(cyl.t0 * 0.85, cyl.t1 * 0.85);
  for (const RVec& u : base_points) {
    RVec y(n + 1);
    y(0) = tdist(rng);
    y.tail(n) = u;
    const double nu_res = max_abs(covariant_derivative(out.field, amb, y, 0));
    out.report.max_nu_residual = std::max(out.report.max_nu_residual, nu_res);
    for (int k = 1; k <= n; ++k) {
      const double tan_res = max_abs(covariant_derivative(out.field, amb, y, k));
      out.report.max_tangent_residual =
          std::max(out.report.max_tangent_residual, tan_res);
    }
  }
  out.report.samples = samples;
  return out;
}

CVec commutator_residual(const CylinderScenario& cyl, const SmoothSpinorField& phi0,
                         const RVec& x, double t, double h_t) {
  const int n = cyl.base.sig.dim();
  if (n % 2 != 0)
    throw ConfigError("commutator_residual: even base dimension required");
  const GammaRep& rep = rep_for(cyl.base.sig);
  const int s = cyl.base.sig.s;

  // transported field in base components, psi(tau, .) = tau_0^tau phi0
  auto psi_at = [&](double tau, const RVec& xx) {
    if (tau == 0.0) return phi0.at(xx);
    return parallel_transport(cyl, xx, phi0.at(xx), 0.0, tau, 1e-10).final;
  };
  auto slice_field = [&](double tau) {
    SmoothSpinorField f;
    f.eval = [&, tau](const RVec& xx) { return psi_at(tau, xx); };
    return f;
  };

  auto dirac_level = [&](double tau, const RVec& xx) {
    SmoothSpinorField f = slice_field(tau);
    return dirac_pointwise(f, cyl.base, xx, tau);
  };

  // grad_nu of a base-component field on Z: d_t + S_nu(t)
  auto grad_nu = [&](const std::function<CVec(double, const RVec&)>& field,
                     double tau, const RVec& xx) {
    const CVec up = field(tau + h_t, xx);
    const CVec dn = field(tau - h_t, xx);
    return CVec((up - dn) / (2.0 * h_t) +
                transport_generator(cyl, rep, xx, tau) * field(tau, xx));
  };

  SmoothSpinorField nu_of_psi;
  nu_of_psi.eval = [&](const RVec& xx) { return grad_nu(psi_at, t, xx); };
  const CVec lhs = ipow(-s) * CVec(grad_nu(dirac_level, t, x) -
                                   dirac_pointwise(nu_of_psi, cyl.base, x, t));

  // right side from leafwise data
  GeometryJet jet = geometry_jet(cyl.base, x, t);
  const RMat gdot = cyl.g_dot(x, t);
  const RMat w_endo = -0.5 * jet.g_inv * gdot;
  SmoothSpinorField psi_slice = slice_field(t);
  const CVec value = psi_slice.at(x);

  CVec dw = CVec::Zero(value.size());  // sum eps_i e_i . grad_{W(e_i)} psi
  for (int i = 0; i < n; ++i) {
    const RVec w_frame = jet.to_frame(RVec(w_endo * jet.frame.col(i)));
    CVec cov = CVec::Zero(value.size());
    for (int c = 0; c < n; ++c) {
      if (std::abs(w_frame(c)) < 1e-15) continue;
      cov += w_frame(c) * covariant_derivative(psi_slice, cyl.base, x, c, t);
    }
    dw += cyl.base.sig.eps(i) * (rep.gammas[i] * cov);
  }

  // H = tr(W)/n as a leafwise scalar field
  auto h_field = [&](const RVec& xx) {
    const RMat g = cyl.base.metric(t, xx);
    const RMat gd = cyl.g_dot(xx, t);
    return RMat((-0.5 * g.inverse() * gd).trace() / n * RMat::Identity(1, 1));
  };
  RVec grad_h_coord = RVec::Zero(n);
  for (int a = 0; a < n; ++a)
    grad_h_coord(a) =
        fd::partial(std::function<RMat(const RVec&)>(h_field), x, a)(0, 0);
  const RVec grad_h = jet.to_frame(RVec(jet.g_inv * grad_h_coord));
  CVec grad_h_term = CVec::Zero(value.size());
  for (int l = 0; l < n; ++l)
    grad_h_term += grad_h(l) * (rep.gammas[l] * value);

  // div W = sum_i eps_i (grad_{e_i} W)(e_i)
  auto w_of_frame = [&](const RVec& xx, int j) {
    const RMat g = cyl.base.metric(t, xx);
    const RMat gd = cyl.g_dot(xx, t);
    const RMat e = orthonormal_frame(g, cyl.base.sig);
    return RVec(-0.5 * g.inverse() * gd * e.col(j));
  };
  RVec divw_coord = RVec::Zero(n);
  for (int i = 0; i < n; ++i) {
    auto wfun = [&](const RVec& xx) { return RMat(w_of_frame(xx, i)); };
    RVec dvec = RVec::Zero(n);
    for (int a = 0; a < n; ++a) {
      const double c = jet.frame(a, i);
      if (c == 0.0) continue;
      dvec += c * fd::partial(std::function<RMat(const RVec&)>(wfun), x, a).col(0);
    }
    const RVec w = w_of_frame(x, i);
    for (int cc = 0; cc < n; ++cc)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          dvec(cc) += jet.frame(a, i) * jet.christoffel[cc](a, b) * w(b);
    RVec nabla_e = RVec::Zero(n);
    for (int l = 0; l < n; ++l)
      nabla_e += cyl.base.sig.eps(l) * jet.frame_connection[i](i, l) * jet.frame.col(l);
    divw_coord += cyl.base.sig.eps(i) * (dvec - RVec(-0.5 * jet.g_inv * gdot * nabla_e));
  }
  const RVec divw = jet.to_frame(divw_coord);
  CVec divw_term = CVec::Zero(value.size());
  for (int l = 0; l < n; ++l) divw_term += divw(l) * (rep.gammas[l] * value);

  // bundle term (i/2)(nu -| Omega^Z) . psi
  const Scenario amb = cyl.ambient();
  RVec y(n + 1);
  y(0) = t;
  y.tail(n) = x;
  const RMat omega_z = amb.omega_at(y);
  GeometryJet zjet_frame = geometry_jet(amb, y);
  CVec omega_term = CVec::Zero(value.size());
  for (int l = 0; l < n; ++l) {
    const double comp = zjet_frame.frame.col(0).transpose() * omega_z *
                        zjet_frame.frame.col(l + 1);
    omega_term += 0.5 * kI * comp * (rep.gammas[l] * value);
  }

  const CVec rhs = dw - (0.5 * n) * grad_h_term + 0.5 * divw_term + omega_term;
  return lhs - rhs;
}

}  // namespace spincal
