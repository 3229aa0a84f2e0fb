#include "spincal/spinc.hpp"

#include <map>
#include <mutex>

#include "spincal/derivative.hpp"

namespace spincal {

const GammaRep& rep_for(const Signature& sig) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, GammaRep> cache;
  std::scoped_lock lock(mtx);
  auto key = std::make_pair(sig.r, sig.s);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_gamma_rep(sig)).first;
  return it->second;
}

SpincConnectionJet spinc_connection_jet(const Scenario& sc, const RVec& x, double t) {
  const int n = sc.sig.dim();
  const GammaRep& rep = rep_for(sc.sig);
  SpincConnectionJet out;
  out.jet = geometry_jet(sc, x, t);

  const RVec a = sc.a_at(x);
  out.a_frame = RVec::Zero(n);
  for (int k = 0; k < n; ++k) out.a_frame(k) = a.dot(out.jet.frame.col(k));

  out.s_mats.assign(n, CMat::Zero(rep.dim(), rep.dim()));
  for (int k = 0; k < n; ++k) {
    CMat s = CMat::Zero(rep.dim(), rep.dim());
    // 1/4 sum_j eps_j g(e_j) g(grad_{e_k} e_j), the vector expanded in frame
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const double c = out.jet.frame_connection[k](j, l);
        if (c == 0.0) continue;
        s += 0.25 * sc.sig.eps(j) * sc.sig.eps(l) * c * rep.gammas[j] * rep.gammas[l];
      }
    s += 0.5 * kI * out.a_frame(k) * CMat::Identity(rep.dim(), rep.dim());
    out.s_mats[k] = s;
  }

  const RMat om = sc.omega_at(x);
  out.omega_frame = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.omega_frame(i, j) = out.jet.frame.col(i).transpose() * om * out.jet.frame.col(j);
  double sq = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) sq += out.omega_frame(i, j) * out.omega_frame(i, j);
  out.omega_norm = std::sqrt(sq);
  return out;
}

namespace {

CVec frame_directional(const SmoothSpinorField& field, const GeometryJet& jet,
                       const RVec& x, int k) {
  const int n = jet.sig.dim();
  CVec out;
  for (int a = 0; a < n; ++a) {
    const double c = jet.frame(a, k);
    if (c == 0.0) continue;
    CVec d = c * field.d(x, a);
    out = (out.size() == 0) ? d : CVec(out + d);
  }
  if (out.size() == 0) out = CVec::Zero(field.at(x).size());
  return out;
}

}  // namespace

CVec covariant_derivative(const SmoothSpinorField& field, const Scenario& sc,
                          const RVec& x, int k, double t) {
  SpincConnectionJet cj = spinc_connection_jet(sc, x, t);
  return frame_directional(field, cj.jet, x, k) + cj.s_mats[k] * field.at(x);
}

CVec dirac_pointwise(const SmoothSpinorField& field, const Scenario& sc,
                     const RVec& x, double t) {
  const int n = sc.sig.dim();
  const GammaRep& rep = rep_for(sc.sig);
  SpincConnectionJet cj = spinc_connection_jet(sc, x, t);
  const CVec value = field.at(x);
  CVec sum = CVec::Zero(value.size());
  for (int k = 0; k < n; ++k) {
    CVec cov = frame_directional(field, cj.jet, x, k) + cj.s_mats[k] * value;
    sum += sc.sig.eps(k) * (rep.gammas[k] * cov);
  }
  return ipow(sc.sig.s) * sum;
}

CVec spinor_curvature(const SmoothSpinorField& field, const Scenario& sc,
                      const RVec& x, int X, int Y, double t) {
  const int n = sc.sig.dim();
  const GammaRep& rep = rep_for(sc.sig);
  SpincConnectionJet cj = spinc_connection_jet(sc, x, t);
  const CVec value = field.at(x);
  CVec out = CVec::Zero(value.size());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double r = cj.jet.riemann(X, Y, j, k);
      if (r == 0.0) continue;
      out += 0.25 * sc.sig.eps(j) * sc.sig.eps(k) * r *
             (rep.gammas[j] * (rep.gammas[k] * value));
    }
  out += 0.5 * kI * cj.omega_frame(X, Y) * value;
  return out;
}

CVec spinor_curvature_commutator(const SmoothSpinorField& field, const Scenario& sc,
                                 const RVec& x, int X, int Y, double t) {
  const int n = sc.sig.dim();
  SpincConnectionJet cj = spinc_connection_jet(sc, x, t);

  SmoothSpinorField covX, covY;
  covX.eval = [&field, &sc, X, t](const RVec& y) {
    return covariant_derivative(field, sc, y, X, t);
  };
  covY.eval = [&field, &sc, Y, t](const RVec& y) {
    return covariant_derivative(field, sc, y, Y, t);
  };

  CVec second_xy = covariant_derivative(covY, sc, x, X, t);
  CVec second_yx = covariant_derivative(covX, sc, x, Y, t);

  const RVec bracket = cj.jet.to_frame(cj.jet.frame_bracket(X, Y));
  CVec bracket_term = CVec::Zero(second_xy.size());
  for (int c = 0; c < n; ++c) {
    if (std::abs(bracket(c)) < 1e-14) continue;
    bracket_term += bracket(c) * covariant_derivative(field, sc, x, c, t);
  }
  return second_xy - second_yx - bracket_term;
}

CVec ricci_identity_residual(const SmoothSpinorField& field, const Scenario& sc,
                             const RVec& x, int X, double t) {
  const int n = sc.sig.dim();
  const GammaRep& rep = rep_for(sc.sig);
  SpincConnectionJet cj = spinc_connection_jet(sc, x, t);
  const CVec value = field.at(x);

  CVec lhs = CVec::Zero(value.size());
  for (int k = 0; k < n; ++k)
    lhs += sc.sig.eps(k) * (rep.gammas[k] * spinor_curvature(field, sc, x, k, X, t));

  // Ric(X) expanded in the frame
  CVec ric_term = CVec::Zero(value.size());
  for (int l = 0; l < n; ++l)
    ric_term += 0.5 * sc.sig.eps(l) * cj.jet.ricci_frame(X, l) * (rep.gammas[l] * value);

  // (X -| Omega) as a vector: <u, e_l> = Omega(X, e_l)
  CVec omega_term = CVec::Zero(value.size());
  for (int l = 0; l < n; ++l)
    omega_term += 0.5 * kI * sc.sig.eps(l) * cj.omega_frame(X, l) * (rep.gammas[l] * value);

  return lhs - ric_term + omega_term;
}

}  // namespace spincal
