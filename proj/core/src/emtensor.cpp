#include "spincal/emtensor.hpp"

#include "spincal/derivative.hpp"

namespace spincal {

EMTensorValue em_tensor(const SmoothSpinorField& field, const Scenario& sc,
                        const RVec& x, double t, double field_max_norm_sq) {
  const int n = sc.sig.dim();
  const GammaRep& rep = rep_for(sc.sig);
  EMTensorValue out;
  out.x = x;
  const CVec value = field.at(x);
  out.norm_sq = rep.norm_sq(value);

  std::vector<CVec> cov(n);
  for (int k = 0; k < n; ++k) cov[k] = covariant_derivative(field, sc, x, k, t);

  out.tensor = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Complex a = rep.inner(CVec(rep.gammas[i] * cov[j]), value);
      const Complex b = rep.inner(CVec(rep.gammas[j] * cov[i]), value);
      out.tensor(i, j) = out.tensor(j, i) = 0.5 * (a + b).real();
    }

  if (out.norm_sq >= 1e-12 * field_max_norm_sq)
    out.ell = RMat(out.tensor / out.norm_sq);
  return out;
}

namespace {
// Endomorphism matrix of a bilinear symmetric tensor: F^a_b = g^{ac} k_{cb}.
RMat endomorphism(const RMat& g_inv, const RMat& k_bilinear) {
  return g_inv * k_bilinear;
}
}  // namespace

CVec killing_residual(const SmoothSpinorField& field, const SymmetricTensorField& F,
                      const Scenario& sc, const RVec& x, int X, double t) {
  const GammaRep& rep = rep_for(sc.sig);
  GeometryJet jet = geometry_jet(sc, x, t);
  const RMat fe = endomorphism(jet.g_inv, F.at(x));
  const RVec fx_coord = fe * jet.frame.col(X);
  const RVec fx_frame = jet.to_frame(fx_coord);
  const CVec value = field.at(x);
  CVec cliff = CVec::Zero(value.size());
  for (int l = 0; l < sc.sig.dim(); ++l)
    cliff += fx_frame(l) * (rep.gammas[l] * value);
  return covariant_derivative(field, sc, x, X, t) - 0.5 * cliff;
}

RVec codazzi_residual(const SymmetricTensorField& F, const Scenario& sc,
                      const RVec& x, int X, int Y, double t) {
  const int n = sc.sig.dim();
  GeometryJet jet = geometry_jet(sc, x, t);

  // W_j(y) = F_endo(y) e_j(y): the vector field F(e_j) in coordinates
  auto f_of_frame = [&](const RVec& y, int j) {
    const RMat g = sc.metric(t, y);
    const RMat e = orthonormal_frame(g, sc.sig);
    return RVec(endomorphism(g.inverse(), F.at(y)) * e.col(j));
  };

  auto covariant_of = [&](int deriv_dir, int arg) {
    // grad_{e_X}(F(e_arg)) - F(grad_{e_X} e_arg)
    auto wfun = [&](const RVec& y) { return RMat(f_of_frame(y, arg)); };
    RVec dW = RVec::Zero(n);
    for (int a = 0; a < n; ++a) {
      const double c = jet.frame(a, deriv_dir);
      if (c == 0.0) continue;
      dW += c * fd::partial(std::function<RMat(const RVec&)>(wfun), x, a).col(0);
    }
    const RVec w = f_of_frame(x, arg);
    for (int cc = 0; cc < n; ++cc)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          dW(cc) += jet.frame(a, deriv_dir) * jet.christoffel[cc](a, b) * w(b);
    // subtract F(grad_{e_X} e_arg)
    const RMat fe = endomorphism(jet.g_inv, F.at(x));
    RVec nabla_e = RVec::Zero(n);
    for (int l = 0; l < n; ++l)
      nabla_e += sc.sig.eps(l) * jet.frame_connection[deriv_dir](arg, l) * jet.frame.col(l);
    return RVec(dW - fe * nabla_e);
  };

  return covariant_of(X, Y) - covariant_of(Y, X);
}

}  // namespace spincal
