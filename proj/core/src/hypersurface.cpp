#include "spincal/hypersurface.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "spincal/derivative.hpp"
#include "spincal/spinc.hpp"

namespace spincal {

const GammaRep& Immersion::ambient_rep() const { return rep_for(ambient.sig); }
const GammaRep& Immersion::base_rep() const { return rep_for(base.sig); }

const AlphaEmbedding& Immersion::alpha(bool negative) const {
  static std::mutex mtx;
  static std::map<std::tuple<int, int, bool>, AlphaEmbedding> cache;
  std::scoped_lock lock(mtx);
  auto key = std::make_tuple(base.sig.r, base.sig.s, negative);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, alpha_embed(base_rep(), ambient_rep(), negative)).first;
  return it->second;
}

SmoothSpinorField Immersion::restrict_field(const SmoothSpinorField& ambient_field,
                                            bool negative) const {
  const CMat r = alpha(negative).restrict_map;
  auto embed = embedding;
  SmoothSpinorField f;
  f.eval = [r, embed, ambient_field](const RVec& u) {
    return CVec(r * ambient_field.at(embed(u)));
  };
  if (ambient_field.partial) {
    auto apart = ambient_field.partial;
    auto self = *this;
    f.partial = [r, embed, apart, self](const RVec& u, int axis) {
      // chain rule through the embedding jacobian column
      const RVec jcol = self.jacobian_col(u, axis);
      CVec sum = CVec::Zero(r.rows());
      const RVec y = embed(u);
      for (int a = 0; a < jcol.size(); ++a)
        if (jcol(a) != 0.0) sum += jcol(a) * (r * apart(y, a));
      return sum;
    };
  }
  return f;
}

RVec Immersion::jacobian_col(const RVec& u, int j) const {
  auto f = [this](const RVec& v) { return RMat(embedding(v)); };
  return fd::partial(std::function<RMat(const RVec&)>(f), u, j).col(0);
}

RMat weingarten(const Immersion& imm, const RVec& u) {
  const int n = imm.base.sig.dim();
  const RVec y = imm.embedding(u);
  GeometryJet zjet = geometry_jet(imm.ambient, y);
  GeometryJet mjet = geometry_jet(imm.base, u);

  // tangent frame pushed into the ambient chart
  std::vector<RVec> tangents(n);
  for (int i = 0; i < n; ++i) {
    RVec v = RVec::Zero(n + 1);
    for (int a = 0; a < n; ++a) v += mjet.frame(a, i) * imm.jacobian_col(u, a);
    tangents[i] = v;
  }

  // grad_{e_i} nu along the surface: d(nu o emb) e_i + ambient Christoffels
  auto nu_field = [&imm](const RVec& v) { return RMat(imm.normal(v)); };
  RMat w(n, n);
  for (int i = 0; i < n; ++i) {
    RVec dnu = RVec::Zero(n + 1);
    for (int a = 0; a < n; ++a) {
      const double c = mjet.frame(a, i);
      if (c == 0.0) continue;
      dnu += c * fd::partial(std::function<RMat(const RVec&)>(nu_field), u, a).col(0);
    }
    const RVec nu = imm.normal(u);
    for (int cc = 0; cc < n + 1; ++cc)
      for (int a = 0; a < n + 1; ++a)
        for (int b = 0; b < n + 1; ++b)
          dnu(cc) += tangents[i](a) * zjet.christoffel[cc](a, b) * nu(b);
    for (int j = 0; j < n; ++j)
      w(i, j) = -double(dnu.transpose() * zjet.g * tangents[j]);
  }
  return w;
}

CVec gauss_formula_residual(const Immersion& imm, const SmoothSpinorField& psi,
                            const RVec& u, int X, bool negative) {
  const RVec y = imm.embedding(u);
  const GammaRep& brep = imm.base_rep();
  const AlphaEmbedding& emb = imm.alpha(negative);

  // ambient side: covariant derivative along the adapted tangent direction
  const CVec ambient_side =
      emb.restrict_map * covariant_derivative(psi, imm.ambient, y, X + 1);

  // base side: derivative of the restricted field plus the shape term
  SmoothSpinorField phi = imm.restrict_field(psi, negative);
  const CVec base_deriv = covariant_derivative(phi, imm.base, u, X);

  const RMat w = weingarten(imm, u);
  const CVec value = phi.at(u);
  CVec shape = CVec::Zero(value.size());
  for (int j = 0; j < imm.base.sig.dim(); ++j)
    shape += imm.base.sig.eps(j) * w(X, j) * (brep.gammas[j] * value);
  // w(X, .) are inner products <W(e_X), e_j>; expansion needs eps weights

  return ambient_side - base_deriv + 0.5 * shape;
}

CVec dirac_gauss_residual(const Immersion& imm, const SmoothSpinorField& psi,
                          const RVec& u, bool negative) {
  const int n = imm.base.sig.dim();
  const int s = imm.base.sig.s;
  const RVec y = imm.embedding(u);
  const GammaRep& arep = imm.ambient_rep();
  const AlphaEmbedding& emb = imm.alpha(negative);
  const double dtilde_sign = negative ? -1.0 : 1.0;

  const CVec nu_dz = emb.restrict_map *
                     CVec(arep.gammas[0] * dirac_pointwise(psi, imm.ambient, y));

  SmoothSpinorField phi = imm.restrict_field(psi, negative);
  const CVec dtilde = dtilde_sign * dirac_pointwise(phi, imm.base, u);

  const RMat w = weingarten(imm, u);
  double h = 0.0;
  for (int i = 0; i < n; ++i) h += imm.base.sig.eps(i) * w(i, i);
  h /= n;

  const CVec nu_deriv = emb.restrict_map * covariant_derivative(psi, imm.ambient, y, 0);

  return nu_dz - dtilde - ipow(s) * (0.5 * n * h) * phi.at(u) + ipow(s) * nu_deriv;
}

OmegaSplitResiduals omega_split_residuals(const Immersion& imm,
                                          const SmoothSpinorField& psi,
                                          const RVec& u) {
  const int n = imm.base.sig.dim();
  const RVec y = imm.embedding(u);
  const GammaRep& arep = imm.ambient_rep();
  const GammaRep& brep = imm.base_rep();
  const AlphaEmbedding& emb = imm.alpha();

  // ambient curvature two-form in the adapted frame
  GeometryJet zjet = geometry_jet(imm.ambient, y);
  const RMat omz_coord = imm.ambient.omega_at(y);
  RMat omz(n + 1, n + 1);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      omz(a, b) = zjet.frame.col(a).transpose() * omz_coord * zjet.frame.col(b);

  // base curvature from the pulled-back connection (independent route)
  GeometryJet mjet = geometry_jet(imm.base, u);
  const RMat omm_coord = imm.base.omega_at(u);
  RMat omm(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      omm(a, b) = mjet.frame.col(a).transpose() * omm_coord * mjet.frame.col(b);

  auto norm_sq = [](const RMat& m) {
    double v = 0.0;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = i + 1; j < m.cols(); ++j) v += m(i, j) * m(i, j);
    return v;
  };
  double interior_sq = 0.0;
  for (int j = 1; j <= n; ++j) interior_sq += omz(0, j) * omz(0, j);

  OmegaSplitResiduals out;
  out.scalar = std::abs(norm_sq(omz) - norm_sq(omm) - interior_sq);

  const CVec lhs = emb.restrict_map * two_form_action(arep, omz, psi.at(y));
  SmoothSpinorField phi = imm.restrict_field(psi);
  const CVec value = phi.at(u);
  const CVec tangential = two_form_action(brep, omm, value);
  CVec interior = CVec::Zero(value.size());
  for (int j = 0; j < n; ++j)
    interior += imm.base.sig.eps(j) * omz(0, j + 1) * (brep.gammas[j] * value);
  out.spinor = max_abs(CVec(lhs - tangential - interior));
  return out;
}

MorelReport morel_check(const Immersion& imm, const SmoothSpinorField& psi,
                        const RVec& u, double precheck_tol) {
  const int n = imm.base.sig.dim();
  const RVec y = imm.embedding(u);
  MorelReport out;

  for (int k = 0; k <= n; ++k)
    out.parallelism_precheck = std::max(
        out.parallelism_precheck, max_abs(covariant_derivative(psi, imm.ambient, y, k)));
  if (out.parallelism_precheck > precheck_tol)
    throw NumericalError("morel_check: ambient field fails the parallelism pre-check");

  SmoothSpinorField phi = imm.restrict_field(psi);
  EMTensorValue em = em_tensor(phi, imm.base, u);
  const RMat w = weingarten(imm, u);
  if (!em.ell)
    throw NumericalError("morel_check: restricted spinor vanishes at the sample");
  out.ell_plus_half_w = max_abs(RMat(2.0 * (*em.ell) + w));

  double h = 0.0;
  for (int i = 0; i < n; ++i) h += imm.base.sig.eps(i) * w(i, i);
  h /= n;
  out.mean_curvature = h;

  GeometryJet zjet = geometry_jet(imm.ambient, y);
  GeometryJet mjet = geometry_jet(imm.base, u);
  const RMat omm_coord = imm.base.omega_at(u);
  double omm_sq = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double c =
          mjet.frame.col(a).transpose() * omm_coord * mjet.frame.col(b);
      omm_sq += c * c;
    }
  const double c_n = 2.0 * std::sqrt(static_cast<double>(n / 2));
  out.equality_quantity =
      zjet.scalar - 2.0 * zjet.ricci_frame(0, 0) - c_n * std::sqrt(omm_sq);

  const CVec dphi = dirac_pointwise(phi, imm.base, u);
  out.dirac_eigen_residual = max_abs(CVec(dphi + (0.5 * n * h) * phi.at(u)));
  return out;
}

}  // namespace spincal
