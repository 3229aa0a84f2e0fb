#include "spincal/clifford.hpp"

#include <Eigen/SVD>

namespace spincal {

namespace {

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat pauli(int k) {
  CMat m(2, 2);
  switch (k) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -kI, kI, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Anti-Hermitian generators of the definite algebra Cl(n,0):
//   g_{2k-1} = i s3^(k-1) x s1 x 1^(m-k),  g_{2k} = i s3^(k-1) x s2 x 1^(m-k),
// and for n odd additionally g_n = i s3^m.
std::vector<CMat> definite_generators(int n) {
  const int m = n / 2;
  const int d = 1 << m;
  std::vector<CMat> gs;
  gs.reserve(n);
  auto chain = [&](int k, const CMat& mid) {
    CMat acc = CMat::Identity(1, 1);
    for (int j = 0; j < k; ++j) acc = kron(acc, pauli(3));
    acc = kron(acc, mid);
    while (acc.rows() < d) acc = kron(acc, CMat::Identity(2, 2));
    return CMat(kI * acc);
  };
  for (int k = 0; k < m; ++k) {
    gs.push_back(chain(k, pauli(1)));
    gs.push_back(chain(k, pauli(2)));
  }
  if (n % 2 == 1) {
    CMat acc = CMat::Identity(1, 1);
    for (int j = 0; j < m; ++j) acc = kron(acc, pauli(3));
    gs.push_back(kI * acc);
  }
  return gs;
}

// Deterministic sign fix of a candidate form or intertwiner: first row-major
// entry above threshold gets positive real part (positive imaginary part when
// its real part vanishes).
void fix_leading_sign(CMat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex v = m(i, j);
      if (std::abs(v) <= 1e-9) continue;
      if (v.real() < -1e-12 || (std::abs(v.real()) <= 1e-12 && v.imag() < 0.0))
        m = -m;
      return;
    }
}

// Solves X A_j = sign_j B_j X for all j as a stacked null-space problem.
// Returns the (phase- and scale-normalized) solution and its residual.
std::pair<CMat, double> solve_intertwiner(const std::vector<CMat>& a,
                                          const std::vector<CMat>& b,
                                          double sign) {
  const Eigen::Index d = a[0].rows();
  const Eigen::Index nn = static_cast<Eigen::Index>(a.size());
  CMat stacked(nn * d * d, d * d);
  for (Eigen::Index k = 0; k < nn; ++k) {
    // vec(X A) = (A^T kron I) vec(X), vec(B X) = (I kron B) vec(X)
    CMat block = kron(a[k].transpose(), CMat::Identity(d, d)) -
                 sign * kron(CMat::Identity(d, d), b[k]);
    stacked.block(k * d * d, 0, d * d, d * d) = block;
  }
  Eigen::JacobiSVD<CMat> svd(stacked, Eigen::ComputeThinV);
  const CVec v = svd.matrixV().col(d * d - 1);
  CMat x = Eigen::Map<const CMat>(v.data(), d, d);
  // vec() above is column-major: x(i,j) = v(i + j*d), matching X as stored.
  x /= x.norm();
  x *= std::sqrt(static_cast<double>(d));
  // phase: largest-magnitude entry real positive
  Eigen::Index bi = 0, bj = 0;
  x.cwiseAbs().maxCoeff(&bi, &bj);
  const Complex lead = x(bi, bj);
  x *= std::conj(lead) / std::abs(lead);
  double res = 0.0;
  for (Eigen::Index k = 0; k < nn; ++k)
    res = std::max(res, max_abs(CMat(x * a[k] - sign * b[k] * x)));
  return {x, res};
}

}  // namespace

CMat volume_element(const Signature& sig, const std::vector<CMat>& gammas) {
  const int n = sig.dim();
  const int m = sig.half();
  CMat prod = CMat::Identity(gammas[0].rows(), gammas[0].cols());
  for (const CMat& g : gammas) prod = prod * g;
  const int exponent = (n % 2 == 0) ? (m - sig.s) : (m - 1 + sig.s);
  return ipow(exponent) * prod;
}

GammaRep build_gamma_rep(const Signature& sig, bool negate_generators) {
  const int n = sig.dim();
  if (sig.r < 0 || sig.s < 0 || n < 1)
    throw ConfigError("build_gamma_rep: invalid signature");
  if (n > 12)
    throw NumericalError("build_gamma_rep: dimension cap n <= 12 exceeded");

  std::vector<CMat> gs = definite_generators(n);
  for (int j = sig.r; j < n; ++j) gs[j] *= kI;  // flip squares to +1

  if (n % 2 == 1) {
    // pick the representation on which the volume element acts as +I
    CMat w = volume_element(sig, gs);
    if (w(0, 0).real() < 0.0)
      for (CMat& g : gs) g = -g;
  }
  if (negate_generators)
    for (CMat& g : gs) g = -g;

  GammaRep rep;
  rep.sig = sig;
  rep.gammas = std::move(gs);
  rep.volume = volume_element(sig, rep.gammas);
  rep.form = invariant_form(sig, rep.gammas);
  if (max_abs(CMat(rep.volume * rep.volume -
                   CMat::Identity(rep.volume.rows(), rep.volume.cols()))) > 1e-12)
    throw NumericalError("build_gamma_rep: volume element does not square to I");
  if (n % 2 == 0) {
    const CMat id = CMat::Identity(rep.volume.rows(), rep.volume.cols());
    rep.chirality_projectors = {0.5 * (id + rep.volume), 0.5 * (id - rep.volume)};
  }
  return rep;
}

CMat invariant_form(const Signature& sig, const std::vector<CMat>& gammas) {
  const int n = sig.dim();
  const Eigen::Index d = gammas[0].rows();
  const double sign = (sig.s % 2 == 0) ? -1.0 : 1.0;  // (-1)^{s+1}
  const CMat id = CMat::Identity(d, d);

  auto qualifies = [&](const CMat& b) {
    if (max_abs(CMat(b - b.adjoint())) > 1e-12) return false;
    for (int j = 0; j < n; ++j)
      if (max_abs(CMat(gammas[j].adjoint() * b - sign * b * gammas[j])) > 1e-12)
        return false;
    return true;
  };

  // Subset products of generators span the algebra, so the (unique up to
  // scale) solution of the adjoint constraints is one of them up to phase.
  for (int popcount = 0; popcount <= n; ++popcount) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) != popcount) continue;
      CMat prod = id;
      for (int j = 0; j < n; ++j)
        if (mask & (1u << j)) prod = prod * gammas[j];
      for (const Complex phase : {Complex{1, 0}, Complex{0, 1}}) {
        CMat b = phase * prod;
        if (!qualifies(b)) continue;
        b /= max_abs(b);
        fix_leading_sign(b);
        return b;
      }
    }
  }
  throw NumericalError("invariant_form: no Hermitian solution in the candidate set");
}

CMat clifford_matrix(const GammaRep& rep, const RVec& v) {
  if (v.size() != rep.sig.dim())
    throw ConfigError("clifford_action: coefficient length mismatch");
  CMat m = CMat::Zero(rep.dim(), rep.dim());
  for (int j = 0; j < rep.sig.dim(); ++j) m += v(j) * rep.gammas[j];
  return m;
}

CVec clifford_action(const GammaRep& rep, const RVec& v, const CVec& sigma) {
  return clifford_matrix(rep, v) * sigma;
}

CMat two_form_matrix(const GammaRep& rep, const RMat& omega) {
  const int n = rep.sig.dim();
  if (omega.rows() != n || omega.cols() != n)
    throw ConfigError("two_form_action: shape mismatch");
  if (max_abs(RMat(omega + omega.transpose())) > 1e-12 * (1.0 + max_abs(omega)))
    throw ConfigError("two_form_action: form is not antisymmetric");
  CMat m = CMat::Zero(rep.dim(), rep.dim());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m += omega(i, j) * rep.gammas[i] * rep.gammas[j];
  return m;
}

CVec two_form_action(const GammaRep& rep, const RMat& omega, const CVec& sigma) {
  return two_form_matrix(rep, omega) * sigma;
}

AlphaEmbedding alpha_embed(const GammaRep& base, const GammaRep& ambient,
                           bool negative_chirality) {
  const int n = base.sig.dim();
  if (ambient.sig.r != base.sig.r + 1 || ambient.sig.s != base.sig.s)
    throw ConfigError("alpha_embed: ambient signature must be (r+1,s)");

  AlphaEmbedding emb;
  emb.images.reserve(n);
  for (int j = 0; j < n; ++j)
    emb.images.push_back(ambient.gammas[0] * ambient.gammas[j + 1]);

  const double mult_sign = negative_chirality ? -1.0 : 1.0;

  if (n % 2 == 0) {
    auto [s, res] = solve_intertwiner(emb.images, base.gammas, mult_sign);
    if (res > 1e-10)
      throw NumericalError("alpha_embed: no intertwiner found (convention mismatch)");
    emb.restrict_map = s;
    emb.residual = res;
    return emb;
  }

  // n odd: compress to the requested chirality block of the even ambient rep,
  // then intertwine the block with the base representation.
  if (!ambient.chirality_projectors)
    throw NumericalError("alpha_embed: ambient chirality projectors missing");
  const CMat& proj = negative_chirality ? ambient.chirality_projectors->second
                                        : ambient.chirality_projectors->first;
  Eigen::JacobiSVD<CMat> svd(proj, Eigen::ComputeThinU);
  const Eigen::Index half = proj.rows() / 2;
  CMat v(proj.rows(), half);
  Eigen::Index col = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size() && col < half; ++k) {
    if (svd.singularValues()(k) < 0.5) continue;
    CVec u = svd.matrixU().col(k);
    Eigen::Index bi = 0;
    u.cwiseAbs().maxCoeff(&bi);
    u *= std::conj(u(bi)) / std::abs(u(bi));
    v.col(col++) = u;
  }
  if (col != half)
    throw NumericalError("alpha_embed: chirality block has unexpected rank");

  std::vector<CMat> blocks;
  blocks.reserve(n);
  for (const CMat& a : emb.images) blocks.push_back(v.adjoint() * a * v);
  auto [t, res] = solve_intertwiner(blocks, base.gammas, mult_sign);
  if (res > 1e-10)
    throw NumericalError("alpha_embed: no intertwiner found (convention mismatch)");
  emb.restrict_map = t * v.adjoint();
  emb.residual = res;
  return emb;
}

}  // namespace spincal
