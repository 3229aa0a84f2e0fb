#pragma once

#include <optional>
#include <utility>

#include "spincal/types.hpp"

namespace spincal {

/// Signature (r,s) of a nondegenerate symmetric bilinear form: the first r
/// basis vectors square to +1 under the form, the last s to -1. Generators
/// of the Clifford algebra then obey e_j^2 = -1 for j < r and +1 otherwise.
struct Signature {
  int r = 0;
  int s = 0;

  int dim() const { return r + s; }
  int half() const { return dim() / 2; }          // m = floor(n/2)
  int spinor_dim() const { return 1 << half(); }  // 2^m
  /// +1 for the first r directions, -1 for the rest (0-based index).
  double eps(int j) const { return j < r ? 1.0 : -1.0; }
  bool riemannian() const { return s == 0; }

  bool operator==(const Signature&) const = default;
};

/// Concrete matrix representation of the complex Clifford algebra Cl(r,s):
/// n generators of size 2^m x 2^m, the complex volume element, the invariant
/// Hermitian form B with <sigma,tau> = sigma^* B tau, and (n even) the
/// chirality projectors (I +- omega)/2.
struct GammaRep {
  Signature sig;
  std::vector<CMat> gammas;
  CMat volume;
  CMat form;  // B
  std::optional<std::pair<CMat, CMat>> chirality_projectors;

  int dim() const { return static_cast<int>(gammas.empty() ? 0 : gammas[0].rows()); }

  /// <sigma,tau> = sigma^* B tau.
  Complex inner(const CVec& a, const CVec& b) const { return a.dot(form * b); }
  double norm_sq(const CVec& a) const { return inner(a, a).real(); }
};

/// Deterministic construction; throws NumericalError above the practical
/// cap n = 12. For n odd the representation is the one on which the volume
/// element acts as +I; `negate_generators` selects the inequivalent twin.
GammaRep build_gamma_rep(const Signature& sig, bool negate_generators = false);

/// omega_{r,s}: i^{m-s} g_1...g_n (n = 2m) or i^{m-1+s} g_1...g_n (n = 2m+1).
CMat volume_element(const Signature& sig, const std::vector<CMat>& gammas);

/// Hermitian invertible B with gamma_j^* B = (-1)^{s+1} B gamma_j for all j,
/// normalized so the first row-major entry above 1e-9 in magnitude has
/// positive real (or, failing that, positive imaginary) part and unit
/// largest-entry magnitude. Searched over products of generators, which span
/// the candidate solutions; throws NumericalError when none qualifies.
CMat invariant_form(const Signature& sig, const std::vector<CMat>& gammas);

/// (sum_j v_j gamma_j) sigma.
CVec clifford_action(const GammaRep& rep, const RVec& v, const CVec& sigma);

/// Matrix of sum_j v_j gamma_j.
CMat clifford_matrix(const GammaRep& rep, const RVec& v);

/// sum_{i<j} Omega_ij gamma_i gamma_j sigma; Omega must be antisymmetric.
CVec two_form_action(const GammaRep& rep, const RMat& omega, const CVec& sigma);
CMat two_form_matrix(const GammaRep& rep, const RMat& omega);

/// The dimension-raising identification Cl(r,s) -> Cl^0(r+1,s), e_j -> nu.e_j
/// with nu the first generator of the ambient representation. `images` holds
/// A_j = G_nu G_j; `restrict` maps ambient spinor components to base spinor
/// components such that restrict * A_j = gamma_j * restrict (for n odd the
/// map factors through the positive-chirality block of the ambient rep, or
/// the negative one when `negative_chirality` is set, where the intertwined
/// multiplication picks up a sign).
struct AlphaEmbedding {
  std::vector<CMat> images;  // n matrices of ambient spinor dimension
  CMat restrict_map;         // base_dim x ambient_dim
  double residual = 0.0;     // worst |restrict*A_j - gamma_j*restrict|
};

AlphaEmbedding alpha_embed(const GammaRep& base, const GammaRep& ambient,
                           bool negative_chirality = false);

}  // namespace spincal
