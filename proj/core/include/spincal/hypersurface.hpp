#pragma once

#include "spincal/cylinder.hpp"
#include "spincal/emtensor.hpp"

namespace spincal {

/// An oriented hypersurface with unit spacelike normal inside an ambient
/// chart whose deterministic frame is adapted along the surface (normal
/// first, pushed-forward base frame after). Catalog immersions are
/// coordinate slices of cylinder-type charts, which satisfy this exactly.
struct Immersion {
  std::string name;
  Scenario ambient;  // signature (r+1, s)
  Scenario base;     // (r, s); metric equals the induced metric
  std::function<RVec(const RVec&)> embedding;
  std::function<RVec(const RVec&)> normal;  // ambient coordinate components

  const GammaRep& ambient_rep() const;
  const GammaRep& base_rep() const;
  /// restrict_map of the dimension-raising identification; `negative` selects
  /// the odd-n negative-chirality variant with sign-flipped multiplication.
  const AlphaEmbedding& alpha(bool negative = false) const;

  /// Base components of the restricted spinor, phi(u) = R psi(emb(u)).
  SmoothSpinorField restrict_field(const SmoothSpinorField& ambient_field,
                                   bool negative = false) const;
  RVec jacobian_col(const RVec& u, int j) const;  // d(embedding)/du_j
};

/// Shape operator in base frame components, <W(e_i), e_j> = <grad_{e_i} Y,
/// nu> computed through ambient jets; symmetric within discretization error.
RMat weingarten(const Immersion& imm, const RVec& u);

/// (grad^{Sigma Z}_X psi)|_M - grad^{Sigma M}_X phi + 1/2 W(X).phi, the two
/// covariant derivatives computed from independent ambient/base jets. For odd
/// base dimension `negative` runs the negative-chirality identification.
CVec gauss_formula_residual(const Immersion& imm, const SmoothSpinorField& psi,
                            const RVec& u, int X, bool negative = false);

/// nu . D^Z psi - (D~ phi + i^s (n/2) H phi - i^s grad^{Sigma Z}_nu psi),
/// every term evaluated on the base side through the identification.
CVec dirac_gauss_residual(const Immersion& imm, const SmoothSpinorField& psi,
                          const RVec& u, bool negative = false);

struct OmegaSplitResiduals {
  double scalar = 0.0;  // | |Omega^Z|^2 - |Omega^M|^2 - |nu -| Omega^Z|^2 |
  double spinor = 0.0;  // | (Omega^Z.psi)|_M - Omega^M.phi - (nu -| Omega^Z).phi |
};

OmegaSplitResiduals omega_split_residuals(const Immersion& imm,
                                          const SmoothSpinorField& psi,
                                          const RVec& u);

struct MorelReport {
  double parallelism_precheck = 0.0;  // max |grad^{Sigma Z} psi| over directions
  double ell_plus_half_w = 0.0;       // ||2 ell^phi + W||
  double equality_quantity = 0.0;     // Scal^Z - 2 ric^Z(nu,nu) - c_n |Omega^M|
  double mean_curvature = 0.0;
  double dirac_eigen_residual = 0.0;  // |D~ phi + (n/2) H phi|
};

/// Requires an ambient field that passes the parallelism pre-check
/// (throws NumericalError otherwise).
MorelReport morel_check(const Immersion& imm, const SmoothSpinorField& psi,
                        const RVec& u, double precheck_tol = 1e-8);

}  // namespace spincal
