#pragma once

#include "spincal/geometry.hpp"
#include "spincal/spinor_field.hpp"

namespace spincal {

/// Shared, lazily-built representation for a signature (construction is
/// deterministic, results immutable).
const GammaRep& rep_for(const Signature& sig);

/// Pointwise data of the lifted connection: local connection matrices
/// S_k = 1/4 sum_j eps_j g(e_j) g(grad_{e_k} e_j) + i/2 a(e_k), the bundle
/// curvature in frame components and its norm |Omega|^2 = sum_{i<j} Omega_ij^2.
struct SpincConnectionJet {
  GeometryJet jet;
  RVec a_frame;
  std::vector<CMat> s_mats;
  RMat omega_frame;
  double omega_norm = 0.0;
};

SpincConnectionJet spinc_connection_jet(const Scenario& sc, const RVec& x,
                                        double t = 0.0);

/// grad^{Sigma}_{e_k} phi = e_k(phi) + S_k phi.
CVec covariant_derivative(const SmoothSpinorField& field, const Scenario& sc,
                          const RVec& x, int k, double t = 0.0);

/// D = i^s sum_j eps_j g(e_j) grad_{e_j}.
CVec dirac_pointwise(const SmoothSpinorField& field, const Scenario& sc,
                     const RVec& x, double t = 0.0);

/// Curvature by the curvature formula (jets and the bundle 2-form).
CVec spinor_curvature(const SmoothSpinorField& field, const Scenario& sc,
                      const RVec& x, int X, int Y, double t = 0.0);

/// Independent route: nested covariant derivatives minus the bracket term.
CVec spinor_curvature_commutator(const SmoothSpinorField& field, const Scenario& sc,
                                 const RVec& x, int X, int Y, double t = 0.0);

/// sum_k eps_k e_k . R(e_k, X) phi - 1/2 Ric(X).phi + i/2 (X -| Omega).phi.
CVec ricci_identity_residual(const SmoothSpinorField& field, const Scenario& sc,
                             const RVec& x, int X, double t = 0.0);

}  // namespace spincal
