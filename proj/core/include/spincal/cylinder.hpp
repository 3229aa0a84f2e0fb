#pragma once

#include "spincal/emtensor.hpp"
#include "spincal/geometry.hpp"
#include "spincal/spinor_field.hpp"

namespace spincal {

/// Generalized cylinder dt^2 + g_t over a base chart. The family is either
/// the base scenario's own t-dependence or derived from a symmetric
/// endomorphism field F via g_t(X,Y) = g((id - tF)^2 X, Y). The line-bundle
/// connection is pulled back from the base (a(dt) = 0) unless
/// `ambient_a_override` installs a deliberately non-pulled-back test form.
struct CylinderScenario {
  std::string name;
  Scenario base;  // metric(t,x) carries the family
  double t0 = -0.4;
  double t1 = 0.4;
  std::optional<SymmetricTensorField> endo_F;  // bilinear components of g0 F
  std::function<RVec(const RVec&)> ambient_a_override;  // argument (t,x)

  /// The (n+1)-dimensional chart: coordinates (t, x), block metric
  /// diag(1, g_t(x)), signature (r+1, s).
  Scenario ambient() const;

  RMat g_dot(const RVec& x, double t) const;
  RMat g_ddot(const RVec& x, double t) const;
  /// Endomorphism matrix of F (mixed indices), F-built cylinders only.
  RMat endo_matrix(const RVec& x) const;
};

struct TransportResult {
  CVec initial;
  CVec final;
  double t0 = 0.0;
  double t1 = 0.0;
  int steps = 0;
  double unitarity_defect = 0.0;
};

/// Solves the parallelism ODE along the t-line through x with a classical
/// fixed-step RK4, halving the step until two refinements agree within tol.
TransportResult parallel_transport(const CylinderScenario& cyl, const RVec& x,
                                   const CVec& sigma, double t0, double t1,
                                   double tol = 1e-9);

struct CylinderCurvatureResiduals {
  double weingarten = 0.0;  // <W(X),Y> + 1/2 gdot(X,Y)
  double gauss = 0.0;       // tangential R^Z vs R^{M_t} + 1/4 (gdot gdot - ...)
  double codazzi = 0.0;     // <R^Z(X,Y)U, nu> vs 1/2 (grad gdot antisym)
  double radial = 0.0;      // <R^Z(X,nu)nu,Y> + 1/2 (gddot + gdot(W.,.))

  double worst() const {
    return std::max(std::max(weingarten, gauss), std::max(codazzi, radial));
  }
};

/// Left sides from (n+1)-dimensional jets of dt^2 + g_t, right sides from
/// base-level family data; the two routes never share intermediates.
CylinderCurvatureResiduals cylinder_curvature_residuals(const CylinderScenario& cyl,
                                                        const RVec& x, double t);

struct BalaResiduals {
  double radial = 0.0;      // <R^Z(U,nu)nu,V>, zero for any F-built family
  double codazzi = 0.0;     // <R^Z(U,V)W,nu>, zero when F is Codazzi
};

BalaResiduals bala_residuals(const CylinderScenario& cyl, const RVec& x, double t);

struct KillingToParallelReport {
  SmoothSpinorField base_restriction;  // psi(0, .) == phi bitwise
  double killing_precheck = 0.0;
  double codazzi_precheck = 0.0;
  double max_nu_residual = 0.0;
  double max_tangent_residual = 0.0;
  int samples = 0;
};

/// psi(t,x) := tau_0^t phi(x). Evaluates the Theorem-style construction:
/// checks the generalized-Killing and Codazzi preconditions on base samples,
/// then reports covariant-derivative maxima of the transported field.
/// `eval` on the returned struct is the ambient field (t,x) -> spinor.
struct AmbientTransportedField {
  SmoothSpinorField field;  // on the ambient chart, argument (t, x...)
  KillingToParallelReport report;
};

AmbientTransportedField build_parallel_from_killing(
    const CylinderScenario& cyl, const SmoothSpinorField& phi,
    const SymmetricTensorField& killing_F, int samples, unsigned long long seed,
    double ode_tol = 1e-9);

/// Two-sided check of the leafwise-Dirac / normal-derivative commutator on a
/// field transported from base data; the outer t-derivative is a 2nd-order
/// stencil of step `h_t` so the residual scales cleanly under refinement.
CVec commutator_residual(const CylinderScenario& cyl, const SmoothSpinorField& phi0,
                         const RVec& x, double t, double h_t = 5e-3);

}  // namespace spincal
