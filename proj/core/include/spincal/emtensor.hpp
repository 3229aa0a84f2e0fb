#pragma once

#include "spincal/spinc.hpp"

namespace spincal {

/// Energy-momentum data of a spinor field at a point, in frame components:
/// T(X,Y) = 1/2 Re <X.grad_Y psi + Y.grad_X psi, psi> (the unnormalized
/// tensor, defined everywhere); ell = T/|psi|^2 is present only above the
/// relative norm floor.
struct EMTensorValue {
  RVec x;
  RMat tensor;  // T_psi
  double norm_sq = 0.0;
  std::optional<RMat> ell;

  double ell_norm_sq() const {
    if (!ell) return 0.0;
    return ell->squaredNorm();
  }
};

EMTensorValue em_tensor(const SmoothSpinorField& field, const Scenario& sc,
                        const RVec& x, double t = 0.0,
                        double field_max_norm_sq = 1.0);

/// grad_X psi - 1/2 g(F(X)) psi for frame direction X; F given by bilinear
/// components, converted to an endomorphism through the metric.
CVec killing_residual(const SmoothSpinorField& field, const SymmetricTensorField& F,
                      const Scenario& sc, const RVec& x, int X, double t = 0.0);

/// (grad_X F)(Y) - (grad_Y F)(X) as a coordinate vector.
RVec codazzi_residual(const SymmetricTensorField& F, const Scenario& sc,
                      const RVec& x, int X, int Y, double t = 0.0);

}  // namespace spincal
