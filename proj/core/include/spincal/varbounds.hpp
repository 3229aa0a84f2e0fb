#pragma once

#include "spincal/cylinder.hpp"
#include "spincal/lattice.hpp"

namespace spincal {

/// <k,T> pairing: plain orthonormal-frame contraction sum_ij k(e_i,e_j)
/// T(e_i,e_j), scaled by the one-time calibration constant below.
struct PairingCalibration {
  double constant = 1.0;  // snapped to {+-1/2, +-1, +-2}
  double raw_ratio = 1.0;
  std::string scenario;
};

/// Conformal-family brute-force run pinning the pairing constant; the same
/// constant must make every variation experiment close.
PairingCalibration calibrate_pairing(int grid_n = 16, double h = 1e-3);

struct VariationReport {
  std::string scenario;
  std::string k_description;
  std::string psi_description;
  double lhs = 0.0;  // 5-point d/dt of (D_t tau psi, tau psi)_{g_t}
  double rhs = 0.0;  // -1/2 integral <k, T_psi>
  double fd_step = 0.0;
  int grid_n = 0;
  double agreement = 0.0;          // |lhs - rhs|
  double model_error_bound = 0.0;  // C (h^2 + a^2)
  double pairing_constant = 1.0;
};

/// psi is a lattice spinor on (M,g); tau transports it per site through the
/// generalized cylinder of g_t = g + t k.
VariationReport variation_check(const Scenario& sc, const SymmetricTensorField& k,
                                const LatticeGrid& grid, const CVec& psi, double h,
                                const PairingCalibration& cal);

/// Field residual of the operator-level variation formula
///   d/dt tau_t^0 D_t tau_0^t psi = -1/2 Dk psi + 1/4 grad(tr k).psi
///                                  - 1/4 div(k).psi.
struct OperatorVariationReport {
  double rms_residual = 0.0;
  double max_residual = 0.0;
  double lhs_scale = 0.0;
};

OperatorVariationReport dirac_variation_operator_check(const Scenario& sc,
                                                       const SymmetricTensorField& k,
                                                       const LatticeGrid& grid,
                                                       const CVec& psi, double h);

/// W(g, psi) = integral (Scal_g + eps (lambda <psi,psi> - <D psi,psi>)) dv.
double lagrange_functional(const LatticeGrid& grid, const DiracMatrix& d,
                           const CVec& psi, double lambda, double eps_coupling);

struct FrkimReport {
  std::vector<double> dW_dt;          // per tested k-mode
  std::vector<double> pairing;        // integral <E, k> per mode
  double eigen_residual = 0.0;        // |D psi - lambda psi|_w
  double scale = 0.0;                 // reference magnitude for thresholds
  double gravitational_constant = 1.0;
};

/// First variation of the Lagrange functional along g + t k for a basis of
/// Fourier modes, against the pairing with E = -(ric - Scal/2 g) + eps/4 T.
FrkimReport frkim_first_variation(const Scenario& sc, const LatticeGrid& grid,
                                  const DiracMatrix& d, const CVec& psi,
                                  double lambda, double eps_coupling,
                                  const std::vector<SymmetricTensorField>& k_modes,
                                  double h);

struct BoundReport {
  int eigen_index = 0;
  double lambda = 0.0;
  double lambda_sq = 0.0;
  double rhs_inf = 0.0;  // inf over sites of Scal/4 - c_n/4 |Omega| + |ell|^2
  double margin = 0.0;
  double tol_disc = 0.0;
  bool pass = false;
  double limit_residual_nabla = 0.0;  // max |grad psi + ell(.)  . psi|
  double limit_residual_omega = 0.0;  // max |Omega.psi - i c_n/2 |Omega| psi|
};

std::vector<BoundReport> bound_check(const Scenario& sc, const std::vector<int>& dims,
                                     int eigenpairs);

}  // namespace spincal
