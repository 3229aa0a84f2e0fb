#pragma once

#include <Eigen/SparseCore>

#include "spincal/spinc.hpp"

namespace spincal {

using SpMat = Eigen::SparseMatrix<Complex>;

/// Periodic grid over a flat-torus scenario. Sites are raster ordered (last
/// axis fastest), spinor components innermost. Links U_mu(x) on directed
/// edges carry the U(1) part of the connection; for flux scenarios the
/// plaquette phases are uniform with total 2 pi q.
struct LatticeGrid {
  Scenario scenario;
  std::vector<int> dims;
  std::vector<double> periods;
  std::vector<double> spacing;
  double t = 0.0;  // family parameter the metric was sampled at

  std::vector<RMat> metric_samples;    // g(x) per site
  std::vector<RMat> frame_samples;     // E(x) per site
  std::vector<double> weights;         // sqrt(det g) * cell volume
  std::vector<std::vector<Complex>> links;  // [axis][site]

  int sites() const;
  int spinor_dim() const;
  int total_dim() const { return sites() * spinor_dim(); }
  int site_index(const std::vector<int>& coords) const;
  std::vector<int> site_coords(int index) const;
  RVec site_position(int index) const;
  int neighbor(int index, int axis, int step) const;  // step in {+1,-1}
};

LatticeGrid make_grid(const Scenario& sc, const std::vector<int>& dims,
                      double t = 0.0);

/// Replaces links by the gauge transform U_mu(x) -> e^{i th(x)} U_mu(x)
/// e^{-i th(x+mu)}; the spectrum is invariant.
void apply_gauge(LatticeGrid& grid, const std::vector<double>& theta);

/// Assembled operator, Hermitian for the weight-carried inner product
/// <psi,phi>_w = sum_x w(x) <psi(x), phi(x)>. `direction_parts[j]` splits the
/// operator along frame directions so the discrete energy-momentum trace
/// reproduces Re<D psi, psi>_w exactly.
struct DiracMatrix {
  SpMat op;
  std::vector<SpMat> direction_parts;
  std::vector<double> weights;
  int spinor_dim = 0;
  double hermiticity_defect = 0.0;
};

/// Central covariant differences with link phases and site spin-connection
/// matrices, a chirality-weighted second-difference term lifting the doubler
/// branch (even dimension only), then weight-adjoint symmetrization.
DiracMatrix assemble_dirac(const LatticeGrid& grid, double wilson_rho = 0.6);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<CVec> eigenvectors;   // w-normalized, deterministic phase
  std::vector<double> convergence_estimate;  // per eigenvalue, |lambda| matched
  double max_convergence_estimate = 0.0;
};

/// Dense Hermitian solve up to dimension 4096, Lanczos on the squared
/// operator above (extremal low-|lambda| pairs, signed by projecting the
/// operator into converged clusters). `count` trims to the lowest-|lambda|
/// 2*count+... entries for the iterative path; 0 keeps everything (dense).
SpectrumResult spectrum(const DiracMatrix& d, int count = 0,
                        bool with_vectors = true);

/// Same, plus a half-resolution companion run to fill convergence_estimate.
SpectrumResult spectrum_with_estimate(const Scenario& sc, const std::vector<int>& dims,
                                      int count, double t = 0.0,
                                      double wilson_rho = 0.6);

double integrate(const LatticeGrid& grid, const std::vector<double>& values);
double inner_product(const LatticeGrid& grid, const CVec& a, const CVec& b);

/// Per-site symmetric matrices in frame components, built from the same
/// direction split as the assembled operator.
std::vector<RMat> lattice_em_tensor(const LatticeGrid& grid, const DiracMatrix& d,
                                    const CVec& psi);

/// |Omega| per site: the flux field strength for flux scenarios, else the
/// smooth curvature in frame components.
std::vector<double> omega_norm_per_site(const LatticeGrid& grid);

}  // namespace spincal
