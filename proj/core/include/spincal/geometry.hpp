#pragma once

#include <optional>
#include <random>

#include "spincal/clifford.hpp"
#include "spincal/types.hpp"

namespace spincal {

struct Domain {
  RVec lo;
  RVec hi;
  std::vector<bool> periodic;

  int dim() const { return static_cast<int>(lo.size()); }
  double width(int a) const { return hi(a) - lo(a); }
};

struct ReferenceData {
  std::optional<double> scalar_curvature;
  std::optional<double> first_dirac_eigenvalue_magnitude;
};

/// A model chart: metric (possibly a t-family), domain box with periodicity
/// flags, and the line-bundle connection data. Pointwise backends use the
/// smooth covector a (the connection form is i*a); lattice backends use the
/// integer flux via link phases.
struct Scenario {
  std::string name;
  Signature sig;
  std::function<RMat(double, const RVec&)> metric;  // (t, x) -> symmetric n x n
  bool time_dependent = false;
  Domain domain;
  std::function<RVec(const RVec&)> spinc_a;  // nullable: a == 0
  std::optional<int> flux;                   // lattice-only scenarios
  ReferenceData reference;
  bool lattice_backend = false;
  bool pointwise_backend = true;

  RMat metric_at(const RVec& x, double t = 0.0) const { return metric(t, x); }
  RVec a_at(const RVec& x) const {
    return spinc_a ? spinc_a(x) : RVec(RVec::Zero(sig.dim()));
  }
  /// Curvature of the smooth connection: Omega_ab = d_a a_b - d_b a_a.
  RMat omega_at(const RVec& x) const;
};

/// Evaluator x -> symmetric n x n matrix in coordinate components.
struct SymmetricTensorField {
  std::function<RMat(const RVec&)> eval;
  RMat at(const RVec& x) const { return eval(x); }
};

/// All pointwise geometric data at a sample point. Frame columns are the
/// coordinate components of e_j with <e_j,e_k> = eps_j delta_jk; curvature
/// convention R(X,Y)Z = [grad_X,grad_Y]Z - grad_[X,Y] Z, calibrated so the
/// unit round 2-sphere has scalar curvature +2.
struct GeometryJet {
  RVec x;
  double t = 0.0;
  Signature sig;
  RMat g;
  RMat g_inv;
  RMat frame;                        // E, columns = frame vectors
  std::vector<RMat> dframe;          // d_a E
  std::vector<RMat> christoffel;     // christoffel[i](j,k) = Gamma^i_{jk}
  std::vector<RMat> frame_connection;  // [i](j,k) = <grad_{e_i} e_j, e_k>
  std::vector<double> riemann_frame;   // <R(e_i,e_j)e_k, e_l>, flat index
  RMat ricci_frame;                    // ric(e_i,e_j)
  double scalar = 0.0;

  double riemann(int i, int j, int k, int l) const {
    const int n = sig.dim();
    return riemann_frame[((i * n + j) * n + k) * n + l];
  }
  /// Coordinate components of [e_i, e_j] via the torsion-free connection.
  RVec frame_bracket(int i, int j) const;
  /// Frame components of a coordinate vector: v = sum_j c_j e_j.
  RVec to_frame(const RVec& v_coord) const;
};

/// Deterministic signature-ordered Gram-Schmidt of the coordinate basis:
/// the first r frame vectors have norm +1, the last s have -1. Throws
/// NumericalError when the metric is degenerate or has the wrong signature.
RMat orthonormal_frame(const RMat& g, const Signature& sig);

GeometryJet geometry_jet(const Scenario& sc, const RVec& x, double t = 0.0);

/// Uniform sample in the domain interior (margin away from non-periodic
/// boundaries so nested stencils stay inside the chart).
RVec sample_point(const Scenario& sc, std::mt19937_64& rng);

}  // namespace spincal
