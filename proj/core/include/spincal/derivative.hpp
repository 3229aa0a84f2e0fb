#pragma once

#include "spincal/types.hpp"

namespace spincal {

/// Central-difference engine, order 4, with per-axis step scaling and
/// optional Richardson extrapolation. Meets a 1e-8 relative-error contract
/// on analytic integrands; second derivatives land around 1e-10 absolute.
namespace fd {

/// Step for first derivatives: eps^(1/5) scaled by the coordinate magnitude.
double step1(double x);
/// Step for second derivatives: eps^(1/6) scaled.
double step2(double x);

/// d/dx of a scalar callable, 5-point central stencil.
double partial(const std::function<double(double)>& f, double x,
               bool richardson = false);

/// d^2/dx^2, 5-point central stencil.
double second(const std::function<double(double)>& f, double x);

/// Gradient/derivative helpers for vector-argument callables. `axis` selects
/// the coordinate that is varied.
double partial(const std::function<double(const RVec&)>& f, const RVec& x,
               int axis, bool richardson = false);
double second(const std::function<double(const RVec&)>& f, const RVec& x,
              int axis);
double mixed(const std::function<double(const RVec&)>& f, const RVec& x,
             int axis_a, int axis_b);

/// Same stencils applied entrywise to matrix/vector-valued callables.
RMat partial(const std::function<RMat(const RVec&)>& f, const RVec& x, int axis);
RMat second(const std::function<RMat(const RVec&)>& f, const RVec& x, int axis);
RMat mixed(const std::function<RMat(const RVec&)>& f, const RVec& x,
           int axis_a, int axis_b);
CVec partial(const std::function<CVec(const RVec&)>& f, const RVec& x, int axis);
CVec partial(const std::function<CVec(double)>& f, double t, double step_scale = 1.0);

/// Directional derivative along a coordinate-frame vector: sum_a v_a d_a f.
CVec directional(const std::function<CVec(const RVec&)>& f, const RVec& x,
                 const RVec& v);

}  // namespace fd

}  // namespace spincal
