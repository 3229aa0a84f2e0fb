#pragma once

#include "spincal/types.hpp"

namespace spincal {

/// x -> complex 2^m vector in the frame-associated trivialization of the
/// chart. When a closed-form partial-derivative evaluator is absent the
/// derivative engine falls back to central differences.
struct SmoothSpinorField {
  std::function<CVec(const RVec&)> eval;
  std::function<CVec(const RVec&, int)> partial;  // optional

  CVec at(const RVec& x) const { return eval(x); }
  CVec d(const RVec& x, int axis) const;
};

SmoothSpinorField constant_field(const CVec& sigma);

/// e^{i p.x} sigma with closed-form derivatives.
SmoothSpinorField plane_wave_field(const RVec& p, const CVec& sigma);

/// Field literal grammar: component c is a sum of terms
///   coef * prod_a x_a^{pow_a} * exp(i sum_a freq_a x_a),
/// given as JSON [[{"re":..,"im":..,"pow":[..],"freq":[..]}, ...], ...]
/// (outer list over components). Closed-form derivatives included.
SmoothSpinorField parse_field_literal(const std::string& json_text, int dim,
                                      int spinor_dim);

}  // namespace spincal
