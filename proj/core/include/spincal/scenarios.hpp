#pragma once

#include "spincal/cylinder.hpp"
#include "spincal/hypersurface.hpp"

namespace spincal {

struct ScenarioInfo {
  std::string name;
  std::string kind;  // "chart", "cylinder", "immersion"
  int dim = 0;
  Signature sig;
  std::string backends;
  bool has_reference = false;
};

/// Simple key/value parameters (radius, flux, amplitude, ...) overriding the
/// catalog defaults.
using ScenarioParams = std::vector<std::pair<std::string, double>>;

Scenario scenario_by_name(const std::string& name, const ScenarioParams& params = {});
CylinderScenario cylinder_by_name(const std::string& name,
                                  const ScenarioParams& params = {});
Immersion immersion_by_name(const std::string& name, const ScenarioParams& params = {});

std::vector<ScenarioInfo> scenario_catalog();

bool is_cylinder_name(const std::string& name);
bool is_immersion_name(const std::string& name);

/// Killing data for charts that carry a closed-form generalized Killing
/// spinor (the round sphere): field, tensor F, and the sign convention that
/// passes. Throws ConfigError for charts without one.
struct KillingData {
  SmoothSpinorField field;
  SymmetricTensorField tensor;
  double sign = -1.0;  // grad_X phi = sign/2 X.phi
};
KillingData sphere_killing_spinor(double radius = 1.0, int which = 0);

/// Parallel spinor on the flat cone chart dw^2 + (1+w)^2 g_{S^2} expressed in
/// the chart frame trivialization (closed form via half-angle lifts).
SmoothSpinorField cone_parallel_spinor(const CVec& sigma_cartesian);

}  // namespace spincal
