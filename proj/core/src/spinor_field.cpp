#include "spincal/spinor_field.hpp"

#include <cmath>

#include <json.hpp>

#include "spincal/derivative.hpp"

namespace spincal {

CVec SmoothSpinorField::d(const RVec& x, int axis) const {
  if (partial) return partial(x, axis);
  return fd::partial(eval, x, axis);
}

SmoothSpinorField constant_field(const CVec& sigma) {
  SmoothSpinorField f;
  f.eval = [sigma](const RVec&) { return sigma; };
  f.partial = [n = sigma.size()](const RVec&, int) { return CVec(CVec::Zero(n)); };
  return f;
}

SmoothSpinorField plane_wave_field(const RVec& p, const CVec& sigma) {
  SmoothSpinorField f;
  f.eval = [p, sigma](const RVec& x) { return CVec(std::exp(kI * p.dot(x)) * sigma); };
  f.partial = [p, sigma](const RVec& x, int axis) {
    return CVec(kI * p(axis) * std::exp(kI * p.dot(x)) * sigma);
  };
  return f;
}

namespace {

struct Term {
  Complex coef;
  std::vector<int> pow;
  std::vector<double> freq;

  Complex value(const RVec& x) const {
    Complex v = coef;
    double phase = 0.0;
    for (int a = 0; a < x.size(); ++a) {
      for (int k = 0; k < pow[a]; ++k) v *= x(a);
      phase += freq[a] * x(a);
    }
    return v * std::exp(kI * phase);
  }

  Complex derivative(const RVec& x, int axis) const {
    // product rule: (monomial)' * exp + monomial * (i freq) * exp
    Complex mono = coef;
    double phase = 0.0;
    Complex dmono = 0.0;
    for (int a = 0; a < x.size(); ++a) phase += freq[a] * x(a);
    Complex rest = coef;
    for (int a = 0; a < x.size(); ++a)
      for (int k = 0; k < pow[a]; ++k) rest *= x(a);
    mono = rest;
    if (pow[axis] > 0) {
      Complex lowered = coef * static_cast<double>(pow[axis]);
      for (int a = 0; a < x.size(); ++a) {
        const int p = (a == axis) ? pow[a] - 1 : pow[a];
        for (int k = 0; k < p; ++k) lowered *= x(a);
      }
      dmono = lowered;
    }
    return (dmono + mono * kI * freq[axis]) * std::exp(kI * phase);
  }
};

}  // namespace

SmoothSpinorField parse_field_literal(const std::string& json_text, int dim,
                                      int spinor_dim) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("field literal: bad JSON: ") + e.what());
  }
  if (!j.is_array() || static_cast<int>(j.size()) != spinor_dim)
    throw ConfigError("field literal: expected one term list per spinor component");

  std::vector<std::vector<Term>> comps(spinor_dim);
  for (int c = 0; c < spinor_dim; ++c) {
    for (const auto& tj : j[c]) {
      Term t;
      t.coef = Complex(tj.value("re", 0.0), tj.value("im", 0.0));
      t.pow.assign(dim, 0);
      t.freq.assign(dim, 0.0);
      if (tj.contains("pow"))
        for (int a = 0; a < dim && a < static_cast<int>(tj["pow"].size()); ++a)
          t.pow[a] = tj["pow"][a].get<int>();
      if (tj.contains("freq"))
        for (int a = 0; a < dim && a < static_cast<int>(tj["freq"].size()); ++a)
          t.freq[a] = tj["freq"][a].get<double>();
      for (const auto& [key, _] : tj.items())
        if (key != "re" && key != "im" && key != "pow" && key != "freq")
          throw ConfigError("field literal: unknown key '" + key + "'");
      comps[c].push_back(std::move(t));
    }
  }

  SmoothSpinorField f;
  f.eval = [comps, spinor_dim](const RVec& x) {
    CVec v(spinor_dim);
    for (int c = 0; c < spinor_dim; ++c) {
      Complex sum = 0.0;
      for (const Term& t : comps[c]) sum += t.value(x);
      v(c) = sum;
    }
    return v;
  };
  f.partial = [comps, spinor_dim](const RVec& x, int axis) {
    CVec v(spinor_dim);
    for (int c = 0; c < spinor_dim; ++c) {
      Complex sum = 0.0;
      for (const Term& t : comps[c]) sum += t.derivative(x, axis);
      v(c) = sum;
    }
    return v;
  };
  return f;
}

}  // namespace spincal
