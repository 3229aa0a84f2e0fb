#include "spincal/derivative.hpp"

#include <cmath>
#include <limits>

namespace spincal::fd {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kH1 = std::pow(kEps, 0.2);        // ~ 7.4e-4
const double kH2 = std::pow(kEps, 1.0 / 6.0);  // ~ 2.4e-3

template <typename F, typename V>
V central4(const F& f, double x, double h) {
  const V fp1 = f(x + h), fm1 = f(x - h);
  const V fp2 = f(x + 2 * h), fm2 = f(x - 2 * h);
  return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
}

template <typename F, typename V>
V second4(const F& f, double x, double h) {
  const V f0 = f(x);
  const V fp1 = f(x + h), fm1 = f(x - h);
  const V fp2 = f(x + 2 * h), fm2 = f(x - 2 * h);
  return (-(fp2 + fm2) + 16.0 * (fp1 + fm1) - 30.0 * f0) / (12.0 * h * h);
}
}  // namespace

double step1(double x) { return kH1 * (1.0 + std::abs(x)); }
double step2(double x) { return kH2 * (1.0 + std::abs(x)); }

double partial(const std::function<double(double)>& f, double x, bool richardson) {
  const double h = step1(x);
  const double d = central4<decltype(f), double>(f, x, h);
  if (!richardson) return d;
  const double d2 = central4<decltype(f), double>(f, x, h / 2.0);
  return (16.0 * d2 - d) / 15.0;
}

double second(const std::function<double(double)>& f, double x) {
  return second4<decltype(f), double>(f, x, step2(x));
}

double partial(const std::function<double(const RVec&)>& f, const RVec& x,
               int axis, bool richardson) {
  auto slice = [&](double t) {
    RVec y = x;
    y(axis) = t;
    return f(y);
  };
  return partial(std::function<double(double)>(slice), x(axis), richardson);
}

double second(const std::function<double(const RVec&)>& f, const RVec& x, int axis) {
  auto slice = [&](double t) {
    RVec y = x;
    y(axis) = t;
    return f(y);
  };
  return second(std::function<double(double)>(slice), x(axis));
}

double mixed(const std::function<double(const RVec&)>& f, const RVec& x,
             int axis_a, int axis_b) {
  if (axis_a == axis_b) return second(f, x, axis_a);
  auto inner = [&](double ta) {
    RVec ya = x;
    ya(axis_a) = ta;
    auto slice = [&](double tb) {
      RVec y = ya;
      y(axis_b) = tb;
      return f(y);
    };
    return central4<decltype(slice), double>(slice, x(axis_b), step2(x(axis_b)));
  };
  return central4<decltype(inner), double>(inner, x(axis_a), step2(x(axis_a)));
}

RMat partial(const std::function<RMat(const RVec&)>& f, const RVec& x, int axis) {
  auto slice = [&](double t) {
    RVec y = x;
    y(axis) = t;
    return f(y);
  };
  return central4<decltype(slice), RMat>(slice, x(axis), step1(x(axis)));
}

RMat second(const std::function<RMat(const RVec&)>& f, const RVec& x, int axis) {
  auto slice = [&](double t) {
    RVec y = x;
    y(axis) = t;
    return f(y);
  };
  return second4<decltype(slice), RMat>(slice, x(axis), step2(x(axis)));
}

RMat mixed(const std::function<RMat(const RVec&)>& f, const RVec& x,
           int axis_a, int axis_b) {
  if (axis_a == axis_b) return second(f, x, axis_a);
  auto inner = [&](double ta) {
    RVec ya = x;
    ya(axis_a) = ta;
    auto slice = [&](double tb) {
      RVec y = ya;
      y(axis_b) = tb;
      return f(y);
    };
    return central4<decltype(slice), RMat>(slice, x(axis_b), step2(x(axis_b)));
  };
  return central4<decltype(inner), RMat>(inner, x(axis_a), step2(x(axis_a)));
}

CVec partial(const std::function<CVec(const RVec&)>& f, const RVec& x, int axis) {
  auto slice = [&](double t) {
    RVec y = x;
    y(axis) = t;
    return f(y);
  };
  return central4<decltype(slice), CVec>(slice, x(axis), step1(x(axis)));
}

CVec partial(const std::function<CVec(double)>& f, double t, double step_scale) {
  return central4<decltype(f), CVec>(f, t, step1(t) * step_scale);
}

CVec directional(const std::function<CVec(const RVec&)>& f, const RVec& x,
                 const RVec& v) {
  CVec out;
  for (int a = 0; a < x.size(); ++a) {
    if (v(a) == 0.0) continue;
    CVec d = v(a) * partial(f, x, a);
    out = (out.size() == 0) ? d : CVec(out + d);
  }
  if (out.size() == 0) out = CVec::Zero(f(x).size());
  return out;
}

}  // namespace spincal::fd
