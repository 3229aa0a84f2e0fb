#include "spincal/geometry.hpp"

#include <cmath>

#include "spincal/derivative.hpp"

namespace spincal {

RMat Scenario::omega_at(const RVec& x) const {
  const int n = sig.dim();
  if (!spinc_a) return RMat::Zero(n, n);
  auto afun = [this](const RVec& y) { return RMat(spinc_a(y)); };  // n x 1
  RMat da(n, n);  // da(a,b) = d_a a_b
  for (int a = 0; a < n; ++a)
    da.row(a) = fd::partial(std::function<RMat(const RVec&)>(afun), x, a).transpose();
  return da - da.transpose();
}

RVec GeometryJet::frame_bracket(int i, int j) const {
  // [e_i,e_j] = grad_{e_i} e_j - grad_{e_j} e_i, expanded in coordinates
  const int n = sig.dim();
  RVec out = RVec::Zero(n);
  for (int a = 0; a < n; ++a) {
    RVec term = frame(a, i) * dframe[a].col(j) - frame(a, j) * dframe[a].col(i);
    out += term;
  }
  // Christoffel parts cancel by symmetry, so the bracket is the dE part only.
  return out;
}

RVec GeometryJet::to_frame(const RVec& v_coord) const {
  const int n = sig.dim();
  RVec c(n);
  for (int j = 0; j < n; ++j)
    c(j) = sig.eps(j) * (frame.col(j).transpose() * g * v_coord)(0);
  return c;
}

RMat orthonormal_frame(const RMat& g, const Signature& sig) {
  const int n = sig.dim();
  RMat frame = RMat::Zero(n, n);
  std::vector<bool> used(n, false);
  auto pair = [&](const RVec& a, const RVec& b) { return double(a.transpose() * g * b); };
  for (int slot = 0; slot < n; ++slot) {
    const double want = sig.eps(slot);
    bool found = false;
    for (int c = 0; c < n && !found; ++c) {
      if (used[c]) continue;
      RVec u = RVec::Unit(n, c);
      for (int j = 0; j < slot; ++j)
        u -= sig.eps(j) * pair(u, frame.col(j)) * frame.col(j);
      const double q = pair(u, u);
      if (want * q > 1e-12) {
        frame.col(slot) = u / std::sqrt(std::abs(q));
        used[c] = true;
        found = true;
      }
    }
    if (!found)
      throw NumericalError("orthonormal_frame: degenerate metric or wrong signature");
  }
  return frame;
}

GeometryJet geometry_jet(const Scenario& sc, const RVec& x, double t) {
  const int n = sc.sig.dim();
  GeometryJet jet;
  jet.x = x;
  jet.t = t;
  jet.sig = sc.sig;

  auto gfun = [&](const RVec& y) { return sc.metric(t, y); };
  jet.g = gfun(x);
  jet.g_inv = jet.g.inverse();

  std::vector<RMat> dg(n), d2g(n * n);
  for (int a = 0; a < n; ++a)
    dg[a] = fd::partial(std::function<RMat(const RVec&)>(gfun), x, a);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      RMat m = fd::mixed(std::function<RMat(const RVec&)>(gfun), x, a, b);
      d2g[a * n + b] = m;
      d2g[b * n + a] = m;
    }

  jet.christoffel.assign(n, RMat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += jet.g_inv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
        jet.christoffel[i](j, k) = 0.5 * sum;
      }

  // dGamma[a][i](j,k) = d_a Gamma^i_{jk}, assembled from dg and d2g
  std::vector<std::vector<RMat>> dgamma(n, std::vector<RMat>(n, RMat::Zero(n, n)));
  for (int a = 0; a < n; ++a) {
    RMat dginv = -jet.g_inv * dg[a] * jet.g_inv;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double sum = 0.0;
          for (int l = 0; l < n; ++l) {
            sum += dginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
            sum += jet.g_inv(i, l) * (d2g[a * n + j](l, k) + d2g[a * n + k](l, j) -
                                      d2g[a * n + l](j, k));
          }
          dgamma[a][i](j, k) = 0.5 * sum;
        }
  }

  // R(d_a, d_b) d_c = Rcoord^d_{c a b} d_d
  auto rcoord = [&](int d, int c, int a, int b) {
    double v = dgamma[a][d](b, c) - dgamma[b][d](a, c);
    for (int m = 0; m < n; ++m)
      v += jet.christoffel[d](a, m) * jet.christoffel[m](b, c) -
           jet.christoffel[d](b, m) * jet.christoffel[m](a, c);
    return v;
  };

  jet.frame = orthonormal_frame(jet.g, sc.sig);
  auto framefun = [&](const RVec& y) { return orthonormal_frame(gfun(y), sc.sig); };
  jet.dframe.resize(n);
  for (int a = 0; a < n; ++a)
    jet.dframe[a] = fd::partial(std::function<RMat(const RVec&)>(framefun), x, a);

  // grad_{e_i} e_j in coordinates, then frame connection coefficients
  jet.frame_connection.assign(n, RMat::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      RVec cov = RVec::Zero(n);
      for (int a = 0; a < n; ++a) {
        if (jet.frame(a, i) == 0.0) continue;
        cov += jet.frame(a, i) * jet.dframe[a].col(j);
        for (int c = 0; c < n; ++c)
          for (int b = 0; b < n; ++b)
            cov(c) += jet.frame(a, i) * jet.christoffel[c](a, b) * jet.frame(b, j);
      }
      for (int k = 0; k < n; ++k)
        jet.frame_connection[i](j, k) = (cov.transpose() * jet.g * jet.frame.col(k))(0);
    }
  }

  // frame Riemann components <R(e_i,e_j)e_k, e_l>
  jet.riemann_frame.assign(static_cast<size_t>(n) * n * n * n, 0.0);
  RMat gframe = jet.g * jet.frame;  // column l: g * e_l
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        RVec rv = RVec::Zero(n);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            const double w = jet.frame(a, i) * jet.frame(b, j);
            if (w == 0.0) continue;
            for (int c = 0; c < n; ++c) {
              const double wc = w * jet.frame(c, k);
              if (wc == 0.0) continue;
              for (int d = 0; d < n; ++d) rv(d) += wc * rcoord(d, c, a, b);
            }
          }
        for (int l = 0; l < n; ++l)
          jet.riemann_frame[((i * n + j) * n + k) * n + l] = rv.dot(gframe.col(l));
      }

  jet.ricci_frame = RMat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += sc.sig.eps(k) * jet.riemann(k, a, b, k);
      jet.ricci_frame(a, b) = sum;
    }
  jet.scalar = 0.0;
  for (int a = 0; a < n; ++a) jet.scalar += sc.sig.eps(a) * jet.ricci_frame(a, a);

  return jet;
}

RVec sample_point(const Scenario& sc, std::mt19937_64& rng) {
  const int n = sc.domain.dim();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RVec x(n);
  for (int a = 0; a < n; ++a) {
    double lo = sc.domain.lo(a), hi = sc.domain.hi(a);
    if (!sc.domain.periodic[a]) {
      const double margin = 0.08 * (hi - lo);
      lo += margin;
      hi -= margin;
    }
    x(a) = lo + unit(rng) * (hi - lo);
  }
  return x;
}

}  // namespace spincal
