#include "spincal/lattice.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace spincal {

int LatticeGrid::sites() const {
  int s = 1;
  for (int d : dims) s *= d;
  return s;
}

int LatticeGrid::spinor_dim() const { return scenario.sig.spinor_dim(); }

int LatticeGrid::site_index(const std::vector<int>& coords) const {
  int idx = 0;
  for (size_t a = 0; a < dims.size(); ++a) {
    int c = coords[a] % dims[a];
    if (c < 0) c += dims[a];
    idx = idx * dims[a] + c;
  }
  return idx;
}

std::vector<int> LatticeGrid::site_coords(int index) const {
  std::vector<int> c(dims.size());
  for (int a = static_cast<int>(dims.size()) - 1; a >= 0; --a) {
    c[a] = index % dims[a];
    index /= dims[a];
  }
  return c;
}

RVec LatticeGrid::site_position(int index) const {
  const std::vector<int> c = site_coords(index);
  RVec x(static_cast<int>(dims.size()));
  for (size_t a = 0; a < dims.size(); ++a)
    x(a) = scenario.domain.lo(a) + c[a] * spacing[a];
  return x;
}

int LatticeGrid::neighbor(int index, int axis, int step) const {
  std::vector<int> c = site_coords(index);
  c[axis] += step;
  return site_index(c);
}

LatticeGrid make_grid(const Scenario& sc, const std::vector<int>& dims, double t) {
  if (!sc.lattice_backend)
    throw ConfigError("make_grid: scenario has no lattice backend");
  if (sc.sig.s != 0)
    throw ConfigError("make_grid: Riemannian signature required");
  for (size_t a = 0; a < dims.size(); ++a)
    if (dims[a] < 8) throw ConfigError("make_grid: resolution >= 8 required");
  if (static_cast<int>(dims.size()) != sc.sig.dim())
    throw ConfigError("make_grid: dimension mismatch");
  if (sc.flux && sc.sig.dim() != 2)
    throw ConfigError("make_grid: flux scenarios are two-dimensional");

  LatticeGrid g;
  g.scenario = sc;
  g.dims = dims;
  g.t = t;
  double cell = 1.0;
  for (size_t a = 0; a < dims.size(); ++a) {
    if (!sc.domain.periodic[a])
      throw ConfigError("make_grid: torus scenarios only");
    g.periods.push_back(sc.domain.width(static_cast<int>(a)));
    g.spacing.push_back(g.periods[a] / dims[a]);
    cell *= g.spacing[a];
  }

  const int ns = g.sites();
  g.metric_samples.resize(ns);
  g.frame_samples.resize(ns);
  g.weights.resize(ns);
  for (int i = 0; i < ns; ++i) {
    const RVec x = g.site_position(i);
    g.metric_samples[i] = sc.metric(t, x);
    if (g.metric_samples[i].determinant() <= 0.0)
      throw NumericalError("make_grid: metric sample not positive definite");
    g.frame_samples[i] = orthonormal_frame(g.metric_samples[i], sc.sig);
    g.weights[i] = std::sqrt(g.metric_samples[i].determinant()) * cell;
  }

  const int n = sc.sig.dim();
  g.links.assign(n, std::vector<Complex>(ns, Complex{1.0, 0.0}));
  if (sc.flux && *sc.flux != 0) {
    // uniform plaquette phase theta = 2 pi q / (N0 N1), seam on the last
    // 0-axis link layer
    const int q = *sc.flux;
    const double theta = 2.0 * M_PI * q / (dims[0] * dims[1]);
    for (int i = 0; i < ns; ++i) {
      const std::vector<int> c = g.site_coords(i);
      g.links[1][i] = std::exp(kI * (theta * c[0]));
      if (c[0] == dims[0] - 1)
        g.links[0][i] = std::exp(-kI * (theta * dims[0] * c[1]));
    }
  } else if (sc.spinc_a) {
    // midpoint rule for the smooth connection; the spinor sees a/2
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < ns; ++i) {
        RVec x = g.site_position(i);
        x(a) += 0.5 * g.spacing[a];
        g.links[a][i] = std::exp(kI * (0.5 * sc.spinc_a(x)(a) * g.spacing[a]));
      }
  }
  return g;
}

void apply_gauge(LatticeGrid& grid, const std::vector<double>& theta) {
  const int n = grid.scenario.sig.dim();
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < grid.sites(); ++i) {
      const int j = grid.neighbor(i, a, +1);
      grid.links[a][i] *= std::exp(kI * (theta[i] - theta[j]));
    }
}

namespace {

using Triplets = std::vector<Eigen::Triplet<Complex>>;

void add_block(Triplets& trip, int row_site, int col_site, const CMat& block) {
  const int d = static_cast<int>(block.rows());
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (block(r, c) != Complex{0.0, 0.0})
        trip.emplace_back(row_site * d + r, col_site * d + c, block(r, c));
}

SpMat weighted_adjoint(const SpMat& m, const std::vector<double>& w, int d) {
  SpMat adj = SpMat(m.adjoint());
  // W^{-1} M^dagger W with W the diagonal site-weight matrix
  for (int k = 0; k < adj.outerSize(); ++k)
    for (SpMat::InnerIterator it(adj, k); it; ++it)
      it.valueRef() *= w[it.col() / d] / w[it.row() / d];
  return adj;
}

// Site spin-connection matrices from the sampled frame field: central
// differences of E over the grid replace the smooth derivative engine.
std::vector<CMat> site_connections(const LatticeGrid& grid) {
  const int n = grid.scenario.sig.dim();
  const int ns = grid.sites();
  const GammaRep& rep = rep_for(grid.scenario.sig);
  const CMat zero = CMat::Zero(rep.dim(), rep.dim());
  std::vector<CMat> out(static_cast<size_t>(ns) * n, zero);

  bool constant_metric = true;
  for (int i = 1; i < ns && constant_metric; ++i)
    if ((grid.metric_samples[i] - grid.metric_samples[0]).cwiseAbs().maxCoeff() > 0.0)
      constant_metric = false;
  if (constant_metric) return out;

  for (int i = 0; i < ns; ++i) {
    const RMat& e = grid.frame_samples[i];
    const RMat& g = grid.metric_samples[i];
    const RMat ginv = g.inverse();

    // dE and dg by lattice central differences (order 2, same stencil as D)
    std::vector<RMat> de(n), dg(n);
    for (int a = 0; a < n; ++a) {
      const int up = grid.neighbor(i, a, +1), dn = grid.neighbor(i, a, -1);
      de[a] = (grid.frame_samples[up] - grid.frame_samples[dn]) / (2.0 * grid.spacing[a]);
      dg[a] = (grid.metric_samples[up] - grid.metric_samples[dn]) / (2.0 * grid.spacing[a]);
    }
    std::vector<RMat> gamma(n, RMat::Zero(n, n));
    for (int ii = 0; ii < n; ++ii)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double sum = 0.0;
          for (int l = 0; l < n; ++l)
            sum += ginv(ii, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
          gamma[ii](j, k) = 0.5 * sum;
        }

    for (int kdir = 0; kdir < n; ++kdir) {
      CMat s = zero;
      for (int j = 0; j < n; ++j) {
        RVec cov = RVec::Zero(n);
        for (int a = 0; a < n; ++a) {
          const double c = e(a, kdir);
          if (c == 0.0) continue;
          cov += c * de[a].col(j);
          for (int cc = 0; cc < n; ++cc)
            for (int b = 0; b < n; ++b)
              cov(cc) += c * gamma[cc](a, b) * e(b, j);
        }
        for (int l = 0; l < n; ++l) {
          const double cjl = cov.transpose() * g * e.col(l);
          if (cjl == 0.0) continue;
          s += 0.25 * cjl * rep.gammas[j] * rep.gammas[l];
        }
      }
      out[static_cast<size_t>(i) * n + kdir] = s;
    }
  }
  return out;
}

}  // namespace

DiracMatrix assemble_dirac(const LatticeGrid& grid, double wilson_rho) {
  const int n = grid.scenario.sig.dim();
  const int ns = grid.sites();
  const GammaRep& rep = rep_for(grid.scenario.sig);
  const int d = rep.dim();
  const int dim = ns * d;
  const CMat id = CMat::Identity(d, d);

  const std::vector<CMat> conns = site_connections(grid);

  // one triplet list per frame direction; the wilson share is spread evenly
  std::vector<Triplets> parts(n);
  for (int i = 0; i < ns; ++i) {
    const RMat& e = grid.frame_samples[i];
    for (int j = 0; j < n; ++j) {
      const CMat gj = rep.gammas[j];
      // gamma_j (sum_a E^a_j covariant-central-difference_a + S_j)
      for (int a = 0; a < n; ++a) {
        const double c = e(a, j);
        if (c == 0.0) continue;
        const int up = grid.neighbor(i, a, +1), dn = grid.neighbor(i, a, -1);
        const Complex link_up = grid.links[a][i];
        const Complex link_dn = std::conj(grid.links[a][dn]);
        const double inv2h = 1.0 / (2.0 * grid.spacing[a]);
        add_block(parts[j], i, up, CMat(c * inv2h * link_up * gj));
        add_block(parts[j], i, dn, CMat(-c * inv2h * link_dn * gj));
      }
      add_block(parts[j], i, i, CMat(gj * conns[static_cast<size_t>(i) * n + j]));
      // chirality-weighted wilson term, distributed over directions
      if (n % 2 == 0 && wilson_rho != 0.0) {
        const CMat wshare = (wilson_rho / (2.0 * n)) * rep.volume;
        for (int a = 0; a < n; ++a) {
          const int up = grid.neighbor(i, a, +1), dn = grid.neighbor(i, a, -1);
          const Complex link_up = grid.links[a][i];
          const Complex link_dn = std::conj(grid.links[a][dn]);
          const double invh = 1.0 / grid.spacing[a];
          add_block(parts[j], i, up, CMat(-invh * link_up * wshare));
          add_block(parts[j], i, dn, CMat(-invh * link_dn * wshare));
          add_block(parts[j], i, i, CMat(2.0 * invh * wshare));
        }
      }
    }
  }

  DiracMatrix out;
  out.weights = grid.weights;
  out.spinor_dim = d;
  out.direction_parts.resize(n);
  out.op = SpMat(dim, dim);
  for (int j = 0; j < n; ++j) {
    SpMat raw(dim, dim);
    raw.setFromTriplets(parts[j].begin(), parts[j].end());
    SpMat sym = SpMat(0.5 * (raw + weighted_adjoint(raw, grid.weights, d)));
    out.direction_parts[j] = sym;
    out.op = (j == 0) ? sym : SpMat(out.op + sym);
  }

  // hermiticity defect of W^{1/2} D W^{-1/2}
  double defect = 0.0;
  SpMat herm = out.op;
  for (int k = 0; k < herm.outerSize(); ++k)
    for (SpMat::InnerIterator it(herm, k); it; ++it)
      it.valueRef() *= std::sqrt(grid.weights[it.row() / d] / grid.weights[it.col() / d]);
  SpMat diff = SpMat(herm - SpMat(herm.adjoint()));
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SpMat::InnerIterator it(diff, k); it; ++it)
      defect = std::max(defect, std::abs(it.value()));
  out.hermiticity_defect = defect;
  return out;
}

namespace {

void fix_phase(CVec& v) {
  Eigen::Index bi = 0;
  v.cwiseAbs().maxCoeff(&bi);
  const Complex lead = v(bi);
  if (std::abs(lead) > 0.0) v *= std::conj(lead) / std::abs(lead);
}

SpectrumResult dense_spectrum(const DiracMatrix& d, bool with_vectors) {
  const int dim = static_cast<int>(d.op.rows());
  const int sd = d.spinor_dim;
  CMat herm = CMat(d.op);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      herm(r, c) *= std::sqrt(d.weights[r / sd] / d.weights[c / sd]);
  herm = 0.5 * (herm + herm.adjoint().eval());

  Eigen::SelfAdjointEigenSolver<CMat> solver(herm, with_vectors ? Eigen::ComputeEigenvectors
                                                                : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("spectrum: dense eigensolver failed to converge");

  SpectrumResult out;
  out.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + dim);
  if (with_vectors) {
    out.eigenvectors.resize(dim);
    for (int k = 0; k < dim; ++k) {
      CVec v = solver.eigenvectors().col(k);
      for (int r = 0; r < dim; ++r) v(r) /= std::sqrt(d.weights[r / sd]);
      // w-normalize and fix the phase deterministically
      double nrm = 0.0;
      for (int r = 0; r < dim; ++r) nrm += d.weights[r / sd] * std::norm(v(r));
      v /= std::sqrt(nrm);
      fix_phase(v);
      out.eigenvectors[k] = v;
    }
  }
  return out;
}

// Lanczos with full reorthogonalization on the squared Hermitized operator;
// signed eigenvalues recovered by projecting the operator into the converged
// low cluster.
SpectrumResult lanczos_spectrum(const DiracMatrix& d, int count, bool with_vectors) {
  const int dim = static_cast<int>(d.op.rows());
  const int sd = d.spinor_dim;
  std::vector<double> sqrtw(dim);
  for (int r = 0; r < dim; ++r) sqrtw[r] = std::sqrt(d.weights[r / sd]);

  auto apply_h = [&](const CVec& v) {
    CVec u = v;
    for (int r = 0; r < dim; ++r) u(r) /= sqrtw[r];
    CVec w = d.op * u;
    for (int r = 0; r < dim; ++r) w(r) *= sqrtw[r];
    return w;
  };
  auto apply_h2 = [&](const CVec& v) { return apply_h(apply_h(v)); };

  const int want = std::max(2 * count + 8, 24);
  const int iters = std::min(dim, std::max(6 * want, 240));
  std::vector<CVec> basis;
  basis.reserve(iters);
  CVec v = CVec::Zero(dim);
  std::mt19937_64 rng(0x5ca1ab1eULL);
  std::normal_distribution<double> gauss;
  for (int r = 0; r < dim; ++r) v(r) = Complex(gauss(rng), gauss(rng));
  v /= v.norm();
  basis.push_back(v);

  std::vector<double> alpha, beta;
  CVec prev = CVec::Zero(dim);
  double prev_beta = 0.0;
  for (int it = 0; it < iters; ++it) {
    CVec w = apply_h2(basis.back());
    const double a = basis.back().dot(w).real();
    alpha.push_back(a);
    w -= a * basis.back();
    if (it > 0) w -= prev_beta * prev;
    for (const CVec& b : basis) w -= b.dot(w) * b;  // full reorthogonalization
    const double bnorm = w.norm();
    if (bnorm < 1e-12) break;
    beta.push_back(bnorm);
    prev = basis.back();
    prev_beta = bnorm;
    basis.push_back(CVec(w / bnorm));
  }

  const int m = static_cast<int>(alpha.size());
  RMat tri = RMat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    tri(i, i) = alpha[i];
    if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<RMat> small(tri);

  // take the lowest `want` Ritz pairs of D^2, then diagonalize D inside
  const int keep = std::min(want, m);
  CMat ritz(dim, keep);
  for (int k = 0; k < keep; ++k) {
    CVec rv = CVec::Zero(dim);
    for (int i = 0; i < m; ++i) rv += small.eigenvectors()(i, k) * basis[i];
    ritz.col(k) = rv.normalized();
  }
  CMat hr(dim, keep);
  for (int k = 0; k < keep; ++k) hr.col(k) = apply_h(CVec(ritz.col(k)));
  CMat proj = ritz.adjoint() * hr;
  proj = 0.5 * (proj + proj.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMat> inner(proj);

  SpectrumResult out;
  out.eigenvalues.assign(inner.eigenvalues().data(),
                         inner.eigenvalues().data() + keep);
  if (with_vectors) {
    out.eigenvectors.resize(keep);
    for (int k = 0; k < keep; ++k) {
      CVec v2 = ritz * inner.eigenvectors().col(k);
      for (int r = 0; r < dim; ++r) v2(r) /= sqrtw[r];
      double nrm = 0.0;
      for (int r = 0; r < dim; ++r) nrm += d.weights[r / sd] * std::norm(v2(r));
      v2 /= std::sqrt(nrm);
      fix_phase(v2);
      out.eigenvectors[k] = v2;
    }
  }
  return out;
}

}  // namespace

SpectrumResult spectrum(const DiracMatrix& d, int count, bool with_vectors) {
  const double scale = 1.0;
  if (d.hermiticity_defect > 1e-10 * scale)
    throw NumericalError("spectrum: operator violates the Hermiticity invariant, defect " +
                         std::to_string(d.hermiticity_defect));
  if (d.op.rows() <= 4096) return dense_spectrum(d, with_vectors);
  if (count <= 0)
    throw ConfigError("spectrum: iterative path needs an eigenpair count");
  return lanczos_spectrum(d, count, with_vectors);
}

SpectrumResult spectrum_with_estimate(const Scenario& sc, const std::vector<int>& dims,
                                      int count, double t, double wilson_rho) {
  LatticeGrid grid = make_grid(sc, dims, t);
  DiracMatrix d = assemble_dirac(grid, wilson_rho);
  SpectrumResult full = spectrum(d, count, true);

  std::vector<int> half = dims;
  for (int& v : half) v = std::max(8, v / 2);
  LatticeGrid hgrid = make_grid(sc, half, t);
  DiracMatrix hd = assemble_dirac(hgrid, wilson_rho);
  SpectrumResult coarse = spectrum(hd, count, false);

  // rank-match by |lambda|; the gap scaled by 1/3 is the order-2 Richardson
  // error estimate for the fine grid
  const size_t nf = full.eigenvalues.size();
  std::vector<size_t> order(nf);
  for (size_t i = 0; i < nf; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::abs(full.eigenvalues[a]) < std::abs(full.eigenvalues[b]);
  });
  std::vector<double> ca(coarse.eigenvalues.size());
  for (size_t i = 0; i < ca.size(); ++i) ca[i] = std::abs(coarse.eigenvalues[i]);
  std::sort(ca.begin(), ca.end());
  full.convergence_estimate.assign(nf, 0.0);
  for (size_t rank = 0; rank < nf; ++rank) {
    const size_t j = std::min(rank, ca.size() - 1);
    const double est =
        std::abs(std::abs(full.eigenvalues[order[rank]]) - ca[j]) / 3.0;
    full.convergence_estimate[order[rank]] = est;
    full.max_convergence_estimate = std::max(full.max_convergence_estimate, est);
  }
  return full;
}

double integrate(const LatticeGrid& grid, const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != grid.sites())
    throw ConfigError("integrate: sample count mismatch");
  double sum = 0.0;
  for (int i = 0; i < grid.sites(); ++i) sum += grid.weights[i] * values[i];
  return sum;
}

double inner_product(const LatticeGrid& grid, const CVec& a, const CVec& b) {
  const int d = grid.spinor_dim();
  if (a.size() != grid.total_dim() || b.size() != grid.total_dim())
    throw ConfigError("inner_product: shape mismatch");
  double sum = 0.0;
  for (int i = 0; i < grid.sites(); ++i) {
    Complex site = 0.0;
    for (int c = 0; c < d; ++c) site += std::conj(a(i * d + c)) * b(i * d + c);
    sum += grid.weights[i] * site.real();
  }
  return sum;
}

std::vector<RMat> lattice_em_tensor(const LatticeGrid& grid, const DiracMatrix& d,
                                    const CVec& psi) {
  const int n = grid.scenario.sig.dim();
  const int sd = grid.spinor_dim();
  const GammaRep& rep = rep_for(grid.scenario.sig);
  if (d.direction_parts.empty())
    throw ConfigError("lattice_em_tensor: operator lacks direction parts");
  if (psi.size() != grid.total_dim())
    throw ConfigError("lattice_em_tensor: eigenvector missing or wrong size");

  std::vector<CVec> applied(n);
  for (int j = 0; j < n; ++j) applied[j] = d.direction_parts[j] * psi;

  std::vector<RMat> out(grid.sites(), RMat::Zero(n, n));
  for (int i = 0; i < grid.sites(); ++i) {
    const CVec value = psi.segment(i * sd, sd);
    for (int a = 0; a < n; ++a) {
      const CVec pa = applied[a].segment(i * sd, sd);
      for (int b = 0; b < n; ++b) {
        // X.grad_Y from the direction split: gamma_a K_b = -gamma_a gamma_b A_b
        const CVec pb = applied[b].segment(i * sd, sd);
        const CVec xa = -rep.gammas[a] * (rep.gammas[b] * pb);
        const CVec xb = -rep.gammas[b] * (rep.gammas[a] * pa);
        out[i](a, b) = 0.5 * (value.dot(xa) + value.dot(xb)).real();
      }
    }
  }
  return out;
}

std::vector<double> omega_norm_per_site(const LatticeGrid& grid) {
  const int ns = grid.sites();
  std::vector<double> out(ns, 0.0);
  if (grid.scenario.flux) {
    const double area = grid.periods[0] * grid.periods[1];
    const double b = 2.0 * M_PI * std::abs(*grid.scenario.flux) / area;
    std::fill(out.begin(), out.end(), b);
    return out;
  }
  if (!grid.scenario.spinc_a) return out;
  const int n = grid.scenario.sig.dim();
  for (int i = 0; i < ns; ++i) {
    const RMat om = grid.scenario.omega_at(grid.site_position(i));
    const RMat& e = grid.frame_samples[i];
    double sq = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const double c = e.col(a).transpose() * om * e.col(b);
        sq += c * c;
      }
    out[i] = std::sqrt(sq);
  }
  return out;
}

}  // namespace spincal
