#include <doctest.h>

#include <random>

#include "spincal/clifford.hpp"

using namespace spincal;

namespace {

double relation_residual(const GammaRep& rep) {
  const int n = rep.sig.dim();
  const CMat id = CMat::Identity(rep.dim(), rep.dim());
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      CMat anti = rep.gammas[j] * rep.gammas[k] + rep.gammas[k] * rep.gammas[j];
      CMat expected = CMat::Zero(rep.dim(), rep.dim());
      if (j == k) expected = (j < rep.sig.r ? -2.0 : 2.0) * id;
      worst = std::max(worst, max_abs(CMat(anti - expected)));
    }
  return worst;
}

RVec unit(int n, int j) { return RVec::Unit(n, j); }

}  // namespace

TEST_CASE("generator relations for every signature up to n = 8") {
  for (int n = 1; n <= 8; ++n)
    for (int r = 0; r <= n; ++r) {
      GammaRep rep = build_gamma_rep({r, n - r});
      CAPTURE(r);
      CAPTURE(n);
      CHECK(relation_residual(rep) <= 1e-13);
      CHECK(rep.dim() == rep.sig.spinor_dim());
    }
}

TEST_CASE("volume element squares to I and has the parity behaviour") {
  for (int n = 1; n <= 8; ++n)
    for (int r = 0; r <= n; ++r) {
      GammaRep rep = build_gamma_rep({r, n - r});
      const CMat id = CMat::Identity(rep.dim(), rep.dim());
      CHECK(max_abs(CMat(rep.volume * rep.volume - id)) <= 1e-13);
      for (const CMat& g : rep.gammas) {
        if (n % 2 == 0)
          CHECK(max_abs(CMat(rep.volume * g + g * rep.volume)) <= 1e-13);
        else
          CHECK(max_abs(CMat(rep.volume * g - g * rep.volume)) <= 1e-13);
      }
      if (n % 2 == 1) CHECK(max_abs(CMat(rep.volume - id)) <= 1e-13);  // Sigma^0 pick
    }
}

TEST_CASE("specific low-dimensional representations") {
  GammaRep r20 = build_gamma_rep({2, 0});
  const CMat id2 = CMat::Identity(2, 2);
  CHECK(max_abs(CMat(r20.gammas[0] * r20.gammas[0] + id2)) <= 1e-14);
  CHECK(max_abs(CMat(r20.gammas[1] * r20.gammas[1] + id2)) <= 1e-14);
  CHECK(max_abs(CMat(r20.volume - kI * r20.gammas[0] * r20.gammas[1])) <= 1e-14);

  GammaRep r11 = build_gamma_rep({1, 1});
  CHECK(max_abs(CMat(r11.gammas[0] * r11.gammas[0] + id2)) <= 1e-14);
  CHECK(max_abs(CMat(r11.gammas[1] * r11.gammas[1] - id2)) <= 1e-14);
  CHECK(max_abs(CMat(r11.gammas[0] * r11.gammas[1] + r11.gammas[1] * r11.gammas[0])) <= 1e-14);
  CHECK(max_abs(CMat(r11.volume - r11.gammas[0] * r11.gammas[1])) <= 1e-14);

  GammaRep r30 = build_gamma_rep({3, 0});
  CHECK(r30.dim() == 2);
  CHECK(max_abs(CMat(r30.volume - id2)) <= 1e-14);
  // omega = i^{1-1+0} g1 g2 g3 acts as +I
  CHECK(max_abs(CMat(r30.gammas[0] * r30.gammas[1] * r30.gammas[2] - id2)) <= 1e-14);

  GammaRep r40 = build_gamma_rep({4, 0});
  CMat prod = r40.gammas[0] * r40.gammas[1] * r40.gammas[2] * r40.gammas[3];
  CHECK(max_abs(CMat(r40.volume + prod)) <= 1e-14);  // omega = i^2 g1g2g3g4
}

TEST_CASE("invariant form: Hermitian, invertible, adjoint rule") {
  for (int n = 1; n <= 8; ++n)
    for (int r = 0; r <= n; ++r) {
      GammaRep rep = build_gamma_rep({r, n - r});
      const int s = n - r;
      const double sign = (s % 2 == 0) ? -1.0 : 1.0;
      CHECK(max_abs(CMat(rep.form - rep.form.adjoint())) <= 1e-13);
      CHECK(std::abs(rep.form.determinant()) > 1e-8);
      for (const CMat& g : rep.gammas)
        CHECK(max_abs(CMat(g.adjoint() * rep.form - sign * rep.form * g)) <= 1e-13);
      if (s == 0)
        CHECK(max_abs(CMat(rep.form - CMat::Identity(rep.dim(), rep.dim()))) <= 1e-14);
    }
}

TEST_CASE("invariant form in signature (1,1) is the +1-square generator") {
  GammaRep rep = build_gamma_rep({1, 1});
  // B and gamma_2 both solve the adjoint constraint; they may differ by a
  // real scale only.
  CMat ratio = rep.form * rep.gammas[1].inverse();
  CHECK(max_abs(CMat(ratio - ratio(0, 0) * CMat::Identity(2, 2))) <= 1e-13);
  CHECK(std::abs(ratio(0, 0).imag()) <= 1e-13);
}

TEST_CASE("chirality projectors and the interchange property") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  for (int n = 2; n <= 8; n += 2)
    for (int r = 0; r <= n; ++r) {
      GammaRep rep = build_gamma_rep({r, n - r});
      REQUIRE(rep.chirality_projectors.has_value());
      const auto& [pp, pm] = *rep.chirality_projectors;
      const CMat id = CMat::Identity(rep.dim(), rep.dim());
      CHECK(max_abs(CMat(pp * pp - pp)) <= 1e-13);
      CHECK(max_abs(CMat(pm * pm - pm)) <= 1e-13);
      CHECK(max_abs(CMat(pp + pm - id)) <= 1e-13);
      for (const CMat& g : rep.gammas) {
        CHECK(max_abs(CMat(g * pp - pm * g)) <= 1e-13);  // swaps the halves
      }
      // clifford action maps P+ range into P- range
      CVec sigma(rep.dim());
      for (int i = 0; i < rep.dim(); ++i) sigma(i) = Complex(gauss(rng), gauss(rng));
      RVec v(n);
      for (int i = 0; i < n; ++i) v(i) = gauss(rng);
      CVec plus = pp * sigma;
      CVec image = clifford_action(rep, v, plus);
      CHECK(max_abs(CVec(pp * image)) <= 1e-12 * (1.0 + max_abs(image)));
    }
}

TEST_CASE("clifford action basics") {
  GammaRep r20 = build_gamma_rep({2, 0});
  CVec sigma(2);
  sigma << Complex(0.3, -0.1), Complex(1.1, 0.7);
  CHECK(max_abs(clifford_action(r20, RVec::Zero(2), sigma)) == 0.0);
  CVec twice = clifford_action(r20, unit(2, 0), clifford_action(r20, unit(2, 0), sigma));
  CHECK(max_abs(CVec(twice + sigma)) <= 1e-14);

  GammaRep r11 = build_gamma_rep({1, 1});
  CVec twice2 = clifford_action(r11, unit(2, 1), clifford_action(r11, unit(2, 1), sigma));
  CHECK(max_abs(CVec(twice2 - sigma)) <= 1e-14);
}

TEST_CASE("two-form action: zero form, chirality eigenvalues, interior-product identity") {
  GammaRep rep = build_gamma_rep({2, 0});
  CVec sigma(2);
  sigma << Complex(0.5, 0.2), Complex(-0.4, 0.9);
  CHECK(max_abs(two_form_action(rep, RMat::Zero(2, 2), sigma)) == 0.0);

  const double b = 0.73;
  RMat om(2, 2);
  om << 0, b, -b, 0;
  // g1 g2 has eigenvalues -+ i on the chirality eigenspaces (omega = i g1 g2)
  const auto& [pp, pm] = *rep.chirality_projectors;
  CVec plus = pp * sigma, minus = pm * sigma;
  CHECK(max_abs(CVec(two_form_action(rep, om, plus) + kI * b * plus)) <= 1e-13);
  CHECK(max_abs(CVec(two_form_action(rep, om, minus) - kI * b * minus)) <= 1e-13);

  // 2 Omega.psi = sum_j e_j.(e_j -| Omega).psi for random Omega, Riemannian
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int n = 2; n <= 6; ++n) {
    GammaRep r = build_gamma_rep({n, 0});
    RMat o = RMat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        o(i, j) = gauss(rng);
        o(j, i) = -o(i, j);
      }
    CVec s(r.dim());
    for (int i = 0; i < r.dim(); ++i) s(i) = Complex(gauss(rng), gauss(rng));
    CVec lhs = 2.0 * two_form_action(r, o, s);
    CVec rhs = CVec::Zero(r.dim());
    for (int j = 0; j < n; ++j) {
      RVec interior = o.row(j).transpose();  // (e_j -| O)(e_l) = O(j,l)
      rhs += r.gammas[j] * clifford_action(r, interior, s);
    }
    CHECK(max_abs(CVec(lhs - rhs)) <= 1e-13 * (1.0 + max_abs(lhs)));
  }
}

TEST_CASE("two-form action rejects non-antisymmetric input") {
  GammaRep rep = build_gamma_rep({2, 0});
  RMat bad = RMat::Identity(2, 2);
  CVec sigma = CVec::Ones(2);
  CHECK_THROWS_AS(two_form_action(rep, bad, sigma), ConfigError);
}

TEST_CASE("alpha embedding: images obey the lower relations, intertwiner verified") {
  for (int n = 1; n <= 7; ++n)
    for (int r = 0; r <= n; ++r) {
      Signature lo{r, n - r};
      Signature hi{r + 1, n - r};
      GammaRep base = build_gamma_rep(lo);
      GammaRep amb = build_gamma_rep(hi);
      AlphaEmbedding emb = alpha_embed(base, amb);
      CAPTURE(r);
      CAPTURE(n);

      const CMat id = CMat::Identity(amb.dim(), amb.dim());
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          CMat anti = emb.images[j] * emb.images[k] + emb.images[k] * emb.images[j];
          CMat expected = CMat::Zero(amb.dim(), amb.dim());
          if (j == k) expected = (j < r ? -2.0 : 2.0) * id;
          CHECK(max_abs(CMat(anti - expected)) <= 1e-13);
        }

      CHECK(emb.residual <= 1e-10);
      for (int j = 0; j < n; ++j)
        CHECK(max_abs(CMat(emb.restrict_map * emb.images[j] -
                           base.gammas[j] * emb.restrict_map)) <= 1e-10);
    }
}

TEST_CASE("alpha embedding (3,0) -> (4,0): positive block carries omega = +I") {
  GammaRep base = build_gamma_rep({3, 0});
  GammaRep amb = build_gamma_rep({4, 0});
  AlphaEmbedding emb = alpha_embed(base, amb);
  // alpha(omega_base) restricted along the intertwiner equals +I on the block
  CMat alpha_vol = ipow(1 - 1 + 0) * emb.images[0] * emb.images[1] * emb.images[2];
  CMat lhs = emb.restrict_map * alpha_vol;
  CMat rhs = base.volume * emb.restrict_map;
  CHECK(max_abs(CMat(lhs - rhs)) <= 1e-12);
}

TEST_CASE("alpha embedding negative-chirality variant flips the multiplication sign") {
  GammaRep base = build_gamma_rep({1, 0});
  GammaRep amb = build_gamma_rep({2, 0});
  AlphaEmbedding emb = alpha_embed(base, amb, true);
  for (int j = 0; j < 1; ++j)
    CHECK(max_abs(CMat(emb.restrict_map * emb.images[j] +
                       base.gammas[j] * emb.restrict_map)) <= 1e-10);
}

TEST_CASE("construction is deterministic and capped") {
  GammaRep a = build_gamma_rep({3, 2});
  GammaRep b = build_gamma_rep({3, 2});
  for (int j = 0; j < 5; ++j) CHECK(max_abs(CMat(a.gammas[j] - b.gammas[j])) == 0.0);
  CHECK(max_abs(CMat(a.form - b.form)) == 0.0);
  CHECK_THROWS_AS(build_gamma_rep({13, 0}), NumericalError);

  // twin representation with negated generators: omega flips for odd n
  GammaRep twin = build_gamma_rep({3, 0}, true);
  CHECK(max_abs(CMat(twin.volume + CMat::Identity(2, 2))) <= 1e-14);
}
