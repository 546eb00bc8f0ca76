#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nnflow/rheology.hpp"

using namespace nnflow;

namespace {

SymT random_symt(std::mt19937& rng, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  return {d(rng), d(rng)};
}

// Central differences of eval_G in the four tensor components.
double fd_derivative_error(const ConstitutiveModel& m, const SymT& S, const SymT& D) {
  Mat2 dGdS, dGdD;
  m.eval_dG(S, D, dGdS, dGdD);
  const double h = 1e-6;
  Mat2 fdS, fdD;
  for (int c = 0; c < 2; ++c) {
    SymT Sp = S, Sm = S;
    (c == 0 ? Sp.a : Sp.b) += h;
    (c == 0 ? Sm.a : Sm.b) -= h;
    const SymT gS = (m.eval_G(Sp, D) - m.eval_G(Sm, D)) * (0.5 / h);
    fdS(0, c) = gS.a;
    fdS(1, c) = gS.b;
    SymT Dp = D, Dm = D;
    (c == 0 ? Dp.a : Dp.b) += h;
    (c == 0 ? Dm.a : Dm.b) -= h;
    const SymT gD = (m.eval_G(S, Dp) - m.eval_G(S, Dm)) * (0.5 / h);
    fdD(0, c) = gD.a;
    fdD(1, c) = gD.b;
  }
  const double scale = std::max({dGdS.norm(), dGdD.norm(), 1e-14});
  return std::max((fdS - dGdS).norm(), (fdD - dGdD).norm()) / scale;
}

double frob(const SymT& t) { return std::sqrt(norm2(t)); }

}  // namespace

TEST_CASE("factory argument validation") {
  CHECK_THROWS(ConstitutiveModel::newtonian(0.0));
  CHECK_THROWS(ConstitutiveModel::carreau_yasuda(1.0, 1.0, 2.0, 0.5, 0.5, 1.0, 1.0));
  CHECK_THROWS(ConstitutiveModel::carreau_yasuda(1.0, 2.0, 2.0, 1.5, 0.5, 1.0, 1.0));
  CHECK_THROWS(ConstitutiveModel::bingham_be(1.0, -1.0, 0.1));
  CHECK_THROWS(ConstitutiveModel::bingham_papanastasiou(1.0, 1.0, 0.0));
  CHECK_THROWS(ConstitutiveModel::activated_euler(-1.0, 1.0, 0.1));
  CHECK_THROWS(ConstitutiveModel::euler_power_law(0.5, 1.0, 3.0, 0.1));
  ConstitutiveModel m = ConstitutiveModel::bingham_be(1.0, 1.0, 0.1);
  CHECK_THROWS(m.set_eps(0.0));
  CHECK_THROWS(m.set_nu(-1.0));
  CHECK_THROWS(m.set_gamma2(-1.0));
  CHECK_THROWS(m.set_r(1.0));
}

TEST_CASE("family names") {
  CHECK(ConstitutiveModel::newtonian(1.0).name() == "newtonian");
  CHECK(ConstitutiveModel::carreau_yasuda(1, 2, 2, 1, 1, 1, 1).name() == "carreau-yasuda");
  CHECK(ConstitutiveModel::bingham_be(1, 1, 1).name() == "bingham-be");
  CHECK(ConstitutiveModel::bingham_papanastasiou(1, 1, 1).name() == "bingham-papanastasiou");
  CHECK(ConstitutiveModel::activated_euler(1, 1, 1).name() == "activated-euler");
  CHECK(ConstitutiveModel::euler_power_law(1, 1.5, 1, 1).name() == "euler-power-law");
}

TEST_CASE("zero state") {
  const std::vector<ConstitutiveModel> models = {
      ConstitutiveModel::newtonian(0.7),
      ConstitutiveModel::carreau_yasuda(1.0, 1.8, 2.5, 0.9, 0.5, 200.0, 200.0),
      ConstitutiveModel::bingham_be(1.0, std::sqrt(2.0), 0.1),
      ConstitutiveModel::bingham_papanastasiou(1.0, 1.0, 0.01),
      ConstitutiveModel::activated_euler(0.5, 1.0, 0.1),
      ConstitutiveModel::euler_power_law(0.5, 1.3, 3.0, 0.1)};
  for (const auto& m : models) {
    const SymT g = m.eval_G(SymT(), SymT());
    CHECK(frob(g) == 0.0);
  }
}

TEST_CASE("newtonian coefficients") {
  const double nu = 0.37;
  const ConstitutiveModel m = ConstitutiveModel::newtonian(nu);
  std::mt19937 rng(1);
  for (int i = 0; i < 20; ++i) {
    const SymT S = random_symt(rng), D = random_symt(rng);
    const SymT g = m.eval_G(S, D);
    const SymT ref = D - S * (1.0 / (2.0 * nu));
    CHECK(frob(g - ref) < 1e-15);
    Mat2 dS, dD;
    m.eval_dG(S, D, dS, dD);
    CHECK((dD - Mat2::Identity()).norm() < 1e-15);
    CHECK((dS + Mat2::Identity() / (2.0 * nu)).norm() < 1e-15);
  }
  CHECK(m.eff_viscosity(1.3, 0.4) == doctest::Approx(nu).epsilon(1e-14));
}

TEST_CASE("carreau-yasuda reduces to newtonian") {
  std::mt19937 rng(2);
  const ConstitutiveModel newt = ConstitutiveModel::newtonian(0.8);
  const ConstitutiveModel cy1 = ConstitutiveModel::carreau_yasuda(0.8, 1.7, 2.9, 1.0, 1.0, 50.0, 75.0);
  const ConstitutiveModel cy2 = ConstitutiveModel::carreau_yasuda(0.8, 2.0, 2.0, 0.3, 0.6, 50.0, 75.0);
  for (int i = 0; i < 20; ++i) {
    const SymT S = random_symt(rng), D = random_symt(rng);
    for (const auto* cy : {&cy1, &cy2}) {
      CHECK(frob(cy->eval_G(S, D) - newt.eval_G(S, D)) < 1e-13);
      const auto c = cy->coeffs(norm2(S), norm2(D));
      CHECK(c.dac_dd == doctest::Approx(0.0).scale(1.0));
      CHECK(c.dbc_ds == doctest::Approx(0.0).scale(1.0));
    }
  }
}

TEST_CASE("carreau-yasuda explicit branch") {
  // with beta2 = 1 the relation is explicit: S = 2 nu mu(|D|^2) D
  const double nu = 1.3, r1 = 1.6, beta1 = 0.4, g1 = 35.0;
  const ConstitutiveModel m = ConstitutiveModel::carreau_yasuda(nu, r1, 2.7, beta1, 1.0, g1, 90.0);
  std::mt19937 rng(3);
  for (int i = 0; i < 30; ++i) {
    const SymT D = random_symt(rng);
    const double Dn = frob(D);
    const double mu = beta1 + (1.0 - beta1) * std::pow(1.0 + g1 * Dn * Dn, 0.5 * r1 - 1.0);
    const SymT S = D * (2.0 * nu * mu);
    CHECK(frob(m.eval_G(S, D)) < 1e-12 * std::max(1.0, frob(S)));
  }
  CHECK(m.eff_viscosity(0.0, 0.0) == doctest::Approx(nu).epsilon(1e-14));
}

TEST_CASE("bingham regularizations approach the exact law") {
  const double nu = 0.9, tau = 1.7;
  std::mt19937 rng(4);
  for (int i = 0; i < 30; ++i) {
    SymT D = random_symt(rng);
    if (frob(D) < 0.3) D.a += 0.5;
    const double Dn = frob(D);
    const SymT S = D * (2.0 * nu + tau / Dn);  // yielded branch of the Bingham law

    const ConstitutiveModel be = ConstitutiveModel::bingham_be(nu, tau, 1e-6);
    CHECK(frob(be.eval_G(S, D)) < 1e-9);

    const ConstitutiveModel pap = ConstitutiveModel::bingham_papanastasiou(nu, tau, 1e-4);
    // exp(-|D|/eps) underflows for |D| >> eps, leaving the exact relation
    CHECK(frob(pap.eval_G(S, D)) < 1e-9);
  }
}

TEST_CASE("papanastasiou explicit relation at finite eps") {
  const double nu = 0.8, tau = 1.2, eps = 0.05;
  const ConstitutiveModel m = ConstitutiveModel::bingham_papanastasiou(nu, tau, eps);
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    SymT D = random_symt(rng, -1.5, 1.5);
    if (frob(D) < 0.05) D.b += 0.2;
    const double Dn = frob(D);
    const SymT S = D * ((2.0 * nu + tau / Dn) * (1.0 - std::exp(-Dn / eps)));
    CHECK(frob(m.eval_G(S, D)) < 1e-13 * std::max(1.0, frob(S)));
  }
}

TEST_CASE("activated euler explicit inverse") {
  const double nu = 0.5, tau = 1.0, eps = 0.1;
  const ConstitutiveModel m = ConstitutiveModel::activated_euler(nu, tau, eps);
  std::mt19937 rng(6);
  for (int i = 0; i < 30; ++i) {
    const SymT S = random_symt(rng);
    const double Sn = frob(S);
    const SymT D = S * (1.0 / (2.0 * nu) + tau / std::sqrt(eps * eps + Sn * Sn));
    CHECK(frob(m.eval_G(S, D)) < 1e-13 * std::max(1.0, frob(D)));
  }
}

TEST_CASE("euler power-law explicit inverse") {
  std::mt19937 rng(7);
  for (const double r : {1.3, 1.5, 2.5}) {
    const double nu = 0.5, tau = 3.0, eps = 0.01;
    const ConstitutiveModel m = ConstitutiveModel::euler_power_law(nu, r, tau, eps);
    const double rp = r / (r - 1.0);
    for (int i = 0; i < 30; ++i) {
      SymT S = random_symt(rng);
      if (frob(S) < 0.1) S.a += 0.3;
      const double Sn = frob(S);
      const SymT D = S * (std::pow(Sn / (2.0 * nu), rp - 2.0) / (2.0 * nu) +
                          tau / std::sqrt(eps * eps + Sn * Sn));
      CHECK(frob(m.eval_G(S, D)) < 1e-12 * std::max(1.0, frob(D)));
    }
  }
}

TEST_CASE("bingham-be derivative at the origin") {
  const double nu = 1.0, tau = std::sqrt(2.0), eps = 0.1;
  const ConstitutiveModel m = ConstitutiveModel::bingham_be(nu, tau, eps);
  Mat2 dS, dD;
  m.eval_dG(SymT(), SymT(), dS, dD);
  CHECK((dD - 2.0 * nu * (tau + eps) * Mat2::Identity()).norm() < 1e-14);
  CHECK((dS + eps * Mat2::Identity()).norm() < 1e-14);
}

TEST_CASE("derivative consistency by finite differences") {
  const std::vector<ConstitutiveModel> models = {
      ConstitutiveModel::newtonian(0.7),
      ConstitutiveModel::carreau_yasuda(1.0, 1.8, 2.5, 0.9, 0.5, 200.0, 200.0),
      ConstitutiveModel::carreau_yasuda(0.01, 1.7, 3.0, 0.2, 0.9, 10.0, 5000.0),
      ConstitutiveModel::bingham_be(1.0, std::sqrt(2.0), 0.01),
      ConstitutiveModel::bingham_papanastasiou(1.0, 1.0, 0.05),
      ConstitutiveModel::activated_euler(0.5, 1.0, 0.1),
      ConstitutiveModel::euler_power_law(0.5, 1.3, 3.0, 0.01)};
  std::mt19937 rng(8);
  for (const auto& m : models) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const SymT S = random_symt(rng);
      SymT D = random_symt(rng);
      if (m.family() == ConstitutiveModel::Family::BinghamPapanastasiou && frob(D) < 0.1) D.a += 0.3;
      worst = std::max(worst, fd_derivative_error(m, S, D));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("carreau-yasuda block definiteness") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> rdist(1.05, 3.5), bdist(0.0, 1.0), gdist(0.1, 500.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ConstitutiveModel m = ConstitutiveModel::carreau_yasuda(
        0.01 + bdist(rng), rdist(rng), rdist(rng), bdist(rng), bdist(rng), gdist(rng), gdist(rng));
    const SymT S = random_symt(rng, -3.0, 3.0), D = random_symt(rng, -3.0, 3.0);
    Mat2 dS, dD;
    m.eval_dG(S, D, dS, dD);
    const Mat2 symD = 0.5 * (dD + dD.transpose());
    const Mat2 symS = -0.5 * (dS + dS.transpose());
    Eigen::SelfAdjointEigenSolver<Mat2> esD(symD), esS(symS);
    CHECK(esD.eigenvalues().minCoeff() > 0.0);
    CHECK(esS.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("carreau-yasuda monotonicity of the explicit branch") {
  const ConstitutiveModel m = ConstitutiveModel::carreau_yasuda(0.3, 1.4, 2.0, 0.1, 1.0, 120.0, 1.0);
  const auto stress = [&](const SymT& D) {
    const double Dn2 = norm2(D);
    const double mu = 0.1 + 0.9 * std::pow(1.0 + 120.0 * Dn2, 0.5 * 1.4 - 1.0);
    return D * (2.0 * 0.3 * mu);
  };
  std::mt19937 rng(10);
  for (int i = 0; i < 50; ++i) {
    const SymT D1 = random_symt(rng), D2 = random_symt(rng);
    const SymT dS = stress(D1) - stress(D2);
    const SymT dD = D1 - D2;
    CHECK(ddot(dS, dD) >= -1e-14);
    CHECK(frob(m.eval_G(stress(D1), D1)) < 1e-12);
  }
}

TEST_CASE("effective viscosity of euler power-law fluids") {
  const ConstitutiveModel plain = ConstitutiveModel::euler_power_law(0.5, 1.3, 0.0, 0.01);
  const ConstitutiveModel activated = ConstitutiveModel::euler_power_law(0.5, 1.3, 3.0, 0.01);

  // shear thinning: the plain power law is monotone decreasing in |S|
  double prev = plain.eff_viscosity(1e-4, 0.0);
  for (double s = 1e-3; s < 1e3; s *= 10.0) {
    const double cur = plain.eff_viscosity(s, 0.0);
    CHECK(cur < prev);
    prev = cur;
  }

  // the activation term makes the fluid nearly inviscid at low stress
  CHECK(activated.eff_viscosity(1e-4, 0.0) < 0.01 * plain.eff_viscosity(1e-4, 0.0));
  // at high stress the power law dominates and the two agree
  const double hi = 1e4;
  CHECK(activated.eff_viscosity(hi, 0.0) ==
        doctest::Approx(plain.eff_viscosity(hi, 0.0)).epsilon(1e-2));
}

TEST_CASE("channel calibration for the regularized bingham relation") {
  // Poiseuille data C = 2, tau_y = 1: the yielded branch has S12 = -C x2 and
  // du/dx2 = tau_y - C x2; the component pair (nu, tau_y) = (1, sqrt(2))
  // satisfies G = 0 exactly in the limit eps -> 0.
  const ConstitutiveModel m = ConstitutiveModel::bingham_be(1.0, std::sqrt(2.0), 1e-7);
  for (const double x2 : {0.55, 0.7, 0.9, 1.0}) {
    const SymT S(0.0, -2.0 * x2);
    const SymT D(0.0, 0.5 * (1.0 - 2.0 * x2));
    CHECK(frob(m.eval_G(S, D)) < 1e-9);
  }
  // plug region: D = 0 and |S| <= tau_y, residual is O(eps)
  for (const double x2 : {0.0, 0.2, 0.45}) {
    const SymT S(0.0, -2.0 * x2);
    CHECK(frob(S) <= std::sqrt(2.0) + 1e-14);
    CHECK(frob(m.eval_G(S, SymT())) < 1e-6);
  }
}

TEST_CASE("continuation hooks change the coefficients") {
  ConstitutiveModel m = ConstitutiveModel::euler_power_law(0.5, 2.0, 0.0, 1.0);
  const double bc0 = m.coeffs(4.0, 0.0).bc;
  m.set_r(1.3);
  CHECK(m.coeffs(4.0, 0.0).bc != doctest::Approx(bc0));
  ConstitutiveModel cy = ConstitutiveModel::carreau_yasuda(1.0, 1.7, 3.0, 0.2, 0.9, 10.0, 10.0);
  const double cb0 = cy.coeffs(4.0, 1.0).bc;
  cy.set_gamma2(1e4);
  CHECK(cy.coeffs(4.0, 1.0).bc != doctest::Approx(cb0));
  ConstitutiveModel be = ConstitutiveModel::bingham_be(1.0, 1.0, 1.0);
  be.set_eps(0.01);
  CHECK(be.eps() == 0.01);
  CHECK(be.coeffs(0.0, 0.0).bc == doctest::Approx(0.01));
}
