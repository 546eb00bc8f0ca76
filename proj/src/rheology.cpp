#include "nnflow/rheology.hpp"

#include <cmath>
#include <stdexcept>

namespace nnflow {

ConstitutiveModel ConstitutiveModel::newtonian(double nu) {
  if (nu <= 0.0) throw std::invalid_argument("newtonian: nu <= 0");
  ConstitutiveModel m;
  m.family_ = Family::Newtonian;
  m.nu_ = nu;
  return m;
}

ConstitutiveModel ConstitutiveModel::carreau_yasuda(double nu, double r1, double r2, double beta1,
                                                    double beta2, double gamma1, double gamma2) {
  if (nu <= 0.0 || r1 <= 1.0 || r2 <= 1.0 || beta1 < 0.0 || beta1 > 1.0 || beta2 < 0.0 || beta2 > 1.0 ||
      gamma1 < 0.0 || gamma2 < 0.0)
    throw std::invalid_argument("carreau_yasuda: parameter out of range");
  ConstitutiveModel m;
  m.family_ = Family::CarreauYasuda;
  m.nu_ = nu;
  m.r1_ = r1;
  m.r2_ = r2;
  m.beta1_ = beta1;
  m.beta2_ = beta2;
  m.gamma1_ = gamma1;
  m.gamma2_ = gamma2;
  return m;
}

ConstitutiveModel ConstitutiveModel::bingham_be(double nu, double tau_y, double eps) {
  if (nu <= 0.0 || tau_y < 0.0 || eps <= 0.0) throw std::invalid_argument("bingham_be: parameter out of range");
  ConstitutiveModel m;
  m.family_ = Family::BinghamBE;
  m.nu_ = nu;
  m.tau_y_ = tau_y;
  m.eps_ = eps;
  return m;
}

ConstitutiveModel ConstitutiveModel::bingham_papanastasiou(double nu, double tau_y, double eps) {
  if (nu <= 0.0 || tau_y < 0.0 || eps <= 0.0)
    throw std::invalid_argument("bingham_papanastasiou: parameter out of range");
  ConstitutiveModel m;
  m.family_ = Family::BinghamPapanastasiou;
  m.nu_ = nu;
  m.tau_y_ = tau_y;
  m.eps_ = eps;
  return m;
}

ConstitutiveModel ConstitutiveModel::activated_euler(double nu, double tau_y, double eps) {
  if (nu <= 0.0 || tau_y < 0.0 || eps <= 0.0) throw std::invalid_argument("activated_euler: parameter out of range");
  ConstitutiveModel m;
  m.family_ = Family::ActivatedEuler;
  m.nu_ = nu;
  m.tau_y_ = tau_y;
  m.eps_ = eps;
  return m;
}

ConstitutiveModel ConstitutiveModel::euler_power_law(double nu, double r, double tau_y, double eps) {
  if (nu <= 0.0 || r <= 1.0 || tau_y < 0.0 || eps <= 0.0)
    throw std::invalid_argument("euler_power_law: parameter out of range");
  ConstitutiveModel m;
  m.family_ = Family::EulerPowerLaw;
  m.nu_ = nu;
  m.r_ = r;
  m.tau_y_ = tau_y;
  m.eps_ = eps;
  return m;
}

std::string ConstitutiveModel::name() const {
  switch (family_) {
    case Family::Newtonian: return "newtonian";
    case Family::CarreauYasuda: return "carreau-yasuda";
    case Family::BinghamBE: return "bingham-be";
    case Family::BinghamPapanastasiou: return "bingham-papanastasiou";
    case Family::ActivatedEuler: return "activated-euler";
    case Family::EulerPowerLaw: return "euler-power-law";
  }
  return {};
}

void ConstitutiveModel::set_eps(double eps) {
  if (eps <= 0.0) throw std::invalid_argument("set_eps: eps <= 0");
  eps_ = eps;
}

void ConstitutiveModel::set_nu(double nu) {
  if (nu <= 0.0) throw std::invalid_argument("set_nu: nu <= 0");
  nu_ = nu;
}

void ConstitutiveModel::set_gamma2(double g2) {
  if (g2 < 0.0) throw std::invalid_argument("set_gamma2: gamma2 < 0");
  gamma2_ = g2;
}

void ConstitutiveModel::set_r(double r) {
  if (r <= 1.0) throw std::invalid_argument("set_r: r <= 1");
  r_ = r;
}

ConstitutiveModel::Coeffs ConstitutiveModel::coeffs(double s2, double d2) const {
  Coeffs c;
  switch (family_) {
    case Family::Newtonian:
      c.ac = 1.0;
      c.bc = 1.0 / (2.0 * nu_);
      break;
    case Family::CarreauYasuda: {
      const double e1 = 0.5 * (r1_ - 2.0);
      const double e2 = (2.0 - r2_) / (2.0 * (r2_ - 1.0));
      const double t1 = 1.0 + gamma1_ * d2;
      const double t2 = 1.0 + gamma2_ * s2;
      c.ac = beta1_ + (1.0 - beta1_) * std::pow(t1, e1);
      c.bc = (beta2_ + (1.0 - beta2_) * std::pow(t2, e2)) / (2.0 * nu_);
      c.dac_dd = (1.0 - beta1_) * e1 * gamma1_ * std::pow(t1, e1 - 1.0);
      c.dbc_ds = (1.0 - beta2_) * e2 * gamma2_ * std::pow(t2, e2 - 1.0) / (2.0 * nu_);
      break;
    }
    case Family::BinghamBE: {
      const double m = std::sqrt(4.0 * nu_ * nu_ * d2 + eps_ * eps_);
      c.ac = 2.0 * nu_ * (tau_y_ + m);
      c.bc = m;
      c.dac_dd = 4.0 * nu_ * nu_ * nu_ / m;
      c.dbc_dd = 2.0 * nu_ * nu_ / m;
      break;
    }
    case Family::BinghamPapanastasiou: {
      const double q = std::sqrt(d2);
      const double E = std::exp(-q / eps_);
      c.bc = 1.0;
      if (q < 1e-8) {
        // Taylor replacement of (tau_y/q)(1 - exp(-q/eps)); the rank-one
        // derivative term is O(q) and dropped.
        c.ac = 2.0 * nu_ * (1.0 - E) + tau_y_ / eps_ * (1.0 - 0.5 * q / eps_);
        c.dac_dd = 0.0;
      } else {
        c.ac = (2.0 * nu_ + tau_y_ / q) * (1.0 - E);
        const double fprime = 2.0 * nu_ * E / eps_ + tau_y_ * (-(1.0 - E) / (q * q) + E / (q * eps_));
        c.dac_dd = fprime / (2.0 * q);
      }
      break;
    }
    case Family::ActivatedEuler: {
      const double w = eps_ * eps_ + s2;
      c.ac = 1.0;
      c.bc = 1.0 / (2.0 * nu_) + tau_y_ / std::sqrt(w);
      c.dbc_ds = -0.5 * tau_y_ * std::pow(w, -1.5);
      break;
    }
    case Family::EulerPowerLaw: {
      const double rp = r_ / (r_ - 1.0);
      const double epw = 0.5 * (rp - 2.0);
      const double pref = std::pow(2.0 * nu_, -(rp - 1.0));
      const double sb = epw < 0.0 ? std::max(s2, 1e-28) : s2;   // keep bc finite at S = 0
      const double sd = std::max(s2, 1e-28);                    // derivative-only guard
      const double w = eps_ * eps_ + s2;
      c.ac = 1.0;
      c.bc = pref * std::pow(sb, epw) + tau_y_ / std::sqrt(w);
      c.dbc_ds = pref * epw * std::pow(sd, epw - 1.0) - 0.5 * tau_y_ * std::pow(w, -1.5);
      break;
    }
  }
  return c;
}

SymT ConstitutiveModel::eval_G(const SymT& S, const SymT& D) const {
  const Coeffs c = coeffs(norm2(S), norm2(D));
  return c.ac * D - c.bc * S;
}

void ConstitutiveModel::eval_dG(const SymT& S, const SymT& D, Mat2& dG_dS, Mat2& dG_dD) const {
  const Coeffs c = coeffs(norm2(S), norm2(D));
  const Eigen::Vector2d Sv = S.vec(), Dv = D.vec();
  // dG/dD H = ac H + 2 (D:H) (dac_dd D - dbc_dd S); (D:H) = 2 Dv . Hv.
  dG_dD = c.ac * Mat2::Identity() + 4.0 * (c.dac_dd * Dv - c.dbc_dd * Sv) * Dv.transpose();
  dG_dS = -c.bc * Mat2::Identity() + 4.0 * (c.dac_ds * Dv - c.dbc_ds * Sv) * Sv.transpose();
}

double ConstitutiveModel::eff_viscosity(double s2, double d2) const {
  const Coeffs c = coeffs(s2, d2);
  return 0.5 * c.ac / c.bc;
}

}  // namespace nnflow
