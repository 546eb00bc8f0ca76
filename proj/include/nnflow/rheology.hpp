#pragma once

#include <string>

#include "nnflow/tensor.hpp"

namespace nnflow {

// Implicit constitutive relation G(S, D) = ac(s, d) D - bc(s, d) S with
// s = |S|^2, d = |D|^2 (full tensor contractions). All families reduce to
// this scalar-coefficient structure; derivatives are rank-one updates of
// scaled identities in the (a, b) component basis.
class ConstitutiveModel {
 public:
  enum class Family { Newtonian, CarreauYasuda, BinghamBE, BinghamPapanastasiou, ActivatedEuler, EulerPowerLaw };

  struct Coeffs {
    double ac = 0.0, bc = 0.0;
    double dac_dd = 0.0, dac_ds = 0.0;
    double dbc_dd = 0.0, dbc_ds = 0.0;
  };

  static ConstitutiveModel newtonian(double nu);
  static ConstitutiveModel carreau_yasuda(double nu, double r1, double r2, double beta1, double beta2,
                                          double gamma1, double gamma2);
  static ConstitutiveModel bingham_be(double nu, double tau_y, double eps);
  static ConstitutiveModel bingham_papanastasiou(double nu, double tau_y, double eps);
  static ConstitutiveModel activated_euler(double nu, double tau_y, double eps);
  static ConstitutiveModel euler_power_law(double nu, double r, double tau_y, double eps);

  Family family() const { return family_; }
  double nu() const { return nu_; }
  double eps() const { return eps_; }
  std::string name() const;

  // Continuation hooks.
  void set_eps(double eps);
  void set_nu(double nu);
  void set_gamma2(double g2);
  void set_r(double r);

  Coeffs coeffs(double s2, double d2) const;
  SymT eval_G(const SymT& S, const SymT& D) const;
  // Component-space derivative maps: dG_dS and dG_dD as 2x2 matrices acting
  // on (a, b) vectors.
  void eval_dG(const SymT& S, const SymT& D, Mat2& dG_dS, Mat2& dG_dD) const;
  // Effective viscosity ac / (2 bc) at the given state.
  double eff_viscosity(double s2, double d2) const;

 private:
  Family family_ = Family::Newtonian;
  double nu_ = 1.0;
  double r1_ = 2.0, r2_ = 2.0, beta1_ = 1.0, beta2_ = 1.0, gamma1_ = 0.0, gamma2_ = 0.0;
  double tau_y_ = 0.0, eps_ = 0.0, r_ = 2.0;
};

}  // namespace nnflow
