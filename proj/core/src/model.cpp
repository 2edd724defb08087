#include "duet/model.hpp"

#include <cmath>
#include <string>

namespace duet {

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
  s(0, 1) = 1.0;
  s(1, 0) = -1.0;
  s(2, 3) = 1.0;
  s(3, 2) = -1.0;
  return s;
}

ValidatedParams validate_params(const SystemParams& p) {
  if (!(p.omega1 > 0.0) || !(p.omega2 > 0.0)) {
    throw NonPositiveFrequency("oscillator frequencies must be positive, got omega1=" +
                               std::to_string(p.omega1) + " omega2=" + std::to_string(p.omega2));
  }
  if (!(std::abs(p.lambda) < p.omega1 * p.omega2)) {
    throw UnstablePotential("|lambda| = " + std::to_string(std::abs(p.lambda)) +
                            " >= omega1*omega2 = " + std::to_string(p.omega1 * p.omega2) +
                            ": lower eigenfrequency would be imaginary");
  }
  return ValidatedParams(p);
}

NormalModeData normal_modes(const ValidatedParams& p) {
  const double w1sq = p.omega1() * p.omega1();
  const double w2sq = p.omega2() * p.omega2();
  const double lam = p.lambda();

  NormalModeData m;
  m.theta = 0.5 * std::atan2(2.0 * lam, w2sq - w1sq);

  const double mean = 0.5 * (w1sq + w2sq);
  const double split = 0.5 * std::sqrt(4.0 * lam * lam + (w2sq - w1sq) * (w2sq - w1sq));
  m.omega_plus = std::sqrt(mean + split);
  m.omega_minus = std::sqrt(mean - split);

  const double c = std::cos(m.theta);
  const double s = std::sin(m.theta);
  // row 0: Q- = c x1 - s x2, row 1: Q+ = s x1 + c x2
  m.rotation << c, -s, s, c;
  return m;
}

CovarianceMatrix tms_covariance(double r, double omega_ref) {
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  CovarianceMatrix sigma = CovarianceMatrix::Zero();
  // x+ squeezed, x- stretched; in the local basis the cross covariances pick
  // up -sinh for positions and +sinh for momenta.
  sigma(0, 0) = sigma(2, 2) = ch / (2.0 * omega_ref);
  sigma(1, 1) = sigma(3, 3) = omega_ref * ch / 2.0;
  sigma(0, 2) = sigma(2, 0) = -sh / (2.0 * omega_ref);
  sigma(1, 3) = sigma(3, 1) = omega_ref * sh / 2.0;
  return sigma;
}

} // namespace duet
