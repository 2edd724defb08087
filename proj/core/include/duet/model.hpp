#ifndef DUET_MODEL_HPP
#define DUET_MODEL_HPP

#include <Eigen/Dense>

#include "duet/errors.hpp"

namespace duet {

/// 4x4 matrix of symmetrized second moments <{z_a,z_b}>/2 of
/// z = (x1, p1, x2, p2), hbar = 1. Fully specifies a zero-mean Gaussian
/// state; the vacuum symplectic eigenvalue is 1/2 in these units.
using CovarianceMatrix = Eigen::Matrix4d;

/// Symplectic form Sigma for the (x1, p1, x2, p2) ordering: [z_a, z_b] = i Sigma_ab.
Eigen::Matrix4d symplectic_form();

/// Two coupled oscillators, H = p1^2/2 + w1^2 x1^2/2 + p2^2/2 + w2^2 x2^2/2
/// + lambda x1 x2. Everything is expressed in units of omega1 (mass = 1,
/// hbar = 1); omega1 is kept as a field so the formulas stay general.
struct SystemParams {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double lambda = 0.0;
};

/// SystemParams that passed validate_params. Constructible only through it.
class ValidatedParams {
public:
  double omega1() const { return p_.omega1; }
  double omega2() const { return p_.omega2; }
  double lambda() const { return p_.lambda; }
  const SystemParams& raw() const { return p_; }

private:
  friend ValidatedParams validate_params(const SystemParams&);
  explicit ValidatedParams(const SystemParams& p) : p_(p) {}
  SystemParams p_;
};

/// Checks omega1, omega2 > 0 and |lambda| < omega1*omega2 (strict; at the
/// boundary the lower eigenfrequency vanishes and beyond it trajectories are
/// unbounded).
/// Throws NonPositiveFrequency or UnstablePotential.
ValidatedParams validate_params(const SystemParams& p);

/// Normal modes of the coupled potential. theta is the mixing angle,
///   Q+ = cos(theta) x2 + sin(theta) x1,   Q- = cos(theta) x1 - sin(theta) x2,
/// with eigenfrequencies Omega+ >= Omega- > 0. theta is computed from the
/// two-argument arctangent of (2 lambda, omega2^2 - omega1^2) halved, so it is
/// continuous through lambda = 0 for omega2 != omega1 and equals pi/4 at
/// omega1 = omega2, lambda > 0.
struct NormalModeData {
  double theta = 0.0;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  /// Orthogonal map (x1, x2) -> (Q-, Q+): row 0 = Q-, row 1 = Q+.
  Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();
};

NormalModeData normal_modes(const ValidatedParams& p);

/// Covariance matrix of the two-mode squeezed vacuum with squeezing amplitude
/// r: the collective quadrature x+ = (x1+x2)/sqrt(2) is squeezed by e^{-2r}
/// in variance and x- stretched by e^{+2r}, relative to the vacuum of two
/// modes at frequency omega_ref (conjugately for the momenta). The state is
/// pure for every r.
CovarianceMatrix tms_covariance(double r, double omega_ref = 1.0);

} // namespace duet

#endif
