#ifndef DUET_BATH_HPP
#define DUET_BATH_HPP

#include <complex>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "duet/model.hpp"

namespace duet {

/// Ohmic bath with Lorentz-Drude cutoff, J(W) = (2 gamma / pi) W L^2 / (L^2 + W^2).
/// gamma, cutoff and kT are in units of omega1 (k_B = 1).
struct BathParams {
  double gamma = 0.0;
  double cutoff = 50.0;
  double kT = 0.0;
};

/// The sixteen master-equation coefficients at one time (or their t -> inf
/// Markovian limits, marked by an empty `time`): frequency shifts eps2,
/// diffusion D, anomalous diffusion F, damping Gamma. Index (i,j) follows the
/// oscillator labels. At t = 0 every entry vanishes; all entries are linear
/// in gamma.
struct CoeffSet {
  Eigen::Matrix2d eps2 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d D = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d F = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d Gamma = Eigen::Matrix2d::Zero();
  /// Evaluation time; std::nullopt marks the Markovian limit.
  std::optional<double> time;

  /// Configuration fingerprint used to reject mixing sets from different
  /// (system, bath) combinations.
  struct Key {
    double theta = 0.0;
    double omega_minus = 0.0;
    double omega_plus = 0.0;
    double gamma = 0.0;
    double cutoff = 0.0;
    double kT = 0.0;
    bool operator==(const Key&) const = default;
  };
  Key key;
};

/// Lorentz-Drude spectral density. Throws NegativeFrequency for Omega < 0.
double spectral_density(double Omega, const BathParams& b);

/// Antisymmetric bath kernel C^C(tau) = -i Int dW J(W) sin(W tau); purely
/// imaginary, equal to -i gamma L^2 e^{-L tau} in closed form. tau >= 0.
std::complex<double> kernel_cc(double tau, const BathParams& b);

/// Symmetric (thermal) kernel C^A(tau) = Int dW J(W) cos(W tau) coth(W/2kT).
/// Even in tau; diverges logarithmically at tau = 0. Evaluated by the
/// Matsubara pole expansion for kT > 0 and through exponential-integral
/// closed forms at kT = 0.
double kernel_ca(double tau, const BathParams& b);

/// Finite-time master-equation coefficients: each entry is the integral over
/// [0, t] of the bath kernel times the relevant trigonometric weight of the
/// normal modes. The (2,2) entries equal the (1,1) entries with theta
/// replaced by pi/2 - theta, and the off-diagonals are symmetric, by
/// construction.
CoeffSet coeffs_nonmarkovian(double t, const NormalModeData& m, const BathParams& b);

/// t -> infinity limits: D and Gamma from the delta-function part of the
/// kernel transforms, (pi/2) J(W) coth(W/2kT) and (pi/2) J(W)/W with the
/// normal-mode weights; F and eps2 from the principal-value parts, F through
/// the Matsubara expansion of coth.
CoeffSet coeffs_markovian(const NormalModeData& m, const BathParams& b);

/// Counter-term renormalization: replaces eps2(t) by eps2(t) - eps2(inf),
/// leaving D, F, Gamma untouched. In the Markovian limit the result has
/// eps2 = 0. Throws MismatchedParams when the two sets come from different
/// configurations.
CoeffSet renormalize(const CoeffSet& c, const CoeffSet& c_inf);

/// Renormalized coefficients tabulated on a uniform time grid and
/// interpolated by cubic splines; beyond the tabulated window the Markovian
/// values are returned. Immutable after construction, safe to share across
/// threads.
class CoeffProvider {
public:
  /// Tabulates [0, t_table]; if t_table <= 0 a span sufficient for the
  /// coefficients to reach their Markovian values is chosen (kT > 0 decay is
  /// exponential; at kT = 0 the algebraic tail is truncated at ~1e-5
  /// relative and the table capped at 300 time units).
  CoeffProvider(const NormalModeData& m, const BathParams& b, double t_table = 0.0);

  CoeffSet operator()(double t) const;
  double table_end() const;
  /// Markovian limit (renormalized: eps2 = 0).
  const CoeffSet& markovian() const;

private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

} // namespace duet

#endif
