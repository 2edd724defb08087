#ifndef DUET_GENERATOR_HPP
#define DUET_GENERATOR_HPP

#include <functional>

#include <Eigen/Dense>

#include "duet/bath.hpp"
#include "duet/model.hpp"

namespace duet {

/// How the two oscillators couple to their environment(s):
///  - Separate: each position to its own (identical, uncorrelated) bath;
///  - Common: both to one bath through x1 + x2;
///  - WeightedCommon{c1, c2}: one bath through c1 x1 + c2 x2 (signs allowed).
struct BathTopology {
  enum class Kind { Separate, Common, WeightedCommon };
  Kind kind = Kind::Separate;
  double c1 = 1.0;
  double c2 = 1.0;

  static BathTopology separate() { return {Kind::Separate, 1.0, 1.0}; }
  static BathTopology common() { return {Kind::Common, 1.0, 1.0}; }
  static BathTopology weighted_common(double c1, double c2);

  /// 2x2 bath-correlation weight matrix kappa: the master-equation term for
  /// the pair (x_l, x_k-evolved) carries kappa_lk. Identity for separate
  /// baths, the rank-one outer product c c^T for a (weighted) common bath.
  Eigen::Matrix2d coupling_weights() const;
};

/// Drift and inhomogeneity of the second-moment flow
///   d sigma/dt = M sigma + sigma M^T + N
/// in the (x1, p1, x2, p2) ordering. With all bath coefficients zero, M is
/// the Hamiltonian symplectic drift and N = 0.
struct MomentGenerator {
  Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d N = Eigen::Matrix4d::Zero();
  bool time_dependent = false;
  /// Set only when time_dependent; must be a pure function of t.
  std::function<void(double, Eigen::Matrix4d&, Eigen::Matrix4d&)> eval_at;

  void eval(double t, Eigen::Matrix4d& m, Eigen::Matrix4d& n) const {
    if (time_dependent) {
      eval_at(t, m, n);
    } else {
      m = M;
      n = N;
    }
  }
};

/// Generic assembler: one routine emits the moment flow for any coupling
/// weight matrix; the separate- and common-bath equation sets are the
/// kappa = identity and kappa = rank-one specializations.
MomentGenerator build_generator(const CoeffSet& c, const ValidatedParams& p,
                                const BathTopology& topology);

/// Separate baths (kappa = identity).
MomentGenerator build_separate(const CoeffSet& c, const ValidatedParams& p);

/// Common bath; w must be Common or WeightedCommon.
MomentGenerator build_common(const CoeffSet& c, const ValidatedParams& p,
                             const BathTopology& w);

/// Time-dependent flow fed by a coefficient provider (non-Markovian path).
MomentGenerator build_time_dependent(const CoeffProvider& coeffs, const ValidatedParams& p,
                                     const BathTopology& topology);

} // namespace duet

#endif
