#ifndef DUET_PROPAGATOR_HPP
#define DUET_PROPAGATOR_HPP

#include <memory>
#include <vector>

#include "duet/generator.hpp"
#include "duet/model.hpp"

namespace duet {

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  /// 0 selects an automatic initial step (bounded by 1/(10 cutoff) for
  /// time-dependent generators, which vary on the cutoff timescale near 0).
  double initial_step = 0.0;
  double max_step = 0.0; // 0 = unlimited
  long max_steps = 20000000;
  bool store_dense = true;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  double max_error = 0.0; // largest accepted scaled local error
};

/// Piecewise quartic interpolant collected from the embedded RK steps.
class DenseOutput {
public:
  CovarianceMatrix eval(double t) const;
  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }

private:
  friend class Dopri5;
  struct Piece {
    double t = 0.0, h = 0.0;
    Eigen::Matrix4d r1, r2, r3, r4, r5;
  };
  std::vector<Piece> pieces_;
  double t0_ = 0.0, t1_ = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<CovarianceMatrix> states;
  IntegrationStats stats;
  std::shared_ptr<const DenseOutput> dense; // null unless store_dense
};

/// Integrates d sigma/dt = M sigma + sigma M^T + N from sigma0 over
/// [0, horizon] with an embedded Dormand-Prince 5(4) scheme, symmetrizing the
/// state after every accepted step, and samples the dense interpolant every
/// sample_dt. Throws StepSizeUnderflow or NonFiniteState.
Trajectory evolve(const MomentGenerator& g, const CovarianceMatrix& sigma0, double horizon,
                  double sample_dt, const IntegratorOptions& opts = {});

/// Fixed point of the time-independent flow, M sigma + sigma M^T + N = 0,
/// solved directly (vectorized 16x16 Lyapunov solve). Throws NotDissipative
/// when M has an eigenvalue with real part >= -1e-12.
CovarianceMatrix steady_state(const MomentGenerator& g);

} // namespace duet

#endif
