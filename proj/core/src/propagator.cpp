#include "duet/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace duet {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// difference 5th - 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

using M4 = Eigen::Matrix4d;

struct Rhs {
  const MomentGenerator* g;
  mutable M4 M, N; // scratch for the time-dependent path

  Rhs(const MomentGenerator& gen) : g(&gen) {
    if (!gen.time_dependent) {
      M = gen.M;
      N = gen.N;
    }
  }

  M4 operator()(double t, const M4& y) const {
    if (g->time_dependent) g->eval(t, M, N);
    return M * y + y * M.transpose() + N;
  }
};

double error_norm(const M4& err, const M4& y0, const M4& y1, double atol, double rtol) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double sc = atol + rtol * std::max(std::abs(y0(i, j)), std::abs(y1(i, j)));
      const double e = err(i, j) / sc;
      sum += e * e;
    }
  }
  return std::sqrt(sum / 16.0);
}

} // namespace

class Dopri5 {
public:
  static void append_piece(DenseOutput& d, double t, double h, const M4& y0, const M4& y1,
                           const M4& k1, const M4& k3, const M4& k4, const M4& k5,
                           const M4& k6, const M4& k7) {
    DenseOutput::Piece p;
    p.t = t;
    p.h = h;
    const M4 dy = y1 - y0;
    p.r1 = y0;
    p.r2 = dy;
    p.r3 = h * k1 - dy;
    p.r4 = dy - h * k7 - p.r3;
    p.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    d.pieces_.push_back(std::move(p));
  }
  static void set_span(DenseOutput& d, double t0, double t1) {
    d.t0_ = t0;
    d.t1_ = t1;
  }
};

CovarianceMatrix DenseOutput::eval(double t) const {
  if (pieces_.empty()) throw Error("dense output is empty");
  t = std::clamp(t, t0_, t1_);
  // first piece with t < piece.t + piece.h
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double v, const Piece& p) { return v < p.t + p.h; });
  if (it == pieces_.end()) --it;
  const Piece& p = *it;
  const double th = (t - p.t) / p.h;
  const double th1 = 1.0 - th;
  return p.r1 + th * (p.r2 + th1 * (p.r3 + th * (p.r4 + th1 * p.r5)));
}

Trajectory evolve(const MomentGenerator& g, const CovarianceMatrix& sigma0, double horizon,
                  double sample_dt, const IntegratorOptions& opts) {
  if (!(horizon > 0.0)) throw Error("horizon must be > 0");
  if (!(sample_dt > 0.0)) throw Error("sample_dt must be > 0");

  const Rhs rhs(g);
  Trajectory traj;
  auto dense = std::make_shared<DenseOutput>();

  M4 y = 0.5 * (sigma0 + sigma0.transpose());
  double t = 0.0;

  // initial step: conservative fraction of the fastest timescale
  double h = opts.initial_step;
  if (h <= 0.0) {
    M4 m, n;
    g.eval(0.0, m, n);
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
    h = 1e-2 / scale;
  }
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
  h = std::min(h, horizon);

  M4 k1 = rhs(t, y), k2, k3, k4, k5, k6, k7;

  const double hmin_floor = 1e-14 * horizon;
  while (t < horizon) {
    if (traj.stats.accepted + traj.stats.rejected >= opts.max_steps) {
      throw IntegrationError("step budget exhausted at t = " + std::to_string(t));
    }
    if (h < hmin_floor || t + h == t) {
      throw StepSizeUnderflow("step size underflow at t = " + std::to_string(t));
    }
    bool last = false;
    if (t + h >= horizon) {
      h = horizon - t;
      last = true;
    }

    k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const M4 y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = rhs(t + h, y1); // FSAL

    const M4 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double enorm = error_norm(err, y, y1, opts.atol, opts.rtol);

    if (!y1.allFinite()) {
      throw NonFiniteState("state became non-finite at t = " + std::to_string(t));
    }

    if (enorm <= 1.0) {
      if (opts.store_dense) {
        Dopri5::append_piece(*dense, t, h, y, y1, k1, k3, k4, k5, k6, k7);
      }
      t = last ? horizon : t + h;
      y = 0.5 * (y1 + y1.transpose());
      k1 = k7;
      traj.stats.accepted++;
      traj.stats.max_error = std::max(traj.stats.max_error, enorm);
    } else {
      traj.stats.rejected++;
    }

    double fac = 0.9 * std::pow(std::max(enorm, 1e-16), -0.2);
    fac = std::clamp(fac, 0.2, 5.0);
    h *= fac;
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
  }

  Dopri5::set_span(*dense, 0.0, horizon);

  const auto n_samples = static_cast<std::size_t>(std::floor(horizon / sample_dt + 1e-9)) + 1;
  traj.times.reserve(n_samples + 1);
  traj.states.reserve(n_samples + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(0.5 * (sigma0 + sigma0.transpose()));
  for (std::size_t i = 1; i < n_samples; ++i) {
    const double ts = static_cast<double>(i) * sample_dt;
    traj.times.push_back(ts);
    M4 s = dense->eval(ts);
    traj.states.push_back(0.5 * (s + s.transpose()));
  }
  if (traj.times.back() < horizon - 1e-12 * horizon) {
    traj.times.push_back(horizon);
    traj.states.push_back(y);
  } else {
    traj.states.back() = y;
    traj.times.back() = horizon;
  }

  if (opts.store_dense) traj.dense = std::move(dense);
  return traj;
}

CovarianceMatrix steady_state(const MomentGenerator& g) {
  if (g.time_dependent) throw Error("steady_state requires a time-independent generator");

  const Eigen::EigenSolver<M4> es(g.M);
  const double max_re = es.eigenvalues().real().maxCoeff();
  if (max_re >= -1e-12) {
    throw NotDissipative("drift matrix is not Hurwitz (max Re eigenvalue = " +
                         std::to_string(max_re) + ")");
  }

  // vec(M s + s M^T) = (I (x) M + M (x) I) vec(s)
  Eigen::Matrix<double, 16, 16> A = Eigen::Matrix<double, 16, 16>::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        // column-major vec: s(i,j) at index i + 4j
        A(i + 4 * j, k + 4 * j) += g.M(i, k); // M s
        A(i + 4 * j, i + 4 * k) += g.M(j, k); // s M^T
      }
    }
  }
  Eigen::Matrix<double, 16, 1> rhs;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) rhs(i + 4 * j) = -g.N(i, j);

  const Eigen::Matrix<double, 16, 1> v = A.fullPivLu().solve(rhs);
  M4 s;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) s(i, j) = v(i + 4 * j);
  return 0.5 * (s + s.transpose());
}

} // namespace duet
