#include "duet/generator.hpp"

namespace duet {

BathTopology BathTopology::weighted_common(double c1, double c2) {
  if (c1 * c1 + c2 * c2 <= 0.0) {
    throw Error("weighted common bath needs c1^2 + c2^2 > 0");
  }
  return {Kind::WeightedCommon, c1, c2};
}

Eigen::Matrix2d BathTopology::coupling_weights() const {
  Eigen::Matrix2d k;
  switch (kind) {
    case Kind::Separate:
      k.setIdentity();
      break;
    case Kind::Common:
      k.setOnes();
      break;
    case Kind::WeightedCommon:
      k << c1 * c1, c1 * c2, c1 * c2, c2 * c2;
      break;
  }
  return k;
}

namespace {

// Moment flow of the master equation
//   drho/dt = -i[H,rho] - 1/2 sum_lk { i E_lk [x_l,{x_k,rho}] + D_lk [x_l,[x_k,rho]]
//                                      + i G_lk [x_l,{p_k,rho}] - F_lk [x_l,[p_k,rho]] }
// with E = kappa eps2 etc. Taking d<A>/dt = Tr(A drho/dt) for the quadratic
// monomials gives
//   dp_a/dt drift: -(V + E)_ak x_k - G_ak p_k,
//   N_pp = sym(D), N_{x_a p_b} = F_ba / 2,
// where V is the bare potential matrix. The antisymmetric part of E (present
// for a common bath off resonance) enters the drift only.
void assemble(const CoeffSet& c, const ValidatedParams& p, const Eigen::Matrix2d& kappa,
              Eigen::Matrix4d& M, Eigen::Matrix4d& N) {
  Eigen::Matrix2d V;
  V << p.omega1() * p.omega1(), p.lambda(), p.lambda(), p.omega2() * p.omega2();

  const Eigen::Matrix2d W = V + kappa * c.eps2;
  const Eigen::Matrix2d G = kappa * c.Gamma;
  const Eigen::Matrix2d D = kappa * c.D;
  const Eigen::Matrix2d F = kappa * c.F;

  M.setZero();
  M(0, 1) = 1.0;
  M(2, 3) = 1.0;
  for (int a = 0; a < 2; ++a) {
    for (int k = 0; k < 2; ++k) {
      M(2 * a + 1, 2 * k) = -W(a, k);
      M(2 * a + 1, 2 * k + 1) = -G(a, k);
    }
  }

  N.setZero();
  for (int a = 0; a < 2; ++a) {
    for (int bq = 0; bq < 2; ++bq) {
      N(2 * a + 1, 2 * bq + 1) = 0.5 * (D(a, bq) + D(bq, a));
      N(2 * a, 2 * bq + 1) = N(2 * bq + 1, 2 * a) = 0.5 * F(bq, a);
    }
  }
}

} // namespace

MomentGenerator build_generator(const CoeffSet& c, const ValidatedParams& p,
                                const BathTopology& topology) {
  MomentGenerator g;
  assemble(c, p, topology.coupling_weights(), g.M, g.N);
  return g;
}

MomentGenerator build_separate(const CoeffSet& c, const ValidatedParams& p) {
  return build_generator(c, p, BathTopology::separate());
}

MomentGenerator build_common(const CoeffSet& c, const ValidatedParams& p,
                             const BathTopology& w) {
  if (w.kind == BathTopology::Kind::Separate) {
    throw Error("build_common requires a Common or WeightedCommon topology");
  }
  return build_generator(c, p, w);
}

MomentGenerator build_time_dependent(const CoeffProvider& coeffs, const ValidatedParams& p,
                                     const BathTopology& topology) {
  MomentGenerator g;
  g.time_dependent = true;
  const Eigen::Matrix2d kappa = topology.coupling_weights();
  const ValidatedParams params = p;
  g.eval_at = [coeffs, params, kappa](double t, Eigen::Matrix4d& M, Eigen::Matrix4d& N) {
    assemble(coeffs(t), params, kappa, M, N);
  };
  // eval() at t = 0 also fills the stored matrices for inspection
  assemble(coeffs(0.0), p, kappa, g.M, g.N);
  return g;
}

} // namespace duet
