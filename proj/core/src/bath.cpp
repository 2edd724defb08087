#include "duet/bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>

namespace duet {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kZeta2 = kPi * kPi / 6.0;
constexpr double kZeta3 = 1.2020569031595942854;
constexpr double kZeta4 = kPi * kPi * kPi * kPi / 90.0;
constexpr double kZeta5 = 1.0369277551433699263;
constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::size_t kMatsubaraCap = 1000000;

double coth(double x) { return 1.0 / std::tanh(x); }

// Thermal kernel as a sum of decaying exponentials,
//   C^A(tau) = q0 e^{-L tau} + sum_n c_n e^{-nu_n tau},
// with q0 = gamma L^2 cot(L/2kT), c_n = pref nu_n/(nu_n^2 - L^2),
// pref = 4 gamma kT L^2. The cot pole at L = nu_m cancels against the m-th
// Matsubara term; L is shifted by one part in 1e6 when closer than that so
// both stay representable.
struct SeriesCtx {
  double gamma = 0.0;
  double cutoff = 0.0;
  double kT = 0.0;
  double nu1 = 0.0;
  double pref = 0.0;
  double q0 = 0.0;
};

SeriesCtx make_ctx(const BathParams& b) {
  SeriesCtx c;
  c.gamma = b.gamma;
  c.kT = b.kT;
  c.cutoff = b.cutoff;
  if (b.kT > 0.0) {
    c.nu1 = 2.0 * kPi * b.kT;
    const double m = std::round(c.cutoff / c.nu1);
    if (m >= 1.0 && std::abs(c.cutoff - m * c.nu1) < 1e-6 * c.cutoff) {
      c.cutoff = m * c.nu1 * (1.0 + 1e-6);
    }
    c.pref = 4.0 * b.gamma * b.kT * c.cutoff * c.cutoff;
    c.q0 = b.gamma * c.cutoff * c.cutoff / std::tan(c.cutoff / (2.0 * b.kT));
  }
  return c;
}

// Int_0^t e^{-mu tau} cos(W tau) dtau, written to avoid cancellation for
// small mu t. t = inf gives the limit.
double cosint_exp(double mu, double W, double t) {
  const double den = mu * mu + W * W;
  if (t == kInf) return mu / den;
  const double em = std::exp(-mu * t);
  const double s = std::sin(W * t);
  const double half = std::sin(0.5 * W * t);
  // 1 - em*cos(Wt) = -expm1(-mu t) + em * 2 sin^2(Wt/2)
  const double one_minus = -std::expm1(-mu * t) + em * 2.0 * half * half;
  return (mu * one_minus + W * em * s) / den;
}

// Int_0^t e^{-mu tau} sin(W tau) dtau.
double sinint_exp(double mu, double W, double t) {
  const double den = mu * mu + W * W;
  if (t == kInf) return W / den;
  const double em = std::exp(-mu * t);
  const double co = std::cos(W * t);
  const double s = std::sin(W * t);
  return (W * (1.0 - em * co) - mu * em * s) / den;
}

// sum_{n>=1} c_n Int_0^t e^{-nu_n tau} cos(W tau) dtau, accelerated by
// subtracting the pref/nu^2 and pref(L^2-W^2)/nu^4 asymptotes whose sums are
// known zeta values. Works for t = inf as well.
double matsubara_cos_sum(const SeriesCtx& c, double W, double t) {
  const double L2 = c.cutoff * c.cutoff;
  const double a1_total = c.pref * kZeta2 / (c.nu1 * c.nu1);
  const double a2_total =
      c.pref * (L2 - W * W) * kZeta4 / (c.nu1 * c.nu1 * c.nu1 * c.nu1);
  double acc = 0.0;
  const double tol = 1e-15 * (std::abs(c.pref) / (c.nu1 * c.nu1) + std::abs(c.q0) + c.gamma);
  int below = 0;
  for (std::size_t n = 1; n <= kMatsubaraCap; ++n) {
    const double nu = static_cast<double>(n) * c.nu1;
    const double nu2 = nu * nu;
    const double cn = c.pref * nu / (nu2 - L2);
    const double term =
        cn * cosint_exp(nu, W, t) - c.pref / nu2 - c.pref * (L2 - W * W) / (nu2 * nu2);
    acc += term;
    if (n >= 8 && nu * t >= 30.0) {
      below = (std::abs(term) <= tol) ? below + 1 : 0;
      if (below >= 2) return acc + a1_total + a2_total;
    }
  }
  throw MatsubaraNonconvergence("matsubara cosine sum did not converge (W=" +
                                std::to_string(W) + ", t=" + std::to_string(t) + ")");
}

// sum_{n>=1} c_n Int_0^t e^{-nu_n tau} sin(W tau) dtau, same scheme with
// zeta(3)/zeta(5) asymptotes.
double matsubara_sin_sum(const SeriesCtx& c, double W, double t) {
  const double L2 = c.cutoff * c.cutoff;
  const double nu13 = c.nu1 * c.nu1 * c.nu1;
  const double a1_total = c.pref * W * kZeta3 / nu13;
  const double a2_total = c.pref * W * (L2 - W * W) * kZeta5 / (nu13 * c.nu1 * c.nu1);
  double acc = 0.0;
  const double tol = 1e-15 * (std::abs(c.pref) / (c.nu1 * c.nu1) + std::abs(c.q0) + c.gamma);
  int below = 0;
  for (std::size_t n = 1; n <= kMatsubaraCap; ++n) {
    const double nu = static_cast<double>(n) * c.nu1;
    const double nu2 = nu * nu;
    const double cn = c.pref * nu / (nu2 - L2);
    const double term = cn * sinint_exp(nu, W, t) - c.pref * W / (nu2 * nu) -
                        c.pref * W * (L2 - W * W) / (nu2 * nu2 * nu);
    acc += term;
    if (n >= 8 && nu * t >= 30.0) {
      below = (std::abs(term) <= tol) ? below + 1 : 0;
      if (below >= 2) return acc + a1_total + a2_total;
    }
  }
  throw MatsubaraNonconvergence("matsubara sine sum did not converge (W=" +
                                std::to_string(W) + ", t=" + std::to_string(t) + ")");
}

// e^x Ei(-x) + e^{-x} Ei(x); the zero-temperature kernel is
// -(gamma L^2/pi) f(L tau). Asymptotic series beyond x = 30 (the direct
// product e^{-x} Ei(x) loses all precision there).
double ei_symmetric(double x) {
  if (x > 30.0) {
    const double ix2 = 1.0 / (x * x);
    double sum = 0.0;
    double fact = 1.0; // k!
    double pw = ix2;   // 1/x^{k+1} for odd k
    for (int k = 1; k <= 13; k += 2) {
      sum += fact * pw;
      fact *= static_cast<double>((k + 1) * (k + 2));
      pw *= ix2;
    }
    return 2.0 * sum;
  }
  return std::exp(x) * (-boost::math::expint(1, x)) + std::exp(-x) * boost::math::expint(x);
}

double kernel_ca_t0(double tau, const BathParams& b) {
  if (tau == 0.0) return kInf;
  return -(b.gamma * b.cutoff * b.cutoff / kPi) * ei_symmetric(b.cutoff * tau);
}

// Marching quadrature of Int_0^t w(tau) C^A_0(tau) dtau at kT = 0 for the
// four trig weights at both normal-mode frequencies simultaneously. The
// integrand has an integrable log singularity at tau = 0 (first panel via
// tanh_sinh); subsequent panels are narrow enough for fixed Gauss-Legendre.
struct T0March {
  double wm, wp; // frequencies
  BathParams b;
  double panel = 0.0;
  double t_cur = 0.0;
  // accumulated integrals: cos(wm), cos(wp), sin(wm), sin(wp)
  std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};

  T0March(double wminus, double wplus, const BathParams& bath)
      : wm(wminus), wp(wplus), b(bath) {
    panel = std::min(0.25 / b.cutoff, kPi / (6.0 * std::max(wp, 1e-6)));
  }

  void first_panel(double upto) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto one = [&](double w, bool sine) {
      auto f = [&](double tau) {
        const double k = kernel_ca_t0(tau, b);
        return (sine ? std::sin(w * tau) : std::cos(w * tau)) * k;
      };
      double err = 0.0, l1 = 0.0;
      const double v = ts.integrate(f, 0.0, upto, 1e-10, &err, &l1);
      if (!(err <= 1e-7 * (std::abs(l1) + b.gamma))) {
        throw QuadratureFailure("tanh_sinh panel failed near tau=0");
      }
      return v;
    };
    acc[0] += one(wm, false);
    acc[1] += one(wp, false);
    acc[2] += one(wm, true);
    acc[3] += one(wp, true);
    t_cur = upto;
  }

  void advance_to(double t) {
    if (t_cur == 0.0 && t > 0.0) first_panel(std::min(panel, t));
    using GL = boost::math::quadrature::gauss<double, 15>;
    while (t_cur < t) {
      const double a = t_cur;
      const double bnd = std::min(t, a + panel);
      const double half = 0.5 * (bnd - a);
      const double mid = 0.5 * (bnd + a);
      for (unsigned i = 0; i < GL::abscissa().size(); ++i) {
        const double xg = GL::abscissa()[i];
        const double wg = GL::weights()[i] * half;
        for (const double sgn : {1.0, -1.0}) {
          if (i == 0 && sgn < 0.0) continue; // abscissa 0 listed once
          const double tau = mid + sgn * half * xg;
          const double k = kernel_ca_t0(tau, b);
          acc[0] += wg * std::cos(wm * tau) * k;
          acc[1] += wg * std::cos(wp * tau) * k;
          acc[2] += wg * std::sin(wm * tau) * k;
          acc[3] += wg * std::sin(wp * tau) * k;
        }
      }
      t_cur = bnd;
    }
  }
};

struct Primitives {
  // values of the four primitive integrals at one frequency
  double eps, D, F, Gam;
};

Primitives markovian_primitives(double W, const BathParams& b, const SeriesCtx& c) {
  Primitives p;
  const double L = c.cutoff;
  const double L2 = L * L;
  const double den = L2 + W * W;
  p.eps = -b.gamma * L2 * L / den;
  p.Gam = b.gamma * L2 / den;
  const double J = (2.0 * b.gamma / kPi) * W * L2 / den;
  if (b.kT > 0.0) {
    p.D = 0.5 * kPi * J * coth(W / (2.0 * b.kT));
    p.F = (c.q0 * W / den + matsubara_sin_sum(c, W, kInf)) / W;
  } else {
    p.D = 0.5 * kPi * J;
    p.F = (2.0 * b.gamma * L2 / kPi) * std::log(W / L) / den;
  }
  return p;
}

Primitives finite_primitives(double W, double t, const BathParams& b, const SeriesCtx& c) {
  Primitives p;
  const double L = c.cutoff;
  const double L2 = L * L;
  p.eps = -b.gamma * L2 * cosint_exp(L, W, t);
  p.Gam = b.gamma * L2 * sinint_exp(L, W, t) / W;
  p.D = c.q0 * cosint_exp(L, W, t) + matsubara_cos_sum(c, W, t);
  p.F = (c.q0 * sinint_exp(L, W, t) + matsubara_sin_sum(c, W, t)) / W;
  return p;
}

CoeffSet::Key make_key(const NormalModeData& m, const BathParams& b) {
  return CoeffSet::Key{m.theta, m.omega_minus, m.omega_plus, b.gamma, b.cutoff, b.kT};
}

CoeffSet assemble(const NormalModeData& m, const BathParams& b, const Primitives& lo,
                  const Primitives& hi, std::optional<double> t) {
  const double c2 = std::cos(m.theta) * std::cos(m.theta);
  const double s2 = std::sin(m.theta) * std::sin(m.theta);
  const double x = 0.5 * std::sin(2.0 * m.theta);
  CoeffSet out;
  auto fill = [&](Eigen::Matrix2d& dst, double vlo, double vhi) {
    dst(0, 0) = c2 * vlo + s2 * vhi;
    dst(1, 1) = s2 * vlo + c2 * vhi;
    dst(0, 1) = dst(1, 0) = x * (vhi - vlo);
  };
  fill(out.eps2, lo.eps, hi.eps);
  fill(out.D, lo.D, hi.D);
  fill(out.F, lo.F, hi.F);
  fill(out.Gamma, lo.Gam, hi.Gam);
  out.time = t;
  out.key = make_key(m, b);
  return out;
}

} // namespace

double spectral_density(double Omega, const BathParams& b) {
  if (Omega < 0.0) {
    throw NegativeFrequency("spectral density evaluated at Omega = " + std::to_string(Omega));
  }
  const double L2 = b.cutoff * b.cutoff;
  return (2.0 * b.gamma / kPi) * Omega * L2 / (L2 + Omega * Omega);
}

std::complex<double> kernel_cc(double tau, const BathParams& b) {
  if (tau < 0.0) throw Error("kernel_cc requires tau >= 0");
  return {0.0, -b.gamma * b.cutoff * b.cutoff * std::exp(-b.cutoff * tau)};
}

double kernel_ca(double tau, const BathParams& b) {
  tau = std::abs(tau);
  if (b.kT == 0.0) return kernel_ca_t0(tau, b);
  if (tau == 0.0) return kInf;
  const SeriesCtx c = make_ctx(b);
  double acc = c.q0 * std::exp(-c.cutoff * tau);
  const double geometric = 1.0 / -std::expm1(-c.nu1 * tau);
  for (std::size_t n = 1; n <= kMatsubaraCap; ++n) {
    const double nu = static_cast<double>(n) * c.nu1;
    const double cn = c.pref * nu / (nu * nu - c.cutoff * c.cutoff);
    const double term = cn * std::exp(-nu * tau);
    acc += term;
    if (n >= 4 && std::abs(term) * geometric <= 1e-14 * std::abs(acc)) return acc;
  }
  throw MatsubaraNonconvergence("kernel_ca series did not converge at tau=" +
                                std::to_string(tau));
}

CoeffSet coeffs_nonmarkovian(double t, const NormalModeData& m, const BathParams& b) {
  if (t < 0.0) throw Error("coefficient time must be >= 0");
  if (t == 0.0) {
    CoeffSet z;
    z.time = 0.0;
    z.key = make_key(m, b);
    return z;
  }
  if (b.kT > 0.0) {
    const SeriesCtx c = make_ctx(b);
    return assemble(m, b, finite_primitives(m.omega_minus, t, b, c),
                    finite_primitives(m.omega_plus, t, b, c), t);
  }
  // kT = 0: march the quadrature to t, then attach the closed-form C^C parts.
  T0March march(m.omega_minus, m.omega_plus, b);
  march.advance_to(t);
  Primitives lo, hi;
  lo.eps = -b.gamma * b.cutoff * b.cutoff * cosint_exp(b.cutoff, m.omega_minus, t);
  hi.eps = -b.gamma * b.cutoff * b.cutoff * cosint_exp(b.cutoff, m.omega_plus, t);
  lo.Gam = b.gamma * b.cutoff * b.cutoff * sinint_exp(b.cutoff, m.omega_minus, t) / m.omega_minus;
  hi.Gam = b.gamma * b.cutoff * b.cutoff * sinint_exp(b.cutoff, m.omega_plus, t) / m.omega_plus;
  lo.D = march.acc[0];
  hi.D = march.acc[1];
  lo.F = march.acc[2] / m.omega_minus;
  hi.F = march.acc[3] / m.omega_plus;
  return assemble(m, b, lo, hi, t);
}

CoeffSet coeffs_markovian(const NormalModeData& m, const BathParams& b) {
  if (!(m.omega_minus > 0.0)) throw Error("Markovian coefficients need Omega_- > 0");
  const SeriesCtx c = make_ctx(b);
  return assemble(m, b, markovian_primitives(m.omega_minus, b, c),
                  markovian_primitives(m.omega_plus, b, c), std::nullopt);
}

CoeffSet renormalize(const CoeffSet& c, const CoeffSet& c_inf) {
  if (!(c.key == c_inf.key)) {
    throw MismatchedParams("coefficient sets come from different configurations");
  }
  if (c_inf.time.has_value()) {
    throw MismatchedParams("second argument of renormalize must be the Markovian set");
  }
  CoeffSet out = c;
  if (!c.time.has_value()) {
    out.eps2.setZero();
  } else {
    out.eps2 = c.eps2 - c_inf.eps2;
  }
  return out;
}

// ---------------------------------------------------------------------------

struct CoeffProvider::Impl {
  NormalModeData modes;
  BathParams bath;
  CoeffSet markov;
  double h = 0.0;
  double t_end = 0.0;
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  // eps11, eps12, eps22, D11, D12, D22, F11, F12, F22, G11, G12, G22
  std::vector<Spline> splines;

  CoeffSet at(double t) const {
    if (t <= 0.0) t = 0.0;
    if (t >= t_end) return markov;
    CoeffSet out;
    auto get = [&](int k) { return splines[k](t); };
    out.eps2 << get(0), get(1), get(1), get(2);
    out.D << get(3), get(4), get(4), get(5);
    out.F << get(6), get(7), get(7), get(8);
    out.Gamma << get(9), get(10), get(10), get(11);
    out.time = t;
    out.key = markov.key;
    return out;
  }
};

CoeffProvider::CoeffProvider(const NormalModeData& m, const BathParams& b, double t_table) {
  auto impl = std::make_shared<Impl>();
  impl->modes = m;
  impl->bath = b;
  impl->markov = renormalize(coeffs_markovian(m, b), coeffs_markovian(m, b));
  impl->h = std::min(1.0 / b.cutoff, 1.0 / m.omega_plus) / 20.0;
  if (t_table <= 0.0) {
    if (b.kT > 0.0) {
      t_table = 35.0 / std::min(b.cutoff, 2.0 * kPi * b.kT);
    } else {
      // algebraic 1/t^2 tail at kT = 0; truncated, see header
      t_table = 300.0;
    }
  }
  const std::size_t n = static_cast<std::size_t>(std::ceil(t_table / impl->h)) + 1;
  impl->t_end = impl->h * static_cast<double>(n - 1);

  const CoeffSet inf_raw = coeffs_markovian(m, b);
  std::array<std::vector<double>, 12> series;
  for (auto& s : series) s.resize(n);

  if (b.kT > 0.0) {
    const SeriesCtx ctx = make_ctx(b);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = impl->h * static_cast<double>(i);
      CoeffSet c = (i == 0) ? coeffs_nonmarkovian(0.0, m, b)
                            : assemble(m, b, finite_primitives(m.omega_minus, t, b, ctx),
                                       finite_primitives(m.omega_plus, t, b, ctx), t);
      c = renormalize(c, inf_raw);
      series[0][i] = c.eps2(0, 0);
      series[1][i] = c.eps2(0, 1);
      series[2][i] = c.eps2(1, 1);
      series[3][i] = c.D(0, 0);
      series[4][i] = c.D(0, 1);
      series[5][i] = c.D(1, 1);
      series[6][i] = c.F(0, 0);
      series[7][i] = c.F(0, 1);
      series[8][i] = c.F(1, 1);
      series[9][i] = c.Gamma(0, 0);
      series[10][i] = c.Gamma(0, 1);
      series[11][i] = c.Gamma(1, 1);
    }
  } else {
    T0March march(m.omega_minus, m.omega_plus, b);
    const double L2 = b.cutoff * b.cutoff;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = impl->h * static_cast<double>(i);
      march.advance_to(t);
      Primitives lo, hi;
      lo.eps = -b.gamma * L2 * cosint_exp(b.cutoff, m.omega_minus, t);
      hi.eps = -b.gamma * L2 * cosint_exp(b.cutoff, m.omega_plus, t);
      lo.Gam = b.gamma * L2 * sinint_exp(b.cutoff, m.omega_minus, t) / m.omega_minus;
      hi.Gam = b.gamma * L2 * sinint_exp(b.cutoff, m.omega_plus, t) / m.omega_plus;
      lo.D = march.acc[0];
      hi.D = march.acc[1];
      lo.F = march.acc[2] / m.omega_minus;
      hi.F = march.acc[3] / m.omega_plus;
      CoeffSet c = renormalize(assemble(m, b, lo, hi, t), inf_raw);
      series[0][i] = c.eps2(0, 0);
      series[1][i] = c.eps2(0, 1);
      series[2][i] = c.eps2(1, 1);
      series[3][i] = c.D(0, 0);
      series[4][i] = c.D(0, 1);
      series[5][i] = c.D(1, 1);
      series[6][i] = c.F(0, 0);
      series[7][i] = c.F(0, 1);
      series[8][i] = c.F(1, 1);
      series[9][i] = c.Gamma(0, 0);
      series[10][i] = c.Gamma(0, 1);
      series[11][i] = c.Gamma(1, 1);
    }
  }

  impl->splines.reserve(12);
  for (const auto& s : series) {
    impl->splines.emplace_back(s.data(), s.size(), 0.0, impl->h);
  }
  impl_ = std::move(impl);
}

CoeffSet CoeffProvider::operator()(double t) const { return impl_->at(t); }

double CoeffProvider::table_end() const { return impl_->t_end; }

const CoeffSet& CoeffProvider::markovian() const { return impl_->markov; }

} // namespace duet
