#include "ndlab/bounds.hpp"

#include "csv.hpp"
#include "ndlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ndlab {

namespace {

[[noreturn]] void domain(const std::string& msg) { throw Error(ErrorCode::Domain, msg); }

void require_positive(const Rational& v, const char* name) {
  if (v <= 0) domain(std::string(name) + " must be positive");
}

std::int64_t ceil64(const Rational& r) { return to_int64(ceil(r)); }
std::int64_t floor64(const Rational& r) { return to_int64(floor(r)); }

}  // namespace

Rational bound_unidirectional(const Rational& gamma, const Rational& beta, const Rational& omega) {
  if (gamma <= 0 || gamma > 1) domain("gamma must lie in (0, 1]");
  require_positive(beta, "beta");
  require_positive(omega, "omega");
  return Rational(ceil(1 / gamma)) * omega / beta;
}

Rational symmetric_latency_at_k(std::int64_t k, const Rational& eta, const Rational& omega, const Rational& alpha) {
  Rational den = eta * k - 1;
  if (k < 1 || den <= 0) domain("k * eta must exceed 1");
  return Rational(k) * k * omega * alpha / den;
}

SymmetricBound bound_symmetric(const Rational& eta, const Rational& omega, const Rational& alpha) {
  require_positive(eta, "eta");
  require_positive(omega, "omega");
  require_positive(alpha, "alpha");
  const std::int64_t kb = floor64(2 / eta);
  if (kb < 1) domain("floor(2/eta) must be at least 1");
  const std::int64_t ka = ceil64(2 / eta);
  Rational a = symmetric_latency_at_k(ka, eta, omega, alpha);
  Rational b = symmetric_latency_at_k(kb, eta, omega, alpha);
  SymmetricBound r;
  if (a <= b) {
    r.latency = a;
    r.branch = 'A';
    r.k = ka;
  } else {
    r.latency = b;
    r.branch = 'B';
    r.k = kb;
  }
  r.gamma_o = rat(1, r.k);
  return r;
}

Rational bound_symmetric_approx(const Rational& eta, const Rational& omega, const Rational& alpha) {
  require_positive(eta, "eta");
  return 4 * alpha * omega / (eta * eta);
}

ChannelBound bound_channel_constrained(const Rational& eta, const Rational& beta_m, const Rational& omega,
                                       const Rational& alpha) {
  require_positive(beta_m, "beta_m");
  if (eta <= alpha * beta_m) {
    throw Error(ErrorCode::Infeasible, "eta must exceed alpha * beta_m: no time is left for reception");
  }
  ChannelBound r;
  r.symmetric = bound_symmetric(eta, omega, alpha);
  // Ties go to the unconstrained case.
  if (eta <= r.symmetric.gamma_o + alpha * beta_m) {
    r.which = 1;
    r.latency = r.symmetric.latency;
  } else {
    r.which = 2;
    r.latency = Rational(ceil(1 / (eta - alpha * beta_m))) * omega / beta_m;
  }
  return r;
}

AsymmetricBound bound_asymmetric(const Rational& eta_e, const Rational& eta_f, const Rational& omega,
                                 const Rational& alpha) {
  require_positive(eta_e, "eta_E");
  require_positive(eta_f, "eta_F");
  require_positive(omega, "omega");
  require_positive(alpha, "alpha");
  if (eta_e > 2 || eta_f > 2) domain("duty cycles above 2 leave no valid split");
  AsymmetricBound r;
  r.latency = 4 * alpha * omega / (eta_e * eta_f);
  auto integral = [](const Rational& x) { return boost::multiprecision::denominator(x) == 1; };
  r.tight = integral(2 / eta_e) && integral(2 / eta_f);
  r.beta_e = eta_e / (2 * alpha);
  r.gamma_e = eta_e / 2;
  r.beta_f = eta_f / (2 * alpha);
  r.gamma_f = eta_f / 2;
  return r;
}

MutualExclusiveBound bound_mutual_exclusive(const Rational& eta, const Rational& omega, const Rational& alpha) {
  require_positive(eta, "eta");
  require_positive(omega, "omega");
  require_positive(alpha, "alpha");
  const std::int64_t kb = floor64(1 / eta);
  if (kb < 1) domain("floor(1/eta) must be at least 1");
  const std::int64_t ka = ceil64(1 / eta);
  auto at = [&](std::int64_t k) {
    Rational den = eta * k - rat(1, 2);
    if (den <= 0) domain("k * eta must exceed 1/2");
    return Rational(k) * k * omega * alpha / den;
  };
  Rational a = at(ka);
  Rational b = at(kb);
  MutualExclusiveBound r;
  if (a <= b) {
    r.latency = a;
    r.branch = 'A';
    r.k = ka;
  } else {
    r.latency = b;
    r.branch = 'B';
    r.k = kb;
  }
  return r;
}

double collision_probability(std::int64_t senders, double beta) {
  if (senders < 1) domain("S must be at least 1");
  if (!(beta >= 0 && beta <= 1)) domain("beta must lie in [0, 1]");
  return 1.0 - std::exp(-2.0 * static_cast<double>(senders - 1) * beta);
}

double max_beta_for_collision(std::int64_t senders, double p_max) {
  if (senders < 1) domain("S must be at least 1");
  if (!(p_max > 0 && p_max < 1)) domain("collision probability limit must lie in (0, 1)");
  if (senders == 1) return 1.0;
  return std::min(1.0, -std::log1p(-p_max) / (2.0 * static_cast<double>(senders - 1)));
}

Rational bound_relaxed(const Rational& gamma, const Rational& beta, const Rational& omega, const Rational& d_otx,
                       const Rational& d_orx, const RelaxedFlags& flags) {
  if (gamma <= 0 || gamma > 1) domain("gamma must lie in (0, 1]");
  require_positive(beta, "beta");
  require_positive(omega, "omega");
  if (d_otx < 0 || d_orx < 0) domain("overheads must be non-negative");
  if (boost::multiprecision::numerator(gamma) != 1) domain("gamma must be of the form 1/k");
  // Numerator over beta*gamma: omega, plus beta*omega for a shortened window,
  // plus the switching overheads; the received beacon adds omega on top.
  Rational num = omega;
  if (flags.contained) num += beta * omega;
  if (flags.overheads) num += d_otx + beta * d_orx;
  Rational l = num / (beta * gamma);
  if (flags.count_first) l += omega;
  return l;
}

namespace {

template <typename Fn>
void deviation_grid(const Rational& lo, const Rational& hi, std::int64_t beta_steps, Fn&& fn) {
  if (lo <= 0 || hi < lo || hi > 1) domain("grid bounds must satisfy 0 < lo <= hi <= 1");
  if (beta_steps < 1) domain("need at least one beta step");
  const std::int64_t k_min = ceil64(1 / hi);
  const std::int64_t k_max = floor64(1 / lo);
  if (k_min > k_max) domain("no gamma of the form 1/k inside the grid");
  for (std::int64_t i = 0; i <= beta_steps; ++i) {
    Rational beta = lo + (hi - lo) * i / beta_steps;
    for (std::int64_t k = k_min; k <= k_max; ++k) fn(beta, rat(1, k));
  }
}

Rational deviation(const Rational& beta, const Rational& gamma, const Rational& omega, const Rational& d_otx,
                   const Rational& d_orx) {
  Rational li = bound_unidirectional(gamma, beta, omega);
  Rational lr = bound_relaxed(gamma, beta, omega, d_otx, d_orx);
  return (lr - li) / li;
}

}  // namespace

DeviationRange relaxed_deviation_range(const Rational& lo, const Rational& hi, std::int64_t beta_steps,
                                       const Rational& omega, const Rational& d_otx, const Rational& d_orx) {
  DeviationRange r;
  r.min = std::numeric_limits<double>::infinity();
  r.max = -r.min;
  deviation_grid(lo, hi, beta_steps, [&](const Rational& beta, const Rational& gamma) {
    double d = to_double(deviation(beta, gamma, omega, d_otx, d_orx));
    r.min = std::min(r.min, d);
    r.max = std::max(r.max, d);
    ++r.points;
  });
  return r;
}

std::string relaxed_deviation_csv(const Rational& lo, const Rational& hi, std::int64_t beta_steps,
                                  const Rational& omega, const Rational& d_otx, const Rational& d_orx) {
  csv::Writer w;
  w.row("beta", "gamma", "L_ideal", "L_relaxed", "relative_deviation");
  deviation_grid(lo, hi, beta_steps, [&](const Rational& beta, const Rational& gamma) {
    Rational li = bound_unidirectional(gamma, beta, omega);
    Rational lr = bound_relaxed(gamma, beta, omega, d_otx, d_orx);
    w.row(to_double(beta), to_double(gamma), to_double(li), to_double(lr), to_double((lr - li) / li));
  });
  return w.str();
}

Rational bound_slotted_full_duplex(const Rational& eta, const Rational& omega, const Rational& alpha) {
  require_positive(eta, "eta");
  return omega * (1 + 2 * alpha + alpha * alpha) / (eta * eta);
}

Rational bound_slotted_two_beacon(const Rational& eta, const Rational& omega, const Rational& alpha) {
  require_positive(eta, "eta");
  return omega * (rat(1, 2) + 2 * alpha + 2 * alpha * alpha) / (eta * eta);
}

Rational bound_slotted_channel(const Rational& eta, const Rational& beta, const Rational& omega,
                               const Rational& alpha) {
  require_positive(beta, "beta");
  Rational den = eta * beta - alpha * beta * beta;
  if (den <= 0) domain("eta*beta - alpha*beta^2 must be positive (beta < eta/alpha)");
  return omega / den;
}

SlottedProtocol parse_slotted_protocol(const std::string& name) {
  if (name == "diffcodes" || name == "diffcode") return SlottedProtocol::Diffcodes;
  if (name == "disco") return SlottedProtocol::Disco;
  if (name == "searchlight_s" || name == "searchlight") return SlottedProtocol::SearchlightS;
  if (name == "uconnect") return SlottedProtocol::UConnect;
  throw Error(ErrorCode::InvalidArgument, "unknown slotted protocol '" + name + "'");
}

const char* to_string(SlottedProtocol p) {
  switch (p) {
    case SlottedProtocol::Diffcodes: return "diffcodes";
    case SlottedProtocol::Disco: return "disco";
    case SlottedProtocol::SearchlightS: return "searchlight_s";
    case SlottedProtocol::UConnect: return "uconnect";
  }
  return "?";
}

double slotted_protocol_latency(SlottedProtocol p, double eta, double beta, double omega, double alpha) {
  const double den = eta * beta - alpha * beta * beta;
  if (!(beta > 0) || !(den > 0)) domain("eta*beta - alpha*beta^2 must be positive");
  switch (p) {
    case SlottedProtocol::Diffcodes: return omega / den;
    case SlottedProtocol::Disco: return 8 * omega / den;
    case SlottedProtocol::SearchlightS: return 2 * omega / den;
    case SlottedProtocol::UConnect: {
      double root = std::sqrt(omega * omega * (8 * eta - 8 * alpha * beta + 9));
      double top = 3 * omega + root;
      return top * top / (8 * omega * den);
    }
  }
  return 0;
}

Rational pi0m_latency(std::int64_t m, const Rational& omega, const Rational& eta, const Rational& alpha) {
  if (m < 1) domain("M must be at least 1");
  require_positive(omega, "omega");
  Rational den = eta * (m + 1) - 1;
  if (den <= 0) domain("eta * (M+1) must exceed 1");
  return alpha * omega * (m + 1) * (m + 1) / den;
}

Rational pi0m_latency_relaxed(std::int64_t m, const Rational& omega, const Rational& eta, const Rational& alpha) {
  if (m < 1) domain("M must be at least 1");
  require_positive(omega, "omega");
  Rational den = eta * (m + 1) - 1;
  if (den <= 0) domain("eta * (M+1) must exceed 1");
  // gamma = d/T_C = 1/(M+1), alpha*beta = alpha*omega/d = eta - gamma.
  Rational d = alpha * omega * (m + 1) / den;
  Rational tb = d;
  Rational tc = d * (m + 1);
  return (Rational(ceil((tc - d + omega) / tb)) + 1) * tb + omega;
}

std::vector<Pi0mPoint> pi0m_sweep(const std::vector<Rational>& etas, const Rational& omega, const Rational& alpha) {
  std::vector<Pi0mPoint> out;
  out.reserve(etas.size());
  for (const auto& eta : etas) {
    Pi0mPoint p;
    p.eta = eta;
    p.bound = bound_symmetric(eta, omega, alpha).latency;
    // Feasible M satisfy (M+1) eta > 1; the relaxed latency is unimodal
    // around 2/eta, so scan a window comfortably past it.
    const std::int64_t m_lo = std::max<std::int64_t>(1, floor64(1 / eta));
    const std::int64_t m_hi = m_lo + 2 * ceil64(2 / eta) + 4;
    bool have = false;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
      if (eta * (m + 1) <= 1) continue;
      Rational l = pi0m_latency_relaxed(m, omega, eta, alpha);
      if (!have || l < p.latency) {
        p.latency = l;
        p.best_m = m;
        have = true;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

double pi0m_nrmse(const std::vector<Pi0mPoint>& points) {
  if (points.empty()) domain("empty sweep");
  double se = 0;
  double sum = 0;
  for (const auto& p : points) {
    double diff = to_double(p.latency - p.bound);
    se += diff * diff;
    sum += to_double(p.bound);
  }
  const double n = static_cast<double>(points.size());
  return std::sqrt(se / n) / (sum / n);
}

std::vector<Rational> rational_grid(const Rational& lo, const Rational& hi, const Rational& step) {
  if (step <= 0) domain("grid step must be positive");
  if (hi < lo) domain("grid end lies before its start");
  std::vector<Rational> out;
  for (std::int64_t i = 0;; ++i) {
    Rational v = lo + step * i;
    if (v > hi) break;
    out.push_back(v);
  }
  return out;
}

std::string bounds_sweep_csv(const std::vector<Rational>& etas, const Rational& omega, const Rational& alpha,
                             const Rational& beta_m) {
  csv::Writer w;
  if (beta_m > 0) {
    w.row("eta", "symmetric", "branch", "gamma_o", "symmetric_approx", "slotted_full_duplex", "slotted_two_beacon",
          "mutual_exclusive", "channel_constrained", "channel_case", "slotted_channel");
  } else {
    w.row("eta", "symmetric", "branch", "gamma_o", "symmetric_approx", "slotted_full_duplex", "slotted_two_beacon",
          "mutual_exclusive");
  }
  for (const auto& eta : etas) {
    auto sym = bound_symmetric(eta, omega, alpha);
    std::string me;
    if (eta <= 1) me = csv::num(to_double(bound_mutual_exclusive(eta, omega, alpha).latency));
    std::string branch(1, sym.branch);
    if (beta_m > 0) {
      std::string cc, which, sc;
      if (eta > alpha * beta_m) {
        auto c = bound_channel_constrained(eta, beta_m, omega, alpha);
        cc = csv::num(to_double(c.latency));
        which = std::to_string(c.which);
        sc = csv::num(to_double(bound_slotted_channel(eta, beta_m, omega, alpha)));
      }
      w.row(to_double(eta), to_double(sym.latency), branch, to_double(sym.gamma_o),
            to_double(bound_symmetric_approx(eta, omega, alpha)), to_double(bound_slotted_full_duplex(eta, omega, alpha)),
            to_double(bound_slotted_two_beacon(eta, omega, alpha)), me, cc, which, sc);
    } else {
      w.row(to_double(eta), to_double(sym.latency), branch, to_double(sym.gamma_o),
            to_double(bound_symmetric_approx(eta, omega, alpha)), to_double(bound_slotted_full_duplex(eta, omega, alpha)),
            to_double(bound_slotted_two_beacon(eta, omega, alpha)), me);
    }
  }
  return w.str();
}

}  // namespace ndlab
