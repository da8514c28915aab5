#pragma once

#include "ndlab/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Closed-form worst-case latency bounds. Every latency is expressed in the
// unit of `omega` (ticks or microseconds); rates are dimensionless.
namespace ndlab {

// ceil(1/gamma) * omega / beta
Rational bound_unidirectional(const Rational& gamma, const Rational& beta, const Rational& omega);

// k^2 * omega * alpha / (k * eta - 1), the symmetric latency for 1/gamma = k.
Rational symmetric_latency_at_k(std::int64_t k, const Rational& eta, const Rational& omega, const Rational& alpha);

struct SymmetricBound {
  Rational latency;
  char branch = 'A';  // 'A': k = ceil(2/eta), 'B': k = floor(2/eta)
  std::int64_t k = 0;
  Rational gamma_o;   // 1/k of the winning branch
};

SymmetricBound bound_symmetric(const Rational& eta, const Rational& omega, const Rational& alpha);

// 4 alpha omega / eta^2
Rational bound_symmetric_approx(const Rational& eta, const Rational& omega, const Rational& alpha);

struct ChannelBound {
  Rational latency;
  int which = 1;  // 1: channel limit inactive, 2: beta pinned at beta_m
  SymmetricBound symmetric;
};

ChannelBound bound_channel_constrained(const Rational& eta, const Rational& beta_m, const Rational& omega,
                                       const Rational& alpha);

struct AsymmetricBound {
  Rational latency;
  bool tight = true;  // false unless 2/eta_E and 2/eta_F are integers
  Rational beta_e, gamma_e, beta_f, gamma_f;
};

AsymmetricBound bound_asymmetric(const Rational& eta_e, const Rational& eta_f, const Rational& omega,
                                 const Rational& alpha);

struct MutualExclusiveBound {
  Rational latency;
  char branch = 'A';  // 'A': k = ceil(1/eta), 'B': k = floor(1/eta)
  std::int64_t k = 0;
};

MutualExclusiveBound bound_mutual_exclusive(const Rational& eta, const Rational& omega, const Rational& alpha);

// Pure-ALOHA probability that the first beacon of a joining sender collides
// with one of S-1 others, each occupying the channel a fraction beta.
double collision_probability(std::int64_t senders, double beta);

// Largest beta that keeps collision_probability at or below p_max.
double max_beta_for_collision(std::int64_t senders, double p_max);

struct RelaxedFlags {
  bool contained = true;       // beacon must fit inside the window
  bool count_first = true;     // include the duration of the received beacon
  bool overheads = true;       // charge d_oTx / d_oRx switching time
};

// Unidirectional bound with the simplifying assumptions selectively relaxed.
// gamma must be of the optimal form 1/k.
Rational bound_relaxed(const Rational& gamma, const Rational& beta, const Rational& omega, const Rational& d_otx,
                       const Rational& d_orx, const RelaxedFlags& flags = {});

struct DeviationRange {
  double min = 0;
  double max = 0;
  std::size_t points = 0;
};

// Sweeps beta over `beta_steps` evenly spaced values and gamma over every 1/k,
// both inside [lo, hi], and reports the range of (L_r - L_i) / L_i.
DeviationRange relaxed_deviation_range(const Rational& lo, const Rational& hi, std::int64_t beta_steps,
                                       const Rational& omega, const Rational& d_otx, const Rational& d_orx);

std::string relaxed_deviation_csv(const Rational& lo, const Rational& hi, std::int64_t beta_steps,
                                  const Rational& omega, const Rational& d_otx, const Rational& d_orx);

// Slotted protocol limits.
Rational bound_slotted_full_duplex(const Rational& eta, const Rational& omega, const Rational& alpha);
Rational bound_slotted_two_beacon(const Rational& eta, const Rational& omega, const Rational& alpha);
Rational bound_slotted_channel(const Rational& eta, const Rational& beta, const Rational& omega,
                               const Rational& alpha);

enum class SlottedProtocol { Diffcodes, Disco, SearchlightS, UConnect };

SlottedProtocol parse_slotted_protocol(const std::string& name);
const char* to_string(SlottedProtocol p);

// Latency/duty-cycle/channel-utilization relation of a slotted protocol at
// large slot lengths.
double slotted_protocol_latency(SlottedProtocol p, double eta, double beta, double omega, double alpha);

// PI-0M with T_B = d and T_C = (M+1)d, d chosen to meet eta:
// alpha omega (M+1)^2 / (eta (M+1) - 1).
Rational pi0m_latency(std::int64_t m, const Rational& omega, const Rational& eta, const Rational& alpha);

// Same parametrization evaluated with the full PI-0M latency expression
// (contained beacons, received beacon counted):
// (ceil((T_C - d + omega) / T_B) + 1) T_B + omega.
Rational pi0m_latency_relaxed(std::int64_t m, const Rational& omega, const Rational& eta, const Rational& alpha);

struct Pi0mPoint {
  Rational eta;
  Rational bound;           // symmetric bound
  std::int64_t best_m = 0;  // integer M minimizing the relaxed latency
  Rational latency;         // relaxed PI-0M latency at best_m
};

std::vector<Pi0mPoint> pi0m_sweep(const std::vector<Rational>& etas, const Rational& omega, const Rational& alpha);

// sqrt(mean((L_pi0m - L_bound)^2)) / mean(L_bound)
double pi0m_nrmse(const std::vector<Pi0mPoint>& points);

// Evenly spaced grid lo, lo+step, ..., <= hi (exact).
std::vector<Rational> rational_grid(const Rational& lo, const Rational& hi, const Rational& step);

// One row per eta: symmetric bound (both branches), approximation, slotted
// limits, mutual exclusive bound, and the channel-constrained bound when
// beta_m > 0.
std::string bounds_sweep_csv(const std::vector<Rational>& etas, const Rational& omega, const Rational& alpha,
                             const Rational& beta_m);

}  // namespace ndlab
