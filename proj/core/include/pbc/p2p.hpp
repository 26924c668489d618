#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pbc/hyptest.hpp"
#include "pbc/operator.hpp"

namespace pbc {

// Position-based entanglement-assisted code: Alice and Bob share M copies of
// theta_RA, message m is sent by pushing the m-th A system through the channel,
// and Bob decodes with the square-root measurement built from the test T_RB.
// The resource layout is [R..., A...] with the A block equal to channel.in_dims().
struct P2PCodeSpec {
  DensityOperator resource;
  QuantumChannel channel;
  int messages = 2;
  std::optional<BinaryTest> test;
  double c = 1.0;  // Hayashi-Nagaoka constant
};

// N(theta_RA) and theta_R (x) N(theta_A), both with dims {dim R, dim B}.
struct ChannelPair {
  HermitianOperator joint;
  HermitianOperator product;
  HermitianOperator reference;  // theta_R
};
ChannelPair channel_pair(const DensityOperator& resource, const QuantumChannel& channel);

// {N(theta_RA) - M theta_R (x) N(theta_A) >= 0}.
BinaryTest default_p2p_test(const DensityOperator& resource, const QuantumChannel& channel, int messages);

struct CodePerformance {
  double exact_error = 0.0;  // per message; the abstain outcome counts as an error
  double bound = 0.0;
  double message_spread = 0.0;  // |p_e(1) - p_e(M)|
  BinaryTest test_used;
};

inline constexpr long long kSimulationBudget = 1LL << 14;

CodePerformance simulate_p2p(const P2PCodeSpec& spec);
// (1+c) Tr{(I-T) N(theta)} + (2+c+1/c)(M-1) Tr{T theta_R (x) N(theta_A)}.
double one_shot_error_bound(const P2PCodeSpec& spec);

struct ExponentResult {
  double value = 0.0;
  double s = 0.0;
  bool unimodal = true;  // false: the grid was not unimodal and its maximum is reported unrefined
};
// sup_s (1-s)[I_s(R;B) - log2 M] - 2 with Petz I_s; `iid` takes a rate R in place
// of log2 M and drops the -2.
ExponentResult error_exponent_lower(const DensityOperator& resource, const QuantumChannel& channel,
                                    double log2_messages_or_rate, const std::vector<double>& s_grid,
                                    bool iid = false);
std::vector<double> uniform_grid(int points);
// Maximum of f over the grid, refined by golden section around the best point
// when the grid values are unimodal.
ExponentResult maximize_over_s(const std::function<double(double)>& f, const std::vector<double>& s_grid);

struct CapacityLower {
  double value = 0.0;
  double information = 0.0;  // I_H^{eps-eta}(R;B)
  double penalty = 0.0;      // log2(4 eps / eta^2)
};
CapacityLower one_shot_capacity_lower(const DensityOperator& resource, const QuantumChannel& channel, double eps,
                                      double eta);

// n I(R;B) + sqrt(n V(R;B)) Phi^{-1}(eps), without the O(log n) term.
double second_order_rate(const DensityOperator& resource, const QuantumChannel& channel, int n, double eps);

struct UpperSearchOptions {
  int restarts = 4;
  int iterations = 200;
  double initial_step = 0.5;
  double min_step = 1e-4;
  std::uint64_t seed = 0;
  MinSigmaOptions inner{};
};
struct UpperEstimate {
  double estimate = 0.0;  // best restart
  double worst = 0.0;     // worst restart
  std::vector<double> restart_values;
  DensityOperator witness;  // psi_RA attaining the estimate
  double maximally_entangled_value = 0.0;
  bool heuristic = true;
};
// max over pure psi_RA of min_sigma D_H^eps(N(psi_RA) || psi_R (x) sigma_B), by
// seeded restarts and coordinate search; restart 0 starts from Phi+.
UpperEstimate capacity_upper_eps_mi(const QuantumChannel& channel, double eps, const UpperSearchOptions& options = {});

struct MarginalProductCheck {
  double lhs = 0.0;  // I(A;BC)
  double rhs = 0.0;  // I(AC;B)
  bool holds = false;
};
// Both sides use min over sigma of D_H^eps; rho has subsystems [A, B, C] with rho_AC product.
MarginalProductCheck check_marginal_prod_lemma(const HermitianOperator& rho_abc, double eps,
                                               const MinSigmaOptions& options = {});

}  // namespace pbc
