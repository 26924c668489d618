#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pbc/operator.hpp"
#include "pbc/p2p.hpp"

namespace pbc {

// Entanglement-assisted position-based code for a K-sender MAC. Resource k has
// layout [R_k..., A_k...]; the channel acts on A_1 ... A_K (in that order) and the
// test acts on R_1 ... R_K C.
struct MacCodeSpec {
  std::vector<DensityOperator> resources;
  QuantumChannel channel;
  std::vector<int> sizes;
  std::optional<BinaryTest> test;
  double c = 1.0;
};

inline constexpr int kMaxSimulatedSenders = 3;

// N(theta_1 (x) ... (x) theta_K) on [R_1, ..., R_K, C], with every sender in
// `decoupled` (a bit mask) replaced by theta_{R_j} (x) theta_{A_j}.
HermitianOperator mac_output(const MacCodeSpec& spec, unsigned decoupled = 0);

// {omega - sum_J (prod_{j in J} M_j) omega_J >= 0} over nonempty J.
BinaryTest default_mac_test(const MacCodeSpec& spec);

CodePerformance simulate_mac(const MacCodeSpec& spec);

struct MacBoundTerms {
  double miss = 0.0;                 // Tr{(I-T) omega}
  std::vector<unsigned> subsets;     // nonempty J as bit masks, ascending
  std::vector<double> confusion;     // Tr{T omega_J}
  std::vector<double> multiplicity;  // prod_{j in J} (M_j - 1)
  double bound = 0.0;
};
MacBoundTerms mac_bound_terms(const MacCodeSpec& spec);
double mac_one_shot_bound(const MacCodeSpec& spec);

// Classical-input quantum-output two-sender MAC x, y -> rho^{x,y}.
class CqMac {
 public:
  CqMac(std::vector<std::vector<DensityOperator>> outputs, std::vector<double> p_x, std::vector<double> p_y);

  int x_size() const noexcept { return static_cast<int>(p_x_.size()); }
  int y_size() const noexcept { return static_cast<int>(p_y_.size()); }
  int output_dim() const noexcept { return outputs_[0][0].op().order(); }
  const DensityOperator& output(int x, int y) const { return outputs_[x][y]; }
  const std::vector<double>& p_x() const noexcept { return p_x_; }
  const std::vector<double>& p_y() const noexcept { return p_y_; }

  // sum_{x,y} p(x) p(y) |x><x| (x) |y><y| (x) rho^{x,y} on [X, Y, C].
  HermitianOperator joint_state() const;
  HermitianOperator average_output() const;

 private:
  std::vector<std::vector<DensityOperator>> outputs_;
  std::vector<double> p_x_;
  std::vector<double> p_y_;
};

// Test family Q^{x,y}; the decoder for a codebook is the square-root measurement of
// {Q^{x_l, y_m}}.
enum class CqTestFamily {
  PrettyGood,        // Q^{x,y} = rho^{-1/2} p(x) p(y) rho^{x,y} rho^{-1/2}, rho the average output
  CompositeHelstrom  // Q^{x,y} = {rho^{x,y} - L rho^y - M rho^x - L M rho >= 0}
};

struct DerandomizeOptions {
  CqTestFamily family = CqTestFamily::PrettyGood;
  std::optional<std::vector<std::vector<HermitianOperator>>> custom_tests;
  long long search_budget = 1 << 16;  // sampled codebooks when enumeration is too large
  long long enumeration_limit = 1'000'000;
  std::uint64_t seed = 0;
};

struct DerandomizedCode {
  std::vector<int> codebook_x;
  std::vector<int> codebook_y;
  std::vector<HermitianOperator> decoder;  // Omega^{l,m}, row-major in (l, m)
  double avg_error = 0.0;
  double ensemble_average = 0.0;  // exact when enumerated, sample mean otherwise
  long long candidates = 0;
  bool enumerated = false;
};

std::vector<std::vector<HermitianOperator>> cq_test_family(const CqMac& mac, int l, int m, CqTestFamily family);
// Average error of the square-root decoder for one codebook pair.
double cq_codebook_error(const CqMac& mac, const std::vector<std::vector<HermitianOperator>>& tests,
                         const std::vector<int>& xs, const std::vector<int>& ys);
DerandomizedCode derandomize_cq_mac(const CqMac& mac, int l, int m, const DerandomizeOptions& options = {});

struct RateConstraint {
  unsigned subset = 0;  // bit mask over senders
  double bound = 0.0;
  std::string label;
  std::string alternate_label;  // pairing as written in the two-sender statement, when it differs
};

struct RateRegion {
  int senders = 0;
  std::string family;
  bool conjectured = false;
  std::vector<RateConstraint> constraints;
};

// omega has subsystems [S_1, ..., S_K, C].
RateRegion rate_region_renyi2(const HermitianOperator& omega);
RateRegion rate_region_collision(const HermitianOperator& omega);
RateRegion rate_region_mi(const HermitianOperator& omega);

bool region_membership(const RateRegion& region, const std::vector<double>& rates, double tol = 1e-12);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};
struct RegionVertices {
  std::vector<Point2> first;
  std::vector<Point2> second;
  std::vector<Point2> hull;  // counter-clockwise
  bool unbounded = false;
};
RegionVertices region_vertices_2d(const RateRegion& a, const RateRegion& b);
double polygon_area(const std::vector<Point2>& ccw);
bool polygon_contains(const std::vector<Point2>& ccw, Point2 p, double tol = 1e-12);

struct DivergenceIdentity {
  std::string label;
  double divergence = 0.0;   // D(rho || B_i)
  double information = 0.0;  // I(.) - rate
  double residual = 0.0;
};
struct DivergenceIdentities {
  std::vector<DivergenceIdentity> rows;
  double max_residual = 0.0;
};
// theta on [R, A], gamma on [S, B], channel on A B.
DivergenceIdentities mac_divergence_identities(const DensityOperator& theta, const DensityOperator& gamma,
                                               const QuantumChannel& channel, double r1, double r2);

struct MacExponentTerm {
  unsigned subset = 0;
  double value = 0.0;
  double s = 0.0;
  bool unimodal = true;
};
struct MacExponent {
  double value = 0.0;  // min over subsets
  std::vector<MacExponentTerm> terms;
  std::string label = "conditional exponent";
};
// min over nonempty J of sup_s -log2 Tr{omega^s sigma_J^(1-s)} - (1-s) sum_{j in J} R_j,
// sigma_J = omega_{S(J)} (x) omega_{S(J^c) C}.
MacExponent mac_error_exponent(const HermitianOperator& omega, const std::vector<double>& rates,
                               const std::vector<double>& s_grid);

}  // namespace pbc
