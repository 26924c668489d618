#pragma once

#include <vector>

#include "pbc/hyptest.hpp"
#include "pbc/operator.hpp"

namespace pbc {

// Relative typical projector of rho with respect to a PSD operator B:
// the span of eigenvector products |phi_{y^n}> of B^(x)n whose empirical rate
// -(1/n) log2 f(y^n) is within delta of -Tr{rho log2 B}. With B = rho this is
// the weakly typical projector of rho. Eigenvectors are grouped by eigenvalue,
// so membership depends only on the type over distinct eigenvalues.
class TypicalProjector {
 public:
  TypicalProjector(const HermitianOperator& rho, const HermitianOperator& b, int n, double delta);

  const Matrix& eigenbasis() const noexcept { return basis_; }
  const std::vector<int>& labels() const noexcept { return label_group_; }
  const std::vector<double>& group_values() const noexcept { return f_; }
  const std::vector<int>& multiplicities() const noexcept { return mult_; }
  const std::vector<double>& group_weights() const noexcept { return q_; }
  const std::vector<std::vector<int>>& typical_types() const noexcept { return types_; }
  int n() const noexcept { return n_; }
  double delta() const noexcept { return delta_; }

  // -Tr{rho log2 B}; the entropy of rho for the self-typical projector.
  double rate() const noexcept { return rate_; }
  // Variance of -log2 f(Y) with Y distributed as q_y = Tr{rho P_y}.
  double variance() const noexcept { return variance_; }
  double probability() const noexcept { return probability_; }
  double log2_dimension() const noexcept { return log2_dim_; }
  // Smallest n with variance / (delta^2 n) <= eps.
  long long chebyshev_threshold(double eps) const;

  bool is_typical_type(const std::vector<int>& group_counts) const;
  // `sequence` lists eigenvector indices (columns of eigenbasis()).
  bool contains(const std::vector<int>& sequence) const;
  // Membership of every eigenvector sequence in row-major order; d^n <= 2^20.
  std::vector<bool> mask() const;
  // The projector as a dense matrix; d^n <= 4096.
  Matrix dense() const;

 private:
  Matrix basis_;
  std::vector<int> label_group_;
  std::vector<double> f_;
  std::vector<int> mult_;
  std::vector<double> q_;
  std::vector<std::vector<int>> types_;
  int n_ = 0;
  int d_ = 0;
  double delta_ = 0.0;
  double rate_ = 0.0;
  double variance_ = 0.0;
  double probability_ = 0.0;
  double log2_dim_ = 0.0;
};

using RelativeTypicalProjector = TypicalProjector;

TypicalProjector typical_projector(const HermitianOperator& rho, int n, double delta);
TypicalProjector relative_typical_projector(const HermitianOperator& rho, const HermitianOperator& b, int n,
                                            double delta);

struct ProjectorTricks {
  // Smallest margins over typical sequences, in bits; both >= 0 when the tricks hold.
  double trick_margin = 0.0;       // Pi <= 2^{n(H+delta)} rho^n
  double sqrt_trick_margin = 0.0;  // Pi <= 2^{-n(H-delta)/2} (rho^n)^{-1/2}
  bool holds = false;
};
ProjectorTricks check_projector_tricks(const HermitianOperator& rho, int n, double delta);

struct CompositeTestResult {
  BinaryTest test;
  double type1 = 0.0;
  std::vector<double> type2;
  std::vector<double> exponents;        // -(1/n) log2 type2
  std::vector<double> exponent_bounds;  // D(rho || B_i) - 2 delta
  bool exponents_hold = false;
  // Type-I bound from the measured misses eps_0 + 2 sum_i sqrt(eps_i).
  double typical_miss = 0.0;
  std::vector<double> relative_miss;
  double miss_bound = 0.0;
  bool miss_bound_holds = false;
  // eps for which n passes every Chebyshev threshold, and eps + 2 r sqrt(eps).
  double chebyshev_eps = 0.0;
  double chebyshev_bound = 0.0;
  bool chebyshev_bound_holds = false;
};
CompositeTestResult composite_alternative_test(const HermitianOperator& rho,
                                               const std::vector<HermitianOperator>& alts, int n, double delta);

}  // namespace pbc
