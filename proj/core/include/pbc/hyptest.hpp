#pragma once

#include <optional>
#include <vector>

#include "pbc/entropy.hpp"
#include "pbc/operator.hpp"

namespace pbc {

// A test 0 <= T <= I, with Neyman-Pearson parameters when it came from one.
struct BinaryTest {
  HermitianOperator op;
  std::optional<double> mu;
  std::optional<double> kernel_weight;
};

struct NeymanPearsonTest {
  double mu = 0.0;
  double kernel_weight = 0.0;
  HermitianOperator test;
};

struct HypTestValue {
  double value = 0.0;  // -log2 type2, bits
  double type1 = 0.0;
  double type2 = 0.0;
  double dual_type2 = 0.0;
  double primal_dual_gap = 0.0;  // log2(primal beta / dual beta)
  bool infinite = false;
  NeymanPearsonTest test;
};

struct HelstromResult {
  double error = 0.0;  // (Tr{A+B} - ||A-B||_1) / 2
  double error_from_test = 0.0;  // Tr{(I-T)A} + Tr{TB}
  BinaryTest test;
};

// Primal Neyman-Pearson solve on raw matrices.
struct NpSolution {
  double beta = 0.0;
  double type1 = 0.0;
  double mu = 0.0;
  double t = 1.0;
  bool infinite = false;
  Matrix test;
};
NpSolution neyman_pearson(const Matrix& rho, const Matrix& sigma, double eps);
// max over lambda >= 0 of lambda (1-eps) - Tr{(lambda rho - sigma)_+}, a lower bound on beta.
double neyman_pearson_dual(const Matrix& rho, const Matrix& sigma, double eps);

HelstromResult helstrom_error(const HermitianOperator& a, const HermitianOperator& b);
HypTestValue hyp_test_rel_entropy(const HermitianOperator& rho, const HermitianOperator& sigma, double eps);
HypTestValue hyp_test_mutual_info(const HermitianOperator& rho, double eps, const Indices& a = {0});

struct MinSigmaOptions {
  int max_iterations = 500;
  double tolerance = 1e-6;  // relative Frank-Wolfe gap
  int line_search_steps = 30;
};

struct MinSigmaResult {
  double value = 0.0;  // -log2 of the best beta found (upper estimate of the minimum)
  double lower = 0.0;  // certified lower bound from the Frank-Wolfe gap
  HermitianOperator sigma;
  int iterations = 0;
  bool converged = false;
};

// min over sigma_B of D_H^eps(rho_AB || rho_A (x) sigma_B), A = `a`, B = the rest.
MinSigmaResult hyp_test_mutual_info_min_sigma(const HermitianOperator& rho, double eps, const Indices& a = {0},
                                              const MinSigmaOptions& options = {});
// Same minimum by grid search over the Bloch ball (B must be a qubit): a cubic
// grid of the ball followed by `zoom_levels` finer grids around the incumbent.
double min_sigma_bloch_grid(const HermitianOperator& rho, double eps, const Indices& a = {0}, int per_axis = 27,
                            int zoom_levels = 0);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

InequalityCheck check_prop_hypo_renyi(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha,
                                      double eps);
InequalityCheck check_cmw_upper(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha,
                                double eps);

double normal_cdf(double x);
double inverse_normal_cdf(double p);
double second_order_approx(const HermitianOperator& rho, const HermitianOperator& sigma, int n, double eps);

struct SteinSandwich {
  double lower = 0.0;
  double exact = 0.0;
  double upper = 0.0;
  bool holds = false;
  bool classical_path = false;
};
SteinSandwich stein_sandwich(const HermitianOperator& rho, const HermitianOperator& sigma, double eps, int n,
                             double alpha_lo, double alpha_hi);

// (1/n) D_H^eps(rho^n || sigma^n) for commuting inputs via type classes.
double iid_hyp_test_rate(const HermitianOperator& rho, const HermitianOperator& sigma, int n, double eps);

HelstromResult pe_star_composite(const HermitianOperator& a, const std::vector<HermitianOperator>& alts);

struct ChernoffTraceRow {
  int n = 0;
  double rate = 0.0;  // -(1/n) log2 P_e*
  double gap = 0.0;   // rate - min_i C(A, B_i)
};
struct ChernoffTrace {
  std::vector<ChernoffTraceRow> rows;
  double min_chernoff = 0.0;
  bool truncated = false;
  bool classical_path = false;
};
// weights = {K0, K1, ..., Kr}; evaluates n in `ns` (dense rows stop at order 1024).
ChernoffTrace chernoff_multi_trace(const HermitianOperator& a, const std::vector<HermitianOperator>& alts,
                                   const std::vector<double>& weights, const std::vector<int>& ns);

InequalityCheck check_spectral_ineq(const HermitianOperator& a, const HermitianOperator& b, double s);

struct OperatorInequality {
  double min_eigenvalue = 0.0;
  bool holds = false;
};
OperatorInequality check_hayashi_nagaoka(const HermitianOperator& s, const HermitianOperator& t, double c);

InequalityCheck check_gentle(const HermitianOperator& rho, const HermitianOperator& lambda, double eps);
InequalityCheck check_close(const HermitianOperator& rho, const HermitianOperator& sigma,
                            const HermitianOperator& lambda);

}  // namespace pbc
