#pragma once

#include <vector>

#include "pbc/operator.hpp"

namespace pbc {

// A divergence in bits, or +infinity when the support condition fails.
struct DivergenceResult {
  double value = 0.0;
  bool infinite = false;
  bool support_violation = false;
};

double von_neumann_entropy(const HermitianOperator& rho);
double renyi2_entropy(const HermitianOperator& rho);

// H(A|B) = H(AB) - H(B), where A is the listed subsystems and B the rest.
double conditional_entropy(const HermitianOperator& rho, const Indices& a);
// -log2 Tr{rho_AB rho_B^{-1/2} rho_AB rho_B^{-1/2}}, pseudo-inverse on supp(rho_B).
double collision_conditional_entropy(const HermitianOperator& rho, const Indices& a);
// Scalar form for cq states sum_y p(y) |y><y| (x) sigma_y: -log2 sum_y p(y) Tr{sigma_y^2}.
double collision_conditional_entropy_cq(const std::vector<double>& p, const std::vector<HermitianOperator>& sigma);

DivergenceResult relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma);
// Petz form (1/(alpha-1)) log2 Tr{rho^alpha sigma^(1-alpha)}.
DivergenceResult renyi_relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha);
DivergenceResult sandwiched_renyi(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha);
// Tr{rho (log2 rho - log2 sigma)^2} - D^2.
double relative_entropy_variance(const HermitianOperator& rho, const HermitianOperator& sigma);

// rho_A (x) rho_B in the layout [A..., B...] alongside rho permuted to that layout.
struct BipartiteView {
  HermitianOperator joint;
  HermitianOperator product;
};
BipartiteView bipartite_view(const HermitianOperator& rho, const Indices& a);

double mutual_information(const HermitianOperator& rho, const Indices& a = {0});
DivergenceResult renyi_mutual_information(const HermitianOperator& rho, double alpha, const Indices& a = {0});
double mutual_information_variance(const HermitianOperator& rho, const Indices& a = {0});

struct ChernoffResult {
  double value = 0.0;
  double s = 0.5;
  bool infinite = false;
  bool grid_fallback = false;
};

// log2 Tr{A^s B^(1-s)} with A^0, B^0 the support projectors.
double log2_trace_power_product(const HermitianOperator& a, const HermitianOperator& b, double s);
ChernoffResult chernoff_distance(const HermitianOperator& a, const HermitianOperator& b);

// Eigenvalues of A and B with squared overlaps W_ij = |<a_i|b_j>|^2.
// Tr{f(A) g(B)} = sum_ij f(a_i) g(b_j) W_ij for any spectral functions f, g.
struct PairSpectrum {
  RealVector a;
  RealVector b;
  Eigen::MatrixXd overlap;
  double a_cut = 0.0;
  double b_cut = 0.0;

  PairSpectrum(const Matrix& a, const Matrix& b);
  // Tr{A^s B^t} using support conventions for zero exponents and kernels.
  double trace_powers(double s, double t) const;
  // Tr{A (I - Pi_B)}, the weight of A outside the support of B.
  double weight_outside_b() const;
};

}  // namespace pbc
