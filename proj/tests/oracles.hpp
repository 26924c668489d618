#pragma once

// Independent reference computations used to cross-check the library.
// They avoid the library's own algorithms wherever possible.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "pbc/operator.hpp"

namespace oracle {

using pbc::Complex;
using pbc::Matrix;

// Tr_B of an operator on C^da (x) C^db by explicit double-index summation.
inline Matrix trace_out_second(const Matrix& m, int da, int db) {
  Matrix out = Matrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

inline Matrix trace_out_first(const Matrix& m, int da, int db) {
  Matrix out = Matrix::Zero(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return out;
}

// (id (x) N)(|Phi><Phi|) with |Phi> = sum_i |ii>/sqrt(d), built entry by entry.
inline Matrix choi_state(const std::vector<Matrix>& kraus, int din, int dout) {
  Matrix out = Matrix::Zero(din * dout, din * dout);
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j)
      for (const auto& k : kraus)
        for (int a = 0; a < dout; ++a)
          for (int b = 0; b < dout; ++b)
            out(i * dout + a, j * dout + b) += k(a, i) * std::conj(k(b, j)) / static_cast<double>(din);
  return out;
}

// Classical Neyman-Pearson: minimal q-mass at p-acceptance 1 - eps.
inline double np_beta(std::vector<double> p, std::vector<double> q, double eps) {
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] * q[b] > p[b] * q[a]; });
  double need = 1.0 - eps, beta = 0.0;
  for (std::size_t i : idx) {
    if (need <= 0.0) break;
    if (p[i] <= need) {
      need -= p[i];
      beta += q[i];
    } else {
      beta += q[i] * need / p[i];
      need = 0.0;
    }
  }
  return beta;
}

inline double log2_binomial_pmf(int n, int k, double p) {
  return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
          (n - k) * std::log1p(-p)) /
         std::log(2.0);
}

// Exact D_H^eps(p^n || q^n) for binary p = (a, 1-a), q = (b, 1-b), walking the n+1 type classes.
inline double binary_iid_hyp_test(double a, double b, int n, double eps) {
  std::vector<int> ks(n + 1);
  std::iota(ks.begin(), ks.end(), 0);
  // likelihood ratio of a sequence with k ones: (a/b)^k ((1-a)/(1-b))^(n-k)
  const double step = std::log(a / b) - std::log((1 - a) / (1 - b));
  std::sort(ks.begin(), ks.end(), [&](int x, int y) { return x * step > y * step; });
  double need = 1.0 - eps;
  long double beta = 0.0;
  for (int k : ks) {
    const double pk = std::exp2(log2_binomial_pmf(n, k, a));
    const double qk = std::exp2(log2_binomial_pmf(n, k, b));
    if (pk <= need) {
      need -= pk;
      beta += qk;
    } else {
      beta += qk * need / pk;
      break;
    }
  }
  return -std::log2(static_cast<double>(beta));
}

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline pbc::Vector ket(std::initializer_list<Complex> v) {
  pbc::Vector k(v.size());
  int i = 0;
  for (auto c : v) k[i++] = c;
  return k;
}

inline pbc::Vector phi_plus_vector(int d = 2) {
  pbc::Vector v = pbc::Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) v[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

inline pbc::HermitianOperator phi_plus(int d = 2) { return pbc::HermitianOperator::pure(phi_plus_vector(d), {d, d}); }

// Position-based decoder for two messages on R1 R2 B, assembled entry by entry.
// Returns the error probability of message 1 under the square-root measurement.
inline double two_message_decoder_error(const Matrix& joint, const Matrix& theta_r, const Matrix& t, int dr, int db) {
  const int n = dr * dr * db;
  auto at = [&](int r1, int r2, int b) { return (r1 * dr + r2) * db + b; };
  Matrix g1 = Matrix::Zero(n, n), g2 = Matrix::Zero(n, n), rho = Matrix::Zero(n, n);
  for (int r1 = 0; r1 < dr; ++r1)
    for (int r2 = 0; r2 < dr; ++r2)
      for (int b = 0; b < db; ++b)
        for (int s1 = 0; s1 < dr; ++s1)
          for (int s2 = 0; s2 < dr; ++s2)
            for (int c = 0; c < db; ++c) {
              const int i = at(r1, r2, b), j = at(s1, s2, c);
              if (r2 == s2) g1(i, j) = t(r1 * db + b, s1 * db + c);
              if (r1 == s1) g2(i, j) = t(r2 * db + b, s2 * db + c);
              rho(i, j) = joint(r1 * db + b, s1 * db + c) * theta_r(r2, s2);
            }
  Eigen::SelfAdjointEigenSolver<Matrix> es(g1 + g2);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd inv(n);
  for (int i = 0; i < n; ++i) inv(i) = es.eigenvalues()(i) > 1e-12 * top ? 1.0 / std::sqrt(es.eigenvalues()(i)) : 0.0;
  const Matrix x = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  return 1.0 - (x * g1 * x * rho).trace().real();
}

}  // namespace oracle
