#include "pbc/random.hpp"

#include <cmath>

#include "pbc/errors.hpp"

namespace pbc {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

namespace {

Matrix gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(n(rng), n(rng));
  }
  return g;
}

}  // namespace

Vector random_state_vector(Rng& rng, int d) {
  Vector v = gaussian(rng, d, 1).col(0);
  return v / v.norm();
}

Matrix random_unitary(Rng& rng, int d) {
  const Matrix g = gaussian(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double a = std::abs(rii);
    if (a > 0) q.col(i) *= rii / a;
  }
  return q;
}

DensityOperator random_density(Rng& rng, int d, int env, Dims dims) {
  if (env <= 0) env = d;
  const Matrix g = gaussian(rng, d, env);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  if (dims.empty()) dims = {d};
  return DensityOperator(HermitianOperator::trusted(rho, std::move(dims)));
}

DensityOperator random_pure(Rng& rng, int d, Dims dims) {
  return DensityOperator(HermitianOperator::pure(random_state_vector(rng, d), std::move(dims)));
}

HermitianOperator random_psd(Rng& rng, int d, double scale) {
  const Matrix g = gaussian(rng, d, d);
  Matrix a = g * g.adjoint();
  a *= scale / a.trace().real();
  return HermitianOperator::trusted(a, {d});
}

DensityOperator random_diagonal_density(Rng& rng, int d) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(d);
  double s = 0.0;
  for (auto& x : w) s += (x = e(rng) + 1e-3);
  for (auto& x : w) x /= s;
  return DensityOperator(HermitianOperator::diagonal(w));
}

QuantumChannel random_channel(Rng& rng, int din, int dout, int kraus) {
  if (dout * kraus < din) throw PreconditionError("random channel needs dout * kraus >= din");
  // Isometry V: din -> dout*kraus from the first din columns of a Haar unitary.
  const Matrix u = random_unitary(rng, dout * kraus);
  const Matrix v = u.leftCols(din);
  std::vector<Matrix> ks;
  for (int k = 0; k < kraus; ++k) {
    Matrix kk(dout, din);
    for (int i = 0; i < dout; ++i) kk.row(i) = v.row(i * kraus + k);
    ks.push_back(std::move(kk));
  }
  return QuantumChannel(std::move(ks), {din}, {dout});
}

}  // namespace pbc
