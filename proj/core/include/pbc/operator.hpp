#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pbc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;
using Indices = std::vector<int>;

namespace tol {
inline constexpr double kHerm = 1e-10;
inline constexpr double kCptp = 1e-10;
inline constexpr double kPsd = 1e-10;
inline constexpr double kTrace = 1e-10;
// Eigenvalues below kEigRelative * max|lambda| count as zero.
inline constexpr double kEigRelative = 1e-12;
// Eigenvalues below kLogClip are dropped before taking logarithms.
inline constexpr double kLogClip = 1e-14;
}  // namespace tol

long long dim_product(const Dims& dims);

// Eigendecomposition of a Hermitian matrix, ascending eigenvalues.
struct Spectrum {
  RealVector values;
  Matrix vectors;

  double max_abs() const;
  double cutoff() const { return tol::kEigRelative * max_abs(); }
  // V f(D) V^dagger with f applied per eigenvalue.
  Matrix map(const std::function<double(double)>& f) const;
};

Spectrum eigh(const Matrix& m);

class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const Matrix& m);
  HermitianOperator(const Matrix& m, Dims dims);

  static HermitianOperator identity(Dims dims);
  static HermitianOperator zero(Dims dims);
  static HermitianOperator diagonal(const std::vector<double>& d, Dims dims = {});
  static HermitianOperator pure(const Vector& psi, Dims dims = {});
  // Skips the Hermiticity check but still symmetrizes. For internal results.
  static HermitianOperator trusted(const Matrix& m, Dims dims);

  const Matrix& matrix() const noexcept { return m_; }
  const Dims& dims() const noexcept { return dims_; }
  int order() const noexcept { return static_cast<int>(m_.rows()); }
  int subsystems() const noexcept { return static_cast<int>(dims_.size()); }

  double trace() const;
  Spectrum spectrum() const { return eigh(m_); }
  double min_eigenvalue() const;
  double max_eigenvalue() const;
  HermitianOperator with_dims(Dims dims) const;

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  HermitianOperator operator-() const { return *this * -1.0; }

 private:
  Matrix m_;
  Dims dims_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& a) { return a * s; }

// PSD operator with trace in (0, 1]. Slightly negative eigenvalues are clipped.
class DensityOperator {
 public:
  DensityOperator() = default;
  explicit DensityOperator(const HermitianOperator& op);

  const HermitianOperator& op() const noexcept { return op_; }
  operator const HermitianOperator&() const noexcept { return op_; }
  const Matrix& matrix() const noexcept { return op_.matrix(); }
  const Dims& dims() const noexcept { return op_.dims(); }
  double trace() const noexcept { return trace_; }

 private:
  HermitianOperator op_;
  double trace_ = 0.0;
};

class QuantumChannel {
 public:
  QuantumChannel(std::vector<Matrix> kraus, Dims in_dims, Dims out_dims);

  static QuantumChannel identity(Dims dims);
  static QuantumChannel depolarizing(int d, double p);
  static QuantumChannel replacer(const DensityOperator& out, Dims in_dims);
  static QuantumChannel amplitude_damping(double gamma);
  static QuantumChannel dephasing(double p);
  static QuantumChannel unitary(const Matrix& u, Dims dims);

  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
  const Dims& in_dims() const noexcept { return in_dims_; }
  const Dims& out_dims() const noexcept { return out_dims_; }
  int in_dim() const { return static_cast<int>(dim_product(in_dims_)); }
  int out_dim() const { return static_cast<int>(dim_product(out_dims_)); }

  // Applies the channel to an operator on exactly its input space.
  HermitianOperator apply(const HermitianOperator& x) const;
  // Channel on the concatenated input layout acting as this (x) other.
  QuantumChannel tensor(const QuantumChannel& other) const;
  // sum_ij |i><j| (x) N(|i><j|), input first.
  Matrix choi() const;

 private:
  std::vector<Matrix> kraus_;
  Dims in_dims_;
  Dims out_dims_;
};

class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> elements);

  const std::vector<HermitianOperator>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  // I minus the sum of elements (the abstain outcome).
  HermitianOperator abstain() const;

 private:
  std::vector<HermitianOperator> elements_;
};

HermitianOperator tensor(std::span<const HermitianOperator> ops);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator tensor_power(const HermitianOperator& a, int n);
Matrix kron(const Matrix& a, const Matrix& b);

// Marginal on the subsystems listed in `keep` (kept in ascending order).
HermitianOperator partial_trace(const HermitianOperator& op, const Indices& keep);
Matrix partial_trace(const Matrix& m, const Dims& dims, const Indices& keep);

// Reorders subsystems: output subsystem j is input subsystem order[j].
HermitianOperator permute_subsystems(const HermitianOperator& op, const Indices& order);
Matrix permute_subsystems(const Matrix& m, const Dims& dims, const Indices& order);

// Projector onto eigenvalues >= -tau_eig, so the kernel is included.
HermitianOperator positive_spectral_projection(const HermitianOperator& x);

// Projectors onto strictly positive, numerically zero, strictly negative eigenspaces.
struct SpectralSplit {
  Matrix positive;
  Matrix zero;
  Matrix negative;
};
SpectralSplit spectral_split(const Matrix& x);

// lambda -> lambda^s on the support, 0 elsewhere; s = 0 gives the support projector.
HermitianOperator operator_power(const HermitianOperator& a, double s);
Matrix psd_power(const Matrix& a, double s);
Matrix psd_power(const Spectrum& spec, double s);
Matrix support_projector(const Matrix& a);
// Base-2 logarithm on the support, 0 on the kernel.
Matrix psd_log2(const Matrix& a);

double trace_norm(const HermitianOperator& a);
double trace_norm(const Matrix& a);
// Tr{X_+}, sum of positive eigenvalues.
double positive_part_trace(const Matrix& x);
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
double max_norm(const Matrix& m);
double commutator_norm(const Matrix& a, const Matrix& b);
// Re Tr{A B}.
double trace_product(const Matrix& a, const Matrix& b);

DensityOperator apply_channel(const QuantumChannel& ch, const DensityOperator& rho, const Indices& on);
// Output subsystems replace the `on` block at the position of its first index.
HermitianOperator apply_channel(const QuantumChannel& ch, const HermitianOperator& x, const Indices& on);

// Diagonalizes a family of pairwise commuting Hermitian matrices in one basis.
struct JointSpectrum {
  Matrix basis;
  std::vector<RealVector> values;  // values[k][i] = <v_i|A_k|v_i>
};
JointSpectrum joint_diagonalize(std::span<const Matrix> ops);

bool commute(const Matrix& a, const Matrix& b, double tol = 1e-12);

}  // namespace pbc
