#include "pbc/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pbc/errors.hpp"

namespace pbc {

namespace {

void check_dims(const Dims& dims, long long order) {
  for (int d : dims) {
    if (d <= 0) throw DimensionError("subsystem dimensions must be positive");
  }
  if (dim_product(dims) != order) {
    throw DimensionError("product of dims " + std::to_string(dim_product(dims)) +
                         " does not match matrix order " + std::to_string(order));
  }
}

Dims default_dims(const Matrix& m) { return Dims{static_cast<int>(m.rows())}; }

// Row-major strides: index = sum_k digit_k * stride_k.
std::vector<long long> strides(const Dims& dims) {
  std::vector<long long> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

void check_indices(const Indices& idx, int n) {
  std::vector<bool> seen(n, false);
  for (int i : idx) {
    if (i < 0 || i >= n) throw DimensionError("subsystem index " + std::to_string(i) + " out of range");
    if (seen[i]) throw DimensionError("subsystem index " + std::to_string(i) + " repeated");
    seen[i] = true;
  }
}

}  // namespace

long long dim_product(const Dims& dims) {
  long long p = 1;
  for (int d : dims) p *= d;
  return p;
}

double Spectrum::max_abs() const {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

Matrix Spectrum::map(const std::function<double(double)>& f) const {
  RealVector fv(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) fv[i] = f(values[i]);
  return vectors * fv.cast<Complex>().asDiagonal() * vectors.adjoint();
}

Spectrum eigh(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

double max_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

HermitianOperator::HermitianOperator(const Matrix& m) : HermitianOperator(m, default_dims(m)) {}

HermitianOperator::HermitianOperator(const Matrix& m, Dims dims) : dims_(std::move(dims)) {
  if (m.rows() != m.cols()) throw DimensionError("operator matrix must be square");
  check_dims(dims_, m.rows());
  const double asym = max_norm(m - m.adjoint());
  if (asym > tol::kHerm * (1.0 + max_norm(m))) {
    throw PreconditionError("matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::trusted(const Matrix& m, Dims dims) {
  HermitianOperator h;
  check_dims(dims, m.rows());
  h.m_ = 0.5 * (m + m.adjoint());
  h.dims_ = std::move(dims);
  return h;
}

HermitianOperator HermitianOperator::identity(Dims dims) {
  const auto d = dim_product(dims);
  return trusted(Matrix::Identity(d, d), std::move(dims));
}

HermitianOperator HermitianOperator::zero(Dims dims) {
  const auto d = dim_product(dims);
  return trusted(Matrix::Zero(d, d), std::move(dims));
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& d, Dims dims) {
  Matrix m = Matrix::Zero(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  if (dims.empty()) dims = {static_cast<int>(d.size())};
  return trusted(m, std::move(dims));
}

HermitianOperator HermitianOperator::pure(const Vector& psi, Dims dims) {
  if (dims.empty()) dims = {static_cast<int>(psi.size())};
  return trusted(psi * psi.adjoint(), std::move(dims));
}

double HermitianOperator::trace() const { return m_.trace().real(); }

double HermitianOperator::min_eigenvalue() const { return spectrum().values.minCoeff(); }

double HermitianOperator::max_eigenvalue() const { return spectrum().values.maxCoeff(); }

HermitianOperator HermitianOperator::with_dims(Dims dims) const { return trusted(m_, std::move(dims)); }

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (o.order() != order()) throw DimensionError("operator sum with mismatched order");
  return trusted(m_ + o.m_, dims_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (o.order() != order()) throw DimensionError("operator difference with mismatched order");
  return trusted(m_ - o.m_, dims_);
}

HermitianOperator HermitianOperator::operator*(double s) const { return trusted(m_ * s, dims_); }

DensityOperator::DensityOperator(const HermitianOperator& op) : op_(op) {
  const Spectrum spec = op.spectrum();
  const double lmin = spec.values.size() ? spec.values.minCoeff() : 0.0;
  if (lmin < -tol::kPsd) {
    throw PreconditionError("density operator has negative eigenvalue " + std::to_string(lmin));
  }
  if (lmin < 0.0) {
    op_ = HermitianOperator::trusted(spec.map([](double l) { return std::max(l, 0.0); }), op.dims());
  }
  trace_ = op_.trace();
  if (!(trace_ > 0.0) || trace_ > 1.0 + tol::kTrace) {
    throw PreconditionError("density operator trace " + std::to_string(trace_) + " outside (0,1]");
  }
}

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus, Dims in_dims, Dims out_dims)
    : kraus_(std::move(kraus)), in_dims_(std::move(in_dims)), out_dims_(std::move(out_dims)) {
  if (kraus_.empty()) throw PreconditionError("channel needs at least one Kraus operator");
  const auto din = dim_product(in_dims_);
  const auto dout = dim_product(out_dims_);
  Matrix sum = Matrix::Zero(din, din);
  for (const auto& k : kraus_) {
    if (k.rows() != dout || k.cols() != din) throw DimensionError("Kraus operator shape mismatch");
    sum += k.adjoint() * k;
  }
  const double dev = max_norm(sum - Matrix::Identity(din, din));
  if (dev > tol::kCptp) {
    throw PreconditionError("Kraus operators are not trace preserving (deviation " + std::to_string(dev) + ")");
  }
}

QuantumChannel QuantumChannel::identity(Dims dims) {
  const auto d = dim_product(dims);
  return QuantumChannel({Matrix::Identity(d, d)}, dims, dims);
}

QuantumChannel QuantumChannel::depolarizing(int d, double p) {
  if (p < 0.0 || p > 1.0) throw PreconditionError("depolarizing parameter outside [0,1]");
  // x -> (1-p) x + p Tr{x} I/d via the identity and all |i><j| / sqrt(d).
  std::vector<Matrix> ks;
  if (p < 1.0) ks.push_back(std::sqrt(1.0 - p) * Matrix::Identity(d, d));
  if (p > 0.0) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        Matrix k = Matrix::Zero(d, d);
        k(i, j) = std::sqrt(p / d);
        ks.push_back(std::move(k));
      }
    }
  }
  return QuantumChannel(std::move(ks), {d}, {d});
}

QuantumChannel QuantumChannel::replacer(const DensityOperator& out, Dims in_dims) {
  const auto din = dim_product(in_dims);
  if (std::abs(out.trace() - 1.0) > tol::kTrace) throw PreconditionError("replacer output must be normalized");
  const Spectrum spec = out.op().spectrum();
  std::vector<Matrix> ks;
  for (Eigen::Index a = 0; a < spec.values.size(); ++a) {
    if (spec.values[a] <= 0.0) continue;
    for (long long i = 0; i < din; ++i) {
      Matrix k = Matrix::Zero(out.op().order(), din);
      k.col(i) = std::sqrt(spec.values[a]) * spec.vectors.col(a);
      ks.push_back(std::move(k));
    }
  }
  return QuantumChannel(std::move(ks), std::move(in_dims), out.dims());
}

QuantumChannel QuantumChannel::amplitude_damping(double gamma) {
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel({k0, k1}, {2}, {2});
}

QuantumChannel QuantumChannel::dephasing(double p) {
  Matrix k0 = std::sqrt(1.0 - p) * Matrix::Identity(2, 2);
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 0) = std::sqrt(p);
  k1(1, 1) = -std::sqrt(p);
  return QuantumChannel({k0, k1}, {2}, {2});
}

QuantumChannel QuantumChannel::unitary(const Matrix& u, Dims dims) {
  return QuantumChannel({u}, dims, dims);
}

HermitianOperator QuantumChannel::apply(const HermitianOperator& x) const {
  if (x.order() != in_dim()) throw DimensionError("channel input dimension mismatch");
  Matrix out = Matrix::Zero(out_dim(), out_dim());
  for (const auto& k : kraus_) out.noalias() += k * x.matrix() * k.adjoint();
  return HermitianOperator::trusted(out, out_dims_);
}

QuantumChannel QuantumChannel::tensor(const QuantumChannel& other) const {
  std::vector<Matrix> ks;
  ks.reserve(kraus_.size() * other.kraus_.size());
  for (const auto& a : kraus_) {
    for (const auto& b : other.kraus_) ks.push_back(kron(a, b));
  }
  Dims in = in_dims_, out = out_dims_;
  in.insert(in.end(), other.in_dims_.begin(), other.in_dims_.end());
  out.insert(out.end(), other.out_dims_.begin(), other.out_dims_.end());
  return QuantumChannel(std::move(ks), std::move(in), std::move(out));
}

Matrix QuantumChannel::choi() const {
  const int din = in_dim(), dout = out_dim();
  Matrix c = Matrix::Zero(din * dout, din * dout);
  for (int i = 0; i < din; ++i) {
    for (int j = 0; j < din; ++j) {
      Matrix eij = Matrix::Zero(din, din);
      eij(i, j) = 1.0;
      Matrix out = Matrix::Zero(dout, dout);
      for (const auto& k : kraus_) out += k * eij * k.adjoint();
      c.block(i * dout, j * dout, dout, dout) = out;
    }
  }
  return c;
}

Povm::Povm(std::vector<HermitianOperator> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw PreconditionError("POVM needs at least one element");
  const int d = elements_.front().order();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : elements_) {
    if (e.order() != d) throw DimensionError("POVM elements of different order");
    if (e.min_eigenvalue() < -tol::kPsd) throw PreconditionError("POVM element is not PSD");
    sum += e.matrix();
  }
  if (eigh(Matrix::Identity(d, d) - sum).values.minCoeff() < -tol::kPsd) {
    throw PreconditionError("POVM elements sum above identity");
  }
}

HermitianOperator Povm::abstain() const {
  const auto& first = elements_.front();
  Matrix rest = Matrix::Identity(first.order(), first.order());
  for (const auto& e : elements_) rest -= e.matrix();
  return HermitianOperator::trusted(rest, first.dims());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator tensor(std::span<const HermitianOperator> ops) {
  if (ops.empty()) throw PreconditionError("tensor of an empty list");
  Matrix m = ops[0].matrix();
  Dims dims = ops[0].dims();
  for (std::size_t k = 1; k < ops.size(); ++k) {
    m = kron(m, ops[k].matrix());
    dims.insert(dims.end(), ops[k].dims().begin(), ops[k].dims().end());
  }
  return HermitianOperator::trusted(m, std::move(dims));
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  const HermitianOperator pair[] = {a, b};
  return tensor(pair);
}

HermitianOperator tensor_power(const HermitianOperator& a, int n) {
  if (n < 1) throw PreconditionError("tensor power needs n >= 1");
  std::vector<HermitianOperator> ops(n, a);
  return tensor(ops);
}

Matrix partial_trace(const Matrix& m, const Dims& dims, const Indices& keep_in) {
  check_dims(dims, m.rows());
  const int n = static_cast<int>(dims.size());
  check_indices(keep_in, n);
  Indices keep = keep_in;
  std::sort(keep.begin(), keep.end());
  Indices traced;
  for (int k = 0; k < n; ++k) {
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  }
  const auto st = strides(dims);
  long long dk = 1, dt = 1;
  for (int k : keep) dk *= dims[k];
  for (int k : traced) dt *= dims[k];

  // full[a*dt + b] = full index of kept multi-index a and traced multi-index b.
  auto offsets = [&](const Indices& sub) {
    long long total = 1;
    for (int k : sub) total *= dims[k];
    std::vector<long long> off(total, 0);
    for (long long idx = 0; idx < total; ++idx) {
      long long rem = idx, o = 0;
      for (int s = static_cast<int>(sub.size()) - 1; s >= 0; --s) {
        const int k = sub[s];
        o += (rem % dims[k]) * st[k];
        rem /= dims[k];
      }
      off[idx] = o;
    }
    return off;
  };
  const auto ko = offsets(keep);
  const auto to = offsets(traced);

  Matrix out = Matrix::Zero(dk, dk);
  for (long long a = 0; a < dk; ++a) {
    for (long long c = 0; c < dk; ++c) {
      Complex s = 0.0;
      for (long long b = 0; b < dt; ++b) s += m(ko[a] + to[b], ko[c] + to[b]);
      out(a, c) = s;
    }
  }
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& op, const Indices& keep) {
  Indices sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  Dims dims;
  for (int k : sorted) {
    if (k < 0 || k >= op.subsystems()) throw DimensionError("subsystem index out of range");
    dims.push_back(op.dims()[k]);
  }
  Matrix m = partial_trace(op.matrix(), op.dims(), keep);
  if (dims.empty()) dims = {1};
  return HermitianOperator::trusted(m, std::move(dims));
}

Matrix permute_subsystems(const Matrix& m, const Dims& dims, const Indices& order) {
  check_dims(dims, m.rows());
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(order.size()) != n) throw DimensionError("permutation length mismatch");
  check_indices(order, n);
  Dims new_dims(n);
  for (int j = 0; j < n; ++j) new_dims[j] = dims[order[j]];
  const auto old_st = strides(dims);
  const long long d = m.rows();
  // p[new_index] = old_index
  std::vector<Eigen::Index> p(d);
  for (long long idx = 0; idx < d; ++idx) {
    long long rem = idx, old = 0;
    for (int j = n - 1; j >= 0; --j) {
      old += (rem % new_dims[j]) * old_st[order[j]];
      rem /= new_dims[j];
    }
    p[idx] = old;
  }
  Matrix out(d, d);
  for (long long i = 0; i < d; ++i) {
    for (long long j = 0; j < d; ++j) out(i, j) = m(p[i], p[j]);
  }
  return out;
}

HermitianOperator permute_subsystems(const HermitianOperator& op, const Indices& order) {
  Matrix m = permute_subsystems(op.matrix(), op.dims(), order);
  Dims nd(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) nd[j] = op.dims()[order[j]];
  return HermitianOperator::trusted(m, std::move(nd));
}

SpectralSplit spectral_split(const Matrix& x) {
  const Spectrum spec = eigh(x);
  const double cut = spec.cutoff();
  const Eigen::Index d = x.rows();
  SpectralSplit s{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto v = spec.vectors.col(i);
    const double l = spec.values[i];
    Matrix& target = l > cut ? s.positive : (l < -cut ? s.negative : s.zero);
    target.noalias() += v * v.adjoint();
  }
  return s;
}

HermitianOperator positive_spectral_projection(const HermitianOperator& x) {
  const SpectralSplit s = spectral_split(x.matrix());
  return HermitianOperator::trusted(s.positive + s.zero, x.dims());
}

Matrix psd_power(const Spectrum& spec, double s) {
  const double cut = spec.cutoff();
  return spec.map([&](double l) {
    if (l <= cut) return 0.0;
    return s == 0.0 ? 1.0 : std::pow(l, s);
  });
}

Matrix psd_power(const Matrix& a, double s) { return psd_power(eigh(a), s); }

HermitianOperator operator_power(const HermitianOperator& a, double s) {
  return HermitianOperator::trusted(psd_power(a.matrix(), s), a.dims());
}

Matrix support_projector(const Matrix& a) { return psd_power(a, 0.0); }

Matrix psd_log2(const Matrix& a) {
  const Spectrum spec = eigh(a);
  const double cut = std::max(spec.cutoff(), tol::kLogClip);
  return spec.map([&](double l) { return l <= cut ? 0.0 : std::log2(l); });
}

double trace_norm(const Matrix& a) { return eigh(a).values.cwiseAbs().sum(); }

double trace_norm(const HermitianOperator& a) { return trace_norm(a.matrix()); }

double positive_part_trace(const Matrix& x) {
  const RealVector v = eigh(x).values;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::max(v[i], 0.0);
  return s;
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.matrix().rows() != sigma.matrix().rows()) throw DimensionError("fidelity of mismatched operators");
  const Matrix sr = psd_power(rho.matrix(), 0.5);
  const Matrix inner = sr * sigma.matrix() * sr;
  const RealVector v = eigh(0.5 * (inner + inner.adjoint())).values;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::sqrt(std::max(v[i], 0.0));
  return std::clamp(s * s, 0.0, 1.0);
}

double commutator_norm(const Matrix& a, const Matrix& b) { return max_norm(a * b - b * a); }

bool commute(const Matrix& a, const Matrix& b, double tol) { return commutator_norm(a, b) <= tol; }

double trace_product(const Matrix& a, const Matrix& b) {
  // Tr{AB} = sum_ij A_ij B_ji
  return (a.array() * b.transpose().array()).sum().real();
}

HermitianOperator apply_channel(const QuantumChannel& ch, const HermitianOperator& x, const Indices& on) {
  const int n = x.subsystems();
  check_indices(on, n);
  if (on.empty()) throw DimensionError("channel must act on at least one subsystem");
  Dims sel;
  for (int k : on) sel.push_back(x.dims()[k]);
  if (sel != ch.in_dims()) throw DimensionError("channel input dims do not match selected subsystems");

  Indices rest;
  for (int k = 0; k < n; ++k) {
    if (std::find(on.begin(), on.end(), k) == on.end()) rest.push_back(k);
  }
  Indices order = on;
  order.insert(order.end(), rest.begin(), rest.end());
  const Matrix moved = permute_subsystems(x.matrix(), x.dims(), order);

  long long drest = 1;
  Dims rest_dims;
  for (int k : rest) {
    drest *= x.dims()[k];
    rest_dims.push_back(x.dims()[k]);
  }
  const Matrix id = Matrix::Identity(drest, drest);
  const int dout = ch.out_dim();
  Matrix out = Matrix::Zero(dout * drest, dout * drest);
  for (const auto& k : ch.kraus()) {
    const Matrix kk = kron(k, id);
    out.noalias() += kk * moved * kk.adjoint();
  }

  // Current layout: [out block..., rest...]; place the out block where min(on) was.
  const int first = *std::min_element(on.begin(), on.end());
  const int nout = static_cast<int>(ch.out_dims().size());
  Dims cur_dims = ch.out_dims();
  cur_dims.insert(cur_dims.end(), rest_dims.begin(), rest_dims.end());
  Indices final_order;
  std::size_t r = 0;
  while (r < rest.size() && rest[r] < first) final_order.push_back(nout + static_cast<int>(r++));
  for (int j = 0; j < nout; ++j) final_order.push_back(j);
  while (r < rest.size()) final_order.push_back(nout + static_cast<int>(r++));
  Matrix placed = permute_subsystems(out, cur_dims, final_order);
  Dims final_dims(final_order.size());
  for (std::size_t j = 0; j < final_order.size(); ++j) final_dims[j] = cur_dims[final_order[j]];
  return HermitianOperator::trusted(placed, std::move(final_dims));
}

DensityOperator apply_channel(const QuantumChannel& ch, const DensityOperator& rho, const Indices& on) {
  return DensityOperator(apply_channel(ch, rho.op(), on));
}

JointSpectrum joint_diagonalize(std::span<const Matrix> ops) {
  if (ops.empty()) throw PreconditionError("joint diagonalization of an empty family");
  const Eigen::Index d = ops[0].rows();
  Matrix h = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    // Incommensurate weights so that accidental degeneracies of the mix are unlikely.
    const double w = 1.0 / (1.0 + std::sqrt(2.0 + 3.0 * static_cast<double>(k)));
    h += w * ops[k];
  }
  const Spectrum spec = eigh(h);
  JointSpectrum js{spec.vectors, {}};
  for (const auto& a : ops) {
    const Matrix dmat = spec.vectors.adjoint() * a * spec.vectors;
    const Matrix off = dmat - Matrix(dmat.diagonal().asDiagonal());
    if (max_norm(off) > 1e-9 * (1.0 + max_norm(a))) {
      throw PreconditionError("operators do not commute; no joint eigenbasis");
    }
    js.values.push_back(dmat.diagonal().real());
  }
  return js;
}

}  // namespace pbc
