#include "pbc/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pbc/classical.hpp"
#include "pbc/entropy.hpp"
#include "pbc/errors.hpp"

namespace pbc {
namespace {

constexpr double kSlack = 1e-9;

double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

Matrix kron_power(const Matrix& a, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

long long checked_power(int d, int n, long long limit, const char* what) {
  long long total = 1;
  for (int i = 0; i < n; ++i) {
    total *= d;
    if (total > limit) throw BudgetError(std::string(what) + ": dimension d^n exceeds " + std::to_string(limit));
  }
  return total;
}

// Decodes a row-major index into per-copy basis labels and accumulates group counts.
void group_counts(long long index, int d, int n, const std::vector<int>& group_of, std::vector<int>& counts) {
  std::fill(counts.begin(), counts.end(), 0);
  for (int j = 0; j < n; ++j) {
    ++counts[static_cast<std::size_t>(group_of[static_cast<std::size_t>(index % d)])];
    index /= d;
  }
}

}  // namespace

TypicalProjector::TypicalProjector(const HermitianOperator& rho, const HermitianOperator& b, int n, double delta)
    : n_(n), delta_(delta) {
  if (n < 1) throw PreconditionError("typical projector: n must be positive");
  if (!(delta > 0.0)) throw PreconditionError("typical projector: delta must be positive");
  if (rho.matrix().rows() != b.matrix().rows()) throw DimensionError("typical projector: dimension mismatch");
  if (b.min_eigenvalue() < -tol::kPsd) throw PreconditionError("typical projector: B must be positive semidefinite");

  const Spectrum s = eigh(b.matrix());
  basis_ = s.vectors;
  d_ = static_cast<int>(s.values.size());
  label_group_.assign(static_cast<std::size_t>(d_), 0);
  const double group_tol = std::max(s.cutoff(), 1e-12 * s.max_abs());
  for (int i = 0; i < d_; ++i) {
    const double v = s.values(i) <= s.cutoff() ? 0.0 : s.values(i);
    auto it = std::find_if(f_.begin(), f_.end(), [&](double f) { return std::abs(f - v) <= group_tol; });
    if (it == f_.end()) {
      f_.push_back(v);
      mult_.push_back(0);
      q_.push_back(0.0);
      it = f_.end() - 1;
    }
    const auto g = static_cast<std::size_t>(it - f_.begin());
    label_group_[static_cast<std::size_t>(i)] = static_cast<int>(g);
    ++mult_[g];
    const Vector v_i = basis_.col(i);
    q_[g] += std::max(0.0, (v_i.adjoint() * rho.matrix() * v_i)(0, 0).real());
  }

  rate_ = 0.0;
  double second = 0.0;
  for (std::size_t g = 0; g < f_.size(); ++g) {
    if (q_[g] <= 1e-14) continue;
    if (f_[g] == 0.0) throw PreconditionError("typical projector: Tr{rho log B} is undefined");
    const double x = -std::log2(f_[g]);
    rate_ += q_[g] * x;
    second += q_[g] * x * x;
  }
  variance_ = std::max(0.0, second - rate_ * rate_);

  std::vector<double> log_prob;
  std::vector<double> log_dim;
  classical::for_each_type(n, static_cast<int>(f_.size()), [&](const std::vector<int>& k) {
    if (!is_typical_type(k)) return;
    types_.push_back(k);
    const double lm = classical::log_multinomial(k);
    double lp = lm;
    double ld = lm;
    for (std::size_t g = 0; g < k.size(); ++g) {
      if (k[g] == 0) continue;
      lp += q_[g] > 0.0 ? k[g] * std::log(q_[g]) : -std::numeric_limits<double>::infinity();
      ld += k[g] * std::log(static_cast<double>(mult_[g]));
    }
    log_prob.push_back(lp);
    log_dim.push_back(ld);
  });
  probability_ = std::min(1.0, std::exp(log_sum_exp(log_prob)));
  log2_dim_ = log_sum_exp(log_dim) / std::log(2.0);

  if (probability_ < 1.0 - variance_ / (n * delta * delta) - kSlack)
    throw Error("typical projector: probability below the Chebyshev bound");
  if ((rho.matrix() - b.matrix()).cwiseAbs().maxCoeff() <= tol::kHerm) {
    if (log2_dim_ > n * (rate_ + delta) + kSlack) throw Error("typical projector: dimension above 2^{n(H+delta)}");
    if (probability_ > 0.0 && log2_dim_ < std::log2(probability_) + n * (rate_ - delta) - kSlack)
      throw Error("typical projector: dimension below the equipartition bound");
  }
}

bool TypicalProjector::is_typical_type(const std::vector<int>& k) const {
  double sum = 0.0;
  for (std::size_t g = 0; g < k.size(); ++g) {
    if (k[g] == 0) continue;
    if (f_[g] == 0.0) return false;
    sum -= k[g] * std::log2(f_[g]);
  }
  return std::abs(sum / n_ - rate_) <= delta_ + 1e-12;
}

long long TypicalProjector::chebyshev_threshold(double eps) const {
  if (!(eps > 0.0)) throw PreconditionError("chebyshev threshold: eps must be positive");
  return std::max(1LL, static_cast<long long>(std::ceil(variance_ / (eps * delta_ * delta_) - 1e-12)));
}

bool TypicalProjector::contains(const std::vector<int>& sequence) const {
  if (static_cast<int>(sequence.size()) != n_) throw DimensionError("typical projector: sequence length != n");
  std::vector<int> k(f_.size(), 0);
  for (int x : sequence) {
    if (x < 0 || x >= d_) throw DimensionError("typical projector: label out of range");
    ++k[static_cast<std::size_t>(label_group_[static_cast<std::size_t>(x)])];
  }
  return is_typical_type(k);
}

std::vector<bool> TypicalProjector::mask() const {
  const long long total = checked_power(d_, n_, 1LL << 20, "typical projector mask");
  std::vector<bool> out(static_cast<std::size_t>(total));
  std::vector<int> k(f_.size());
  for (long long idx = 0; idx < total; ++idx) {
    group_counts(idx, d_, n_, label_group_, k);
    out[static_cast<std::size_t>(idx)] = is_typical_type(k);
  }
  return out;
}

Matrix TypicalProjector::dense() const {
  checked_power(d_, n_, 4096, "typical projector dense");
  const std::vector<bool> m = mask();
  const Matrix v = kron_power(basis_, n_);
  std::vector<Eigen::Index> cols;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) cols.push_back(static_cast<Eigen::Index>(i));
  const Matrix vs = v(Eigen::all, cols);
  return vs * vs.adjoint();
}

TypicalProjector typical_projector(const HermitianOperator& rho, int n, double delta) {
  return TypicalProjector(rho, rho, n, delta);
}

TypicalProjector relative_typical_projector(const HermitianOperator& rho, const HermitianOperator& b, int n,
                                            double delta) {
  return TypicalProjector(rho, b, n, delta);
}

ProjectorTricks check_projector_tricks(const HermitianOperator& rho, int n, double delta) {
  const TypicalProjector p = typical_projector(rho, n, delta);
  ProjectorTricks out;
  out.trick_margin = std::numeric_limits<double>::infinity();
  out.sqrt_trick_margin = std::numeric_limits<double>::infinity();
  for (const auto& k : p.typical_types()) {
    double log2_eig = 0.0;
    for (std::size_t g = 0; g < k.size(); ++g)
      if (k[g] > 0) log2_eig += k[g] * std::log2(p.group_values()[g]);
    out.trick_margin = std::min(out.trick_margin, n * (p.rate() + delta) + log2_eig);
    out.sqrt_trick_margin = std::min(out.sqrt_trick_margin, 0.5 * (-log2_eig - n * (p.rate() - delta)));
  }
  out.holds = out.trick_margin >= -kSlack && out.sqrt_trick_margin >= -kSlack;
  return out;
}

CompositeTestResult composite_alternative_test(const HermitianOperator& rho,
                                               const std::vector<HermitianOperator>& alts, int n, double delta) {
  if (alts.empty()) throw PreconditionError("composite test: no alternatives");
  const int d = static_cast<int>(rho.matrix().rows());
  std::vector<Matrix> mats;
  for (const auto& b : alts) {
    if (b.matrix().rows() != d) throw DimensionError("composite test: dimension mismatch");
    mats.push_back(b.matrix());
  }
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j)
      if (!commute(mats[i], mats[j])) throw PreconditionError("composite test: alternatives must commute");

  CompositeTestResult out;
  std::vector<double> divergences;
  for (const auto& b : alts) {
    const DivergenceResult dr = relative_entropy(rho, b);
    if (dr.infinite) throw PreconditionError("composite test: support of rho not inside an alternative");
    divergences.push_back(dr.value);
  }
  if (*std::min_element(divergences.begin(), divergences.end()) <= 0.0)
    throw PreconditionError("composite test: every alternative needs D(rho || B) > 0");
  const long long total = checked_power(d, n, 1024, "composite test");

  const JointSpectrum joint = joint_diagonalize(mats);
  const Matrix& w = joint.basis;

  // Product of the relative typical masks, all diagonal in the joint basis.
  std::vector<char> keep(static_cast<std::size_t>(total), 1);
  std::vector<TypicalProjector> rel;
  for (std::size_t i = 0; i < alts.size(); ++i) {
    rel.emplace_back(rho, alts[i], n, delta);
    const TypicalProjector& r = rel.back();
    const double group_tol = 1e-9 * std::max(1.0, *std::max_element(r.group_values().begin(), r.group_values().end()));
    std::vector<int> group_of(static_cast<std::size_t>(d));
    for (int x = 0; x < d; ++x) {
      const double v = joint.values[i](x);
      std::size_t best = 0;
      for (std::size_t g = 1; g < r.group_values().size(); ++g)
        if (std::abs(r.group_values()[g] - v) < std::abs(r.group_values()[best] - v)) best = g;
      if (std::abs(r.group_values()[best] - v) > group_tol) throw Error("composite test: joint basis mismatch");
      group_of[static_cast<std::size_t>(x)] = static_cast<int>(best);
    }
    std::vector<int> k(r.group_values().size());
    for (long long idx = 0; idx < total; ++idx) {
      if (!keep[static_cast<std::size_t>(idx)]) continue;
      group_counts(idx, d, n, group_of, k);
      if (!r.is_typical_type(k)) keep[static_cast<std::size_t>(idx)] = 0;
    }
  }

  const TypicalProjector typ = typical_projector(rho, n, delta);
  const std::vector<bool> typ_mask = typ.mask();
  std::vector<Eigen::Index> typ_cols;
  for (std::size_t i = 0; i < typ_mask.size(); ++i)
    if (typ_mask[i]) typ_cols.push_back(static_cast<Eigen::Index>(i));
  std::vector<Eigen::Index> keep_rows;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) keep_rows.push_back(static_cast<Eigen::Index>(i));

  // T = W^n M (U'^n S S^T U'^n†) M W^n†, with U' = W† U_rho and M, S the masks.
  const Matrix rel_basis = kron_power(w.adjoint() * typ.eigenbasis(), n);
  const Matrix block = rel_basis(keep_rows, typ_cols);
  const Matrix wn_keep = kron_power(w, n)(Eigen::all, keep_rows);
  const Matrix half = wn_keep * block;
  Matrix t = half * half.adjoint();
  t = (t + t.adjoint()) / 2.0;

  const Dims dims(static_cast<std::size_t>(n), d);
  const Matrix rho_n = kron_power(rho.matrix(), n);
  out.type1 = std::clamp(1.0 - trace_product(t, rho_n), 0.0, 1.0);
  for (std::size_t i = 0; i < alts.size(); ++i) {
    const double beta = std::max(0.0, trace_product(t, kron_power(mats[i], n)));
    out.type2.push_back(beta);
    out.exponents.push_back(beta > 0.0 ? -std::log2(beta) / n : std::numeric_limits<double>::infinity());
    out.exponent_bounds.push_back(divergences[i] - 2.0 * delta);
  }
  out.exponents_hold = true;
  for (std::size_t i = 0; i < alts.size(); ++i)
    out.exponents_hold = out.exponents_hold && out.exponents[i] >= out.exponent_bounds[i] - kSlack;

  out.typical_miss = std::max(0.0, 1.0 - typ.probability());
  out.miss_bound = out.typical_miss;
  double worst_variance = typ.variance();
  for (const auto& r : rel) {
    const double miss = std::max(0.0, 1.0 - r.probability());
    out.relative_miss.push_back(miss);
    out.miss_bound += 2.0 * std::sqrt(miss);
    worst_variance = std::max(worst_variance, r.variance());
  }
  out.miss_bound_holds = out.type1 <= out.miss_bound + kSlack;
  out.chebyshev_eps = worst_variance / (n * delta * delta);
  out.chebyshev_bound =
      out.chebyshev_eps + 2.0 * static_cast<double>(alts.size()) * std::sqrt(out.chebyshev_eps);
  out.chebyshev_bound_holds = out.type1 <= out.chebyshev_bound + kSlack;
  out.test = BinaryTest{HermitianOperator::trusted(t, dims), std::nullopt, std::nullopt};
  return out;
}

}  // namespace pbc
