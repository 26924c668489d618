#include "pbc/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pbc/errors.hpp"

namespace pbc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double entropy_of(const RealVector& v) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] > tol::kLogClip) h -= v[i] * std::log2(v[i]);
  }
  return h;
}

Indices complement(const Indices& a, int n) {
  Indices rest;
  for (int k = 0; k < n; ++k) {
    if (std::find(a.begin(), a.end(), k) == a.end()) rest.push_back(k);
  }
  return rest;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw PreconditionError("Renyi order must lie in (0,1) or (1,inf); use relative_entropy for alpha = 1");
  }
}

void check_same_order(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.order() != b.order()) throw DimensionError("operators of different order");
}

DivergenceResult infinite_result(bool violation) { return {kInf, true, violation}; }

bool outside_support(double weight, double trace) { return weight > 1e-10 * std::max(trace, 1e-300); }

}  // namespace

PairSpectrum::PairSpectrum(const Matrix& am, const Matrix& bm) {
  const Spectrum sa = eigh(am), sb = eigh(bm);
  a = sa.values;
  b = sb.values;
  a_cut = sa.cutoff();
  b_cut = sb.cutoff();
  overlap = (sa.vectors.adjoint() * sb.vectors).cwiseAbs2();
}

double PairSpectrum::trace_powers(double s, double t) const {
  auto pw = [](double l, double cut, double e) {
    if (l <= cut) return 0.0;
    return e == 0.0 ? 1.0 : std::pow(l, e);
  };
  RealVector fa(a.size()), gb(b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) fa[i] = pw(a[i], a_cut, s);
  for (Eigen::Index j = 0; j < b.size(); ++j) gb[j] = pw(b[j], b_cut, t);
  return fa.dot(overlap * gb);
}

double PairSpectrum::weight_outside_b() const {
  RealVector fa(a.size()), kb(b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) fa[i] = std::max(a[i], 0.0);
  for (Eigen::Index j = 0; j < b.size(); ++j) kb[j] = b[j] <= b_cut ? 1.0 : 0.0;
  return fa.dot(overlap * kb);
}

double von_neumann_entropy(const HermitianOperator& rho) { return entropy_of(rho.spectrum().values); }

double renyi2_entropy(const HermitianOperator& rho) {
  return -std::log2(rho.matrix().squaredNorm() / (rho.trace() * rho.trace()));
}

double conditional_entropy(const HermitianOperator& rho, const Indices& a) {
  const Indices b = complement(a, rho.subsystems());
  if (b.empty()) return von_neumann_entropy(rho);
  return von_neumann_entropy(rho) - von_neumann_entropy(partial_trace(rho, b));
}

double collision_conditional_entropy(const HermitianOperator& rho, const Indices& a) {
  const Indices b = complement(a, rho.subsystems());
  if (b.empty()) return renyi2_entropy(rho);
  Indices order = a;
  order.insert(order.end(), b.begin(), b.end());
  const HermitianOperator joint = permute_subsystems(rho, order);
  const HermitianOperator rb = partial_trace(rho, b);
  const long long da = joint.order() / rb.order();
  const Matrix x = kron(Matrix::Identity(da, da), psd_power(rb.matrix(), -0.5));
  const Matrix y = joint.matrix() * x;
  return -std::log2(trace_product(y, y));
}

double collision_conditional_entropy_cq(const std::vector<double>& p, const std::vector<HermitianOperator>& sigma) {
  if (p.size() != sigma.size()) throw DimensionError("cq weights and states differ in length");
  double s = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) s += p[y] * sigma[y].matrix().squaredNorm();
  return -std::log2(s);
}

DivergenceResult relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma) {
  check_same_order(rho, sigma);
  const Matrix pi_sigma = support_projector(sigma.matrix());
  const double out = rho.trace() - trace_product(rho.matrix(), pi_sigma);
  if (outside_support(out, rho.trace())) return infinite_result(true);
  const double v = trace_product(rho.matrix(), psd_log2(rho.matrix())) -
                   trace_product(rho.matrix(), psd_log2(sigma.matrix()));
  return {v, false, false};
}

DivergenceResult renyi_relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha) {
  check_alpha(alpha);
  check_same_order(rho, sigma);
  const PairSpectrum ps(rho.matrix(), sigma.matrix());
  if (alpha > 1.0 && outside_support(ps.weight_outside_b(), rho.trace())) return infinite_result(true);
  const double q = ps.trace_powers(alpha, 1.0 - alpha);
  if (!(q > 0.0)) return infinite_result(false);
  return {std::log2(q) / (alpha - 1.0), false, false};
}

DivergenceResult sandwiched_renyi(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha) {
  check_alpha(alpha);
  check_same_order(rho, sigma);
  const Spectrum ss = sigma.spectrum();
  if (alpha > 1.0) {
    const double out = rho.trace() - trace_product(rho.matrix(), psd_power(ss, 0.0));
    if (outside_support(out, rho.trace())) return infinite_result(true);
  }
  const Matrix sp = psd_power(ss, (1.0 - alpha) / (2.0 * alpha));
  const Matrix inner = sp * rho.matrix() * sp;
  const RealVector v = eigh(0.5 * (inner + inner.adjoint())).values;
  double q = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) q += std::pow(v[i], alpha);
  }
  if (!(q > 0.0)) return infinite_result(false);
  return {std::log2(q) / (alpha - 1.0), false, false};
}

double relative_entropy_variance(const HermitianOperator& rho, const HermitianOperator& sigma) {
  check_same_order(rho, sigma);
  const DivergenceResult d = relative_entropy(rho, sigma);
  if (d.infinite) throw PreconditionError("relative entropy variance needs supp(rho) within supp(sigma)");
  const Matrix l = psd_log2(rho.matrix()) - psd_log2(sigma.matrix());
  const double v = trace_product(rho.matrix(), l * l) - d.value * d.value;
  return std::max(v, 0.0);
}

BipartiteView bipartite_view(const HermitianOperator& rho, const Indices& a) {
  const Indices b = complement(a, rho.subsystems());
  if (a.empty() || b.empty()) throw DimensionError("bipartite view needs two nonempty parts");
  Indices order = a;
  order.insert(order.end(), b.begin(), b.end());
  const HermitianOperator joint = permute_subsystems(rho, order);
  const HermitianOperator prod = tensor(partial_trace(rho, a), partial_trace(rho, b));
  return {joint, prod.with_dims(joint.dims())};
}

double mutual_information(const HermitianOperator& rho, const Indices& a) {
  const Indices b = complement(a, rho.subsystems());
  if (a.empty() || b.empty()) throw DimensionError("mutual information needs two nonempty parts");
  return von_neumann_entropy(partial_trace(rho, a)) + von_neumann_entropy(partial_trace(rho, b)) -
         von_neumann_entropy(rho);
}

DivergenceResult renyi_mutual_information(const HermitianOperator& rho, double alpha, const Indices& a) {
  const BipartiteView v = bipartite_view(rho, a);
  return renyi_relative_entropy(v.joint, v.product, alpha);
}

double mutual_information_variance(const HermitianOperator& rho, const Indices& a) {
  const BipartiteView v = bipartite_view(rho, a);
  return relative_entropy_variance(v.joint, v.product);
}

double log2_trace_power_product(const HermitianOperator& a, const HermitianOperator& b, double s) {
  check_same_order(a, b);
  return std::log2(PairSpectrum(a.matrix(), b.matrix()).trace_powers(s, 1.0 - s));
}

ChernoffResult chernoff_distance(const HermitianOperator& a, const HermitianOperator& b) {
  check_same_order(a, b);
  if (max_norm(a.matrix() * b.matrix()) <= 1e-12 * (1.0 + max_norm(a.matrix())) * (1.0 + max_norm(b.matrix()))) {
    return {kInf, 0.5, true, false};
  }
  const PairSpectrum ps(a.matrix(), b.matrix());
  auto f = [&](double s) { return std::log2(ps.trace_powers(s, 1.0 - s)); };

  constexpr int kCoarse = 16;
  std::vector<double> coarse(kCoarse + 1);
  for (int k = 0; k <= kCoarse; ++k) coarse[k] = f(static_cast<double>(k) / kCoarse);
  const double scale = 1.0 + std::abs(*std::max_element(coarse.begin(), coarse.end()));
  bool convex = true;
  for (int k = 1; k < kCoarse; ++k) {
    if (coarse[k - 1] - 2 * coarse[k] + coarse[k + 1] < -1e-9 * scale) convex = false;
  }

  ChernoffResult r;
  if (!convex) {
    constexpr int kFine = 4096;
    double best = kInf;
    for (int k = 0; k <= kFine; ++k) {
      const double s = static_cast<double>(k) / kFine;
      const double v = f(s);
      if (v < best) {
        best = v;
        r.s = s;
      }
    }
    r.value = -best;
    r.grid_fallback = true;
    return r;
  }

  const int kmin = static_cast<int>(std::min_element(coarse.begin(), coarse.end()) - coarse.begin());
  double lo = std::max(0, kmin - 1) / static_cast<double>(kCoarse);
  double hi = std::min(kCoarse, kmin + 1) / static_cast<double>(kCoarse);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-8) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  double best_s = 0.5 * (lo + hi), best = f(best_s);
  for (int k = 0; k <= kCoarse; ++k) {
    if (coarse[k] < best) {
      best = coarse[k];
      best_s = static_cast<double>(k) / kCoarse;
    }
  }
  r.value = -best;
  r.s = best_s;
  return r;
}

}  // namespace pbc
