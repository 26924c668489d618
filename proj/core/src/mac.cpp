#include "pbc/mac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pbc/entropy.hpp"
#include "pbc/errors.hpp"
#include "pbc/parallel.hpp"
#include "pbc/random.hpp"

namespace pbc {
namespace {

struct Layout {
  Dims r;  // reference dims per sender
  Dims a;  // channel input dims per sender
  int c = 0;
};

Layout layout_of(const MacCodeSpec& spec) {
  const auto k = spec.resources.size();
  if (k == 0) throw PreconditionError("MAC needs at least one sender");
  if (spec.channel.in_dims().size() != k)
    throw DimensionError("channel input layout must list one subsystem per sender");
  Layout out;
  for (std::size_t i = 0; i < k; ++i) {
    const int din = spec.channel.in_dims()[i];
    const int total = spec.resources[i].op().order();
    if (total % din != 0) throw DimensionError("resource order is not a multiple of the sender input dimension");
    out.r.push_back(total / din);
    out.a.push_back(din);
  }
  out.c = spec.channel.out_dim();
  return out;
}

std::vector<unsigned> nonempty_subsets(int k) {
  std::vector<unsigned> out;
  for (unsigned j = 1; j < (1u << k); ++j) out.push_back(j);
  return out;
}

BinaryTest test_of(const MacCodeSpec& spec) { return spec.test ? *spec.test : default_mac_test(spec); }

void check_test(const BinaryTest& t, int order) {
  if (t.op.order() != order) throw DimensionError("test operator does not act on R_1 ... R_K C");
  if (t.op.min_eigenvalue() < -tol::kPsd || t.op.max_eigenvalue() > 1.0 + tol::kPsd)
    throw PreconditionError("test operator must satisfy 0 <= T <= I");
}

Matrix inverse_sqrt(const Matrix& m) {
  const Spectrum s = eigh(m);
  const double cut = 1e-12 * s.max_abs();
  RealVector inv(s.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = s.values(i) > cut ? 1.0 / std::sqrt(s.values(i)) : 0.0;
  return s.vectors * inv.asDiagonal() * s.vectors.adjoint();
}

// Places an operator on [R_1, ..., R_K, C] at copies `tuple` of R_1^{M_1} ... R_K^{M_K} C, with
// rest[k] on the remaining copies of sender k.
class Embedding {
 public:
  Embedding(const Layout& layout, const std::vector<int>& sizes) : layout_(layout), sizes_(sizes) {
    for (std::size_t k = 0; k < sizes.size(); ++k)
      for (int j = 0; j < sizes[k]; ++j) dims_.push_back(layout.r[k]);
    dims_.push_back(layout.c);
  }

  long long total() const { return dim_product(dims_); }

  Matrix place(const Matrix& x, const std::vector<Matrix>& rest, const std::vector<int>& tuple) const {
    const int k = static_cast<int>(sizes_.size());
    Matrix full = Matrix::Identity(1, 1);
    Indices order(dims_.size());
    int others = 0;
    for (int s = 0; s < k; ++s)
      for (int j = 0; j < sizes_[s]; ++j)
        if (j != tuple[s]) {
          full = kron(full, rest[s]);
          ++others;
        }
    full = kron(full, x);
    Dims built;
    int pos = 0;
    int other_index = 0;
    for (int s = 0; s < k; ++s)
      for (int j = 0; j < sizes_[s]; ++j) {
        if (j == tuple[s]) order[pos] = others + s;
        else order[pos] = other_index++;
        ++pos;
      }
    order[pos] = others + k;
    for (int s = 0; s < k; ++s)
      for (int j = 0; j < sizes_[s]; ++j)
        if (j != tuple[s]) built.push_back(layout_.r[s]);
    for (int s = 0; s < k; ++s) built.push_back(layout_.r[s]);
    built.push_back(layout_.c);
    return permute_subsystems(full, built, order);
  }

 private:
  Layout layout_;
  std::vector<int> sizes_;
  Dims dims_;
};

std::vector<int> tuple_at(long long index, const std::vector<int>& sizes) {
  std::vector<int> t(sizes.size());
  for (std::size_t k = sizes.size(); k-- > 0;) {
    t[k] = static_cast<int>(index % sizes[k]);
    index /= sizes[k];
  }
  return t;
}

std::string system_name(int k) { return "S" + std::to_string(k + 1); }

std::string join_names(unsigned mask, int k, bool with_c) {
  std::string out;
  for (int i = 0; i < k; ++i)
    if (mask & (1u << i)) out += system_name(i);
  if (with_c) out += "C";
  return out.empty() ? "-" : out;
}

Indices members(unsigned mask, int k) {
  Indices out;
  for (int i = 0; i < k; ++i)
    if (mask & (1u << i)) out.push_back(i);
  return out;
}

void check_region_state(const HermitianOperator& omega) {
  if (omega.subsystems() < 2) throw DimensionError("state must have sender subsystems followed by C");
  if (std::abs(omega.trace() - 1.0) > tol::kTrace) throw PreconditionError("state must have unit trace");
}

}  // namespace

HermitianOperator mac_output(const MacCodeSpec& spec, unsigned decoupled) {
  const Layout lay = layout_of(spec);
  const int k = static_cast<int>(lay.r.size());
  std::vector<HermitianOperator> parts;
  Dims dims;
  for (int i = 0; i < k; ++i) {
    const HermitianOperator theta = spec.resources[i].op().with_dims({lay.r[i], lay.a[i]});
    if (decoupled & (1u << i)) parts.push_back(tensor(partial_trace(theta, {0}), partial_trace(theta, {1})));
    else parts.push_back(theta);
    dims.push_back(lay.r[i]);
    dims.push_back(lay.a[i]);
  }
  const HermitianOperator full = tensor(parts).with_dims(dims);
  Indices order(static_cast<std::size_t>(2 * k));
  for (int i = 0; i < 2 * k; ++i) order[i] = i < k ? 2 * i : 2 * (i - k) + 1;
  const HermitianOperator grouped = permute_subsystems(full, order);

  Dims flat_dims(lay.r.begin(), lay.r.end());
  const int a_total = static_cast<int>(dim_product(lay.a));
  flat_dims.push_back(a_total);
  const QuantumChannel flat(spec.channel.kraus(), {a_total}, {lay.c});
  const HermitianOperator out = apply_channel(flat, grouped.with_dims(flat_dims), {k});
  Dims out_dims(lay.r.begin(), lay.r.end());
  out_dims.push_back(lay.c);
  return out.with_dims(out_dims);
}

BinaryTest default_mac_test(const MacCodeSpec& spec) {
  const int k = static_cast<int>(spec.resources.size());
  if (spec.sizes.size() != spec.resources.size()) throw PreconditionError("one message count per sender required");
  HermitianOperator x = mac_output(spec);
  for (unsigned j : nonempty_subsets(k)) {
    double weight = 1.0;
    for (int i : members(j, k)) weight *= spec.sizes[i];
    x = x - mac_output(spec, j) * weight;
  }
  return BinaryTest{positive_spectral_projection(x), std::nullopt, std::nullopt};
}

CodePerformance simulate_mac(const MacCodeSpec& spec) {
  const Layout lay = layout_of(spec);
  const int k = static_cast<int>(lay.r.size());
  if (k > kMaxSimulatedSenders) throw BudgetError("simulate_mac: exact simulation supports at most 3 senders");
  if (spec.sizes.size() != spec.resources.size()) throw PreconditionError("one message count per sender required");
  long long total = lay.c;
  long long tuples = 1;
  for (int i = 0; i < k; ++i) {
    if (spec.sizes[i] < 1) throw PreconditionError("message counts must be positive");
    tuples *= spec.sizes[i];
    for (int j = 0; j < spec.sizes[i]; ++j) {
      total *= lay.r[i];
      if (total > kSimulationBudget) throw BudgetError("simulate_mac: prod dim(R_k)^M_k dim(C) exceeds 2^14");
    }
  }

  const BinaryTest test = test_of(spec);
  const HermitianOperator omega = mac_output(spec);
  check_test(test, omega.order());

  const Embedding embed(lay, spec.sizes);
  std::vector<Matrix> ids;
  std::vector<Matrix> refs;
  for (int i = 0; i < k; ++i) {
    ids.push_back(Matrix::Identity(lay.r[i], lay.r[i]));
    const HermitianOperator theta = spec.resources[i].op().with_dims({lay.r[i], lay.a[i]});
    refs.push_back(partial_trace(theta, {0}).matrix());
  }
  Matrix sum = Matrix::Zero(total, total);
  for (long long t = 0; t < tuples; ++t) sum += embed.place(test.op.matrix(), ids, tuple_at(t, spec.sizes));
  const Matrix inv = inverse_sqrt(sum);

  auto error_for = [&](long long t) {
    const std::vector<int> tuple = tuple_at(t, spec.sizes);
    const Matrix lambda = inv * embed.place(test.op.matrix(), ids, tuple) * inv;
    const Matrix rho = embed.place(omega.matrix(), refs, tuple);
    return std::clamp(omega.trace() - trace_product(lambda, rho), 0.0, 1.0);
  };

  CodePerformance out;
  out.exact_error = error_for(0);
  if (tuples > 1) out.message_spread = std::abs(out.exact_error - error_for(tuples - 1));
  MacCodeSpec with_test = spec;
  with_test.test = test;
  out.bound = mac_one_shot_bound(with_test);
  out.test_used = test;
  return out;
}

MacBoundTerms mac_bound_terms(const MacCodeSpec& spec) {
  if (!(spec.c > 0.0)) throw PreconditionError("Hayashi-Nagaoka constant must be positive");
  if (spec.sizes.size() != spec.resources.size()) throw PreconditionError("one message count per sender required");
  for (int m : spec.sizes)
    if (m < 1) throw PreconditionError("message counts must be positive");
  const int k = static_cast<int>(spec.resources.size());
  const BinaryTest test = test_of(spec);
  const HermitianOperator omega = mac_output(spec);
  check_test(test, omega.order());

  MacBoundTerms out;
  out.miss = omega.trace() - trace_product(test.op.matrix(), omega.matrix());
  const double c1 = 1.0 + spec.c;
  const double c2 = 2.0 + spec.c + 1.0 / spec.c;
  double confusion_sum = 0.0;
  for (unsigned j : nonempty_subsets(k)) {
    double mult = 1.0;
    for (int i : members(j, k)) mult *= spec.sizes[i] - 1;
    const double conf = trace_product(test.op.matrix(), mac_output(spec, j).matrix());
    out.subsets.push_back(j);
    out.confusion.push_back(conf);
    out.multiplicity.push_back(mult);
    confusion_sum += mult * conf;
  }
  out.bound = c1 * out.miss + c2 * confusion_sum;
  return out;
}

double mac_one_shot_bound(const MacCodeSpec& spec) { return mac_bound_terms(spec).bound; }

CqMac::CqMac(std::vector<std::vector<DensityOperator>> outputs, std::vector<double> p_x, std::vector<double> p_y)
    : outputs_(std::move(outputs)), p_x_(std::move(p_x)), p_y_(std::move(p_y)) {
  if (p_x_.empty() || p_y_.empty()) throw PreconditionError("input alphabets must be nonempty");
  if (outputs_.size() != p_x_.size()) throw DimensionError("output table rows must match |X|");
  auto check_dist = [](const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) {
      if (!(v >= 0.0)) throw PreconditionError("probabilities must be nonnegative");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) throw PreconditionError("input distribution must sum to 1");
  };
  check_dist(p_x_);
  check_dist(p_y_);
  const int d = outputs_[0].empty() ? 0 : outputs_[0][0].op().order();
  for (const auto& row : outputs_) {
    if (row.size() != p_y_.size()) throw DimensionError("output table columns must match |Y|");
    for (const auto& rho : row) {
      if (rho.op().order() != d) throw DimensionError("all outputs must share one dimension");
      if (std::abs(rho.trace() - 1.0) > tol::kTrace) throw PreconditionError("outputs must be normalized");
    }
  }
}

HermitianOperator CqMac::joint_state() const {
  const int nx = x_size();
  const int ny = y_size();
  const int d = output_dim();
  Matrix m = Matrix::Zero(nx * ny * d, nx * ny * d);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      m.block((x * ny + y) * d, (x * ny + y) * d, d, d) = p_x_[x] * p_y_[y] * outputs_[x][y].matrix();
  return HermitianOperator(m, {nx, ny, d});
}

HermitianOperator CqMac::average_output() const {
  const int d = output_dim();
  Matrix m = Matrix::Zero(d, d);
  for (int x = 0; x < x_size(); ++x)
    for (int y = 0; y < y_size(); ++y) m += p_x_[x] * p_y_[y] * outputs_[x][y].matrix();
  return HermitianOperator(m, {d});
}

std::vector<std::vector<HermitianOperator>> cq_test_family(const CqMac& mac, int l, int m, CqTestFamily family) {
  const int nx = mac.x_size();
  const int ny = mac.y_size();
  const int d = mac.output_dim();
  std::vector<std::vector<HermitianOperator>> q(static_cast<std::size_t>(nx));
  const Matrix avg = mac.average_output().matrix();
  if (family == CqTestFamily::PrettyGood) {
    const Matrix inv = inverse_sqrt(avg);
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) {
        const Matrix op = inv * (mac.p_x()[x] * mac.p_y()[y] * mac.output(x, y).matrix()) * inv;
        q[x].push_back(HermitianOperator(0.5 * (op + op.adjoint()), {d}));
      }
    return q;
  }
  std::vector<Matrix> given_y(static_cast<std::size_t>(ny), Matrix::Zero(d, d));
  std::vector<Matrix> given_x(static_cast<std::size_t>(nx), Matrix::Zero(d, d));
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      given_y[y] += mac.p_x()[x] * mac.output(x, y).matrix();
      given_x[x] += mac.p_y()[y] * mac.output(x, y).matrix();
    }
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      const Matrix diff = mac.output(x, y).matrix() - static_cast<double>(l) * given_y[y] -
                          static_cast<double>(m) * given_x[x] - static_cast<double>(l) * m * avg;
      q[x].push_back(positive_spectral_projection(HermitianOperator(diff, {d})));
    }
  return q;
}

double cq_codebook_error(const CqMac& mac, const std::vector<std::vector<HermitianOperator>>& tests,
                         const std::vector<int>& xs, const std::vector<int>& ys) {
  const int d = mac.output_dim();
  Matrix sum = Matrix::Zero(d, d);
  for (int x : xs)
    for (int y : ys) sum += tests[x][y].matrix();
  const Matrix inv = inverse_sqrt(sum);
  double success = 0.0;
  for (int x : xs)
    for (int y : ys) success += trace_product(inv * tests[x][y].matrix() * inv, mac.output(x, y).matrix());
  const double pairs = static_cast<double>(xs.size() * ys.size());
  return std::clamp(1.0 - success / pairs, 0.0, 1.0);
}

DerandomizedCode derandomize_cq_mac(const CqMac& mac, int l, int m, const DerandomizeOptions& options) {
  if (l < 1 || m < 1) throw PreconditionError("codebook sizes must be positive");
  if (options.search_budget <= 0) throw PreconditionError("codebook search budget must be positive");
  const int nx = mac.x_size();
  const int ny = mac.y_size();
  const auto tests = options.custom_tests ? *options.custom_tests : cq_test_family(mac, l, m, options.family);
  if (static_cast<int>(tests.size()) != nx) throw DimensionError("test table rows must match |X|");
  for (const auto& row : tests)
    if (static_cast<int>(row.size()) != ny) throw DimensionError("test table columns must match |Y|");

  double count = 1.0;
  for (int i = 0; i < l; ++i) count *= nx;
  for (int i = 0; i < m; ++i) count *= ny;
  const bool enumerate = count <= static_cast<double>(options.enumeration_limit);
  const auto candidates = enumerate ? static_cast<long long>(count) : options.search_budget;

  std::vector<std::vector<int>> xs(static_cast<std::size_t>(candidates));
  std::vector<std::vector<int>> ys(static_cast<std::size_t>(candidates));
  std::vector<double> weight(static_cast<std::size_t>(candidates), 1.0);
  if (enumerate) {
    for (long long c = 0; c < candidates; ++c) {
      long long rem = c;
      std::vector<int> y(static_cast<std::size_t>(m));
      std::vector<int> x(static_cast<std::size_t>(l));
      for (int i = m; i-- > 0;) {
        y[i] = static_cast<int>(rem % ny);
        rem /= ny;
      }
      for (int i = l; i-- > 0;) {
        x[i] = static_cast<int>(rem % nx);
        rem /= nx;
      }
      double w = 1.0;
      for (int v : x) w *= mac.p_x()[v];
      for (int v : y) w *= mac.p_y()[v];
      xs[c] = std::move(x);
      ys[c] = std::move(y);
      weight[c] = w;
    }
  } else {
    Rng rng = make_rng(options.seed);
    std::discrete_distribution<int> px(mac.p_x().begin(), mac.p_x().end());
    std::discrete_distribution<int> py(mac.p_y().begin(), mac.p_y().end());
    for (long long c = 0; c < candidates; ++c) {
      for (int i = 0; i < l; ++i) xs[c].push_back(px(rng));
      for (int i = 0; i < m; ++i) ys[c].push_back(py(rng));
      weight[c] = 1.0 / static_cast<double>(candidates);
    }
  }

  std::vector<double> errors(static_cast<std::size_t>(candidates));
  parallel_for(static_cast<std::size_t>(candidates),
               [&](std::size_t c) { errors[c] = cq_codebook_error(mac, tests, xs[c], ys[c]); });

  DerandomizedCode out;
  out.enumerated = enumerate;
  out.candidates = candidates;
  std::size_t best = 0;
  for (std::size_t c = 0; c < errors.size(); ++c) {
    out.ensemble_average += weight[c] * errors[c];
    if (errors[c] < errors[best]) best = c;
  }
  out.codebook_x = xs[best];
  out.codebook_y = ys[best];
  out.avg_error = errors[best];

  const int d = mac.output_dim();
  Matrix sum = Matrix::Zero(d, d);
  for (int x : out.codebook_x)
    for (int y : out.codebook_y) sum += tests[x][y].matrix();
  const Matrix inv = inverse_sqrt(sum);
  for (int x : out.codebook_x)
    for (int y : out.codebook_y) {
      const Matrix op = inv * tests[x][y].matrix() * inv;
      out.decoder.push_back(HermitianOperator(0.5 * (op + op.adjoint()), {d}));
    }
  return out;
}

RateRegion rate_region_renyi2(const HermitianOperator& omega) {
  check_region_state(omega);
  const int k = omega.subsystems() - 1;
  RateRegion region{k, "renyi2", false, {}};
  for (unsigned j : nonempty_subsets(k)) {
    const unsigned rest = ((1u << k) - 1) & ~j;
    Indices keep = members(rest, k);
    keep.push_back(k);
    const double h2 = renyi2_entropy(partial_trace(omega, keep));
    // H(S(J^c) C | S(J)) on the full state.
    Indices cond = keep;
    const double h = conditional_entropy(omega, cond);
    const std::string rest_c = join_names(rest, k, true);
    const std::string given = join_names(j, k, false);
    RateConstraint c{j, h2 - h, "H2(" + rest_c + ") - H(" + rest_c + "|" + given + ")", ""};
    if (k == 2 && j != 3) {
      const unsigned other = 3 & ~j;
      const std::string oc = join_names(j, k, true);
      const std::string og = join_names(other, k, false);
      c.alternate_label = "H2(" + oc + ") - H(" + oc + "|" + og + ")";
    }
    region.constraints.push_back(std::move(c));
  }
  return region;
}

RateRegion rate_region_collision(const HermitianOperator& omega) {
  check_region_state(omega);
  const int k = omega.subsystems() - 1;
  RateRegion region{k, "collision", false, {}};
  Indices senders(static_cast<std::size_t>(k));
  std::iota(senders.begin(), senders.end(), 0);
  const double h_given_all = conditional_entropy(omega, {k});
  for (unsigned j : nonempty_subsets(k)) {
    const unsigned rest = ((1u << k) - 1) & ~j;
    Indices keep = members(rest, k);
    const int c_index = static_cast<int>(keep.size());
    keep.push_back(k);
    const HermitianOperator marginal = partial_trace(omega, keep);
    const double h2 = collision_conditional_entropy(marginal, {c_index});
    const std::string given = rest == 0 ? "" : "|" + join_names(rest, k, false);
    region.constraints.push_back(
        {j, h2 - h_given_all, "H2(C" + given + ") - H(C|" + join_names((1u << k) - 1, k, false) + ")", ""});
  }
  return region;
}

RateRegion rate_region_mi(const HermitianOperator& omega) {
  check_region_state(omega);
  const int k = omega.subsystems() - 1;
  RateRegion region{k, "mutual-information", k >= 3, {}};
  for (unsigned j : nonempty_subsets(k)) {
    const unsigned rest = ((1u << k) - 1) & ~j;
    const double value = mutual_information(omega, members(j, k));
    region.constraints.push_back(
        {j, value, "I(" + join_names(j, k, false) + ";" + join_names(rest, k, true) + ")", ""});
  }
  return region;
}

bool region_membership(const RateRegion& region, const std::vector<double>& rates, double tol) {
  if (static_cast<int>(rates.size()) != region.senders) throw DimensionError("one rate per sender required");
  for (double r : rates)
    if (r < -tol) return false;
  for (const auto& c : region.constraints) {
    double sum = 0.0;
    for (int i : members(c.subset, region.senders)) sum += rates[i];
    if (sum > c.bound + tol) return false;
  }
  return true;
}

namespace {

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Clips a convex polygon to {a x + b y <= c}.
std::vector<Point2> clip(const std::vector<Point2>& poly, double a, double b, double c) {
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = poly[i];
    const Point2 q = poly[(i + 1) % n];
    const double fp = a * p.x + b * p.y - c;
    const double fq = a * q.x + b * q.y - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

std::vector<Point2> region_polygon(const RateRegion& region, bool& unbounded) {
  if (region.senders != 2) throw PreconditionError("vertex enumeration needs exactly two senders");
  // A box well outside every finite bound; vertices on its far edges mark a missing constraint.
  double far = 1.0;
  for (const auto& c : region.constraints)
    if (std::isfinite(c.bound)) far = std::max(far, std::abs(c.bound));
  far *= 4.0;
  std::vector<Point2> poly{{0.0, 0.0}, {far, 0.0}, {far, far}, {0.0, far}};
  for (const auto& c : region.constraints) {
    if (!std::isfinite(c.bound)) {
      if (c.bound < 0) return {};
      continue;
    }
    poly = clip(poly, (c.subset & 1u) ? 1.0 : 0.0, (c.subset & 2u) ? 1.0 : 0.0, c.bound);
    if (poly.empty()) return poly;
  }
  std::vector<Point2> out;
  for (const Point2& p : poly) {
    if (p.x >= far * 0.5 || p.y >= far * 0.5) unbounded = true;
    const bool dup = std::any_of(out.begin(), out.end(), [&](Point2 q) {
      return std::abs(q.x - p.x) < 1e-12 && std::abs(q.y - p.y) < 1e-12;
    });
    if (!dup) out.push_back(p);
  }
  return out;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-15) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-15) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

RegionVertices region_vertices_2d(const RateRegion& a, const RateRegion& b) {
  RegionVertices out;
  out.first = region_polygon(a, out.unbounded);
  out.second = region_polygon(b, out.unbounded);
  std::vector<Point2> all = out.first;
  all.insert(all.end(), out.second.begin(), out.second.end());
  out.hull = convex_hull(all);
  return out;
}

double polygon_area(const std::vector<Point2>& ccw) {
  double twice = 0.0;
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Point2 p = ccw[i];
    const Point2 q = ccw[(i + 1) % ccw.size()];
    twice += p.x * q.y - q.x * p.y;
  }
  return twice / 2.0;
}

bool polygon_contains(const std::vector<Point2>& ccw, Point2 p, double tol) {
  if (ccw.size() < 3) return false;
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Point2 a = ccw[i];
    const Point2 b = ccw[(i + 1) % ccw.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (cross(a, b, p) < -tol * std::max(len, 1.0)) return false;
  }
  return true;
}

DivergenceIdentities mac_divergence_identities(const DensityOperator& theta, const DensityOperator& gamma,
                                               const QuantumChannel& channel, double r1, double r2) {
  MacCodeSpec spec{{theta, gamma}, channel, {1, 1}, std::nullopt, 1.0};
  const HermitianOperator rho = mac_output(spec);
  const HermitianOperator w_r = partial_trace(rho, {0});
  const HermitianOperator w_s = partial_trace(rho, {1});
  const HermitianOperator w_c = partial_trace(rho, {2});
  const HermitianOperator w_sc = partial_trace(rho, {1, 2});
  const HermitianOperator w_rc = partial_trace(rho, {0, 2});
  const Dims dims = rho.dims();

  const HermitianOperator b1 = tensor(w_r, w_sc).with_dims(dims) * std::exp2(r1);
  // omega_S (x) omega_RC reordered to [R, S, C].
  const HermitianOperator b2 =
      permute_subsystems(tensor(w_s, w_rc).with_dims({dims[1], dims[0], dims[2]}), {1, 0, 2}) * std::exp2(r2);
  const HermitianOperator b3 = tensor(tensor(w_r, w_s), w_c).with_dims(dims) * std::exp2(r1 + r2);

  const double h_rsc = von_neumann_entropy(rho);
  const double h_r = von_neumann_entropy(w_r);
  const double h_s = von_neumann_entropy(w_s);
  const double h_c = von_neumann_entropy(w_c);
  const double h_rs = von_neumann_entropy(partial_trace(rho, {0, 1}));
  const double i1 = h_r + von_neumann_entropy(w_sc) - h_rsc - r1;
  const double i2 = h_s + von_neumann_entropy(w_rc) - h_rsc - r2;
  const double i3 = h_rs + h_c - h_rsc - (r1 + r2);

  DivergenceIdentities out;
  auto row = [&](std::string label, const HermitianOperator& b, double info) {
    const DivergenceResult d = relative_entropy(rho, b);
    const double value = d.infinite ? std::numeric_limits<double>::infinity() : d.value;
    const double residual = std::abs(value - info);
    out.rows.push_back({std::move(label), value, info, residual});
    out.max_residual = std::max(out.max_residual, residual);
  };
  row("I(R;CS) - R1", b1, i1);
  row("I(S;CR) - R2", b2, i2);
  row("I(RS;C) - (R1+R2)", b3, i3);
  return out;
}

MacExponent mac_error_exponent(const HermitianOperator& omega, const std::vector<double>& rates,
                               const std::vector<double>& s_grid) {
  check_region_state(omega);
  const int k = omega.subsystems() - 1;
  if (static_cast<int>(rates.size()) != k) throw DimensionError("one rate per sender required");
  MacExponent out;
  out.value = std::numeric_limits<double>::infinity();
  for (unsigned j : nonempty_subsets(k)) {
    const BipartiteView view = bipartite_view(omega, members(j, k));
    const PairSpectrum ps(view.joint.matrix(), view.product.matrix());
    double rate = 0.0;
    for (int i : members(j, k)) rate += rates[i];
    const ExponentResult r =
        maximize_over_s([&](double s) { return -std::log2(ps.trace_powers(s, 1.0 - s)) - (1.0 - s) * rate; },
                        s_grid);
    out.terms.push_back({j, r.value, r.s, r.unimodal});
    out.value = std::min(out.value, r.value);
  }
  return out;
}

}  // namespace pbc
