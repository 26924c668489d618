#include "pbc/p2p.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pbc/entropy.hpp"
#include "pbc/errors.hpp"
#include "pbc/random.hpp"

namespace pbc {
namespace {

int reference_dim(const DensityOperator& resource, const QuantumChannel& channel) {
  const int total = resource.op().order();
  const int din = channel.in_dim();
  if (total % din != 0) throw DimensionError("resource order is not a multiple of the channel input dimension");
  return total / din;
}

Matrix kron_power(const Matrix& a, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

// Embeds an R B operator on copy m (1-based) of R^M B, with `rest` on the other R copies.
Matrix place(const Matrix& rest_single, const Matrix& rb, int m, int messages, int dr, int db) {
  const Matrix full = kron(kron_power(rest_single, messages - 1), rb);
  Dims dims(static_cast<std::size_t>(messages), dr);
  dims.push_back(db);
  Indices order(static_cast<std::size_t>(messages) + 1);
  for (int j = 0; j <= messages; ++j) {
    if (j < m - 1) order[j] = j;
    else if (j == m - 1) order[j] = messages - 1;
    else if (j < messages) order[j] = j - 1;
    else order[j] = messages;
  }
  return permute_subsystems(full, dims, order);
}

void check_test(const BinaryTest& t, int order) {
  if (t.op.order() != order) throw DimensionError("test operator does not act on R B");
  if (t.op.min_eigenvalue() < -tol::kPsd || t.op.max_eigenvalue() > 1.0 + tol::kPsd)
    throw PreconditionError("test operator must satisfy 0 <= T <= I");
}

BinaryTest test_of(const P2PCodeSpec& spec) {
  return spec.test ? *spec.test : default_p2p_test(spec.resource, spec.channel, spec.messages);
}

}  // namespace

ChannelPair channel_pair(const DensityOperator& resource, const QuantumChannel& channel) {
  const int dr = reference_dim(resource, channel);
  const int din = channel.in_dim();
  const HermitianOperator theta = resource.op().with_dims({dr, din});
  const int db = channel.out_dim();
  const QuantumChannel flat(channel.kraus(), {din}, {db});
  const HermitianOperator out = apply_channel(flat, theta, {1});
  const Dims dims{dr, db};
  const HermitianOperator joint = out.with_dims(dims);
  const HermitianOperator ref = partial_trace(theta, {0});
  const HermitianOperator b = partial_trace(joint, {1});
  return {joint, tensor(ref, b).with_dims(dims), ref};
}

BinaryTest default_p2p_test(const DensityOperator& resource, const QuantumChannel& channel, int messages) {
  if (messages < 1) throw PreconditionError("message count must be positive");
  const ChannelPair p = channel_pair(resource, channel);
  return BinaryTest{positive_spectral_projection(p.joint - static_cast<double>(messages) * p.product), std::nullopt,
                    std::nullopt};
}

CodePerformance simulate_p2p(const P2PCodeSpec& spec) {
  const int messages = spec.messages;
  if (messages < 1) throw PreconditionError("message count must be positive");
  const ChannelPair pair = channel_pair(spec.resource, spec.channel);
  const int dr = pair.joint.dims()[0];
  const int db = pair.joint.dims()[1];
  long long total = db;
  for (int i = 0; i < messages; ++i) {
    total *= dr;
    if (total > kSimulationBudget) throw BudgetError("simulate_p2p: dim(R)^M dim(B) exceeds 2^14");
  }

  const BinaryTest test = test_of(spec);
  check_test(test, dr * db);
  const Matrix id_r = Matrix::Identity(dr, dr);
  std::vector<Matrix> gamma;
  gamma.reserve(static_cast<std::size_t>(messages));
  Matrix sum = Matrix::Zero(total, total);
  for (int m = 1; m <= messages; ++m) {
    gamma.push_back(place(id_r, test.op.matrix(), m, messages, dr, db));
    sum += gamma.back();
  }
  const Spectrum s = eigh(sum);
  const double cut = 1e-12 * s.max_abs();
  RealVector inv(s.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = s.values(i) > cut ? 1.0 / std::sqrt(s.values(i)) : 0.0;
  const Matrix inv_sqrt = s.vectors * inv.asDiagonal() * s.vectors.adjoint();

  auto error_for = [&](int m) {
    const Matrix rho = place(pair.reference.matrix(), pair.joint.matrix(), m, messages, dr, db);
    const Matrix lambda = inv_sqrt * gamma[static_cast<std::size_t>(m - 1)] * inv_sqrt;
    return std::clamp(pair.joint.trace() - trace_product(lambda, rho), 0.0, 1.0);
  };

  CodePerformance out;
  out.exact_error = error_for(1);
  if (messages > 1) out.message_spread = std::abs(out.exact_error - error_for(messages));
  P2PCodeSpec with_test = spec;
  with_test.test = test;
  out.bound = one_shot_error_bound(with_test);
  out.test_used = test;
  return out;
}

double one_shot_error_bound(const P2PCodeSpec& spec) {
  if (!(spec.c > 0.0)) throw PreconditionError("Hayashi-Nagaoka constant must be positive");
  if (spec.messages < 1) throw PreconditionError("message count must be positive");
  const ChannelPair pair = channel_pair(spec.resource, spec.channel);
  const BinaryTest test = test_of(spec);
  check_test(test, pair.joint.order());
  const double c1 = 1.0 + spec.c;
  const double c2 = 2.0 + spec.c + 1.0 / spec.c;
  const double miss = pair.joint.trace() - trace_product(test.op.matrix(), pair.joint.matrix());
  const double confuse = trace_product(test.op.matrix(), pair.product.matrix());
  return c1 * miss + c2 * (spec.messages - 1) * confuse;
}

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw PreconditionError("grid needs at least two points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = static_cast<double>(k) / (points - 1);
  return g;
}

ExponentResult maximize_over_s(const std::function<double(double)>& f, const std::vector<double>& s_grid) {
  if (s_grid.empty()) throw PreconditionError("empty s grid");
  std::vector<double> grid = s_grid;
  std::sort(grid.begin(), grid.end());
  if (grid.front() < 0.0 || grid.back() > 1.0) throw PreconditionError("s grid must lie in [0, 1]");

  std::vector<double> vals(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) vals[k] = f(grid[k]);
  const auto best = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
  const double scale = 1e-12 * (1.0 + std::abs(vals[best]));
  bool unimodal = true;
  for (std::size_t k = 1; k <= best; ++k) unimodal = unimodal && vals[k] >= vals[k - 1] - scale;
  for (std::size_t k = best + 1; k < vals.size(); ++k) unimodal = unimodal && vals[k] <= vals[k - 1] + scale;

  ExponentResult r{vals[best], grid[best], unimodal};
  if (!unimodal || grid.size() < 2) return r;

  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double s_mid = (lo + hi) / 2.0;
  const double f_mid = f(s_mid);
  if (f_mid > r.value) {
    r.value = f_mid;
    r.s = s_mid;
  }
  return r;
}

ExponentResult error_exponent_lower(const DensityOperator& resource, const QuantumChannel& channel,
                                    double log2_messages_or_rate, const std::vector<double>& s_grid, bool iid) {
  const ChannelPair pair = channel_pair(resource, channel);
  const PairSpectrum ps(pair.joint.matrix(), pair.product.matrix());
  const double offset = iid ? 0.0 : 2.0;
  return maximize_over_s(
      [&](double s) {
        return -std::log2(ps.trace_powers(s, 1.0 - s)) - (1.0 - s) * log2_messages_or_rate - offset;
      },
      s_grid);
}

CapacityLower one_shot_capacity_lower(const DensityOperator& resource, const QuantumChannel& channel, double eps,
                                      double eta) {
  if (!(eta > 0.0 && eta < eps && eps < 1.0)) throw PreconditionError("need 0 < eta < eps < 1");
  const ChannelPair pair = channel_pair(resource, channel);
  CapacityLower r;
  r.information = hyp_test_mutual_info(pair.joint, eps - eta, {0}).value;
  r.penalty = std::log2(4.0 * eps / (eta * eta));
  r.value = r.information - r.penalty;
  return r;
}

double second_order_rate(const DensityOperator& resource, const QuantumChannel& channel, int n, double eps) {
  if (n < 1) throw PreconditionError("n must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("eps must lie in (0, 1)");
  const ChannelPair pair = channel_pair(resource, channel);
  const double info = mutual_information(pair.joint, {0});
  const double var = mutual_information_variance(pair.joint, {0});
  return n * info + std::sqrt(n * var) * inverse_normal_cdf(eps);
}

namespace {

// Schmidt amplitudes x (d entries) followed by a Hermitian generator h (d^2 entries).
DensityOperator pure_from_params(const std::vector<double>& p, int d) {
  double norm = 0.0;
  for (int i = 0; i < d; ++i) norm += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
  Matrix h = Matrix::Zero(d, d);
  std::size_t k = static_cast<std::size_t>(d);
  for (int i = 0; i < d; ++i) {
    h(i, i) = p[k++];
    for (int j = i + 1; j < d; ++j) {
      const Complex z(p[k], p[k + 1]);
      k += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  const Spectrum hs = eigh(h);
  Vector phases(d);
  for (int i = 0; i < d; ++i) phases(i) = std::exp(Complex(0.0, hs.values(i)));
  const Matrix u = hs.vectors * phases.asDiagonal() * hs.vectors.adjoint();
  Vector psi = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) {
    const double w = norm > 0.0 ? p[static_cast<std::size_t>(i)] / std::sqrt(norm) : (i == 0 ? 1.0 : 0.0);
    for (int a = 0; a < d; ++a) psi(i * d + a) += w * u(a, i);
  }
  psi.normalize();
  return DensityOperator(HermitianOperator::pure(psi, {d, d}));
}

}  // namespace

UpperEstimate capacity_upper_eps_mi(const QuantumChannel& channel, double eps, const UpperSearchOptions& options) {
  const int d = channel.in_dim();
  if (d > 3 || channel.out_dim() > 4) throw BudgetError("capacity_upper_eps_mi: needs dim(A) <= 3 and dim(B) <= 4");
  if (options.restarts < 1) throw PreconditionError("need at least one restart");
  const QuantumChannel flat(channel.kraus(), {d}, {channel.out_dim()});

  auto objective = [&](const std::vector<double>& p) {
    const ChannelPair pair = channel_pair(pure_from_params(p, d), flat);
    return hyp_test_mutual_info_min_sigma(pair.joint, eps, {0}, options.inner).value;
  };

  const std::size_t nparams = static_cast<std::size_t>(d + d * d);
  UpperEstimate out;
  out.estimate = -std::numeric_limits<double>::infinity();
  out.worst = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < options.restarts; ++restart) {
    std::vector<double> p(nparams, 0.0);
    if (restart == 0) {
      std::fill(p.begin(), p.begin() + d, 1.0);
    } else {
      Rng rng = make_rng(options.seed, static_cast<std::uint64_t>(restart));
      std::uniform_real_distribution<double> amp(0.1, 1.0);
      std::normal_distribution<double> gen(0.0, 1.0);
      for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = amp(rng);
      for (std::size_t i = static_cast<std::size_t>(d); i < nparams; ++i) p[i] = gen(rng);
    }
    double cur = objective(p);
    if (restart == 0) out.maximally_entangled_value = cur;
    double step = options.initial_step;
    for (int it = 0; it < options.iterations && step >= options.min_step; ++it) {
      bool improved = false;
      for (std::size_t i = 0; i < nparams; ++i) {
        for (double dir : {1.0, -1.0}) {
          std::vector<double> trial = p;
          trial[i] += dir * step;
          const double v = objective(trial);
          if (v > cur + 1e-12) {
            cur = v;
            p = std::move(trial);
            improved = true;
            break;
          }
        }
      }
      if (!improved) step /= 2.0;
    }
    out.restart_values.push_back(cur);
    out.worst = std::min(out.worst, cur);
    if (cur > out.estimate) {
      out.estimate = cur;
      out.witness = pure_from_params(p, d);
    }
  }
  return out;
}

MarginalProductCheck check_marginal_prod_lemma(const HermitianOperator& rho_abc, double eps,
                                               const MinSigmaOptions& options) {
  if (rho_abc.subsystems() != 3) throw DimensionError("marginal product check needs subsystems [A, B, C]");
  for (int dim : rho_abc.dims())
    if (dim > 2) throw BudgetError("marginal product check supports qubit subsystems only");
  const Matrix ac = partial_trace(rho_abc, {0, 2}).matrix();
  const Matrix a = partial_trace(rho_abc, {0}).matrix();
  const Matrix c = partial_trace(rho_abc, {2}).matrix();
  if ((ac - kron(a, c)).cwiseAbs().maxCoeff() > 1e-10) throw PreconditionError("rho_AC is not a product state");
  MarginalProductCheck r;
  r.lhs = hyp_test_mutual_info_min_sigma(rho_abc, eps, {0}, options).value;
  r.rhs = hyp_test_mutual_info_min_sigma(rho_abc, eps, {0, 2}, options).value;
  r.holds = r.lhs <= r.rhs + 2e-3;
  return r;
}

}  // namespace pbc
