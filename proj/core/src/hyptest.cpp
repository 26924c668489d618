#include "pbc/hyptest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pbc/classical.hpp"
#include "pbc/errors.hpp"

namespace pbc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("eps must lie in (0,1)");
}

// Tr{P_+(rho - mu sigma) rho}, optionally with the strict positive projector.
struct Probe {
  double accept = 0.0;
  Matrix projector;
};

Probe probe(const Matrix& rho, const Matrix& sigma, double mu, bool want_projector) {
  // Strict sign: the crossing eigenvalue then sits at ~1e-16 at the final mu,
  // well inside the zero band that defines P_0 there.
  const Spectrum sp = eigh(rho - mu * sigma);
  Probe p;
  if (want_projector) p.projector = Matrix::Zero(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < sp.values.size(); ++i) {
    if (sp.values[i] <= 0.0) continue;
    const auto v = sp.vectors.col(i);
    p.accept += v.dot(rho * v).real();
    if (want_projector) p.projector.noalias() += v * v.adjoint();
  }
  return p;
}

double positive_part_trace_values(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::max(es.eigenvalues()[i], 0.0);
  return s;
}

double min_positive_eigenvalue(const Spectrum& s) {
  const double cut = s.cutoff();
  double m = kInf;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values[i] > cut) m = std::min(m, s.values[i]);
  }
  return m;
}

HypTestValue to_value(const NpSolution& sol, double dual_beta, const Dims& dims) {
  HypTestValue v;
  v.type1 = sol.type1;
  v.type2 = sol.beta;
  v.dual_type2 = dual_beta;
  v.infinite = sol.infinite;
  v.test = {sol.mu, sol.t, HermitianOperator::trusted(sol.test, dims)};
  if (sol.infinite) {
    v.value = kInf;
    v.primal_dual_gap = 0.0;
    return v;
  }
  v.value = -std::log2(sol.beta);
  v.primal_dual_gap = dual_beta > 0.0 ? std::abs(std::log2(sol.beta) - std::log2(dual_beta)) : kInf;
  return v;
}

bool commuting_pair(const HermitianOperator& a, const HermitianOperator& b) {
  return commute(a.matrix(), b.matrix(), 1e-12);
}

std::vector<double> clipped(const RealVector& v) {
  std::vector<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = std::max(v[i], 0.0);
  return out;
}

}  // namespace

NpSolution neyman_pearson(const Matrix& rho, const Matrix& sigma, double eps) {
  check_eps(eps);
  if (rho.rows() != sigma.rows()) throw DimensionError("hypothesis test on operators of different order");
  const double target = 1.0 - eps;
  const double tr_rho = rho.trace().real();
  if (tr_rho < target - 1e-12) throw PreconditionError("Tr{rho} is below 1 - eps; no feasible test");
  const Eigen::Index d = rho.rows();

  const Spectrum ss = eigh(sigma);
  const Matrix pi_sigma = psd_power(ss, 0.0);
  const double outside = tr_rho - trace_product(rho, pi_sigma);
  NpSolution sol;
  if (outside >= target - 1e-12) {
    sol.infinite = true;
    sol.test = Matrix::Identity(d, d) - pi_sigma;
    sol.beta = 0.0;
    sol.type1 = 1.0 - outside;
    sol.mu = kInf;
    sol.t = 1.0;
    return sol;
  }

  const double lmax_rho = eigh(rho).values.maxCoeff();
  double lo = 0.0;
  double hi = 2.0 * lmax_rho / min_positive_eigenvalue(ss);
  for (int k = 0; k < 200 && probe(rho, sigma, hi, false).accept >= target; ++k) hi *= 4.0;

  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = (lo > 0.0 && hi > 4.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (probe(rho, sigma, mid, false).accept >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  const Probe plo = probe(rho, sigma, lo, true);
  const Probe phi = probe(rho, sigma, hi, true);
  const double span = plo.accept - phi.accept;
  const double t = span > 1e-300 ? std::clamp((target - phi.accept) / span, 0.0, 1.0) : 1.0;
  sol.test = t * plo.projector + (1.0 - t) * phi.projector;
  sol.beta = trace_product(sol.test, sigma);
  sol.type1 = tr_rho - trace_product(sol.test, rho);
  sol.mu = 0.5 * (lo + hi);
  sol.t = t;
  return sol;
}

double neyman_pearson_dual(const Matrix& rho, const Matrix& sigma, double eps) {
  check_eps(eps);
  const double target = 1.0 - eps;
  auto phi = [&](double u) {
    const double lambda = std::exp(u);
    return lambda * target - positive_part_trace_values(lambda * rho - sigma);
  };
  // phi is concave in lambda, hence unimodal in u = ln(lambda).
  double lo = -80.0, hi = 80.0;
  double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
  double f1 = phi(x1), f2 = phi(x2);
  double best = std::max({0.0, f1, f2});
  while (hi - lo > 1e-13) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = phi(x1);
      best = std::max(best, f1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = phi(x2);
      best = std::max(best, f2);
    }
  }
  return best;
}

HelstromResult helstrom_error(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.order() != b.order()) throw DimensionError("Helstrom error of operators with different order");
  const Matrix diff = a.matrix() - b.matrix();
  HelstromResult r;
  r.error = 0.5 * (a.trace() + b.trace() - trace_norm(diff));
  const HermitianOperator t = positive_spectral_projection(HermitianOperator::trusted(diff, a.dims()));
  const Matrix id = Matrix::Identity(a.order(), a.order());
  r.error_from_test = trace_product(id - t.matrix(), a.matrix()) + trace_product(t.matrix(), b.matrix());
  r.test = {t, std::nullopt, std::nullopt};
  return r;
}

HypTestValue hyp_test_rel_entropy(const HermitianOperator& rho, const HermitianOperator& sigma, double eps) {
  if (rho.order() != sigma.order()) throw DimensionError("hypothesis test on operators of different order");
  const NpSolution sol = neyman_pearson(rho.matrix(), sigma.matrix(), eps);
  const double dual = sol.infinite ? 0.0 : neyman_pearson_dual(rho.matrix(), sigma.matrix(), eps);
  return to_value(sol, dual, rho.dims());
}

HypTestValue hyp_test_mutual_info(const HermitianOperator& rho, double eps, const Indices& a) {
  const BipartiteView v = bipartite_view(rho, a);
  return hyp_test_rel_entropy(v.joint, v.product, eps);
}

namespace {

struct MinSigmaProblem {
  Matrix joint;   // rho in layout [X, Y]
  Matrix rho_x;
  int dx = 0;
  int dy = 0;
  Dims dims_y;

  MinSigmaProblem(const HermitianOperator& rho, const Indices& a) {
    const BipartiteView v = bipartite_view(rho, a);
    joint = v.joint.matrix();
    Indices sorted = a;
    std::sort(sorted.begin(), sorted.end());
    const HermitianOperator rx = partial_trace(rho, sorted);
    rho_x = rx.matrix();
    dx = rx.order();
    dy = static_cast<int>(joint.rows()) / dx;
    for (int k = 0; k < rho.subsystems(); ++k) {
      if (std::find(a.begin(), a.end(), k) == a.end()) dims_y.push_back(rho.dims()[k]);
    }
  }

  NpSolution solve(const Matrix& sigma, double eps) const { return neyman_pearson(joint, kron(rho_x, sigma), eps); }

  // Supergradient of sigma -> beta at the optimal test: Tr_X{(rho_X (x) I) T}.
  Matrix supergradient(const Matrix& test) const {
    const Matrix m = kron(rho_x, Matrix::Identity(dy, dy)) * test;
    const Matrix g = partial_trace(m, {dx, dy}, {1});
    return 0.5 * (g + g.adjoint());
  }
};

}  // namespace

MinSigmaResult hyp_test_mutual_info_min_sigma(const HermitianOperator& rho, double eps, const Indices& a,
                                              const MinSigmaOptions& options) {
  check_eps(eps);
  const MinSigmaProblem prob(rho, a);
  Matrix sigma = partial_trace(prob.joint, {prob.dx, prob.dy}, {1});
  NpSolution cur = prob.solve(sigma, eps);
  double best_beta = cur.beta;
  Matrix best_sigma = sigma;
  double upper_beta = kInf;
  MinSigmaResult r;

  for (int it = 0; it < options.max_iterations; ++it) {
    r.iterations = it + 1;
    if (cur.infinite) break;
    const Matrix g = prob.supergradient(cur.test);
    const Spectrum gs = eigh(g);
    const Eigen::Index top = gs.values.size() - 1;
    const double gap = std::max(gs.values[top] - trace_product(g, sigma), 0.0);
    upper_beta = std::min(upper_beta, cur.beta + gap);
    if (gap <= options.tolerance * cur.beta) {
      r.converged = true;
      break;
    }
    const Vector v = gs.vectors.col(top);
    const Matrix vertex = v * v.adjoint();
    // beta is concave along the segment, so golden section finds its maximum.
    auto along = [&](double gamma) { return prob.solve((1.0 - gamma) * sigma + gamma * vertex, eps); };
    double lo = 0.0, hi = 1.0;
    double x1 = hi - kGolden, x2 = kGolden;
    NpSolution s1 = along(x1), s2 = along(x2);
    for (int k = 0; k < options.line_search_steps; ++k) {
      if (s1.beta >= s2.beta) {
        hi = x2;
        x2 = x1;
        s2 = s1;
        x1 = hi - kGolden * (hi - lo);
        s1 = along(x1);
      } else {
        lo = x1;
        x1 = x2;
        s1 = s2;
        x2 = lo + kGolden * (hi - lo);
        s2 = along(x2);
      }
    }
    const NpSolution& pick = s1.beta >= s2.beta ? s1 : s2;
    const double gamma = s1.beta >= s2.beta ? x1 : x2;
    if (pick.beta <= cur.beta) {
      // No ascent along the segment at this resolution; the gap certificate stands.
      break;
    }
    sigma = (1.0 - gamma) * sigma + gamma * vertex;
    cur = pick;
    if (cur.beta > best_beta) {
      best_beta = cur.beta;
      best_sigma = sigma;
    }
  }

  if (cur.infinite) {
    r.value = kInf;
    r.lower = kInf;
  } else {
    r.value = -std::log2(best_beta);
    r.lower = std::isfinite(upper_beta) ? -std::log2(upper_beta) : r.value;
  }
  r.sigma = HermitianOperator::trusted(best_sigma, prob.dims_y);
  return r;
}

double min_sigma_bloch_grid(const HermitianOperator& rho, double eps, const Indices& a, int per_axis,
                            int zoom_levels) {
  check_eps(eps);
  if (per_axis < 2) throw PreconditionError("grid needs at least two points per axis");
  const MinSigmaProblem prob(rho, a);
  if (prob.dy != 2) throw DimensionError("Bloch-ball grid needs a qubit on the optimized side");
  const Complex i(0.0, 1.0);
  auto beta_at = [&](double x, double y, double z) {
    Matrix s(2, 2);
    s << 0.5 * (1.0 + z), 0.5 * (x - i * y), 0.5 * (x + i * y), 0.5 * (1.0 - z);
    return prob.solve(s, eps).beta;
  };
  double best = -1.0;
  double cx = 0.0, cy = 0.0, cz = 0.0;
  double half = 1.0;
  // Level 0 covers the ball; each further level covers a cube of a quarter the
  // width around the incumbent, with points outside the ball projected onto it.
  for (int level = 0; level <= zoom_levels; ++level) {
    const double ox = cx, oy = cy, oz = cz;
    for (int ix = 0; ix < per_axis; ++ix) {
      for (int iy = 0; iy < per_axis; ++iy) {
        for (int iz = 0; iz < per_axis; ++iz) {
          double x = ox + half * (-1.0 + 2.0 * ix / (per_axis - 1));
          double y = oy + half * (-1.0 + 2.0 * iy / (per_axis - 1));
          double z = oz + half * (-1.0 + 2.0 * iz / (per_axis - 1));
          const double r = std::sqrt(x * x + y * y + z * z);
          if (r > 1.0) {
            if (level == 0) continue;
            x /= r;
            y /= r;
            z /= r;
          }
          const double b = beta_at(x, y, z);
          if (b > best) {
            best = b;
            cx = x;
            cy = y;
            cz = z;
          }
        }
      }
    }
    half *= 4.0 / (per_axis - 1);
  }
  return best > 0.0 ? -std::log2(best) : kInf;
}

InequalityCheck check_prop_hypo_renyi(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha,
                                      double eps) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0,1)");
  check_eps(eps);
  InequalityCheck c;
  const HypTestValue h = hyp_test_rel_entropy(rho, sigma, eps);
  const DivergenceResult d = renyi_relative_entropy(rho, sigma, alpha);
  c.lhs = h.value;
  c.rhs = d.infinite ? kInf : alpha / (alpha - 1.0) * std::log2(1.0 / eps) + d.value;
  c.holds = h.infinite || c.lhs >= c.rhs - 1e-7;
  return c;
}

InequalityCheck check_cmw_upper(const HermitianOperator& rho, const HermitianOperator& sigma, double alpha,
                                double eps) {
  if (!(alpha > 1.0)) throw PreconditionError("alpha must exceed 1");
  check_eps(eps);
  InequalityCheck c;
  const HypTestValue h = hyp_test_rel_entropy(rho, sigma, eps);
  const DivergenceResult d = sandwiched_renyi(rho, sigma, alpha);
  c.lhs = h.value;
  c.rhs = d.infinite ? kInf : d.value + alpha / (alpha - 1.0) * std::log2(1.0 / (1.0 - eps));
  c.holds = d.infinite || c.lhs <= c.rhs + 1e-7;
  return c;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double inverse_normal_cdf(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("probability outside [0,1]");
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;
  if (p > 0.5) return -inverse_normal_cdf(1.0 - p);
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  double x;
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  // One Newton step on Phi(x) = p.
  const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  x -= (normal_cdf(x) - p) / density;
  return x;
}

double second_order_approx(const HermitianOperator& rho, const HermitianOperator& sigma, int n, double eps) {
  check_eps(eps);
  if (n < 0) throw PreconditionError("blocklength must be nonnegative");
  if (n == 0) return 0.0;
  const DivergenceResult d = relative_entropy(rho, sigma);
  if (d.infinite) throw PreconditionError("second-order expansion needs supp(rho) within supp(sigma)");
  const double v = relative_entropy_variance(rho, sigma);
  if (v == 0.0) return n * d.value;
  return n * d.value + std::sqrt(n * v) * inverse_normal_cdf(eps);
}

double iid_hyp_test_rate(const HermitianOperator& rho, const HermitianOperator& sigma, int n, double eps) {
  if (!commuting_pair(rho, sigma)) throw PreconditionError("type-class evaluation needs commuting inputs");
  const Matrix ops[] = {rho.matrix(), sigma.matrix()};
  const JointSpectrum js = joint_diagonalize(ops);
  return -classical::log2_np_beta_iid(clipped(js.values[0]), clipped(js.values[1]), n, eps) / n;
}

SteinSandwich stein_sandwich(const HermitianOperator& rho, const HermitianOperator& sigma, double eps, int n,
                             double alpha_lo, double alpha_hi) {
  check_eps(eps);
  if (n < 1) throw PreconditionError("blocklength must be positive");
  if (!(alpha_lo > 0.0 && alpha_lo < 1.0) || !(alpha_hi > 1.0)) {
    throw PreconditionError("need alpha_lo in (0,1) and alpha_hi > 1");
  }
  SteinSandwich s;
  if (commuting_pair(rho, sigma)) {
    if (n > 10000) throw BudgetError("type-class path limited to n <= 10000");
    s.classical_path = true;
    s.exact = iid_hyp_test_rate(rho, sigma, n, eps);
  } else {
    if (std::pow(static_cast<double>(rho.order()), n) > 1024.0) {
      throw BudgetError("dense n-copy hypothesis test limited to order 1024");
    }
    s.exact = hyp_test_rel_entropy(tensor_power(rho, n), tensor_power(sigma, n), eps).value / n;
  }
  const DivergenceResult dlo = renyi_relative_entropy(rho, sigma, alpha_lo);
  const DivergenceResult dhi = sandwiched_renyi(rho, sigma, alpha_hi);
  s.lower = alpha_lo / (n * (alpha_lo - 1.0)) * std::log2(1.0 / eps) + dlo.value;
  s.upper = alpha_hi / (n * (alpha_hi - 1.0)) * std::log2(1.0 / (1.0 - eps)) + dhi.value;
  if (dlo.infinite) s.lower = kInf;
  if (dhi.infinite) s.upper = kInf;
  s.holds = s.lower <= s.exact + 1e-6 && s.exact <= s.upper + 1e-6;
  return s;
}

HelstromResult pe_star_composite(const HermitianOperator& a, const std::vector<HermitianOperator>& alts) {
  if (alts.empty()) throw PreconditionError("composite test needs at least one alternative");
  HermitianOperator sum = alts.front();
  for (std::size_t i = 1; i < alts.size(); ++i) sum = sum + alts[i];
  return helstrom_error(a, sum);
}

ChernoffTrace chernoff_multi_trace(const HermitianOperator& a, const std::vector<HermitianOperator>& alts,
                                   const std::vector<double>& weights, const std::vector<int>& ns) {
  if (alts.empty()) throw PreconditionError("need at least one alternative");
  if (weights.size() != alts.size() + 1) throw PreconditionError("weights must be {K0, K1, ..., Kr}");
  ChernoffTrace tr;
  tr.min_chernoff = kInf;
  for (const auto& b : alts) tr.min_chernoff = std::min(tr.min_chernoff, chernoff_distance(a, b).value);

  std::vector<Matrix> family{a.matrix()};
  for (const auto& b : alts) family.push_back(b.matrix());
  bool commuting = true;
  for (std::size_t i = 0; i < family.size() && commuting; ++i) {
    for (std::size_t j = i + 1; j < family.size() && commuting; ++j) commuting = commute(family[i], family[j]);
  }
  tr.classical_path = commuting;

  std::vector<double> a_vals;
  std::vector<std::vector<double>> b_vals;
  if (commuting) {
    const JointSpectrum js = joint_diagonalize(family);
    a_vals = clipped(js.values[0]);
    for (std::size_t i = 1; i < js.values.size(); ++i) b_vals.push_back(clipped(js.values[i]));
  }
  const std::vector<double> k(weights.begin() + 1, weights.end());

  for (int n : ns) {
    if (n < 1) throw PreconditionError("blocklengths must be positive");
    double log2pe;
    if (commuting) {
      if (n > 10000) {
        tr.truncated = true;
        break;
      }
      log2pe = classical::log2_pe_star_iid(weights[0], a_vals, k, b_vals, n);
    } else {
      if (std::pow(static_cast<double>(a.order()), n) > 1024.0) {
        tr.truncated = true;
        break;
      }
      HermitianOperator an = tensor_power(a, n) * weights[0];
      HermitianOperator bn = tensor_power(alts[0], n) * k[0];
      for (std::size_t i = 1; i < alts.size(); ++i) bn = bn + tensor_power(alts[i], n) * k[i];
      log2pe = std::log2(std::max(helstrom_error(an, bn).error, 0.0));
    }
    ChernoffTraceRow row;
    row.n = n;
    row.rate = -log2pe / n;
    row.gap = row.rate - tr.min_chernoff;
    tr.rows.push_back(row);
  }
  return tr;
}

InequalityCheck check_spectral_ineq(const HermitianOperator& a, const HermitianOperator& b, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw PreconditionError("s must lie in [0,1]");
  InequalityCheck c;
  c.lhs = helstrom_error(a, b).error;
  c.rhs = PairSpectrum(a.matrix(), b.matrix()).trace_powers(s, 1.0 - s);
  c.holds = c.lhs <= c.rhs + 1e-9;
  return c;
}

OperatorInequality check_hayashi_nagaoka(const HermitianOperator& s, const HermitianOperator& t, double c) {
  if (!(c > 0.0)) throw PreconditionError("Hayashi-Nagaoka constant must be positive");
  if (s.order() != t.order()) throw DimensionError("operators of different order");
  const Eigen::Index d = s.order();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix root = psd_power(s.matrix() + t.matrix(), -0.5);
  const Matrix lhs = id - root * s.matrix() * root;
  const Matrix rhs = (1.0 + c) * (id - s.matrix()) + (2.0 + c + 1.0 / c) * t.matrix();
  const Matrix diff = rhs - lhs;
  OperatorInequality r;
  r.min_eigenvalue = eigh(0.5 * (diff + diff.adjoint())).values.minCoeff();
  r.holds = r.min_eigenvalue >= -1e-8;
  return r;
}

InequalityCheck check_gentle(const HermitianOperator& rho, const HermitianOperator& lambda, double eps) {
  if (rho.order() != lambda.order()) throw DimensionError("operators of different order");
  const double accept = trace_product(lambda.matrix(), rho.matrix());
  if (accept < 1.0 - eps - 1e-12) throw PreconditionError("Tr{Lambda rho} is below 1 - eps");
  const Matrix root = psd_power(lambda.matrix(), 0.5);
  InequalityCheck c;
  c.lhs = trace_norm(Matrix(rho.matrix() - root * rho.matrix() * root));
  c.rhs = 2.0 * std::sqrt(eps);
  c.holds = c.lhs <= c.rhs + 1e-9;
  return c;
}

InequalityCheck check_close(const HermitianOperator& rho, const HermitianOperator& sigma,
                            const HermitianOperator& lambda) {
  if (rho.order() != sigma.order() || rho.order() != lambda.order()) {
    throw DimensionError("operators of different order");
  }
  InequalityCheck c;
  c.lhs = trace_product(lambda.matrix(), rho.matrix());
  c.rhs = trace_product(lambda.matrix(), sigma.matrix()) - trace_norm(Matrix(rho.matrix() - sigma.matrix()));
  c.holds = c.lhs >= c.rhs - 1e-9;
  return c;
}

}  // namespace pbc
