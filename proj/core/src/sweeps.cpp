#include "pbc/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pbc/errors.hpp"
#include "pbc/hyptest.hpp"
#include "pbc/parallel.hpp"
#include "pbc/random.hpp"

namespace pbc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// 0 <= L <= I with a random spectrum.
HermitianOperator random_effect(Rng& rng, int d) {
  const Matrix u = random_unitary(rng, d);
  RealVector v(d);
  for (int i = 0; i < d; ++i) v(i) = uniform(rng, 0.0, 1.0);
  if (uniform(rng, 0.0, 1.0) < 0.25) v(0) = 1.0;
  return HermitianOperator(u * v.cast<Complex>().asDiagonal() * u.adjoint());
}

DensityOperator maybe_subnormalized(Rng& rng, int d) {
  const DensityOperator rho = random_density(rng, d, uniform_int(rng, 1, d));
  if (uniform(rng, 0.0, 1.0) < 0.5) return rho;
  return DensityOperator(rho.op() * uniform(rng, 0.3, 1.0));
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (int k = 0; lo + k * step <= hi + 1e-12; ++k) g.push_back(lo + k * step);
  return g;
}

double instance_margin(SweepKind kind, Rng& rng, long long& cases) {
  switch (kind) {
    case SweepKind::Gentle: {
      const int d = uniform_int(rng, 2, 4);
      const DensityOperator rho = maybe_subnormalized(rng, d);
      const HermitianOperator lambda = random_effect(rng, d);
      const double eps = std::clamp(1.0 - trace_product(lambda.matrix(), rho.matrix()), 0.0, 1.0);
      const InequalityCheck c = check_gentle(rho, lambda, eps);
      cases = 1;
      return c.rhs - c.lhs;
    }
    case SweepKind::Close: {
      const int d = uniform_int(rng, 2, 4);
      const DensityOperator rho = maybe_subnormalized(rng, d);
      const DensityOperator sigma = maybe_subnormalized(rng, d);
      const InequalityCheck c = check_close(rho, sigma, random_effect(rng, d));
      cases = 1;
      return c.lhs - c.rhs;
    }
    case SweepKind::HayashiNagaoka: {
      const int d = uniform_int(rng, 2, 6);
      const HermitianOperator s = random_effect(rng, d);
      const HermitianOperator t = random_psd(rng, d, uniform(rng, 0.01, 3.0));
      const double c = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
      cases = 1;
      return check_hayashi_nagaoka(s, t, c).min_eigenvalue;
    }
    case SweepKind::Spectral: {
      const int d = uniform_int(rng, 2, 4);
      const HermitianOperator a = random_psd(rng, d, uniform(rng, 0.1, 2.0));
      const HermitianOperator b = random_psd(rng, d, uniform(rng, 0.1, 2.0));
      const InequalityCheck c = check_spectral_ineq(a, b, uniform(rng, 0.0, 1.0));
      cases = 1;
      return c.rhs - c.lhs;
    }
    case SweepKind::Prop1:
    case SweepKind::Cmw: {
      const int d = uniform_int(rng, 2, 3);
      const DensityOperator rho = random_density(rng, d, uniform_int(rng, 1, d));
      const DensityOperator sigma = random_density(rng, d, d);
      const bool prop = kind == SweepKind::Prop1;
      const std::vector<double> alphas = prop ? grid(0.1, 0.9, 0.1) : std::vector<double>{1.1, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0};
      double worst = kInf;
      cases = 0;
      for (double eps : grid(0.05, 0.95, 0.05))
        for (double alpha : alphas) {
          const InequalityCheck c =
              prop ? check_prop_hypo_renyi(rho, sigma, alpha, eps) : check_cmw_upper(rho, sigma, alpha, eps);
          ++cases;
          const double m = prop ? c.lhs - c.rhs : c.rhs - c.lhs;
          if (!std::isnan(m)) worst = std::min(worst, m);
        }
      return worst;
    }
  }
  return kInf;
}

}  // namespace

SweepKind parse_sweep_kind(std::string_view name) {
  if (name == "gentle") return SweepKind::Gentle;
  if (name == "close") return SweepKind::Close;
  if (name == "hn") return SweepKind::HayashiNagaoka;
  if (name == "spectral") return SweepKind::Spectral;
  if (name == "prop1") return SweepKind::Prop1;
  if (name == "cmw") return SweepKind::Cmw;
  throw PreconditionError("unknown check \"" + std::string(name) + "\"");
}

std::string sweep_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::Gentle: return "gentle";
    case SweepKind::Close: return "close";
    case SweepKind::HayashiNagaoka: return "hn";
    case SweepKind::Spectral: return "spectral";
    case SweepKind::Prop1: return "prop1";
    case SweepKind::Cmw: return "cmw";
  }
  return "unknown";
}

double default_sweep_slack(SweepKind kind) {
  return kind == SweepKind::Prop1 || kind == SweepKind::Cmw ? 1e-7 : 1e-8;
}

SweepReport run_inequality_sweep(SweepKind kind, int instances, std::uint64_t seed, double slack) {
  if (instances < 1) throw PreconditionError("sweep needs at least one instance");
  if (!(slack >= 0.0)) throw PreconditionError("slack must be nonnegative");
  std::vector<double> margins(static_cast<std::size_t>(instances));
  std::vector<long long> cases(static_cast<std::size_t>(instances));
  parallel_for(static_cast<std::size_t>(instances), [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    margins[i] = instance_margin(kind, rng, cases[i]);
  });
  SweepReport r;
  r.kind = kind;
  r.instances = instances;
  r.worst_margin = kInf;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    r.cases += cases[i];
    if (margins[i] < -slack) ++r.violations;
    if (margins[i] < r.worst_margin) {
      r.worst_margin = margins[i];
      r.worst_instance = static_cast<long long>(i);
    }
  }
  return r;
}

}  // namespace pbc
