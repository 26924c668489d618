// Acceptance suite: one line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pbc/entropy.hpp"
#include "pbc/hyptest.hpp"
#include "pbc/mac.hpp"
#include "pbc/p2p.hpp"
#include "pbc/random.hpp"
#include "pbc/sweeps.hpp"
#include "pbc/typicality.hpp"

using namespace pbc;

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = true;
  std::string reasons;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    reasons += (pass ? "" : "; ") + what;
    pass = false;
  }
  std::string summary() const { return pass ? detail.str() : reasons + " | " + detail.str(); }
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;
  std::function<void(Verdict&)> body;
};

HermitianOperator diag(std::vector<double> d) { return HermitianOperator::diagonal(std::move(d)); }

std::vector<double> diagonal_of(const HermitianOperator& h) {
  std::vector<double> v(h.order());
  for (int i = 0; i < h.order(); ++i) v[i] = h.matrix()(i, i).real();
  return v;
}

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

void duality(Verdict& v) {
  double worst_gap = 0.0, worst_classical = 0.0;
  int commuting = 0;
  for (int i = 0; i < 500; ++i) {
    Rng rng = make_rng(101, i);
    const int d = 2 + i % 2;
    const bool diagonal = (i / 2) % 2 == 0;
    const DensityOperator rho = diagonal ? random_diagonal_density(rng, d) : random_density(rng, d, 1 + i % d);
    const DensityOperator sigma = diagonal ? random_diagonal_density(rng, d) : random_density(rng, d);
    const double eps = uniform(rng, 0.01, 0.99);
    const HypTestValue h = hyp_test_rel_entropy(rho, sigma, eps);
    const double gap = std::abs(std::log2(h.type2) - std::log2(h.dual_type2));
    worst_gap = std::max(worst_gap, gap);
    if (diagonal) {
      ++commuting;
      const double exact = -std::log2(oracle::np_beta(diagonal_of(rho), diagonal_of(sigma), eps));
      worst_classical = std::max(worst_classical, std::abs(h.value - exact));
    }
  }
  v.require(worst_gap <= 1e-7, "primal/dual gap " + fmt(worst_gap));
  v.require(worst_classical <= 1e-8, "classical mismatch " + fmt(worst_classical));
  v.detail << "500 instances, " << commuting << " commuting, max gap " << fmt(worst_gap) << " bits, max classical diff "
           << fmt(worst_classical);
}

void divergence_sweeps(Verdict& v) {
  const SweepReport p = run_inequality_sweep(SweepKind::Prop1, 500, 202, 1e-7);
  const SweepReport c = run_inequality_sweep(SweepKind::Cmw, 500, 203, 1e-7);
  v.require(p.violations == 0, std::to_string(p.violations) + " lower-bound violations");
  v.require(c.violations == 0, std::to_string(c.violations) + " upper-bound violations");
  v.detail << p.cases << " + " << c.cases << " cases, 0 violations, worst margins " << fmt(p.worst_margin) << ", "
           << fmt(c.worst_margin);
}

void stein(Verdict& v) {
  const int n = 2000;
  const HermitianOperator rho = diag({0.5, 0.5}), sigma = diag({0.46, 0.54});
  const double w = 1.0 / std::sqrt(static_cast<double>(n));
  const SteinSandwich s = stein_sandwich(rho, sigma, 0.3, n, 1 - w, 1 + w);
  const double exact = oracle::binary_iid_hyp_test(0.5, 0.46, n, 0.3) / n;
  v.require(s.holds, "commuting sandwich fails");
  v.require(s.upper - s.lower <= 0.05, "sandwich width " + fmt(s.upper - s.lower));
  v.require(std::abs(s.exact - exact) <= 1e-9, "exact rate differs from binomial oracle");
  int dense_ok = 0;
  for (int i = 0; i < 3; ++i) {
    Rng rng = make_rng(303, i);
    const DensityOperator r = random_density(rng, 2), q = random_density(rng, 2);
    const SteinSandwich d = stein_sandwich(r, q, 0.3, 8, 1 - 1 / std::sqrt(8.0), 1 + 1 / std::sqrt(8.0));
    v.require(!d.classical_path, "dense instance took the classical path");
    v.require(d.holds, "dense sandwich fails on instance " + std::to_string(i));
    dense_ok += d.holds ? 1 : 0;
  }
  v.detail << "n=2000: " << fmt(s.lower) << " <= " << fmt(s.exact) << " <= " << fmt(s.upper) << " (width "
           << fmt(s.upper - s.lower) << "); dense n=8 holds on " << dense_ok << "/3";
}

void second_order(Verdict& v) {
  const int n = 1000;
  const HermitianOperator rho = diag({0.7, 0.3}), sigma = diag({0.4, 0.6});
  const double allowed = 8 * std::log2(static_cast<double>(n));
  double worst = 0.0;
  for (double eps : {0.1, 0.5, 0.9}) {
    const double exact = iid_hyp_test_rate(rho, sigma, n, eps) * n;
    v.require(std::abs(exact - oracle::binary_iid_hyp_test(0.7, 0.4, n, eps)) <= 1e-7, "type-class rate mismatch");
    worst = std::max(worst, std::abs(exact - second_order_approx(rho, sigma, n, eps)));
  }
  v.require(worst <= allowed, "deviation " + fmt(worst));
  v.detail << "max |exact - approx| " << fmt(worst) << " <= " << fmt(allowed);
}

void position_based(Verdict& v) {
  double worst_margin = -kInfinity;
  int cases = 0;
  for (int i = 0; i < 50; ++i) {
    Rng rng = make_rng(505, i);
    const QuantumChannel ch = random_channel(rng, 2, 2, 2);
    const DensityOperator theta = random_pure(rng, 4, {2, 2});
    for (int m : {2, 3, 4}) {
      P2PCodeSpec spec{theta, ch, m, std::nullopt, 1.0};
      const CodePerformance perf = simulate_p2p(spec);
      for (double c : {0.5, 1.0, 2.0}) {
        spec.c = c;
        const double bound = one_shot_error_bound(spec);
        worst_margin = std::max(worst_margin, perf.exact_error - bound);
        v.require(perf.exact_error <= bound + tol::kTrace, "bound violated at channel " + std::to_string(i));
        ++cases;
      }
    }
  }
  const P2PCodeSpec noiseless{DensityOperator(oracle::phi_plus()), QuantumChannel::identity({2}), 2, std::nullopt, 1.0};
  const double e = simulate_p2p(noiseless).exact_error;
  v.require(e <= 1e-9, "noiseless M=2 error " + fmt(e) + " > 1e-9");
  v.detail << cases << " bound checks, max error - bound " << fmt(worst_margin) << "; noiseless M=2 error " << fmt(e);
}

void multiple_access(Verdict& v) {
  double worst_default = -kInfinity, worst_light = -kInfinity;
  for (int i = 0; i < 25; ++i) {
    Rng rng = make_rng(606, i);
    const QuantumChannel raw = random_channel(rng, 4, 2, 2);
    const MacCodeSpec spec{{random_pure(rng, 4, {2, 2}), random_pure(rng, 4, {2, 2})},
                           QuantumChannel(raw.kraus(), {2, 2}, {2}), {2, 2}, std::nullopt, 1.0};
    const CodePerformance d = simulate_mac(spec);
    worst_default = std::max(worst_default, d.exact_error - d.bound);
    v.require(d.exact_error <= d.bound + tol::kTrace, "default test bound violated at " + std::to_string(i));
    // A test with weights (L-1), (M-1), (L-1)(M-1) rarely vanishes, so it exercises the decoder too.
    const HermitianOperator x = mac_output(spec) - mac_output(spec, 1u) - mac_output(spec, 2u) - mac_output(spec, 3u);
    MacCodeSpec light = spec;
    light.test = BinaryTest{positive_spectral_projection(x), std::nullopt, std::nullopt};
    const CodePerformance l = simulate_mac(light);
    worst_light = std::max(worst_light, l.exact_error - l.bound);
    v.require(l.exact_error <= l.bound + tol::kTrace, "bound violated for lighter test at " + std::to_string(i));
  }

  Rng rng = make_rng(607, 0);
  const QuantumChannel ch = random_channel(rng, 8, 2, 4);
  const DensityOperator a3 = random_density(rng, 2);
  const MacCodeSpec three{{random_pure(rng, 4, {2, 2}), random_pure(rng, 4, {2, 2}),
                           DensityOperator(a3.op().with_dims({1, 2}))},
                          QuantumChannel(ch.kraus(), {2, 2, 2}, {2}), {2, 2, 1}, std::nullopt, 1.0};
  const MacBoundTerms terms = mac_bound_terms(three);
  v.require(terms.subsets.size() == 7, "K=3 bound has " + std::to_string(terms.subsets.size()) + " subsets");
  std::vector<Matrix> folded;
  const Spectrum sp = eigh(a3.matrix());
  for (const Matrix& k : ch.kraus())
    for (int j = 0; j < 2; ++j)
      if (sp.values(j) > 0.0) folded.push_back(k * kron(Matrix::Identity(4, 4), sp.vectors.col(j) * std::sqrt(sp.values(j))));
  MacCodeSpec two{{three.resources[0], three.resources[1]}, QuantumChannel(folded, {2, 2}, {2}), {2, 2},
                  std::nullopt, 1.0};
  MacCodeSpec three_t = three;
  const HermitianOperator t = default_mac_test(three).op;
  three_t.test = BinaryTest{t, std::nullopt, std::nullopt};
  two.test = BinaryTest{t.with_dims({2, 2, 2}), std::nullopt, std::nullopt};
  const double diff = std::abs(mac_one_shot_bound(three_t) - mac_one_shot_bound(two));
  v.require(diff <= 1e-10, "K=3 with M3=1 differs from K=2 by " + fmt(diff));
  v.detail << "25 MACs, max error - bound " << fmt(worst_default) << " (default test), " << fmt(worst_light)
           << " (lighter test); 7 subsets; M3=1 reduction diff " << fmt(diff);
}

void derandomization(Verdict& v) {
  double worst = -kInfinity;
  for (int i = 0; i < 50; ++i) {
    Rng rng = make_rng(707, i);
    std::vector<std::vector<DensityOperator>> out(2);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) out[x].push_back(random_density(rng, 2));
    const double px = uniform(rng, 0.1, 0.9), py = uniform(rng, 0.1, 0.9);
    const CqMac mac(out, {px, 1 - px}, {py, 1 - py});
    const DerandomizedCode code = derandomize_cq_mac(mac, 2, 2);
    v.require(code.enumerated && code.candidates == 16, "search was not exhaustive");
    worst = std::max(worst, code.avg_error - code.ensemble_average);
    v.require(code.avg_error <= code.ensemble_average + 1e-12, "codebook worse than average at " + std::to_string(i));
  }
  std::vector<std::vector<DensityOperator>> out(2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      Vector e = Vector::Zero(4);
      e[2 * x + y] = 1.0;
      out[x].push_back(DensityOperator(HermitianOperator::pure(e)));
    }
  const DerandomizedCode ortho = derandomize_cq_mac(CqMac(out, {0.5, 0.5}, {0.5, 0.5}), 2, 2);
  v.require(ortho.avg_error <= 1e-12, "orthogonal instance error " + fmt(ortho.avg_error));
  v.detail << "50 instances, max codebook - average " << fmt(worst) << "; orthogonal error " << fmt(ortho.avg_error);
}

HermitianOperator seeded_omega(int i) {
  Rng rng = make_rng(808, i);
  if (i % 2 == 0) return random_density(rng, 8, 1 + i % 8, {2, 2, 2}).op();
  const QuantumChannel raw = random_channel(rng, 4, 2, 2);
  const MacCodeSpec spec{{random_density(rng, 4, 2, {2, 2}), random_density(rng, 4, 2, {2, 2})},
                         QuantumChannel(raw.kraus(), {2, 2}, {2}), {1, 1}, std::nullopt, 1.0};
  return mac_output(spec);
}

void rate_regions(Verdict& v) {
  double worst_excess = -kInfinity, worst_k1 = 0.0;
  int hull_failures = 0;
  for (int i = 0; i < 100; ++i) {
    const HermitianOperator omega = seeded_omega(i);
    const RateRegion mi = rate_region_mi(omega), r2 = rate_region_renyi2(omega), col = rate_region_collision(omega);
    for (const RateRegion* r : {&r2, &col})
      for (std::size_t k = 0; k < r->constraints.size(); ++k)
        worst_excess = std::max(worst_excess, r->constraints[k].bound - mi.constraints[k].bound);

    const HermitianOperator single = omega.with_dims({2, 4});
    const double a = rate_region_renyi2(single).constraints[0].bound;
    const double b = rate_region_collision(single).constraints[0].bound;
    worst_k1 = std::max(worst_k1, std::abs(a - b));

    const RegionVertices geo = region_vertices_2d(r2, col);
    for (const auto* poly : {&geo.first, &geo.second})
      for (const Point2& p : *poly)
        if (!polygon_contains(geo.hull, p, 1e-9)) ++hull_failures;
  }
  v.require(worst_excess <= 1e-10, "Renyi bound exceeds mutual information by " + fmt(worst_excess));
  v.require(worst_k1 <= 1e-10, "K=1 regions differ by " + fmt(worst_k1));
  v.require(hull_failures == 0, std::to_string(hull_failures) + " vertices outside the hull");
  v.detail << "100 states, max (Renyi - MI) " << fmt(worst_excess) << ", K=1 diff " << fmt(worst_k1)
           << ", hull contains all vertices";
}

void divergence_identities(Verdict& v) {
  double worst_residual = 0.0, worst_root = 0.0;
  for (int i = 0; i < 100; ++i) {
    Rng rng = make_rng(909, i);
    const QuantumChannel raw = random_channel(rng, 4, 2, 2);
    const DensityOperator t1 = random_density(rng, 4, 2, {2, 2}), t2 = random_density(rng, 4, 2, {2, 2});
    const QuantumChannel ch(raw.kraus(), {2, 2}, {2});
    const double r1 = uniform(rng, 0.0, 2.0), r2 = uniform(rng, 0.0, 2.0);
    worst_residual = std::max(worst_residual, mac_divergence_identities(t1, t2, ch, r1, r2).max_residual);

    // Bisect min_i D along the ray (u1 t, u2 t) and compare with where the ray leaves the MI region.
    const double u1 = uniform(rng, 0.2, 1.0), u2 = uniform(rng, 0.2, 1.0);
    const RateRegion mi = rate_region_mi(mac_output(MacCodeSpec{{t1, t2}, ch, {1, 1}, std::nullopt, 1.0}));
    double boundary = 1e300;
    for (const RateConstraint& c : mi.constraints) {
      const double w = ((c.subset & 1u) ? u1 : 0.0) + ((c.subset & 2u) ? u2 : 0.0);
      boundary = std::min(boundary, c.bound / w);
    }
    auto min_div = [&](double t) {
      const DivergenceIdentities tab = mac_divergence_identities(t1, t2, ch, u1 * t, u2 * t);
      double m = 1e300;
      for (const auto& row : tab.rows) m = std::min(m, row.divergence);
      return m;
    };
    double lo = 0.0, hi = 20.0;
    if (!(min_div(lo) > 0.0) || !(min_div(hi) < 0.0)) {
      v.require(false, "no sign change on instance " + std::to_string(i));
      continue;
    }
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      (min_div(mid) > 0.0 ? lo : hi) = mid;
    }
    worst_root = std::max(worst_root, std::abs(0.5 * (lo + hi) - boundary) * std::max(u1, u2));
  }
  v.require(worst_residual <= 1e-9, "residual " + fmt(worst_residual));
  v.require(worst_root <= 1e-4, "sign change off the boundary by " + fmt(worst_root));
  v.detail << "100 instances, max residual " << fmt(worst_residual) << ", max boundary offset " << fmt(worst_root);
}

void chernoff(Verdict& v) {
  const ChernoffTrace one = chernoff_multi_trace(diag({0.7, 0.3}), {diag({0.35, 0.65})}, {1, 1}, {50, 500});
  const ChernoffTrace two = chernoff_multi_trace(diag({0.6, 0.3, 0.1}), {diag({0.2, 0.5, 0.3}), diag({0.3, 0.2, 0.5})},
                                                 {1, 1, 1}, {300});
  const double g1 = std::abs(one.rows.back().gap), g2 = std::abs(two.rows.back().gap);
  v.require(g1 <= 0.02, "single-alternative gap " + fmt(g1));
  v.require(g2 <= 0.05, "two-alternative gap " + fmt(g2));
  v.require(one.rows.size() == 2 && two.rows.size() == 1, "trace rows missing");
  v.detail << "gap at n=500 " << fmt(g1) << ", two alternatives at n=300 " << fmt(g2) << " (reported, not asserted)";
}

void composite(Verdict& v) {
  const std::vector<HermitianOperator> alts{diag({0.9, 0.1}), diag({0.15, 0.85})};
  int reachable = 0;
  for (int i = 0; i < 10; ++i) {
    Rng rng = make_rng(1111, i);
    const DensityOperator rho = random_density(rng, 2);
    const CompositeTestResult r = composite_alternative_test(rho, alts, 10, 0.1);
    v.require(r.exponents_hold, "Type-II exponent below D - 2 delta on instance " + std::to_string(i));
    v.require(r.miss_bound_holds, "measured Type-I bound fails on instance " + std::to_string(i));
    if (r.chebyshev_eps < 1.0) {
      ++reachable;
      v.require(r.chebyshev_bound_holds, "eps + 2 r sqrt(eps) bound fails on instance " + std::to_string(i));
    }
  }
  v.detail << "10 states at n=10, delta=0.1: exponents hold; Chebyshev eps < 1 on " << reachable << "/10";
}

void operator_sweeps(Verdict& v) {
  for (SweepKind k : {SweepKind::Gentle, SweepKind::Close, SweepKind::HayashiNagaoka, SweepKind::Spectral}) {
    const SweepReport r = run_inequality_sweep(k, 1000, 1212, 1e-8);
    v.require(r.violations == 0, sweep_name(k) + ": " + std::to_string(r.violations) + " violations");
    v.detail << sweep_name(k) << " " << r.cases << " ok (margin " << fmt(r.worst_margin) << ") ";
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "hypothesis-testing duality", 60, duality},
      {2, "Renyi bounds on D_H sweeps", 120, divergence_sweeps},
      {3, "Stein sandwich", 30, stein},
      {4, "second-order expansion", 10, second_order},
      {5, "position-based p2p decoding", 120, position_based},
      {6, "MAC simultaneous decoding", 180, multiple_access},
      {7, "cq-MAC derandomization", 60, derandomization},
      {8, "MAC rate regions", 60, rate_regions},
      {9, "divergence identities", 60, divergence_identities},
      {10, "multiple Chernoff exploration", 30, chernoff},
      {11, "composite-alternative test", 60, composite},
      {12, "operator inequality suites", 120, operator_sweeps},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(secs < c.time_limit, "runtime " + fmt(secs) + " s over " + fmt(c.time_limit) + " s");
    failures += v.pass ? 0 : 1;
    std::printf("%s  %2d  %-32s %7.2fs  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                v.summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
