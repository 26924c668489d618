#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pbc/entropy.hpp"
#include "pbc/errors.hpp"
#include "pbc/mac.hpp"
#include "pbc/random.hpp"

using namespace pbc;

namespace {

DensityOperator phi_plus_state() { return DensityOperator(oracle::phi_plus()); }

DensityOperator seeded_resource(std::uint64_t seed, std::uint64_t stream) {
  auto rng = make_rng(seed, stream);
  return random_pure(rng, 4, {2, 2});
}

QuantumChannel seeded_mac_channel(std::uint64_t seed, int dc = 2) {
  auto rng = make_rng(seed, 31);
  const QuantumChannel ch = random_channel(rng, 4, dc, 2);
  return QuantumChannel(ch.kraus(), {2, 2}, {dc});
}

MacCodeSpec seeded_spec(std::uint64_t seed, std::vector<int> sizes, double c = 1.0) {
  return MacCodeSpec{{seeded_resource(seed, 1), seeded_resource(seed, 2)}, seeded_mac_channel(seed),
                     std::move(sizes), std::nullopt, c};
}

// Two-sender position-based decoder on R1^L R2^M C assembled entry by entry; error of message pair (0, 0).
double dense_mac_error(const Matrix& omega, const Matrix& ref1, const Matrix& ref2, const Matrix& t, int l, int m,
                       int dc) {
  const int copies = l + m;
  int n = dc;
  for (int i = 0; i < copies; ++i) n *= 2;
  auto digits = [&](int idx) {
    std::vector<int> d(static_cast<std::size_t>(copies) + 1);
    d[copies] = idx % dc;
    idx /= dc;
    for (int i = copies; i-- > 0;) {
      d[i] = idx % 2;
      idx /= 2;
    }
    return d;
  };
  auto element = [&](const Matrix& x, const Matrix& r1, const Matrix& r2, int a, int b, const std::vector<int>& di,
                     const std::vector<int>& dj) {
    Complex v = x((di[a] * 2 + di[l + b]) * dc + di[copies], (dj[a] * 2 + dj[l + b]) * dc + dj[copies]);
    for (int i = 0; i < l; ++i)
      if (i != a) v *= r1(di[i], dj[i]);
    for (int i = 0; i < m; ++i)
      if (i != b) v *= r2(di[l + i], dj[l + i]);
    return v;
  };
  const Matrix id = Matrix::Identity(2, 2);
  Matrix sum = Matrix::Zero(n, n), g00 = Matrix::Zero(n, n), rho = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto di = digits(i), dj = digits(j);
      for (int a = 0; a < l; ++a)
        for (int b = 0; b < m; ++b) sum(i, j) += element(t, id, id, a, b, di, dj);
      g00(i, j) = element(t, id, id, 0, 0, di, dj);
      rho(i, j) = element(omega, ref1, ref2, 0, 0, di, dj);
    }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sum);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd inv(n);
  for (int i = 0; i < n; ++i) inv(i) = es.eigenvalues()(i) > 1e-12 * top ? 1.0 / std::sqrt(es.eigenvalues()(i)) : 0.0;
  const Matrix x = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  return omega.trace().real() - (x * g00 * x * rho).trace().real();
}

HermitianOperator seeded_omega(std::uint64_t seed) { return mac_output(seeded_spec(seed, {1, 1})); }

}  // namespace

TEST(MacOutput, MatchesEntryWiseRegrouping) {
  const MacCodeSpec spec = seeded_spec(3, {1, 1});
  const Matrix t1 = spec.resources[0].matrix(), t2 = spec.resources[1].matrix();
  // [R A S B] -> [R S A B] by index arithmetic, then the channel on A B.
  Matrix grouped = Matrix::Zero(16, 16);
  for (int r = 0; r < 2; ++r)
    for (int a = 0; a < 2; ++a)
      for (int s = 0; s < 2; ++s)
        for (int b = 0; b < 2; ++b)
          for (int r_ = 0; r_ < 2; ++r_)
            for (int a_ = 0; a_ < 2; ++a_)
              for (int s_ = 0; s_ < 2; ++s_)
                for (int b_ = 0; b_ < 2; ++b_)
                  grouped(((r * 2 + s) * 2 + a) * 2 + b, ((r_ * 2 + s_) * 2 + a_) * 2 + b_) =
                      t1(r * 2 + a, r_ * 2 + a_) * t2(s * 2 + b, s_ * 2 + b_);
  Matrix expect = Matrix::Zero(8, 8);
  for (const Matrix& k : spec.channel.kraus()) {
    const Matrix big = kron(Matrix::Identity(4, 4), k);
    expect += big * grouped * big.adjoint();
  }
  const HermitianOperator omega = mac_output(spec);
  EXPECT_EQ(omega.dims(), (Dims{2, 2, 2}));
  EXPECT_LT((omega.matrix() - expect).norm(), 1e-12);
}

TEST(MacOutput, DecoupledSendersUseMarginals) {
  const MacCodeSpec spec = seeded_spec(4, {1, 1});
  const HermitianOperator w1 = mac_output(spec, 1u);
  MacCodeSpec manual = spec;
  const HermitianOperator theta = spec.resources[0].op();
  manual.resources[0] = DensityOperator(tensor(partial_trace(theta, {0}), partial_trace(theta, {1})));
  EXPECT_LT((w1.matrix() - mac_output(manual).matrix()).norm(), 1e-12);
  // Tracing out R1 forgets the decoupling.
  EXPECT_LT((partial_trace(w1, {1, 2}).matrix() - partial_trace(mac_output(spec), {1, 2}).matrix()).norm(), 1e-12);
}

TEST(SimulateMac, MatchesEntryWiseDecoder) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (auto [l, m] : {std::pair{2, 2}, std::pair{2, 1}, std::pair{1, 3}}) {
      const MacCodeSpec spec = seeded_spec(seed, {l, m});
      const CodePerformance perf = simulate_mac(spec);
      const HermitianOperator omega = mac_output(spec);
      const Matrix r1 = partial_trace(spec.resources[0].op().with_dims({2, 2}), {0}).matrix();
      const Matrix r2 = partial_trace(spec.resources[1].op().with_dims({2, 2}), {0}).matrix();
      const double expect = dense_mac_error(omega.matrix(), r1, r2, perf.test_used.op.matrix(), l, m, 2);
      EXPECT_NEAR(perf.exact_error, expect, 1e-10) << seed << " " << l << " " << m;
      EXPECT_LT(perf.message_spread, 1e-9);
    }
  }
}

TEST(SimulateMac, SingleMessagesMissTheTest) {
  const MacCodeSpec spec = seeded_spec(5, {1, 1});
  const CodePerformance perf = simulate_mac(spec);
  const HermitianOperator omega = mac_output(spec);
  const double miss = 1.0 - trace_product(perf.test_used.op.matrix(), omega.matrix());
  EXPECT_NEAR(perf.exact_error, miss, 1e-10);
}

TEST(SimulateMac, ReplacerChannelCannotBeatGuessing) {
  auto rng = make_rng(8, 3);
  const DensityOperator out = random_density(rng, 2);
  const QuantumChannel replacer(QuantumChannel::replacer(out, {4}).kraus(), {2, 2}, {2});
  for (auto [l, m] : {std::pair{2, 2}, std::pair{3, 1}, std::pair{2, 3}}) {
    const MacCodeSpec spec{{seeded_resource(8, 1), seeded_resource(8, 2)}, replacer, {l, m}, std::nullopt, 1.0};
    EXPECT_GE(simulate_mac(spec).exact_error, 1.0 - 1.0 / (l * m) - 1e-10);
  }
}

TEST(SimulateMac, ErrorWithinOneShotBound) {
  for (std::uint64_t seed = 0; seed < 4; ++seed)
    for (double c : {0.5, 1.0, 2.0}) {
      const CodePerformance perf = simulate_mac(seeded_spec(seed, {2, 2}, c));
      EXPECT_LE(perf.exact_error, perf.bound + 1e-12) << seed << " " << c;
    }
}

TEST(SimulateMac, ThreeSenders) {
  auto rng = make_rng(12, 0);
  const QuantumChannel ch = random_channel(rng, 8, 2, 4);
  const MacCodeSpec spec{{seeded_resource(12, 1), seeded_resource(12, 2), seeded_resource(12, 3)},
                         QuantumChannel(ch.kraus(), {2, 2, 2}, {2}), {2, 1, 2}, std::nullopt, 1.0};
  const CodePerformance perf = simulate_mac(spec);
  EXPECT_GE(perf.exact_error, 0.0);
  EXPECT_LE(perf.exact_error, perf.bound + 1e-12);
  EXPECT_LT(perf.message_spread, 1e-9);
}

TEST(SimulateMac, Preconditions) {
  EXPECT_THROW(simulate_mac(seeded_spec(0, {8, 8})), BudgetError);
  EXPECT_THROW(simulate_mac(seeded_spec(0, {0, 2})), PreconditionError);
  EXPECT_THROW(simulate_mac(seeded_spec(0, {2})), PreconditionError);
  auto rng = make_rng(1, 0);
  const QuantumChannel ch = random_channel(rng, 16, 2, 8);
  const MacCodeSpec four{{seeded_resource(1, 1), seeded_resource(1, 2), seeded_resource(1, 3), seeded_resource(1, 4)},
                         QuantumChannel(ch.kraus(), {2, 2, 2, 2}, {2}), {1, 1, 1, 1}, std::nullopt, 1.0};
  EXPECT_THROW(simulate_mac(four), BudgetError);
  MacCodeSpec bad = seeded_spec(0, {2, 2});
  bad.test = BinaryTest{HermitianOperator::identity({2, 2}), std::nullopt, std::nullopt};
  EXPECT_THROW(simulate_mac(bad), DimensionError);
}

TEST(MacBound, SingleMessagesKeepOnlyTheMiss) {
  const MacCodeSpec spec = seeded_spec(6, {1, 1}, 0.7);
  const MacBoundTerms terms = mac_bound_terms(spec);
  EXPECT_NEAR(terms.bound, 1.7 * terms.miss, 1e-14);
}

TEST(MacBound, IdentityTestSumsMultiplicities) {
  MacCodeSpec spec = seeded_spec(6, {3, 2}, 2.0);
  spec.test = BinaryTest{HermitianOperator::identity({2, 2, 2}), std::nullopt, std::nullopt};
  const double c2 = 2.0 + 2.0 + 0.5;
  EXPECT_NEAR(mac_one_shot_bound(spec), c2 * (2.0 + 1.0 + 2.0), 1e-10);
}

TEST(MacBound, TwoSenderTermsMatchDirectTraces) {
  const MacCodeSpec spec = seeded_spec(7, {3, 4}, 1.0);
  const MacBoundTerms terms = mac_bound_terms(spec);
  const Matrix t = default_mac_test(spec).op.matrix();
  // Decoupled states assembled from the resource marginals by hand.
  auto product_resource = [](const DensityOperator& th) {
    const HermitianOperator x = th.op().with_dims({2, 2});
    return DensityOperator(tensor(partial_trace(x, {0}), partial_trace(x, {1})));
  };
  MacCodeSpec s1 = spec, s2 = spec, s12 = spec;
  s1.resources[0] = product_resource(spec.resources[0]);
  s2.resources[1] = product_resource(spec.resources[1]);
  s12.resources = {product_resource(spec.resources[0]), product_resource(spec.resources[1])};
  const double miss = 1.0 - trace_product(t, mac_output(spec).matrix());
  const double a = trace_product(t, mac_output(s1).matrix());
  const double b = trace_product(t, mac_output(s2).matrix());
  const double ab = trace_product(t, mac_output(s12).matrix());
  ASSERT_EQ(terms.subsets, (std::vector<unsigned>{1u, 2u, 3u}));
  EXPECT_NEAR(terms.miss, miss, 1e-12);
  EXPECT_NEAR(terms.confusion[0], a, 1e-12);
  EXPECT_NEAR(terms.confusion[1], b, 1e-12);
  EXPECT_NEAR(terms.confusion[2], ab, 1e-12);
  EXPECT_NEAR(terms.bound, 2.0 * miss + 4.0 * (2.0 * a + 3.0 * b + 6.0 * ab), 1e-12);
}

TEST(MacBound, ThreeSendersEnumerateSevenSubsets) {
  auto rng = make_rng(13, 0);
  const QuantumChannel ch = random_channel(rng, 8, 2, 4);
  const MacCodeSpec spec{{seeded_resource(13, 1), seeded_resource(13, 2), seeded_resource(13, 3)},
                         QuantumChannel(ch.kraus(), {2, 2, 2}, {2}), {2, 3, 1}, std::nullopt, 1.0};
  const MacBoundTerms terms = mac_bound_terms(spec);
  ASSERT_EQ(terms.subsets.size(), 7u);
  double sum = 0.0;
  for (std::size_t i = 0; i < terms.subsets.size(); ++i) {
    const unsigned j = terms.subsets[i];
    const double mult = ((j & 2u) ? 2.0 : 1.0) * ((j & 4u) ? 0.0 : 1.0);  // (M_k - 1) = 1, 2, 0
    EXPECT_EQ(terms.multiplicity[i], mult) << j;
    sum += mult * terms.confusion[i];
  }
  EXPECT_NEAR(terms.bound, 2.0 * terms.miss + 4.0 * sum, 1e-12);
}

TEST(MacBound, ThirdSenderWithOneMessageReducesToTwo) {
  // Sender 3 has a trivial reference and one message; folding its input state into the channel
  // gives a two-sender code with the same test, and the bounds must coincide.
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto rng = make_rng(seed, 14);
    const QuantumChannel ch = random_channel(rng, 8, 2, 4);
    const DensityOperator a3 = random_density(rng, 2);
    const MacCodeSpec three{{seeded_resource(seed, 1), seeded_resource(seed, 2), DensityOperator(a3.op().with_dims({1, 2}))},
                            QuantumChannel(ch.kraus(), {2, 2, 2}, {2}), {2, 3, 1}, std::nullopt, 1.0};
    const Spectrum sp = eigh(a3.matrix());
    std::vector<Matrix> folded;
    for (const Matrix& k : ch.kraus())
      for (int i = 0; i < 2; ++i) {
        if (sp.values(i) <= 0.0) continue;
        folded.push_back(k * kron(Matrix::Identity(4, 4), sp.vectors.col(i) * std::sqrt(sp.values(i))));
      }
    MacCodeSpec two{{three.resources[0], three.resources[1]}, QuantumChannel(folded, {2, 2}, {2}), {2, 3},
                    std::nullopt, 1.0};
    const HermitianOperator t = default_mac_test(three).op;
    MacCodeSpec three_t = three;
    three_t.test = BinaryTest{t, std::nullopt, std::nullopt};
    two.test = BinaryTest{t.with_dims({2, 2, 2}), std::nullopt, std::nullopt};
    EXPECT_LT((mac_output(three).matrix() - mac_output(two).matrix()).norm(), 1e-12);
    EXPECT_NEAR(mac_one_shot_bound(three_t), mac_one_shot_bound(two), 1e-12);
    const CodePerformance p3 = simulate_mac(three_t);
    EXPECT_NEAR(p3.exact_error, simulate_mac(two).exact_error, 1e-10);
  }
}

TEST(SimulateMac, NoiselessSharedEntanglement) {
  const MacCodeSpec spec{{phi_plus_state(), phi_plus_state()}, QuantumChannel::identity({2, 2}), {2, 2},
                         std::nullopt, 1.0};
  // On Phi+ (x) Phi+ the weighted difference is 1 - 2/4 - 2/4 - 4/16 < 0 and every other
  // eigenvalue is negative too, so the default test vanishes and every message is lost.
  const CodePerformance perf = simulate_mac(spec);
  EXPECT_LT(perf.test_used.op.matrix().norm(), 1e-12);
  EXPECT_NEAR(perf.exact_error, 1.0, 1e-12);
  // With weights (L-1), (M-1) the test is Phi+ (x) Phi+ and the decoder still errs.
  const HermitianOperator x = mac_output(spec) - mac_output(spec, 1u) - mac_output(spec, 2u) - mac_output(spec, 3u);
  MacCodeSpec lighter = spec;
  lighter.test = BinaryTest{positive_spectral_projection(x), std::nullopt, std::nullopt};
  const double expect = dense_mac_error(mac_output(spec).matrix(), Matrix::Identity(2, 2) / 2.0,
                                        Matrix::Identity(2, 2) / 2.0, lighter.test->op.matrix(), 2, 2, 4);
  const CodePerformance p = simulate_mac(lighter);
  EXPECT_NEAR(p.exact_error, expect, 1e-10);
  EXPECT_GT(p.exact_error, 0.1);
  EXPECT_LE(p.exact_error, p.bound);
}

TEST(Derandomize, SingleCodewordIsPlainDecoding) {
  auto rng = make_rng(21, 0);
  std::vector<std::vector<DensityOperator>> out(2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y) out[x].push_back(random_density(rng, 2));
  const CqMac mac(out, {0.3, 0.7}, {0.2, 0.3, 0.5});
  const DerandomizedCode code = derandomize_cq_mac(mac, 1, 1);
  ASSERT_EQ(code.decoder.size(), 1u);
  const Matrix omega = code.decoder[0].matrix();
  const double expect = 1.0 - trace_product(omega, mac.output(code.codebook_x[0], code.codebook_y[0]).matrix());
  EXPECT_NEAR(code.avg_error, expect, 1e-12);
  EXPECT_EQ(code.candidates, 6);
}

TEST(Derandomize, OrthogonalOutputsDecodePerfectly) {
  std::vector<std::vector<DensityOperator>> out(2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      pbc::Vector v = pbc::Vector::Zero(4);
      v[2 * x + y] = 1.0;
      out[x].push_back(DensityOperator(HermitianOperator::pure(v)));
    }
  const CqMac mac(out, {0.5, 0.5}, {0.5, 0.5});
  const DerandomizedCode code = derandomize_cq_mac(mac, 2, 2);
  EXPECT_TRUE(code.enumerated);
  EXPECT_EQ(code.candidates, 16);
  EXPECT_LT(code.avg_error, 1e-12);
  EXPECT_NE(code.codebook_x[0], code.codebook_x[1]);
  EXPECT_NE(code.codebook_y[0], code.codebook_y[1]);
  EXPECT_LE(code.avg_error, code.ensemble_average + 1e-9);
  EXPECT_GT(code.ensemble_average, 0.1);
}

TEST(Derandomize, MinimumBeatsEnsembleAverage) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto rng = make_rng(seed, 22);
    std::vector<std::vector<DensityOperator>> out(2);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) out[x].push_back(random_density(rng, 3));
    const CqMac mac(out, {0.4, 0.6}, {0.5, 0.5});
    for (auto family : {CqTestFamily::PrettyGood, CqTestFamily::CompositeHelstrom}) {
      DerandomizeOptions opt;
      opt.family = family;
      const DerandomizedCode code = derandomize_cq_mac(mac, 2, 2, opt);
      // Exhaustive oracle over the 16 codebook pairs.
      const auto tests = cq_test_family(mac, 2, 2, family);
      double avg = 0.0, best = 2.0;
      for (int a = 0; a < 16; ++a) {
        const std::vector<int> xs{(a >> 3) & 1, (a >> 2) & 1}, ys{(a >> 1) & 1, a & 1};
        const double e = cq_codebook_error(mac, tests, xs, ys);
        avg += mac.p_x()[xs[0]] * mac.p_x()[xs[1]] * mac.p_y()[ys[0]] * mac.p_y()[ys[1]] * e;
        best = std::min(best, e);
      }
      EXPECT_NEAR(code.ensemble_average, avg, 1e-12);
      EXPECT_NEAR(code.avg_error, best, 1e-12);
      if (family == CqTestFamily::PrettyGood) EXPECT_LT(code.avg_error, code.ensemble_average - 1e-6);
      else EXPECT_LE(code.avg_error, code.ensemble_average + 1e-9);
    }
  }
}

TEST(Derandomize, DecoderIsSubNormalizedAndMatchesError) {
  auto rng = make_rng(23, 0);
  std::vector<std::vector<DensityOperator>> out(3);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 2; ++y) out[x].push_back(random_density(rng, 3));
  const CqMac mac(out, {0.2, 0.3, 0.5}, {0.5, 0.5});
  const DerandomizedCode code = derandomize_cq_mac(mac, 2, 3);
  ASSERT_EQ(code.decoder.size(), 6u);
  Matrix sum = Matrix::Zero(3, 3);
  double success = 0.0;
  for (int l = 0; l < 2; ++l)
    for (int m = 0; m < 3; ++m) {
      const Matrix& o = code.decoder[l * 3 + m].matrix();
      sum += o;
      success += trace_product(o, mac.output(code.codebook_x[l], code.codebook_y[m]).matrix());
    }
  EXPECT_LT(eigh(sum).values.maxCoeff(), 1.0 + 1e-10);
  EXPECT_NEAR(code.avg_error, 1.0 - success / 6.0, 1e-12);
}

TEST(Derandomize, SampledSearchIsSeededAndBelowSampleMean) {
  auto rng = make_rng(24, 0);
  std::vector<std::vector<DensityOperator>> out(2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) out[x].push_back(random_density(rng, 2));
  const CqMac mac(out, {0.5, 0.5}, {0.5, 0.5});
  DerandomizeOptions opt;
  opt.enumeration_limit = 10;
  opt.search_budget = 50;
  opt.seed = 9;
  const DerandomizedCode a = derandomize_cq_mac(mac, 3, 2, opt);
  const DerandomizedCode b = derandomize_cq_mac(mac, 3, 2, opt);
  EXPECT_FALSE(a.enumerated);
  EXPECT_EQ(a.candidates, 50);
  EXPECT_EQ(a.codebook_x, b.codebook_x);
  EXPECT_EQ(a.codebook_y, b.codebook_y);
  EXPECT_EQ(a.avg_error, b.avg_error);
  EXPECT_LE(a.avg_error, a.ensemble_average + 1e-9);
  opt.search_budget = 0;
  EXPECT_THROW(derandomize_cq_mac(mac, 3, 2, opt), PreconditionError);
}

TEST(CqMac, RejectsBadDistributions) {
  std::vector<std::vector<DensityOperator>> out{{DensityOperator(HermitianOperator::identity({2}) * 0.5)}};
  EXPECT_THROW(CqMac(out, {0.9}, {1.0}), PreconditionError);
  EXPECT_THROW(CqMac(out, {1.0, 0.0}, {1.0}), DimensionError);
}

TEST(RateRegions, SingleSenderFamiliesAgree) {
  auto rng = make_rng(30, 0);
  const HermitianOperator omega = random_density(rng, 6, 2, {2, 3}).op();
  const RateRegion r2 = rate_region_renyi2(omega), col = rate_region_collision(omega), mi = rate_region_mi(omega);
  const double expect = renyi2_entropy(partial_trace(omega, {1})) - conditional_entropy(omega, {1});
  ASSERT_EQ(r2.constraints.size(), 1u);
  EXPECT_NEAR(r2.constraints[0].bound, expect, 1e-10);
  EXPECT_NEAR(col.constraints[0].bound, expect, 1e-10);
  EXPECT_NEAR(mi.constraints[0].bound, mutual_information(omega, {0}), 1e-12);
}

TEST(RateRegions, NoiselessMaximallyEntangled) {
  const MacCodeSpec spec{{phi_plus_state(), phi_plus_state()}, QuantumChannel::identity({2, 2}), {1, 1},
                         std::nullopt, 1.0};
  const HermitianOperator omega = mac_output(spec);
  const RateRegion mi = rate_region_mi(omega);
  EXPECT_NEAR(mi.constraints[0].bound, 2.0, 1e-10);
  EXPECT_NEAR(mi.constraints[1].bound, 2.0, 1e-10);
  EXPECT_NEAR(mi.constraints[2].bound, 4.0, 1e-10);
  EXPECT_FALSE(mi.conjectured);
  // omega_{S A B} = I/2 (x) Phi+, so H2 = 1 and H(SAB|R) = -1; the sum term is 2 + 2.
  const RateRegion r2 = rate_region_renyi2(omega);
  EXPECT_NEAR(r2.constraints[0].bound, 2.0, 1e-10);
  EXPECT_NEAR(r2.constraints[1].bound, 2.0, 1e-10);
  EXPECT_NEAR(r2.constraints[2].bound, 4.0, 1e-10);
  // H2(AB|S) = -log2(2 Tr{omega_SAB^2}) = 0 against H(AB|RS) = -2.
  const RateRegion col = rate_region_collision(omega);
  EXPECT_NEAR(col.constraints[0].bound, 2.0, 1e-10);
  EXPECT_NEAR(col.constraints[1].bound, 2.0, 1e-10);
  EXPECT_NEAR(col.constraints[2].bound, 4.0, 1e-10);
}

TEST(RateRegions, IndependentOutputGivesNothing) {
  auto rng = make_rng(31, 0);
  const HermitianOperator omega =
      tensor(tensor(random_density(rng, 2).op(), random_density(rng, 2).op()), random_density(rng, 2).op())
          .with_dims({2, 2, 2});
  for (const auto& c : rate_region_mi(omega).constraints) EXPECT_NEAR(c.bound, 0.0, 1e-10);
  for (const auto& c : rate_region_renyi2(omega).constraints) EXPECT_LE(c.bound, 1e-10);
  for (const auto& c : rate_region_collision(omega).constraints) EXPECT_LE(c.bound, 1e-10);
  EXPECT_FALSE(region_membership(rate_region_renyi2(omega), {0.01, 0.0}));
}

TEST(RateRegions, RenyiFamiliesInsideMutualInformation) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const HermitianOperator omega = seeded_omega(seed);
    const RateRegion mi = rate_region_mi(omega);
    for (const RateRegion& r : {rate_region_renyi2(omega), rate_region_collision(omega)})
      for (std::size_t i = 0; i < r.constraints.size(); ++i) {
        EXPECT_EQ(r.constraints[i].subset, mi.constraints[i].subset);
        EXPECT_LE(r.constraints[i].bound, mi.constraints[i].bound + 1e-10) << r.family << " " << seed;
      }
  }
}

TEST(RateRegions, CollisionTermUsesClassicalFormulaForCqStates) {
  auto rng = make_rng(32, 0);
  std::vector<std::vector<DensityOperator>> out(2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y) out[x].push_back(random_density(rng, 2));
  const CqMac mac(out, {0.35, 0.65}, {0.2, 0.5, 0.3});
  const HermitianOperator omega = mac.joint_state();
  const RateRegion col = rate_region_collision(omega);
  // J = {1}: conditioning on Y only, sigma_y = sum_x p(x) rho^{x,y}.
  std::vector<HermitianOperator> given_y;
  for (int y = 0; y < 3; ++y) {
    Matrix s = Matrix::Zero(2, 2);
    for (int x = 0; x < 2; ++x) s += mac.p_x()[x] * mac.output(x, y).matrix();
    given_y.emplace_back(s);
  }
  std::vector<HermitianOperator> all;
  std::vector<double> pxy;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y) {
      all.push_back(mac.output(x, y).op());
      pxy.push_back(mac.p_x()[x] * mac.p_y()[y]);
    }
  double h_given_all = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) h_given_all += pxy[i] * von_neumann_entropy(all[i]);
  EXPECT_NEAR(col.constraints[0].bound, collision_conditional_entropy_cq(mac.p_y(), given_y) - h_given_all, 1e-10);
  EXPECT_NEAR(col.constraints[2].bound, renyi2_entropy(mac.average_output()) - h_given_all, 1e-10);
}

TEST(RateRegions, LabelsRecordBothPairings) {
  const RateRegion r2 = rate_region_renyi2(seeded_omega(1));
  EXPECT_EQ(r2.constraints[0].label, "H2(S2C) - H(S2C|S1)");
  EXPECT_EQ(r2.constraints[0].alternate_label, "H2(S1C) - H(S1C|S2)");
  EXPECT_TRUE(r2.constraints[2].alternate_label.empty());
}

TEST(RateRegions, ThreeSenderMutualInformationIsConjectured) {
  auto rng = make_rng(33, 0);
  const HermitianOperator omega = random_density(rng, 16, 2, {2, 2, 2, 2}).op();
  const RateRegion mi = rate_region_mi(omega);
  EXPECT_TRUE(mi.conjectured);
  EXPECT_EQ(mi.constraints.size(), 7u);
  const RateRegion r2 = rate_region_renyi2(omega);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_LE(r2.constraints[i].bound, mi.constraints[i].bound + 1e-10);
}

TEST(RegionMembership, OriginAndSumBound) {
  const RateRegion r{2, "test", false, {{1u, 1.0, "a", ""}, {2u, 1.0, "b", ""}, {3u, 1.5, "c", ""}}};
  EXPECT_TRUE(region_membership(r, {0.0, 0.0}));
  EXPECT_TRUE(region_membership(r, {0.75, 0.75}));
  EXPECT_FALSE(region_membership(r, {0.8, 0.8}));
  EXPECT_FALSE(region_membership(r, {1.1, 0.0}));
  EXPECT_FALSE(region_membership(r, {-0.1, 0.0}));
  EXPECT_THROW(region_membership(r, {0.0}), DimensionError);
}

TEST(RegionVertices, PentagonAndHull) {
  const RateRegion a{2, "a", false, {{1u, 2.0, "", ""}, {2u, 0.5, "", ""}, {3u, 2.2, "", ""}}};
  const RateRegion b{2, "b", false, {{1u, 0.5, "", ""}, {2u, 2.0, "", ""}, {3u, 2.2, "", ""}}};
  const RegionVertices v = region_vertices_2d(a, b);
  EXPECT_FALSE(v.unbounded);
  EXPECT_EQ(v.first.size(), 5u);
  EXPECT_EQ(v.second.size(), 5u);
  // 2 x 0.5 rectangle minus a 0.3 x 0.3 corner; the hull is the 2 x 2 square minus a 1.8 x 1.8 corner.
  EXPECT_NEAR(polygon_area(v.first), 0.955, 1e-12);
  EXPECT_NEAR(polygon_area(v.second), 0.955, 1e-12);
  EXPECT_NEAR(polygon_area(v.hull), 2.38, 1e-12);
  EXPECT_EQ(v.hull.size(), 5u);
  for (const Point2& p : v.first) EXPECT_TRUE(polygon_contains(v.hull, p, 1e-9));
  for (const Point2& p : v.second) EXPECT_TRUE(polygon_contains(v.hull, p, 1e-9));
  EXPECT_TRUE(polygon_contains(v.hull, {1.0, 1.0}));
  EXPECT_FALSE(region_membership(a, {1.0, 1.0}));
  EXPECT_FALSE(region_membership(b, {1.0, 1.0}));
}

TEST(RegionVertices, SeededRegionsInsideHull) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const HermitianOperator omega = seeded_omega(seed);
    const RateRegion mi = rate_region_mi(omega);
    const RegionVertices v = region_vertices_2d(rate_region_renyi2(omega), rate_region_collision(omega));
    const RegionVertices outer = region_vertices_2d(mi, mi);
    for (const auto* poly : {&v.first, &v.second})
      for (const Point2& p : *poly) {
        EXPECT_TRUE(polygon_contains(v.hull, p, 1e-9));
        EXPECT_TRUE(region_membership(mi, {p.x, p.y}, 1e-9));
      }
    EXPECT_GE(polygon_area(outer.hull) + 1e-12, polygon_area(v.hull));
  }
}

TEST(RegionVertices, MissingConstraintIsUnbounded) {
  const RateRegion a{2, "a", false, {{1u, 1.0, "", ""}}};
  const RateRegion b{2, "b", false, {{1u, 1.0, "", ""}, {2u, 1.0, "", ""}}};
  EXPECT_TRUE(region_vertices_2d(a, b).unbounded);
  EXPECT_FALSE(region_vertices_2d(b, b).unbounded);
  const RateRegion three{3, "c", false, {}};
  EXPECT_THROW(region_vertices_2d(three, b), PreconditionError);
}

TEST(DivergenceIdentities, ZeroRatesGiveMutualInformation) {
  const MacCodeSpec spec = seeded_spec(40, {1, 1});
  const DivergenceIdentities t =
      mac_divergence_identities(spec.resources[0], spec.resources[1], spec.channel, 0.0, 0.0);
  const HermitianOperator omega = mac_output(spec);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_NEAR(t.rows[0].divergence, mutual_information(omega, {0}), 1e-9);
  EXPECT_NEAR(t.rows[1].divergence, mutual_information(omega, {1}), 1e-9);
  EXPECT_NEAR(t.rows[2].divergence, mutual_information(omega, {0, 1}), 1e-9);
}

TEST(DivergenceIdentities, SeededResidualsVanish) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rng = make_rng(seed, 41);
    const MacCodeSpec spec = seeded_spec(seed, {1, 1});
    const double r1 = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    const double r2 = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    const DivergenceIdentities t = mac_divergence_identities(spec.resources[0], spec.resources[1], spec.channel, r1, r2);
    EXPECT_LE(t.max_residual, 1e-9) << seed;
  }
}

TEST(DivergenceIdentities, SignChangeTracksRegionBoundary) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const MacCodeSpec spec = seeded_spec(seed, {1, 1});
    const RateRegion mi = rate_region_mi(mac_output(spec));
    auto min_div = [&](double t) {
      const auto tab = mac_divergence_identities(spec.resources[0], spec.resources[1], spec.channel, t, 0.5 * t);
      double m = tab.rows[0].divergence;
      for (const auto& r : tab.rows) m = std::min(m, r.divergence);
      return m;
    };
    double lo = 0.0, hi = 10.0;
    ASSERT_GT(min_div(lo), 0.0);
    ASSERT_LT(min_div(hi), 0.0);
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (min_div(mid) > 0.0 ? lo : hi) = mid;
    }
    EXPECT_TRUE(region_membership(mi, {lo * (1 - 1e-6), 0.5 * lo * (1 - 1e-6)}));
    EXPECT_FALSE(region_membership(mi, {hi * (1 + 1e-6), 0.5 * hi * (1 + 1e-6)}));
  }
}

TEST(MacExponent, ZeroRatesNonNegative) {
  const MacExponent e = mac_error_exponent(seeded_omega(50), {0.0, 0.0}, uniform_grid(41));
  EXPECT_GE(e.value, -1e-12);
  EXPECT_EQ(e.terms.size(), 3u);
  EXPECT_EQ(e.label, "conditional exponent");
}

TEST(MacExponent, RatesAboveRegionGiveNoExponent) {
  const HermitianOperator omega = seeded_omega(51);
  const RateRegion mi = rate_region_mi(omega);
  const double big = mi.constraints[2].bound + 1.0;
  EXPECT_LE(mac_error_exponent(omega, {big, big}, uniform_grid(41)).value, 1e-12);
}

TEST(MacExponent, PositiveExactlyInsideRegion) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const HermitianOperator omega = seeded_omega(seed);
    const RateRegion mi = rate_region_mi(omega);
    const double top = mi.constraints[2].bound;
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; b <= 6; ++b) {
        const std::vector<double> rates{top * a / 6.0, top * b / 6.0};
        double slack = std::numeric_limits<double>::infinity();
        for (const auto& c : mi.constraints) {
          double sum = 0.0;
          if (c.subset & 1u) sum += rates[0];
          if (c.subset & 2u) sum += rates[1];
          slack = std::min(slack, c.bound - sum);
        }
        if (std::abs(slack) < 1e-3) continue;
        const MacExponent e = mac_error_exponent(omega, rates, uniform_grid(101));
        EXPECT_EQ(e.value > 1e-12, slack > 0.0) << seed << " " << a << " " << b << " " << e.value;
      }
  }
}
