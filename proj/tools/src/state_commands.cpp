#include <cmath>
#include <sstream>

#include "commands.hpp"
#include "inputs.hpp"
#include "pbc/entropy.hpp"
#include "pbc/hyptest.hpp"
#include "pbc/io.hpp"
#include "pbc/typicality.hpp"

namespace pbclab {
namespace {

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

struct EntropyArgs {
  std::string state;
  std::vector<int> split{0};
};

Result entropy(const EntropyArgs& a) {
  const pbc::DensityOperator rho = load_state(a.state);
  Result r;
  r.body["H"] = pbc::von_neumann_entropy(rho);
  r.body["H2"] = pbc::renyi2_entropy(rho);
  if (rho.op().subsystems() >= 2) {
    r.body["I"] = pbc::mutual_information(rho, a.split);
    r.body["H_A_given_B"] = pbc::conditional_entropy(rho, a.split);
    r.body["H2_A_given_B"] = pbc::collision_conditional_entropy(rho, a.split);
  }
  return r;
}

struct PairArgs {
  std::string rho;
  std::string sigma;
};

struct DivergenceArgs : PairArgs {
  std::vector<double> alphas;
};

Result divergence(const DivergenceArgs& a) {
  const pbc::DensityOperator rho = load_state(a.rho);
  const pbc::HermitianOperator sigma = load_operator(a.sigma);
  const pbc::DivergenceResult d = pbc::relative_entropy(rho, sigma);
  Result r;
  r.body["D"] = d.infinite ? Json(nullptr) : Json(d.value);
  r.body["infinite"] = d.infinite;
  if (!d.infinite) r.body["variance"] = pbc::relative_entropy_variance(rho, sigma);
  Json rows = Json::array();
  for (double alpha : a.alphas) {
    const pbc::DivergenceResult petz = pbc::renyi_relative_entropy(rho, sigma, alpha);
    const pbc::DivergenceResult sand = pbc::sandwiched_renyi(rho, sigma, alpha);
    rows.push_back({{"alpha", alpha},
                    {"petz", petz.infinite ? Json(nullptr) : Json(petz.value)},
                    {"sandwiched", sand.infinite ? Json(nullptr) : Json(sand.value)}});
  }
  r.body["renyi"] = std::move(rows);
  return r;
}

struct HypArgs : PairArgs {
  std::string state;
  std::vector<int> split{0};
  double eps = 0.1;
  bool min_sigma = false;
};

Result hyptest(const HypArgs& a) {
  Result r;
  if (!a.state.empty()) {
    const pbc::DensityOperator rho = load_state(a.state);
    if (a.min_sigma) {
      const pbc::MinSigmaResult m = pbc::hyp_test_mutual_info_min_sigma(rho, a.eps, a.split);
      r.body["value"] = m.value;
      r.body["lower"] = m.lower;
      r.body["iterations"] = m.iterations;
      r.body["converged"] = m.converged;
      return r;
    }
    const pbc::HypTestValue h = pbc::hyp_test_mutual_info(rho, a.eps, a.split);
    r.body = {{"value", finite_or_null(h.value)}, {"type1", h.type1}, {"type2", h.type2},
              {"dual_type2", h.dual_type2}, {"gap", h.primal_dual_gap}, {"infinite", h.infinite}};
    return r;
  }
  if (a.rho.empty() || a.sigma.empty()) throw CLI::ValidationError("hyptest", "give --rho and --sigma, or --state");
  const pbc::HypTestValue h = pbc::hyp_test_rel_entropy(load_state(a.rho), load_operator(a.sigma), a.eps);
  r.body = {{"value", finite_or_null(h.value)}, {"type1", h.type1}, {"type2", h.type2},
            {"dual_type2", h.dual_type2}, {"gap", h.primal_dual_gap}, {"infinite", h.infinite}};
  return r;
}

struct SteinArgs : PairArgs {
  double eps = 0.1;
  int n = 100;
  std::optional<double> alpha_lo;
  std::optional<double> alpha_hi;
};

Result stein(const SteinArgs& a) {
  const double step = 1.0 / std::sqrt(static_cast<double>(a.n));
  const pbc::SteinSandwich s = pbc::stein_sandwich(load_state(a.rho), load_operator(a.sigma), a.eps, a.n,
                                                   a.alpha_lo.value_or(1.0 - step), a.alpha_hi.value_or(1.0 + step));
  Result r;
  r.body = {{"lower", s.lower}, {"exact", s.exact}, {"upper", s.upper}, {"holds", s.holds},
            {"classical_path", s.classical_path}};
  r.check_failed = !s.holds;
  return r;
}

struct ChernoffArgs {
  std::string a;
  std::vector<std::string> alts;
  std::vector<double> weights;
  std::vector<int> ns;
};

Result chernoff_multi(const ChernoffArgs& a) {
  const pbc::HermitianOperator base = load_operator(a.a);
  const std::vector<pbc::HermitianOperator> alts = load_operators(a.alts);
  std::vector<double> weights = a.weights;
  if (weights.empty()) weights.assign(alts.size() + 1, 1.0);
  const pbc::ChernoffTrace t = pbc::chernoff_multi_trace(base, alts, weights, a.ns);
  Result r;
  r.body["min_chernoff"] = t.min_chernoff;
  r.body["truncated"] = t.truncated;
  r.body["classical_path"] = t.classical_path;
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "n,rate,gap\n";
  for (const auto& row : t.rows) {
    rows.push_back({{"n", row.n}, {"rate", row.rate}, {"gap", row.gap}});
    csv << row.n << ',' << pbc::format_double(row.rate) << ',' << pbc::format_double(row.gap) << '\n';
  }
  r.body["rows"] = std::move(rows);
  r.csv = csv.str();
  return r;
}

struct TypicalityArgs {
  std::string state;
  std::string b;
  std::vector<std::string> alts;
  int n = 10;
  double delta = 0.1;
  std::optional<double> eps;
};

Result typicality(const TypicalityArgs& a) {
  const pbc::DensityOperator rho = load_state(a.state);
  Result r;
  if (!a.alts.empty()) {
    const pbc::CompositeTestResult c = pbc::composite_alternative_test(rho, load_operators(a.alts), a.n, a.delta);
    r.body = {{"type1", c.type1},
              {"type2", c.type2},
              {"exponents", c.exponents},
              {"exponent_bounds", c.exponent_bounds},
              {"exponents_hold", c.exponents_hold},
              {"miss_bound", c.miss_bound},
              {"miss_bound_holds", c.miss_bound_holds},
              {"chebyshev_eps", c.chebyshev_eps},
              {"chebyshev_bound", c.chebyshev_bound},
              {"chebyshev_bound_holds", c.chebyshev_bound_holds}};
    r.check_failed = !(c.exponents_hold && c.miss_bound_holds);
    return r;
  }
  const pbc::TypicalProjector p = a.b.empty() ? pbc::typical_projector(rho, a.n, a.delta)
                                              : pbc::relative_typical_projector(rho, load_operator(a.b), a.n, a.delta);
  r.body = {{"rate", p.rate()},
            {"variance", p.variance()},
            {"probability", p.probability()},
            {"log2_dimension", p.log2_dimension()},
            {"typical_types", p.typical_types().size()}};
  if (a.eps) r.body["chebyshev_n"] = p.chebyshev_threshold(*a.eps);
  return r;
}

}  // namespace

void register_state_commands(CLI::App& app, const ExperimentConfig&, Action& action) {
  auto* e = app.add_subcommand("entropy", "Entropies of a state; bipartite quantities for the split A|rest");
  auto ea = std::make_shared<EntropyArgs>();
  e->add_option("--state", ea->state, "Operator JSON")->required()->check(CLI::ExistingFile);
  e->add_option("--split", ea->split, "Subsystems forming A")->delimiter(',');
  e->callback([&action, ea] { action = [ea] { return entropy(*ea); }; });

  auto* d = app.add_subcommand("divergence", "Relative entropy, its variance and Renyi divergences");
  auto da = std::make_shared<DivergenceArgs>();
  d->add_option("--rho", da->rho)->required()->check(CLI::ExistingFile);
  d->add_option("--sigma", da->sigma)->required()->check(CLI::ExistingFile);
  d->add_option("--alpha", da->alphas, "Renyi orders")->delimiter(',');
  d->callback([&action, da] { action = [da] { return divergence(*da); }; });

  auto* h = app.add_subcommand("hyptest", "Hypothesis-testing relative entropy or mutual information");
  auto ha = std::make_shared<HypArgs>();
  h->add_option("--rho", ha->rho)->check(CLI::ExistingFile);
  h->add_option("--sigma", ha->sigma)->check(CLI::ExistingFile);
  h->add_option("--state", ha->state, "Bipartite state for the mutual-information variant")->check(CLI::ExistingFile);
  h->add_option("--split", ha->split)->delimiter(',');
  h->add_option("--eps", ha->eps)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  h->add_flag("--min-sigma", ha->min_sigma, "Minimize over the second marginal");
  h->callback([&action, ha] { action = [ha] { return hyptest(*ha); }; });

  auto* s = app.add_subcommand("stein", "Renyi sandwich around (1/n) D_H^eps for n copies");
  auto sa = std::make_shared<SteinArgs>();
  s->add_option("--rho", sa->rho)->required()->check(CLI::ExistingFile);
  s->add_option("--sigma", sa->sigma)->required()->check(CLI::ExistingFile);
  s->add_option("--eps", sa->eps)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  s->add_option("--n", sa->n)->check(CLI::PositiveNumber)->capture_default_str();
  s->add_option("--alpha-lo", sa->alpha_lo, "Default 1 - 1/sqrt(n)");
  s->add_option("--alpha-hi", sa->alpha_hi, "Default 1 + 1/sqrt(n)");
  s->callback([&action, sa] { action = [sa] { return stein(*sa); }; });

  auto* c = app.add_subcommand("chernoff-multi", "Symmetric-testing error rates against several alternatives");
  auto ca = std::make_shared<ChernoffArgs>();
  c->add_option("--a", ca->a, "Null hypothesis operator")->required()->check(CLI::ExistingFile);
  c->add_option("--alt", ca->alts, "Alternative operators")->required()->check(CLI::ExistingFile);
  c->add_option("--weights", ca->weights, "Prior weights K0, K1, ...")->delimiter(',');
  c->add_option("--n", ca->ns, "Block lengths")->required()->delimiter(',');
  c->callback([&action, ca] { action = [ca] { return chernoff_multi(*ca); }; });

  auto* t = app.add_subcommand("typicality", "Typical and relative typical projectors; composite tests with --alt");
  auto ta = std::make_shared<TypicalityArgs>();
  t->add_option("--state", ta->state)->required()->check(CLI::ExistingFile);
  t->add_option("--b", ta->b, "Reference operator for the relative projector")->check(CLI::ExistingFile);
  t->add_option("--alt", ta->alts, "Commuting alternatives for the composite test")->check(CLI::ExistingFile);
  t->add_option("--n", ta->n)->check(CLI::PositiveNumber)->capture_default_str();
  t->add_option("--delta", ta->delta)->check(CLI::PositiveNumber)->capture_default_str();
  t->add_option("--eps", ta->eps, "Report the Chebyshev block length for this miss probability");
  t->callback([&action, ta] { action = [ta] { return typicality(*ta); }; });
}

}  // namespace pbclab
