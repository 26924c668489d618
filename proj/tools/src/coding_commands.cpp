#include <sstream>

#include "commands.hpp"
#include "inputs.hpp"
#include "pbc/io.hpp"
#include "pbc/mac.hpp"
#include "pbc/p2p.hpp"
#include "pbc/sweeps.hpp"

namespace pbclab {
namespace {

Json performance_json(const pbc::CodePerformance& p, double slack) {
  return {{"exact_error", p.exact_error},
          {"bound", p.bound},
          {"message_spread", p.message_spread},
          {"within_bound", p.exact_error <= p.bound + slack}};
}

struct P2PArgs {
  std::string spec;
  double rate = 1.0;
  int grid = 101;
  bool iid = false;
  double eps = 0.1;
  double eta = 0.05;
  int n = 100;
  int restarts = 4;
  int iterations = 200;
};

void add_p2p(CLI::App& p2p, const char* name, const char* help, const std::shared_ptr<P2PArgs>& args,
             Action& action, std::function<Result(const P2PArgs&)> body,
             const std::function<void(CLI::App&)>& extra = {}) {
  auto* sub = p2p.add_subcommand(name, help);
  sub->add_option("--spec", args->spec, "P2P spec JSON")->required()->check(CLI::ExistingFile);
  if (extra) extra(*sub);
  sub->callback([&action, args, body] { action = [args, body] { return body(*args); }; });
}

struct MacArgs {
  std::string spec;
  std::string state;
  std::string cq;
  int l = 2;
  int m = 2;
  long long budget = 1 << 16;
  long long enumeration_limit = 1'000'000;
  std::string family = "pgm";
  std::string region = "all";
  std::vector<double> rates;
  int grid = 101;
};

pbc::HermitianOperator mac_state(const MacArgs& a) {
  if (!a.state.empty()) return load_state(a.state).op();
  if (!a.spec.empty()) return pbc::mac_output(load_mac_spec(a.spec));
  throw CLI::ValidationError("mac", "give --state or --spec");
}

Json points_json(const std::vector<pbc::Point2>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(Json::array({p.x, p.y}));
  return out;
}

Result mac_region(const MacArgs& a, const ExperimentConfig& config) {
  const pbc::HermitianOperator omega = mac_state(a);
  std::vector<pbc::RateRegion> regions;
  if (a.region == "renyi2" || a.region == "all") regions.push_back(pbc::rate_region_renyi2(omega));
  if (a.region == "collision" || a.region == "all") regions.push_back(pbc::rate_region_collision(omega));
  if (a.region == "mi" || a.region == "all") regions.push_back(pbc::rate_region_mi(omega));
  Result r;
  Json list = Json::array();
  for (const auto& reg : regions) list.push_back(Json::parse(pbc::to_json(reg)));
  r.body["regions"] = std::move(list);
  if (!a.rates.empty()) {
    Json member = Json::object();
    for (const auto& reg : regions) member[reg.family] = pbc::region_membership(reg, a.rates, config.tol_region);
    r.body["member"] = std::move(member);
  }
  if (omega.subsystems() == 3) {
    const pbc::RegionVertices v = pbc::region_vertices_2d(pbc::rate_region_renyi2(omega),
                                                          pbc::rate_region_collision(omega));
    r.body["vertices"] = {{"renyi2", points_json(v.first)},
                          {"collision", points_json(v.second)},
                          {"hull", points_json(v.hull)},
                          {"unbounded", v.unbounded}};
    std::ostringstream csv;
    csv << "set,index,r1,r2\n";
    auto dump = [&](const char* name, const std::vector<pbc::Point2>& pts) {
      for (std::size_t i = 0; i < pts.size(); ++i)
        csv << name << ',' << i << ',' << pbc::format_double(pts[i].x) << ',' << pbc::format_double(pts[i].y) << '\n';
    };
    dump("renyi2", v.first);
    dump("collision", v.second);
    dump("hull", v.hull);
    r.csv = csv.str();
  }
  return r;
}

Result mac_derandomize(const MacArgs& a, const ExperimentConfig& config) {
  if (a.cq.empty()) throw CLI::ValidationError("--cq", "derandomize needs a cq-MAC");
  const pbc::CqMac mac = load_cq_mac(a.cq);
  pbc::DerandomizeOptions opt;
  opt.family = a.family == "helstrom" ? pbc::CqTestFamily::CompositeHelstrom : pbc::CqTestFamily::PrettyGood;
  opt.search_budget = a.budget;
  opt.enumeration_limit = a.enumeration_limit;
  opt.seed = config.seed;
  const pbc::DerandomizedCode code = pbc::derandomize_cq_mac(mac, a.l, a.m, opt);
  Result r;
  const bool ok = code.avg_error <= code.ensemble_average + 1e-9;
  r.body = {{"codebook_x", code.codebook_x},     {"codebook_y", code.codebook_y},
            {"avg_error", code.avg_error},       {"ensemble_average", code.ensemble_average},
            {"candidates", code.candidates},     {"enumerated", code.enumerated},
            {"within_average", ok}};
  Json decoder = Json::array();
  for (const auto& op : code.decoder) decoder.push_back(operator_json(op));
  r.body["decoder"] = std::move(decoder);
  r.check_failed = !ok;
  return r;
}

Result mac_identities(const MacArgs& a, const ExperimentConfig& config) {
  if (a.spec.empty()) throw CLI::ValidationError("--spec", "identities need a two-sender spec");
  const pbc::MacCodeSpec spec = load_mac_spec(a.spec);
  if (spec.resources.size() != 2) throw CLI::ValidationError("--spec", "identities need exactly two senders");
  const double r1 = a.rates.size() > 0 ? a.rates[0] : 0.0;
  const double r2 = a.rates.size() > 1 ? a.rates[1] : 0.0;
  const pbc::DivergenceIdentities t =
      pbc::mac_divergence_identities(spec.resources[0], spec.resources[1], spec.channel, r1, r2);
  Result r;
  Json rows = Json::array();
  for (const auto& row : t.rows)
    rows.push_back({{"label", row.label},
                    {"divergence", row.divergence},
                    {"information", row.information},
                    {"residual", row.residual}});
  r.body["rows"] = std::move(rows);
  r.body["max_residual"] = t.max_residual;
  r.body["holds"] = t.max_residual <= config.tol_residual;
  r.check_failed = !(t.max_residual <= config.tol_residual);
  return r;
}

}  // namespace

void register_p2p_commands(CLI::App& app, const ExperimentConfig& config, Action& action) {
  auto* p2p = app.add_subcommand("p2p", "Entanglement-assisted point-to-point position-based codes");
  p2p->require_subcommand(1);
  auto args = std::make_shared<P2PArgs>();
  const double* bound_slack = &config.tol_bound;

  add_p2p(*p2p, "simulate", "Exact square-root decoder error and one-shot bound", args, action,
          [bound_slack](const P2PArgs& a) {
            const pbc::CodePerformance p = pbc::simulate_p2p(load_p2p_input(a.spec).spec());
            Result r;
            r.body = performance_json(p, *bound_slack);
            r.check_failed = !r.body["within_bound"].get<bool>();
            return r;
          });
  add_p2p(*p2p, "bound", "One-shot error bound", args, action, [](const P2PArgs& a) {
    Result r;
    r.body["bound"] = pbc::one_shot_error_bound(load_p2p_input(a.spec).spec());
    return r;
  });
  add_p2p(
      *p2p, "exponent", "Error exponent lower bound", args, action,
      [](const P2PArgs& a) {
        const P2PInput in = load_p2p_input(a.spec);
        const pbc::P2PCodeSpec spec = in.spec();
        const pbc::ExponentResult e =
            pbc::error_exponent_lower(spec.resource, spec.channel, a.rate, pbc::uniform_grid(a.grid), a.iid);
        Result r;
        r.body = {{"value", e.value}, {"s", e.s}, {"unimodal", e.unimodal}};
        return r;
      },
      [args](CLI::App& sub) {
        sub.add_option("--rate", args->rate, "log2 M, or the rate with --iid")->capture_default_str();
        sub.add_option("--grid", args->grid, "Points in the s grid")->check(CLI::Range(2, 100000))->capture_default_str();
        sub.add_flag("--iid", args->iid, "Per-copy exponent without the one-shot offset");
      });
  add_p2p(
      *p2p, "capacity", "One-shot capacity lower bound", args, action,
      [](const P2PArgs& a) {
        const pbc::P2PCodeSpec spec = load_p2p_input(a.spec).spec();
        const pbc::CapacityLower c = pbc::one_shot_capacity_lower(spec.resource, spec.channel, a.eps, a.eta);
        Result r;
        r.body = {{"value", c.value}, {"information", c.information}, {"penalty", c.penalty}};
        return r;
      },
      [args](CLI::App& sub) {
        sub.add_option("--eps", args->eps)->check(CLI::Range(0.0, 1.0))->capture_default_str();
        sub.add_option("--eta", args->eta)->check(CLI::Range(0.0, 1.0))->capture_default_str();
      });
  add_p2p(
      *p2p, "second-order", "Second-order rate for n channel uses", args, action,
      [](const P2PArgs& a) {
        const pbc::P2PCodeSpec spec = load_p2p_input(a.spec).spec();
        Result r;
        r.body["rate"] = pbc::second_order_rate(spec.resource, spec.channel, a.n, a.eps);
        return r;
      },
      [args](CLI::App& sub) {
        sub.add_option("--n", args->n)->check(CLI::PositiveNumber)->capture_default_str();
        sub.add_option("--eps", args->eps)->check(CLI::Range(0.0, 1.0))->capture_default_str();
      });
  const std::uint64_t* seed = &config.seed;
  add_p2p(
      *p2p, "upper", "Heuristic search for the eps-mutual-information upper bound", args, action,
      [seed](const P2PArgs& a) {
        pbc::UpperSearchOptions opt;
        opt.restarts = a.restarts;
        opt.iterations = a.iterations;
        opt.seed = *seed;
        const pbc::UpperEstimate u = pbc::capacity_upper_eps_mi(load_p2p_input(a.spec).channel, a.eps, opt);
        Result r;
        r.body = {{"estimate", u.estimate},
                  {"worst", u.worst},
                  {"restart_values", u.restart_values},
                  {"maximally_entangled_value", u.maximally_entangled_value},
                  {"heuristic", u.heuristic}};
        return r;
      },
      [args](CLI::App& sub) {
        sub.add_option("--eps", args->eps)->check(CLI::Range(0.0, 1.0))->capture_default_str();
        sub.add_option("--restarts", args->restarts)->check(CLI::PositiveNumber)->capture_default_str();
        sub.add_option("--iterations", args->iterations)->check(CLI::PositiveNumber)->capture_default_str();
      });
}

void register_mac_commands(CLI::App& app, const ExperimentConfig& config, Action& action) {
  auto* mac = app.add_subcommand("mac", "Multiple-access position-based codes and rate regions");
  mac->require_subcommand(1);
  auto args = std::make_shared<MacArgs>();
  const ExperimentConfig* cfg = &config;
  auto add = [&](const char* name, const char* help, std::function<Result(const MacArgs&, const ExperimentConfig&)> body) {
    auto* sub = mac->add_subcommand(name, help);
    sub->callback([&action, args, cfg, body] { action = [args, cfg, body] { return body(*args, *cfg); }; });
    return sub;
  };

  auto* sim = add("simulate", "Exact simultaneous-decoder error and one-shot bound", [](const MacArgs& a, const ExperimentConfig& c) {
    const pbc::CodePerformance p = pbc::simulate_mac(load_mac_spec(a.spec));
    Result r;
    r.body = performance_json(p, c.tol_bound);
    r.check_failed = !r.body["within_bound"].get<bool>();
    return r;
  });
  sim->add_option("--spec", args->spec, "MAC spec JSON")->required()->check(CLI::ExistingFile);

  auto* bound = add("bound", "One-shot bound with its per-subset terms", [](const MacArgs& a, const ExperimentConfig&) {
    const pbc::MacCodeSpec spec = load_mac_spec(a.spec);
    const pbc::MacBoundTerms t = pbc::mac_bound_terms(spec);
    const int k = static_cast<int>(spec.resources.size());
    Result r;
    r.body["bound"] = t.bound;
    r.body["miss"] = t.miss;
    Json terms = Json::array();
    for (std::size_t i = 0; i < t.subsets.size(); ++i)
      terms.push_back({{"subset", subset_json(t.subsets[i], k)},
                       {"multiplicity", t.multiplicity[i]},
                       {"confusion", t.confusion[i]}});
    r.body["terms"] = std::move(terms);
    return r;
  });
  bound->add_option("--spec", args->spec, "MAC spec JSON")->required()->check(CLI::ExistingFile);

  auto* der = add("derandomize", "Best deterministic codebook for a cq-MAC", mac_derandomize);
  der->add_option("--cq", args->cq, "cq-MAC JSON")->required()->check(CLI::ExistingFile);
  der->add_option("--l", args->l, "Codewords for X")->check(CLI::PositiveNumber)->capture_default_str();
  der->add_option("--m", args->m, "Codewords for Y")->check(CLI::PositiveNumber)->capture_default_str();
  der->add_option("--budget", args->budget, "Sampled codebooks when enumeration is too large")->capture_default_str();
  der->add_option("--enumeration-limit", args->enumeration_limit)->capture_default_str();
  der->add_option("--family", args->family)->check(CLI::IsMember({"pgm", "helstrom"}))->capture_default_str();

  auto* reg = add("region", "Renyi-2, collision and mutual-information rate regions", mac_region);
  reg->add_option("--state", args->state, "State on S_1 ... S_K C")->check(CLI::ExistingFile);
  reg->add_option("--spec", args->spec, "MAC spec JSON; the state is the channel output")->check(CLI::ExistingFile);
  reg->add_option("--family", args->region)->check(CLI::IsMember({"renyi2", "collision", "mi", "all"}))->capture_default_str();
  reg->add_option("--rates", args->rates, "Report membership of this rate tuple")->delimiter(',');

  auto* exp = add("exponent", "Conditional error exponent", [](const MacArgs& a, const ExperimentConfig&) {
    const pbc::HermitianOperator omega = mac_state(a);
    const pbc::MacExponent e = pbc::mac_error_exponent(omega, a.rates, pbc::uniform_grid(a.grid));
    const int k = omega.subsystems() - 1;
    Result r;
    r.body["value"] = e.value;
    r.body["label"] = e.label;
    Json terms = Json::array();
    for (const auto& t : e.terms)
      terms.push_back({{"subset", subset_json(t.subset, k)}, {"value", t.value}, {"s", t.s}, {"unimodal", t.unimodal}});
    r.body["terms"] = std::move(terms);
    return r;
  });
  exp->add_option("--state", args->state, "State on S_1 ... S_K C")->check(CLI::ExistingFile);
  exp->add_option("--spec", args->spec, "MAC spec JSON")->check(CLI::ExistingFile);
  exp->add_option("--rates", args->rates, "One rate per sender")->required()->delimiter(',');
  exp->add_option("--grid", args->grid, "Points in the s grid")->check(CLI::Range(2, 100000))->capture_default_str();

  auto* ids = add("identities", "Divergence identities behind the mutual-information region", mac_identities);
  ids->add_option("--spec", args->spec, "Two-sender MAC spec JSON")->required()->check(CLI::ExistingFile);
  ids->add_option("--rates", args->rates, "R1,R2")->delimiter(',');
}

void register_check_commands(CLI::App& app, const ExperimentConfig& config, Action& action) {
  auto* check = app.add_subcommand("check", "Seeded sweeps of the operator and divergence inequalities");
  check->require_subcommand(1);
  auto trials = std::make_shared<int>(1000);
  const ExperimentConfig* cfg = &config;
  for (const char* name : {"gentle", "close", "hn", "spectral", "prop1", "cmw"}) {
    auto* sub = check->add_subcommand(name, std::string("Sweep the ") + name + " inequality");
    sub->add_option("--trials", *trials, "Seeded instances")->check(CLI::PositiveNumber)->capture_default_str();
    const std::string kind_name = name;
    sub->callback([&action, trials, cfg, kind_name] {
      action = [trials, cfg, kind_name] {
        const pbc::SweepKind kind = pbc::parse_sweep_kind(kind_name);
        const double slack = cfg->tol_check.value_or(pbc::default_sweep_slack(kind));
        const pbc::SweepReport s = pbc::run_inequality_sweep(kind, *trials, cfg->seed, slack);
        Result r;
        r.body = {{"check", kind_name},   {"seed", cfg->seed},       {"instances", s.instances},
                  {"cases", s.cases},     {"slack", slack},          {"violations", s.violations},
                  {"worst_margin", s.worst_margin}, {"worst_instance", s.worst_instance}};
        r.check_failed = s.violations > 0;
        return r;
      };
    });
  }
}

}  // namespace pbclab
