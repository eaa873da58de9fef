// Command-line surface: estimate | exact | check | roots | count-integer-points.
//
// Exit codes:
//   0  success (estimate/count: certified by the per-event admissibility check)
//   1  input error (bad file, malformed JSON, bad predicate, bad flags)
//   2  conditions violated (estimate/count/check still print their report)
//   3  resource budget exceeded
//   4  construction, numeric, or domain failure (e.g. an event of probability one)

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "probint/instance_io.hpp"
#include "probint/interpolate.hpp"
#include "probint/jointprob.hpp"
#include "probint/model.hpp"
#include "probint/oracle.hpp"
#include "probint/rational.hpp"

namespace {

using namespace probint;

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const char* guarantee_name(interpolate::Guarantee g) {
  return g == interpolate::Guarantee::CertifiedByAssumption
             ? "certified-by-assumption"
             : "conditions-violated";
}

nlohmann::ordered_json plan_json(const interpolate::InterpolationPlan& plan) {
  nlohmann::ordered_json p;
  p["delta"] = plan.delta;
  p["alpha"] = plan.alpha;
  p["q"] = plan.q;
  p["rho"] = plan.rho;
  p["K"] = plan.K;
  p["tail_bound"] = plan.tail_bound;
  p["validation_samples"] = plan.validation_samples;
  return p;
}

nlohmann::ordered_json conditions_json(const model::SmallnessReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const model::SmallnessRow& row : report.rows) {
    nlohmann::ordered_json r;
    r["event"] = row.event;
    r["probability"] = to_fraction_string(row.probability);
    r["threshold"] = to_fraction_string(row.threshold);
    r["pass"] = row.passes;
    rows.push_back(std::move(r));
  }
  return rows;
}

void print_conditions_text(std::ostream& os,
                           const model::SmallnessReport& report) {
  os << "conditions:\n";
  os << "  event        P(A_i)                threshold        pass\n";
  for (const model::SmallnessRow& row : report.rows) {
    std::ostringstream line;
    line << "  " << std::left << std::setw(12) << row.event << ' '
         << std::setw(21) << to_fraction_string(row.probability) << ' '
         << std::setw(16) << to_fraction_string(row.threshold) << ' '
         << (row.passes ? "yes" : "NO");
    os << line.str() << "\n";
  }
  os << "conditions_overall = " << (report.overall ? "pass" : "fail") << "\n";
}

struct CommonFlags {
  double epsilon = 1e-4;
  std::string format = "text";
  std::uint64_t budget = 0;  // 0: library default
  std::uint64_t seed = 12345;
  std::string precision = "auto";
};

interpolate::EstimateOptions make_options(const CommonFlags& flags) {
  if (!(flags.epsilon > 0.0 && flags.epsilon < 1.0))
    throw InputError("--epsilon must lie strictly between 0 and 1");
  interpolate::EstimateOptions opts;
  opts.epsilon = flags.epsilon;
  if (flags.budget != 0) {
    opts.budget.max_tuples_per_component = flags.budget;
    opts.budget.max_subsets = flags.budget;
  }
  if (flags.precision == "double")
    opts.precision = interpolate::Precision::Double;
  else if (flags.precision == "extended")
    opts.precision = interpolate::Precision::Extended;
  return opts;
}

int report_estimate(const interpolate::Estimate& est, const CommonFlags& flags) {
  if (flags.format == "json") {
    nlohmann::ordered_json j;
    j["value"] = est.value;
    j["log_value"] = est.log_value;
    j["epsilon"] = est.epsilon;
    j["K_used"] = est.K_used;
    j["guarantee"] = guarantee_name(est.guarantee);
    j["extended_precision"] = est.extended_precision;
    j["seed"] = flags.seed;
    j["conditions"] = conditions_json(est.smallness);
    j["plan"] = plan_json(est.plan);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "value = " << fmt_double(est.value) << "\n"
              << "log_value = " << fmt_double(est.log_value) << "\n"
              << "epsilon = " << fmt_double(est.epsilon) << "\n"
              << "K_used = " << est.K_used << "\n"
              << "guarantee = " << guarantee_name(est.guarantee) << "\n"
              << "precision = " << (est.extended_precision ? "extended" : "double")
              << "\n"
              << "seed = " << flags.seed << "\n";
    print_conditions_text(std::cout, est.smallness);
    std::cout << "plan: delta=" << fmt_double(est.plan.delta)
              << " alpha=" << fmt_double(est.plan.alpha) << " q=" << est.plan.q
              << " rho=" << fmt_double(est.plan.rho) << " K=" << est.plan.K
              << " tail_bound=" << fmt_double(est.plan.tail_bound)
              << " validation_samples=" << est.plan.validation_samples << "\n";
  }
  return est.guarantee == interpolate::Guarantee::CertifiedByAssumption ? 0 : 2;
}

int cmd_estimate(const std::string& path, const CommonFlags& flags) {
  const interpolate::EstimateOptions opts = make_options(flags);
  const model::Instance inst = io::load_instance_file(path);
  jointprob::MemoCache cache;
  interpolate::EstimateOptions with_cache = opts;
  with_cache.cache = &cache;
  const interpolate::Estimate est =
      interpolate::estimate_log_intersection(inst.space, inst.events, with_cache);
  return report_estimate(est, flags);
}

int cmd_exact(const std::string& path, const CommonFlags& flags) {
  jointprob::Budget budget;
  if (flags.budget != 0) {
    budget.max_tuples_per_component = flags.budget;
    budget.max_subsets = flags.budget;
  }
  const model::Instance inst = io::load_instance_file(path);
  const Rational p =
      oracle::exact_intersection_probability(inst.space, inst.events, budget);
  if (flags.format == "json") {
    nlohmann::ordered_json j;
    j["exact"] = to_fraction_string(p);
    j["decimal"] = to_double(p);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "exact = " << to_fraction_string(p) << "\n"
              << "decimal = " << fmt_double(to_double(p)) << "\n";
  }
  return 0;
}

int cmd_check(const std::string& path, const CommonFlags& flags) {
  const model::Instance inst = io::load_instance_file(path);
  const model::DependencyGraph graph =
      model::build_dependency_graph(inst.space, inst.events);
  const model::SmallnessReport small =
      model::check_smallness(inst.space, inst.events, graph);
  const model::LllReport lll = model::check_lll(inst.space, inst.events, graph);

  if (flags.format == "json") {
    nlohmann::ordered_json j;
    j["Delta"] = graph.max_degree;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < inst.events.size(); ++i) {
      nlohmann::ordered_json r;
      r["event"] = small.rows[i].event;
      r["probability"] = to_fraction_string(small.rows[i].probability);
      r["r"] = graph.support_sizes[i];
      r["degree"] = graph.degrees[i];
      r["mu"] = graph.mu[i];
      r["threshold"] = to_fraction_string(small.rows[i].threshold);
      r["pass"] = small.rows[i].passes;
      rows.push_back(std::move(r));
    }
    j["events"] = std::move(rows);
    j["overall"] = small.overall;
    nlohmann::ordered_json l;
    l["pass"] = lll.passes;
    l["s"] = nlohmann::ordered_json::array();
    for (const Rational& s : lll.s) l["s"].push_back(to_fraction_string(s));
    l["lower_bound"] = to_fraction_string(lll.lower_bound);
    l["lower_bound_decimal"] = to_double(lll.lower_bound);
    j["lll"] = std::move(l);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "Delta = " << graph.max_degree << "\n";
    std::cout << "event        P(A_i)                r   Delta_i mu  threshold        pass\n";
    for (std::size_t i = 0; i < inst.events.size(); ++i) {
      std::ostringstream line;
      line << std::left << std::setw(12) << small.rows[i].event << ' '
           << std::setw(21) << to_fraction_string(small.rows[i].probability)
           << ' ' << std::setw(3) << graph.support_sizes[i] << ' '
           << std::setw(7) << graph.degrees[i] << ' ' << std::setw(3)
           << graph.mu[i] << ' ' << std::setw(16)
           << to_fraction_string(small.rows[i].threshold) << ' '
           << (small.rows[i].passes ? "yes" : "NO");
      std::cout << line.str() << "\n";
    }
    std::cout << "overall = " << (small.overall ? "pass" : "fail") << "\n";
    std::cout << "lll_pass = " << (lll.passes ? "yes" : "no") << "\n";
    std::cout << "lll_lower_bound = " << to_fraction_string(lll.lower_bound)
              << " (" << fmt_double(to_double(lll.lower_bound)) << ")\n";
  }
  return small.overall ? 0 : 2;
}

int cmd_roots(const std::string& path, const CommonFlags& flags) {
  jointprob::Budget budget;
  if (flags.budget != 0) {
    budget.max_tuples_per_component = flags.budget;
    budget.max_subsets = flags.budget;
  }
  const model::Instance inst = io::load_instance_file(path);
  const model::DependencyGraph graph =
      model::build_dependency_graph(inst.space, inst.events);
  jointprob::MemoCache cache;
  const std::vector<Rational> coeffs = oracle::full_p_polynomial(
      inst.space, inst.events, graph, budget, &cache);
  const double delta = 1.0 / (6.0 * graph.max_degree);
  const oracle::RootReport report = oracle::root_localize(coeffs, delta);
  std::cout << report.to_json_string();
  return 0;
}

int cmd_count(const std::string& path, long long cube_side, int dim,
              const CommonFlags& flags) {
  if (cube_side < 1) throw InputError("--cube-side must be >= 1");
  if (dim < 1) throw InputError("--dim must be >= 1");
  const interpolate::EstimateOptions base = make_options(flags);

  std::ifstream in(path);
  if (!in) throw InputError("cannot open constraints file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();

  const model::ProductSpace cube = io::uniform_cube(dim, cube_side);
  const std::vector<model::Event> events =
      io::parse_constraint_lines(buf.str(), cube);

  jointprob::MemoCache cache;
  interpolate::EstimateOptions opts = base;
  opts.cache = &cache;
  const interpolate::Estimate est =
      interpolate::estimate_log_intersection(cube, events, opts);

  Integer cube_points = 1;
  for (int j = 0; j < dim; ++j) cube_points *= Integer(static_cast<long>(cube_side) + 1);
  const double estimated = to_double(Rational(cube_points)) * est.value;

  bool have_exact = false;
  Integer exact_count = 0;
  if (mpz_cmp_ui(cube_points.get_mpz_t(),
                 opts.budget.max_tuples_per_component) <= 0) {
    const Rational p = oracle::exact_intersection_probability(
        cube, events, opts.budget);
    const Rational total = Rational(cube_points) * p;  // an integer by construction
    exact_count = total.get_num() / total.get_den();
    have_exact = true;
  }

  if (flags.format == "json") {
    nlohmann::ordered_json j;
    j["estimated_count"] = estimated;
    j["value"] = est.value;
    j["log_value"] = est.log_value;
    j["epsilon"] = est.epsilon;
    j["K_used"] = est.K_used;
    j["guarantee"] = guarantee_name(est.guarantee);
    j["cube_points"] = cube_points.get_str();
    if (have_exact)
      j["exact_count"] = exact_count.get_str();
    else
      j["exact_count"] = nullptr;
    j["conditions"] = conditions_json(est.smallness);
    j["plan"] = plan_json(est.plan);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "cube_points = " << cube_points.get_str() << "\n"
              << "value = " << fmt_double(est.value) << "\n"
              << "estimated_count = " << fmt_double(estimated) << "\n"
              << "epsilon = " << fmt_double(est.epsilon) << "\n"
              << "K_used = " << est.K_used << "\n"
              << "guarantee = " << guarantee_name(est.guarantee) << "\n";
    if (have_exact)
      std::cout << "exact_count = " << exact_count.get_str() << "\n";
    print_conditions_text(std::cout, est.smallness);
  }
  return est.guarantee == interpolate::Guarantee::CertifiedByAssumption ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimates the probability that none of a set of partially "
               "dependent events occurs over a finite product space."};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string instance_path;
  std::string constraints_path;
  long long cube_side = 1;
  int dim = 1;

  auto add_common = [&](CLI::App* sub, bool with_precision) {
    sub->add_option("--epsilon", flags.epsilon,
                    "Accuracy target, strictly between 0 and 1");
    sub->add_option("--format", flags.format, "Report format")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--budget", flags.budget,
                    "Enumeration budget (tuples per component and subsets)");
    sub->add_option("--seed", flags.seed, "Seed echoed into reports");
    if (with_precision)
      sub->add_option("--precision", flags.precision,
                      "Series arithmetic precision")
          ->check(CLI::IsMember({"auto", "double", "extended"}));
  };

  CLI::App* est = app.add_subcommand(
      "estimate", "Certified estimate of P(no event occurs)");
  est->add_option("instance", instance_path, "Instance JSON file")->required();
  add_common(est, true);

  CLI::App* exact = app.add_subcommand(
      "exact", "Exact P(no event occurs) by direct enumeration");
  exact->add_option("instance", instance_path, "Instance JSON file")->required();
  add_common(exact, false);

  CLI::App* check = app.add_subcommand(
      "check", "Per-event admissibility and LLL comparison report");
  check->add_option("instance", instance_path, "Instance JSON file")->required();
  add_common(check, false);

  CLI::App* roots = app.add_subcommand(
      "roots", "Roots of the full-degree polynomial p and their distance to [0,1]");
  roots->add_option("instance", instance_path, "Instance JSON file")->required();
  add_common(roots, false);

  CLI::App* count = app.add_subcommand(
      "count-integer-points",
      "Estimate how many cube points satisfy every constraint");
  count->add_option("constraints", constraints_path,
                    "Constraint predicates, one per line")->required();
  count->add_option("--cube-side", cube_side, "Coordinates range over 0..c")
      ->required();
  count->add_option("--dim", dim, "Number of coordinates")->required();
  add_common(count, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (est->parsed()) return cmd_estimate(instance_path, flags);
    if (exact->parsed()) return cmd_exact(instance_path, flags);
    if (check->parsed()) return cmd_check(instance_path, flags);
    if (roots->parsed()) return cmd_roots(instance_path, flags);
    if (count->parsed()) return cmd_count(constraints_path, cube_side, dim, flags);
  } catch (const probint::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const probint::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const probint::ConstructionError& e) {
    std::cerr << "construction error: " << e.what() << "\n";
    return 4;
  } catch (const probint::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const probint::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 1;
}
