// Command-line front end: bounds, quantum values, witnesses, compatibility
// checks, triple scans and see-saw searches.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qrac/io.hpp"
#include "qrac/qrac.hpp"

namespace {

using qrac::io::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitGuard = 3;

struct Options {
  std::optional<int> n;
  std::string outcomes;
  std::optional<int> dim;
  std::string measurements;
  std::string objective = "avg";
  std::string constraint = "free";
  std::size_t grid = 41;
  std::size_t restarts = 10;
  std::optional<std::uint64_t> seed;
  bool csv = false;
  bool table = false;
  bool strict = false;
};

std::vector<int> parse_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw qrac::Error(qrac::ErrorKind::kParse, "bad outcome list entry '" + item + "'");
    }
  }
  if (out.empty()) throw qrac::Error(qrac::ErrorKind::kParse, "--outcomes is empty");
  return out;
}

/// Scenario from --outcomes (a single value is repeated --n times), --n and --dim.
qrac::Scenario scenario_from(const Options& o) {
  if (o.outcomes.empty()) throw qrac::Error(qrac::ErrorKind::kParse, "--outcomes is required");
  if (!o.dim) throw qrac::Error(qrac::ErrorKind::kParse, "--dim is required");
  auto profile = parse_list(o.outcomes);
  if (o.n) {
    if (profile.size() == 1 && *o.n > 1) profile.assign(static_cast<std::size_t>(*o.n), profile.front());
    if (static_cast<int>(profile.size()) != *o.n)
      throw qrac::Error(qrac::ErrorKind::kShapeMismatch, "--n does not match the length of --outcomes");
  }
  return qrac::Scenario(profile, *o.dim);
}

/// Scenario implied by a measurement file; --n and --dim, when given, must agree.
qrac::Scenario scenario_from(const Options& o, const qrac::MeasurementSet& ms) {
  if (o.n && static_cast<std::size_t>(*o.n) != ms.size())
    throw qrac::Error(qrac::ErrorKind::kShapeMismatch, "--n does not match the measurement file");
  if (o.dim && static_cast<std::size_t>(*o.dim) != ms.dim())
    throw qrac::Error(qrac::ErrorKind::kShapeMismatch, "--dim does not match the measurement file");
  auto profile = o.outcomes.empty() ? ms.outcome_profile() : parse_list(o.outcomes);
  if (profile.size() == 1) profile.assign(ms.size(), profile.front());
  if (profile != ms.outcome_profile())
    throw qrac::Error(qrac::ErrorKind::kShapeMismatch, "--outcomes does not match the measurement file");
  return qrac::Scenario(ms.outcome_profile(), static_cast<int>(ms.dim()));
}

qrac::Objective objective_from(const std::string& s) {
  if (s == "avg") return qrac::Objective::kAverage;
  if (s == "worst") return qrac::Objective::kWorst;
  throw qrac::Error(qrac::ErrorKind::kParse, "--objective must be avg or worst");
}

qrac::Constraint constraint_from(const std::string& s) {
  if (s == "free") return qrac::Constraint::kFree;
  if (s == "compatible") return qrac::Constraint::kCompatible;
  throw qrac::Error(qrac::ErrorKind::kParse, "--constraint must be free or compatible");
}

std::uint64_t require_seed(const Options& o) {
  if (!o.seed) throw qrac::Error(qrac::ErrorKind::kParse, "--seed is required for randomized commands");
  return *o.seed;
}

void print_table(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [k, v] : rows) std::cout << k << std::string(width - k.size() + 2, ' ') << v << '\n';
}

std::string num(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

int cmd_bounds(const Options& o) {
  const auto sc = scenario_from(o);
  const auto objective = objective_from(o.objective);
  json j;
  j["scenario"] = qrac::io::to_json(sc);
  const auto bound = qrac::classical_bound(sc);
  j["S_classical"] = qrac::io::to_json(bound.value);
  j["classical_method"] = to_string(bound.method);
  j["S_upper"] = qrac::upper_bound_sc(sc);
  if (sc.equal_outcomes())
    j["S_upper_equal_outcomes"] = qrac::upper_bound_equal_outcomes(sc.n(), sc.min_outcomes(), sc.dim());
  if ((sc.n() == 2 || sc.n() == 3) && sc.equal_outcomes() && sc.dim() <= sc.min_outcomes())
    j["closed_form"] = qrac::io::to_json(qrac::closed_form_sc(sc.n(), sc.min_outcomes(), sc.dim()));
  std::optional<qrac::MixedStrategyValue> lp;
  if (objective == qrac::Objective::kWorst) {
    lp = qrac::lp_worst_shared(sc);
    j["W_shared_randomness"] = qrac::io::to_json(lp->value);
    j["W_mixture_size"] = lp->weights.size();
  }
  if (o.table) {
    std::vector<std::pair<std::string, std::string>> rows{
        {"S_classical", qrac::to_string(bound.value) + " (" + std::string(to_string(bound.method)) + ")"},
        {"S_upper", num(j["S_upper"].get<double>())}};
    if (lp) rows.emplace_back("W_shared_randomness", qrac::to_string(lp->value));
    print_table(rows);
  } else {
    std::cout << j.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_qvalue(const Options& o) {
  const auto ms = qrac::io::read_measurements(o.measurements);
  const auto sc = scenario_from(o, ms);
  const auto q = qrac::quantum_value(ms, sc);
  json j;
  j["scenario"] = qrac::io::to_json(sc);
  j["S_quantum"] = q.value;
  j["chi_norms"] = q.norms;
  if (o.table) print_table({{"S_quantum", num(q.value)}});
  else std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_witness(const Options& o) {
  const auto ms = qrac::io::read_measurements(o.measurements);
  const auto sc = scenario_from(o, ms);
  const auto r = qrac::assemble_witness_report(ms, sc);
  if (o.table) {
    print_table({{"S_quantum", num(r.s_quantum)},
                 {"S_classical", qrac::to_string(r.s_classical.value)},
                 {"S_upper", num(r.s_upper)},
                 {"margin", num(r.margin)},
                 {"verdict", std::string(to_string(r.verdict))}});
  } else {
    std::cout << qrac::io::to_json(r).dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_compat(const Options& o) {
  const auto ms = qrac::io::read_measurements(o.measurements);
  auto verdict = qrac::feasibility_check(ms);
  if (verdict.status != qrac::CompatibilityStatus::kCompatible) {
    // The solver cannot prove infeasibility; try the witness when a bound exists.
    try {
      const auto sc = scenario_from(o, ms);
      verdict = qrac::upgrade_verdict(std::move(verdict), qrac::assemble_witness_report(ms, sc));
    } catch (const qrac::Error& e) {
      if (e.kind() != qrac::ErrorKind::kBoundUnavailable && e.kind() != qrac::ErrorKind::kInvalidArgument) throw;
    }
  }
  if (o.table) {
    print_table({{"status", std::string(to_string(verdict.status))},
                 {"residual", num(verdict.residual, 12)},
                 {"iterations", std::to_string(verdict.iterations)}});
  } else {
    std::cout << qrac::io::to_json(verdict).dump(2) << '\n';
  }
  if (o.strict && verdict.status == qrac::CompatibilityStatus::kIndeterminate) return kExitGuard;
  return kExitOk;
}

int cmd_scan(const Options& o) {
  const auto records = qrac::scan_and_classify(o.grid);
  if (o.csv) {
    qrac::io::write_scan_csv(std::cout, records);
    return kExitOk;
  }
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& r : records) ++counts[static_cast<int>(r.classification)];
  if (o.table) {
    print_table({{"points", std::to_string(records.size())},
                 {"COMPATIBLE_BOUNDARY", std::to_string(counts[0])},
                 {"EXCEPTIONAL", std::to_string(counts[1])},
                 {"WITNESSED", std::to_string(counts[2])},
                 {"NO_WITNESS", std::to_string(counts[3])}});
    return kExitOk;
  }
  json j;
  j["grid"] = o.grid;
  j["points"] = records.size();
  j["counts"] = json{{"COMPATIBLE_BOUNDARY", counts[0]},
                     {"EXCEPTIONAL", counts[1]},
                     {"WITNESSED", counts[2]},
                     {"NO_WITNESS", counts[3]}};
  json non_witnessed = json::array();
  for (const auto& r : records)
    if (r.classification != qrac::TripleClass::kWitnessed)
      non_witnessed.push_back(json{{"alpha", r.params.alpha},
                                   {"beta", r.params.beta},
                                   {"gamma", r.params.gamma},
                                   {"sign", r.params.sign},
                                   {"S", r.value},
                                   {"classification", to_string(r.classification)}});
  j["not_witnessed"] = std::move(non_witnessed);
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_seesaw(const Options& o) {
  const auto seed = require_seed(o);
  const auto sc = scenario_from(o);
  const auto objective = objective_from(o.objective);
  const auto constraint = constraint_from(o.constraint);
  const auto r = qrac::seesaw(sc, objective, constraint, o.restarts, seed);
  if (o.table) {
    print_table({{"label", std::string(qrac::SeesawResult::kLabel)},
                 {"best_value", num(r.best_value)},
                 {"best_seed", std::to_string(r.best_seed)},
                 {"restarts", std::to_string(r.restarts.size())}});
  } else {
    std::cout << qrac::io::to_json(r, objective, constraint).dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_demo(const Options& o) {
  const auto seed = require_seed(o);
  std::vector<std::pair<std::string, std::string>> rows;
  const auto s322 = qrac::Scenario::uniform(3, 2, 2);
  rows.emplace_back("S_c(3,2,2) brute force", qrac::to_string(qrac::brute_force_sc(s322).value));
  rows.emplace_back("S_c(4,2,2) brute force",
                    qrac::to_string(qrac::brute_force_sc(qrac::Scenario::uniform(4, 2, 2)).value));
  rows.emplace_back("S_c(3,3,3) exact formula", qrac::to_string(qrac::exact_sc(qrac::Scenario::uniform(3, 3, 3))));
  rows.emplace_back("upper bound (3,2,2)", num(qrac::upper_bound_sc(s322)));

  const auto report = qrac::assemble_witness_report(qrac::pauli_triple(), s322);
  rows.emplace_back("S_quantum Pauli triple", num(report.s_quantum));
  rows.emplace_back("witness margin", num(report.margin));
  rows.emplace_back("witness verdict", std::string(to_string(report.verdict)));

  for (double nu : {1.0, std::sqrt(3.0) / 2.0}) {
    const auto [states, ms] = qrac::cube_construction(nu);
    rows.emplace_back("cube worst case, nu=" + num(nu, 6),
                      num(qrac::score(qrac::probability_table(states, ms, s322), qrac::Objective::kWorst)));
  }
  rows.emplace_back("W shared randomness (3,2,2)", qrac::to_string(qrac::lp_worst_shared(s322).value));

  const auto xi = qrac::min_sum_xi();
  rows.emplace_back("min sum xi", num(xi.minimum));
  rows.emplace_back("min sum xi minimizers", std::to_string(xi.argmins.size()));

  const auto pair = qrac::MeasurementSet::from_matrices(
      {{qrac::pauli::bloch_projector(0, 0, 1), qrac::pauli::bloch_projector(0, 0, 1, -1)},
       {qrac::pauli::bloch_projector(1, 0, 0), qrac::pauli::bloch_projector(1, 0, 0, -1)}});
  auto verdict = qrac::feasibility_check(pair);
  verdict = qrac::upgrade_verdict(std::move(verdict),
                                  qrac::assemble_witness_report(pair, qrac::Scenario::uniform(2, 2, 2)));
  rows.emplace_back("sigma_z/sigma_x compatibility", std::string(to_string(verdict.status)));

  const auto ss = qrac::seesaw(s322, qrac::Objective::kWorst, qrac::Constraint::kCompatible, o.restarts, seed);
  rows.emplace_back("compatible worst case (" + std::string(qrac::SeesawResult::kLabel) + ")", num(ss.best_value));
  print_table(rows);
  return kExitOk;
}

int exit_code_for(const qrac::Error& e) {
  switch (e.kind()) {
    case qrac::ErrorKind::kTooLarge:
    case qrac::ErrorKind::kBoundUnavailable: return kExitGuard;
    default: return kExitInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incompatibility witnesses from random access codes"};
  app.require_subcommand(1);
  Options o;

  auto add_scenario = [&](CLI::App* c) {
    c->add_option("--n", o.n, "number of measurements");
    c->add_option("--outcomes", o.outcomes, "comma-separated outcome counts");
    c->add_option("--dim", o.dim, "message dimension");
  };
  auto add_format = [&](CLI::App* c) { c->add_flag("--table", o.table, "print a plain table"); };

  auto* bounds = app.add_subcommand("bounds", "classical bounds for a scenario");
  add_scenario(bounds);
  add_format(bounds);
  bounds->add_option("--objective", o.objective, "avg or worst");

  auto* qvalue = app.add_subcommand("qvalue", "quantum value of a measurement set");
  auto* witness = app.add_subcommand("witness", "witness report for a measurement set");
  auto* compat = app.add_subcommand("compat", "parent-POVM feasibility");
  for (auto* c : {qvalue, witness, compat}) {
    add_scenario(c);
    add_format(c);
    c->add_option("--measurements", o.measurements, "measurement JSON file")->required();
  }
  compat->add_flag("--strict", o.strict, "exit 3 when the result is INDETERMINATE");

  auto* scan = app.add_subcommand("scan-triples", "classify qubit triples on a grid");
  scan->add_option("--grid", o.grid, "points per axis (>= 21)");
  scan->add_flag("--csv", o.csv, "emit CSV records");
  add_format(scan);

  auto* ss = app.add_subcommand("seesaw", "see-saw search over strategies");
  add_scenario(ss);
  add_format(ss);
  ss->add_option("--objective", o.objective, "avg or worst");
  ss->add_option("--constraint", o.constraint, "free or compatible");
  ss->add_option("--restarts", o.restarts, "number of restarts");
  ss->add_option("--seed", o.seed, "base seed (required)");

  auto* demo = app.add_subcommand("demo", "reproduce the reference values");
  demo->add_option("--seed", o.seed, "base seed (required)");
  demo->add_option("--restarts", o.restarts, "see-saw restarts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*bounds) return cmd_bounds(o);
    if (*qvalue) return cmd_qvalue(o);
    if (*witness) return cmd_witness(o);
    if (*compat) return cmd_compat(o);
    if (*scan) return cmd_scan(o);
    if (*ss) return cmd_seesaw(o);
    if (*demo) return cmd_demo(o);
  } catch (const qrac::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
