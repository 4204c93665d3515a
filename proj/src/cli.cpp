#include "incentives/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "incentives/error.hpp"
#include "incentives/orders.hpp"

namespace incentives::cli {

namespace {

using io::Json;

struct Settings {
  Tolerances tol;
  int grid = 0;
  std::string format = "json";
  std::string output;
  bool strict = false;
};

Json read_input(const std::string& path, std::istream& in) {
  try {
    if (path == "-") return Json::parse(in);
    std::ifstream f(path);
    if (!f) throw InputError("cannot open input file " + path);
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InputError("input: expected a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw InputError("input: unknown key \"" + item.key() + "\"");
  }
}

const Json& need(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("input: missing key \"") + key + "\"");
  return j.at(key);
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

struct Table {
  std::vector<std::pair<std::string, std::string>> rows;
  void add(std::string k, std::string v) { rows.emplace_back(std::move(k), std::move(v)); }
  void add_matrix(const std::string& title, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::string line;
      for (Eigen::Index j = 0; j < m.cols(); ++j) line += (j ? "  " : "") + num(m(i, j));
      add(i == 0 ? title : "", line);
    }
  }
  std::string str() const {
    std::size_t w = 0;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    std::ostringstream s;
    for (const auto& r : rows) s << std::left << std::setw(static_cast<int>(w + 2)) << r.first << r.second << "\n";
    return s.str();
  }
};

void implementability_rows(Table& t, const ImplementabilityReport& r) {
  t.add("implementable", r.implementable ? "yes" : "no");
  t.add("mode", to_string(r.mode));
  t.add("rank", std::to_string(r.rank) + (r.full_row_rank ? " (full row rank)" : ""));
  for (std::size_t k = 0; k + 1 < r.residuals.size(); ++k) {
    t.add("residual " + std::to_string(k + 1), sci(r.residuals[k]) + "  (threshold " + sci(r.thresholds[k]) + ")");
  }
  if (!r.reason.empty()) t.add("reason", r.reason);
}

void verdict_rows(Table& t, const std::string& name, const OrderVerdict& v) {
  t.add(name, to_string(v.relation) + (v.strict ? " (strict)" : ""));
  const OrderCertificate& c = v.certificate;
  if (c.kind == "rank") {
    t.add("", "rank e " + std::to_string(c.rank_e) + ", rank f " + std::to_string(c.rank_f) + ", joint " +
                  std::to_string(c.rank_joint));
  } else if (c.kind == "likelihood") {
    t.add("", "l2-l1: " + num(c.spread_e) + " vs " + num(c.spread_f) + ";  1/l1-1/l2: " +
                  num(c.reciprocal_spread_e) + " vs " + num(c.reciprocal_spread_f));
  }
}

struct Problem {
  Experiment experiment;
  std::optional<PosteriorCost> cost;
  std::optional<PosteriorDistribution> target;
  std::optional<Contract> contract;
  GridSpec grid;
};

Problem load_problem(const Json& j, bool want_contract) {
  check_keys(j, {"experiment", "cost", "target", "contract", "grid"});
  Problem p;
  p.experiment = io::experiment_from_json(need(j, "experiment"));
  p.cost = io::cost_from_json(need(j, "cost"));
  if (j.contains("target")) p.target = io::target_from_json(j["target"], p.cost->prior());
  if (want_contract) {
    p.contract = io::contract_from_json(need(j, "contract"));
    if (p.contract->realizations.empty()) p.contract->realizations = p.experiment.realizations();
    if (p.contract->reports.empty()) {
      for (Eigen::Index k = 0; k < p.contract->payments.cols(); ++k) p.contract->reports.push_back("x" + std::to_string(k + 1));
    }
  }
  if (j.contains("grid")) p.grid = io::grid_from_json(j["grid"]);
  return p;
}

GridSpec effective_grid(GridSpec g, const Settings& s) {
  if (s.grid > 0) g.resolution = s.grid;
  return g;
}

struct Output {
  Json json;
  Table table;
  int code = kOk;
};

Output cmd_implementable(const Json& in, const Settings& s) {
  Problem p = load_problem(in, false);
  if (!p.target) throw InputError("input: missing key \"target\"");
  const ImplementabilityReport r = check_implementable(p.experiment, *p.target, *p.cost, s.tol);
  Output o;
  o.json = io::to_json(r);
  implementability_rows(o.table, r);
  if (!r.implementable && s.strict) o.code = kNegative;
  return o;
}

Output cmd_contract(const Json& in, const Settings& s, bool no_ll, bool verify) {
  Problem p = load_problem(in, false);
  if (!p.target) throw InputError("input: missing key \"target\"");
  Output o;
  std::optional<Contract> contract;
  if (no_ll) {
    const ImplementabilityReport rep = check_implementable(p.experiment, *p.target, *p.cost, s.tol);
    if (!rep.implementable) {
      o.json = {{"implementable", false}, {"expected_payment", "inf"}, {"implementability", io::to_json(rep)}};
      o.table.add("implementable", "no");
      o.table.add("expected payment", "inf");
      o.code = kNegative;
      return o;
    }
    contract = first_best_contract(p.experiment, *p.target, *p.cost, s.tol);
    const PaymentBreakdown pay = expected_payment_breakdown(p.experiment, *p.target, p.cost->prior(), *contract);
    const double fb = total_cost(*p.cost, *p.target);
    o.json = {{"implementable", true},
              {"limited_liability", false},
              {"expected_payment", io::real(pay.joint)},
              {"expected_payment_kernel_form", io::real(pay.kernel)},
              {"first_best", io::real(fb)},
              {"agency_rent", io::real(pay.joint - fb)},
              {"contract", io::to_json(*contract)}};
    o.table.add("implementable", "yes");
    o.table.add("limited liability", "off");
    o.table.add("expected payment", num(pay.joint));
    o.table.add("first best", num(fb));
    o.table.add_matrix("payments", contract->payments);
  } else {
    const CostReport r = optimal_contract(p.experiment, *p.target, *p.cost, s.tol);
    o.json = io::to_json(r);
    o.table.add("implementable", r.implementable ? "yes" : "no");
    o.table.add("kappa", num(r.kappa));
    o.table.add("first best", num(r.first_best));
    o.table.add("agency rent", num(r.agency_rent));
    if (!r.implementable) {
      o.code = kNegative;
      return o;
    }
    o.table.add("method", r.method);
    o.table.add_matrix("payments", r.contract->payments);
    contract = r.contract;
  }
  if (verify) {
    const OracleResult orc = agent_best_response(p.experiment, *contract, *p.cost, p.cost->prior(),
                                                 effective_grid(p.grid, s), &*p.target);
    Json oj = io::to_json(orc);
    oj["tolerance"] = kOracleTolerance;
    oj["verified"] = orc.gap <= kOracleTolerance;
    o.json["oracle"] = oj;
    o.table.add("oracle gap", sci(orc.gap) + (orc.gap <= kOracleTolerance ? "  (verified)" : "  (FAILED)"));
  }
  return o;
}

Output cmd_compare(const Json& in, const std::string& order, const Settings& s) {
  check_keys(in, {"e", "f"});
  const Experiment e = io::experiment_from_json(need(in, "e"));
  const Experiment f = io::experiment_from_json(need(in, "f"));
  LpOptions lp;
  lp.feasibility_tol = s.tol.lp;
  OrderVerdict v;
  if (order == "blackwell") {
    v = blackwell_compare(e, f, lp);
  } else if (order == "cone") {
    v = cone_compare(e, f, lp);
  } else if (order == "col") {
    v = colspace_compare(e, f, s.tol.rank);
  } else {
    v = binary_k_compare(e, f);
  }
  Output o;
  o.json = io::to_json(v);
  o.json["order"] = order;
  verdict_rows(o.table, order, v);
  return o;
}

Output cmd_oracle(const Json& in, const Settings& s) {
  Problem p = load_problem(in, true);
  const OracleResult r = agent_best_response(p.experiment, *p.contract, *p.cost, p.cost->prior(),
                                             effective_grid(p.grid, s), p.target ? &*p.target : nullptr);
  Output o;
  o.json = io::to_json(r);
  o.table.add("optimal value", num(r.optimal_value));
  if (p.target) {
    o.table.add("target value", num(r.target_value));
    o.table.add("gap", sci(r.gap));
  }
  for (std::size_t i = 0; i < r.support.size(); ++i) {
    std::string b;
    for (Eigen::Index n = 0; n < r.support[i].size(); ++n) b += (n ? ", " : "") + num(r.support[i](n));
    o.table.add(i == 0 ? "support" : "", "(" + b + ")  weight " + num(r.weights(static_cast<Eigen::Index>(i))) +
                                           "  report " + std::to_string(r.reports[i] + 1));
  }
  return o;
}

Experiment example1_e1() { return Experiment((Matrix(2, 2) << 0.7, 0.3, 0.3, 0.7).finished()); }
Experiment example1_e2() { return Experiment((Matrix(2, 2) << 0.5, 0.5, 0.2, 0.8).finished()); }

Json demo_example1() {
  const Experiment e1 = example1_e1();
  const Experiment e2 = example1_e2();
  Json rents = {{"E1", io::to_json(binary_rent_profile(e1))}, {"E2", io::to_json(binary_rent_profile(e2))}};
  Json orders = {{"blackwell", io::to_json(blackwell_compare(e1, e2))},
                 {"cone", io::to_json(cone_compare(e1, e2))},
                 {"col", io::to_json(colspace_compare(e1, e2))},
                 {"k2", io::to_json(binary_k_compare(e1, e2))}};
  return {{"demo", "example1"},
          {"experiments", {{"E1", io::to_json(e1)}, {"E2", io::to_json(e2)}}},
          {"rents", rents},
          {"orders", orders},
          {"k_dominance_sufficient", k_dominance_sufficient(e1, e2)}};
}

Json demo_appendix_e() {
  const Belief prior = Belief::uniform(3);
  const PosteriorCost cost = entropy_cost(prior);
  const Experiment e1((Matrix(3, 2) << 3.0 / 8, 5.0 / 8, 3.0 / 8, 5.0 / 8, 3.0 / 4, 1.0 / 4).finished());
  const Experiment e2((Matrix(3, 2) << 3.0 / 4, 1.0 / 4, 1.0 / 4, 3.0 / 4, 1.0 / 2, 1.0 / 2).finished());
  const std::vector<Belief> on_line{Belief{0.25, 0.25, 0.5}, Belief{5.0 / 12, 5.0 / 12, 1.0 / 6}};
  const std::vector<Belief> off_line{Belief{0.5, 1.0 / 6, 1.0 / 3}, Belief{1.0 / 6, 0.5, 1.0 / 3}};
  const PosteriorDistribution on(on_line, bayes_weights(on_line, prior), {"x1", "x2"});
  const PosteriorDistribution off(off_line, bayes_weights(off_line, prior), {"x1", "x2"});
  Json rows = Json::array();
  for (const auto& [ename, e] : {std::pair{"E1", e1}, std::pair{"E2", e2}}) {
    for (const auto& [tname, t] : {std::pair{"on-line", on}, std::pair{"off-line", off}}) {
      const ImplementabilityReport r = check_implementable(e, t, cost);
      rows.push_back({{"experiment", ename}, {"target", tname}, {"report", io::to_json(r)}});
    }
  }
  return {{"demo", "appendixE"},
          {"experiments", {{"E1", io::to_json(e1)}, {"E2", io::to_json(e2)}}},
          {"targets", {{"on-line", io::to_json(on)}, {"off-line", io::to_json(off)}}},
          {"cost", io::to_json(cost)},
          {"verdicts", rows}};
}

Output cmd_demo(const std::string& name) {
  Output o;
  o.json = demo_report(name);
  if (name == "example1") {
    for (const char* e : {"E1", "E2"}) {
      const Json& r = o.json["rents"][e];
      auto f = [](const Json& v) { return num(v.is_number() ? v.get<double>() : io::parse_real(v, "demo")); };
      o.table.add(std::string(e) + " du1 (r1, r2)", "(" + f(r["du1"]["r1"]) + ", " + f(r["du1"]["r2"]) + ")");
      o.table.add(std::string(e) + " du2 (r1, r2)", "(" + f(r["du2"]["r1"]) + ", " + f(r["du2"]["r2"]) + ")");
    }
    for (const char* ord : {"blackwell", "cone", "col", "k2"}) {
      o.table.add(std::string("E1 vs E2, ") + ord, o.json["orders"][ord]["relation"].get<std::string>());
    }
    o.table.add("cone test sufficient", o.json["k_dominance_sufficient"].get<bool>() ? "yes" : "no");
  } else {
    for (const Json& row : o.json["verdicts"]) {
      const Json& r = row["report"];
      std::string res = "residual " + sci(r["residuals"][0].get<double>());
      o.table.add(row["experiment"].get<std::string>() + ", " + row["target"].get<std::string>(),
                  std::string(r["implementable"].get<bool>() ? "implementable    " : "not implementable") + "  " + res);
    }
  }
  return o;
}

}  // namespace

io::Json demo_report(const std::string& name) {
  if (name == "example1") return demo_example1();
  if (name == "appendixE") return demo_appendix_e();
  throw InputError("unknown demo \"" + name + "\" (expected example1 or appendixE)");
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incentivizing information acquisition under noisy monitoring"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--tol-rank", s.tol.rank, "Relative rank cutoff factor")->envname("INCENTIVES_TOL_RANK");
  app.add_option("--tol-lp", s.tol.lp, "LP feasibility tolerance")->envname("INCENTIVES_TOL_LP");
  app.add_option("--tol-residual", s.tol.residual, "Column-space residual tolerance")
      ->envname("INCENTIVES_TOL_RESIDUAL");
  app.add_option("--grid", s.grid, "Oracle grid resolution (points per simplex edge)")->envname("INCENTIVES_GRID");
  app.add_option("--format", s.format, "Report format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--output,-o", s.output, "Write the report to this file instead of stdout");
  app.add_flag("--strict", s.strict, "Exit 3 on a negative implementability verdict");

  std::string input = "-";
  auto* imp = app.add_subcommand("implementable", "Decide whether a target can be implemented");
  imp->add_option("input", input, "Problem JSON file, - for stdin");

  bool no_ll = false, verify = false;
  auto* con = app.add_subcommand("contract", "Cost-minimizing contract and indirect cost");
  con->add_option("input", input, "Problem JSON file, - for stdin");
  con->add_flag("--no-ll", no_ll, "Drop limited liability (first-best benchmark)");
  con->add_flag("--verify", verify, "Check the contract with the agent-side oracle");

  std::string order;
  auto* cmp = app.add_subcommand("compare", "Compare two contractible experiments");
  cmp->add_option("input", input, "JSON file with experiments e and f, - for stdin");
  cmp->add_option("--order", order, "Information order")
      ->required()
      ->check(CLI::IsMember({"blackwell", "col", "cone", "k2"}));

  auto* orc = app.add_subcommand("oracle", "Agent best response to a given contract");
  orc->add_option("input", input, "Problem JSON file with a contract, - for stdin");

  std::string demo;
  bool demo_json = false;
  auto* dem = app.add_subcommand("demo", "Reproduce a worked example");
  dem->add_option("name", demo, "example1 or appendixE")->required();
  dem->add_flag("--json", demo_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    s.tol.validate();
    if (s.grid < 0) throw InputError("--grid must be positive");
    Output o;
    if (*imp) {
      o = cmd_implementable(read_input(input, in), s);
    } else if (*con) {
      o = cmd_contract(read_input(input, in), s, no_ll, verify);
    } else if (*cmp) {
      o = cmd_compare(read_input(input, in), order, s);
    } else if (*orc) {
      o = cmd_oracle(read_input(input, in), s);
    } else {
      o = cmd_demo(demo);
      const bool explicit_format = app.get_option("--format")->count() > 0;
      if (demo_json) {
        s.format = "json";
      } else if (!explicit_format) {
        s.format = "table";
      }
    }
    const std::string text = s.format == "json" ? o.json.dump(2) + "\n" : o.table.str();
    if (s.output.empty()) {
      out << text;
    } else {
      std::ofstream f(s.output);
      if (!f) throw InputError("cannot open output file " + s.output);
      f << text;
    }
    return o.code;
  } catch (const NotImplementableError& e) {
    err << "error: " << e.what() << "\n";
    return kNegative;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace incentives::cli
