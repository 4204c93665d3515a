#include "incentives/io.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "incentives/error.hpp"

namespace incentives::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!ok.count(item.key())) throw InputError(std::string(what) + ": unknown key \"" + item.key() + "\"");
  }
}

const Json& require(const Json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw InputError(std::string(what) + ": missing key \"" + key + "\"");
  return j.at(key);
}

std::vector<std::string> labels_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": labels must be an array of strings");
  std::vector<std::string> out;
  for (const Json& s : j) {
    if (!s.is_string()) throw InputError(std::string(what) + ": labels must be strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

Json beliefs_json(const std::vector<Belief>& bs) {
  Json a = Json::array();
  for (const Belief& b : bs) a.push_back(to_json(b.probs()));
  return a;
}

}  // namespace

Json real(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double parse_real(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw InputError(std::string(what) + ": expected a number");
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(real(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(real(v(i)));
  return a;
}

Json to_json(const Belief& b) { return {{"probs", to_json(b.probs())}}; }

Json to_json(const Experiment& e) {
  return {{"states", e.states()}, {"realizations", e.realizations()}, {"kernel", to_json(e.kernel())}};
}

Json to_json(const PosteriorDistribution& d) {
  Json j = {{"posteriors", beliefs_json(d.support)}, {"weights", to_json(d.weights)}, {"labels", d.labels}};
  if (!d.dropped.empty()) j["dropped"] = d.dropped;
  return j;
}

Json to_json(const PosteriorCost& c) {
  Json j = {{"kind", c.kind()}, {"prior", to_json(c.prior().probs())}};
  if (c.kind() == "quadratic") j["scale"] = real(c.scale);
  if (c.kind() == "entropy" && std::abs(c.log_base - std::exp(1.0)) > 1e-15) j["log_base"] = real(c.log_base);
  return j;
}

Json to_json(const Contract& c) {
  return {{"realizations", c.realizations},
          {"reports", c.reports},
          {"payments", to_json(c.payments)},
          {"limited_liability", c.limited_liability}};
}

Json to_json(const GridSpec& g) {
  Json aug = Json::array();
  for (const Vector& v : g.augment) aug.push_back(to_json(v));
  return {{"resolution", g.resolution}, {"augment", aug}};
}

Json to_json(const ImplementabilityReport& r) {
  Json res = Json::array();
  for (double x : r.residuals) res.push_back(real(x));
  Json thr = Json::array();
  for (double x : r.thresholds) thr.push_back(real(x));
  Json j = {{"implementable", r.implementable},
            {"mode", to_string(r.mode)},
            {"rank", r.rank},
            {"full_row_rank", r.full_row_rank},
            {"residuals", res},
            {"thresholds", thr},
            {"lambda", r.lambda ? to_json(*r.lambda) : Json(nullptr)},
            {"eta", r.eta ? to_json(*r.eta) : Json(nullptr)}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

Json to_json(const CostReport& r) {
  Json binding = Json::array();
  for (const auto& [m, k] : r.binding) binding.push_back({m, k});
  return {{"implementable", r.implementable},
          {"kappa", real(r.kappa)},
          {"first_best", real(r.first_best)},
          {"agency_rent", real(r.agency_rent)},
          {"kappa_rowmin", real(r.kappa_rowmin)},
          {"kappa_lemma_a2", real(r.kappa_lemma_a2)},
          {"method", r.method},
          {"z", r.z.size() ? to_json(r.z) : Json(nullptr)},
          {"binding", binding},
          {"contract", r.contract ? to_json(*r.contract) : Json(nullptr)},
          {"implementability", to_json(r.implementability)}};
}

Json to_json(const OrderVerdict& v) {
  const OrderCertificate& c = v.certificate;
  Json cert = {{"kind", c.kind}};
  if (c.kind == "garbling" || c.kind == "cone") {
    cert["forward"] = c.forward ? to_json(*c.forward) : Json(nullptr);
    cert["backward"] = c.backward ? to_json(*c.backward) : Json(nullptr);
  } else if (c.kind == "rank") {
    cert["rank_e"] = c.rank_e;
    cert["rank_f"] = c.rank_f;
    cert["rank_joint"] = c.rank_joint;
  } else if (c.kind == "likelihood") {
    cert["e"] = {{"l1", real(c.l1_e)}, {"l2", real(c.l2_e)}, {"spread", real(c.spread_e)},
                 {"reciprocal_spread", real(c.reciprocal_spread_e)}};
    cert["f"] = {{"l1", real(c.l1_f)}, {"l2", real(c.l2_f)}, {"spread", real(c.spread_f)},
                 {"reciprocal_spread", real(c.reciprocal_spread_f)}};
  }
  return {{"relation", to_string(v.relation)}, {"strict", v.strict}, {"certificate", cert}};
}

Json to_json(const OracleResult& r) {
  return {{"optimal_value", real(r.optimal_value)},
          {"target_value", real(r.target_value)},
          {"gap", real(r.gap)},
          {"target_in_support", r.target_in_support},
          {"support", beliefs_json(r.support)},
          {"weights", to_json(r.weights)},
          {"reports", r.reports},
          {"grid", {{"resolution", r.resolution}, {"points", r.grid_points}}}};
}

Json to_json(const BinaryRentProfile& p) {
  return {{"l1", real(p.l1)},
          {"l2", real(p.l2)},
          {"swapped", p.swapped},
          {"spread", real(p.spread)},
          {"reciprocal_spread", real(p.reciprocal_spread)},
          {"du1", {{"r1", real(p.du1_r1)}, {"r2", real(p.du1_r2)}}},
          {"du2", {{"r1", real(p.du2_r1)}, {"r2", real(p.du2_r2)}}}};
}

Json to_json(const PseudoInverse& p) {
  return {{"rank", p.rank},
          {"cutoff", real(p.cutoff)},
          {"singular_values", to_json(p.singular_values)},
          {"pinv", to_json(p.pinv)}};
}

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + ": expected a nonempty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_real(j[i], what);
  return v;
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + ": expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw InputError(std::string(what) + ": rows must be nonempty arrays");
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError(std::string(what) + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_real(j[r][c], what);
    }
  }
  return m;
}

Belief belief_from_json(const Json& j) {
  if (j.is_array()) return Belief(vector_from_json(j, "belief"));
  check_keys(j, {"probs"}, "belief");
  return Belief(vector_from_json(require(j, "probs", "belief"), "belief"));
}

Experiment experiment_from_json(const Json& j) {
  check_keys(j, {"states", "realizations", "kernel"}, "experiment");
  Matrix k = matrix_from_json(require(j, "kernel", "experiment"), "experiment.kernel");
  if (!j.contains("states") && !j.contains("realizations")) return Experiment(std::move(k));
  std::vector<std::string> states, reals;
  if (j.contains("states")) {
    states = labels_from_json(j["states"], "experiment.states");
  } else {
    for (Eigen::Index i = 0; i < k.rows(); ++i) states.push_back("w" + std::to_string(i + 1));
  }
  if (j.contains("realizations")) {
    reals = labels_from_json(j["realizations"], "experiment.realizations");
  } else {
    for (Eigen::Index i = 0; i < k.cols(); ++i) reals.push_back("y" + std::to_string(i + 1));
  }
  return Experiment(std::move(k), std::move(states), std::move(reals));
}

PosteriorCost cost_from_json(const Json& j) {
  check_keys(j, {"kind", "prior", "scale", "log_base"}, "cost");
  const Json& kind = require(j, "kind", "cost");
  if (!kind.is_string()) throw InputError("cost: kind must be a string");
  const Belief prior = belief_from_json(require(j, "prior", "cost"));
  const std::string k = kind.get<std::string>();
  if (k == "entropy") {
    if (j.contains("scale")) throw InputError("cost: entropy takes no scale");
    return entropy_cost(prior, j.contains("log_base") ? parse_real(j["log_base"], "cost.log_base") : std::exp(1.0));
  }
  if (k == "quadratic") {
    if (j.contains("log_base")) throw InputError("cost: quadratic takes no log_base");
    return quadratic_cost(prior, j.contains("scale") ? parse_real(j["scale"], "cost.scale") : 1.0);
  }
  throw InputError("cost: unknown kind \"" + k + "\"");
}

PosteriorDistribution target_from_json(const Json& j, const Belief& prior) {
  check_keys(j, {"posteriors", "weights", "labels", "kernel", "realizations"}, "target");
  if (j.contains("kernel")) {
    if (j.contains("posteriors") || j.contains("weights") || j.contains("labels")) {
      throw InputError("target: give either a kernel or posteriors, not both");
    }
    Json e = {{"kernel", j["kernel"]}};
    if (j.contains("realizations")) e["realizations"] = j["realizations"];
    return posteriors(experiment_from_json(e), prior);
  }
  if (j.contains("realizations")) throw InputError("target: realizations only accompany a kernel");
  const Json& ps = require(j, "posteriors", "target");
  if (!ps.is_array() || ps.empty()) throw InputError("target: posteriors must be a nonempty array");
  std::vector<Belief> support;
  for (const Json& p : ps) support.push_back(belief_from_json(p));
  Vector w = j.contains("weights") ? vector_from_json(j["weights"], "target.weights") : bayes_weights(support, prior);
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = labels_from_json(j["labels"], "target.labels");
  return PosteriorDistribution(std::move(support), std::move(w), std::move(labels));
}

Contract contract_from_json(const Json& j) {
  check_keys(j, {"realizations", "reports", "payments", "limited_liability"}, "contract");
  Contract c;
  c.payments = matrix_from_json(require(j, "payments", "contract"), "contract.payments");
  require_finite(c.payments, "contract.payments");
  if (j.contains("limited_liability")) {
    if (!j["limited_liability"].is_boolean()) throw InputError("contract: limited_liability must be a boolean");
    c.limited_liability = j["limited_liability"].get<bool>();
  }
  if (j.contains("realizations")) c.realizations = labels_from_json(j["realizations"], "contract.realizations");
  if (j.contains("reports")) c.reports = labels_from_json(j["reports"], "contract.reports");
  if (!c.realizations.empty() && static_cast<Eigen::Index>(c.realizations.size()) != c.payments.rows()) {
    throw InputError("contract: realization labels do not match payment rows");
  }
  if (!c.reports.empty() && static_cast<Eigen::Index>(c.reports.size()) != c.payments.cols()) {
    throw InputError("contract: report labels do not match payment columns");
  }
  if (c.limited_liability && c.payments.minCoeff() < -1e-12) {
    throw InputError("contract: negative payment under limited liability");
  }
  return c;
}

GridSpec grid_from_json(const Json& j) {
  check_keys(j, {"resolution", "augment"}, "grid");
  GridSpec g;
  if (j.contains("resolution")) {
    if (!j["resolution"].is_number_integer()) throw InputError("grid: resolution must be an integer");
    g.resolution = j["resolution"].get<int>();
  }
  if (j.contains("augment")) {
    if (!j["augment"].is_array()) throw InputError("grid: augment must be an array of beliefs");
    for (const Json& a : j["augment"]) g.augment.push_back(belief_from_json(a).probs());
  }
  return g;
}

}  // namespace incentives::io
