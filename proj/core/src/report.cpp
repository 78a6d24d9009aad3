#include "ccmssc/report.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace ccmssc {

namespace {

using json = nlohmann::ordered_json;

// JSON has no infinities; they travel as strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_num(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw MalformedData("expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

json config_json(const BncConfig& c) {
  json j;
  j["relaxation"] = c.relaxation ? to_string(*c.relaxation) : "auto";
  j["epsilon"] = num(c.epsilon);
  j["time_limit"] = num(c.time_limit);
  j["sdp_tol"] = c.sdp_tol;
  j["sdp_tol_min"] = c.sdp_tol_min;
  j["sdp_max_iterations"] = c.sdp_max_iterations;
  j["max_cuts"] = c.max_cuts;
  j["cut_fraction"] = c.cut_fraction;
  j["cut_tol"] = c.cut_tol;
  j["cp_tol"] = c.cp_tol;
  j["max_cp_iterations"] = c.max_cp_iterations;
  j["lp_time_limit"] = num(c.lp_time_limit);
  j["workers"] = c.workers;
  j["seed"] = c.seed;
  j["root_only"] = c.root_only;
  j["heuristic_every_cp"] = c.heuristic_every_cp;
  j["leaf_size"] = c.leaf_size;
  return j;
}

BncConfig config_from(const json& j) {
  BncConfig c;
  const auto rel = j.at("relaxation").get<std::string>();
  if (rel != "auto") c.relaxation = relaxation_from_string(rel);
  c.epsilon = get_num(j.at("epsilon"));
  c.time_limit = get_num(j.at("time_limit"));
  c.sdp_tol = j.at("sdp_tol").get<double>();
  c.sdp_tol_min = j.at("sdp_tol_min").get<double>();
  c.sdp_max_iterations = j.at("sdp_max_iterations").get<int>();
  c.max_cuts = j.at("max_cuts").get<int>();
  c.cut_fraction = j.at("cut_fraction").get<double>();
  c.cut_tol = j.at("cut_tol").get<double>();
  c.cp_tol = j.at("cp_tol").get<double>();
  c.max_cp_iterations = j.at("max_cp_iterations").get<int>();
  c.lp_time_limit = get_num(j.at("lp_time_limit"));
  c.workers = j.at("workers").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.root_only = j.at("root_only").get<bool>();
  c.heuristic_every_cp = j.at("heuristic_every_cp").get<bool>();
  c.leaf_size = j.at("leaf_size").get<int>();
  return c;
}

bool same_config(const BncConfig& a, const BncConfig& b) { return config_json(a) == config_json(b); }

}  // namespace

std::string report_to_json(const Report& r) {
  json j;
  j["schema"] = kReportSchema;
  j["input"] = {{"data", r.data}, {"n", r.n}, {"d", r.d}, {"cards", r.cards}};
  j["config"] = config_json(r.config);
  const SolveReport& s = r.result;
  json res;
  res["status"] = to_string(s.status);
  res["relaxation"] = s.relaxation;
  res["epsilon"] = num(s.epsilon);
  res["seed"] = s.seed;
  res["best_lb"] = num(s.best_lb);
  res["best_ub"] = num(s.best_ub);
  res["gap"] = num(s.gap);
  res["nodes_processed"] = s.nodes_processed;
  res["cp_iterations_total"] = s.cp_iterations_total;
  res["cuts_added_total"] = s.cuts_added_total;
  if (r.timing) res["wall_time"] = num(s.wall_time);
  if (s.incumbent) {
    res["incumbent"] = {{"objective", num(s.incumbent->objective)},
                        {"node_id", s.incumbent->node_id},
                        {"k", s.incumbent->assignment.k()},
                        {"labels", s.incumbent->assignment.labels()}};
  } else {
    res["incumbent"] = nullptr;
  }
  j["result"] = res;
  json trace = json::array();
  for (const auto& t : s.trace) {
    trace.push_back({{"id", t.id},
                     {"parent", t.parent},
                     {"depth", t.depth},
                     {"super_points", t.super_points},
                     {"gap0", num(t.gap0)},
                     {"cp_iterations", t.cp_iterations},
                     {"gap_r", num(t.gap_r)},
                     {"lb", num(t.lb)},
                     {"ub", num(t.ub)},
                     {"bound_method", t.bound_method},
                     {"outcome", t.outcome}});
  }
  j["trace"] = trace;
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema").get<std::string>() != kReportSchema) throw MalformedData("unknown report schema");
    Report r;
    const auto& in = j.at("input");
    r.data = in.at("data").get<std::string>();
    r.n = in.at("n").get<int>();
    r.d = in.at("d").get<int>();
    r.cards = in.at("cards").get<std::vector<int>>();
    r.config = config_from(j.at("config"));
    const auto& res = j.at("result");
    SolveReport& s = r.result;
    s.status = solve_status_from_string(res.at("status").get<std::string>());
    s.relaxation = res.at("relaxation").get<std::string>();
    s.epsilon = get_num(res.at("epsilon"));
    s.seed = res.at("seed").get<std::uint64_t>();
    s.best_lb = get_num(res.at("best_lb"));
    s.best_ub = get_num(res.at("best_ub"));
    s.gap = get_num(res.at("gap"));
    s.nodes_processed = res.at("nodes_processed").get<int>();
    s.cp_iterations_total = res.at("cp_iterations_total").get<int>();
    s.cuts_added_total = res.at("cuts_added_total").get<int>();
    r.timing = res.contains("wall_time");
    if (r.timing) s.wall_time = get_num(res.at("wall_time"));
    const auto& inc = res.at("incumbent");
    if (!inc.is_null()) {
      Incumbent x;
      x.objective = get_num(inc.at("objective"));
      x.node_id = inc.at("node_id").get<int>();
      x.assignment = AssignmentMatrix(inc.at("labels").get<std::vector<int>>(), inc.at("k").get<int>());
      s.incumbent = x;
    }
    for (const auto& t : j.at("trace")) {
      NodeTrace n;
      n.id = t.at("id").get<int>();
      n.parent = t.at("parent").get<int>();
      n.depth = t.at("depth").get<int>();
      n.super_points = t.at("super_points").get<int>();
      n.gap0 = get_num(t.at("gap0"));
      n.cp_iterations = t.at("cp_iterations").get<int>();
      n.gap_r = get_num(t.at("gap_r"));
      n.lb = get_num(t.at("lb"));
      n.ub = get_num(t.at("ub"));
      n.bound_method = t.at("bound_method").get<std::string>();
      n.outcome = t.at("outcome").get<std::string>();
      s.trace.push_back(n);
    }
    return r;
  } catch (const json::exception& e) {
    throw MalformedData(std::string("malformed report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw MalformedData(std::string("malformed report: ") + e.what());
  }
}

bool operator==(const NodeTrace& a, const NodeTrace& b) {
  return a.id == b.id && a.parent == b.parent && a.depth == b.depth && a.super_points == b.super_points &&
         same(a.gap0, b.gap0) && a.cp_iterations == b.cp_iterations && same(a.gap_r, b.gap_r) && same(a.lb, b.lb) &&
         same(a.ub, b.ub) && a.bound_method == b.bound_method && a.outcome == b.outcome;
}

bool operator==(const SolveReport& a, const SolveReport& b) {
  const bool inc = a.incumbent.has_value() == b.incumbent.has_value() &&
                   (!a.incumbent || (same(a.incumbent->objective, b.incumbent->objective) &&
                                     a.incumbent->node_id == b.incumbent->node_id &&
                                     a.incumbent->assignment.k() == b.incumbent->assignment.k() &&
                                     a.incumbent->assignment.labels() == b.incumbent->assignment.labels()));
  return inc && same(a.best_lb, b.best_lb) && same(a.best_ub, b.best_ub) && same(a.gap, b.gap) &&
         a.nodes_processed == b.nodes_processed && a.cp_iterations_total == b.cp_iterations_total &&
         a.cuts_added_total == b.cuts_added_total && same(a.wall_time, b.wall_time) && a.status == b.status &&
         a.relaxation == b.relaxation && same(a.epsilon, b.epsilon) && a.seed == b.seed && a.trace == b.trace;
}

bool operator==(const Report& a, const Report& b) {
  // Without timing the wall time is not part of the document.
  SolveReport ra = a.result, rb = b.result;
  if (!a.timing) ra.wall_time = 0.0;
  if (!b.timing) rb.wall_time = 0.0;
  return a.data == b.data && a.n == b.n && a.d == b.d && a.cards == b.cards && same_config(a.config, b.config) &&
         a.timing == b.timing && ra == rb;
}

}  // namespace ccmssc
