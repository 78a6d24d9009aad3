#include "cli.hpp"

#include "ccmssc/branch_and_cut.hpp"
#include "ccmssc/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace ccmssc::cli {

namespace {

// Raised for inputs that parse but make no sense together.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int parse_args(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool& done) {
  std::vector<std::string> rev(args.rbegin(), args.rend());
  done = false;
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    done = true;
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    done = true;
    return kUsage;
  }
  return kOk;
}

}  // namespace

std::vector<int> parse_cards(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::stringstream ss(t);
  std::vector<int> out;
  std::string tok;
  while (ss >> tok) {
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw std::invalid_argument("cardinality \"" + tok + "\" is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no cardinalities given");
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact branch-and-cut for cardinality-constrained minimum sum-of-squares clustering", "ccmssc"};
  std::string data, cards_text, cards_file, relaxation = "auto", out_path;
  int balanced = 0;
  BncConfig cfg;
  double epsilon = -1.0;
  bool timing = false;
  app.add_option("--data", data, "CSV file, one point per row")->required();
  auto* g_cards = app.add_option("--cards", cards_text, "cluster sizes, e.g. 15,20,17,23");
  auto* g_file = app.add_option("--cards-file", cards_file, "file holding the cluster sizes");
  auto* g_bal = app.add_option("--balanced", balanced, "k equal clusters of size n/k");
  g_cards->excludes(g_file)->excludes(g_bal);
  g_file->excludes(g_bal);
  app.add_option("--relaxation", relaxation, "vl, ml or auto")->check(CLI::IsMember({"vl", "ml", "auto"}));
  app.add_option("--epsilon", epsilon, "target gap in percent (default 0.01 for n < 500, else 0.1)");
  app.add_option("--time-limit", cfg.time_limit, "seconds")->capture_default_str();
  app.add_option("--sdp-tol", cfg.sdp_tol, "SDP stopping tolerance")->capture_default_str();
  app.add_option("--max-cuts", cfg.max_cuts, "cuts separated per round")->capture_default_str();
  app.add_option("--cut-fraction", cfg.cut_fraction, "share of separated cuts added")->capture_default_str();
  app.add_option("--cut-tol", cfg.cut_tol, "violation threshold for separation")->capture_default_str();
  app.add_option("--workers", cfg.workers, "node worker threads")->capture_default_str();
  app.add_option("--seed", cfg.seed, "recorded in the report; the search is deterministic")->capture_default_str();
  app.add_flag("--root-only", cfg.root_only, "stop after the root node");
  app.add_flag("--heuristic-every-cp", cfg.heuristic_every_cp, "run the heuristic after every cutting-plane round");
  app.add_flag("--timing", timing, "include wall time in the report");
  app.add_option("--out", out_path, "report path (default: standard output)");

  bool done = false;
  const int rc = parse_args(app, args, out, err, done);
  if (done) return rc;

  try {
    if (cards_text.empty() && cards_file.empty() && balanced == 0)
      throw ConfigError("one of --cards, --cards-file or --balanced is required");
    if (cfg.time_limit <= 0 || cfg.sdp_tol <= 0 || cfg.cut_tol <= 0 || cfg.cut_fraction <= 0 || cfg.cut_fraction > 1 ||
        cfg.max_cuts < 0 || cfg.workers < 1 || (app.count("--epsilon") && epsilon <= 0))
      throw ConfigError("tolerances and limits must be positive, the cut fraction in (0, 1], workers >= 1");
    if (relaxation != "auto") cfg.relaxation = relaxation_from_string(relaxation);
    cfg.epsilon = epsilon;

    const Dataset ds = read_csv(data);
    std::vector<int> sizes;
    auto cards_from = [](const std::string& text) {
      try {
        return parse_cards(text);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    };
    if (!cards_text.empty()) {
      sizes = cards_from(cards_text);
    } else if (!cards_file.empty()) {
      sizes = cards_from(slurp(cards_file));
    } else {
      if (balanced < 2) throw ConfigError("--balanced needs k >= 2");
      if (ds.size() % balanced != 0) {
        err << "cardinality error: " << ds.size() << " points cannot be split into " << balanced << " equal clusters\n";
        return kCardinalityMismatch;
      }
      sizes = CardinalitySpec::balanced(ds.size(), balanced).sizes();
    }
    CardinalitySpec cards;
    try {
      cards = CardinalitySpec(sizes);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    long total = 0;
    for (int c : sizes) total += c;
    if (total != ds.size()) {
      err << "cardinality error: cluster sizes sum to " << total << " but " << data << " has " << ds.size() << " points\n";
      return kCardinalityMismatch;
    }

    Report rep;
    rep.data = data;
    rep.n = ds.size();
    rep.d = ds.dim();
    rep.cards = sizes;
    rep.config = cfg;
    rep.timing = timing;
    rep.result = solve_ccmssc(ds, cards, cfg);

    const std::string text = report_to_json(rep);
    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(out_path);
      if (!f) {
        err << "file error: cannot write " << out_path << "\n";
        return kFileNotFound;
      }
      f << text;
    }
    const auto& r = rep.result;
    err << std::setprecision(10) << "status " << to_string(r.status) << "  ub " << r.best_ub << "  lb " << r.best_lb
        << "  gap " << std::setprecision(4) << 100.0 * r.gap << "%  nodes " << r.nodes_processed << "  time "
        << std::setprecision(3) << r.wall_time << "s\n";
    return r.status == SolveStatus::TimeLimit ? kTimeLimit : kOk;
  } catch (const FileNotFound& e) {
    err << "file error: " << e.what() << "\n";
    return kFileNotFound;
  } catch (const MalformedData& e) {
    err << "data error: " << e.what() << "\n";
    return kMalformedData;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

int run_bench(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Root bounds of both relaxations against a manifest of expected values", "ccmssc-bench"};
  std::string manifest;
  std::vector<std::string> only;
  app.add_option("manifest", manifest, "JSON manifest")->required();
  app.add_option("--only", only, "run just these instance names");
  bool done = false;
  const int rc = parse_args(app, args, out, err, done);
  if (done) return rc;

  using json = nlohmann::json;
  json m;
  try {
    m = json::parse(slurp(manifest));
  } catch (const FileNotFound& e) {
    err << "file error: " << e.what() << "\n";
    return kFileNotFound;
  } catch (const json::exception& e) {
    err << "data error: manifest: " << e.what() << "\n";
    return kMalformedData;
  }
  const auto base = std::filesystem::path(manifest).parent_path();
  int failures = 0;
  out << std::left << std::setw(10) << "instance" << std::setw(6) << "rel" << std::setw(16) << "bound" << std::setw(16)
      << "expected" << std::setw(12) << "rel.err" << std::setw(14) << "method" << "check\n";
  for (const auto& inst : m.at("instances")) {
    const std::string name = inst.at("name").get<std::string>();
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    try {
      const Dataset ds = read_csv((base / inst.at("data").get<std::string>()).string());
      const CardinalitySpec cards(inst.at("cards").get<std::vector<int>>());
      std::map<std::string, double> got;
      for (const auto& [rel, exp] : inst.at("expect").items()) {
        sdp::Settings st;
        st.tol = exp.value("sdp_tol", 1e-5);
        st.max_iterations = exp.value("max_iterations", 50000);
        const RootBound rb = root_bound(ds, cards, relaxation_from_string(rel), st);
        const double want = exp.at("value").get<double>();
        const double tol = exp.at("rel_tol").get<double>();
        const double e = std::abs(rb.bound.value - want) / std::abs(want);
        const bool ok = e <= tol;
        failures += ok ? 0 : 1;
        got[rel] = rb.bound.value;
        out << std::setw(10) << name << std::setw(6) << rel << std::setw(16) << std::setprecision(8) << rb.bound.value
            << std::setw(16) << want << std::setw(12) << std::setprecision(3) << e << std::setw(14)
            << to_string(rb.bound.method) << (ok ? "pass" : "FAIL") << "\n";
      }
      if (inst.contains("vl_above_ml") && inst.at("vl_above_ml").get<bool>() && got.count("vl") && got.count("ml")) {
        const double slack = inst.value("order_slack", 0.0) * std::abs(got["ml"]);
        const bool ok = got["vl"] >= got["ml"] - slack;
        failures += ok ? 0 : 1;
        out << std::setw(10) << name << "vl >= ml" << std::string(56, ' ') << (ok ? "pass" : "FAIL") << "\n";
      }
    } catch (const std::exception& e) {
      ++failures;
      out << std::setw(10) << name << "error: " << e.what() << "\n";
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace ccmssc::cli
