// Command-line front end. Every computation runs through the shared library's
// C interface (olab_exec); this translation unit only handles flags, config
// loading, flag-to-config overrides, and result rendering.
#include <olab.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::json;

struct Family {
  std::string name;
  std::string help;
  std::vector<std::string> variants;  // empty: the subcommand is one operation
  std::string default_variant;        // may be empty
};

const std::vector<Family>& families() {
  static const std::vector<Family> fams = {
      {"value", "Exact minimax value of a game", {}, ""},
      {"theta-value", "Minimax probability that final regret exceeds theta", {}, ""},
      {"gamma-value", "Minimax value with a transformed leaf score", {}, ""},
      {"rad",
       "Sequential Rademacher complexity (exact, on a tree, Monte Carlo, or search)",
       {"exact", "tree", "mc", "search"},
       ""},
      {"certificate",
       "Value vs. twice the sequential complexity",
       {"linear", "grid"},
       "linear"},
      {"bounds",
       "Closed-form bound calculators",
       {"finite-class", "smoothness", "dudley", "combinatorial"},
       ""},
      {"dims", "Shattering dimensions", {"sdim", "fat"}, ""},
      {"cover", "Covering numbers and the combinatorial cover check",
       {"number", "max-zero", "sauer"},
       ""},
      {"game", "Play a game with configured policies", {"run", "simulate"}, ""},
      {"blackwell", "Approachability: one-shot condition and projection runs",
       {"one-shot", "run"},
       ""},
      {"calibrate", "Calibrated forecasting runs and transcript scoring",
       {"run", "doubling", "regret"},
       ""},
      {"lower",
       "Lower-bound witnesses and checks",
       {"equalizer", "tree-sup", "supervised", "linear", "walsh-paley", "blackwell"},
       ""},
      {"concentration",
       "Martingale tail bounds and Monte Carlo dominance checks",
       {"bound", "threshold", "mc-tail", "mds-sup"},
       ""},
      {"fuzz",
       "Property batteries",
       {"triplex", "finite-class", "rational", "markov", "sauer", "tail", "concavity",
        "adaptive"},
       ""},
      {"report", "Validate a game config and describe it", {}, ""},
  };
  return fams;
}

std::string kind_for(const Family& fam, const std::string& variant) {
  if (fam.variants.empty()) return fam.name;
  if (fam.name == "certificate" && variant == "linear") return "certificate";
  return fam.name + "." + variant;
}

bool kind_in_family(const Family& fam, const std::string& kind) {
  if (kind == kind_for(fam, fam.default_variant)) return true;
  for (const auto& v : fam.variants)
    if (kind == kind_for(fam, v)) return true;
  return fam.variants.empty() && kind == fam.name;
}

[[noreturn]] void usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(1);
}

std::string read_config_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) usage_error("cannot open config file \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- rendering -----------------------------------------------------------------

std::string render_double(double v) {
  char buf[64];
  const double a = std::abs(v);
  if (v == 0.0 || (a >= 1e-4 && a < 1e15) || std::isnan(v))
    std::snprintf(buf, sizeof buf, "%.12f", v);
  else
    std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string render_scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return render_double(v.get<double>());
  if (v.is_number()) return v.dump();
  return v.dump();
}

bool is_object_rows(const Json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& e : v)
    if (!e.is_object()) return false;
  return true;
}

void render_rows_table(std::ostream& os, const std::string& indent, const Json& rows) {
  std::vector<std::string> cols;
  for (const auto& item : rows[0].items()) cols.push_back(item.key());
  std::vector<std::vector<std::string>> cells;
  cells.emplace_back(cols);
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (const auto& c : cols) {
      const auto it = row.find(c);
      line.push_back(it == row.end() ? "" : render_scalar(*it));
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(cols.size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  for (const auto& line : cells) {
    os << indent;
    for (std::size_t i = 0; i < line.size(); ++i) {
      os << line[i];
      if (i + 1 < line.size()) os << std::string(width[i] - line[i].size() + 2, ' ');
    }
    os << "\n";
  }
}

std::string render_table(const Json& result) {
  std::ostringstream os;
  if (result.contains("kind")) os << "kind: " << result["kind"].get<std::string>() << "\n";
  for (const auto& item : result.items()) {
    const std::string& key = item.key();
    if (key == "schema" || key == "kind") continue;
    const Json& v = item.value();
    if (is_object_rows(v)) {
      os << key << ":\n";
      render_rows_table(os, "  ", v);
    } else if (v.is_array() || v.is_object()) {
      os << key << ": " << v.dump() << "\n";
    } else {
      os << key << ": " << render_scalar(v) << "\n";
    }
  }
  return os.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_csv_scalar(const Json& v) {
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return csv_escape(v.get<std::string>());
  return csv_escape(render_scalar(v));
}

// One table per result: the first array-of-objects field, or key,value rows.
std::string render_csv(const Json& result) {
  std::ostringstream os;
  for (const auto& item : result.items()) {
    if (!is_object_rows(item.value())) continue;
    const Json& rows = item.value();
    std::vector<std::string> cols;
    for (const auto& c : rows[0].items()) cols.push_back(c.key());
    for (std::size_t i = 0; i < cols.size(); ++i)
      os << (i ? "," : "") << csv_escape(cols[i]);
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        const auto it = row.find(cols[i]);
        os << (i ? "," : "") << (it == row.end() ? "" : render_csv_scalar(*it));
      }
      os << "\n";
    }
    return os.str();
  }
  os << "key,value\n";
  for (const auto& item : result.items()) {
    if (item.key() == "schema") continue;
    if (item.value().is_array() || item.value().is_object()) continue;
    os << csv_escape(item.key()) << "," << render_csv_scalar(item.value()) << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("online-learning laboratory ") + olab_version()};
  app.require_subcommand(1);

  struct SubState {
    CLI::App* cmd = nullptr;
    std::string mode;
    std::string config;
    std::string out;
    std::string format = "table";
    std::uint64_t seed = 0;
    bool seed_set = false;
    long long threads = -1;
    long long budget = -1;
  };
  std::vector<SubState> subs(families().size());

  for (std::size_t i = 0; i < families().size(); ++i) {
    const Family& fam = families()[i];
    SubState& st = subs[i];
    st.cmd = app.add_subcommand(fam.name, fam.help);
    if (!fam.variants.empty()) {
      std::string help = "operation variant: ";
      for (std::size_t v = 0; v < fam.variants.size(); ++v)
        help += (v ? ", " : "") + fam.variants[v];
      st.cmd->add_option("mode", st.mode, help);
    }
    st.cmd->add_option("-c,--config", st.config, "JSON config file (\"-\" for stdin)");
    st.cmd->add_option("-o,--out", st.out, "write the result artifact to this file");
    st.cmd->add_option("--format", st.format, "artifact format")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    st.cmd->add_option("--seed", st.seed, "random seed (required by randomized operations)")
        ->each([&st](const std::string&) { st.seed_set = true; });
    st.cmd->add_option("--threads", st.threads, "worker threads (0 or unset: all cores)");
    st.cmd->add_option("--budget", st.budget, "work budget for exhaustive recursions");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  std::size_t chosen = families().size();
  for (std::size_t i = 0; i < families().size(); ++i)
    if (subs[i].cmd->parsed()) chosen = i;
  if (chosen == families().size()) usage_error("no subcommand selected");
  const Family& fam = families()[chosen];
  SubState& st = subs[chosen];

  // Load the config (an empty object when --config is omitted).
  Json config = Json::object();
  if (!st.config.empty()) {
    const std::string text = read_config_text(st.config);
    try {
      config = Json::parse(text);
    } catch (const Json::parse_error& e) {
      usage_error(std::string("config: ") + e.what());
    }
    if (!config.is_object()) usage_error("config: expected a JSON object");
  }

  // Resolve the operation kind from the mode argument and the config.
  if (!st.mode.empty()) {
    bool known = false;
    for (const auto& v : fam.variants) known = known || v == st.mode;
    if (!known) {
      std::string options;
      for (std::size_t v = 0; v < fam.variants.size(); ++v)
        options += (v ? ", " : "") + fam.variants[v];
      usage_error("unknown " + fam.name + " variant \"" + st.mode + "\" (expected one of: " +
                  options + ")");
    }
  }
  std::string kind;
  if (config.contains("kind")) {
    if (!config["kind"].is_string()) usage_error(".kind: expected a string");
    kind = config["kind"].get<std::string>();
    if (!kind_in_family(fam, kind))
      usage_error("config kind \"" + kind + "\" does not belong to subcommand \"" + fam.name +
                  "\"");
    if (!st.mode.empty() && kind != kind_for(fam, st.mode))
      usage_error("config kind \"" + kind + "\" conflicts with the requested variant \"" +
                  st.mode + "\"");
  } else if (!st.mode.empty()) {
    kind = kind_for(fam, st.mode);
  } else if (fam.variants.empty() || !fam.default_variant.empty()) {
    kind = kind_for(fam, fam.default_variant);
  } else {
    std::string options;
    for (std::size_t v = 0; v < fam.variants.size(); ++v)
      options += (v ? ", " : "") + fam.variants[v];
    usage_error(fam.name + " needs a variant (one of: " + options +
                ") or a config with a \"kind\" field");
  }
  config["kind"] = kind;
  if (!config.contains("schema")) config["schema"] = 1;

  // Flag overrides.
  if (st.seed_set) config["seed"] = st.seed;
  if (st.threads >= 0) config["threads"] = st.threads;
  if (st.budget >= 0) config["budget"] = st.budget;

  // Run through the C interface.
  char* result_text = nullptr;
  const olab_status status = olab_exec(config.dump().c_str(), &result_text);
  if (status != OLAB_OK) {
    std::cerr << "error: " << olab_last_error() << "\n";
    return status == OLAB_ERR_CHECK ? 2 : 1;
  }
  Json result = Json::parse(result_text);
  olab_string_free(result_text);

  const std::string artifact = st.format == "json"  ? result.dump(2) + "\n"
                               : st.format == "csv" ? render_csv(result)
                                                    : render_table(result);
  if (!st.out.empty()) {
    std::ofstream out(st.out, std::ios::binary);
    if (!out) usage_error("cannot write to \"" + st.out + "\"");
    out << artifact;
    std::cout << render_table(result);
  } else {
    std::cout << artifact;
  }

  const auto holds = result.find("holds");
  if (holds != result.end() && holds->is_boolean() && !holds->get<bool>()) return 2;
  return 0;
}
