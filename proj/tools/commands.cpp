#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbn/dependency.hpp"
#include "rbn/errors.hpp"
#include "rbn/fol.hpp"
#include "rbn/frontend.hpp"
#include "rbn/grounding.hpp"

namespace rbn::cli {

namespace {

using nlohmann::json;

class Failure {
 public:
  Failure(int code, std::string message) : code(code), message(std::move(message)) {}
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(kInvalid, path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string format_probability(double p) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", p);
  return buffer;
}

std::string cycle_text(const std::vector<std::string>& cycle) {
  std::string out;
  for (const auto& atom : cycle) out += atom + " -> ";
  return cycle.empty() ? out : out + cycle.front();
}

ParsedModel load_model(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_model(text);
  } catch (const ParseError& e) {
    throw Failure(kInvalid, path + ":" + e.what());
  } catch (const ValidationError& e) {
    throw Failure(kInvalid, path + ": invalid model\n" + e.report().to_string());
  } catch (const Error& e) {
    throw Failure(kInvalid, path + ": " + e.what());
  }
}

BoundScenario load_scenario(const RelationalNetwork& network, const std::string& path) {
  const std::string text = read_file(path);
  try {
    return bind_scenario(network, parse_scenario(text));
  } catch (const ParseError& e) {
    throw Failure(kInvalid, path + ":" + e.what());
  } catch (const Error& e) {
    throw Failure(kInvalid, path + ": " + e.what());
  }
}

std::vector<std::string> recursive_relations(const RelationalNetwork& network) {
  std::vector<std::string> out;
  for (const auto& [r, _] : network.vocabulary().probabilistic()) {
    if (network.is_recursive(r)) out.push_back(r);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// Runs `body`, mapping library errors to exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const InconsistentEvidenceError& e) {
    err << "error: inconsistent evidence: " << e.what() << "\n";
    return kInconsistent;
  } catch (const WellFoundednessError& e) {
    err << "error: " << e.what() << "\n";
    return kNotWellFounded;
  } catch (const BudgetExceededError& e) {
    err << "error: budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

// Reports the well-foundedness check for recursive networks; throws on a
// cycle.
void report_wellfoundedness(const RelationalNetwork& network, const Structure& s, bool json_mode, std::ostream& out) {
  const auto recursive = recursive_relations(network);
  if (recursive.empty()) return;
  const WellFoundedness wf = check_wellfounded(network, s);
  if (!wf.ok) {
    const auto names = wf.cycle_names(s);
    throw WellFoundednessError("recursion is not well founded on this structure: " + cycle_text(names), names);
  }
  if (json_mode) {
    out << json{{"wellfounded", true}, {"recursive", recursive}}.dump() << "\n";
  } else {
    out << "well-founded: yes (recursive: " << join(recursive, ", ") << ")\n";
  }
}

EliminationOptions elimination_options(const InferOptions& options) {
  EliminationOptions e;
  e.max_scope = options.budget_bits;
  if (options.elim_order == "lex") {
    e.heuristic = EliminationHeuristic::Lexicographic;
  } else if (options.elim_order != "minfill") {
    throw Failure(kInvalid, "unknown elimination order '" + options.elim_order + "'");
  }
  return e;
}

}  // namespace

int cmd_check(const std::string& model_path, bool recursive_ok, bool json_mode, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string text = read_file(model_path);
    std::optional<ParsedModel> parsed;
    try {
      parsed.emplace(parse_model_unchecked(text));
    } catch (const ParseError& e) {
      throw Failure(kInvalid, model_path + ":" + e.what());
    }
    const ValidationReport& report = parsed->report;
    const RelationalNetwork& network = parsed->network;
    const auto recursive = recursive_relations(network);
    if (json_mode) {
      json violations = json::array();
      for (const Violation& v : report.violations) violations.push_back({{"relation", v.relation}, {"message", v.message}});
      out << json{{"model", model_path}, {"valid", report.ok()}, {"violations", violations}, {"recursive", recursive}}
                 .dump()
          << "\n";
    } else {
      for (const Violation& v : report.violations) out << model_path << ": " << v.message << "\n";
      if (report.ok()) {
        out << model_path << ": ok (" << network.vocabulary().probabilistic().size() << " relations)\n";
      }
    }
    if (!recursive.empty() && report.ok()) {
      if (recursive_ok) {
        if (!json_mode) out << "note: recursive relations: " << join(recursive, ", ") << "\n";
      } else {
        err << "warning: recursive relations (" << join(recursive, ", ")
            << "); well-foundedness is checked per structure at inference time\n";
      }
    }
    return report.ok() ? kOk : kInvalid;
  });
}

int cmd_infer(const std::string& model_path, const std::string& scenario_path, const InferOptions& options,
              std::ostream& out, std::ostream& err, RunReport* report) {
  return guarded(err, [&] {
    const ParsedModel model = load_model(model_path);
    const BoundScenario scenario = load_scenario(model.network, scenario_path);
    const EliminationOptions elimination = elimination_options(options);
    report_wellfoundedness(model.network, scenario.structure, options.json, out);

    struct Outcome {
      QueryRecord record;
      std::exception_ptr error;
    };
    std::vector<std::future<Outcome>> pending;
    for (const GroundAtom& q : scenario.queries) {
      pending.push_back(std::async(std::launch::async, [&, q] {
        Outcome o;
        o.record.query = to_string(q, scenario.structure);
        try {
          const auto start = std::chrono::steady_clock::now();
          const InferenceResult<double> r = infer<double>(model.network, scenario.structure, scenario.evidence, q,
                                                          elimination);
          o.record.millis =
              std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
          o.record.probability = r.probability;
          o.record.nodes = r.nodes;
          o.record.edges = r.edges;
          o.record.width = r.width;
          if (options.oracle) {
            o.record.oracle = brute_force_conditional<double>(model.network, scenario.structure, scenario.evidence, q,
                                                              options.budget_bits);
          }
        } catch (...) {
          o.error = std::current_exception();
        }
        return o;
      }));
    }
    RunReport local;
    for (auto& f : pending) {
      Outcome o = f.get();
      if (o.error) std::rethrow_exception(o.error);
      local.records.push_back(std::move(o.record));
    }

    for (const QueryRecord& r : local.records) {
      if (options.json) {
        json j{{"query", r.query},     {"probability", format_probability(r.probability)},
               {"nodes", r.nodes},     {"edges", r.edges},
               {"width", r.width}};
        if (r.oracle) {
          j["oracle"] = format_probability(*r.oracle);
          j["delta"] = std::abs(*r.oracle - r.probability);
        }
        if (options.timings) j["time_ms"] = r.millis;
        out << j.dump() << "\n";
      } else {
        out << r.query << " = " << format_probability(r.probability) << "  nodes=" << r.nodes << " edges=" << r.edges
            << " width=" << r.width;
        if (r.oracle) out << " oracle=" << format_probability(*r.oracle) << " delta=" << std::abs(*r.oracle - r.probability);
        if (options.timings) {
          char t[32];
          std::snprintf(t, sizeof t, "%.3f", r.millis);
          out << "  (" << t << " ms)";
        }
        out << "\n";
      }
    }
    if (report) *report = std::move(local);
    return kOk;
  });
}

int cmd_deps(const std::string& model_path, const std::string& relation, const std::string& parent, bool ancestor,
             bool json_mode, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ParsedModel model = load_model(model_path);
    const DependencyFormula f = ancestor ? ancestor_formula(model.network, relation, parent)
                                         : parent_formula(model.network, relation, parent);
    std::optional<std::string> normal;
    if (!f.uses_rigid_symbols()) normal = normalize(f).to_string();
    const std::string head = std::string(ancestor ? "pa*" : "pa") + "[" + relation + "," + parent + "](" +
                             join(f.source, ", ") + "; " + join(f.target, ", ") + ")";
    if (json_mode) {
      json j{{"relation", relation}, {"parent", parent}, {"ancestor", ancestor}, {"source", f.source},
             {"target", f.target},   {"formula", to_string(f)}};
      if (normal) j["normal_form"] = *normal;
      out << j.dump() << "\n";
    } else {
      out << head << " := " << to_string(f) << "\n";
      if (normal) out << "normal form: " << *normal << "\n";
    }
    return kOk;
  });
}

int cmd_translate_fol(const std::string& formula, bool max_for_or, bool json_mode, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    FOFormula phi;
    try {
      phi = parse_fol(formula);
    } catch (const ParseError& e) {
      throw Failure(kInvalid, std::string("formula:") + e.what());
    }
    const std::string result = to_string(translate(phi, TranslateOptions{max_for_or}));
    if (json_mode) {
      out << json{{"input", to_string(phi)}, {"formula", result}}.dump() << "\n";
    } else {
      out << result << "\n";
    }
    return kOk;
  });
}

int cmd_oracle(const std::string& model_path, const std::string& scenario_path, const InferOptions& options,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ParsedModel model = load_model(model_path);
    const BoundScenario scenario = load_scenario(model.network, scenario_path);
    report_wellfoundedness(model.network, scenario.structure, options.json, out);
    for (const GroundAtom& q : scenario.queries) {
      const double p =
          brute_force_conditional<double>(model.network, scenario.structure, scenario.evidence, q, options.budget_bits);
      const std::string name = to_string(q, scenario.structure);
      if (options.json) {
        out << json{{"query", name}, {"probability", format_probability(p)}}.dump() << "\n";
      } else {
        out << name << " = " << format_probability(p) << "\n";
      }
    }
    return kOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relational Bayesian network compiler and exact inference"};
  app.require_subcommand(1);
  bool json_mode = false;
  app.add_flag("--json", json_mode, "Emit one JSON record per result");

  std::string model_path, scenario_path;
  bool recursive_ok = false;
  auto* check = app.add_subcommand("check", "Validate a model file");
  check->add_option("model", model_path, "Model file (.rbn)")->required();
  check->add_flag("--recursive", recursive_ok, "Acknowledge recursive relations");

  InferOptions infer_options;
  auto add_infer_flags = [&](CLI::App* cmd, bool with_oracle) {
    cmd->add_option("model", model_path, "Model file (.rbn)")->required();
    cmd->add_option("scenario", scenario_path, "Scenario file (.rbs)")->required();
    cmd->add_option("--budget-bits", infer_options.budget_bits, "Largest enumeration (oracle) or factor (inference) size, in bits")
        ->capture_default_str();
    if (with_oracle) {
      cmd->add_flag("--oracle", infer_options.oracle, "Also run brute-force enumeration and report the difference");
      cmd->add_option("--elim-order", infer_options.elim_order, "Elimination order heuristic")
          ->check(CLI::IsMember({"minfill", "lex"}))
          ->capture_default_str();
      cmd->add_flag("!--no-timings", infer_options.timings, "Omit wall-clock times");
    }
  };
  auto* infer_cmd = app.add_subcommand("infer", "Answer the scenario's queries");
  add_infer_flags(infer_cmd, true);
  auto* oracle_cmd = app.add_subcommand("oracle", "Answer the queries by brute-force enumeration");
  add_infer_flags(oracle_cmd, false);

  std::string relation, parent;
  bool ancestor = false;
  auto* deps = app.add_subcommand("deps", "Print the dependency formula of relation on parent");
  deps->add_option("model", model_path, "Model file (.rbn)")->required();
  deps->add_option("relation", relation)->required();
  deps->add_option("parent", parent)->required();
  deps->add_flag("--ancestor", ancestor, "Ancestor formula over all paths (non-recursive models)");

  std::string formula;
  bool max_for_or = false;
  auto* fol = app.add_subcommand("translate-fol", "Translate a first-order formula into a probability formula");
  fol->add_option("formula", formula, "Formula, e.g. 'exists y b(x,y)'")->required();
  fol->add_flag("--max-or", max_for_or, "Write disjunctions as max terms");

  for (CLI::App* sub : {check, infer_cmd, oracle_cmd, deps, fol}) {
    sub->add_flag("--json", json_mode, "Emit one JSON record per result");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }
  infer_options.json = json_mode;

  if (check->parsed()) return cmd_check(model_path, recursive_ok, json_mode, out, err);
  if (infer_cmd->parsed()) return cmd_infer(model_path, scenario_path, infer_options, out, err);
  if (oracle_cmd->parsed()) return cmd_oracle(model_path, scenario_path, infer_options, out, err);
  if (deps->parsed()) return cmd_deps(model_path, relation, parent, ancestor, json_mode, out, err);
  return cmd_translate_fol(formula, max_for_or, json_mode, out, err);
}

}  // namespace rbn::cli
