#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rbn::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalid = 1,       // I/O, parse, validation
  kInconsistent = 2,  // evidence has probability zero
  kNotWellFounded = 3,
  kBudget = 4,
};

struct InferOptions {
  bool json = false;
  bool oracle = false;
  std::size_t budget_bits = 24;
  std::string elim_order = "minfill";  // or "lex"
  bool timings = true;
};

struct QueryRecord {
  std::string query;
  double probability = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t width = 0;
  double millis = 0;
  std::optional<double> oracle;
};

// One record per scenario query, in scenario order.
struct RunReport {
  std::vector<QueryRecord> records;
  std::vector<std::string> diagnostics;
};

int cmd_check(const std::string& model_path, bool recursive_ok, bool json, std::ostream& out, std::ostream& err);
int cmd_infer(const std::string& model_path, const std::string& scenario_path, const InferOptions& options,
              std::ostream& out, std::ostream& err, RunReport* report = nullptr);
int cmd_deps(const std::string& model_path, const std::string& relation, const std::string& parent, bool ancestor,
             bool json, std::ostream& out, std::ostream& err);
int cmd_translate_fol(const std::string& formula, bool max_for_or, bool json, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::string& model_path, const std::string& scenario_path, const InferOptions& options,
               std::ostream& out, std::ostream& err);

// Full command line (argv[0] excluded handling is up to the caller).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rbn::cli
