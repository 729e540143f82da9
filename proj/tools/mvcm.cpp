// mvcm: command-line front end over the libmvl C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvl/mvl.h"

namespace {

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DocumentDeleter {
  void operator()(mvl_document* d) const { mvl_document_free(d); }
};
struct LatticeDeleter {
  void operator()(mvl_lattice* l) const { mvl_lattice_free(l); }
};
struct StringDeleter {
  void operator()(char* s) const { mvl_string_free(s); }
};
using DocumentPtr = std::unique_ptr<mvl_document, DocumentDeleter>;
using LatticePtr = std::unique_ptr<mvl_lattice, LatticeDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

// Domain failure carrying the library status.
struct Failure {
  mvl_status status;
};

void check(mvl_status st) {
  if (st != MVL_OK) throw Failure{st};
}

std::string take(char* s) {
  OwnedString owned(s);
  return s ? std::string(s) : std::string();
}

// "fixture:NAME" selects a built-in document, anything else is a path.
DocumentPtr load(const std::string& source) {
  mvl_document* doc = nullptr;
  const std::string prefix = "fixture:";
  if (source.rfind(prefix, 0) == 0) {
    check(mvl_document_load_fixture(source.substr(prefix.size()).c_str(), &doc));
    return DocumentPtr(doc);
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + source + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const std::string s = text.str();
  check(mvl_document_parse(s.data(), s.size(), &doc));
  return DocumentPtr(doc);
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

// Parses "enumerate", "pessimistic", "optimistic" or "single:<i>" (1-based).
void parse_weights(const std::string& text, mvl_run_options& options) {
  if (text == "enumerate") {
    options.weights = MVL_WEIGHTS_ENUMERATE;
  } else if (text == "pessimistic") {
    options.weights = MVL_WEIGHTS_PESSIMISTIC;
  } else if (text == "optimistic") {
    options.weights = MVL_WEIGHTS_OPTIMISTIC;
  } else if (text.rfind("single:", 0) == 0) {
    const std::string digits = text.substr(7);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 6)
      throw UsageError("--weights single:<i> needs a positive matrix number");
    long i = std::stol(digits);
    if (i < 1) throw UsageError("--weights single:<i> counts matrices from 1");
    options.weights = MVL_WEIGHTS_SINGLE;
    options.matrix = static_cast<size_t>(i - 1);
  } else {
    throw UsageError("--weights must be enumerate, pessimistic, optimistic or single:<i>");
  }
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite lattices, multi-valued sets and multi-valued cognitive maps"};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::string file;
  std::string lattice_name;

  auto* lattice_cmd = app.add_subcommand("lattice", "Inspect a lattice");
  lattice_cmd->require_subcommand(1);
  auto* check_cmd = lattice_cmd->add_subcommand("check", "Print the structure report");
  auto* show_cmd = lattice_cmd->add_subcommand("show", "Print elements, heights and covers");
  for (auto* sub : {check_cmd, show_cmd}) {
    sub->add_option("file", file, "Document path or fixture:NAME")->required();
    sub->add_option("--lattice", lattice_name, "Lattice block (default: last one not used as a product factor)");
  }

  std::string term;
  std::vector<std::string> bindings;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a term at a valuation");
  eval_cmd->add_option("file", file, "Document path or fixture:NAME")->required();
  eval_cmd->add_option("--term", term, "Term block")->required();
  eval_cmd->add_option("--lattice", lattice_name, "Lattice block (default: last one not used as a product factor)");
  eval_cmd->add_option("bindings", bindings, "name=label pairs");

  std::vector<std::string> operands;
  bool classical = false;
  auto* extend_cmd = app.add_subcommand("extend", "Apply the extension principle to mvsets");
  extend_cmd->add_option("file", file, "Document path or fixture:NAME")->required();
  extend_cmd->add_option("--term", term, "Term block")->required();
  extend_cmd->add_flag("--classical", classical, "Use the min-based classical rule instead");
  extend_cmd->add_option("mvsets", operands, "Argument mvset blocks, in parameter order")->required();

  std::string kind = "pessimistic";
  auto* mean_cmd = app.add_subcommand("mean", "Mean of assessment sets");
  mean_cmd->add_option("file", file, "Document path or fixture:NAME")->required();
  mean_cmd->add_option("--kind", kind, "pessimistic or optimistic")
      ->check(CLI::IsMember({"pessimistic", "optimistic"}));
  mean_cmd->add_option("sets", operands, "Set blocks")->required();

  auto* diff_cmd = app.add_subcommand("diff", "Difference of two assessment sets");
  diff_cmd->add_option("file", file, "Document path or fixture:NAME")->required();
  diff_cmd->add_option("sets", operands, "Two set blocks")->required()->expected(2);

  bool as_json = false;
  std::string out_path;
  auto* format_cmd = app.add_subcommand("format", "Print a document in canonical form");
  format_cmd->add_option("file", file, "Document path or fixture:NAME")->required();
  format_cmd->add_flag("--json", as_json, "Emit JSON instead");

  std::string map_name;
  std::string combine = "join";
  std::string weights = "single:1";
  std::string format = "tsv";
  int max_iter = 100;
  int depth = 4;
  auto* map_cmd = app.add_subcommand("map", "Run cognitive maps");
  map_cmd->require_subcommand(1);
  auto* run_cmd = map_cmd->add_subcommand("run", "Iterate a map and print its trace");
  run_cmd->add_option("file", file, "Document path or fixture:NAME")->required();
  run_cmd->add_option("--map", map_name, "Map block (default: first declared)");
  run_cmd->add_option("--combine", combine, "join or sum")->check(CLI::IsMember({"join", "sum"}));
  run_cmd->add_option("--weights", weights, "enumerate, pessimistic, optimistic or single:<i>");
  run_cmd->add_option("--max-iter", max_iter, "Iteration budget")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--depth", depth, "Branching depth for enumerate")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--format", format, "tsv, markdown or json")->check(CLI::IsMember({"tsv", "markdown", "json"}));
  run_cmd->add_option("--out", out_path, "Write the trace here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    mvl_run_options options;
    mvl_run_options_init(&options);
    if (run_cmd->parsed()) {
      parse_weights(weights, options);
      options.combine = combine == "sum" ? MVL_COMBINE_SUM : MVL_COMBINE_JOIN;
      options.max_iter = max_iter;
      options.branch_depth = depth;
      options.format = format == "markdown" ? MVL_FORMAT_MARKDOWN : format == "json" ? MVL_FORMAT_JSON : MVL_FORMAT_TSV;
    }
    if (diff_cmd->parsed() && operands.size() != 2) throw UsageError("diff takes exactly two sets");

    DocumentPtr doc = load(file);
    const char* lat = lattice_name.empty() ? nullptr : lattice_name.c_str();

    if (check_cmd->parsed() || show_cmd->parsed()) {
      mvl_lattice* raw = nullptr;
      check(mvl_document_lattice(doc.get(), lat, &raw));
      LatticePtr l(raw);
      char* text = nullptr;
      check(check_cmd->parsed() ? mvl_lattice_report(l.get(), &text) : mvl_lattice_show(l.get(), &text));
      std::cout << take(text);
    } else if (eval_cmd->parsed()) {
      std::string joined;
      for (const auto& b : bindings) joined += (joined.empty() ? "" : ",") + b;
      char* text = nullptr;
      check(mvl_eval(doc.get(), term.c_str(), lat, joined.c_str(), &text));
      std::cout << take(text) << '\n';
    } else if (extend_cmd->parsed()) {
      auto names = c_strings(operands);
      char* text = nullptr;
      check(mvl_extend(doc.get(), term.c_str(), names.data(), names.size(), classical ? 1 : 0, &text));
      std::cout << take(text) << '\n';
    } else if (mean_cmd->parsed()) {
      auto names = c_strings(operands);
      char* text = nullptr;
      check(mvl_mean(doc.get(), kind == "optimistic" ? MVL_MEAN_OPTIMISTIC : MVL_MEAN_PESSIMISTIC, names.data(),
                     names.size(), &text));
      std::cout << take(text) << '\n';
    } else if (diff_cmd->parsed()) {
      char* text = nullptr;
      check(mvl_diff(doc.get(), operands[0].c_str(), operands[1].c_str(), &text));
      std::cout << take(text) << '\n';
    } else if (format_cmd->parsed()) {
      char* text = nullptr;
      check(as_json ? mvl_document_to_json(doc.get(), &text) : mvl_document_serialize(doc.get(), &text));
      std::cout << take(text);
    } else if (run_cmd->parsed()) {
      char* trace = nullptr;
      char* status = nullptr;
      mvl_status st = mvl_map_run(doc.get(), map_name.empty() ? nullptr : map_name.c_str(), &options, &trace, &status);
      std::string trace_text = take(trace);
      std::string status_text = take(status);
      if (st != MVL_OK && st != MVL_E_NOT_CONVERGED) throw Failure{st};
      write_output(trace_text, out_path);
      std::cerr << status_text << '\n';
      if (st == MVL_E_NOT_CONVERGED) return kDomainError;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  } catch (const Failure&) {
    std::cerr << mvl_last_error() << '\n';
    return kDomainError;
  }
  return 0;
}
