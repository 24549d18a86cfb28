#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "superlin/capi.h"

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

struct Leaf {
  const char* verb;
  const char* action;
  int file_count;
  bool takes_steps;
  const char* help;
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"partitioned (super) linear algebra toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  double tol = 0;
  long max_iter = 0;
  long steps = 1;
  bool rational = false, relaxed = false, json = false;
  app.add_option("--tol", tol, "tolerance override (each operation documents its default)")
      ->envname("SMLA_TOL");
  app.add_flag("--rational", rational, "exact rational arithmetic where supported");
  app.add_flag("--relaxed", relaxed, "drop the closed-model invariants (all candidates reported)");
  app.add_flag("--json", json, "emit the JSON report instead of text");
  app.add_option("--max-iter", max_iter, "iteration cap for markov limit");

  const Leaf leaves[] = {
      {"matrix", "add", 2, false, "add two super matrices of the same type"},
      {"matrix", "transpose", 1, false, "transpose, keeping the partition lines"},
      {"matrix", "flatten", 1, false, "print the plain matrix under the partitions"},
      {"matrix", "det", 1, false, "super determinant of a super diagonal matrix"},
      {"spec", "charpoly", 1, false, "characteristic super polynomial"},
      {"spec", "minpoly", 1, false, "minimal super polynomial"},
      {"spec", "eigen", 1, false, "characteristic super values per block"},
      {"spec", "diag", 1, false, "diagonalizability verdict per block"},
      {"spec", "cayley", 1, false, "Cayley-Hamilton residual per block"},
      {"metric", "gram-schmidt", 1, false, "orthonormalize a vector list blockwise"},
      {"metric", "project", 1, false, "best approximation of the target from the span"},
      {"metric", "form-report", 1, false, "rank, symmetry class and degeneracy per block"},
      {"metric", "signature", 1, false, "signature of a symmetric form"},
      {"markov", "step", 1, true, "advance the chain n steps"},
      {"markov", "limit", 1, false, "stationary limit of an ergodic chain"},
      {"leontief", "closed", 1, false, "prices of a closed exchange model"},
      {"leontief", "open", 1, false, "production for an open consumption model"},
  };

  std::string verb, action;
  std::vector<std::string> files;
  std::string file_one;
  std::map<std::string, CLI::App*> groups;
  for (const Leaf& l : leaves) {
    CLI::App*& group = groups[l.verb];
    if (!group) {
      group = app.add_subcommand(l.verb, "");
      group->require_subcommand(1);
      group->fallthrough();
    }
    CLI::App* cmd = group->add_subcommand(l.action, l.help);
    cmd->fallthrough();
    // a vector positional is greedy and would eat the step count, so leaves
    // that take one file bind a plain string instead
    if (l.file_count == 1)
      cmd->add_option("file", file_one, "input JSON file")->required();
    else
      cmd->add_option("file", files, "input JSON file(s)")
          ->expected(l.file_count)
          ->required();
    if (l.takes_steps) cmd->add_option("n", steps, "number of steps (default 1)");
    cmd->callback([&verb, &action, &l] {
      verb = l.verb;
      action = l.action;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (files.empty() && !file_one.empty()) files.push_back(file_one);

  slm_options opts;
  slm_options_init(&opts);
  opts.tol = tol > 0 ? tol : -1;
  opts.rational = rational ? 1 : 0;
  opts.relaxed = relaxed ? 1 : 0;
  opts.json = json ? 1 : 0;
  opts.max_iter = max_iter > 0 ? max_iter : -1;
  opts.steps = steps;

  std::vector<std::string> texts(files.size());
  std::vector<const char*> ptrs;
  for (size_t i = 0; i < files.size(); ++i) {
    if (!read_file(files[i], texts[i])) {
      std::fprintf(stderr, "cannot read %s\n", files[i].c_str());
      return 2;
    }
    ptrs.push_back(texts[i].c_str());
  }

  slm_report* rep = nullptr;
  int rc = slm_run(verb.c_str(), action.c_str(), ptrs.data(), static_cast<int>(ptrs.size()),
                   &opts, &rep);
  if (rc != SLM_OK) {
    std::fprintf(stderr, "%s\n", slm_last_error());
    return rc;
  }
  const char* out = json ? slm_report_json(rep) : slm_report_text(rep);
  if (out) std::fputs(out, stdout);
  slm_report_free(rep);
  return 0;
}
