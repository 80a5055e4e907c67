// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: local Smith forms, diagonalizing transforms,
// generalized inverse expansions and solution-curve approximation for
// matrix families given by an input document.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "localsmith_cli/commands.hpp"

namespace {

using localsmith::cli::CommandOptions;
using localsmith::cli::InputDocument;
using localsmith::cli::Json;

int dispatch(const InputDocument& doc, const CommandOptions& opts, Json& out) {
  std::string backend = opts.backend;
  if (backend.empty()) backend = doc.field == "float" ? "float" : "exact";
  if (backend == "float") {
    return localsmith::cli::run_typed<double>(doc, opts, out);
  }
  if (doc.field == "gaussian-rational")
    return localsmith::cli::run_typed<localsmith::GaussianRational>(doc, opts, out);
  if (doc.field == "float")
    throw localsmith::cli::ParseError(
        "backend \"exact\" needs rational or gaussian-rational entries");
  return localsmith::cli::run_typed<localsmith::Rational>(doc, opts, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local diagonalization of matrix families at a parameter value"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string input_path;
  std::string out_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("input", input_path, "input document (JSON)")->required();
    cmd->add_option("--order", opts.order, "requested expansion order (default 2k+6)");
    cmd->add_option("--k-max", opts.k_max, "step budget for stabilization");
    cmd->add_flag("--check", opts.check, "run the verification suite");
    cmd->add_option("--at", opts.at, "recenter the family at this parameter value first");
    cmd->add_option("--backend", opts.backend, "exact|float")
        ->check(CLI::IsMember({"exact", "float"}));
    cmd->add_option("--tol", opts.tol, "float backend tolerance");
    cmd->add_option("--sample", opts.samples, "comma-separated sample points");
    cmd->add_option("--format", opts.format, "text|structured")
        ->check(CLI::IsMember({"text", "structured"}));
    cmd->add_option("--out", out_path, "write the report to this file");
    cmd->add_option("--seed", opts.seed, "seed for sampled approximations");
  };
  for (const char* name : {"analyze", "diagonalize", "ginverse", "solve", "artin",
                           "oracle-smith"})
    add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);
  opts.command = app.get_subcommands().front()->get_name();

  Json out;
  out["command"] = opts.command;
  int code = localsmith::cli::kExitOk;
  auto started = std::chrono::steady_clock::now();
  try {
    std::ifstream in(input_path);
    if (!in) {
      std::cerr << "error: cannot open " << input_path << "\n";
      return localsmith::cli::kExitParse;
    }
    Json raw = Json::parse(in, nullptr, true, true);  // allow comments
    InputDocument doc = localsmith::cli::parse_input_document(raw);
    code = dispatch(doc, opts, out);
  } catch (const localsmith::cli::ParseError& e) {
    out["error"] = e.what();
    code = localsmith::cli::kExitParse;
  } catch (const Json::exception& e) {
    out["error"] = std::string("input document: ") + e.what();
    code = localsmith::cli::kExitParse;
  } catch (const localsmith::NonStabilizedError& e) {
    out["error"] = e.what();
    code = localsmith::cli::kExitNonStabilized;
  } catch (const localsmith::InsufficientDataError& e) {
    out["error"] = e.what();
    code = localsmith::cli::kExitNonStabilized;
  } catch (const localsmith::InternalError& e) {
    out["error"] = e.what();
    code = localsmith::cli::kExitVerification;
  } catch (const localsmith::Error& e) {
    out["error"] = e.what();
    code = localsmith::cli::kExitVerification;
  }
  out["exit_code"] = code;

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return localsmith::cli::kExitParse;
    }
    os = &file;
  }
  if (opts.format == "structured") {
    *os << out.dump(2) << "\n";
  } else {
    localsmith::cli::render_text(out, *os);
  }
  auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                            started);
  std::cerr << opts.command << " finished in " << elapsed.count() << " ms\n";
  return code;
}
