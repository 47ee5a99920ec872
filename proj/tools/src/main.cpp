#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ruelle/error.hpp"

namespace {

void model_flags(CLI::App* cmd, lab::Options& o) {
  cmd->add_option("model", o.model, "Model file (JSON)")->required();
  cmd->add_option("--k", o.k, "Form degree");
  cmd->add_option("--T", o.t_re, "Real-part depth of the box (and imaginary half-width unless --T-im)");
  cmd->add_option("--T-im", o.t_im, "Imaginary half-width of the box");
  cmd->add_option("--mode", o.mode, "Arithmetic mode")->check(CLI::IsMember({"auto", "exact", "float"}));
}

void output_flags(CLI::App* cmd, lab::Options& o) {
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "Output format")
      ->transform(CLI::CheckedTransformer(std::map<std::string, lab::Format>{{"csv", lab::Format::csv},
                                                                            {"json", lab::Format::json}}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pollicott-Ruelle resonances of Morse-Smale model flows"};
  app.require_subcommand(1);
  lab::Options o;
  std::function<int(const lab::Options&)> action;

  auto* validate = app.add_subcommand("validate", "Check the model invariants");
  validate->add_option("model", o.model, "Model file (JSON)")->required();
  validate->add_option("--mode", o.mode, "Arithmetic mode")->check(CLI::IsMember({"auto", "exact", "float"}));
  output_flags(validate, o);
  validate->callback([&] { action = lab::run_validate; });

  auto* spectrum = app.add_subcommand("spectrum", "Resonances with multiplicities in a box");
  model_flags(spectrum, o);
  output_flags(spectrum, o);
  spectrum->callback([&] { action = lab::run_spectrum; });

  auto* imaginary = app.add_subcommand("imaginary", "Resonances on the imaginary axis");
  model_flags(imaginary, o);
  output_flags(imaginary, o);
  imaginary->callback([&] { action = lab::run_imaginary; });

  auto* bands = app.add_subcommand("bands", "Band decomposition of the spectrum in a box");
  model_flags(bands, o);
  output_flags(bands, o);
  bands->callback([&] { action = lab::run_bands; });

  auto* weyl = app.add_subcommand("weyl", "Resonance count against the Weyl-law prediction");
  model_flags(weyl, o);
  output_flags(weyl, o);
  weyl->add_option("--seed", o.seed, "Seed of the Monte Carlo volume");
  weyl->callback([&] { action = lab::run_weyl; });

  auto* floquet = app.add_subcommand("floquet", "Floquet data of a sampled periodic coefficient");
  floquet->add_option("--coeff", o.coeff, "CSV rows theta, a11, a12, ...")->required();
  floquet->add_option("--period", o.period, "Period of the coefficient")->required();
  floquet->add_option("--tol", o.tol, "Integrator tolerance");
  output_flags(floquet, o);
  floquet->callback([&] { action = lab::run_floquet; });

  auto* oracle = app.add_subcommand("oracle", "Match correlation poles against the predicted spectrum");
  std::vector<std::string> oracle_args;
  oracle->add_option("args", oracle_args, "[verify] model")->required()->expected(1, 2);
  oracle->add_option("--k", o.k, "Form degree");
  oracle->add_option("--mode", o.mode, "Arithmetic mode")->check(CLI::IsMember({"auto", "exact", "float"}));
  output_flags(oracle, o);
  oracle->add_option("--element", o.element, "Critical element (default: first)");
  oracle->add_option("--order", o.order, "Number of leading poles to fit");
  oracle->add_option("--tol", o.tol, "Matching distance (default 1e-3)");
  oracle->add_option("--floor", o.floor, "Amplitude floor relative to the largest amplitude");
  oracle->callback([&] {
    if (oracle_args.size() == 2 && oracle_args[0] != "verify") {
      throw CLI::ValidationError("oracle", "expected 'oracle [verify] MODEL'");
    }
    o.model = oracle_args.back();
    action = lab::run_oracle;
  });

  auto* states = app.add_subcommand("states", "Local resonant states");
  states->require_subcommand(1);
  auto* check = states->add_subcommand("check", "Eigen-equation residuals of the local states");
  model_flags(check, o);
  output_flags(check, o);
  check->add_option("--element", o.element, "Restrict to one critical element");
  check->add_option("--depth", o.depth, "Largest |alpha|");
  check->add_option("--tol", o.tol, "Residual threshold (default 1e-8)");
  check->add_option("--seed", o.seed, "Seed of the probe forms");
  check->callback([&] { action = lab::run_states_check; });

  auto* quiver = app.add_subcommand("quiver", "Order structure of the critical elements");
  quiver->require_subcommand(1);
  auto* hasse = quiver->add_subcommand("hasse", "Hasse diagram as an edge list");
  hasse->add_option("model", o.model, "Model file (JSON)")->required();
  output_flags(hasse, o);
  hasse->callback([&] { action = lab::run_quiver_hasse; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lab::kUsage;
  }

  try {
    return action(o);
  } catch (const lab::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return lab::kUsage;
  } catch (const ruelle::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return lab::kIo;
  } catch (const ruelle::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return lab::kSchema;
  } catch (const ruelle::OracleError& e) {
    std::cerr << "oracle error: " << e.what() << '\n';
    return lab::kMiss;
  } catch (const ruelle::Error& e) {
    std::cerr << "invariant error: " << e.what() << '\n';
    return lab::kInvariant;
  }
}
