// entropy-dg: experiment driver for the entropy stable DG library.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

#include "esdg/harness/config.hpp"
#include "esdg/harness/experiments.hpp"

namespace {

std::string list_experiments() {
  std::ostringstream os;
  for (const auto& e : esdg::harness::experiment_names()) os << "  " << e << "\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace esdg::harness;
  CLI::App app{"Entropy stable discontinuous Galerkin experiments.\n\nExperiments:\n" + list_experiments()};
  std::string experiment, config, N, K, cfl, flux, quad, out;
  int threads = 0;
  bool dump = false;
  app.add_option("experiment", experiment, "experiment to run")->required();
  app.add_option("--config", config, "key = value configuration file");
  app.add_option("--N", N, "polynomial degrees, e.g. 1..5 or 2,3");
  app.add_option("--K", K, "element counts (1D) or quadrilaterals per direction (2D)");
  app.add_option("--cfl", cfl, "CFL number(s)");
  app.add_option("--flux", flux, "ec or eclf");
  app.add_option("--quad", quad, "gll, gauss1, gauss2 or tri2n");
  app.add_option("--out", out, "output directory (default results)");
  app.add_option("--threads", threads, "worker threads; 1 is deterministic");
  app.add_flag("--dump", dump, "ops-check: write operator matrices");
  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentSpec spec = config.empty() ? default_spec(experiment) : parse_config_file(config, experiment);
    // Command-line flags override the file.
    if (!N.empty()) apply_setting(spec, "N", N);
    if (!K.empty()) apply_setting(spec, "K", K);
    if (!cfl.empty()) apply_setting(spec, "cfl", cfl);
    if (!flux.empty()) apply_setting(spec, "flux", flux);
    if (!quad.empty()) apply_setting(spec, "quad", quad);
    if (!out.empty()) apply_setting(spec, "out", out);
    if (threads != 0) apply_setting(spec, "threads", std::to_string(threads));
    if (dump) spec.dump = true;
    validate(spec);

    const Outcome o = run_experiment(spec);
    for (const auto& line : o.log) std::cout << line << "\n";
    std::cout << experiment << ": " << (o.exit_code == kExitOk ? "ok" : "FAILED") << " (exit " << o.exit_code << ")\n";
    return o.exit_code;
  } catch (const esdg::Error& e) {
    std::cerr << "entropy-dg: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "entropy-dg: " << e.what() << "\n";
    return kExitError;
  }
}
