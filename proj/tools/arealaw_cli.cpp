// arealaw: run or verify configured sweeps, list the model catalog.
//
// Exit codes: 0 all records pass, 1 some slack violated or a point failed,
// 2 configuration error, 3 I/O error.

#include "arealaw/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <unistd.h>

namespace {

// OpenBLAS picks its kernels when the library loads, so a working coretype
// found at configure time has to be in the environment before that.
void ensure_blas_coretype(char** argv) {
#ifdef AREALAW_OPENBLAS_CORETYPE
  const char* wanted = AREALAW_OPENBLAS_CORETYPE;
  if (wanted[0] == '\0' || std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
  setenv("OPENBLAS_CORETYPE", wanted, 1);
  execv("/proc/self/exe", argv);  // only returns on failure; carry on with the default kernels
#else
  (void)argv;
#endif
}

std::string worst_slack(const arealaw::ResultRecord& r) {
  const arealaw::Entry* worst = nullptr;
  for (const auto& s : r.slacks)
    if (!worst || !(s.value >= worst->value)) worst = &s;
  if (!worst) return "";
  std::ostringstream os;
  os.precision(6);
  os << worst->name << '=' << worst->value;
  return os.str();
}

void print_verdicts(const std::vector<arealaw::ResultRecord>& records) {
  std::size_t passed = 0;
  for (const auto& r : records) {
    passed += r.pass;
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.suite << ' ' << r.model;
    if (r.beta) std::cout << " beta=" << *r.beta;
    if (r.window) std::cout << " window=" << r.window;
    if (!r.region.empty()) std::cout << " region=" << r.region;
    const auto w = worst_slack(r);
    if (!w.empty()) std::cout << " min " << w;
    for (const auto& f : r.flags)
      if (!r.pass || arealaw::is_hard_flag(f)) std::cout << " [" << f << ']';
    std::cout << '\n';
  }
  std::cout << passed << '/' << records.size() << " records pass\n";
}

void print_models() {
  for (const auto& e : arealaw::model_catalog()) {
    std::cout << e.name << " (" << arealaw::to_string(e.statistics) << ")  params:";
    for (const auto& p : e.parameters) std::cout << ' ' << p;
    std::cout << "\n  H = " << e.hamiltonian << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  ensure_blas_coretype(argv);

  CLI::App app{"Thermal area-law verification on finite chains"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out_path;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  bool bits = false;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "Write records to PATH instead of stdout");
  app.add_option("--threads", threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Override the config seed");
  app.add_flag("--bits", bits, "Report entropies in bits");

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run a config and emit every record");
  run_cmd->add_option("config", config_path, "YAML config")->required();
  run_cmd->fallthrough();
  auto* verify_cmd = app.add_subcommand("verify", "Run a config and print one verdict per record");
  verify_cmd->add_option("config", config_path, "YAML config")->required();
  verify_cmd->fallthrough();
  auto* models_cmd = app.add_subcommand("models", "List the model catalog");
  models_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*models_cmd) {
    print_models();
    return 0;
  }

  try {
    arealaw::ExperimentConfig cfg = arealaw::load_config(config_path);
    if (seed) cfg.seed = *seed;
    const auto records = arealaw::run(cfg, {threads});
    const arealaw::EmitOptions opt{bits};
    const auto fmt = format == "json" ? arealaw::Format::Json : arealaw::Format::Csv;
    if (*verify_cmd) {
      print_verdicts(records);
      if (!out_path.empty()) arealaw::emit(records, fmt, out_path, opt);
    } else if (!out_path.empty()) {
      arealaw::emit(records, fmt, out_path, opt);
    } else if (fmt == arealaw::Format::Json) {
      arealaw::emit_json(records, std::cout, opt);
    } else {
      arealaw::emit_csv(records, std::cout, opt);
    }
    return arealaw::exit_code(records);
  } catch (const arealaw::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const arealaw::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
