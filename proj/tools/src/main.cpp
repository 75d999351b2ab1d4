#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sectorial/cli/config.hpp"
#include "sectorial/cli/io.hpp"
#include "sectorial/cli/run.hpp"
#include "sectorial/cli/selftest.hpp"
#include "sectorial/error.hpp"

namespace cli = sectorial::cli;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int refine = 0;
  bool inject_fault = false;
};

void report_error(const std::string& kind, const std::string& name, const std::string& message) {
  nlohmann::json e = {{"error", kind}, {"message", message}};
  if (!name.empty()) e["name"] = name;
  std::cerr << e.dump() << '\n';
}

void emit(const std::string& out, const std::string& text, const std::string& csv) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  cli::write_atomic(out, text);
  if (!csv.empty()) cli::write_atomic(cli::csv_path_for(out), csv);
}

int run_experiment(const std::string& command, const Flags& f) {
  const cli::ExperimentConfig cfg = cli::parse_config(cli::read_file(f.config), command, f.seed, f.refine);
  const cli::Report r = cli::run(cfg);
  emit(f.out, r.document.dump(2) + "\n", r.csv);
  return cli::exit_ok;
}

int run_selftest(const Flags& f) {
  cli::SelftestOptions o;
  if (f.seed) o.seed = *f.seed;
  if (f.inject_fault) o.weight_perturbation = 1e-3;
  const cli::SelftestReport r = cli::selftest(o);
  std::cout << cli::format_table(r);
  if (!f.out.empty()) cli::write_atomic(f.out, cli::to_json(r, o).dump(2) + "\n");
  return r.passed() ? cli::exit_ok : cli::exit_selftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sectorial operator experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cli::library_version()));

  Flags flags;
  std::string chosen;
  for (const char* name : {"fcalc", "rbound", "angles", "hinf", "sum", "maxreg", "gt"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", flags.config, "JSON experiment config")->required();
    sub->add_option("--out", flags.out, "report path (JSON); curves go next to it as CSV");
    sub->add_option("--seed", flags.seed, "seed overriding the config");
    sub->add_option("--refine", flags.refine, "extra refinement levels")->check(CLI::NonNegativeNumber);
    sub->callback([&chosen, name] { chosen = name; });
  }
  CLI::App* st = app.add_subcommand("selftest", "run the built-in example and oracle suite");
  st->add_option("--out", flags.out, "JSON report path");
  st->add_option("--seed", flags.seed, "seed for randomized cases");
  st->add_flag("--inject-fault", flags.inject_fault, "perturb quadrature weights by 1e-3");
  st->callback([&chosen] { chosen = "selftest"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::exit_config;
  }

  try {
    if (chosen == "selftest") return run_selftest(flags);
    return run_experiment(chosen, flags);
  } catch (const cli::ConfigError& e) {
    report_error("ConfigError", "", e.what());
    return cli::exit_config;
  } catch (const sectorial::Error& e) {
    report_error("DomainError", std::string(e.name()), e.what());
    return cli::exit_domain;
  } catch (const cli::IoError& e) {
    report_error("IoError", "", e.what());
    return cli::exit_io;
  }
}
