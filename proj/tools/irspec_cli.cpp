#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "irspec/errors.hpp"
#include "irspec/parallel.hpp"

int main(int argc, char** argv) {
  using irs::cli::RunConfig;
  CLI::App app{"IR analysis of aggregators over S_m"};
  app.require_subcommand(1);
  RunConfig cfg;
  int threads = 1;

  auto common = [&](CLI::App* sub, bool with_voters) {
    sub->add_option("--m", cfg.m, "number of alternatives");
    if (with_voters) {
      sub->add_option("--n", cfg.n, "number of voters");
      sub->add_option("--partition", cfg.partition, "rank partition, e.g. \"1|2,3\" (default: singletons)");
    }
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--out", cfg.out, "write the JSON report here");
  };

  auto* spectra = app.add_subcommand("spectra", "hat L(1) spectrum and the gap of L^n");
  common(spectra, true);
  spectra->add_option("--dense-limit", cfg.dense_limit, "largest dimension solved densely");
  spectra->add_option("--samples", cfg.samples, "power-iteration restarts when not dense");

  auto* analyze = app.add_subcommand("analyze", "IR, manipulation power and robustness of one aggregator");
  common(analyze, true);
  analyze->add_option("--input", cfg.input, "aggregator JSON");
  analyze->add_option("--rule", cfg.rule,
                      "dictator:i=1,sigma=213 | constant:output=123 | plurality | borda | random | "
                      "corrupted-dictator:i=1,sigma=123,k=3");
  analyze->add_option("--orders", cfg.orders, "default | random | path to orders JSON");
  analyze->add_option("--dense-limit", cfg.dense_limit, "largest dimension solved densely");
  analyze->add_flag("--center", cfg.center, "add the dummy voter before projecting");

  auto* census = app.add_subcommand("census", "enumerate every aggregator with IR = 0");
  common(census, true);

  auto* moments = app.add_subcommand("moments", "appendix audit and hypercontractivity sweep");
  common(moments, false);
  auto* m_max = moments->add_option("--m-max", cfg.m_max, "sweep m = 4 .. m-max");
  moments->add_option("--sigma-hyper", cfg.sigma_hyper, "auto (m^-1/2) or a rational sigma");
  moments->add_option("--samples", cfg.samples, "samples per m (default 1000)");
  moments->add_option("--audit-samples", cfg.audit_samples, "random matrices in the block audit");

  CLI11_PARSE(app, argc, argv);
  irs::set_thread_count(threads);

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "moments" && sub->count("--m") == 0 && m_max->count() == 0) cfg.m_max = 12;

  try {
    nlohmann::ordered_json report;
    if (name == "spectra") report = irs::cli::cmd_spectra(cfg);
    else if (name == "analyze") report = irs::cli::cmd_analyze(cfg);
    else if (name == "census") report = irs::cli::cmd_census(cfg);
    else report = irs::cli::cmd_moments(cfg);

    const std::string text = report.dump(2) + "\n";
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out);
      if (!out) throw irs::InputError("cannot write " + cfg.out);
      out << text;
      std::cout << irs::cli::summarize(name, report) << "\n";
    }
    return 0;
  } catch (const irs::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const irs::FeasibilityError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  }
}
