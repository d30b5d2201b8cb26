// Command-line front end: edge parameters, Tracy-Widom quantile tables,
// Onatski null tables, single tests, size/power studies and diagnostics.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "twedge/config.hpp"
#include "twedge/errors.hpp"
#include "twedge/harness.hpp"
#include "twedge/matrix_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitEdge = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitOther = 1;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::string out;
  std::optional<int> threads;
};

void add_common(CLI::App* app, CommonFlags& flags) {
  app->add_option("--config", flags.config, "JSON experiment config");
  app->add_option("--seed", flags.seed, "Master seed");
  app->add_option("--reps", flags.reps, "Replications");
  app->add_option("--out", flags.out, "Output path (default: stdout)");
  app->add_option("--threads", flags.threads, "Worker threads (default: $TWEDGE_THREADS or 1)");
}

twedge::ExperimentConfig make_config(twedge::Experiment e, const CommonFlags& flags) {
  twedge::ExperimentConfig c =
      flags.config.empty() ? twedge::default_config(e) : twedge::load_config(flags.config, e);
  if (e == twedge::Experiment::onatski_null) {
    if (flags.seed) c.null_seed = *flags.seed;
    if (flags.reps) c.null_reps = *flags.reps;
  } else {
    if (flags.seed) c.seed = *flags.seed;
    if (flags.reps) c.replications = *flags.reps;
  }
  if (!flags.out.empty()) c.output = flags.out;
  if (flags.threads) c.threads = *flags.threads;
  twedge::validate(c);
  return c;
}

template <class Writer>
void emit(const twedge::ExperimentConfig& c, Writer&& write) {
  if (c.output.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw twedge::ConfigError("cannot write output file " + c.output);
  write(out);
}

int run(twedge::Experiment e, const CommonFlags& flags, const std::string& matrix_file) {
  using namespace twedge;
  const ExperimentConfig c = make_config(e, flags);
  const int threads = effective_threads(c);
  switch (e) {
    case Experiment::edge_params: {
      const auto rows = run_edge_params(c);
      emit(c, [&](std::ostream& os) { write_edge_csv(os, rows); });
      break;
    }
    case Experiment::quantile_table: {
      const auto rows = run_quantile_table(c, threads);
      emit(c, [&](std::ostream& os) { write_quantile_csv(os, rows); });
      break;
    }
    case Experiment::onatski_null: {
      const NullTable table = build_null_table(c.beta, c.null_dim, c.null_reps, c.null_seed, threads);
      if (!c.output.empty()) save_null_table(table, c.output);
      std::cout << "level,critical_value,beta,dim,reps,seed\n";
      for (double level : {0.10, 0.05, 0.01})
        std::cout << format_number(level) << ',' << format_number(critical_value(table, level)) << ','
                  << table.beta << ',' << table.meta.dim << ',' << table.meta.reps << ','
                  << table.meta.seed << '\n';
      break;
    }
    case Experiment::test_run: {
      const Eigen::MatrixXd data = read_matrix_file(matrix_file);
      const NullTable table = resolve_null_table(c, threads);
      const TestResult result = run_test(data, table, c.level);
      emit(c, [&](std::ostream& os) { write_test_result_csv(os, result); });
      break;
    }
    case Experiment::size_power: {
      const NullTable table = resolve_null_table(c, threads);
      const auto rows = run_size_power(c, table, threads);
      emit(c, [&](std::ostream& os) { write_size_power_csv(os, rows); });
      break;
    }
    case Experiment::diagnostics: {
      const auto rows = run_diagnostics(c, threads);
      emit(c, [&](std::ostream& os) { write_diagnostics_csv(os, rows); });
      break;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge statistics of general-population sample covariance matrices"};
  app.require_subcommand(1);
  CommonFlags flags;
  std::string matrix_file;
  std::optional<twedge::Experiment> chosen;

  auto add = [&](const char* name, const char* help, twedge::Experiment e) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    sub->callback([&chosen, e] { chosen = e; });
    return sub;
  };
  add("edge-params", "Edge parameters (c, lambda_r, sigma, margin) per sigma model",
      twedge::Experiment::edge_params);
  add("quantile-table", "Empirical CDF of normalized lambda_1 at Tracy-Widom quantiles",
      twedge::Experiment::quantile_table);
  add("onatski-null", "Simulate the null distribution of the Onatski ratio",
      twedge::Experiment::onatski_null);
  add("size-power", "Rejection rates of the Onatski test under null and alternatives",
      twedge::Experiment::size_power);
  add("diagnostics", "Rigidity, delocalization and trace-identity checks",
      twedge::Experiment::diagnostics);
  CLI::App* test = app.add_subcommand("test", "Hypothesis tests on data files");
  test->require_subcommand(1);
  CLI::App* test_run = test->add_subcommand("run", "Onatski test on an M x N data matrix file");
  add_common(test_run, flags);
  test_run->add_option("matrix-file", matrix_file, "Data matrix (header line 'M,N')")->required();
  test_run->callback([&chosen] { chosen = twedge::Experiment::test_run; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    return run(*chosen, flags, matrix_file);
  } catch (const twedge::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const twedge::EdgeConditionViolated& e) {
    std::cerr << "edge condition violated: " << e.what() << '\n';
    return kExitEdge;
  } catch (const twedge::NonConvergence& e) {
    std::cerr << "numerical non-convergence: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const twedge::EigenFailure& e) {
    std::cerr << "numerical non-convergence: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}
