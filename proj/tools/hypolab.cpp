#include <hypolab/cli/commands.hpp>

#include <CLI11.hpp>

using namespace hypolab;

namespace {

struct RunFlags
{
  std::string config;
  std::vector<std::string> set;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::size_t> n_paths;
  std::string out;
  std::string run_id;

  void attach(CLI::App* app)
  {
    app->add_option("--set", set, "Override a config key: section.key=value (repeatable)");
    app->add_option("--seed", seed, "RNG seed (mandatory unless the config sets ensemble.seed)");
    app->add_option("--workers", workers, "Worker threads (HYPOLAB_WORKERS otherwise)");
    app->add_option("--n-paths", n_paths, "Number of Monte-Carlo paths");
    app->add_option("--out", out, "Results directory");
    app->add_option("--run-id", run_id, "Run directory name");
  }

  std::vector<std::string> overrides() const
  {
    auto o = set;
    if (seed) o.push_back("ensemble.seed=" + std::to_string(*seed));
    if (workers) o.push_back("ensemble.workers=" + std::to_string(*workers));
    if (n_paths) o.push_back("ensemble.n_paths=" + std::to_string(*n_paths));
    if (!out.empty()) o.push_back("run.out=" + out);
    if (!run_id.empty()) o.push_back("run.run_id=" + run_id);
    return o;
  }
};

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"hypolab: hypocoercive models, drift certificates and decay experiments"};
  app.require_subcommand(1);

  auto* models_cmd = app.add_subcommand("models", "List the model catalog with default parameters");

  auto* algebra = app.add_subcommand("algebra", "Symbolic checks");
  algebra->require_subcommand(1);
  auto* verify = algebra->add_subcommand("verify", "Check every registered identity of a model (--<param> value ...)");
  std::string verify_model;
  verify->add_option("model", verify_model)->required();
  verify->allow_extras();

  auto* lyap = app.add_subcommand("lyapunov", "Drift certificate for bs, langevin, htype or langevin-lattice (--<param> value ...)");
  std::string lyap_target;
  lyap->add_option("target", lyap_target)->required();
  lyap->allow_extras();

  auto* sim = app.add_subcommand("simulate", "Run an ensemble and dump checkpoint states");
  RunFlags sim_flags;
  sim->add_option("--config", sim_flags.config, "INI config file")->required();
  sim_flags.attach(sim);

  auto* exp = app.add_subcommand("experiment", "Run a decay experiment and write its verdict");
  std::string exp_id;
  RunFlags exp_flags;
  exp->add_option("id", exp_id)->required()->check(CLI::IsMember(decaylab::experiment_ids()));
  exp->add_option("--config", exp_flags.config, "INI config file");
  exp_flags.attach(exp);

  auto* report = app.add_subcommand("report", "Summarize the verdicts under a results directory");
  std::string report_dir, report_csv;
  report->add_option("dir", report_dir)->required();
  report->add_option("--csv", report_csv, "Summary CSV path (default <dir>/summary.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }

  std::string invocation;
  for (int i = 0; i < argc; ++i) invocation += (i ? " " : "") + std::string(argv[i]);

  try {
    if (*models_cmd) return cli::cmd_models(std::cout);
    if (*verify) return cli::cmd_algebra_verify(verify_model, cli::parse_param_args(verify->remaining()), std::cout, std::cerr);
    if (*lyap) return cli::cmd_lyapunov(lyap_target, cli::parse_param_args(lyap->remaining()), std::cout, std::cerr);
    if (*sim) {
      const auto rc = cli::resolve(cli::Command::simulate, "", cli::read_ini(sim_flags.config), sim_flags.overrides());
      return cli::cmd_simulate(rc, invocation, std::cout, std::cerr);
    }
    if (*exp) {
      const boost::property_tree::ptree file = exp_flags.config.empty() ? boost::property_tree::ptree{} : cli::read_ini(exp_flags.config);
      const auto rc = cli::resolve(cli::Command::experiment, exp_id, file, exp_flags.overrides());
      return cli::cmd_experiment(rc, invocation, std::cout, std::cerr);
    }
    if (*report) return cli::cmd_report(report_dir, report_csv, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }
  return cli::kExitUsage;
}
