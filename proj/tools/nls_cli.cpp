// nls: command-line front end.
//
//   nls sweep   (--input F | --random N --seed S | --example spin1 --beta0 B)
//               [--beta-min X --beta-max Y --steps K] [--out F] [--json]
//   nls verify  <instance source> [--beta-min/--beta-max/--steps]
//               [--suite NAME]... [--out F] [--timing]
//   nls gen     --random N --seed S [--out F]
//   nls example spin1 --beta0 B [--oracle] [--out F]
//
// Exit status: 0 success / all checks hold, 1 verification or
// certification failure, 2 usage or input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/os.h>

#include "nls/genrand.hpp"
#include "nls/instance_io.hpp"
#include "nls/spin_boson.hpp"
#include "nls/sweep.hpp"
#include "nls/verify.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SourceOptions {
  std::string input;
  std::optional<long> random_n;
  std::uint64_t seed = 0;
  std::string example;
  double beta0 = 1.0;
};

void add_source_options(CLI::App* cmd, SourceOptions& src) {
  cmd->add_option("--input", src.input, "Instance JSON file");
  cmd->add_option("--random", src.random_n, "Random Gibbs instance with N levels");
  cmd->add_option("--seed", src.seed, "Seed for --random");
  cmd->add_option("--example", src.example, "Named example (spin1)");
  cmd->add_option("--beta0", src.beta0, "Bath inverse temperature for --example");
}

nls::InstanceData spin1_instance(double beta0) {
  return {nls::spin_boson::spin1_level_system(),
          nls::spin_boson::analytic_transition_matrix(beta0).entries(), beta0};
}

nls::InstanceData resolve_source(const SourceOptions& src, std::string& descriptor) {
  const int chosen = int(!src.input.empty()) + int(src.random_n.has_value()) +
                     int(!src.example.empty());
  if (chosen != 1) {
    throw UsageError("exactly one of --input, --random or --example is required");
  }
  if (!src.input.empty()) {
    descriptor = "file " + src.input;
    return nls::load_instance(src.input);
  }
  if (src.random_n) {
    if (*src.random_n < 2) throw UsageError("--random needs at least 2 levels");
    descriptor = fmt::format("random n={} seed={}", *src.random_n, src.seed);
    const nls::RandomInstance inst = nls::random_gibbs_instance(*src.random_n, src.seed);
    return {inst.system, inst.matrix().entries(), inst.beta0()};
  }
  if (src.example != "spin1") throw UsageError(fmt::format("unknown example '{}'", src.example));
  descriptor = fmt::format("example spin1 beta0={}", src.beta0);
  return spin1_instance(src.beta0);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw nls::InputError(fmt::format("{}: cannot open for writing", out_path));
  out << text;
  if (!out) throw nls::InputError(fmt::format("{}: write failed", out_path));
}

nls::GibbsMatrix certified(const nls::InstanceData& inst) {
  const nls::CertificationReport r =
      nls::certify_gibbs_matrix(inst.transition, inst.system, inst.beta0);
  if (!r.passed || r.max_column_deviation > nls::kIdentityTol) {
    throw nls::CertificationError("certification failed: " + r.describe());
  }
  return nls::make_gibbs_matrix(nls::TransitionMatrix(inst.transition), inst.system, inst.beta0);
}

struct GridOptions {
  std::optional<double> beta_min;
  std::optional<double> beta_max;
  std::optional<int> steps;
};

void add_grid_options(CLI::App* cmd, GridOptions& grid) {
  cmd->add_option("--beta-min", grid.beta_min, "Lower end of the beta grid");
  cmd->add_option("--beta-max", grid.beta_max, "Upper end of the beta grid");
  cmd->add_option("--steps", grid.steps, "Number of grid points (>= 2)");
}

// Prints 0 rather than -0 (beta * <dQ> at beta = 0, for instance).
double unsigned_zero(double x) { return x == 0.0 ? 0.0 : x; }

int run_sweep(const SourceOptions& src, const GridOptions& grid, const std::string& out_path,
              bool as_json) {
  std::string descriptor;
  const nls::InstanceData inst = resolve_source(src, descriptor);
  const nls::GibbsMatrix g = certified(inst);
  // beta0 = 0 (pure work) has no natural scale; fall back to unit range.
  const double scale = inst.beta0 != 0.0 ? std::abs(inst.beta0) : 1.0;
  const std::vector<double> betas =
      nls::uniform_grid(grid.beta_min.value_or(-5.0 * scale), grid.beta_max.value_or(5.0 * scale),
                        grid.steps.value_or(201));
  const std::vector<nls::SweepRecord> rows = nls::sweep_parallel(g, inst.system, betas);

  std::string text;
  if (as_json) {
    text = "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      text += fmt::format(R"(  {{"beta": {:.17g}, "beta_dQ": {:.17g}, "beta0_dQ": {:.17g}, "dS": {:.17g}}}{})",
                          unsigned_zero(r.beta), unsigned_zero(r.beta_dq), unsigned_zero(r.beta0_dq),
                          unsigned_zero(r.ds), i + 1 < rows.size() ? ",\n" : "\n");
    }
    text += "]\n";
  } else {
    text = "beta,beta_dQ,beta0_dQ,dS\n";
    for (const auto& r : rows) {
      text += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", unsigned_zero(r.beta),
                          unsigned_zero(r.beta_dq), unsigned_zero(r.beta0_dq), unsigned_zero(r.ds));
    }
  }
  emit(text, out_path);

  int status = kExitPass;
  for (const auto& r : rows) {
    if (!r.ordered()) {
      std::cerr << fmt::format("nls: Clausius ordering violated at beta = {:.17g}\n", r.beta);
      status = kExitFail;
    }
  }
  return status;
}

int run_verify(const SourceOptions& src, const GridOptions& grid,
               const std::vector<std::string>& suites, const std::string& out_path, bool timing) {
  std::string descriptor;
  const nls::InstanceData inst = resolve_source(src, descriptor);
  nls::VerifyOptions options;
  options.beta_min = grid.beta_min;
  options.beta_max = grid.beta_max;
  if (grid.steps) options.steps = *grid.steps;
  for (const auto& s : suites) {
    if (s == "all") continue;
    if (!nls::kVerifySuites.contains(s)) throw UsageError(fmt::format("unknown suite '{}'", s));
    options.suites.insert(s);
  }
  const nls::VerificationReport report = nls::run_verification(inst, descriptor, options);
  emit(nls::report_to_json(report, timing), out_path);
  if (!report.pass) {
    for (const auto& c : report.checks) {
      if (!c.holds) std::cerr << "nls: check failed: " << c.label << "\n";
    }
  }
  return report.pass ? kExitPass : kExitFail;
}

int run_gen(long n, std::uint64_t seed, const std::string& out_path) {
  if (n < 2) throw UsageError("gen needs at least 2 levels");
  const nls::RandomInstance inst = nls::random_gibbs_instance(n, seed);
  emit(nls::serialize_instance({inst.system, inst.matrix().entries(), inst.beta0()}), out_path);
  return kExitPass;
}

int run_example(const std::string& name, double beta0, bool oracle, const std::string& out_path) {
  if (name != "spin1") throw UsageError(fmt::format("unknown example '{}'", name));
  const nls::InstanceData inst = spin1_instance(beta0);
  std::string text = nls::serialize_instance(inst);
  int status = kExitPass;
  if (oracle) {
    const int n_max = std::max(40, nls::spin_boson::SpinBosonParams::min_n_max(beta0));
    const nls::spin_boson::SpinBosonParams params(beta0, 1.0, n_max);
    const Eigen::MatrixXd numeric = nls::spin_boson::numerical_transition_matrix(params).entries();
    const double deviation = (numeric - inst.transition).cwiseAbs().maxCoeff();
    std::cerr << fmt::format("oracle: n_max={} lambda=1 max_abs_deviation={:.3e}\n", n_max,
                             deviation);
    if (!(deviation < 1e-8)) status = kExitFail;
  }
  emit(text, out_path);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic thermodynamics of an N-level system coupled to a heat bath"};
  app.require_subcommand(1);

  SourceOptions sweep_src;
  GridOptions sweep_grid;
  std::string sweep_out;
  bool sweep_json = false;
  auto* sweep = app.add_subcommand("sweep", "Emit beta<dQ>, beta0<dQ>, <dS> over a beta grid");
  add_source_options(sweep, sweep_src);
  add_grid_options(sweep, sweep_grid);
  sweep->add_option("--out", sweep_out, "Output file (default stdout)");
  sweep->add_flag("--json", sweep_json, "Emit JSON records instead of CSV");

  SourceOptions verify_src;
  GridOptions verify_grid;
  std::string verify_out;
  std::vector<std::string> verify_suites;
  bool verify_timing = false;
  auto* verify = app.add_subcommand("verify", "Run all checks and write a JSON report");
  add_source_options(verify, verify_src);
  add_grid_options(verify, verify_grid);
  verify->add_option("--suite", verify_suites, "jarzynski, clausius, slope, kl or all");
  verify->add_option("--out", verify_out, "Report file (default stdout)");
  verify->add_flag("--timing", verify_timing, "Include wall time in the report");
  verify->add_flag("--json", "Accepted for symmetry; reports are always JSON");

  long gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a random Gibbs instance as JSON");
  gen->add_option("-n,--random", gen_n, "Number of levels (>= 2)")->required();
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  std::string example_name;
  double example_beta0 = 1.0;
  bool example_oracle = false;
  std::string example_out;
  auto* example = app.add_subcommand("example", "Write the analytic spin-1 instance as JSON");
  example->add_option("name", example_name, "Example name (spin1)");
  example->add_option("--example", example_name, "Example name (spin1)");
  example->add_option("--beta0", example_beta0, "Bath inverse temperature (> 0)");
  example->add_flag("--oracle", example_oracle, "Compare against the numerical oracle");
  example->add_option("--out", example_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*sweep) return run_sweep(sweep_src, sweep_grid, sweep_out, sweep_json);
    if (*verify) return run_verify(verify_src, verify_grid, verify_suites, verify_out, verify_timing);
    if (*gen) return run_gen(gen_n, gen_seed, gen_out);
    if (*example) {
      if (example_name.empty()) throw UsageError("example needs a name (spin1)");
      return run_example(example_name, example_beta0, example_oracle, example_out);
    }
  } catch (const nls::CertificationError& e) {
    std::cerr << "nls: " << e.what() << "\n";
    return kExitFail;
  } catch (const UsageError& e) {
    std::cerr << "nls: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nls::Error& e) {
    std::cerr << "nls: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
