#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hrde/acceptance.hpp"
#include "hrde/analysis.hpp"
#include "hrde/csv.hpp"
#include "hrde/harness.hpp"
#include "hrde/hires_ode.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCertificate = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw hrde::ConfigError(flag + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw hrde::ConfigError(flag + ": empty list");
  return out;
}

std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  return p.is_relative() ? hrde::default_output_root() / p : p;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

int cmd_run(const std::string& config_path, const std::string& out_root) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw hrde::ConfigError("cannot read config '" + config_path + "'");
  std::stringstream text;
  text << in.rdbuf();
  const hrde::ExperimentConfig cfg = hrde::parse_config(text.str());
  const auto result = out_root.empty() ? hrde::execute(cfg) : hrde::execute(cfg, out_root);
  for (const auto& line : result.lines) std::cout << line.key << ": " << line.value << '\n';
  std::cout << "output: " << result.directory.string() << '\n';
  return result.passed ? kExitPass : kExitCertificate;
}

int cmd_suite(const std::string& name, const std::string& out) {
  if (name == "figures") {
    for (const auto& p : hrde::write_figures(resolve_out(out.empty() ? "figures" : out)))
      std::cout << p.string() << '\n';
    return kExitPass;
  }
  int failed = 0;
  for (const auto& r : hrde::run_acceptance_suite()) {
    failed += r.passed ? 0 : 1;
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.title << ": " << r.detail
              << '\n';
    for (const auto& n : r.notes) std::cout << "       note: " << n << '\n';
  }
  return failed ? kExitCertificate : kExitPass;
}

struct OdeArgs {
  std::string objective = "quad";
  std::string spectrum;
  std::uint64_t rotation_seed = 0;
  double s = 0.0;
  double T = 0.0;
  double h = 0.0;
  std::string x0;
  std::string form = "simplified";
  std::string out;
};

int cmd_ode(const OdeArgs& a) {
  hrde::ObjectiveSpec spec;
  spec.id = a.objective;
  if (a.objective != "quad" && a.objective != "quad-rot")
    throw hrde::ConfigError("--objective: expected quad or quad-rot");
  spec.spectrum = parse_list(a.spectrum, "--spectrum");
  if (a.objective == "quad-rot") spec.rotation_seed = a.rotation_seed;
  const hrde::Objective f = hrde::make_objective(spec);
  if (!(a.s > 0.0)) throw hrde::ConfigError("--s: must be positive");
  if (!(a.T > 0.0)) throw hrde::ConfigError("--T: must be positive");
  const double h = a.h > 0.0 ? a.h : hrde::default_ode_step(a.s);
  hrde::Vector x0 = hrde::Vector::Ones(f.dim());
  if (!a.x0.empty()) {
    const auto v = parse_list(a.x0, "--x0");
    if (static_cast<int>(v.size()) != f.dim()) throw hrde::ConfigError("--x0: wrong dimension");
    x0 = Eigen::Map<const hrde::Vector>(v.data(), f.dim());
  }
  hrde::OdeForm form;
  try {
    form = hrde::parse_ode_form(a.form);
  } catch (const std::invalid_argument& e) {
    throw hrde::ConfigError(std::string("--form: ") + e.what());
  }
  const auto sol = hrde::integrate(f, x0, a.s, a.T, h, form);
  if (!a.out.empty()) {
    std::ostringstream text;
    hrde::csv::write_ode_solution(text, sol, f, a.s, f.mu());
    write_text(resolve_out(a.out), text.str());
  }
  std::cout << "samples: " << sol.size() << '\n'
            << "h: " << hrde::csv::format_double(h) << '\n'
            << "final_f_gap: " << hrde::csv::format_double(f.gap(sol.back().X)) << '\n';
  if (form != hrde::OdeForm::simplified) return kExitPass;
  const auto rep = hrde::check_continuous_bound(sol, f, a.s, f.mu());
  std::cout << "bound_violations: " << rep.bound.failures << '\n'
            << "decay_violations: " << rep.decay.failures << '\n'
            << "decay_max_ratio: " << hrde::csv::format_double(rep.max_ratio) << '\n';
  return rep.bound.passed() && rep.decay.passed() ? kExitPass : kExitCertificate;
}

int cmd_scan(double mu, const std::string& spectrum, const std::string& s_grid, std::size_t K,
             const std::string& out) {
  const hrde::SpectrumSpec spec(parse_list(spectrum, "--spectrum"));
  if (!(mu > 0.0) || mu > spec.min()) throw hrde::ConfigError("--mu: must be in (0, min eigenvalue]");
  const auto report = hrde::monotonicity_scan(mu, spec, parse_list(s_grid, "--s-grid"), K);
  std::ostringstream text;
  hrde::csv::write_monotonicity(text, report);
  if (out.empty())
    std::cout << text.str();
  else
    write_text(resolve_out(out), text.str());
  for (const auto& st : report.steps)
    std::cout << "s=" << hrde::csv::format_double(st.s)
              << " predicted_monotone=" << (st.predicted_monotone ? "true" : "false")
              << " observed_monotone=" << (st.observed_monotone ? "true" : "false") << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hrde: accelerated gradient schemes, Lyapunov certificates and experiments"};
  app.require_subcommand(1);

  std::string config_path, out_root;
  auto* run = app.add_subcommand("run", "Run one experiment from a JSON config");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--out-root", out_root, "Root for relative output paths");

  std::string suite_name, suite_out;
  auto* suite = app.add_subcommand("suite", "Run the acceptance suite or write the figure CSVs");
  suite->add_option("name", suite_name)->required()->check(CLI::IsMember({"acceptance", "figures"}));
  suite->add_option("--out", suite_out, "Figure directory");

  OdeArgs ode_args;
  auto* ode = app.add_subcommand("ode", "Integrate the implicit-velocity ODE with RK4");
  ode->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  ode->add_option("--objective", ode_args.objective)->check(CLI::IsMember({"quad", "quad-rot"}));
  ode->add_option("--spectrum", ode_args.spectrum, "Comma-separated eigenvalues")->required();
  ode->add_option("--rotation-seed", ode_args.rotation_seed);
  ode->add_option("--s", ode_args.s)->required();
  ode->add_option("--T", ode_args.T)->required();
  ode->add_option("--h", ode_args.h, "Step; default min(1e-3, sqrt(s)/10)");
  ode->add_option("--x0", ode_args.x0, "Comma-separated start; default all ones");
  ode->add_option("--form", ode_args.form)->check(CLI::IsMember({"simplified", "original"}));
  ode->add_option("--out", ode_args.out, "CSV path");

  double scan_mu = 0.0;
  std::string scan_spectrum, scan_grid, scan_out;
  std::size_t scan_K = 500;
  auto* scan = app.add_subcommand("scan", "Monotonicity scan of the gradient-correction scheme");
  scan->add_option("--mu", scan_mu)->required();
  scan->add_option("--spectrum", scan_spectrum)->required();
  scan->add_option("--s-grid", scan_grid)->required();
  scan->add_option("--K", scan_K);
  scan->add_option("--out", scan_out, "CSV path; stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*run) return cmd_run(config_path, out_root);
    if (*suite) return cmd_suite(suite_name, suite_out);
    if (*ode) return cmd_ode(ode_args);
    if (*scan) return cmd_scan(scan_mu, scan_spectrum, scan_grid, scan_K, scan_out);
  } catch (const hrde::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
