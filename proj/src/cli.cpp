#include "ewr/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ewr/bounds.hpp"
#include "ewr/dataset.hpp"
#include "ewr/figure1.hpp"
#include "ewr/matrix_io.hpp"
#include "ewr/model.hpp"
#include "ewr/property_suite.hpp"
#include "ewr/report.hpp"
#include "ewr/unroll.hpp"

namespace ewr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
const std::vector<std::string> kCommands = {"gen", "reconstruct", "bounds", "figure1", "check"};

std::string usage() {
  return "usage: ewr <command> [options]\n"
         "commands:\n"
         "  gen          generate a synthetic dataset directory\n"
         "  reconstruct  proximal-gradient reconstruction of every sample in a dataset\n"
         "  bounds       perturbation constants and generalization bound for a dataset\n"
         "  figure1      Lipschitz lower bounds over 2x2 rotations\n"
         "  check        run the property suite\n"
         "run `ewr <command> --help` for the options of a command\n";
}

void add_common(CLI::App& app, RunConfig& c) {
  app.set_config("--config", "", "key = value file supplying option defaults");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
}

void add_gen(CLI::App& app, RunConfig& c) {
  app.add_option("--out", c.out, "output dataset directory")->required();
  app.add_option("--n", c.n, "signal length N")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--k", c.k, "number of focal measurements K")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--m", c.m, "number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--s", c.s, "nonzeros per code")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--delta", c.delta, "pseudo-Huber smoothing (default 0.1)")->check(CLI::PositiveNumber);
  app.add_option("--c-in", c.c_in, "input signal radius (default 1)")->check(CLI::PositiveNumber);
  app.add_option("--noise", c.noise, "std-dev of Gaussian intensity noise")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--weights", c.weights, "defocus, gaussian or ones")
      ->check(CLI::IsMember({"defocus", "gaussian", "ones"}))
      ->capture_default_str();
}

void add_reconstruct(CLI::App& app, RunConfig& c) {
  app.add_option("--data", c.data, "dataset directory")->required();
  app.add_option("--out", c.out, "output directory")->required();
  app.add_option("--iters", c.iters, "iterations")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--tau-scale", c.tau_scale, "step as a fraction of KN/||A||^2")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--tau", c.taus, "explicit step size (overrides --tau-scale)")->expected(1)->check(CLI::PositiveNumber);
  app.add_option("--reg", c.reg, "none or l1")->check(CLI::IsMember({"none", "l1"}))->capture_default_str();
  app.add_option("--lambda", c.lambda, "l1 weight")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--init", c.init, "spectral or fixed")->check(CLI::IsMember({"spectral", "fixed", "fixed_unit_vector"}))->capture_default_str();
  app.add_option("--nonlinearity", c.nonlinearity, "pseudo_huber or linear")
      ->check(CLI::IsMember({"pseudo_huber", "linear"}))
      ->capture_default_str();
}

void add_bounds(CLI::App& app, RunConfig& c) {
  app.add_option("--data", c.data, "dataset directory")->required();
  app.add_option("--out", c.out, "output JSON file (default: stdout)");
  app.add_option("--depth", c.depth, "number of stages L")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--tau-scale", c.tau_scale, "constant step as a fraction of KN/||A||^2")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--taus", c.taus, "explicit step sizes, one per stage (overrides --depth/--tau-scale)")->check(CLI::PositiveNumber);
  app.add_option("--alpha", c.alpha, "confidence level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app.add_option("--c-in", c.c_in, "input radius (default: the dataset's)")->check(CLI::PositiveNumber);
  app.add_option("--c-out", c.c_out, "output clip radius (default: C_in)")->check(CLI::PositiveNumber);
  app.add_option("--nonlinearity", c.nonlinearity, "pseudo_huber or linear")
      ->check(CLI::IsMember({"pseudo_huber", "linear"}))
      ->capture_default_str();
  app.add_flag("--lenient", c.lenient, "report a step-size bound violation instead of failing");
}

void add_figure1(CLI::App& app, RunConfig& c) {
  app.add_option("--out", c.out, "output CSV (default: stdout); a .json sidecar is written next to it");
  app.add_option("--l-max", c.l_max, "largest depth")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--grid", c.grid, "grid points per angle")->check(CLI::Range(2, 4096))->capture_default_str();
  app.add_option("--refine", c.refine, "golden-section rounds")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--inner", c.inner, "golden-section steps per coordinate")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--delta", c.delta, "pseudo-Huber smoothing (default 0.1)")->check(CLI::PositiveNumber);
  app.add_option("--tau-scale", c.tau_scale, "step as a fraction of KN/||A||^2")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--g-seed", c.g_seed, "seed of the fixed measurement")->capture_default_str();
  app.add_option("--lambda", c.lambda, "l1 weight (0 = no regularizer)")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_flag("--general-u2", c.general_u2, "search all of U(2) instead of rotations");
  app.add_option("--search-seed", c.search_seed, "seed of the random pairs in U(2) mode")->capture_default_str();
}

void add_check(CLI::App& app, RunConfig& c) {
  app.add_option("--out", c.out, "output JSON report");
  app.add_option("--trials", c.trials, "base trial count")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_flag("--inject-fault", c.inject_fault, "double every step size in the nonexpansiveness checks");
  app.add_option("--only", c.only, "run only entries with these name prefixes");
  app.add_option("--skip", c.skip, "skip entries with these name prefixes");
}

// --------------------------------------------------------------- helpers

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << text;
  if (!os) throw IoError("write failed: " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json provenance(const RunConfig& c) {
  json cfg;
  if (c.command == "gen") {
    cfg = {{"seed", c.seed}, {"n", c.n}, {"k", c.k}, {"m", c.m}, {"s", c.s}, {"delta", c.delta.value_or(0.1)},
           {"c-in", c.c_in.value_or(1.0)}, {"noise", c.noise}, {"weights", c.weights}};
  } else if (c.command == "reconstruct") {
    cfg = {{"data", c.data}, {"iters", c.iters}, {"tau-scale", c.tau_scale}, {"tau", c.taus}, {"reg", c.reg},
           {"lambda", c.lambda}, {"init", c.init}, {"nonlinearity", c.nonlinearity}};
  } else if (c.command == "bounds") {
    cfg = {{"data", c.data}, {"depth", c.depth}, {"tau-scale", c.tau_scale}, {"taus", c.taus}, {"alpha", c.alpha},
           {"c-in", c.c_in ? json(*c.c_in) : json(nullptr)}, {"c-out", c.c_out ? json(*c.c_out) : json(nullptr)},
           {"nonlinearity", c.nonlinearity}, {"lenient", c.lenient}};
  } else if (c.command == "figure1") {
    cfg = {{"l-max", c.l_max}, {"grid", c.grid}, {"refine", c.refine}, {"inner", c.inner},
           {"delta", c.delta.value_or(0.1)}, {"tau-scale", c.tau_scale}, {"g-seed", c.g_seed}, {"lambda", c.lambda},
           {"general-u2", c.general_u2}, {"search-seed", c.search_seed}};
  } else {
    cfg = {{"seed", c.seed}, {"trials", c.trials}, {"inject-fault", c.inject_fault}, {"only", c.only}, {"skip", c.skip}};
  }
  return {{"tool", "ewr"},
          {"version", kVersion},
          {"command", c.command},
          {"config", cfg},
          {"dft_convention", MeasurementEnsemble::dft_convention}};
}

// --------------------------------------------------------------- commands

int cmd_gen(const RunConfig& c, std::ostream& out) {
  DatasetParams p;
  p.n = c.n;
  p.k = c.k;
  p.m = c.m;
  p.s = c.s;
  p.delta = c.delta.value_or(0.1);
  p.c_in = c.c_in.value_or(1.0);
  p.noise = c.noise;
  p.weights = parse_weight_kind(c.weights);
  const Dataset d = generate_dataset(p, c.seed);
  save_dataset(d, c.out);
  write_text((fs::path(c.out) / "provenance.json").string(), dump(provenance(c)));
  out << "wrote dataset N=" << p.n << " K=" << p.k << " m=" << p.m << " s=" << p.s << " to " << c.out << '\n';
  return kExitOk;
}

double phase_aligned_error(const CVector& est, const CVector& truth) {
  const cplx ip = est.dot(truth);
  const cplx ph = std::abs(ip) > 0.0 ? ip / std::abs(ip) : cplx(1.0, 0.0);
  const double tn = truth.norm();
  return (ph * est - truth).norm() / (tn > 0.0 ? tn : 1.0);
}

int cmd_reconstruct(const RunConfig& c, std::ostream& out) {
  const Dataset d = load_dataset(c.data);
  const MeasurementEnsemble e = d.ensemble();
  PgaOptions o;
  o.tau = c.taus.empty() ? c.tau_scale * max_step(e) : c.taus.front();
  o.reg = c.reg == "l1" ? Regularizer::l1(c.lambda) : Regularizer::none();
  o.nl = nonlinearity_variant(c.nonlinearity, d.params.delta);
  o.init = parse_init_mode(c.init);
  o.max_iters = c.iters;

  CMatrix psi_hat(d.params.n, d.params.m);
  std::ostringstream trace;
  trace << "column,iter,objective\n";
  json cols = json::array();
  for (Index j = 0; j < d.params.m; ++j) {
    const PgaResult r = pga_reconstruct(e, RVector(d.g.col(j)), d.phi0, o);
    psi_hat.col(j) = r.psi;
    for (std::size_t it = 0; it < r.objective.size(); ++it)
      trace << j << ',' << it << ',' << format_double(r.objective[it]) << '\n';
    const double dt = data_term(e, r.psi, RVector(d.g.col(j)), o.nl);
    const double err = phase_aligned_error(r.psi, CVector(d.psi.col(j)));
    cols.push_back({{"column", j},
                    {"initial_objective", r.objective.front()},
                    {"final_objective", r.objective.back()},
                    {"data_term", dt},
                    {"relative_error_up_to_phase", err},
                    {"assumption1_ok", r.assumption1_ok},
                    {"init_fell_back", r.init_fell_back}});
    out << "column " << j << ": D = " << format_double(dt) << ", relative error " << format_double(err) << '\n';
  }
  const fs::path root(c.out);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create directory " + c.out + ": " + ec.message());
  save_matrix((root / "psi_hat").string(), psi_hat);
  write_text((root / "trace.csv").string(), trace.str());
  json rep = {{"provenance", provenance(c)}, {"tau", o.tau}, {"max_step", max_step(e)}, {"columns", cols}};
  write_text((root / "report.json").string(), dump(rep));
  return kExitOk;
}

int cmd_bounds(const RunConfig& c, std::ostream& out) {
  const Dataset d = load_dataset(c.data);
  const MeasurementEnsemble e = d.ensemble();
  std::vector<double> taus = c.taus;
  if (taus.empty()) taus.assign(static_cast<std::size_t>(c.depth), c.tau_scale * max_step(e));
  BoundInputs in = BoundInputs::from(e, d.g, taus, d.params.delta);
  in.c_in = c.c_in.value_or(d.params.c_in);
  in.c_out = c.c_out.value_or(in.c_in);
  in.alpha = c.alpha;
  in.nonlinearity = c.nonlinearity == "linear" ? NonlinearityKind::linear : NonlinearityKind::pseudo_huber;
  const BoundReport r = bound_constants(in, !c.lenient);
  const std::string text = dump({{"provenance", provenance(c)}, {"report", to_json(r)}});
  if (c.out.empty())
    out << text;
  else
    write_text(c.out, text);
  return kExitOk;
}

int cmd_figure1(const RunConfig& c, std::ostream& out) {
  const MeasurementEnsemble e = MeasurementEnsemble::from_rows(CMatrix::Ones(1, 2));
  Figure1Options o;
  o.l_max = c.l_max;
  o.delta = c.delta.value_or(0.1);
  o.reg = c.lambda > 0.0 ? Regularizer::l1(c.lambda) : Regularizer::none();
  o.tau_scale = c.tau_scale;
  o.grid = c.grid;
  o.refine = c.refine;
  o.inner = c.inner;
  o.general_u2 = c.general_u2;
  o.search_seed = c.search_seed;
  const Figure1Result r = figure1(e, figure1_measurement(c.g_seed), o);
  const std::string csv = figure1_csv(r);
  if (c.out.empty()) {
    out << csv;
  } else {
    write_text(c.out, csv);
    write_text(c.out + ".json", dump({{"provenance", provenance(c)}, {"result", to_json(r)}}));
  }
  return kExitOk;
}

int cmd_check(const RunConfig& c, std::ostream& out) {
  SuiteOptions o;
  o.seed = c.seed;
  o.trials = c.trials;
  o.tau_factor = c.inject_fault ? 2.0 : 1.0;
  o.only = c.only;
  o.skip = c.skip;
  const PropertyReport rep = property_suite(o);
  for (const auto& e : rep.entries) {
    out << (e.passed ? "PASS " : "FAIL ") << e.name << "  worst=" << format_double(e.worst)
        << " tol=" << format_double(e.tolerance) << " trials=" << e.trials << " failures=" << e.failures;
    if (!e.detail.empty()) out << "  (" << e.detail << ')';
    out << '\n';
  }
  if (!c.out.empty()) write_text(c.out, dump({{"provenance", provenance(c)}, {"report", to_json(rep)}}));
  return rep.all_passed() ? kExitOk : kExitPropertyFailure;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty() || args[0] == "-h" || args[0] == "--help") throw CliError(args.empty() ? kExitUsage : kExitOk, usage());
  RunConfig c;
  c.command = args[0];
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
    throw CliError(kExitUsage, "unknown command '" + c.command + "'\n" + usage());

  CLI::App app("ewr " + c.command, "ewr " + c.command);
  add_common(app, c);
  if (c.command == "gen") add_gen(app, c);
  if (c.command == "reconstruct") add_reconstruct(app, c);
  if (c.command == "bounds") add_bounds(app, c);
  if (c.command == "figure1") add_figure1(app, c);
  if (c.command == "check") add_check(app, c);

  std::vector<const char*> argv;
  argv.push_back("ewr");
  for (std::size_t i = 1; i < args.size(); ++i) argv.push_back(args[i].c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw CliError(kExitOk, app.help());
  } catch (const CLI::RequiredError& ex) {
    throw CliError(kExitPath, ex.what());
  } catch (const CLI::ValidationError& ex) {
    throw CliError(kExitValidation, ex.what());
  } catch (const CLI::ConversionError& ex) {
    throw CliError(kExitValidation, ex.what());
  } catch (const CLI::FileError& ex) {
    throw CliError(kExitPath, ex.what());
  } catch (const CLI::ParseError& ex) {
    throw CliError(kExitUsage, ex.what());
  }
  if (c.command == "gen" && c.s > c.n) throw CliError(kExitValidation, "--s must not exceed --n");
  return c;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.command == "gen") return cmd_gen(cfg, out);
  if (cfg.command == "reconstruct") return cmd_reconstruct(cfg, out);
  if (cfg.command == "bounds") return cmd_bounds(cfg, out);
  if (cfg.command == "figure1") return cmd_figure1(cfg, out);
  if (cfg.command == "check") return cmd_check(cfg, out);
  throw CliError(kExitUsage, "unknown command '" + cfg.command + "'");
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(parse_config(args), out, err);
  } catch (const CliError& ex) {
    (ex.code() == kExitOk ? out : err) << ex.what() << (ex.code() == kExitOk ? "" : "\n");
    return ex.code();
  } catch (const AssumptionViolation& ex) {
    err << "assumption violated: " << ex.what() << '\n';
    return kExitAssumption;
  } catch (const ValidationError& ex) {
    err << "invalid input: " << ex.what() << '\n';
    return kExitValidation;
  } catch (const IoError& ex) {
    err << "i/o error: " << ex.what() << '\n';
    return kExitPath;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace ewr
