#include "oneshot/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "oneshot/distillation.hpp"
#include "oneshot/error.hpp"
#include "oneshot/io.hpp"
#include "oneshot/metrics.hpp"
#include "oneshot/oracles.hpp"
#include "oneshot/smoothing.hpp"
#include "oneshot/spectrum.hpp"

namespace oneshot {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::vector<std::string> states;
  std::string ensemble;
  std::vector<double> eps{0.0};
  std::uint64_t seed = 1;
  double grid = 0.0;  // 0: command default
  int n_max = 5;
  double tol = 0.05;
  double gamma_min = -8.0;
  double gamma_max = 2.0;
  int budget = 200;
  int trials = 1000;
  bool lemma_variant = false;
  std::string out;
  std::string format = "json";
};

json number(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

struct Row {
  std::string quantity;
  double eps = 0.0;
  std::map<std::string, double> eps_derived;
  double lower = 0.0;
  double upper = 0.0;
  std::string kind = "exact";
  std::string method;
  std::vector<std::string> warnings;
  std::optional<json> witness;  // written next to --out
  std::string witness_path;
};

class Report {
 public:
  Report(std::string command, const std::vector<std::string>& args, const Options& opt)
      : command_(std::move(command)), args_(args), opt_(opt) {}

  void add(Row row) { rows_.push_back(std::move(row)); }
  void extra(const std::string& key, json value) { extra_[key] = std::move(value); }

  json finish(double seconds) {
    assign_witness_paths();
    json results = json::array();
    for (const Row& r : rows_) {
      json derived = json::object();
      for (const auto& [k, v] : r.eps_derived) derived[k] = number(v);
      json row{{"quantity", r.quantity}, {"eps", r.eps},      {"eps_derived", derived},
               {"lower", number(r.lower)}, {"upper", number(r.upper)}, {"kind", r.kind}};
      if (!r.method.empty()) row["method"] = r.method;
      if (!r.warnings.empty()) row["warnings"] = r.warnings;
      if (!r.witness_path.empty()) row["witness_path"] = r.witness_path;
      results.push_back(std::move(row));
    }
    json report{{"command", command_},
                {"argv", json(std::vector<std::string>(args_.begin() + 1, args_.end()))},
                {"seed", opt_.seed},
                {"eps", opt_.eps},
                {"results", std::move(results)}};
    for (auto& [k, v] : extra_.items()) report[k] = v;
    report["timing"] = {{"wall_seconds", seconds}};
    report["determinism_hash"] = hex(determinism_hash(report));
    return report;
  }

  void write(const json& report) const {
    if (opt_.out.empty()) return;
    for (const Row& r : rows_)
      if (r.witness) write_json_file(r.witness_path, *r.witness);
    if (opt_.format == "csv") {
      std::ofstream f(opt_.out);
      if (!f) fail(ErrorCode::io_error, "cannot write " + opt_.out);
      f << "quantity,eps,eps_derived,lower,upper,witness_path\n";
      for (const Row& r : rows_) {
        std::string derived;
        for (const auto& [k, v] : r.eps_derived) derived += (derived.empty() ? "" : ";") + k + "=" + format_double(v);
        f << r.quantity << ',' << format_double(r.eps) << ',' << derived << ',' << format_double(r.lower) << ','
          << format_double(r.upper) << ',' << r.witness_path << '\n';
      }
    } else {
      write_json_file(opt_.out, report);
    }
  }

  void summary(std::ostream& out, const json& report) const {
    out << command_ << '\n';
    out << std::left << std::setw(34) << "quantity" << std::setw(8) << "eps" << std::setw(16) << "lower"
        << std::setw(16) << "upper" << "kind\n";
    for (const Row& r : rows_) {
      out << std::left << std::setw(34) << r.quantity << std::setw(8) << format_double(r.eps) << std::setw(16)
          << format_double(r.lower) << std::setw(16) << format_double(r.upper) << r.kind << '\n';
      for (const std::string& w : r.warnings) out << "  warning: " << w << '\n';
    }
    out << "determinism_hash: " << report["determinism_hash"].get<std::string>() << '\n';
  }

 private:
  static std::string hex(std::uint64_t h) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
  }

  static std::string format_double(double x) {
    std::ostringstream s;
    s << std::setprecision(10) << x;
    return s.str();
  }

  void assign_witness_paths() {
    if (opt_.out.empty()) return;
    const fs::path base(opt_.out);
    int index = 0;
    for (Row& r : rows_) {
      if (!r.witness) continue;
      const std::string name = base.stem().string() + ".witness" + std::to_string(index++) + "." + r.quantity + ".json";
      r.witness_path = (base.parent_path() / name).string();
    }
  }

  std::string command_;
  const std::vector<std::string>& args_;
  const Options& opt_;
  std::vector<Row> rows_;
  json extra_ = json::object();
};

const char* kind_name(SmoothedKind k) {
  switch (k) {
    case SmoothedKind::exact: return "exact";
    case SmoothedKind::lower_bound: return "lower_bound";
    case SmoothedKind::upper_bound: return "upper_bound";
  }
  return "exact";
}

void require_states(const Options& opt, std::size_t lo, std::size_t hi) {
  require(opt.states.size() >= lo && opt.states.size() <= hi, ErrorCode::invalid_argument,
          "expected " + std::to_string(lo) + (lo == hi ? "" : " to " + std::to_string(hi)) + " --state files, got " +
              std::to_string(opt.states.size()));
}

void validate_eps(const Options& opt) {
  require(!opt.eps.empty(), ErrorCode::invalid_argument, "at least one --eps is required");
  for (double e : opt.eps)
    require(e >= 0.0 && e <= 1.0, ErrorCode::invalid_argument, "--eps values must lie in [0, 1]");
}

Row exact_row(std::string quantity, double value) {
  Row r;
  r.quantity = std::move(quantity);
  r.lower = r.upper = value;
  return r;
}

void run_measure(const Options& opt, Report& report) {
  require_states(opt, 1, 2);
  const StateFile sf = parse_state_file(opt.states[0]);
  const DensityMatrix rho = as_density(sf.state);
  report.add(exact_row("von_neumann_entropy", von_neumann_entropy(rho).value));
  if (!rho.subnormalized()) report.add(exact_row("min_entropy", min_entropy(rho).value));
  if (rho.subsystem_count() == 2) {
    report.add(exact_row("coherent_information", coherent_information(rho).value));
    report.add(exact_row("zero_coherent_information", zero_coherent_information(rho).value));
    if (!rho.subnormalized()) report.add(exact_row("asymptotic_reference", asymptotic_reference(rho)));
  }
  if (opt.states.size() == 2) {
    const DensityMatrix sigma = as_density(parse_state_file(opt.states[1]).state);
    report.add(exact_row("fidelity", fidelity(rho, sigma)));
    report.add(exact_row("trace_distance", trace_distance(rho, sigma)));
    report.add(exact_row("relative_entropy", relative_entropy(rho, sigma).value));
  }
}

void run_smooth(const Options& opt, Report& report) {
  require_states(opt, 1, 1);
  validate_eps(opt);
  const DensityMatrix rho = as_density(parse_state_file(opt.states[0]).state);
  SearchOptions search;
  search.seed = opt.seed;
  for (double eps : opt.eps) {
    const SmoothedValue s = smooth_min_entropy(rho, eps);
    Row r = exact_row("smooth_min_entropy", s.value.value);
    r.eps = eps;
    r.witness = to_json(DensityMatrix(rho.dims(), *s.witness, false, 1e-6));
    report.add(std::move(r));
    if (rho.subsystem_count() != 2) continue;

    const SmoothedValue reduced = smooth_min_entropy(partial_trace(rho, 0), eps);
    Row ra = exact_row("smooth_min_entropy_A", reduced.value.value);
    ra.eps = eps;
    report.add(std::move(ra));

    const SmoothedValue st = state_smoothed_I0(rho, eps, search);
    Row rs;
    rs.quantity = "state_smoothed_I0";
    rs.eps = eps;
    rs.kind = kind_name(st.kind);
    rs.lower = st.value.value;
    rs.upper = st.kind == SmoothedKind::exact ? st.value.value : std::numeric_limits<double>::infinity();
    if (st.witness) rs.witness = to_json(DensityMatrix(rho.dims(), *st.witness, false, 1e-6));
    report.add(std::move(rs));

    const OperatorSmoothedBounds op = op_smoothed_I0(rho, eps, search);
    Row ro;
    ro.quantity = "op_smoothed_I0";
    ro.eps = eps;
    ro.eps_derived = {{"two_sqrt_eps", 2.0 * std::sqrt(eps)}};
    ro.kind = op.upper ? "bracket" : "lower_bound";
    ro.lower = op.lower.value.value;
    ro.upper = op.upper ? op.upper->value.value : std::numeric_limits<double>::infinity();
    if (!op.upper) ro.warnings.push_back("upper bound not computed for mixed states at eps > 0");
    report.add(std::move(ro));
  }
}

void run_distill_pure(const Options& opt, Report& report) {
  require_states(opt, 1, 1);
  validate_eps(opt);
  const StateFile sf = parse_state_file(opt.states[0]);
  const auto* phi = std::get_if<PureState>(&sf.state);
  require(phi != nullptr, ErrorCode::invalid_argument, "distill-pure needs a pure state file");
  const UpperBoundVariant variant =
      opt.lemma_variant ? UpperBoundVariant::without_correction : UpperBoundVariant::with_correction;
  for (double eps : opt.eps) {
    const BoundReport b = ed_pure_bounds(*phi, eps, variant);
    Row r;
    r.quantity = "distillable_entanglement";
    r.eps = eps;
    r.eps_derived = b.eps_derived;
    r.lower = b.lower;
    r.upper = b.upper;
    r.kind = "bracket";
    r.method = b.method;
    r.warnings = b.warnings;
    r.witness = to_json(PureState::normalized(phi->dims(), eigh(*b.witness_state).vectors.col(0)));
    report.add(std::move(r));
    Row h = exact_row("hashing_bound", hashing_bound_pure(*phi, eps));
    h.eps = eps;
    h.eps_derived = {{"eps_over_8", eps / 8.0}};
    h.kind = "lower_bound";
    report.add(std::move(h));
  }
}

void run_distill_ensemble(const Options& opt, Report& report) {
  require(!opt.ensemble.empty(), ErrorCode::invalid_argument, "distill-ensemble needs --ensemble");
  validate_eps(opt);
  const PureEnsemble e = parse_ensemble_file(opt.ensemble);
  report.add(exact_row("f_min", f_min(e)));
  for (double eps : opt.eps) {
    BoundReport b = ed_ensemble_bounds(e, eps);
    Row r;
    r.quantity = "ensemble_distillation";
    r.eps = eps;
    r.eps_derived = b.eps_derived;
    r.lower = b.lower;
    r.upper = b.upper;
    r.kind = "bracket";
    r.method = b.method;
    r.warnings = b.warnings;
    r.witness = to_json(*b.lower_witness);
    report.add(std::move(r));
    Row q = exact_row("qc_smoothed_I0", qc_smoothed_I0(e, eps / 2.0));
    q.eps = eps;
    q.eps_derived = {{"eps_prime", eps / 2.0}};
    q.kind = "unfloored";
    report.add(std::move(q));
  }
}

void run_eoa(const Options& opt, Report& report) {
  require_states(opt, 1, 1);
  validate_eps(opt);
  require(opt.budget > 0, ErrorCode::invalid_argument, "--budget must be positive");
  const DensityMatrix rho = as_density(parse_state_file(opt.states[0]).state);
  DecompositionOptions search;
  search.restarts = opt.budget;
  search.seed = opt.seed;
  for (double eps : opt.eps) {
    BoundReport b = eoa_one_shot(rho, eps, search);
    Row r;
    r.quantity = "one_shot_eoa";
    r.eps = eps;
    r.eps_derived = b.eps_derived;
    r.lower = b.lower;
    r.upper = b.upper;
    r.kind = "lower_bound_with_reference_ceiling";
    r.method = b.method;
    r.warnings = b.warnings;
    r.witness = to_json(*b.lower_witness);
    report.add(std::move(r));
  }
  EntropicEoa ent = entropic_eoa(rho, search);
  Row r;
  r.quantity = "entropic_eoa";
  r.lower = ent.value;
  r.upper = asymptotic_reference(rho);
  r.kind = "lower_bound_with_reference_ceiling";
  r.witness = to_json(ent.witness);
  report.add(std::move(r));
}

void run_spectrum(const Options& opt, Report& report) {
  require_states(opt, 2, 2);
  const DensityMatrix rho = as_density(parse_state_file(opt.states[0]).state);
  const DensityMatrix sigma = as_density(parse_state_file(opt.states[1]).state);
  GammaGrid grid{opt.gamma_min, opt.gamma_max, opt.grid > 0.0 ? opt.grid : 0.01};
  const SpectrumEstimate est = inf_divergence_rate_estimate(rho, sigma, opt.n_max, opt.tol, grid);
  for (std::size_t i = 0; i < est.n_values.size(); ++i) {
    Row r;
    r.quantity = "rate_estimate_n" + std::to_string(est.n_values[i]);
    r.eps = opt.tol;
    r.kind = est.rate_estimate[i] ? "grid_estimate" : "no_grid_point";
    r.lower = r.upper = est.rate_estimate[i].value_or(-std::numeric_limits<double>::infinity());
    report.add(std::move(r));
  }
  report.add(exact_row("relative_entropy", relative_entropy(rho, sigma).value));
  json curves = json::array();
  for (std::size_t i = 0; i < est.n_values.size(); ++i)
    curves.push_back({{"n", est.n_values[i]}, {"values", est.curves[i]}});
  report.extra("spectrum", {{"gammas", est.gammas}, {"tol", est.tol}, {"curves", std::move(curves)}});
}

int run_verify(const Options& opt, Report& report) {
  OracleConfig cfg;
  cfg.seed = opt.seed;
  const LemmaReport lemmas = verify_lemma_suite(opt.trials, opt.seed, cfg);
  json checks = json::array();
  for (const LemmaCheck& c : lemmas.checks) {
    Row r;
    r.quantity = c.name;
    r.lower = c.min_slack;
    r.upper = c.max_violation;
    r.kind = c.violations == 0 ? "holds" : "violated";
    report.add(std::move(r));
    checks.push_back({{"name", c.name},
                      {"trials", c.trials},
                      {"violations", c.violations},
                      {"max_violation", c.max_violation},
                      {"min_slack", number(c.min_slack)},
                      {"mean_slack", c.mean_slack}});
  }
  report.extra("lemma_suite", {{"trials", opt.trials}, {"violation_tol", lemmas.violation_tol}, {"checks", checks}});
  return lemmas.passed() ? exit_ok : exit_violation;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--eps", opt.eps, "theorem-level smoothing parameter (repeatable)");
  sub->add_option("--seed", opt.seed, "random seed");
  sub->add_option("--out", opt.out, "report path; witnesses are written next to it");
  sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

std::uint64_t determinism_hash(const json& report) {
  json copy = report;
  copy.erase("timing");
  copy.erase("determinism_hash");
  const std::string text = copy.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"one-shot entanglement distillation quantities", args.empty() ? "oneshot" : args[0]};
  app.require_subcommand(1);

  auto* measure = app.add_subcommand("measure", "entropies and distances of a state (second --state: sigma)");
  measure->add_option("--state", opt.states, "state file")->required();
  add_common(measure, opt);

  auto* smooth = app.add_subcommand("smooth", "smoothed min-entropy and smoothed zero-coherent information");
  smooth->add_option("--state", opt.states, "state file")->required();
  add_common(smooth, opt);

  auto* pure = app.add_subcommand("distill-pure", "one-shot distillable entanglement of a pure state");
  pure->add_option("--state", opt.states, "pure state file")->required();
  pure->add_flag("--lemma-variant", opt.lemma_variant, "drop the -log2(1 - 2 sqrt(eps)) term from the upper bound");
  add_common(pure, opt);

  auto* ens = app.add_subcommand("distill-ensemble", "distillation bounds for a pure-state ensemble");
  ens->add_option("--ensemble", opt.ensemble, "ensemble file")->required();
  add_common(ens, opt);

  auto* eoa = app.add_subcommand("eoa", "one-shot and entropic entanglement of assistance");
  eoa->add_option("--state", opt.states, "state file")->required();
  eoa->add_option("--budget", opt.budget, "search restarts");
  add_common(eoa, opt);

  auto* spectrum = app.add_subcommand("spectrum", "spectral inf-divergence diagnostics of rho (first --state) vs sigma");
  spectrum->add_option("--state", opt.states, "rho then sigma")->required();
  spectrum->add_option("--n-max", opt.n_max, "largest tensor power");
  spectrum->add_option("--tol", opt.tol, "threshold: diagnostic >= 1 - tol");
  spectrum->add_option("--grid", opt.grid, "gamma grid step (default 0.01)");
  spectrum->add_option("--gamma-min", opt.gamma_min, "first gamma");
  spectrum->add_option("--gamma-max", opt.gamma_max, "last gamma");
  add_common(spectrum, opt);

  auto* verify = app.add_subcommand("verify", "randomized inequality suite");
  verify->add_option("--trials", opt.trials, "fixtures per inequality");
  add_common(verify, opt);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_input_error;
  }

  CLI::App* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  try {
    Report report(sub->get_name(), args, opt);
    int code = exit_ok;
    if (sub == measure) run_measure(opt, report);
    else if (sub == smooth) run_smooth(opt, report);
    else if (sub == pure) run_distill_pure(opt, report);
    else if (sub == ens) run_distill_ensemble(opt, report);
    else if (sub == eoa) run_eoa(opt, report);
    else if (sub == spectrum) run_spectrum(opt, report);
    else code = run_verify(opt, report);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const json doc = report.finish(seconds);
    report.write(doc);
    report.summary(out, doc);
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::infeasible ? exit_infeasible : exit_input_error;
  }
}

}  // namespace oneshot
