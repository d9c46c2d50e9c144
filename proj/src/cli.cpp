#include "zcnet/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "zcnet/drivers.hpp"
#include "zcnet/io.hpp"
#include "zcnet/numeric.hpp"
#include "zcnet/structural.hpp"

namespace zcnet {

namespace {

/// Verify passes when at least this fraction of trials agrees.
constexpr double kAgreementThreshold = 0.95;

struct Options {
  std::string file;
  std::string format = "text";
  std::string b_mode = "per-driver";
  std::string drivers;
  Index trials = 100;
  std::uint64_t seed = kDefaultSeed;
  double tol = kEigenTol;
  bool enumerate = false;
  Index limit = 100;
  std::string x0 = "random";
  Index horizon = 0;
  Index exact_cap = kDefaultExactCap;
  bool controllability = false;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

StateSet parse_drivers(const std::string& text, Index n) {
  StateSet out;
  for (const std::string& name : split_list(text)) {
    Vertex v;
    try {
      v = parse_vertex(name);
    } catch (const std::invalid_argument& ex) {
      throw UsageError(ex.what());
    }
    if (v.kind != VertexKind::State || v.index >= n) {
      throw UsageError("driver '" + name + "' is not a state vertex of this system");
    }
    out.push_back(v.index);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BMode b_mode_of(const Options& opt) {
  try {
    return parse_b_mode(opt.b_mode);
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
}

/// Input pattern in effect: the file's B, or the one induced by --drivers.
std::optional<PatternMatrix> effective_b(const PatternFile& file, const Options& opt) {
  if (opt.drivers.empty()) return file.b;
  const BPattern b = build_b_pattern(file.n(), parse_drivers(opt.drivers, file.n()), b_mode_of(opt));
  if (b.pattern.cols() == 0) return std::nullopt;
  return b.pattern;
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::ostringstream out;
  out << std::setprecision(10) << "[";
  for (Eigen::Index k = 0; k < v.size(); ++k) out << (k ? ", " : "") << v(k);
  return out.str() + "]";
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

int cmd_analyze(const PatternFile& file, const Options& opt, std::ostream& out) {
  const auto b = effective_b(file, opt);
  const ZcReport report = is_generically_zero_controllable(file.a, b);
  const SccDecomposition scc = scc_decompose(SystemGraph(file.a, b));
  const Index nu = compute_nu(file.a);
  const bool nilpotent = is_structurally_nilpotent(file.a);
  std::optional<ControllabilityCertificate> ctrl;
  if (b) ctrl = is_generically_controllable(file.a, *b);

  if (opt.format == "json") {
    nlohmann::json doc = to_json(report);
    doc["n"] = file.n();
    doc["m"] = b ? b->cols() : 0;
    doc["nu"] = nu;
    doc["structurally_nilpotent"] = nilpotent;
    doc["scc"] = to_json(scc);
    if (ctrl) {
      doc["generically_controllable"] = ctrl->controllable;
      doc["generic_rank_AB"] = ctrl->generic_rank;
    }
    out << doc.dump(2) << "\n";
  } else {
    out << "n = " << file.n() << ", m = " << (b ? b->cols() : 0) << "\n";
    out << "nu(A) = " << nu << (nilpotent ? " (structurally nilpotent)" : "") << "\n";
    out << "components:";
    for (Index c = 0; c < scc.size(); ++c) {
      out << " C" << c + 1 << "={";
      for (Index k = 0; k < scc.component(c).size(); ++k) {
        out << (k ? "," : "") << vertex_name(Vertex::state(scc.component(c)[k]));
      }
      out << "}" << (scc.is_nontrivial(c) ? "*" : "");
    }
    out << "  (* nontrivial)\n";
    if (ctrl) {
      out << "generically controllable: " << (ctrl->controllable ? "yes" : "no");
      if (ctrl->failure == ControllabilityCertificate::Failure::Unreachable) {
        out << " (not every state is reachable from the inputs)";
      } else if (ctrl->failure == ControllabilityCertificate::Failure::RankDeficient) {
        out << " (generic rank of [A B] is " << ctrl->generic_rank << " < n)";
      }
      out << "\n";
    }
    out << render_text(report);
  }
  return report.verdict ? kExitOk : kExitNegative;
}

int cmd_select(const PatternFile& file, const Options& opt, std::ostream& out) {
  const BMode mode = b_mode_of(opt);
  if (opt.limit == 0) throw UsageError("--limit must be at least 1");
  const DriverSet best = minimal_driver_set(file.a, opt.exact_cap);
  const DriverSet greedy = greedy_driver_set(file.a);
  std::vector<DriverSet> all;
  if (opt.enumerate) all = enumerate_minimal_driver_sets(file.a, opt.limit, opt.exact_cap);
  const BPattern b = build_b_pattern(file.n(), best.drivers, mode);

  if (opt.format == "json") {
    nlohmann::json doc{{"kind", "driver_selection"},
                       {"minimum", to_json(best)},
                       {"greedy", to_json(greedy)},
                       {"b_mode", to_string(mode)},
                       {"b_pattern", to_json(b.pattern, 'b')}};
    if (opt.enumerate) {
      nlohmann::json list = nlohmann::json::array();
      for (const DriverSet& d : all) list.push_back(to_json(d));
      doc["enumerated"] = list;
    }
    out << doc.dump(2) << "\n";
  } else {
    out << "minimum driver set:\n" << render_text(best);
    out << "greedy driver set:\n" << render_text(greedy);
    if (opt.enumerate) {
      out << "all minimum driver sets (" << all.size() << "):\n";
      for (const DriverSet& d : all) out << render_text(d);
    }
    out << "B (" << to_string(mode) << ", " << b.pattern.rows() << "x" << b.pattern.cols()
        << "):\n"
        << render_text(b.pattern);
  }
  return kExitOk;
}

int cmd_verify(const PatternFile& file, const Options& opt, std::ostream& out) {
  if (opt.trials == 0) throw UsageError("--trials must be at least 1");
  if (!(opt.tol > 0.0)) throw UsageError("--tol must be positive");
  MonteCarloOptions mc;
  mc.trials = opt.trials;
  mc.base_seed = opt.seed;
  mc.tol = opt.tol;
  mc.check_controllability = opt.controllability;
  const MonteCarloStats stats = monte_carlo_verify(file.a, effective_b(file, opt), mc);
  const bool agreed = stats.zc_agreement() >= kAgreementThreshold;

  if (opt.format == "json") {
    nlohmann::json doc = to_json(stats);
    doc["agreement_threshold"] = kAgreementThreshold;
    doc["agreement_passed"] = agreed;
    out << doc.dump(2) << "\n";
  } else {
    out << render_text(stats);
    out << "agreement threshold " << kAgreementThreshold << ": " << (agreed ? "passed" : "FAILED")
        << "\n";
  }
  return stats.structural_zc && agreed ? kExitOk : kExitNegative;
}

int cmd_simulate(const PatternFile& file, const Options& opt, std::ostream& out) {
  const auto b = effective_b(file, opt);
  const Realization r = sample_realization(file.a, b, opt.seed);
  const Index n = file.n();
  const Index horizon = opt.horizon ? opt.horizon : std::max<Index>(n, 1);

  Eigen::VectorXd x0(n);
  if (opt.x0 == "random") {
    std::mt19937_64 rng(~opt.seed);
    std::normal_distribution<double> normal;
    for (Index k = 0; k < n; ++k) x0(k) = normal(rng);
    if (x0.norm() > 0) x0.normalize();
  } else {
    const auto items = split_list(opt.x0);
    if (items.size() != n) {
      throw UsageError("--x0 needs " + std::to_string(n) + " values, got " +
                       std::to_string(items.size()));
    }
    for (Index k = 0; k < n; ++k) {
      try {
        std::size_t used = 0;
        x0(k) = std::stod(items[k], &used);
        if (used != items[k].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw UsageError("--x0: '" + items[k] + "' is not a number");
      }
    }
  }

  const SteeringResult s = deadbeat_steer(r, x0, horizon);
  const double identity = trajectory_identity_residual(r, s);
  if (opt.format == "json") {
    nlohmann::json controls = nlohmann::json::array();
    for (const auto& u : s.controls) controls.push_back(vector_json(u));
    nlohmann::json traj = nlohmann::json::array();
    for (const auto& x : s.trajectory) traj.push_back(vector_json(x));
    out << nlohmann::json{{"kind", "deadbeat_steering"},
                          {"seed", opt.seed},
                          {"horizon", s.horizon},
                          {"x0", vector_json(x0)},
                          {"controls", controls},
                          {"trajectory", traj},
                          {"final_norm", s.final_norm},
                          {"identity_residual", identity}}
                .dump(2)
        << "\n";
  } else {
    out << "horizon " << s.horizon << ", realization seed " << opt.seed << "\n";
    out << "x(0) = " << format_vector(x0) << "\n";
    for (Index k = 0; k < s.horizon; ++k) {
      out << "u(" << k << ") = " << format_vector(s.controls[k]) << "\n";
    }
    out << "x(" << s.horizon << ") = " << format_vector(s.trajectory.back()) << "\n";
    out << "final norm: " << std::setprecision(6) << s.final_norm << "\n";
    out << "trajectory identity residual: " << identity << "\n";
  }
  return kExitOk;
}

int cmd_export_dot(const PatternFile& file, const Options& opt, std::ostream& out) {
  if (!opt.drivers.empty()) {
    const SystemGraph graph(file.a);
    const DriverSet d = validate_driver_set(file.a, parse_drivers(opt.drivers, file.n()));
    out << export_dot(graph, scc_decompose(graph), d);
  } else {
    const SystemGraph graph(file.a, file.b);
    out << export_dot(graph, scc_decompose(graph), is_generically_zero_controllable(file.a, file.b));
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generic zero controllability of structured discrete-time systems", "zcnet"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", opt.file, "pattern file")->required();
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto add_drivers = [&](CLI::App* sub) {
    sub->add_option("--drivers", opt.drivers, "driver nodes replacing B, e.g. x4,x8");
    sub->add_option("--b-mode", opt.b_mode, "shared|per-driver")
        ->check(CLI::IsMember({"shared", "per-driver"}));
  };

  auto* analyze = app.add_subcommand("analyze", "structural zero-controllability verdict");
  add_common(analyze);
  add_drivers(analyze);

  auto* select = app.add_subcommand("select", "minimal and greedy driver node sets");
  add_common(select);
  select->add_option("--b-mode", opt.b_mode, "shared|per-driver")
      ->check(CLI::IsMember({"shared", "per-driver"}));
  select->add_flag("--enumerate", opt.enumerate, "list every minimum driver set");
  select->add_option("--limit", opt.limit, "enumeration limit");
  select->add_option("--exact-cap", opt.exact_cap, "largest candidate count for exact search");

  auto* verify = app.add_subcommand("verify", "Monte Carlo check on random realizations");
  add_common(verify);
  add_drivers(verify);
  verify->add_option("--trials", opt.trials, "number of realizations");
  verify->add_option("--seed", opt.seed, "base seed; trial i uses seed+i");
  verify->add_option("--tol", opt.tol, "eigenvalue threshold");
  verify->add_flag("--controllability", opt.controllability, "also check controllability");

  auto* simulate = app.add_subcommand("simulate", "deadbeat steering of one realization");
  add_common(simulate);
  add_drivers(simulate);
  simulate->add_option("--seed", opt.seed, "realization seed");
  simulate->add_option("--x0", opt.x0, "initial state: comma list or 'random'");
  simulate->add_option("--horizon", opt.horizon, "steps (default n)");

  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering");
  dot->add_option("file", opt.file, "pattern file")->required();
  dot->add_option("--drivers", opt.drivers, "mark a driver set instead of the file's inputs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "zcnet: " << ex.what() << "\n" << app.help();
    return kExitUsage;
  }

  std::ostringstream buffer;
  try {
    const PatternFile file = read_pattern_file(opt.file);
    for (const auto& w : file.warnings) err << "zcnet: warning: " << w << "\n";

    int code = kExitOk;
    if (*analyze) code = cmd_analyze(file, opt, buffer);
    else if (*select) code = cmd_select(file, opt, buffer);
    else if (*verify) code = cmd_verify(file, opt, buffer);
    else if (*simulate) code = cmd_simulate(file, opt, buffer);
    else code = cmd_export_dot(file, opt, buffer);
    out << buffer.str();
    return code;
  } catch (const std::exception& ex) {
    err << "zcnet: " << opt.file << ": " << ex.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace zcnet
