// llull: tally ballots or Llull matrices into fraction-like rates.
//
// Exit codes: 0 success, 1 usage or other error, 2 input could not be
// parsed, 3 solver failure, 4 selfcheck found violations.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <future>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "llull/io.hpp"

using namespace llull;
using nlohmann::json;

namespace {

enum class Format { kJson, kCsv, kText };

struct CliConfig {
  std::vector<std::string> inputs;
  std::string in_kind = "auto";
  std::string format = "json";
  std::optional<double> tol;
  std::size_t max_iter = 100000;
  std::string ties = "half";
  std::size_t jobs = 1;
  std::uint64_t seed = 1;
  std::string trace_path;
  bool trace = false;
};

struct Input {
  LlullMatrix matrix;
  std::optional<BallotSet> ballots;
};

struct Failure {
  int exit_code;
  std::string message;
};

struct Result {
  std::string output;
  int exit_code = 0;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{1, path + ": cannot read file"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Input load(const std::string& path, const CliConfig& cfg) {
  const std::string text = read_text(path);
  bool ballots = false;
  if (cfg.in_kind == "ballots") {
    ballots = true;
  } else if (cfg.in_kind == "auto") {
    ballots = sniff_input_kind(text) == InputKind::kBallots;
  }
  if (ballots) {
    auto b = parse_ballots(text);
    auto m = aggregate(b, parse_tie_policy(cfg.ties));
    return {std::move(m), std::move(b)};
  }
  return {parse_matrix(text), std::nullopt};
}

RatesConfig rates_config(const CliConfig& cfg) {
  RatesConfig r;
  r.solver.tol = cfg.tol.value_or(1e-12);
  r.solver.max_iter = cfg.max_iter;
  r.solver.record_trace = cfg.trace;
  return r;
}

Format format_of(const CliConfig& cfg) {
  if (cfg.format == "csv") return Format::kCsv;
  if (cfg.format == "text") return Format::kText;
  return Format::kJson;
}

std::string text_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string table(const OptionSet& options, const std::vector<std::string>& headers,
                  const std::vector<std::vector<std::string>>& columns) {
  std::size_t w = 6;
  for (const auto& l : options.labels()) w = std::max(w, l.size());
  std::ostringstream out;
  out << std::left << std::setw(int(w)) << "option";
  for (const auto& h : headers) out << "  " << std::setw(18) << h;
  out << "\n";
  for (std::size_t i = 0; i < options.size(); ++i) {
    out << std::setw(int(w)) << options.label(i);
    for (const auto& c : columns) out << "  " << std::setw(18) << c[i];
    out << "\n";
  }
  return out.str();
}

std::vector<std::string> texts(const std::vector<double>& xs) {
  std::vector<std::string> out;
  for (double x : xs) out.push_back(text_number(x));
  return out;
}

std::string join(const OptionSet& o, std::span<const OptionIndex> s, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? sep : "") + o.label(s[i]);
  return out;
}

std::string matrix_text(const LlullMatrix& m) {
  std::vector<std::vector<std::string>> cols;
  for (std::size_t y = 0; y < m.size(); ++y) {
    std::vector<std::string> c;
    for (std::size_t x = 0; x < m.size(); ++x) c.push_back(x == y ? "-" : text_number(m(x, y)));
    cols.push_back(c);
  }
  return table(m.options(), m.options().labels(), cols);
}

void write_trace(const CliConfig& cfg, const SolveDiagnostics& d) {
  if (cfg.trace_path.empty()) return;
  std::ofstream out(cfg.trace_path, std::ios::binary);
  if (!out) throw Failure{1, cfg.trace_path + ": cannot write trace"};
  out << trace_csv(d);
}

std::string cmd_tally(const Input& in, const CliConfig& cfg) {
  const auto r = fraction_like_rates(in.matrix, rates_config(cfg));
  write_trace(cfg, r.diagnostics);
  switch (format_of(cfg)) {
    case Format::kCsv: return rates_csv(r);
    case Format::kText: {
      std::string out = table(r.fraction.options, {"fraction", "rank_like"},
                              {texts(r.fraction.values), texts(r.rank_like.values)});
      for (const auto& w : r.warnings) out += "warning: " + w + "\n";
      return out;
    }
    default: return to_json(r).dump(2) + "\n";
  }
}

std::string cmd_analyze(const Input& in, const CliConfig& cfg) {
  const auto& o = in.matrix.options();
  const auto r = analyze(in.matrix);
  switch (format_of(cfg)) {
    case Format::kCsv: {
      std::string out = "option,component\n";
      for (std::size_t x = 0; x < o.size(); ++x) {
        out += o.label(x) + "," + std::to_string(r.component_of[x]) + "\n";
      }
      return out;
    }
    case Format::kText: {
      std::ostringstream out;
      out << "irreducible: " << (r.irreducible() ? "true" : "false") << "\n";
      for (std::size_t c = 0; c < r.components.size(); ++c) {
        out << "component " << c << ": {" << join(o, r.components[c], ", ") << "}\n";
      }
      for (const auto& [a, b] : r.dominance) out << "dominates: " << a << " -> " << b << "\n";
      out << "top dominant: "
          << (r.top_dominant ? std::to_string(*r.top_dominant) : std::string("none")) << "\n";
      out << "admissible order: " << (r.order ? join(o, *r.order, " > ") : "none") << "\n";
      if (r.clc) {
        out << "clc: " << (r.clc->ok() ? "pass" : "fail")
            << " (pairwise " << r.clc->pairwise << ", max_chain " << r.clc->max_chain
            << ", min_chain " << r.clc->min_chain << ", turnout_margin "
            << r.clc->turnout_margin << ")\n";
      }
      return out.str();
    }
    default: return to_json(r, o).dump(2) + "\n";
  }
}

std::string cmd_project(const Input& in, const CliConfig& cfg) {
  const auto p = clc_project(in.matrix);
  switch (format_of(cfg)) {
    case Format::kCsv: return matrix_csv(p.matrix);
    case Format::kText:
      return "order: " + join(p.matrix.options(), p.order, " > ") +
             (p.fixed_point ? " (unchanged)\n" : "\n") + matrix_text(p.matrix);
    default: return to_json(p).dump(2) + "\n";
  }
}

std::string cmd_strengths(const Input& in, const CliConfig& cfg) {
  const auto s = solve(in.matrix, rates_config(cfg).solver);
  write_trace(cfg, s.diagnostics);
  switch (format_of(cfg)) {
    case Format::kCsv: {
      std::string out = "option,phi\n";
      for (std::size_t i = 0; i < s.strengths.size(); ++i) {
        out += s.strengths.options.label(i) + "," + format_number(s.strengths[i]) + "\n";
      }
      return out;
    }
    case Format::kText:
      return table(s.strengths.options, {"phi"}, {texts(s.strengths.phi)}) +
             "iterations: " + std::to_string(s.diagnostics.iterations) +
             ", residual: " + text_number(s.diagnostics.residual) + "\n";
    default: return to_json(s).dump(2) + "\n";
  }
}

std::string cmd_compare(const Input& in, const CliConfig& cfg) {
  const auto r = fraction_like_rates(in.matrix, rates_config(cfg));
  const auto rho = mean_preference_scores(in.matrix);
  std::optional<RateVector> eig;
  std::string why;
  try {
    eig = eigenvector_rates(in.matrix);
  } catch (const Error& e) {
    why = e.what();
  }
  const auto& o = in.matrix.options();
  switch (format_of(cfg)) {
    case Format::kCsv: {
      std::string out = "option,fraction,mean_score,rank_like,eigenvector\n";
      for (std::size_t i = 0; i < o.size(); ++i) {
        out += o.label(i) + "," + format_number(r.fraction[i]) + "," + format_number(rho[i]) +
               "," + format_number(r.rank_like[i]) + "," +
               (eig ? format_number((*eig)[i]) : std::string()) + "\n";
      }
      return out;
    }
    case Format::kText: {
      std::vector<std::string> ev(o.size(), "unavailable");
      if (eig) ev = texts(eig->values);
      return table(o, {"fraction", "mean_score", "rank_like", "eigenvector"},
                   {texts(r.fraction.values), texts(rho.values), texts(r.rank_like.values), ev});
    }
    default: {
      json out{{"options", o.labels()},
               {"fraction", r.fraction.values},
               {"mean_score", rho.values},
               {"rank_like", r.rank_like.values},
               {"eigenvector", nullptr},
               {"warnings", r.warnings}};
      if (eig) {
        out["eigenvector"] = eig->values;
      } else {
        out["eigenvector_unavailable"] = why;
      }
      return out.dump(2) + "\n";
    }
  }
}

Result cmd_selfcheck(const Input& in, const CliConfig& cfg) {
  const auto rc = rates_config(cfg);
  const auto r = fraction_like_rates(in.matrix, rc);
  std::vector<std::pair<std::string, CheckReport>> checks;
  checks.emplace_back("projection", verify_projection(in.matrix, r.projection));

  CheckReport dist;
  dist.checked.push_back("distribution");
  double sum = 0;
  for (double f : r.fraction.values) {
    sum += f;
    if (f < 0) dist.fail("distribution", "negative rate");
  }
  if (std::abs(sum - 1) > 1e-10) dist.fail("distribution", "rates sum to " + format_number(sum));
  checks.emplace_back("distribution", dist);
  checks.emplace_back("compatibility",
                      check_compatibility(r.projection, {in.matrix.options(), r.fraction.values, {}}));

  // Random improvements of a random option.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0, 1);
  const std::size_t n = in.matrix.size();
  CheckReport mono;
  mono.checked.push_back("stays_below");
  for (int trial = 0; trial < 5 && n > 1; ++trial) {
    const OptionIndex a = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    SquareArray v = in.matrix.scores();
    for (OptionIndex y = 0; y < n; ++y) {
      if (y == a) continue;
      v(a, y) += u(rng) * (1 - v(a, y) - v(y, a));
      v(y, a) *= u(rng);
    }
    const auto step = check_monotonicity(in.matrix, LlullMatrix(in.matrix.options(), v), a, rc);
    for (const auto& f : step.violations) mono.fail(f.check, f.detail);
  }
  checks.emplace_back("monotonicity", mono);

  if (in.ballots) checks.emplace_back("decomposition", check_decomposition(*in.ballots, r, rc));

  bool ok = true;
  for (const auto& [name, c] : checks) ok = ok && c.ok();
  std::string out;
  switch (format_of(cfg)) {
    case Format::kCsv:
      out = "check,ok,violations\n";
      for (const auto& [name, c] : checks) {
        out += name + "," + (c.ok() ? "true" : "false") + "," +
               std::to_string(c.violations.size()) + "\n";
      }
      break;
    case Format::kText:
      for (const auto& [name, c] : checks) {
        out += (c.ok() ? "ok   " : "FAIL ") + name + "\n";
        for (const auto& f : c.violations) out += "     " + f.check + ": " + f.detail + "\n";
      }
      break;
    default: {
      json j{{"ok", ok}, {"checks", json::object()}};
      for (const auto& [name, c] : checks) j["checks"][name] = to_json(c);
      out = j.dump(2) + "\n";
    }
  }
  return {out, ok ? 0 : 4};
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::kSyntaxError:
    case Errc::kUnknownOption:
    case Errc::kEmptyProfile:
    case Errc::kInvalidMatrix:
      return 2;
    case Errc::kMaxIterExceeded:
    case Errc::kNotIrreducible:
    case Errc::kNoTopDominantComponent:
    case Errc::kPowerIterationDiverged:
    case Errc::kNonPositiveStrength:
      return 3;
    default:
      return 1;
  }
}

Result run_one(const std::string& command, const std::string& path, const CliConfig& cfg) {
  try {
    const Input in = load(path, cfg);
    if (command == "tally") return {cmd_tally(in, cfg)};
    if (command == "analyze") return {cmd_analyze(in, cfg)};
    if (command == "project") return {cmd_project(in, cfg)};
    if (command == "strengths") return {cmd_strengths(in, cfg)};
    if (command == "compare") return {cmd_compare(in, cfg)};
    return cmd_selfcheck(in, cfg);
  } catch (const Failure& f) {
    throw;
  } catch (const Error& e) {
    throw Failure{exit_code_for(e), path + ": " + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fraction-like rates from ballots or Llull matrices"};
  app.require_subcommand(1);
  CliConfig cfg;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"tally", "rates of the projected matrix"},
      {"analyze", "components, dominance and CLC structure"},
      {"project", "CLC projection"},
      {"strengths", "Zermelo strengths of the matrix as given"},
      {"compare", "fraction-like, mean-score, rank-like and eigenvector rates"},
      {"selfcheck", "run the property checks on the input"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--in", cfg.inputs, "input file ('-' for stdin)")->required();
    sub->add_option("--in-kind", cfg.in_kind, "auto|ballots|matrix")
        ->check(CLI::IsMember({"auto", "ballots", "matrix"}));
    sub->add_option("--format", cfg.format, "json|csv|text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--tol", cfg.tol, "solver tolerance (default 1e-12, env LLULL_TOL)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", cfg.max_iter, "solver iteration cap")
        ->check(CLI::PositiveNumber);
    sub->add_option("--ties", cfg.ties, "half|abstain")
        ->check(CLI::IsMember({"half", "abstain"}));
    sub->add_option("--jobs", cfg.jobs, "parallel inputs")->check(CLI::PositiveNumber);
    if (name == "selfcheck") sub->add_option("--seed", cfg.seed, "seed for random perturbations");
    if (name == "tally" || name == "strengths") {
      sub->add_option("--trace", cfg.trace_path, "write the iteration trace as CSV");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (!cfg.tol) {
    if (const char* env = std::getenv("LLULL_TOL")) {
      try {
        cfg.tol = std::stod(env);
      } catch (const std::exception&) {
        std::cerr << "error: LLULL_TOL is not a number\n";
        return 1;
      }
      if (!(*cfg.tol > 0)) {
        std::cerr << "error: LLULL_TOL must be positive\n";
        return 1;
      }
    }
  }
  cfg.trace = !cfg.trace_path.empty();
  if (cfg.trace && cfg.inputs.size() > 1) {
    std::cerr << "error: --trace needs a single input\n";
    return 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::vector<std::future<Result>> pending;
  std::vector<Result> done;
  std::vector<std::optional<Failure>> failures(cfg.inputs.size());
  auto task = [&](std::size_t i) {
    try {
      return run_one(command, cfg.inputs[i], cfg);
    } catch (const Failure& f) {
      failures[i] = f;
      return Result{"", f.exit_code};
    }
  };
  for (std::size_t start = 0; start < cfg.inputs.size(); start += cfg.jobs) {
    const std::size_t end = std::min(cfg.inputs.size(), start + cfg.jobs);
    for (std::size_t i = start; i < end; ++i) {
      pending.push_back(std::async(cfg.jobs > 1 ? std::launch::async : std::launch::deferred,
                                   task, i));
    }
    for (std::size_t i = start; i < end; ++i) done.push_back(pending[i].get());
  }

  int code = 0;
  for (std::size_t i = 0; i < done.size(); ++i) {
    std::cout << done[i].output;
    if (failures[i]) std::cerr << "error: " << failures[i]->message << "\n";
    if (code == 0) code = done[i].exit_code;
  }
  return code;
}
