// xcsp: solve, verify, generate, score, run-track.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "xcsp/generators.hpp"
#include "xcsp/harness.hpp"
#include "xcsp/io.hpp"
#include "xcsp/search.hpp"
#include "xcsp/verifier.hpp"

namespace {

using namespace xcsp;

constexpr int kExitUnknown = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitOptimum = 30;

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::optional<Instance> load_instance(const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return std::nullopt;
  }
  auto r = parse_instance(*text);
  if (!r.ok()) {
    for (const auto& d : r.diagnostics) std::cerr << path << ":" << to_string(d) << "\n";
    return std::nullopt;
  }
  return std::move(*r.instance);
}

// --- solve -------------------------------------------------------------------

struct SolveOptions {
  std::string instance;
  double timeout = 0;
  std::string mode = "auto";
  std::string heuristic = "domwdeg";
  std::string value = "min";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> enumerate;
  bool restarts = false;
};

int cmd_solve(const SolveOptions& o) {
  auto inst = load_instance(o.instance);
  if (!inst) return kExitUsage;

  SearchConfig cfg;
  cfg.var = o.heuristic == "dom" ? VarHeuristic::Dom : o.heuristic == "lex" ? VarHeuristic::Lexical : VarHeuristic::DomWdeg;
  cfg.val = o.value == "max" ? ValHeuristic::Max : o.value == "random" ? ValHeuristic::Random : ValHeuristic::Min;
  cfg.seed = o.seed;
  cfg.restarts = o.restarts;
  if (o.timeout > 0) cfg.time_limit = o.timeout;
  cfg.stop = &g_stop;

  std::string mode = o.mode;
  if (o.enumerate) mode = "enumerate";
  if (mode == "auto") mode = inst->objective ? "optimize" : "satisfy";
  if (mode == "optimize" && !inst->objective) {
    std::cerr << "error: optimize mode needs an objective\n";
    return kExitUsage;
  }
  if (mode == "enumerate") {
    cfg.mode = SearchMode::Enumerate;
    if (o.enumerate && *o.enumerate > 0) cfg.enumerate_limit = *o.enumerate;
  }
  std::cout << "c instance " << (inst->name.empty() ? o.instance : inst->name) << " vars " << inst->num_vars()
            << " constraints " << inst->constraints.size() << "\n";
  if (mode == "optimize") {
    cfg.on_solution = [](std::span<const Value>, std::optional<Value> obj) {
      if (obj) std::cout << "o " << *obj << std::endl;
    };
  }

  SolveResult r;
  try {
    if (mode == "optimize") {
      r = solve_cop(*inst, cfg);
    } else {
      r = solve_csp(*inst, cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << "s UNKNOWN" << std::endl;
    return kExitUnknown;
  }
  std::cout << "c nodes " << r.nodes << " failures " << r.failures << " restarts " << r.restarts << "\n";
  if (cfg.mode == SearchMode::Enumerate) std::cout << "c solutions " << r.solutions << "\n";
  std::cout << "s " << status_name(r.status) << "\n";
  if (r.solution && (r.status == SolveStatus::Sat || r.status == SolveStatus::Optimum)) {
    std::cout << "v " << write_instantiation(*r.solution) << "\n";
  }
  std::cout.flush();
  switch (r.status) {
    case SolveStatus::Sat: return kExitSat;
    case SolveStatus::Unsat: return kExitUnsat;
    case SolveStatus::Optimum: return kExitOptimum;
    case SolveStatus::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

// --- verify ------------------------------------------------------------------

int cmd_verify(const std::string& instance_path, const std::string& solution_path) {
  auto inst = load_instance(instance_path);
  if (!inst) return kExitUsage;
  auto text = read_file(solution_path);
  if (!text) {
    std::cerr << "error: cannot read '" << solution_path << "'\n";
    return kExitUsage;
  }
  // solver output: take the last v-line; otherwise the file is the XML
  std::string xml = *text;
  {
    std::istringstream in(*text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("v ", 0) == 0) xml = line.substr(2);
    }
  }
  Assignment a;
  try {
    a = resolve(*inst, parse_instantiation(xml));
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  auto violations = check_assignment(*inst, a);
  if (!violations.empty()) {
    std::cout << "INVALID " << violations.size() << " violation" << (violations.size() > 1 ? "s" : "") << "\n";
    for (const auto& v : violations) {
      if (v.constraint < 0) {
        std::cout << "  domain: " << v.reason << "\n";
      } else {
        std::cout << "  constraint " << v.constraint << " (" << kind_name(inst->constraints[v.constraint])
                  << "): " << v.reason << "\n";
      }
    }
    return kExitInvalid;
  }
  if (inst->objective) {
    try {
      std::cout << "VALID objective=" << objective_value(*inst, a) << "\n";
    } catch (const VerifierError& e) {
      std::cout << "INVALID objective: " << e.what() << "\n";
      return kExitInvalid;
    }
  } else {
    std::cout << "VALID\n";
  }
  return 0;
}

// --- generate ----------------------------------------------------------------

struct GenerateOptions {
  std::string problem;
  std::string params;
  std::string params_file;
  std::string variant;
  std::string out;
  std::optional<int> n, k, d, r, c;
  std::optional<std::uint64_t> seed;
};

void print_stats(std::ostream& os, const Instance& inst) {
  std::map<std::string, int> kinds;
  for (const auto& c : inst.constraints) ++kinds[std::string(kind_name(c))];
  os << "c instance " << inst.name << "\nc variables " << inst.num_vars() << "\nc constraints "
     << inst.constraints.size() << "\n";
  for (const auto& [k, n] : kinds) os << "c   " << k << " " << n << "\n";
  if (inst.objective) os << "c objective " << (inst.objective->sense == Sense::Minimize ? "minimize" : "maximize") << "\n";
}

int cmd_generate(const GenerateOptions& o) {
  auto problem = problem_from_name(o.problem);
  if (!problem) {
    std::cerr << "error: unknown problem '" << o.problem << "'; known:";
    for (Problem p : all_problems()) std::cerr << " " << problem_name(p);
    std::cerr << "\n";
    return kExitUsage;
  }
  try {
    std::string json = o.params;
    if (!o.params_file.empty()) {
      auto text = read_file(o.params_file);
      if (!text) {
        std::cerr << "error: cannot read '" << o.params_file << "'\n";
        return kExitUsage;
      }
      json = *text;
    }
    ProblemParams p;
    p.problem = *problem;
    if (!json.empty()) p = params_from_json(*problem, json);
    if (o.n) p.n = *o.n;
    if (o.k) p.k = *o.k;
    if (o.d) p.d = *o.d;
    if (o.r) p.r = *o.r;
    if (o.c) p.c = *o.c;
    if (o.seed) {
      if (!p.warehouse_random) p.warehouse_random = WarehouseRandom{};
      p.warehouse_random->seed = *o.seed;
    }
    if (!o.variant.empty()) p.variant = o.variant;
    Instance inst = generate(p);
    const std::string xml = write_instance(inst);
    if (o.out.empty() || o.out == "-") {
      std::cout << xml;
      print_stats(std::cerr, inst);
    } else {
      std::ofstream f(o.out, std::ios::binary);
      if (!f || !(f << xml)) {
        std::cerr << "error: cannot write '" << o.out << "'\n";
        return kExitUsage;
      }
      print_stats(std::cout, inst);
    }
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}

// --- score / run-track ---------------------------------------------------------

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit_table(const ScoreTable& t, const std::string& format) {
  std::cout << (format == "html" ? to_html(t) : to_tsv(t));
}

int cmd_score(const std::string& log, const std::string& track, const std::string& format, const std::string& off,
              const std::string& teams) {
  auto cfg = track_config(track);
  if (!cfg) {
    std::cerr << "error: unknown track '" << track << "'\n";
    return kExitUsage;
  }
  std::ifstream f(log);
  if (!f) {
    std::cerr << "error: cannot read '" << log << "'\n";
    return kExitUsage;
  }
  std::vector<RunResult> results;
  try {
    results = read_results(f);
  } catch (const HarnessError& e) {
    std::cerr << "error: " << log << ": " << e.what() << "\n";
    return kExitUsage;
  }
  ScoreTable t = cfg->optimization ? score_cop(results) : score_csp(results);
  t.track = cfg->name;
  std::set<std::string> off_set;
  for (auto& s : split_list(off)) off_set.insert(s);
  std::map<std::string, std::string> team_map;
  for (auto& entry : split_list(teams)) {
    auto eq = entry.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --teams entries look like solver=team\n";
      return kExitUsage;
    }
    team_map[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  rank(t, off_set, team_map);
  emit_table(t, format);
  return 0;
}

int cmd_run_track(const std::string& manifest_path, const std::string& out, const std::string& format,
                  const std::string& html) {
  auto text = read_file(manifest_path);
  if (!text) {
    std::cerr << "error: cannot read '" << manifest_path << "'\n";
    return kExitUsage;
  }
  try {
    Manifest m = parse_manifest(*text, std::filesystem::path(manifest_path).parent_path().string());
    TrackRun run = run_track(m);
    if (!out.empty()) {
      std::ofstream f(out);
      write_results(f, run.results);
    }
    if (!html.empty()) {
      std::ofstream f(html);
      f << to_html(run.table);
    }
    emit_table(run.table, format);
  } catch (const HarnessError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XCSP3-core solver, verifier, generators and competition harness"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Solve an instance and print c/o/s/v lines");
  solve->add_option("instance", so.instance, "XCSP3 instance file")->required();
  solve->add_option("--timeout", so.timeout, "Wall-clock limit in seconds (0: none)")->check(CLI::NonNegativeNumber);
  solve->add_option("--mode", so.mode, "auto, satisfy, optimize or enumerate")
      ->check(CLI::IsMember({"auto", "satisfy", "optimize", "enumerate"}));
  solve->add_option("--heuristic", so.heuristic, "Variable ordering: dom, domwdeg or lex")
      ->check(CLI::IsMember({"dom", "domwdeg", "lex"}));
  solve->add_option("--value", so.value, "Value ordering: min, max or random")
      ->check(CLI::IsMember({"min", "max", "random"}));
  solve->add_option("--seed", so.seed, "Seed for random value ordering");
  solve->add_option("--enumerate", so.enumerate, "Enumerate up to N solutions (0: all)");
  solve->add_flag("--restarts", so.restarts, "Geometric restarts");

  std::string vinst, vsol;
  auto* verify = app.add_subcommand("verify", "Check a solution (instantiation XML or solver output)");
  verify->add_option("instance", vinst, "XCSP3 instance file")->required();
  verify->add_option("solution", vsol, "Solution file")->required();

  GenerateOptions go;
  auto* gen = app.add_subcommand("generate", "Build a model instance");
  gen->add_option("problem", go.problem, "Family name, e.g. costas or clock-triplets")->required();
  gen->add_option("params", go.params, "JSON parameters: 20, [3,12] or {\"n\": 6, ...}");
  gen->add_option("--params-file", go.params_file, "JSON parameter file");
  gen->add_option("--variant", go.variant, "Model variant");
  gen->add_option("--out,-o", go.out, "Output file (default: standard output)");
  gen->add_option("--n", go.n, "Size parameter n");
  gen->add_option("--k", go.k, "Molnar matrix order");
  gen->add_option("--d", go.d, "Molnar value bound");
  gen->add_option("--r", go.r, "Clock-triplets window");
  gen->add_option("--c", go.c, "Coins per line (coins-grid)");
  gen->add_option("--seed", go.seed, "Seed for random warehouse data");

  std::string slog, strack, sformat = "tsv", soff, steams;
  auto* score = app.add_subcommand("score", "Score a JSONL result log");
  score->add_option("log", slog, "Result log (one JSON object per line)")->required();
  score->add_option("--track", strack, "CSP, COP, FastCOP, ParallelCOP, MiniCSP or MiniCOP")->required();
  score->add_option("--format", sformat, "tsv or html")->check(CLI::IsMember({"tsv", "html"}));
  score->add_option("--off", soff, "Comma-separated off-competition solvers");
  score->add_option("--teams", steams, "Comma-separated solver=team pairs");

  std::string manifest, rout, rformat = "tsv", rhtml;
  auto* run = app.add_subcommand("run-track", "Run solvers over instances under track limits");
  run->add_option("manifest", manifest, "Manifest JSON")->required();
  run->add_option("--out", rout, "Write validated results as JSONL");
  run->add_option("--format", rformat, "tsv or html")->check(CLI::IsMember({"tsv", "html"}));
  run->add_option("--html", rhtml, "Also write the HTML table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (*solve) {
    std::signal(SIGTERM, on_signal);
    std::signal(SIGINT, on_signal);
    return cmd_solve(so);
  }
  if (*verify) return cmd_verify(vinst, vsol);
  if (*gen) return cmd_generate(go);
  if (*score) return cmd_score(slog, strack, sformat, soff, steams);
  if (*run) return cmd_run_track(manifest, rout, rformat, rhtml);
  return kExitUsage;
}
