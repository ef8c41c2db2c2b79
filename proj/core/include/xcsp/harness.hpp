#ifndef XCSP_HARNESS_HPP
#define XCSP_HARNESS_HPP

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xcsp/model.hpp"
#include "xcsp/search.hpp"

namespace xcsp {

/// Malformed result logs or manifests.
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Track { CSP, COP, FastCOP, ParallelCOP, MiniCSP, MiniCOP };

struct TrackConfig {
  Track track = Track::CSP;
  std::string name;
  double cpu_limit = 0;   // seconds
  double wall_limit = 0;  // seconds
  bool optimization = false;
};

TrackConfig track_config(Track t);
/// Case-insensitive lookup by name ("FastCOP"); nothing for unknown names.
std::optional<TrackConfig> track_config(std::string_view name);

struct RunResult {
  std::string solver;
  std::string instance;
  SolveStatus status = SolveStatus::Unknown;
  std::optional<Value> bound;
  std::vector<BoundPoint> trajectory;  // o-lines with wall-clock arrival times
  std::optional<Instantiation> solution;
  double cpu_seconds = 0;
  double wall_seconds = 0;
  bool disqualified = false;
  std::string reason;  // why disqualified, or what went wrong
  /// Set by validate_result: the solution passed the verifier.
  bool verified = false;
  /// Objective sense of the instance, filled from the instance itself.
  std::optional<Sense> sense;
  bool killed = false;
  int exit_code = -1;  // -1: killed by a signal or never started
};

/// Parses solver standard output per the c/o/s/v protocol. The last
/// well-formed s-line, v-line and o-line win; malformed lines are ignored.
RunResult parse_solver_output(std::string_view text);

/// Incremental form used while a solver runs.
class OutputParser {
 public:
  void line(std::string_view text, double elapsed);
  void finish(RunResult& r) const;

 private:
  std::optional<SolveStatus> status_;
  std::vector<BoundPoint> trajectory_;
  std::optional<Instantiation> solution_;
  bool bad_solution_ = false;
};

/// Checks claims against the instance: the solution must satisfy the
/// verifier, its objective replaces the reported bound, and OPTIMUM or
/// SATISFIABLE without a usable v-line disqualifies the run.
void validate_result(RunResult& r, const Instance& inst);

struct RunLimits {
  double cpu_limit = 0;
  double wall_limit = 0;
  double grace = 2.0;  // SIGTERM at the limit, SIGKILL this much later
};

/// Launches `command_template` through /bin/sh with `{instance}` and
/// `{timeout}` (the CPU limit in whole seconds) substituted, enforces the
/// limits on the whole process group and parses the protocol. Failures are
/// recorded in the result, never thrown.
RunResult run_solver(const std::string& command_template, const std::string& instance_path, const RunLimits& limits,
                     const std::string& solver_id = {}, const std::string& instance_id = {});

// --- persistence -----------------------------------------------------------

std::string to_json_line(const RunResult& r);
/// Throws HarnessError on malformed input.
RunResult from_json_line(std::string_view line);
/// Skips blank lines; throws HarnessError naming the bad line.
std::vector<RunResult> read_results(std::istream& in);
void write_results(std::ostream& out, const std::vector<RunResult>& results);

// --- scoring ---------------------------------------------------------------

struct ScoreRow {
  std::string solver;
  double points = 0;  // multiples of 0.5
  int solved = 0;     // CSP: decided instances; COP: instances with a positive award
  int best = 0;       // COP: full-point awards
  bool off_competition = false;
  int rank = 0;  // 0 when not ranked
};

struct ScoreTable {
  std::string track;
  std::vector<ScoreRow> rows;  // ranked rows first, by rank then name
};

/// One point per verified SAT or uncontested UNSAT answer. A run claiming
/// UNSAT on an instance another run solved is disqualified.
ScoreTable score_csp(const std::vector<RunResult>& results);

/// Awards for the runs on one instance, keyed by solver id.
std::map<std::string, double> score_cop_instance(const std::vector<RunResult>& runs, Sense sense);

/// Sums per-instance awards. The sense comes from each result's `sense`;
/// runs without one count as minimization.
ScoreTable score_cop(const std::vector<RunResult>& results);

/// Competition ranking (ties share the smaller rank, 1,1,3). Solvers in
/// `off_competition` stay in the table unranked; among solvers of the same
/// team only the best-scoring one is ranked.
void rank(ScoreTable& table, const std::set<std::string>& off_competition,
          const std::map<std::string, std::string>& teams = {});

std::string to_tsv(const ScoreTable& t);
std::string to_html(const ScoreTable& t);

// --- tracks ----------------------------------------------------------------

struct SolverEntry {
  std::string id;
  std::string command;  // template with {instance} / {timeout}
  std::string team;
  bool off_competition = false;
};

struct Manifest {
  std::string track;
  std::vector<SolverEntry> solvers;
  std::vector<std::string> instances;
  int workers = 1;
  std::optional<double> cpu_limit;   // overrides of the track limits
  std::optional<double> wall_limit;
};

/// Reads the manifest JSON; relative instance paths are resolved against
/// `base_dir`. Throws HarnessError on malformed input or unknown tracks.
Manifest parse_manifest(std::string_view json, const std::string& base_dir = {});

struct TrackRun {
  std::vector<RunResult> results;  // validated
  ScoreTable table;
};

/// Runs every solver on every instance, validates and scores.
TrackRun run_track(const Manifest& m);

}  // namespace xcsp

#endif  // XCSP_HARNESS_HPP
