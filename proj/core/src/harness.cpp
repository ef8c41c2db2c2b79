#include "xcsp/harness.hpp"

#include <dirent.h>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "xcsp/io.hpp"
#include "xcsp/verifier.hpp"

namespace xcsp {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<SolveStatus> status_from_name(std::string_view s) {
  for (SolveStatus st : {SolveStatus::Sat, SolveStatus::Unsat, SolveStatus::Optimum, SolveStatus::Unknown}) {
    if (s == status_name(st)) return st;
  }
  return std::nullopt;
}

}  // namespace

TrackConfig track_config(Track t) {
  switch (t) {
    case Track::CSP: return {t, "CSP", 2400, 7200, false};
    case Track::COP: return {t, "COP", 2400, 7200, true};
    case Track::FastCOP: return {t, "FastCOP", 240, 720, true};
    case Track::ParallelCOP: return {t, "ParallelCOP", 9600, 7200, true};
    case Track::MiniCSP: return {t, "MiniCSP", 2400, 7200, false};
    case Track::MiniCOP: return {t, "MiniCOP", 2400, 7200, true};
  }
  return {};
}

std::optional<TrackConfig> track_config(std::string_view name) {
  const std::string key = lower(name);
  for (Track t : {Track::CSP, Track::COP, Track::FastCOP, Track::ParallelCOP, Track::MiniCSP, Track::MiniCOP}) {
    TrackConfig c = track_config(t);
    if (lower(c.name) == key) return c;
  }
  return std::nullopt;
}

// --- protocol --------------------------------------------------------------

void OutputParser::line(std::string_view text, double elapsed) {
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  if (text.size() < 2 || text[1] != ' ') return;
  const std::string_view body = trim(text.substr(2));
  switch (text[0]) {
    case 's':
      if (auto st = status_from_name(body)) status_ = *st;
      break;
    case 'o': {
      Value v = 0;
      auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
      if (ec == std::errc() && ptr == body.data() + body.size() && !body.empty()) {
        trajectory_.push_back({elapsed, v});
      }
      break;
    }
    case 'v':
      try {
        solution_ = parse_instantiation(body);
      } catch (const std::exception&) {
        // malformed v-lines never replace a good one
      }
      break;
    default: break;
  }
}

void OutputParser::finish(RunResult& r) const {
  r.status = status_.value_or(SolveStatus::Unknown);
  r.trajectory = trajectory_;
  r.bound = trajectory_.empty() ? std::nullopt : std::optional<Value>(trajectory_.back().value);
  r.solution = solution_;
}

RunResult parse_solver_output(std::string_view text) {
  OutputParser p;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    p.line(text.substr(pos, nl - pos), 0);
    pos = nl + 1;
  }
  RunResult r;
  p.finish(r);
  return r;
}

void validate_result(RunResult& r, const Instance& inst) {
  r.verified = false;
  if (inst.objective) r.sense = inst.objective->sense;
  auto disqualify = [&](std::string why) {
    if (!r.disqualified) r.reason = std::move(why);
    r.disqualified = true;
  };
  const bool claims_solution = r.status == SolveStatus::Sat || r.status == SolveStatus::Optimum;
  if (!r.solution) {
    if (claims_solution) disqualify(std::string(status_name(r.status)) + " without a v-line");
    return;
  }
  Assignment a;
  try {
    a = resolve(inst, *r.solution);
  } catch (const ModelError& e) {
    disqualify(std::string("unusable solution: ") + e.what());
    return;
  }
  auto violations = check_assignment(inst, a);
  if (!violations.empty()) {
    const auto& v = violations.front();
    disqualify("solution violates " +
               (v.constraint < 0 ? std::string("a domain") : "constraint " + std::to_string(v.constraint)) + ": " +
               v.reason);
    return;
  }
  if (inst.objective) {
    Value obj = 0;
    try {
      obj = objective_value(inst, a);
    } catch (const VerifierError& e) {
      disqualify(std::string("objective cannot be evaluated: ") + e.what());
      return;
    }
    if (r.bound && *r.bound != obj) {
      disqualify("reported bound " + std::to_string(*r.bound) + " but the solution has objective " +
                 std::to_string(obj));
      return;
    }
    r.bound = obj;
  }
  r.verified = true;
}

// --- process control -------------------------------------------------------

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
  return text;
}

// CPU seconds of every live (or unreaped) process in the group, including
// children they have already reaped.
double group_cpu(pid_t pgid) {
  static const double ticks = static_cast<double>(sysconf(_SC_CLK_TCK));
  double total = 0;
  DIR* dir = opendir("/proc");
  if (!dir) return 0;
  while (dirent* e = readdir(dir)) {
    if (!std::isdigit(static_cast<unsigned char>(e->d_name[0]))) continue;
    std::ifstream f(std::string("/proc/") + e->d_name + "/stat");
    std::string stat;
    if (!std::getline(f, stat)) continue;
    auto close = stat.rfind(')');
    if (close == std::string::npos) continue;
    std::istringstream rest(stat.substr(close + 2));
    // fields 3.. : state ppid pgrp session tty tpgid flags minflt cminflt majflt cmajflt utime stime cutime cstime
    std::string state;
    long ppid = 0, pgrp = 0;
    rest >> state >> ppid >> pgrp;
    if (pgrp != pgid) continue;
    unsigned long long skip = 0, ut = 0, st = 0;
    long long cut = 0, cst = 0;
    for (int i = 0; i < 7; ++i) rest >> skip;
    rest >> ut >> st >> cut >> cst;
    total += static_cast<double>(ut + st) / ticks + static_cast<double>(cut + cst) / ticks;
  }
  closedir(dir);
  return total;
}

}  // namespace

RunResult run_solver(const std::string& command_template, const std::string& instance_path, const RunLimits& limits,
                     const std::string& solver_id, const std::string& instance_id) {
  RunResult r;
  r.solver = solver_id;
  r.instance = instance_id.empty() ? instance_path : instance_id;
  const long timeout = limits.cpu_limit > 0 ? static_cast<long>(std::ceil(limits.cpu_limit)) : 0;
  std::string cmd = substitute(command_template, "{instance}", shell_quote(instance_path));
  cmd = substitute(cmd, "{timeout}", std::to_string(timeout));

  int fds[2];
  if (pipe2(fds, O_CLOEXEC) != 0) {
    r.reason = std::string("pipe failed: ") + std::strerror(errno);
    return r;
  }
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  const pid_t pid = fork();
  if (pid < 0) {
    r.reason = std::string("fork failed: ") + std::strerror(errno);
    close(fds[0]);
    close(fds[1]);
    return r;
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    int devnull = open("/dev/null", O_RDWR);
    if (devnull >= 0) {
      dup2(devnull, STDIN_FILENO);
      dup2(devnull, STDERR_FILENO);
    }
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);  // both sides, whichever runs first
  close(fds[1]);
  fcntl(fds[0], F_SETFL, O_NONBLOCK);

  OutputParser parser;
  std::string pending;
  bool eof = false;
  auto drain = [&] {
    char buf[65536];
    while (true) {
      ssize_t n = read(fds[0], buf, sizeof buf);
      if (n > 0) {
        pending.append(buf, static_cast<std::size_t>(n));
        std::size_t nl;
        while ((nl = pending.find('\n')) != std::string::npos) {
          parser.line(std::string_view(pending).substr(0, nl), elapsed());
          pending.erase(0, nl + 1);
        }
        continue;
      }
      if (n == 0) eof = true;
      return;
    }
  };

  bool term_sent = false, kill_sent = false;
  double term_at = 0, cpu = 0;
  int status = 0;
  rusage usage{};
  bool exited = false;
  while (!exited) {
    pollfd pfd{fds[0], POLLIN, 0};
    if (!eof) {
      poll(&pfd, 1, 20);
      drain();
    } else {
      usleep(20'000);
    }
    pid_t w = wait4(pid, &status, WNOHANG, &usage);
    if (w == pid) {
      exited = true;
      break;
    }
    cpu = std::max(cpu, group_cpu(pid));
    const double now = elapsed();
    if (!term_sent) {
      const bool over_cpu = limits.cpu_limit > 0 && cpu > limits.cpu_limit;
      const bool over_wall = limits.wall_limit > 0 && now > limits.wall_limit;
      if (over_cpu || over_wall) {
        r.killed = true;
        r.reason = over_cpu ? "cpu limit exceeded" : "wall-clock limit exceeded";
        killpg(pid, SIGTERM);
        term_sent = true;
        term_at = now;
      }
    } else if (!kill_sent && now - term_at >= limits.grace) {
      killpg(pid, SIGKILL);
      kill_sent = true;
    }
  }
  r.wall_seconds = elapsed();
  // leftovers of the group die with the run
  killpg(pid, SIGKILL);
  const double reaped = static_cast<double>(usage.ru_utime.tv_sec + usage.ru_stime.tv_sec) +
                        static_cast<double>(usage.ru_utime.tv_usec + usage.ru_stime.tv_usec) / 1e6;
  r.cpu_seconds = std::max(cpu, reaped);
  if (!eof) {
    // the pipe may be held by descendants; read what is already there
    drain();
  }
  if (!pending.empty()) parser.line(pending, elapsed());
  close(fds[0]);
  parser.finish(r);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (r.killed) {
    r.status = SolveStatus::Unknown;
  } else if (r.exit_code == 127 && r.status == SolveStatus::Unknown && r.trajectory.empty()) {
    r.reason = "solver could not be started";
  }
  return r;
}

// --- persistence -----------------------------------------------------------

using nlohmann::json;

std::string to_json_line(const RunResult& r) {
  json j;
  j["solver"] = r.solver;
  j["instance"] = r.instance;
  j["status"] = status_name(r.status);
  j["bound"] = r.bound ? json(*r.bound) : json(nullptr);
  json traj = json::array();
  for (const auto& p : r.trajectory) traj.push_back(json::array({p.elapsed, p.value}));
  j["trajectory"] = traj;
  j["solution"] = r.solution ? json(write_instantiation(*r.solution)) : json(nullptr);
  j["cpu"] = r.cpu_seconds;
  j["wall"] = r.wall_seconds;
  j["disqualified"] = r.disqualified;
  j["reason"] = r.reason;
  j["verified"] = r.verified;
  j["sense"] = r.sense ? json(*r.sense == Sense::Minimize ? "minimize" : "maximize") : json(nullptr);
  j["killed"] = r.killed;
  j["exitCode"] = r.exit_code;
  return j.dump();
}

RunResult from_json_line(std::string_view line) {
  RunResult r;
  try {
    json j = json::parse(line);
    if (!j.is_object()) throw HarnessError("result line is not an object");
    r.solver = j.at("solver").get<std::string>();
    r.instance = j.at("instance").get<std::string>();
    auto st = status_from_name(j.at("status").get<std::string>());
    if (!st) throw HarnessError("unknown status '" + j.at("status").get<std::string>() + "'");
    r.status = *st;
    if (j.contains("bound") && !j["bound"].is_null()) r.bound = j["bound"].get<Value>();
    if (j.contains("trajectory")) {
      for (const auto& p : j["trajectory"]) {
        if (!p.is_array() || p.size() != 2) throw HarnessError("trajectory entries are [seconds, bound]");
        r.trajectory.push_back({p[0].get<double>(), p[1].get<Value>()});
      }
    }
    if (j.contains("solution") && !j["solution"].is_null()) {
      r.solution = parse_instantiation(j["solution"].get<std::string>());
    }
    r.cpu_seconds = j.value("cpu", 0.0);
    r.wall_seconds = j.value("wall", 0.0);
    r.disqualified = j.value("disqualified", false);
    r.reason = j.value("reason", std::string());
    r.verified = j.value("verified", false);
    if (j.contains("sense") && !j["sense"].is_null()) {
      const auto s = j["sense"].get<std::string>();
      if (s == "minimize") {
        r.sense = Sense::Minimize;
      } else if (s == "maximize") {
        r.sense = Sense::Maximize;
      } else {
        throw HarnessError("unknown sense '" + s + "'");
      }
    }
    r.killed = j.value("killed", false);
    r.exit_code = j.value("exitCode", -1);
  } catch (const HarnessError&) {
    throw;
  } catch (const std::exception& e) {
    throw HarnessError(std::string("malformed result line: ") + e.what());
  }
  return r;
}

std::vector<RunResult> read_results(std::istream& in) {
  std::vector<RunResult> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(from_json_line(line));
    } catch (const HarnessError& e) {
      throw HarnessError("line " + std::to_string(no) + ": " + e.what());
    }
  }
  return out;
}

void write_results(std::ostream& out, const std::vector<RunResult>& results) {
  for (const auto& r : results) out << to_json_line(r) << '\n';
}

// --- scoring ---------------------------------------------------------------

namespace {

bool claims_solution(const RunResult& r) {
  return r.status == SolveStatus::Sat || r.status == SolveStatus::Optimum;
}

std::map<std::string, std::vector<const RunResult*>> by_instance(const std::vector<RunResult>& results) {
  std::map<std::string, std::vector<const RunResult*>> out;
  for (const auto& r : results) out[r.instance].push_back(&r);
  return out;
}

ScoreRow& row_for(ScoreTable& t, const std::string& solver) {
  for (auto& row : t.rows) {
    if (row.solver == solver) return row;
  }
  t.rows.push_back(ScoreRow{solver});
  return t.rows.back();
}

void sort_rows(ScoreTable& t) {
  std::sort(t.rows.begin(), t.rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
    if (a.points != b.points) return a.points > b.points;
    return a.solver < b.solver;
  });
}

}  // namespace

ScoreTable score_csp(const std::vector<RunResult>& results) {
  ScoreTable t;
  t.track = "CSP";
  for (const auto& r : results) row_for(t, r.solver);
  for (const auto& [inst, runs] : by_instance(results)) {
    bool solved = false;
    for (const auto* r : runs) solved |= !r->disqualified && r->verified;
    for (const auto* r : runs) {
      if (r->disqualified) continue;
      const bool sat = claims_solution(*r) && r->verified;
      const bool unsat = r->status == SolveStatus::Unsat && !solved;
      if (sat || unsat) {
        auto& row = row_for(t, r->solver);
        row.points += 1;
        row.solved += 1;
      }
    }
  }
  sort_rows(t);
  return t;
}

std::map<std::string, double> score_cop_instance(const std::vector<RunResult>& runs, Sense sense) {
  std::map<std::string, double> award;
  auto better = [&](Value a, Value b) { return sense == Sense::Minimize ? a < b : a > b; };
  std::optional<Value> best;
  for (const auto& r : runs) {
    award[r.solver] = 0;
    if (r.disqualified || !r.verified || !r.bound) continue;
    if (!best || better(*r.bound, *best)) best = r.bound;
  }
  if (!best) {
    // nobody exhibited a solution: the instance counts as unsatisfiable for
    // the runs that say so
    for (const auto& r : runs) {
      if (!r.disqualified && r.status == SolveStatus::Unsat) award[r.solver] = 1;
    }
    return award;
  }
  auto proves = [&](const RunResult& r) {
    return !r.disqualified && r.verified && r.status == SolveStatus::Optimum && r.bound == best;
  };
  for (const auto& r : runs) {
    if (r.disqualified || !r.verified || !r.bound) continue;
    if (*r.bound != *best) continue;  // strictly worse, including a false OPTIMUM claim
    if (r.status == SolveStatus::Optimum) {
      award[r.solver] = 1;
      continue;
    }
    bool other_proved = false;
    for (const auto& o : runs) {
      if (&o != &r && proves(o)) other_proved = true;
    }
    award[r.solver] = other_proved ? 0.5 : 1;
  }
  return award;
}

ScoreTable score_cop(const std::vector<RunResult>& results) {
  ScoreTable t;
  t.track = "COP";
  for (const auto& r : results) row_for(t, r.solver);
  for (const auto& [inst, runs] : by_instance(results)) {
    Sense sense = Sense::Minimize;
    std::vector<RunResult> copy;
    for (const auto* r : runs) {
      if (r->sense) sense = *r->sense;
      copy.push_back(*r);
    }
    for (const auto& [solver, a] : score_cop_instance(copy, sense)) {
      auto& row = row_for(t, solver);
      row.points += a;
      if (a > 0) row.solved += 1;
      if (a == 1) row.best += 1;
    }
  }
  sort_rows(t);
  return t;
}

void rank(ScoreTable& t, const std::set<std::string>& off_competition,
          const std::map<std::string, std::string>& teams) {
  sort_rows(t);
  for (auto& row : t.rows) {
    row.rank = 0;
    if (off_competition.count(row.solver)) row.off_competition = true;
  }
  // rows are sorted, so the first ranked member of a team is its best one
  std::set<std::string> seen_teams;
  for (auto& row : t.rows) {
    if (row.off_competition) continue;
    auto it = teams.find(row.solver);
    if (it == teams.end() || it->second.empty()) continue;
    if (!seen_teams.insert(it->second).second) row.off_competition = true;
  }
  int position = 0;
  double last = -1;
  int last_rank = 0;
  for (auto& row : t.rows) {
    if (row.off_competition) continue;
    ++position;
    if (position == 1 || row.points != last) last_rank = position;
    row.rank = last_rank;
    last = row.points;
  }
  std::stable_sort(t.rows.begin(), t.rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
    const bool ra = a.rank > 0, rb = b.rank > 0;
    if (ra != rb) return ra;
    if (ra && a.rank != b.rank) return a.rank < b.rank;
    return false;
  });
}

namespace {

std::string points_text(double p) {
  std::ostringstream os;
  if (p == std::floor(p)) {
    os << static_cast<long long>(p);
  } else {
    os << std::fixed;
    os.precision(1);
    os << p;
  }
  return os.str();
}

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string to_tsv(const ScoreTable& t) {
  std::string out = "rank\tsolver\tpoints\tsolved\tbest\toff_competition\n";
  for (const auto& r : t.rows) {
    out += (r.rank > 0 ? std::to_string(r.rank) : "-") + "\t" + r.solver + "\t" + points_text(r.points) + "\t" +
           std::to_string(r.solved) + "\t" + std::to_string(r.best) + "\t" + (r.off_competition ? "yes" : "no") +
           "\n";
  }
  return out;
}

std::string to_html(const ScoreTable& t) {
  std::string out = "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>" + html_escape(t.track) +
                    " track</title></head>\n<body>\n<h1>" + html_escape(t.track) + " track</h1>\n<table>\n" +
                    "<tr><th>Rank</th><th>Solver</th><th>Points</th><th>Solved</th><th>Best</th></tr>\n";
  for (const auto& r : t.rows) {
    out += "<tr" + std::string(r.off_competition ? " class=\"off\"" : "") + "><td>" +
           (r.rank > 0 ? std::to_string(r.rank) : "off") + "</td><td>" + html_escape(r.solver) + "</td><td>" +
           points_text(r.points) + "</td><td>" + std::to_string(r.solved) + "</td><td>" + std::to_string(r.best) +
           "</td></tr>\n";
  }
  out += "</table>\n</body>\n</html>\n";
  return out;
}

// --- tracks ----------------------------------------------------------------

Manifest parse_manifest(std::string_view text, const std::string& base_dir) {
  Manifest m;
  try {
    json j = json::parse(text);
    m.track = j.at("track").get<std::string>();
    if (!track_config(m.track)) throw HarnessError("unknown track '" + m.track + "'");
    for (const auto& s : j.at("solvers")) {
      SolverEntry e;
      e.id = s.at("id").get<std::string>();
      e.command = s.at("command").get<std::string>();
      e.team = s.value("team", std::string());
      e.off_competition = s.value("offCompetition", false);
      m.solvers.push_back(std::move(e));
    }
    for (const auto& i : j.at("instances")) {
      std::filesystem::path p(i.get<std::string>());
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      m.instances.push_back(p.string());
    }
    m.workers = j.value("workers", 1);
    if (m.workers < 1) throw HarnessError("workers must be at least 1");
    if (j.contains("cpuLimit")) m.cpu_limit = j["cpuLimit"].get<double>();
    if (j.contains("wallLimit")) m.wall_limit = j["wallLimit"].get<double>();
  } catch (const HarnessError&) {
    throw;
  } catch (const std::exception& e) {
    throw HarnessError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

TrackRun run_track(const Manifest& m) {
  auto cfg = track_config(m.track);
  if (!cfg) throw HarnessError("unknown track '" + m.track + "'");
  RunLimits limits;
  limits.cpu_limit = m.cpu_limit.value_or(cfg->cpu_limit);
  limits.wall_limit = m.wall_limit.value_or(cfg->wall_limit);

  std::vector<Instance> instances;
  for (const auto& path : m.instances) {
    std::ifstream f(path);
    if (!f) throw HarnessError("cannot read instance '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    auto parsed = parse_instance(ss.str());
    if (!parsed.ok()) {
      throw HarnessError("instance '" + path + "' does not parse: " +
                         (parsed.diagnostics.empty() ? std::string("unknown error") : to_string(parsed.diagnostics[0])));
    }
    instances.push_back(std::move(*parsed.instance));
  }

  const std::size_t jobs = m.instances.size() * m.solvers.size();
  TrackRun out;
  out.results.resize(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs;) {
      const std::size_t i = k / m.solvers.size(), s = k % m.solvers.size();
      RunResult r = run_solver(m.solvers[s].command, m.instances[i], limits, m.solvers[s].id, m.instances[i]);
      validate_result(r, instances[i]);
      out.results[k] = std::move(r);
    }
  };
  std::vector<std::thread> pool;
  const int n = std::max(1, std::min<int>(m.workers, static_cast<int>(std::max<std::size_t>(jobs, 1))));
  for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  out.table = cfg->optimization ? score_cop(out.results) : score_csp(out.results);
  out.table.track = cfg->name;
  std::set<std::string> off;
  std::map<std::string, std::string> teams;
  for (const auto& s : m.solvers) {
    if (s.off_competition) off.insert(s.id);
    if (!s.team.empty()) teams[s.id] = s.team;
  }
  rank(out.table, off, teams);
  return out;
}

}  // namespace xcsp
