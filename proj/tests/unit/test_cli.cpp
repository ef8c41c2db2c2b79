#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "xcsp/generators.hpp"
#include "xcsp/harness.hpp"
#include "xcsp/io.hpp"

using namespace xcsp;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / ("xcsp-cli-" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI through the shell; stderr goes to a side file.
Run cli(const std::string& args) {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string(XCSP_CLI_PATH) + " " + args + " 2>" + err.string();
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.err = slurp(err);
  return r;
}

std::string data(const std::string& name) { return (fs::path(XCSP_TEST_DATA) / "instances" / name).string(); }

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::vector<std::string> lines_with(const std::string& text, char prefix) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.size() >= 2 && line[0] == prefix && line[1] == ' ') out.push_back(line.substr(2));
  }
  return out;
}

}  // namespace

TEST(CliSolve, OrtholatinTwo) {
  const auto r = cli("solve " + data("ortholatin-2.xml"));
  EXPECT_EQ(r.code, 20);
  EXPECT_EQ(lines_with(r.out, 's'), std::vector<std::string>{"UNSATISFIABLE"});
  EXPECT_TRUE(lines_with(r.out, 'v').empty());
}

TEST(CliSolve, ClockTriplets) {
  const auto r = cli("solve " + data("clock-triplets-3-12.xml"));
  EXPECT_EQ(r.code, 30);
  const auto o = lines_with(r.out, 'o');
  ASSERT_FALSE(o.empty());
  EXPECT_EQ(o.back(), "21");
  for (std::size_t i = 1; i < o.size(); ++i) EXPECT_LT(std::stol(o[i]), std::stol(o[i - 1]));
  EXPECT_EQ(lines_with(r.out, 's'), std::vector<std::string>{"OPTIMUM FOUND"});
  EXPECT_EQ(lines_with(r.out, 'v').size(), 1u);
}

TEST(CliSolve, MalformedInput) {
  const auto bad = write_file("bad.xml", "<instance format=\"XCSP3\" type=\"CSP\"><variables>");
  const auto r = cli("solve " + bad.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.xml:1:"), std::string::npos) << r.err;
  EXPECT_EQ(cli("solve /nonexistent/file.xml").code, 2);
}

TEST(CliSolve, EnumerateAndFlags) {
  const auto queens = write_file("q4.xml", write_instance(generate([] {
                                   ProblemParams p;
                                   p.problem = Problem::BlockedQueens;
                                   p.n = 4;
                                   return p;
                                 }())));
  const auto r = cli("solve " + queens.string() + " --mode enumerate");
  EXPECT_EQ(r.code, 10);
  EXPECT_NE(r.out.find("c solutions 2"), std::string::npos) << r.out;
  const auto lex = cli("solve " + queens.string() + " --heuristic lex --value random --seed 4 --restarts");
  EXPECT_EQ(lex.code, 10);
  EXPECT_EQ(cli("solve " + queens.string() + " --heuristic best").code, 2);
}

TEST(CliSolve, TimeoutGivesUnknown) {
  const auto big = write_file("costas.xml", write_instance(generate([] {
                                ProblemParams p;
                                p.problem = Problem::Costas;
                                p.n = 16;
                                return p;
                              }())));
  const auto r = cli("solve " + big.string() + " --mode enumerate --timeout 0.3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines_with(r.out, 's'), std::vector<std::string>{"UNKNOWN"});
}

TEST(CliGenerate, CostasTwenty) {
  const auto out = scratch() / "costas-20.xml";
  const auto r = cli("generate costas 20 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("c variables 20"), std::string::npos) << r.out;
  const auto parsed = parse_instance(slurp(out));
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(parsed.instance->num_vars(), 20u);
}

TEST(CliGenerate, VariantsAndErrors) {
  const auto v5 = cli("generate quasigroup --variant base-v5 10");
  EXPECT_EQ(v5.code, 0);
  EXPECT_NE(v5.out.find("<instance id=\"quasigroup-base-v5-10\""), std::string::npos);
  const auto sp = cli("generate superpermutation 9");
  EXPECT_EQ(sp.code, 2);
  EXPECT_NE(sp.err.find("2 <= n <= 5"), std::string::npos) << sp.err;
  EXPECT_EQ(cli("generate hidato 5").code, 2);
  EXPECT_EQ(cli("generate clock-triplets --r 3 --n 12").code, 0);
  EXPECT_EQ(cli("generate clock-triplets '[3, 12]'").out, cli("generate clock-triplets --r 3 --n 12").out);
  const auto wh = cli("generate warehouse --params-file " + (fs::path(XCSP_TEST_DATA) / "warehouse-5x10.json").string());
  EXPECT_EQ(wh.code, 0);
  EXPECT_NE(wh.err.find("c variables 25"), std::string::npos) << wh.err;
}

TEST(CliVerify, SuperpermutationWitness) {
  const std::string ids = "x[0] x[1] x[2] x[3] x[4] x[5] x[6] x[7] x[8] p[0] p[1] p[2] p[3] p[4] p[5]";
  // permutations 123 132 213 231 312 321 start at 0 5 4 1 2 6
  const auto good = write_file("w.xml", "<instantiation><list> " + ids +
                                            " </list><values> 1 2 3 1 2 1 3 2 1 0 5 4 1 2 6 </values></instantiation>");
  const auto r = cli("verify " + data("superperm-3.xml") + " " + good.string());
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out, "VALID\n");
  const auto tampered = write_file("t.xml", "<instantiation><list> " + ids +
                                                " </list><values> 1 2 3 1 3 1 3 2 1 0 5 4 1 2 6 </values></instantiation>");
  const auto t = cli("verify " + data("superperm-3.xml") + " " + tampered.string());
  EXPECT_EQ(t.code, 1);
  EXPECT_EQ(t.out.rfind("INVALID", 0), 0u);
  const auto partial = write_file("p.xml", "<instantiation><list> x[0] </list><values> 1 </values></instantiation>");
  EXPECT_EQ(cli("verify " + data("superperm-3.xml") + " " + partial.string()).code, 2);
}

TEST(CliVerify, ObjectiveFromSolverOutput) {
  const auto solved = write_file("clock.out", cli("solve " + data("clock-triplets-3-12.xml")).out);
  const auto r = cli("verify " + data("clock-triplets-3-12.xml") + " " + solved.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "VALID objective=21\n");
}

TEST(CliScore, ThreeSolverCopLog) {
  auto run = [](std::string s, SolveStatus st, Value b) {
    RunResult r;
    r.solver = std::move(s);
    r.instance = "clock";
    r.status = st;
    r.bound = b;
    r.verified = true;
    r.sense = Sense::Minimize;
    return r;
  };
  std::ostringstream log;
  write_results(log, {run("A", SolveStatus::Optimum, 21), run("B", SolveStatus::Sat, 21), run("C", SolveStatus::Sat, 23)});
  const auto path = write_file("cop.jsonl", log.str());
  const auto r = cli("score " + path.string() + " --track COP");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "rank\tsolver\tpoints\tsolved\tbest\toff_competition\n"
            "1\tA\t1\t1\t1\tno\n2\tB\t0.5\t1\t0\tno\n3\tC\t0\t0\t0\tno\n");
  const auto off = cli("score " + path.string() + " --track COP --off A --format html");
  EXPECT_NE(off.out.find("<tr class=\"off\"><td>off</td><td>A</td>"), std::string::npos) << off.out;
}

TEST(CliScore, EmptyLogAndErrors) {
  const auto empty = write_file("empty.jsonl", "");
  const auto r = cli("score " + empty.string() + " --track CSP");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "rank\tsolver\tpoints\tsolved\tbest\toff_competition\n");
  EXPECT_EQ(cli("score " + empty.string() + " --track Sprint").code, 2);
  const auto junk = write_file("junk.jsonl", "{nope\n");
  EXPECT_EQ(cli("score " + junk.string() + " --track CSP").code, 2);
}

TEST(CliRunTrack, FastCopAppliesItsCpuLimit) {
  const fs::path dir = scratch();
  fs::copy_file(data("clock-triplets-3-12.xml"), dir / "clock.xml", fs::copy_options::overwrite_existing);
  const auto manifest = write_file("fast.json", R"({"track": "FastCOP", "instances": ["clock.xml"],
    "solvers": [{"id": "probe", "command": "echo 'o {timeout}'; echo 's UNKNOWN'"}]})");
  const fs::path log = dir / "fast.jsonl";
  const auto r = cli("run-track " + manifest.string() + " --out " + log.string());
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(log);
  const auto results = read_results(in);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].bound, 240);
  const auto unknown = write_file("bad-track.json", R"({"track": "Sprint", "instances": [], "solvers": []})");
  EXPECT_EQ(cli("run-track " + unknown.string()).code, 2);
}

TEST(CliProperty, ExitCodesAgreeAndSolutionsVerify) {
  for (const auto& p : sample_params()) {
    const Instance inst = generate(p);
    SCOPED_TRACE(inst.name);
    const auto path = write_file(inst.name + ".xml", write_instance(inst));
    const auto r = cli("solve " + path.string());
    const auto s = lines_with(r.out, 's');
    ASSERT_EQ(s.size(), 1u);
    const std::map<std::string, int> expected{
        {"SATISFIABLE", 10}, {"UNSATISFIABLE", 20}, {"OPTIMUM FOUND", 30}, {"UNKNOWN", 0}};
    EXPECT_EQ(r.code, expected.at(s[0]));
    const bool has_solution = s[0] == "SATISFIABLE" || s[0] == "OPTIMUM FOUND";
    EXPECT_EQ(lines_with(r.out, 'v').size(), has_solution ? 1u : 0u);
    if (has_solution) {
      const auto out = write_file(inst.name + ".out", r.out);
      EXPECT_EQ(cli("verify " + path.string() + " " + out.string()).code, 0);
    }
  }
}
