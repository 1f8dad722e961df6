#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "ptfree/checks.hpp"
#include "ptfree/cli.hpp"

using namespace ptfree;
using namespace ptfree::cli;

namespace {

RunConfig cfg(std::string command) {
  RunConfig c;
  c.command = std::move(command);
  return c;
}

Json doc(const RunResult& r) { return Json::parse(r.output); }

struct Proc {
  int code;
  std::string out;
};

Proc shell(const std::string& args) {
  std::string cmd = std::string(PTFREE_CLI_PATH) + " " + args + " 2>&1";
  FILE* f = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, f)) out.append(buf, n);
  int status = pclose(f);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST(ParseEpsilon, Examples) {
  auto e = parse_epsilon("00,11");
  EXPECT_EQ(e.m(), 2u);
  EXPECT_EQ(e.row(1), (Row{1, 1}));
  EXPECT_EQ(parse_epsilon("0").m(), 1u);
  EXPECT_THROW(parse_epsilon("01,0"), ParseError);
  EXPECT_THROW(parse_epsilon("0x"), ParseError);
  EXPECT_THROW(parse_epsilon(""), ParseError);
  EXPECT_THROW(parse_epsilon("01,,10"), ParseError);
  EXPECT_THROW(parse_epsilon("01,"), ParseError);
}

TEST(ParseEpsilon, FileFormat) {
  auto e = parse_epsilon_file_text("# word\n01  # first\n\n10\n");
  EXPECT_EQ(e.to_string(), "01,10");
  EXPECT_THROW(parse_epsilon_file_text("# only comments\n"), ParseError);
  EXPECT_THROW(parse_epsilon_file_text("01\n1\n"), ParseError);
}

TEST(ParseEpsilon, RoundTrip) {
  for (std::size_t m = 1; m <= 2; ++m)
    for (const auto& e : checks::all_epsilon(m, 2)) EXPECT_EQ(parse_epsilon(e.to_string()), e);
}

TEST(Schedules, Parse) {
  auto s = parse_dims_schedule("t,t,t:t=4,6,8");
  EXPECT_EQ(s.ts, (std::vector<std::uint64_t>{4, 6, 8}));
  EXPECT_EQ(s.at(6), (std::vector<std::uint64_t>{6, 6, 6}));
  EXPECT_EQ(eval_schedule_expr("t^3", 4), 64u);
  EXPECT_EQ(eval_schedule_expr("2*t", 5), 10u);
  EXPECT_THROW(parse_dims_schedule("t,t"), ParseError);
  EXPECT_THROW(eval_schedule_expr("t+1", 2), ParseError);
  EXPECT_EQ(parse_b("lex:3", 2).size(), 3u);
  EXPECT_THROW(parse_b("000", 2), SizeMismatch);
}

TEST(Run, ExactMoment) {
  auto c = cfg("exact-moment");
  c.eps = "00,00";
  c.dims = "2,3";
  c.p = 5;
  auto r = run(c);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  auto j = doc(r);
  EXPECT_EQ(j["value"], "55/36");
  EXPECT_NEAR(j["float"].get<double>(), 55.0 / 36.0, 1e-15);
}

TEST(Run, ExactMomentDump) {
  auto c = cfg("exact-moment");
  c.eps = "01,10";
  c.dims = "2,2";
  c.p = 2;
  c.dump_path = "unused";
  auto r = run(c);
  ASSERT_EQ(r.exit_code, 0);
  std::istringstream is(r.dump);
  std::string line;
  ExactValue sum = 0;
  int lines = 0;
  while (std::getline(is, line)) {
    auto t = Json::parse(line);
    sum += parse_exact(t["value"].get<std::string>());
    ++lines;
  }
  EXPECT_EQ(lines, 2);
  EXPECT_EQ(to_string(sum), doc(r)["value"].get<std::string>());
}

TEST(Run, CltLimit) {
  auto c = cfg("clt-limit");
  c.m = "4";
  c.c = "1";
  auto j = doc(run(c));
  EXPECT_EQ(j["value"], "2");
}

TEST(Run, OtherValueCommands) {
  auto v = cfg("variance");
  v.eps = "00";
  v.dims = "2,2";
  v.p = 4;
  EXPECT_EQ(doc(run(v))["value"], "1/16");

  auto l = cfg("limit-moment");
  l.eps = "00,00,00";
  EXPECT_EQ(doc(run(l))["value"], "5");

  auto cm = cfg("centered-moment");
  cm.eps = "00,00";
  cm.dims = "2,3";
  cm.p = 5;
  EXPECT_EQ(doc(run(cm))["value"], "5/6");

  auto s = cfg("s-moment");
  s.dims = "2,2";
  s.p = 4;
  s.m = "3";
  s.B = "lex:2";
  auto sj = doc(run(s));
  EXPECT_NE(sj["value"].get<std::string>().find("sqrt(2)"), std::string::npos);

  auto w = cfg("wick-oracle");
  w.eps = "00,11";
  w.dims = "2,2";
  w.p = 2;
  EXPECT_EQ(doc(run(w))["value"], "3/8");
}

TEST(Run, McAndSpectrumAreReproducible) {
  auto m = cfg("mc");
  m.eps = "01";
  m.dims = "2,2";
  m.p = 4;
  m.samples = 2000;
  m.seed = 42;
  auto a = run(m), b = run(m);
  EXPECT_EQ(a.output, b.output);
  auto j = doc(a);
  for (const char* key : {"mean_re", "mean_im", "stderr", "samples", "seed"}) EXPECT_TRUE(j.contains(key)) << key;

  auto s = cfg("spectrum");
  s.dims = "2,2";
  s.p = 4;
  s.B = "lex:4";
  s.samples = 5;
  s.format = "csv";
  auto h = run(s);
  ASSERT_EQ(h.exit_code, 0) << h.output;
  EXPECT_EQ(h.output.substr(0, h.output.find('\n')), "bin_left,bin_right,count,density");
  EXPECT_EQ(h.output, run(s).output);
}

TEST(Run, CltSweep) {
  auto c = cfg("clt-sweep");
  c.dims_schedule = "t,t:t=2,3";
  c.p_schedule = "t^2";
  c.B = "lex:1,2";
  c.m = "2";
  auto r = run(c);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  std::istringstream is(r.output);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,B,m,exact,exact_float,limit");
  std::getline(is, line);
  EXPECT_EQ(line.substr(0, 10), "2,1,2,1,1,");  // |B| = 1, c = p/D: exactly c = 1
  int rows = 1;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Run, CheckSuites) {
  for (const char* s : {"lem-sign", "split", "technical", "kernel-gap", "oracle"}) {
    auto c = cfg("check");
    c.suite = s;
    auto r = run(c);
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_TRUE(doc(r)["passed"].get<bool>());
  }
}

TEST(Run, ErrorsAreStructured) {
  auto c = cfg("exact-moment");
  c.eps = "00,00,00,00,00,00";
  c.dims = "2,2";
  c.p = 1;
  c.k = 2;
  auto r = run(c);
  EXPECT_EQ(r.exit_code, 2);
  auto j = doc(r);
  EXPECT_EQ(j["error"]["code"], "guard_exceeded");
  EXPECT_TRUE(j["error"].contains("estimated_cost"));

  auto bad = cfg("exact-moment");
  bad.eps = "01,0";
  bad.dims = "2,2";
  bad.p = 1;
  EXPECT_EQ(doc(run(bad))["error"]["code"], "parse_error");

  auto missing = cfg("variance");
  missing.eps = "0";
  EXPECT_EQ(doc(run(missing))["error"]["code"], "precondition_violation");

  auto shape = cfg("exact-moment");
  shape.eps = "0";
  shape.dims = "2,2";
  shape.p = 1;
  EXPECT_EQ(doc(run(shape))["error"]["code"], "size_mismatch");
}

TEST(Run, EveryValueCommandRejectsOutOfGuard) {
  const std::string long_word = "00,00,00,00,00";
  std::vector<RunConfig> cs;
  for (const char* name : {"exact-moment", "variance", "centered-moment", "wick-oracle"}) {
    auto c = cfg(name);
    c.eps = long_word;
    c.dims = "2,2";
    c.p = 2;
    c.guard = 3;
    cs.push_back(c);
  }
  auto l = cfg("limit-moment");
  l.eps = long_word;
  l.guard = 3;
  cs.push_back(l);
  auto s = cfg("s-moment");
  s.dims = "2,2";
  s.p = 4;
  s.m = "5";
  s.B = "lex:2";
  s.guard = 3;
  cs.push_back(s);
  auto sw = cfg("clt-sweep");
  sw.dims_schedule = "t,t:t=2";
  sw.B = "lex:2";
  sw.m = "5";
  sw.guard = 3;
  cs.push_back(sw);
  for (const auto& c : cs) {
    auto r = run(c);
    EXPECT_EQ(r.exit_code, 2) << c.command << r.output;
    EXPECT_EQ(doc(r)["error"]["code"], "guard_exceeded") << c.command;
  }
}

TEST(CommandLine, ParsesSubcommands) {
  const char* argv[] = {"ptfree", "exact-moment", "--eps", "00,00", "--dims", "2,3", "--p", "5", "--k", "2"};
  auto a = parse_command_line(10, argv);
  ASSERT_FALSE(a.exit_now) << a.message;
  EXPECT_EQ(a.config.command, "exact-moment");
  EXPECT_EQ(*a.config.eps, "00,00");
  EXPECT_EQ(a.config.k, 2u);
  const char* bad[] = {"ptfree", "check", "--suite", "nope"};
  auto b = parse_command_line(4, bad);
  EXPECT_TRUE(b.exit_now);
  EXPECT_EQ(b.exit_code, 2);
}

TEST(Binary, ExitCodesAndAtomicOutput) {
  auto ok = shell("clt-limit --m 4 --c 1");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(Json::parse(ok.out)["value"], "2");

  auto guard = shell("exact-moment --eps 00,00,00 --dims 2,2 --p 1 --k 4");
  EXPECT_EQ(guard.code, 2);
  EXPECT_NE(guard.out.find("guard_exceeded"), std::string::npos);

  auto usage = shell("exact-moment --bogus");
  EXPECT_EQ(usage.code, 2);

  auto dir = std::filesystem::temp_directory_path() / "ptfree_cli_test";
  std::filesystem::create_directories(dir);
  auto out = (dir / "m.json").string(), dump = (dir / "terms.jsonl").string();
  auto r1 = shell("exact-moment --eps 01,10 --dims 2,2 --p 2 --k 2 --out " + out + " --dump " + dump);
  EXPECT_EQ(r1.code, 0) << r1.out;
  std::ifstream f(out);
  std::string first((std::istreambuf_iterator<char>(f)), {});
  EXPECT_FALSE(std::filesystem::exists(out + ".tmp"));
  auto r2 = shell("exact-moment --eps 01,10 --dims 2,2 --p 2 --k 2");
  EXPECT_EQ(first, r2.out);
  std::ifstream d(dump);
  int lines = 0;
  for (std::string line; std::getline(d, line);) ++lines;
  EXPECT_EQ(lines, 24);
  std::filesystem::remove_all(dir);
}

TEST(Binary, GuardFromEnvironment) {
  auto r = shell("exact-moment --eps 00,00,00 --dims 2,2 --p 1 >/dev/null; PTFREE_GUARD=2 " +
                 std::string(PTFREE_CLI_PATH) + " exact-moment --eps 00,00,00 --dims 2,2 --p 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("guard_exceeded"), std::string::npos);
}
