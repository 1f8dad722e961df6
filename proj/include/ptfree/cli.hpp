#pragma once

// Command-line front end: argument parsing into RunConfig, dispatch to the
// engines, and rendering of JSON/CSV documents. Kept header-only so the test
// suite can drive `run` without spawning processes.

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptfree/checks.hpp"
#include "ptfree/errors.hpp"
#include "ptfree/exact.hpp"
#include "ptfree/matrixlab.hpp"
#include "ptfree/model.hpp"
#include "ptfree/moments.hpp"
#include "ptfree/wick.hpp"

namespace ptfree::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::optional<std::string> eps;       ///< inline `00,11`
  std::optional<std::string> eps_file;  ///< one row per line, `#` comments
  std::optional<std::string> dims;      ///< `2,3`
  std::optional<std::uint64_t> p;
  std::size_t k = 1;
  std::optional<std::string> m;  ///< single value, or a list for clt-sweep
  std::optional<std::string> c;  ///< exact rational or decimal
  std::optional<std::string> B;  ///< `lex:K`, `lex:K1,K2`, or explicit rows
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  std::optional<std::size_t> guard;
  std::string format = "json";
  std::optional<std::string> dump_path;
  std::optional<std::string> out_path;
  std::string suite = "all";
  std::optional<std::string> dims_schedule;
  std::optional<std::string> p_schedule;
  std::size_t bins = 40;
  std::optional<unsigned> threads;
};

struct RunResult {
  int exit_code = 0;
  std::string output;
  std::string dump;  ///< per-term JSON lines, when requested
};

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    throw ParseError(what + ": expected a non-negative integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError(what + ": integer out of range: '" + s + "'");
  }
}

inline std::vector<std::uint64_t> parse_uint_list(const std::string& s, const std::string& what) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_uint(part, what));
  if (out.empty()) throw ParseError(what + ": empty list");
  return out;
}

inline std::vector<Row> parse_rows(const std::vector<std::string>& lines) {
  std::vector<Row> rows;
  for (const auto& line : lines) {
    if (line.empty()) throw ParseError("ε: empty row");
    Row r;
    for (char ch : line) {
      if (ch != '0' && ch != '1') throw ParseError(std::string("ε: illegal character '") + ch + "'");
      r.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    if (!rows.empty() && r.size() != rows.front().size()) throw ParseError("ε: ragged rows");
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ParseError("ε: empty input");
  return rows;
}

}  // namespace detail

/// `00,11` → rows (0,0),(1,1).
inline EpsilonMatrix parse_epsilon(const std::string& text) {
  if (detail::trim(text).empty()) throw ParseError("ε: empty input");
  return EpsilonMatrix(detail::parse_rows(detail::split(detail::trim(text), ',')));
}

/// One row per line; `#` starts a comment; blank lines are skipped.
inline EpsilonMatrix parse_epsilon_file_text(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  return EpsilonMatrix(detail::parse_rows(lines));
}

inline EpsilonMatrix load_epsilon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read ε file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_epsilon_file_text(ss.str());
}

/// Schedule expressions in t: products of integers, `t` and `t^N`, e.g.
/// `t`, `2*t`, `t^3`.
inline std::uint64_t eval_schedule_expr(const std::string& expr, std::uint64_t t) {
  std::uint64_t v = 1;
  for (const auto& raw : detail::split(expr, '*')) {
    if (raw.empty()) throw ParseError("schedule: empty factor in '" + expr + "'");
    std::uint64_t f = 1;
    if (raw[0] == 't') {
      std::uint64_t e = 1;
      if (raw.size() > 1) {
        if (raw[1] != '^') throw ParseError("schedule: bad factor '" + raw + "'");
        e = detail::parse_uint(raw.substr(2), "schedule exponent");
      }
      for (std::uint64_t i = 0; i < e; ++i) f *= t;
    } else {
      f = detail::parse_uint(raw, "schedule factor");
    }
    v *= f;
  }
  return v;
}

/// `t,t,t:t=4,6,8` → leg expressions and the values of t.
struct DimsSchedule {
  std::vector<std::string> legs;
  std::vector<std::uint64_t> ts;

  std::vector<std::uint64_t> at(std::uint64_t t) const {
    std::vector<std::uint64_t> d;
    for (const auto& e : legs) d.push_back(eval_schedule_expr(e, t));
    return d;
  }
};

inline DimsSchedule parse_dims_schedule(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("dims schedule must look like 't,t:t=4,6,8'");
  DimsSchedule s;
  s.legs = detail::split(text.substr(0, colon), ',');
  std::string rhs = detail::trim(text.substr(colon + 1));
  if (rhs.rfind("t=", 0) != 0) throw ParseError("dims schedule: expected 't=' after ':'");
  s.ts = detail::parse_uint_list(rhs.substr(2), "dims schedule");
  for (const auto& e : s.legs) eval_schedule_expr(e, 1);
  return s;
}

/// `lex:K` → the first K rows of {0,1}ⁿ; otherwise explicit rows `000,011`.
inline std::vector<Row> parse_b(const std::string& spec, std::size_t n) {
  if (spec.rfind("lex:", 0) == 0) return moments::lex_subset(n, detail::parse_uint(spec.substr(4), "B"));
  auto rows = parse_epsilon(spec).rows();
  if (rows.front().size() != n) throw SizeMismatch("B rows must have length n = " + std::to_string(n));
  return rows;
}

inline ExactValue parse_c(const std::string& text) {
  try {
    return parse_exact(text);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("c: cannot parse '" + text + "'");
  }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

namespace detail {

inline std::string dump_doc(const Json& j) { return j.dump(2) + "\n"; }

inline Json exact_json(const ExactValue& v) { return Json{{"value", to_string(v)}, {"float", to_double(v)}}; }

inline EpsilonMatrix need_eps(const RunConfig& cfg) {
  if (cfg.eps && cfg.eps_file) throw PreconditionError("give either --eps or --eps-file, not both");
  if (cfg.eps) return parse_epsilon(*cfg.eps);
  if (cfg.eps_file) return load_epsilon_file(*cfg.eps_file);
  throw PreconditionError(cfg.command + " requires --eps or --eps-file");
}

inline DimSpec need_dims(const RunConfig& cfg) {
  if (!cfg.dims) throw PreconditionError(cfg.command + " requires --dims");
  if (!cfg.p) throw PreconditionError(cfg.command + " requires --p");
  return DimSpec(parse_uint_list(*cfg.dims, "dims"), *cfg.p);
}

inline std::size_t need_m(const RunConfig& cfg) {
  if (!cfg.m) throw PreconditionError(cfg.command + " requires --m");
  return parse_uint(*cfg.m, "m");
}

inline std::size_t guard_size(const RunConfig& cfg) {
  if (cfg.guard) return *cfg.guard;
  if (const char* env = std::getenv("PTFREE_GUARD")) return parse_uint(env, "PTFREE_GUARD");
  return combinat::EnumerationGuard{}.max_perm_size;
}

inline moments::MomentOptions moment_options(const RunConfig& cfg) {
  moments::MomentOptions opt;
  opt.guard.max_perm_size = guard_size(cfg);
  if (cfg.threads) opt.threads = *cfg.threads;
  return opt;
}

inline Json inputs(const RunConfig& cfg, const EpsilonMatrix* eps, const DimSpec* dims) {
  Json j;
  j["command"] = cfg.command;
  if (eps) j["eps"] = eps->to_string();
  if (dims) {
    j["dims"] = dims->d();
    j["p"] = dims->p();
  }
  return j;
}

inline Json term_json(const moments::TermRecord& t) {
  return Json{{"sigma", t.sigma.to_string()}, {"cycles", t.cycles}, {"f", t.f}, {"value", to_string(t.value)}};
}

inline RunResult cmd_exact_moment(const RunConfig& cfg) {
  auto eps = need_eps(cfg);
  auto dims = need_dims(cfg);
  auto opt = moment_options(cfg);
  RunResult res;
  Json j = inputs(cfg, &eps, &dims);
  j["k"] = cfg.k;
  j.update(exact_json(moments::exact_moment(eps, cfg.k, dims, opt)));
  if (cfg.dump_path)
    moments::for_each_term(
        eps, cfg.k, dims, [&](const moments::TermRecord& t) { res.dump += term_json(t).dump() + "\n"; }, opt);
  res.output = dump_doc(j);
  return res;
}

inline RunResult cmd_variance(const RunConfig& cfg) {
  auto eps = need_eps(cfg);
  auto dims = need_dims(cfg);
  auto rep = moments::variance_report(eps, dims, moment_options(cfg));
  Json j = inputs(cfg, &eps, &dims);
  j.update(exact_json(rep.variance));
  j["mean"] = to_string(rep.mean);
  j["second_moment"] = to_string(rep.second_moment);
  j["restricted_sum"] = to_string(rep.restricted_sum);
  return {0, dump_doc(j), {}};
}

inline RunResult cmd_limit_moment(const RunConfig& cfg) {
  auto eps = need_eps(cfg);
  ExactValue c = cfg.c ? parse_c(*cfg.c) : ExactValue(1);
  combinat::EnumerationGuard guard{guard_size(cfg)};
  Json j = inputs(cfg, &eps, nullptr);
  j["c"] = to_string(c);
  j.update(exact_json(moments::limit_mixed_moment(eps, c, guard)));
  return {0, dump_doc(j), {}};
}

inline RunResult cmd_centered_moment(const RunConfig& cfg) {
  auto eps = need_eps(cfg);
  auto dims = need_dims(cfg);
  ExactValue c = cfg.c ? parse_c(*cfg.c) : dims.ratio();
  Json j = inputs(cfg, &eps, &dims);
  j["c"] = to_string(c);
  j.update(exact_json(moments::centered_exact_moment(eps.rows(), dims, c, moment_options(cfg))));
  return {0, dump_doc(j), {}};
}

inline RunResult cmd_s_moment(const RunConfig& cfg) {
  auto dims = need_dims(cfg);
  const std::size_t m = need_m(cfg);
  if (!cfg.B) throw PreconditionError("s-moment requires --B");
  auto B = parse_b(*cfg.B, dims.n());
  ExactValue c = cfg.c ? parse_c(*cfg.c) : dims.ratio();
  auto rep = moments::exact_s_moment_report(B, m, dims, c, moment_options(cfg));
  Json j = inputs(cfg, nullptr, &dims);
  j["m"] = m;
  j["B"] = EpsilonMatrix(B).to_string();
  j["c"] = to_string(c);
  j["value"] = rep.value.to_string();
  j["float"] = rep.value.to_double();
  j["limit"] = to_string(moments::clt_limit_moment(m, c));
  j["warnings"] = moments::clt_warnings(dims);
  return {0, dump_doc(j), {}};
}

inline RunResult cmd_clt_limit(const RunConfig& cfg) {
  const std::size_t m = need_m(cfg);
  ExactValue c = cfg.c ? parse_c(*cfg.c) : ExactValue(1);
  Json j{{"command", cfg.command}, {"m", m}, {"c", to_string(c)}};
  j.update(exact_json(moments::clt_limit_moment(m, c)));
  return {0, dump_doc(j), {}};
}

inline RunResult cmd_wick_oracle(const RunConfig& cfg) {
  auto eps = need_eps(cfg);
  auto dims = need_dims(cfg);
  wick::WickOptions opt;
  if (cfg.threads) opt.threads = *cfg.threads;
  Json j = inputs(cfg, &eps, &dims);
  j["k"] = cfg.k;
  j.update(exact_json(wick::wick_exact_moment(eps, cfg.k, dims, opt)));
  return {0, dump_doc(j), {}};
}

inline RunResult cmd_mc(const RunConfig& cfg) {
  auto eps = need_eps(cfg);
  auto dims = need_dims(cfg);
  matrixlab::McOptions opt;
  if (cfg.threads) opt.threads = *cfg.threads;
  auto est = matrixlab::mc_estimate(eps, cfg.k, dims, cfg.samples, cfg.seed, opt);
  Json j = inputs(cfg, &eps, &dims);
  j["k"] = cfg.k;
  j["mean_re"] = est.mean.real();
  j["mean_im"] = est.mean.imag();
  j["stderr"] = est.stderr_re;
  j["max_abs_imag"] = est.max_abs_imag;
  j["samples"] = est.samples;
  j["seed"] = est.seed;
  return {0, dump_doc(j), {}};
}

inline RunResult cmd_clt_sweep(const RunConfig& cfg) {
  if (!cfg.dims_schedule) throw PreconditionError("clt-sweep requires --dims-schedule");
  if (!cfg.B || cfg.B->rfind("lex:", 0) != 0) throw PreconditionError("clt-sweep requires --B lex:K[,K...]");
  auto sched = parse_dims_schedule(*cfg.dims_schedule);
  auto sizes = parse_uint_list(cfg.B->substr(4), "B");
  std::vector<std::uint64_t> ms = cfg.m ? parse_uint_list(*cfg.m, "m") : std::vector<std::uint64_t>{2, 4};
  auto opt = moment_options(cfg);
  std::ostringstream os;
  os.precision(17);
  os << "t,B,m,exact,exact_float,limit\n";
  for (auto t : sched.ts) {
    auto d = sched.at(t);
    std::uint64_t D = 1;
    for (auto x : d) D *= x;
    DimSpec dims(d, cfg.p_schedule ? eval_schedule_expr(*cfg.p_schedule, t) : D);
    ExactValue c = cfg.c ? parse_c(*cfg.c) : dims.ratio();
    for (auto b : sizes) {
      auto B = moments::lex_subset(dims.n(), b);
      for (auto m : ms) {
        auto v = moments::exact_s_moment(B, m, dims, c, opt);
        os << t << ',' << b << ',' << m << ',' << v.to_string() << ',' << v.to_double() << ','
           << to_string(moments::clt_limit_moment(m, c)) << '\n';
      }
    }
  }
  return {0, os.str(), {}};
}

inline RunResult cmd_spectrum(const RunConfig& cfg) {
  auto dims = need_dims(cfg);
  if (!cfg.B) throw PreconditionError("spectrum requires --B");
  auto B = parse_b(*cfg.B, dims.n());
  const double c = to_double(cfg.c ? parse_c(*cfg.c) : dims.ratio());
  matrixlab::McOptions opt;
  if (cfg.threads) opt.threads = *cfg.threads;
  auto est = matrixlab::mc_s_spectrum(dims, B, c, cfg.samples, cfg.seed, 6, true, opt);
  if (cfg.format == "csv") {
    auto [lo, hi] = std::minmax_element(est.eigenvalues.begin(), est.eigenvalues.end());
    double pad = 1e-9 * std::max(1.0, *hi - *lo);
    return {0, matrixlab::histogram_csv(matrixlab::histogram(est.eigenvalues, cfg.bins, *lo - pad, *hi + pad)), {}};
  }
  Json j = inputs(cfg, nullptr, &dims);
  j["B"] = EpsilonMatrix(B).to_string();
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  Json moms = Json::array();
  for (std::size_t m = 1; m < est.moments.size(); ++m)
    moms.push_back(Json{{"m", m},
                        {"mean", est.moments[m].mean_re},
                        {"stderr", est.moments[m].stderr_mean()},
                        {"limit", to_double(moments::clt_limit_moment(m, ExactValue(1)))}});
  j["moments"] = moms;
  return {0, dump_doc(j), {}};
}

inline RunResult cmd_check(const RunConfig& cfg) {
  std::vector<checks::CheckResult> results;
  auto want = [&](const char* name) { return cfg.suite == "all" || cfg.suite == name; };
  if (want("lem-sign")) results.push_back(checks::lem_sign_suite());
  if (want("split")) results.push_back(checks::split_suite());
  if (want("technical")) results.push_back(checks::technical_suite());
  if (want("kernel-gap")) results.push_back(checks::kernel_gap_suite(checks::default_kernel_grid()));
  if (want("oracle")) results.push_back(checks::oracle_suite());
  if (results.empty()) throw PreconditionError("unknown suite '" + cfg.suite + "'");
  bool ok = true;
  Json arr = Json::array();
  for (const auto& r : results) {
    ok = ok && r.passed();
    Json e{{"suite", r.suite}, {"assertions", r.assertions}, {"failures", r.failures}, {"passed", r.passed()}};
    if (!r.passed()) e["counterexample"] = r.counterexample;
    arr.push_back(e);
  }
  Json j{{"command", "check"}, {"suite", cfg.suite}, {"passed", ok}, {"results", arr}};
  return {ok ? 0 : 1, dump_doc(j), {}};
}

}  // namespace detail

/// Structured error document for exit code 2.
inline std::string error_document(const std::string& code, const std::string& message,
                                  const GuardExceeded* guard = nullptr) {
  Json e{{"code", code}, {"message", message}};
  if (guard) {
    e["estimated_cost"] = guard->estimated_cost();
    e["limit"] = guard->limit();
  }
  return Json{{"error", e}}.dump(2) + "\n";
}

/// Runs one subcommand. Library errors become exit code 2 with an error
/// document; failed checks give exit code 1.
inline RunResult run(const RunConfig& cfg) {
  try {
    if (cfg.format != "json" && cfg.format != "csv") throw PreconditionError("--format must be json or csv");
    const std::string& c = cfg.command;
    if (c == "exact-moment") return detail::cmd_exact_moment(cfg);
    if (c == "variance") return detail::cmd_variance(cfg);
    if (c == "limit-moment") return detail::cmd_limit_moment(cfg);
    if (c == "centered-moment") return detail::cmd_centered_moment(cfg);
    if (c == "s-moment") return detail::cmd_s_moment(cfg);
    if (c == "clt-limit") return detail::cmd_clt_limit(cfg);
    if (c == "wick-oracle") return detail::cmd_wick_oracle(cfg);
    if (c == "mc") return detail::cmd_mc(cfg);
    if (c == "clt-sweep") return detail::cmd_clt_sweep(cfg);
    if (c == "spectrum") return detail::cmd_spectrum(cfg);
    if (c == "check") return detail::cmd_check(cfg);
    throw PreconditionError("unknown subcommand '" + c + "'");
  } catch (const GuardExceeded& e) {
    return {2, error_document(e.code(), e.what(), &e), {}};
  } catch (const Error& e) {
    return {2, error_document(e.code(), e.what()), {}};
  }
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

struct ParsedArgs {
  RunConfig config;
  bool exit_now = false;  ///< help was printed or parsing failed
  int exit_code = 0;
  std::string message;
};

inline ParsedArgs parse_command_line(int argc, const char* const* argv) {
  ParsedArgs out;
  RunConfig& cfg = out.config;
  CLI::App app{"Exact and sampled moments of partial transposes of Wishart matrices", "ptfree"};
  app.require_subcommand(1);

  auto add = [&](CLI::App* s, const std::string& opts) {
    auto has = [&](const char* o) { return (" " + opts + " ").find(std::string(" ") + o + " ") != std::string::npos; };
    if (has("eps")) {
      s->add_option("--eps", cfg.eps, "ε rows, comma separated, e.g. 00,11");
      s->add_option("--eps-file", cfg.eps_file, "file with one ε row per line");
    }
    if (has("dims")) s->add_option("--dims", cfg.dims, "d as a comma list, e.g. 2,3");
    if (has("p")) s->add_option("--p", cfg.p, "number of samples p (columns of G)");
    if (has("k")) s->add_option("--k", cfg.k, "moment power k")->check(CLI::PositiveNumber);
    if (has("m")) s->add_option("--m", cfg.m, "word length m");
    if (has("c")) s->add_option("--c", cfg.c, "ratio c (default p/D, or 1 without dims)");
    if (has("B")) s->add_option("--B", cfg.B, "lex:K or explicit rows");
    if (has("samples")) s->add_option("--samples", cfg.samples, "Monte Carlo samples");
    if (has("seed")) s->add_option("--seed", cfg.seed, "random seed");
    if (has("dump")) s->add_option("--dump", cfg.dump_path, "write per-term JSON lines here");
    if (has("bins")) s->add_option("--bins", cfg.bins, "histogram bins")->check(CLI::PositiveNumber);
    if (has("sched")) {
      s->add_option("--dims-schedule", cfg.dims_schedule, "e.g. t,t,t:t=4,6,8");
      s->add_option("--p-schedule", cfg.p_schedule, "e.g. t^3 (default D)");
    }
    s->add_option("--guard", cfg.guard, "largest permutation size to enumerate");
    s->add_option("--threads", cfg.threads, "worker threads");
    s->add_option("--format", cfg.format, "json or csv");
    s->add_option("--out", cfg.out_path, "write the document here instead of stdout");
  };

  struct Sub {
    const char* name;
    const char* help;
    const char* opts;
  };
  const Sub subs[] = {
      {"exact-moment", "exact E[X_eps^k]", "eps dims p k dump"},
      {"variance", "exact Var(X_eps)", "eps dims p"},
      {"limit-moment", "large-dimension limit of E tr(W^eps1...W^epsm)", "eps c"},
      {"centered-moment", "exact (E x tr)(a_eps1...a_epsm)", "eps dims p c"},
      {"s-moment", "exact moment of the centred sum s_d", "dims p m c B"},
      {"clt-limit", "semicircle moment c^{m/2} Catalan(m/2)", "m c"},
      {"wick-oracle", "brute-force Gaussian oracle for E[X_eps^k]", "eps dims p k"},
      {"mc", "Monte Carlo estimate of E[X_eps^k]", "eps dims p k samples seed"},
      {"clt-sweep", "CSV table of s-moments over a dimension schedule", "sched m c B"},
      {"spectrum", "sampled spectrum of s_d (CSV histogram or JSON moments)", "dims p c B samples seed bins"},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add(sub, s.opts);
    sub->callback([&cfg, name = std::string(s.name)] { cfg.command = name; });
  }
  auto* check = app.add_subcommand("check", "exhaustive property suites");
  check->add_option("--suite", cfg.suite, "lem-sign, split, technical, kernel-gap, oracle or all")
      ->check(CLI::IsMember({"all", "lem-sign", "split", "technical", "kernel-gap", "oracle"}));
  check->add_option("--out", cfg.out_path, "write the document here instead of stdout");
  check->add_option("--threads", cfg.threads, "worker threads");
  check->callback([&cfg] { cfg.command = "check"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out.exit_now = true;
    out.exit_code = 0;
    out.message = app.help();
  } catch (const CLI::CallForAllHelp& e) {
    out.exit_now = true;
    out.exit_code = 0;
    out.message = app.help("", CLI::AppFormatMode::All);
  } catch (const CLI::ParseError& e) {
    out.exit_now = true;
    out.exit_code = 2;
    out.message = error_document("parse_error", e.what());
  }
  return out;
}

/// Writes `content` to `path` through a temporary file and a rename.
inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PreconditionError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw PreconditionError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace ptfree::cli
