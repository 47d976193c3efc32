#include "cli.hpp"

#include <pthread.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pickchoose/errors.hpp"
#include "pickchoose/family.hpp"
#include "pickchoose/football.hpp"
#include "pickchoose/http_server.hpp"
#include "pickchoose/service.hpp"
#include "pickchoose/solver.hpp"
#include "pickchoose/strategy.hpp"
#include "pickchoose/verify.hpp"

namespace pickchoose::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used == std::string(v).size()) return x;
  } catch (const std::exception&) {
  }
  throw InputError(std::string("environment variable ") + name + " has non-integer value \"" + v + "\"");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read \"" + path.string() + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A path if such a file exists, otherwise inline text.
std::string load_text(const std::string& arg) {
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

// Accepts a family in either text format, or the structured output of
// `solve`, whose "family" field holds the structured family.
Family load_family(const std::string& arg, std::optional<int> n, std::optional<int> k, int cap) {
  const std::string text = load_text(arg);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError("malformed family JSON in \"" + arg + "\": " + e.what());
    }
    if (j.is_object() && j.contains("family") && j["family"].is_object()) return family_from_json(j["family"], cap);
    return family_from_json(j, cap);
  }
  return parse_family(text, n, k, cap);
}

json elements_json(const ElementSet& s) { return s.elements(); }

std::string set_text(const ElementSet& s, bool intervals) {
  return intervals ? s.to_interval_string() : s.to_string();
}

std::optional<int> recommended_offer(const ElementSet& margin) {
  for (int x : middle_out_order(margin.n())) {
    if (margin.contains(x)) return x;
  }
  return std::nullopt;
}

void print_family(std::ostream& out, const Family& f) {
  if (f.n() <= 9) {
    out << "  sets: " << (f.empty() ? std::string("(none)") : serialize_compact_family(f)) << '\n';
  } else {
    out << "  sets: " << serialize_structured_family(f) << '\n';
  }
}

// --- solve -------------------------------------------------------------------------

struct SolveOptions {
  std::string family;
  std::optional<int> n;
  std::optional<int> k;
  bool json = false;
  int cap = kDefaultGroundSetCap;
};

int do_solve(const SolveOptions& o, std::ostream& out) {
  const Family f = load_family(o.family, o.n, o.k, o.cap);
  const Solver solver(SolverConfig{o.cap, 0, true});
  const GameStatus st = solver.status(f);
  const bool inc = is_increasing(f);
  std::optional<MarginProfile> p;
  if (!f.is_terminal()) p = solver.margin_profile(f);
  const std::optional<int> offer = p ? recommended_offer(p->alice_margin()) : std::nullopt;

  if (o.json) {
    json j{{"family", family_to_json(f)},
           {"n", f.n()},
           {"k", f.k()},
           {"size", f.size()},
           {"increasing", inc},
           {"alice_wins", st.alice},
           {"bob_wins", st.bob}};
    if (p) {
      j["margins"] = {{"u_a", elements_json(p->u_a)},
                      {"l_a", elements_json(p->l_a)},
                      {"u_b", elements_json(p->u_b)},
                      {"l_b", elements_json(p->l_b)},
                      {"alice_margin", elements_json(p->alice_margin())},
                      {"bob_margin", elements_json(p->bob_margin())}};
      j["first_offers"] = elements_json(p->alice_margin());
    } else {
      j["margins"] = nullptr;
      j["first_offers"] = json::array();
    }
    j["recommended_first_offer"] = offer ? json(*offer) : json(nullptr);
    out << j.dump() << '\n';
    return kOk;
  }

  out << "family: n=" << f.n() << " k=" << f.k() << ", " << f.size() << " sets"
      << (inc ? " (increasing)" : " (not increasing)") << '\n';
  print_family(out, f);
  out << "Alice's game (protagonist picks first): " << (st.alice ? "Alice wins" : "Alice loses") << '\n';
  out << "Bob's game (protagonist chooses first): " << (st.bob ? "Bob wins" : "Bob loses") << '\n';
  if (p) {
    out << "U_A = " << set_text(p->u_a, inc) << "  L_A = " << set_text(p->l_a, inc) << '\n';
    out << "U_B = " << set_text(p->u_b, inc) << "  L_B = " << set_text(p->l_b, inc) << '\n';
    out << "Alice's margin = " << set_text(p->alice_margin(), inc)
        << "  Bob's margin = " << set_text(p->bob_margin(), inc) << '\n';
  } else {
    out << "terminal family: no moves to analyse\n";
  }
  if (offer) {
    out << "recommended first offer: " << *offer << '\n';
  } else {
    out << "recommended first offer: none (Alice has no winning offer)\n";
  }
  return kOk;
}

// --- football ----------------------------------------------------------------------

struct FootballOptions {
  std::string board;
  bool json = false;
  int cap = kDefaultGroundSetCap;
};

int do_football(const FootballOptions& o, std::ostream& out) {
  std::string text = load_text(o.board);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  const Board board = parse_board(text);
  const Solver solver(SolverConfig{o.cap, 0, true});
  const FootballAnalysis a = analyze(solver, board);
  std::optional<FourElementRule> rule;
  if (board.size() == 4) rule = four_element_rule(board);

  if (o.json) {
    json j = analysis_to_json(board, a);
    j["four_element_rule"] = rule ? json(to_string(*rule)) : json(nullptr);
    out << j.dump() << '\n';
    return kOk;
  }
  out << "board (sorted): " << board.to_string() << "  total " << to_string(board.total()) << '\n';
  out << "winning sets for a strict majority: " << a.alice_family.size() << " of "
      << binomial(board.size(), board.m()) << '\n';
  out << "Alice can force a strict win: " << (a.alice_wins ? "yes" : "no") << '\n';
  out << "Bob can force a strict win: " << (a.bob_wins ? "yes" : "no") << '\n';
  out << "draw under optimal play: " << (a.draw_possible ? "yes" : "no") << '\n';
  if (rule) out << "Bob's rule: " << to_string(*rule) << '\n';
  return kOk;
}

// --- verify ------------------------------------------------------------------------

struct VerifyOptions {
  std::string theorem;
  VerifyRange range;
  bool exhaustive = false;
  bool sampled = false;
  bool interior = false;
  bool json = false;
  bool timing = false;
  std::string violations_dir;
  std::string family;
  std::optional<int> family_n;
  int cap = kDefaultGroundSetCap;
};

// Replays one theorem's check on a single family (e.g. a violation file).
int verify_one(const VerifyOptions& o, std::ostream& out) {
  const Family f = load_family(o.family, o.family_n, o.range.k, o.cap);
  const Solver solver(SolverConfig{o.cap, 0, true});
  const auto violation = check_family(o.theorem, solver, f);
  if (o.json) {
    out << json{{"theorem", o.theorem},
                {"family", family_to_json(f)},
                {"violation", violation ? json(*violation) : json(nullptr)},
                {"passed", !violation}}
               .dump()
        << '\n';
  } else {
    out << o.theorem << ": " << (violation ? "FAIL" : "PASS") << " on " << serialize_structured_family(f) << '\n';
    if (violation) out << "  " << *violation << '\n';
  }
  return violation ? kViolations : kOk;
}

void write_violations(const VerificationReport& r, const std::string& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < r.violations.size(); ++i) {
    json j = family_to_json(r.violations[i].family);
    j["detail"] = r.violations[i].detail;
    const fs::path path = fs::path(dir) / (r.theorem + "-" + std::to_string(i + 1) + ".json");
    std::ofstream f(path);
    if (!f) throw InputError("cannot write \"" + path.string() + "\"");
    f << j.dump() << '\n';
  }
}

int do_verify(VerifyOptions o, std::ostream& out) {
  if (!o.family.empty()) return verify_one(o, out);
  if (o.exhaustive && o.sampled) throw InputError("--exhaustive and --sampled are mutually exclusive");
  if (o.sampled) o.range.mode = Mode::Sampled;
  if (o.range.n_min > o.range.n_max) {
    throw InputError("--n-min " + std::to_string(o.range.n_min) + " exceeds --n-max " + std::to_string(o.range.n_max));
  }

  VerificationReport report;
  if (o.theorem == "empty-margin") {
    const EmptyMarginSearch s = find_empty_margin_bob_win(o.range.n_max, o.interior, o.range.exhaustive_cap);
    report = VerificationReport{"empty-margin", o.range, s.families_checked, {}, 0.0, s.witness};
  } else {
    report = run_verification(o.theorem, o.range);
  }

  if (!o.violations_dir.empty() && !report.violations.empty()) write_violations(report, o.violations_dir);

  if (o.json) {
    json j = report.to_json(o.timing);
    if (o.theorem == "empty-margin") j["interior_only"] = o.interior;
    out << j.dump() << '\n';
  } else {
    out << report.summary() << '\n';
    if (o.timing) out << "elapsed: " << report.elapsed_seconds << " s\n";
  }
  return report.passed() ? kOk : kViolations;
}

// --- enumerate ---------------------------------------------------------------------

struct EnumerateOptions {
  int n = 0;
  std::optional<int> k;
  bool stream = false;
  bool json = false;
  int exhaustive_cap = kDefaultExhaustiveCap;
};

int do_enumerate(const EnumerateOptions& o, std::ostream& out) {
  if (o.n < 0) throw InputError("-n must be nonnegative, got " + std::to_string(o.n));
  if (o.k && (*o.k < 0 || *o.k > o.n)) {
    throw InputError("-k " + std::to_string(*o.k) + " is outside 0.." + std::to_string(o.n));
  }
  const int k_min = o.k.value_or(0);
  const int k_max = o.k.value_or(o.n);
  json counts = json::array();
  std::uint64_t total = 0;
  for (int k = k_min; k <= k_max; ++k) {
    const auto c = enumerate_increasing(
        o.n, k,
        [&](const Family& f) {
          if (!o.stream) return;
          if (o.json) {
            out << family_to_json(f).dump() << '\n';
          } else {
            out << (f.n() <= 9 ? serialize_compact_family(f) : serialize_structured_family(f)) << '\n';
          }
        },
        o.exhaustive_cap);
    counts.push_back({{"k", k}, {"count", c}});
    total += c;
  }
  if (o.json) {
    out << json{{"n", o.n}, {"counts", counts}, {"total", total}}.dump() << '\n';
  } else {
    for (const auto& c : counts) {
      out << "n=" << o.n << " k=" << c["k"].get<int>() << ": " << c["count"].get<std::uint64_t>()
          << " increasing families\n";
    }
    if (!o.k) out << "total: " << total << '\n';
  }
  return kOk;
}

// --- serve -------------------------------------------------------------------------

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  int cap = 12;
  std::string snapshot;
};

int do_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  GameService service(ServiceConfig{o.cap, 10000});
  if (!o.snapshot.empty() && fs::exists(o.snapshot)) {
    service.load_snapshot(o.snapshot);
    out << "restored " << service.session_count() << " sessions from " << o.snapshot << '\n';
  }
  // Handle SIGINT/SIGTERM on this thread; server threads inherit the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  HttpServer server(service);
  const int port = server.bind(o.host, o.port);
  if (port < 0) {
    err << "error: cannot bind " << o.host << ":" << o.port << '\n';
    return kUsage;
  }
  out << "listening on http://" << o.host << ":" << port << std::endl;
  std::thread worker([&] { server.serve(); });
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  worker.join();
  if (!o.snapshot.empty()) {
    service.save_snapshot(o.snapshot);
    out << "saved " << service.session_count() << " sessions to " << o.snapshot << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact solver and verification workbench for picker-chooser games", "pickchoose"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pickchoose 0.1.0");

  int solver_cap = kDefaultGroundSetCap;
  int exhaustive_cap = kDefaultExhaustiveCap;
  int service_cap = 12;
  try {
    solver_cap = env_int("PICKCHOOSE_GROUND_SET_CAP", solver_cap);
    exhaustive_cap = env_int("PICKCHOOSE_EXHAUSTIVE_CAP", exhaustive_cap);
    service_cap = env_int("PICKCHOOSE_SERVICE_CAP", service_cap);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  SolveOptions solve;
  solve.cap = solver_cap;
  auto* solve_cmd = app.add_subcommand("solve", "Decide both games on a family and report the margins");
  solve_cmd->add_option("-f,--family", solve.family, "Family file or inline text (structured JSON or compact)")
      ->required();
  solve_cmd->add_option("-n", solve.n, "Ground set size for the compact format");
  solve_cmd->add_option("-k", solve.k, "Set size for the compact format");
  solve_cmd->add_flag("--json", solve.json, "Structured output");
  solve_cmd->add_option("--cap", solve.cap, "Largest n accepted (env PICKCHOOSE_GROUND_SET_CAP)");

  FootballOptions football;
  football.cap = solver_cap;
  auto* football_cmd = app.add_subcommand("football", "Analyse football on a board of scores");
  football_cmd->add_option("-b,--board", football.board, "Comma-separated scores, or a file holding them")
      ->required();
  football_cmd->add_flag("--json", football.json, "Structured output");
  football_cmd->add_option("--cap", football.cap, "Largest board accepted (env PICKCHOOSE_GROUND_SET_CAP)");

  VerifyOptions verify;
  verify.range.exhaustive_cap = exhaustive_cap;
  auto* verify_cmd = app.add_subcommand("verify", "Check a theorem over a range of families");
  std::string ids;
  for (const auto& id : verification_ids()) ids += (ids.empty() ? "" : ", ") + id;
  verify_cmd->add_option("-t,--theorem", verify.theorem, "One of: " + ids)->required();
  verify_cmd->add_option("--n-min", verify.range.n_min, "Smallest n")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--n-max", verify.range.n_max, "Largest n")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("-k", verify.range.k, "Restrict to one k");
  verify_cmd->add_flag("--exhaustive", verify.exhaustive, "Check every family (default)");
  verify_cmd->add_flag("--sampled", verify.sampled, "Check random families");
  verify_cmd->add_option("--samples", verify.range.samples, "Samples per n (boards for football)");
  verify_cmd->add_option("--seed", verify.range.seed, "Random seed");
  verify_cmd->add_option("--threads", verify.range.threads, "Worker threads, 0 = all cores");
  verify_cmd->add_option("--exhaustive-cap", verify.range.exhaustive_cap,
                         "Largest n for exhaustive enumeration (env PICKCHOOSE_EXHAUSTIVE_CAP)");
  verify_cmd->add_flag("--interior", verify.interior, "empty-margin: only 2 <= k <= n-2");
  verify_cmd->add_flag("--json", verify.json, "Structured output");
  verify_cmd->add_flag("--timing", verify.timing, "Include elapsed time");
  verify_cmd->add_option("--violations-dir", verify.violations_dir, "Write each violating family to this directory");
  verify_cmd->add_option("-f,--family", verify.family, "Check this one family instead of a range (replay)");
  verify_cmd->add_option("-n", verify.family_n, "Ground set size for a compact --family");
  verify.cap = solver_cap;

  EnumerateOptions enumerate;
  enumerate.exhaustive_cap = exhaustive_cap;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "Count (and optionally list) increasing families");
  enumerate_cmd->add_option("-n", enumerate.n, "Ground set size")->required();
  enumerate_cmd->add_option("-k", enumerate.k, "Set size; all k when omitted");
  enumerate_cmd->add_flag("--stream", enumerate.stream, "Print every family, one per line");
  enumerate_cmd->add_flag("--json", enumerate.json, "Structured output");
  enumerate_cmd->add_option("--exhaustive-cap", enumerate.exhaustive_cap,
                            "Largest n accepted (env PICKCHOOSE_EXHAUSTIVE_CAP)");

  ServeOptions serve;
  serve.cap = service_cap;
  auto* serve_cmd = app.add_subcommand("serve", "Run the JSON game service over HTTP");
  serve_cmd->add_option("--host", serve.host, "Interface to bind");
  serve_cmd->add_option("-p,--port", serve.port, "Port, 0 = any free port");
  serve_cmd->add_option("--cap", serve.cap, "Largest board or ground set (env PICKCHOOSE_SERVICE_CAP)");
  serve_cmd->add_option("--snapshot", serve.snapshot, "Load sessions from and save them to this file on shutdown");

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve_cmd) return do_solve(solve, out);
    if (*football_cmd) return do_football(football, out);
    if (*verify_cmd) return do_verify(verify, out);
    if (*enumerate_cmd) return do_enumerate(enumerate, out);
    if (*serve_cmd) return do_serve(serve, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace pickchoose::cli
