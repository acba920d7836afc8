// nvfix: Lefschetz, Nielsen and Reidemeister trace of n-valued maps on flat
// manifolds, with a geometric cross-check.
//
// exit codes: 0 ok, 1 validation failure, 2 inconsistency, 3 compare
// mismatch, 4 I/O or parse error

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nvfix/document.hpp"

using namespace nvfix;

namespace {

enum Exit { ok = 0, invalid = 1, inconsistent = 2, mismatch = 3, io = 4 };

std::string vec_text(const Json &v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k)
      s += ", ";
    s += v[k].get<std::string>();
  }
  return s + ")";
}

void trace_text(std::ostream &os, const Json &trace) {
  if (trace.empty())
    os << "  (empty)\n";
  for (const auto &t : trace) {
    std::string c = t["coefficient"].get<std::string>();
    if (c[0] != '-')
      c = "+" + c;
    os << "  " << c << " [branch " << t["branch"].get<std::size_t>() << ", "
       << t["holonomy_rep"].get<std::string>() << ", "
       << vec_text(t["lattice_coords"]) << "]\n";
  }
}

void algebraic_text(std::ostream &os, const Json &r) {
  if (r.contains("lefschetz"))
    os << "lefschetz: " << r["lefschetz"].get<std::string>() << "\n";
  if (r.contains("nielsen"))
    os << "nielsen: " << r["nielsen"].get<std::string>() << "\n";
  if (r.contains("trace")) {
    os << "trace:\n";
    trace_text(os, r["trace"]);
  }
  const Json &d = r["diagnostics"];
  os << "[pi:Gamma] = " << d["index_pi_Gamma"].get<std::string>()
     << ", [pi:S] = " << d["index_pi_S"].get<std::string>() << "\nS basis:";
  for (const auto &row : d["S"])
    os << " " << vec_text(row);
  os << "\ndet(I - M):\n";
  for (const auto &t : d["determinants"])
    os << "  branch " << t["branch"].get<std::size_t>() << ", alpha "
       << t["alpha"].get<std::string>() << ": " << t["det"].get<std::string>()
       << "\n";
}

void oracle_text(std::ostream &os, const Json &r) {
  os << "lefschetz: " << r["lefschetz"].get<std::string>() << "\n"
     << "nielsen: " << r["nielsen"].get<std::string>() << "\ntrace:\n";
  trace_text(os, r["trace"]);
  os << "fixed points:\n";
  for (const auto &p : r["fixed_points"])
    os << "  " << vec_text(p["point"]) << " branch "
       << p["branch"].get<std::size_t>() << " index " << p["index"].get<int>()
       << " class " << p["class"].get<std::size_t>() << "\n";
  if (!r["distinctness_warnings"].empty())
    os << "warning: " << r["distinctness_warnings"].size()
       << " sampled points where two branches coincide\n";
}

struct Settings {
  std::string command;
  std::string input;
  std::string invariant = "all";
  std::string out;
  std::string format;
  int threads = 0;
};

int emit(const Settings &s, const Json &result,
         void (*render)(std::ostream &, const Json &)) {
  std::ostringstream os;
  if (s.format == "text")
    render(os, result);
  else
    os << result.dump(2) << "\n";
  if (s.out.empty()) {
    std::cout << os.str();
    return ok;
  }
  std::ofstream f(s.out);
  if (!(f << os.str())) {
    std::cerr << "nvfix: cannot write '" << s.out << "'\n";
    return io;
  }
  return ok;
}

void problems_text(std::ostream &os, const Json &r) {
  os << (r["valid"].get<bool>() ? "valid" : "invalid") << "\n";
  for (const auto &p : r["problems"])
    os << "  " << p.get<std::string>() << "\n";
  for (const auto &w : r["warnings"])
    os << "  warning: " << w.get<std::string>() << "\n";
}

Json lift_problems(const LiftReport &lr, Json &warnings) {
  Json problems = Json::array();
  for (const auto &e : lr.equivariance_failures)
    problems.push_back("lift: " + e);
  for (const auto &v : lr.distinctness_violations) {
    std::string p;
    for (std::size_t k = 0; k < v.point.size(); ++k)
      p += (k ? ", " : "") + format_rational(v.point[k]);
    warnings.push_back("lift: branches " + std::to_string(v.first + 1) + " and " +
                       std::to_string(v.second + 1) + " coincide at (" + p + ")");
  }
  return problems;
}

int run(const Settings &s) {
  InputDocument doc = load_document(s.input);
  NvMorphism f;
  try {
    f = doc.morphism();
  } catch (const DimensionError &e) {
    throw ParseError(e.what());
  }
  const auto report = validate_morphism(f);
  Json warnings = Json::array();
  Json problems = Json::array();
  for (const auto &p : report.problems)
    problems.push_back(p);
  std::optional<LiftReport> lift_report;
  if (report.ok() && doc.lift) {
    lift_report = verify_lift(f, *doc.lift, doc.options.distinctness_grid);
    for (const auto &p : lift_problems(*lift_report, warnings))
      problems.push_back(p);
  }

  if (s.command == "validate" || !problems.empty()) {
    Json r = {{"valid", problems.empty()},
              {"problems", problems},
              {"warnings", warnings}};
    if (!problems.empty() && s.command != "validate") {
      for (const auto &p : problems)
        std::cerr << "nvfix: " << p.get<std::string>() << "\n";
      return invalid;
    }
    const int code = emit(s, r, problems_text);
    return code != ok ? code : (problems.empty() ? ok : invalid);
  }

  if (s.command == "compute") {
    const Invariant which = parse_invariant(s.invariant);
    const auto r = compute_algebraic(f, which, doc.options);
    return emit(s, algebraic_json(f, r, which), algebraic_text);
  }

  if (!doc.lift) {
    std::cerr << "nvfix: the '" << s.command << "' command needs a lift block\n";
    return invalid;
  }
  const EnumerationOptions eopts{Execution::parallel, doc.options.bound_scale,
                                 doc.options.max_candidates};
  if (s.command == "oracle") {
    ReidemeisterContext ctx(f, invariant_subgroup(f));
    const auto r = oracle_invariants(*doc.lift, ctx, eopts);
    return emit(s, oracle_json(f, r, *lift_report), oracle_text);
  }

  // compare
  const auto alg = compute_algebraic(f, Invariant::all, doc.options);
  ReidemeisterContext ctx(f, alg.inv);
  const auto geo = oracle_invariants(*doc.lift, ctx, eopts);
  const auto fibers = fiber_counts(*doc.lift, f, alg.inv, geo.records);
  const bool same = alg.lefschetz == geo.lefschetz &&
                    alg.nielsen == geo.nielsen && *alg.trace == geo.trace;
  Json fj = Json::array();
  for (const auto &fc : fibers)
    fj.push_back({{"fixed_point", fc.record + 1},
                  {"geometric", fc.geometric},
                  {"algebraic", fc.algebraic}});
  Json r = {{"match", same},
            {"algebraic", algebraic_json(f, alg, Invariant::all)},
            {"geometric", oracle_json(f, geo, *lift_report)},
            {"fiber_counts", fj}};
  const int code = emit(s, r, [](std::ostream &os, const Json &j) {
    os << (j["match"].get<bool>() ? "algebraic == geometric\n"
                                  : "algebraic != geometric\n");
    os << "-- algebraic\n";
    algebraic_text(os, j["algebraic"]);
    os << "-- geometric\n";
    oracle_text(os, j["geometric"]);
  });
  return code != ok ? code : (same ? ok : mismatch);
}

} // namespace

int main(int argc, char **argv) {
  Settings s;
  if (const char *env = std::getenv("NVFIX_FORMAT"))
    s.format = env;
  if (s.format != "text")
    s.format = "json";

  CLI::App app{"Lefschetz, Nielsen and Reidemeister trace of n-valued maps on "
               "flat manifolds"};
  app.require_subcommand(1);
  app.add_option("--out", s.out, "write the result to FILE instead of stdout");
  app.add_option("--format", s.format, "output format (default: $NVFIX_FORMAT or json)")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--threads", s.threads, "cap on worker threads")
      ->check(CLI::NonNegativeNumber);

  auto *validate = app.add_subcommand("validate", "check group, morphism and lift");
  auto *compute = app.add_subcommand("compute", "averaging formulas");
  compute->add_option("--invariant", s.invariant, "lefschetz|nielsen|trace|all")
      ->check(CLI::IsMember({"lefschetz", "nielsen", "trace", "all"}));
  auto *oracle = app.add_subcommand("oracle", "fixed point enumeration of the lift");
  auto *cmp = app.add_subcommand("compare", "run both pipelines and diff them");
  for (auto *sub : {validate, compute, oracle, cmp}) {
    sub->add_option("input", s.input, "input JSON document")->required();
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? ok : io;
  }
  s.command = app.get_subcommands().front()->get_name();
  if (s.threads > 0)
    set_thread_limit(s.threads);

  try {
    return run(s);
  } catch (const ParseError &e) {
    std::cerr << "nvfix: " << e.what() << "\n";
    return io;
  } catch (const ValidationError &e) {
    std::cerr << "nvfix: invalid input: " << e.what() << "\n";
    return invalid;
  } catch (const NotMember &e) {
    std::cerr << "nvfix: invalid input: " << e.what() << "\n";
    return invalid;
  } catch (const DegenerateFixedSet &e) {
    std::cerr << "nvfix: degenerate lift: " << e.what() << "\n";
    return inconsistent;
  } catch (const InconsistencyError &e) {
    std::cerr << "nvfix: inconsistency: " << e.what() << "\n";
    return inconsistent;
  } catch (const std::exception &e) {
    std::cerr << "nvfix: error: " << e.what() << "\n";
    return inconsistent;
  }
}
