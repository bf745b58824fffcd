#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "gml/ast.hpp"
#include "gml/denote.hpp"
#include "gml/desugar.hpp"
#include "gml/errors.hpp"
#include "gml/faults.hpp"
#include "gml/gen.hpp"
#include "gml/instances.hpp"
#include "gml/laws.hpp"
#include "gml/machine.hpp"
#include "gml/observe.hpp"
#include "gml/parse.hpp"
#include "gml/pretty.hpp"
#include "gml/suite.hpp"
#include "gml/typing.hpp"

namespace {

using nlohmann::json;

bool useColor() {
  const char* env = std::getenv("GLC_COLOR");
  if (env && std::string(env) == "0") return false;
  return isatty(fileno(stdout)) != 0;
}

std::string paint(const std::string& s, const char* code) {
  if (!useColor()) return s;
  return std::string("\x1b[") + code + "m" + s + "\x1b[0m";
}
std::string good(const std::string& s) { return paint(s, "32"); }
std::string bad(const std::string& s) { return paint(s, "31"); }

int failUsage(const std::string& msg) {
  std::cerr << "glc: " << msg << "\n";
  return 2;
}

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Loaded {
  gml::Program program;
  gml::TypedProgram typed;
};

// Parses, desugars and checks a source file. On rejection prints
// diagnostics (or a JSON document) and leaves the result empty.
std::optional<Loaded> load(const std::string& path, bool jsonOut, int& exitCode) {
  std::optional<std::string> text = slurp(path);
  if (!text) {
    exitCode = failUsage("cannot read '" + path + "'");
    return std::nullopt;
  }
  try {
    Loaded out;
    out.program = gml::desugar(gml::parse_program(*text));
    out.typed = gml::check_program(out.program);
    return out;
  } catch (const gml::SyntaxError& e) {
    if (jsonOut) {
      json j{{"ok", false}, {"error", {{"kind", "syntax"}, {"message", e.what()}}}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cerr << path << ": syntax error: " << e.what() << "\n";
    }
  } catch (const gml::TypeError& e) {
    if (jsonOut) {
      json j{{"ok", false},
             {"error",
              {{"kind", gml::error_code_name(e.code)},
               {"line", e.pos.line},
               {"col", e.pos.col},
               {"message", e.what()}}}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cerr << path << ":" << e.pos.line << ":" << e.pos.col << ": error["
                << gml::error_code_name(e.code) << "]: " << e.what() << "\n";
    }
  }
  exitCode = 1;
  return std::nullopt;
}

std::string terminalText(const gml::Terminal& t) {
  using K = gml::Terminal::Kind;
  switch (t.kind) {
    case K::Ret: return "ret " + gml::pretty(gml::canon_value(t.value));
    case K::Raise: return "raise_" + t.exc + " " + gml::pretty(gml::canon_value(t.value));
    case K::Pending: return "pending";
  }
  return "?";
}

json obsJson(const gml::Observation& o) {
  json j;
  j["events"] = o.events;
  switch (o.kind) {
    case gml::Observation::Kind::Ret:
      j["kind"] = "ret";
      j["value"] = o.valueText;
      j["comparable"] = o.comparableValue;
      break;
    case gml::Observation::Kind::Raise:
      j["kind"] = "raise";
      j["exc"] = o.exc;
      j["value"] = o.valueText;
      j["comparable"] = o.comparableValue;
      break;
    case gml::Observation::Kind::Pending: j["kind"] = "pending"; break;
    case gml::Observation::Kind::Fault:
      j["kind"] = "fault";
      j["fault"] = o.exc;
      break;
  }
  return j;
}

std::string obsText(const gml::Observation& o) { return o.text(); }

int cmdCheck(const std::string& file, bool jsonOut) {
  int code = 0;
  std::optional<Loaded> l = load(file, jsonOut, code);
  if (!l) return code;
  if (jsonOut) {
    json j{{"ok", true}, {"type", gml::pretty(l->typed.mainType)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << good("ok") << ": main : " << gml::pretty(l->typed.mainType) << "\n";
  }
  return 0;
}

int cmdRun(const std::string& file, std::uint64_t fuel, std::uint64_t maxSteps, bool jsonOut) {
  int code = 0;
  std::optional<Loaded> l = load(file, jsonOut, code);
  if (!l) return code;
  gml::EvalLimits limits;
  limits.maxEvents = fuel;
  limits.maxSteps = maxSteps;
  gml::Stream<gml::Terminal> s = gml::eval(l->program.main, limits);
  std::vector<std::uint64_t> events;
  try {
    while (events.size() < fuel) {
      auto step = s.next();
      if (const auto* out = std::get_if<gml::Stream<gml::Terminal>::Out>(&step)) {
        events.push_back(out->value);
        if (!jsonOut) {
          std::cout << "put " << out->value << "\n" << std::flush; // streaming
        }
        continue;
      }
      if (std::get_if<gml::Stream<gml::Terminal>::Tick>(&step)) continue;
      const gml::Terminal& t = std::get<gml::Stream<gml::Terminal>::Done>(step).value;
      if (jsonOut) {
        json j{{"events", events}, {"terminal", terminalText(t)}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << terminalText(t) << "\n";
      }
      return 0;
    }
  } catch (const std::runtime_error& f) {
    if (jsonOut) {
      json j{{"events", events}, {"fault", f.what()}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cerr << bad("fault") << ": " << f.what() << "\n";
    }
    return 1;
  }
  if (jsonOut) {
    json j{{"events", events}, {"terminal", "pending"}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "pending\n";
  }
  return 0;
}

int cmdDenote(const std::string& file, std::uint64_t fuel, bool jsonOut) {
  int code = 0;
  std::optional<Loaded> l = load(file, jsonOut, code);
  if (!l) return code;
  gml::Observation o = gml::observe(gml::denote_comp(l->program.main, gml::Env()), fuel,
                                    l->typed.mainType, l->program.mainExc);
  if (jsonOut) {
    std::cout << obsJson(o).dump(2) << "\n";
    return o.kind == gml::Observation::Kind::Fault ? 1 : 0;
  }
  for (std::uint64_t e : o.events) std::cout << "put " << e << "\n";
  switch (o.kind) {
    case gml::Observation::Kind::Ret: std::cout << "ret " << o.valueText << "\n"; break;
    case gml::Observation::Kind::Raise:
      std::cout << "raise_" << o.exc << " " << o.valueText << "\n";
      break;
    case gml::Observation::Kind::Pending: std::cout << "pending\n"; break;
    case gml::Observation::Kind::Fault:
      std::cerr << bad("fault") << ": " << o.exc << "\n";
      return 1;
  }
  return 0;
}

int cmdAdequacyFile(const std::string& file, std::uint64_t fuel, std::uint64_t maxSteps,
                    bool jsonOut) {
  int code = 0;
  std::optional<Loaded> l = load(file, jsonOut, code);
  if (!l) return code;
  gml::AdequacyResult r = gml::adequacy_check(l->typed, fuel, maxSteps);
  if (jsonOut) {
    json j{{"agree", r.agree},
           {"operational", obsJson(r.operational)},
           {"denotational", obsJson(r.denotational)}};
    if (!r.note.empty()) j["note"] = r.note;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "machine:     " << obsText(r.operational) << "\n";
    std::cout << "denotation:  " << obsText(r.denotational) << "\n";
    std::cout << (r.agree ? good("agree") : bad("disagree"));
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
  }
  return r.agree ? 0 : 1;
}

int cmdAdequacyGen(std::uint64_t count, int depth, std::uint64_t seed, std::uint64_t fuel,
                   std::uint64_t maxSteps, unsigned threads, bool noShrink, bool jsonOut) {
  gml::SuiteConfig cfg;
  cfg.gen.seed = seed;
  cfg.gen.maxDepth = depth;
  cfg.count = count;
  cfg.fuel = fuel;
  cfg.maxSteps = maxSteps;
  cfg.threads = threads;
  cfg.shrink = !noShrink;
  gml::SuiteReport r = gml::run_adequacy_suite(cfg);
  if (jsonOut) {
    json ds = json::array();
    for (const gml::DisagreeCase& d : r.disagreed) {
      ds.push_back(json{{"seed", seed + d.seedIndex},
                        {"program", d.program},
                        {"operational", obsJson(d.operational)},
                        {"denotational", obsJson(d.denotational)},
                        {"note", d.note}});
    }
    json j{{"total", r.total}, {"agreed", r.agreed}, {"disagreed", ds}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << gml::suite_report_text(r);
    std::cout << (r.ok() ? good("all programs agree") : bad("disagreements found")) << "\n";
  }
  return r.ok() ? 0 : 1;
}

template <typename I>
gml::LawReport lawsFor(const I& inst, const gml::LawConfig& cfg) {
  return gml::check_laws(inst, cfg);
}

int cmdLaws(const std::string& instance, long long count, std::uint64_t seed, int fuel,
            int maxCarrier, int exhaustiveUpTo, bool jsonOut) {
  gml::LawConfig cfg;
  cfg.samples = static_cast<int>(count);
  cfg.seed = seed;
  cfg.fuel = fuel;
  cfg.maxCarrier = maxCarrier;
  cfg.exhaustiveUpTo = exhaustiveUpTo;
  gml::LawReport report;
  if (instance == "powerset") {
    report = lawsFor(gml::PowInstance{}, cfg);
  } else if (instance == "powerset-nonempty") {
    report = lawsFor(gml::PPlusInstance{}, cfg);
  } else if (instance == "trace") {
    if (exhaustiveUpTo != 0) return failUsage("trace tables cannot be enumerated exhaustively");
    report = lawsFor(gml::TraceInstance{}, cfg);
  } else {
    return failUsage("unknown instance '" + instance +
                     "' (expected powerset, powerset-nonempty, or trace)");
  }
  bool ok = gml::law_report_ok(report);
  if (jsonOut) {
    json rows = json::array();
    for (const gml::LawResult& lr : report) {
      json fails = json::array();
      for (const gml::LawFailure& f : lr.failures)
        fails.push_back(json{{"f", f.f}, {"lhs", f.lhs}, {"rhs", f.rhs}});
      rows.push_back(json{{"law", lr.law}, {"samples", lr.samples}, {"failures", fails}});
    }
    json j{{"instance", instance}, {"ok", ok}, {"laws", rows}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "instance: " << instance << "\n" << gml::law_report_text(report);
    std::cout << (ok ? good("all laws hold") : bad("law failures")) << "\n";
  }
  return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolchain for a guarded-iteration metalanguage: type checking, "
               "two semantics, differential testing, and monad-law suites"};
  app.require_subcommand(1);
  app.fallthrough(); // lets --json appear after the subcommand too
  bool jsonOut = false;
  app.add_flag("--json", jsonOut, "emit one JSON document on stdout");

  std::string file;
  std::uint64_t fuel = 64, maxSteps = 100000, seed = 1, count = 100;
  int depth = 6;
  unsigned threads = 0;
  bool genMode = false, noShrink = false;
  std::string instance = "powerset";
  int maxCarrier = 3, exhaustiveUpTo = 0;
  long long lawCount = 500;

  CLI::App* check = app.add_subcommand("check", "type-check a program");
  check->add_option("file", file, "source file")->required();

  CLI::App* run = app.add_subcommand("run", "evaluate on the machine, streaming events");
  run->add_option("file", file, "source file")->required();
  run->add_option("--fuel", fuel, "max events to observe");
  run->add_option("--max-steps", maxSteps, "silent-step budget between events");

  CLI::App* den = app.add_subcommand("denote", "evaluate denotationally");
  den->add_option("file", file, "source file")->required();
  den->add_option("--fuel", fuel, "max events to observe");

  CLI::App* adq = app.add_subcommand("adequacy", "compare the two semantics");
  adq->add_option("file", file, "source file (omit with --gen)");
  adq->add_flag("--gen", genMode, "generate random well-typed programs instead");
  adq->add_option("--count", count, "programs to generate");
  adq->add_option("--depth", depth, "generation depth bound");
  adq->add_option("--seed", seed, "base generation seed");
  adq->add_option("--fuel", fuel, "max events per observation");
  adq->add_option("--max-steps", maxSteps, "silent-step budget between events");
  adq->add_option("--threads", threads, "worker threads (0: hardware)");
  adq->add_flag("--no-shrink", noShrink, "report witnesses unshrunk");

  CLI::App* laws = app.add_subcommand("laws", "check the iteration laws on an instance");
  laws->add_option("--instance", instance, "powerset | powerset-nonempty | trace");
  laws->add_option("--count", lawCount, "random samples per law");
  laws->add_option("--seed", seed, "sampling seed");
  laws->add_option("--fuel", fuel, "trace-expansion fuel for cross-checks");
  laws->add_option("--max-carrier", maxCarrier, "largest sampled carrier size");
  laws->add_option("--exhaustive-up-to", exhaustiveUpTo,
                   "enumerate all tables up to this carrier size (powerset instances)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "glc: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*check) return cmdCheck(file, jsonOut);
    if (*run) return cmdRun(file, fuel, maxSteps, jsonOut);
    if (*den) return cmdDenote(file, fuel, jsonOut);
    if (*adq) {
      if (genMode) {
        return cmdAdequacyGen(count, depth, seed, fuel, maxSteps, threads, noShrink, jsonOut);
      }
      if (file.empty()) return failUsage("adequacy needs a file or --gen");
      return cmdAdequacyFile(file, fuel, maxSteps, jsonOut);
    }
    if (*laws)
      return cmdLaws(instance, lawCount, seed, static_cast<int>(fuel), maxCarrier,
                     exhaustiveUpTo, jsonOut);
  } catch (const std::exception& e) {
    std::cerr << "glc: " << e.what() << "\n";
    return 2;
  }
  return failUsage("no command");
}
