#include "gml/suite.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

#include "gml/errors.hpp"
#include "gml/pretty.hpp"
#include "gml/typing.hpp"

namespace gml {

namespace {

ValuePtr stubValue(const TypePtr& ty) {
  return std::visit(
      [&](const auto& n) -> ValuePtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Type::One>) {
          return v_star();
        } else if constexpr (std::is_same_v<T, Type::Nat>) {
          return v_nat(0);
        } else if constexpr (std::is_same_v<T, Type::Sum>) {
          if (ValuePtr l = stubValue(n.lhs)) return v_inl(std::move(l));
          if (ValuePtr r = stubValue(n.rhs)) return v_inr(std::move(r));
          return nullptr;
        } else if constexpr (std::is_same_v<T, Type::Prod>) {
          ValuePtr l = stubValue(n.lhs), r = stubValue(n.rhs);
          return l && r ? v_pair(std::move(l), std::move(r)) : nullptr;
        } else if constexpr (std::is_same_v<T, Type::Fun>) {
          ValuePtr res = stubValue(n.res);
          return res ? v_lambda("s", n.arg, n.exc, c_ret(std::move(res))) : nullptr;
        } else {
          return nullptr; // Zero, Base, Unknown: nothing to stub with
        }
      },
      ty->node);
}

void collectComps(const CompPtr& p, std::vector<CompPtr>& out) {
  out.push_back(p);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comp::Do>) {
          collectComps(n.bound, out);
          collectComps(n.body, out);
        } else if constexpr (std::is_same_v<T, Comp::GCase> || std::is_same_v<T, Comp::Case>) {
          collectComps(n.left, out);
          collectComps(n.right, out);
        } else if constexpr (std::is_same_v<T, Comp::PCase>) {
          collectComps(n.body, out);
        } else if constexpr (std::is_same_v<T, Comp::Handle>) {
          collectComps(n.body, out);
          collectComps(n.handler, out);
        } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
          collectComps(n.body, out);
        } else if constexpr (std::is_same_v<T, Comp::Ann>) {
          collectComps(n.comp, out);
        }
        // Ret/Raise/Init/App and surface forms: no computation children
        // (lambda bodies stay; stubbing under a binder rarely pays off)
      },
      p->node);
}

CompPtr replaceComp(const CompPtr& p, const Comp* target, const CompPtr& repl) {
  if (p.get() == target) return repl;
  return std::visit(
      [&](const auto& n) -> CompPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comp::Do>) {
          return c_do(n.var, replaceComp(n.bound, target, repl),
                      replaceComp(n.body, target, repl), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::GCase>) {
          return c_gcase(n.op, n.arg, n.leftVar, replaceComp(n.left, target, repl), n.rightVar,
                         replaceComp(n.right, target, repl), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::Case>) {
          return c_case(n.scrutinee, n.leftVar, replaceComp(n.left, target, repl), n.rightVar,
                        replaceComp(n.right, target, repl), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::PCase>) {
          return c_pcase(n.scrutinee, n.fstVar, n.sndVar, replaceComp(n.body, target, repl),
                         p->pos);
        } else if constexpr (std::is_same_v<T, Comp::Handle>) {
          return c_handle(n.exc, n.payloadType, replaceComp(n.body, target, repl), n.payloadVar,
                          replaceComp(n.handler, target, repl), p->pos);
        } else if constexpr (std::is_same_v<T, Comp::HandleIt>) {
          return c_handleit(n.seed, n.exc, n.payloadType, replaceComp(n.body, target, repl),
                            p->pos);
        } else if constexpr (std::is_same_v<T, Comp::Ann>) {
          return c_ann(replaceComp(n.comp, target, repl), n.type, p->pos);
        } else {
          return p;
        }
      },
      p->node);
}

struct CheckedDisagreement {
  TypedProgram tp;
  AdequacyResult res;
};

// Checks the candidate and reruns the comparison; empty when it stops
// disagreeing (or stops typechecking).
std::optional<CheckedDisagreement> stillDisagrees(const Program& cand, std::uint64_t fuel,
                                                  std::uint64_t maxSteps, Mutation mut) {
  try {
    CheckedDisagreement out{check_program(cand), {}};
    out.res = adequacy_check(out.tp, fuel, maxSteps, mut);
    if (out.res.agree) return std::nullopt;
    return out;
  } catch (const TypeError&) {
    return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

} // namespace

Program shrink_witness(const Program& witness, std::uint64_t fuel, std::uint64_t maxSteps,
                       Mutation mut) {
  std::optional<CheckedDisagreement> cur = stillDisagrees(witness, fuel, maxSteps, mut);
  if (!cur) return witness; // not a witness; nothing to preserve
  int budget = 300;
  bool improved = true;
  while (improved && budget > 0) {
    improved = false;
    std::vector<CompPtr> nodes;
    collectComps(cur->tp.program.main, nodes);
    for (const CompPtr& node : nodes) {
      if (--budget <= 0) break;
      if (std::get_if<Comp::Ret>(&node->node)) continue; // already minimal
      const NodeInfo* info = cur->tp.lookup(node);
      if (!info || !type_grounded(info->type)) continue;
      ValuePtr stub = stubValue(info->type);
      if (!stub) continue;
      Program cand = cur->tp.program;
      cand.main = replaceComp(cur->tp.program.main, node.get(), c_ret(stub));
      if (std::optional<CheckedDisagreement> next = stillDisagrees(cand, fuel, maxSteps, mut)) {
        cur = std::move(next);
        improved = true;
        break;
      }
    }
  }
  return cur->tp.program;
}

SuiteReport run_adequacy_suite(const SuiteConfig& cfg) {
  SuiteReport report;
  report.total = cfg.count;
  if (cfg.count == 0) return report;

  std::atomic<std::uint64_t> nextIndex{0};
  std::atomic<std::uint64_t> agreed{0};
  std::mutex mu;
  std::vector<DisagreeCase> bad;

  auto worker = [&] {
    for (;;) {
      std::uint64_t i = nextIndex.fetch_add(1);
      if (i >= cfg.count) return;
      DisagreeCase d;
      d.seedIndex = i;
      try {
        GenConfig gc = cfg.gen;
        gc.seed = cfg.gen.seed + i;
        Program prog = gen_program(gc);
        TypedProgram tp = check_program(prog);
        AdequacyResult res = adequacy_check(tp, cfg.fuel, cfg.maxSteps, cfg.mutation);
        if (res.agree) {
          agreed.fetch_add(1);
          continue;
        }
        Program witness = cfg.shrink
                              ? shrink_witness(prog, cfg.fuel, cfg.maxSteps, cfg.mutation)
                              : prog;
        TypedProgram wtp = check_program(witness);
        AdequacyResult wres = adequacy_check(wtp, cfg.fuel, cfg.maxSteps, cfg.mutation);
        d.program = pretty_program(witness);
        d.operational = wres.operational;
        d.denotational = wres.denotational;
        d.note = wres.note;
      } catch (const std::exception& e) {
        d.note = std::string("exception while checking this program: ") + e.what();
      }
      std::lock_guard<std::mutex> lock(mu);
      bad.push_back(std::move(d));
    }
  };

  unsigned n = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  n = std::min<unsigned>(n, 16);
  n = static_cast<unsigned>(std::min<std::uint64_t>(n, cfg.count));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::sort(bad.begin(), bad.end(),
            [](const DisagreeCase& a, const DisagreeCase& b) { return a.seedIndex < b.seedIndex; });
  report.agreed = agreed.load();
  report.disagreed = std::move(bad);
  return report;
}

std::string suite_report_text(const SuiteReport& report) {
  std::ostringstream os;
  os << "adequacy: " << report.agreed << "/" << report.total << " agreed\n";
  for (const DisagreeCase& d : report.disagreed) {
    os << "disagreement at seed offset " << d.seedIndex << " (" << d.note << ")\n";
    if (!d.program.empty()) os << d.program << "\n";
    os << "  machine:     " << d.operational.text() << "\n";
    os << "  denotation:  " << d.denotational.text() << "\n";
  }
  return os.str();
}

} // namespace gml
