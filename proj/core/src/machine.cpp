#include "gml/machine.hpp"

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "gml/faults.hpp"
#include "gml/subst.hpp"

namespace gml {

namespace {

// One suspended evaluation context, innermost frame last.
struct FDo {
  std::string var;
  CompPtr body;
};
struct FHandle {
  std::string exc;
  std::string payloadVar;
  CompPtr handler;
};
struct FHandleIt {
  std::string exc; // also the body's payload variable
  CompPtr body;
  ValuePtr lastPayload;         // payload that started the current round
  std::uint64_t roundEvents = 0; // outputs seen since the round began
  std::uint64_t round = 1;
};
using Frame = std::variant<FDo, FHandle, FHandleIt>;

template <class... Fs>
struct Overload : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overload(Fs...) -> Overload<Fs...>;

class Machine {
public:
  Machine(CompPtr p, EvalLimits limits, Mutation mut)
      : cur_(std::move(p)), limits_(limits), mut_(mut) {}

  // Runs small-step rules until the next output or a terminal. Each call is
  // one segment between events, so the silent-work budget resets here.
  Stream<Terminal>::Step pull() {
    std::uint64_t silent = 0;
    for (;;) {
      if (result_) {
        if (frames_.empty()) return Stream<Terminal>::Done{*result_};
        std::optional<Stream<Terminal>::Step> step = unwindTop();
        if (step) return *step;
        continue;
      }
      ++steps;
      if (++silent > limits_.maxSteps)
        throw SilentDivergence("evaluation ran " + std::to_string(limits_.maxSteps) +
                               " steps without an output or a result");
      std::optional<std::uint64_t> out = decompose();
      if (out) return Stream<Terminal>::Out{*out};
    }
  }

  std::uint64_t steps = 0;
  std::uint64_t loopRounds = 0;

private:
  // Fires one rule on cur_; yields an output value when the rule emits.
  std::optional<std::uint64_t> decompose() {
    const Comp& c = *cur_;
    return std::visit(
        Overload{
            [&](const Comp::Ret& n) -> std::optional<std::uint64_t> {
              result_ = Terminal::ret(n.val);
              return std::nullopt;
            },
            [&](const Comp::Raise& n) -> std::optional<std::uint64_t> {
              result_ = Terminal::raise(n.exc, n.payload);
              return std::nullopt;
            },
            [&](const Comp::Do& n) -> std::optional<std::uint64_t> {
              frames_.push_back(FDo{n.var, n.body});
              cur_ = n.bound;
              return std::nullopt;
            },
            [&](const Comp::GCase& n) -> std::optional<std::uint64_t> {
              if (n.op == "put") {
                std::optional<std::uint64_t> num = as_numeral(n.arg);
                if (!num) throw StuckTerm("put needs a numeral argument");
                cur_ = substitute(n.right, n.rightVar, v_star());
                if (mut_ == Mutation::DropPutEvent) return std::nullopt;
                creditEvent();
                return num;
              }
              if (n.op == "pred") {
                std::optional<std::uint64_t> num = as_numeral(n.arg);
                if (!num) throw StuckTerm("pred needs a numeral argument");
                ValuePtr branch =
                    *num == 0 ? v_inl(v_star()) : v_inr(v_nat(*num - 1));
                cur_ = substitute(n.left, n.leftVar, branch);
                return std::nullopt;
              }
              throw StuckTerm("no machine rule for operation '" + n.op + "'");
            },
            [&](const Comp::Case& n) -> std::optional<std::uint64_t> {
              const Value& scrut = *n.scrutinee;
              if (const auto* inl = std::get_if<Value::Inl>(&scrut.node)) {
                cur_ = substitute(n.left, n.leftVar, inl->val);
                return std::nullopt;
              }
              if (const auto* inr = std::get_if<Value::Inr>(&scrut.node)) {
                cur_ = substitute(n.right, n.rightVar, inr->val);
                return std::nullopt;
              }
              throw StuckTerm("case scrutinee is not an injection");
            },
            [&](const Comp::PCase& n) -> std::optional<std::uint64_t> {
              const auto* pair = std::get_if<Value::Pair>(&n.scrutinee->node);
              if (!pair) throw StuckTerm("pcase scrutinee is not a pair");
              Subst s;
              s[n.fstVar] = pair->fst;
              s[n.sndVar] = pair->snd; // same-name binders: snd is innermost
              cur_ = substitute(n.body, s);
              return std::nullopt;
            },
            [&](const Comp::Init&) -> std::optional<std::uint64_t> {
              throw StuckTerm("init reached at runtime; the empty type has no values");
            },
            [&](const Comp::Handle& n) -> std::optional<std::uint64_t> {
              frames_.push_back(FHandle{n.exc, n.payloadVar, n.handler});
              cur_ = n.body;
              return std::nullopt;
            },
            [&](const Comp::HandleIt& n) -> std::optional<std::uint64_t> {
              frames_.push_back(FHandleIt{n.exc, n.body, n.seed, 0, 1});
              ++loopRounds;
              cur_ = substitute(n.body, n.exc, n.seed);
              return std::nullopt;
            },
            [&](const Comp::App& n) -> std::optional<std::uint64_t> {
              const auto* lam = std::get_if<Value::Lambda>(&n.fn->node);
              if (!lam) throw StuckTerm("application head is not a lambda");
              cur_ = substitute(lam->body, lam->param, n.arg);
              return std::nullopt;
            },
            [&](const Comp::Ann& n) -> std::optional<std::uint64_t> {
              cur_ = n.comp;
              return std::nullopt;
            },
            [&](const Comp::SIf&) -> std::optional<std::uint64_t> {
              throw StuckTerm("surface form reached the machine; desugar first");
            },
            [&](const Comp::SGuard&) -> std::optional<std::uint64_t> {
              throw StuckTerm("surface form reached the machine; desugar first");
            },
            [&](const Comp::SCall&) -> std::optional<std::uint64_t> {
              throw StuckTerm("surface form reached the machine; desugar first");
            },
            [&](const Comp::STry&) -> std::optional<std::uint64_t> {
              throw StuckTerm("surface form reached the machine; desugar first");
            },
        },
        c.node);
  }

  // Delivers the pending terminal to the innermost frame. Done only when the
  // stack empties; otherwise the frame either resumes a computation or lets
  // the terminal keep travelling outward.
  std::optional<Stream<Terminal>::Step> unwindTop() {
    Terminal t = *result_;
    Frame frame = frames_.back();
    if (auto* d = std::get_if<FDo>(&frame)) {
      frames_.pop_back();
      if (t.kind == Terminal::Kind::Ret) {
        result_.reset();
        cur_ = substitute(d->body, d->var, t.value);
      } else if (mut_ == Mutation::SwapDoShortCircuit) {
        result_ = Terminal::ret(t.value); // wrong rule: raise behaves like ret-and-drop
      }
      return std::nullopt;
    }
    if (auto* h = std::get_if<FHandle>(&frame)) {
      frames_.pop_back();
      if (t.kind == Terminal::Kind::Raise && t.exc == h->exc) {
        result_.reset();
        cur_ = substitute(h->handler, h->payloadVar, t.value);
      }
      return std::nullopt;
    }
    auto& loop = std::get<FHandleIt>(frames_.back());
    if (t.kind != Terminal::Kind::Raise || t.exc != loop.exc) {
      frames_.pop_back();
      return std::nullopt;
    }
    if (loop.roundEvents == 0)
      throw GuardednessFault("loop on '" + loop.exc + "' re-raised without output in round " +
                             std::to_string(loop.round));
    ValuePtr next = mut_ == Mutation::HandleItOffByOne ? loop.lastPayload : t.value;
    loop.lastPayload = t.value;
    loop.roundEvents = 0;
    ++loop.round;
    ++loopRounds;
    result_.reset();
    cur_ = substitute(loop.body, loop.exc, next);
    return std::nullopt;
  }

  void creditEvent() {
    for (Frame& f : frames_)
      if (auto* loop = std::get_if<FHandleIt>(&f)) ++loop->roundEvents;
  }

  CompPtr cur_;
  std::optional<Terminal> result_; // set while a terminal unwinds the stack
  std::vector<Frame> frames_;
  EvalLimits limits_;
  Mutation mut_;
};

} // namespace

Stream<Terminal> eval(const CompPtr& p, const EvalLimits& limits, Mutation mut) {
  auto m = std::make_shared<Machine>(p, limits, mut);
  return Stream<Terminal>([m] { return m->pull(); });
}

StepsReport eval_steps_report(const CompPtr& p, const EvalLimits& limits, Mutation mut) {
  Machine m(p, limits, mut);
  StepsReport report;
  report.terminal = Terminal::pending();
  while (report.events.size() < limits.maxEvents) {
    Stream<Terminal>::Step step = m.pull();
    if (auto* out = std::get_if<Stream<Terminal>::Out>(&step)) {
      report.events.push_back(out->value);
      continue;
    }
    if (auto* done = std::get_if<Stream<Terminal>::Done>(&step)) {
      report.terminal = done->value;
      break;
    }
  }
  report.steps = m.steps;
  report.loopRounds = m.loopRounds;
  return report;
}

} // namespace gml
