#include "gml/observe.hpp"

#include <sstream>
#include <stdexcept>
#include <variant>

#include "gml/faults.hpp"
#include "gml/pretty.hpp"

namespace gml {

namespace {

template <class... Fs>
struct Overload : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overload(Fs...) -> Overload<Fs...>;

bool containsFun(const TypePtr& t) {
  return std::visit(Overload{
                        [](const Type::Fun&) { return true; },
                        [](const Type::Sum& s) { return containsFun(s.lhs) || containsFun(s.rhs); },
                        [](const Type::Prod& s) {
                          return containsFun(s.lhs) || containsFun(s.rhs);
                        },
                        [](const auto&) { return false; },
                    },
                    t->node);
}

std::string kindName(Observation::Kind k) {
  switch (k) {
    case Observation::Kind::Ret: return "ret";
    case Observation::Kind::Raise: return "raise";
    case Observation::Kind::Pending: return "pending";
    case Observation::Kind::Fault: return "fault";
  }
  return "?";
}

} // namespace

std::string Observation::text() const {
  std::ostringstream os;
  os << "events [";
  for (std::size_t i = 0; i < events.size(); ++i) os << (i ? "," : "") << events[i];
  os << "] " << kindName(kind);
  if (kind == Kind::Raise) os << "_" << exc;
  if (kind == Kind::Fault) os << ": " << exc;
  if ((kind == Kind::Ret || kind == Kind::Raise) && !valueText.empty()) os << " " << valueText;
  return os.str();
}

bool observations_agree(const Observation& a, const Observation& b) {
  if (a.events != b.events || a.kind != b.kind) return false;
  if (a.kind == Observation::Kind::Pending) return true;
  if (a.kind == Observation::Kind::Fault) return a.exc == b.exc;
  if (a.kind == Observation::Kind::Raise && a.exc != b.exc) return false;
  if (a.comparableValue && b.comparableValue) return a.valueText == b.valueText;
  return true;
}

ValuePtr canon_value(const ValuePtr& v) {
  return std::visit(
      Overload{
          [&](const Value::Var&) { return v; },
          [&](const Value::Star&) { return v; },
          [&](const Value::PrimApp& n) { return v_prim(n.op, canon_value(n.arg)); },
          [&](const Value::Inl& n) { return v_inl(canon_value(n.val)); },
          [&](const Value::Inr& n) { return v_inr(canon_value(n.val)); },
          [&](const Value::Pair& n) { return v_pair(canon_value(n.fst), canon_value(n.snd)); },
          [&](const Value::Lambda&) { return v; }, // never compared by text
      },
      v->node);
}

Observation observe(Stream<Terminal> s, std::uint64_t fuel, const TypePtr& retType) {
  Observation obs;
  try {
    while (obs.events.size() < fuel) {
      Stream<Terminal>::Step step = s.next();
      if (const auto* out = std::get_if<Stream<Terminal>::Out>(&step)) {
        obs.events.push_back(out->value);
        continue;
      }
      if (std::get_if<Stream<Terminal>::Tick>(&step)) continue;
      const Terminal& t = std::get<Stream<Terminal>::Done>(step).value;
      if (t.kind == Terminal::Kind::Ret) {
        obs.kind = Observation::Kind::Ret;
        obs.comparableValue = !containsFun(retType);
        obs.valueText = pretty(canon_value(t.value));
      } else {
        obs.kind = Observation::Kind::Raise;
        obs.exc = t.exc;
        obs.valueText = pretty(canon_value(t.value));
      }
      return obs;
    }
  } catch (const GuardednessFault& f) {
    obs.kind = Observation::Kind::Fault;
    obs.exc = f.what();
  } catch (const SilentDivergence& f) {
    obs.kind = Observation::Kind::Fault;
    obs.exc = f.what();
  } catch (const StuckTerm& f) {
    obs.kind = Observation::Kind::Fault;
    obs.exc = f.what();
  }
  return obs;
}

Observation observe(Stream<SemOutcome> s, std::uint64_t fuel, const TypePtr& retType,
                    const ExcContext& delta) {
  Observation obs;
  try {
    while (obs.events.size() < fuel) {
      Stream<SemOutcome>::Step step = s.next();
      if (const auto* out = std::get_if<Stream<SemOutcome>::Out>(&step)) {
        obs.events.push_back(out->value);
        continue;
      }
      if (std::get_if<Stream<SemOutcome>::Tick>(&step)) continue;
      const SemOutcome& fin = std::get<Stream<SemOutcome>::Done>(step).value;
      TypePtr at;
      if (fin.kind == SemOutcome::Kind::Ret) {
        obs.kind = Observation::Kind::Ret;
        at = retType;
      } else {
        obs.kind = Observation::Kind::Raise;
        obs.exc = fin.exc;
        const ExcEntry* entry = exc_lookup(delta, fin.exc);
        if (!entry)
          throw std::logic_error("raise of '" + fin.exc + "' escaped its declared context");
        at = entry->payload;
      }
      std::optional<ValuePtr> term = readback(fin.value, at);
      if (term) {
        obs.valueText = pretty(canon_value(*term));
      } else {
        obs.comparableValue = false;
        obs.valueText = show_sem(fin.value);
      }
      return obs;
    }
  } catch (const GuardednessFault& f) {
    obs.kind = Observation::Kind::Fault;
    obs.exc = f.what();
  } catch (const SilentDivergence& f) {
    obs.kind = Observation::Kind::Fault;
    obs.exc = f.what();
  } catch (const StuckTerm& f) {
    obs.kind = Observation::Kind::Fault;
    obs.exc = f.what();
  }
  return obs;
}

AdequacyResult adequacy_check(const TypedProgram& tp, std::uint64_t fuel, std::uint64_t maxSteps,
                              Mutation mut) {
  EvalLimits limits;
  limits.maxEvents = fuel;
  limits.maxSteps = maxSteps;
  AdequacyResult r;
  r.operational = observe(eval(tp.program.main, limits, mut), fuel, tp.mainType);
  r.denotational =
      observe(denote_comp(tp.program.main, Env()), fuel, tp.mainType, tp.program.mainExc);
  r.agree = observations_agree(r.operational, r.denotational);
  if (!r.agree) {
    r.note = "observations differ";
    return r;
  }
  if (r.operational.kind == Observation::Kind::Raise) {
    const ExcEntry* entry = exc_lookup(tp.program.mainExc, r.operational.exc);
    if (entry && entry->tag == ExcTag::Guarded && r.operational.events.empty()) {
      r.agree = false;
      r.note = "guarded exception surfaced with an empty event prefix";
    }
  }
  return r;
}

} // namespace gml
