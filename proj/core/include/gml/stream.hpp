#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

// Pull-based event streams: finitely many naturals followed by a result, or
// naturals forever. One pull returns exactly one step. A Tick step means the
// producer did bounded work without an observable event; callers that need
// to bound silent work count Ticks. After Done, further pulls repeat it.
//
// Streams own their producer state and are consumed by pulling; they are
// move-only. To re-read one, materialize the pulled steps.

namespace gml {

template <typename V>
class Stream {
 public:
  struct Out {
    std::uint64_t value;
  };
  struct Done {
    V value;
  };
  struct Tick {};
  using Step = std::variant<Out, Done, Tick>;

  explicit Stream(std::function<Step()> pull) : pull_(std::move(pull)) {}

  Stream(Stream&&) noexcept = default;
  Stream& operator=(Stream&&) noexcept = default;
  Stream(const Stream&) = delete;
  Stream& operator=(const Stream&) = delete;

  Step next() {
    if (finished_) return Done{*finished_};
    Step s = pull_();
    if (auto* d = std::get_if<Done>(&s)) finished_ = d->value;
    return s;
  }

  // Pulls until an Out or Done shows up, never counting more than maxTicks
  // silent steps. nullopt means the budget ran out mid-silence.
  std::optional<Step> nextEvent(std::uint64_t maxTicks) {
    for (std::uint64_t i = 0; i <= maxTicks; ++i) {
      Step s = next();
      if (!std::holds_alternative<Tick>(s)) return s;
    }
    return std::nullopt;
  }

  static Stream unit(V value) {
    return Stream([v = std::move(value)]() -> Step { return Done{v}; });
  }

  // The given outputs in order, then the result.
  static Stream outputs(std::vector<std::uint64_t> events, V value) {
    struct State {
      std::vector<std::uint64_t> events;
      std::size_t at = 0;
      V value;
    };
    auto st = std::make_shared<State>(State{std::move(events), 0, std::move(value)});
    return Stream([st]() -> Step {
      if (st->at < st->events.size()) return Out{st->events[st->at++]};
      return Done{st->value};
    });
  }

  // prefix once, then cycle forever; cycle must be non-empty.
  static Stream looping(std::vector<std::uint64_t> prefix, std::vector<std::uint64_t> cycle) {
    struct State {
      std::vector<std::uint64_t> prefix, cycle;
      std::size_t at = 0;
      bool inCycle = false;
    };
    auto st = std::make_shared<State>(State{std::move(prefix), std::move(cycle), 0, false});
    return Stream([st]() -> Step {
      if (!st->inCycle) {
        if (st->at < st->prefix.size()) return Out{st->prefix[st->at++]};
        st->inCycle = true;
        st->at = 0;
      }
      std::uint64_t n = st->cycle[st->at];
      st->at = (st->at + 1) % st->cycle.size();
      return Out{n};
    });
  }

  // Kleisli extension: relays this stream's outputs, then continues with
  // k(result). An infinite source never reaches k.
  template <typename W>
  Stream<W> andThen(std::function<Stream<W>(V)> k) && {
    struct State {
      Stream source;
      std::function<Stream<W>(V)> k;
      std::optional<Stream<W>> cont;
    };
    auto st = std::make_shared<State>(State{std::move(*this), std::move(k), std::nullopt});
    return Stream<W>([st]() -> typename Stream<W>::Step {
      if (st->cont) return st->cont->next();
      Step s = st->source.next();
      if (auto* o = std::get_if<Out>(&s)) return typename Stream<W>::Out{o->value};
      if (std::holds_alternative<Tick>(s)) return typename Stream<W>::Tick{};
      st->cont.emplace(st->k(std::get<Done>(s).value));
      return st->cont->next();
    });
  }

 private:
  std::function<Step()> pull_;
  std::optional<V> finished_;
};

} // namespace gml
