#include "gml/powerset.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

#include "gml/faults.hpp"

namespace gml {

PowSet p_unit(int x) { return PowSet{x}; }

PowSet p_star(const std::function<PowSet(int)>& f, const PowSet& t) {
  PowSet out;
  for (int e : t) {
    PowSet fe = f(e);
    out.insert(fe.begin(), fe.end());
  }
  return out;
}

PowTable p_iterate(const PowTable& f, int ny) {
  const int nx = static_cast<int>(f.size());
  PowTable cur(f.size());
  for (;;) {
    PowTable next(f.size());
    for (int x = 0; x < nx; ++x) {
      for (int e : f[x]) {
        if (e < ny) {
          next[x].insert(e);
        } else {
          const PowSet& rec = cur[e - ny];
          next[x].insert(rec.begin(), rec.end());
        }
      }
    }
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

PowTable p_reach(const PowTable& f, int ny) {
  const int nx = static_cast<int>(f.size());
  PowTable out(f.size());
  for (int x0 = 0; x0 < nx; ++x0) {
    std::vector<bool> seen(f.size(), false);
    std::deque<int> queue{x0};
    seen[x0] = true;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int e : f[x]) {
        if (e < ny) {
          out[x0].insert(e);
        } else if (!seen[e - ny]) {
          seen[e - ny] = true;
          queue.push_back(e - ny);
        }
      }
    }
  }
  return out;
}

bool pplus_guarded(const PowTable& f, int ny) {
  for (const PowSet& row : f) {
    bool escapes = false;
    for (int e : row) {
      if (e < ny) {
        escapes = true;
        break;
      }
    }
    if (!escapes) return false;
  }
  return true;
}

PowTable pplus_iterate(const PowTable& f, int ny) {
  for (const PowSet& row : f) {
    if (row.empty())
      throw NotGuardedError("pplus_iterate: table has an empty row, so it is not a non-empty-powerset morphism");
  }
  if (!pplus_guarded(f, ny))
    throw NotGuardedError("pplus_iterate: some row never reaches the result summand");
  PowTable out = p_iterate(f, ny);
  for (const PowSet& row : out) {
    if (row.empty())
      throw std::logic_error("pplus_iterate: guarded non-empty table iterated to an empty row");
  }
  return out;
}

std::string format_pow_elem(const PowSet& s, int splitAt) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int e : s) {
    if (!first) os << ", ";
    first = false;
    if (splitAt < 0) {
      os << e;
    } else if (e < splitAt) {
      os << "inl " << e;
    } else {
      os << "inr " << (e - splitAt);
    }
  }
  os << '}';
  return os.str();
}

std::string format_pow_table(const PowTable& f, int splitAt) {
  std::ostringstream os;
  for (size_t x = 0; x < f.size(); ++x) {
    if (x) os << '\n';
    os << x << " -> " << format_pow_elem(f[x], splitAt);
  }
  return os.str();
}

} // namespace gml
