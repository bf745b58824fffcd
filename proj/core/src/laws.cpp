#include "gml/laws.hpp"

#include <sstream>

namespace gml {

bool law_report_ok(const LawReport& report) {
  for (const LawResult& r : report)
    if (!r.ok()) return false;
  return true;
}

std::string law_report_text(const LawReport& report) {
  std::ostringstream os;
  for (const LawResult& r : report) {
    os << (r.ok() ? "ok  " : "FAIL") << "  " << r.law << "  (" << r.samples << " checked";
    if (!r.ok()) os << ", " << r.failures.size() << " shown";
    os << ")\n";
    for (const LawFailure& f : r.failures) {
      os << "  --\n";
      std::istringstream lines(f.f);
      std::string line;
      while (std::getline(lines, line)) os << "  " << line << '\n';
      os << "  lhs: " << f.lhs << '\n';
      os << "  rhs: " << f.rhs << '\n';
    }
  }
  return os.str();
}

} // namespace gml
