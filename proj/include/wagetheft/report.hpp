#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace wagetheft {

/// Numbers in human and machine output carry 12 significant digits.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

struct Check {
  std::string name;
  bool passed = false;
  double deviation = 0.0;
};

struct Report {
  std::vector<Check> checks;

  void add(std::string name, bool passed, double deviation = 0.0) {
    checks.push_back({std::move(name), passed, deviation});
  }

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  /// One line per check: name, PASS/FAIL, max deviation.
  std::string to_text() const {
    std::ostringstream os;
    for (const auto& c : checks)
      os << c.name << ' ' << (c.passed ? "PASS" : "FAIL") << " max_dev=" << format_number(c.deviation)
         << '\n';
    return os.str();
  }
};

}  // namespace wagetheft
