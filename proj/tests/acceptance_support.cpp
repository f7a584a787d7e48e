#include "acceptance_support.hpp"

#include <cstdio>
#include <exception>
#include <iostream>

namespace acceptance {

Result expect(bool ok, std::string detail) { return {ok ? Outcome::kPass : Outcome::kFail, std::move(detail)}; }

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  return buffer;
}

std::string scientific(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.3e", value);
  return buffer;
}

int run(const std::vector<Criterion>& criteria) {
  std::size_t failed = 0, skipped = 0;
  for (const auto& c : criteria) {
    Result r;
    try {
      r = c.check();
    } catch (const std::exception& e) {
      r = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = r.outcome == Outcome::kPass ? "PASS" : r.outcome == Outcome::kSkip ? "SKIP" : "FAIL";
    std::cout << tag << " [" << c.id << "] " << c.title << ": " << r.detail << std::endl;
    failed += r.outcome == Outcome::kFail;
    skipped += r.outcome == Outcome::kSkip;
  }
  if (failed > 0) return 1;
  return skipped == criteria.size() ? 77 : 0;
}

}  // namespace acceptance
