#pragma once

#include <optional>
#include <string_view>

namespace frobcert {

// Which region of (a, b) parameter space a pair falls in, deciding the
// certification strategy. The dispatcher in classify() assigns exactly one
// label to every valid pair; boundary membership follows the region
// predicates in casework.cpp.
enum class CaseLabel {
  EdgeA2,          // a = 2: witness p = 2 for b > 3, vacuous for b = 3
  PrimeGenerator,  // a or b itself is prime: witness directly
  CaseI,           // a > 1e4, a <= 4.2 log b          (AP count, wide window)
  CaseII,          // a > 1e4, a >= 155 log b, g > 5e8 (short interval)
  CaseIII,         // a > 1e4, 4.2 log b < a < 155 log b
  CaseIV,          // a <= 1e4, b > 8e9, a <= 210 log b
  CaseV,           // a <= 1e4, b > 8e9, a > 210 log b (short interval)
  CaseVI,          // a <= 808, 1e6 <= b <= 8e9
  CaseVII,         // 808 < a <= 1e4, 1e7 < b <= 8e9
  CaseVIII,        // 808 < a <= 1e4, 1e6 <= b <= 1e7
  ResidualI,       // a > 1e4, g <= 5e8: finite witness search region
  ResidualIII,     // a <= 1e4, b < 1e6: finite witness search region
};

const char* to_string(CaseLabel label);
std::optional<CaseLabel> case_label_from_string(std::string_view s);

}  // namespace frobcert
