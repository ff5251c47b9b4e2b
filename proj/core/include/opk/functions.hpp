#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opk/operators.hpp"

namespace opk {

struct LipStarData {
  double alpha = 1.0; // exponent in (0, 1]
  double m = 1.0;     // class constant
};

/// One entry of the built-in target-function library.  Derivatives carry
/// their own modulus envelope (the omega1 of the parent function).
struct FunctionLibraryEntry {
  std::string id;
  TestFunction fn;
  std::optional<TestFunction> derivative{};
  std::optional<LipStarData> lip_star{};
};

/// Built-in functions: const, affine, square, exp-neg, sin, abs, sqrt.
const std::vector<FunctionLibraryEntry>& function_library();

/// Throws config_error (listing the known ids) when the id is unknown.
const FunctionLibraryEntry& find_function(std::string_view id);

}  // namespace opk
