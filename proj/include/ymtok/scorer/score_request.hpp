#pragma once

#include <functional>
#include <string_view>

namespace ymtok {

/// Asks for log p(extension | source, prefix).
struct ScoreRequest {
  std::u32string_view source;
  std::u32string_view prefix;
  std::u32string_view extension;  // never empty
};

/// Returns a natural-log probability (<= 0). An empty function scores
/// everything as log 1.
using ScoreFn = std::function<double(const ScoreRequest&)>;

}  // namespace ymtok
