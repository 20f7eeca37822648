#pragma once

#include <string>
#include <vector>

#include "newsgraph/date.hpp"
#include "newsgraph/types.hpp"

namespace newsgraph::infer {

// One rendered request: the fixed instruction block, a target-list line, and
// the day's headlines joined by newlines. Rendering is a pure function of
// (headlines, universe); the date only tags the request.
struct PromptRequest {
  Date date;
  std::vector<std::string> headlines;
  std::vector<Ticker> universe;
  std::string prompt_text;
};

// Throws std::domain_error when headlines or universe is empty. Embedded
// CR/LF inside a headline are replaced by spaces so the newline separator
// stays unambiguous.
std::string render_prompt_text(const std::vector<std::string>& headlines,
                               const std::vector<Ticker>& universe);

PromptRequest build_prompt(Date date, std::vector<std::string> headlines,
                           std::vector<Ticker> universe);

}  // namespace newsgraph::infer
