#include "newsgraph/infer/prompt.hpp"

#include <stdexcept>

namespace newsgraph::infer {

namespace {

// Instruction block. Item 5 keeps the typographic quotes around the example
// sentiments (\xE2\x80\x9C / \xE2\x80\x9D); all other quotes are plain ASCII.
const char* const kInstructionBlock =
    "Forget all your previous instructions. I want you to act as an experienced financial "
    "engineer. I will offer you financial news headlines in one day. Your task is to:\n"
    "1. Identify which target companies will be impacted by these news headlines. Please list at "
    "least five of them.\n"
    "2. Only consider companies from the target list.\n"
    "3. Determine the sentiments of the affected companies: positive, negative, or neutral.\n"
    "4. Only provide responses in JSON format, using the key \"Affected Companies\".\n"
    "5. Example output: {\"Affected Companies\": {Company 1: \xE2\x80\x9Cpositive\xE2\x80\x9D, "
    "Company 2: \xE2\x80\x9Cnegative\xE2\x80\x9D}}\n"
    "6. News Headlines are separated by \"\\n\"\n";

std::string flatten(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == '\n' || c == '\r') c = ' ';
  return out;
}

}  // namespace

std::string render_prompt_text(const std::vector<std::string>& headlines,
                               const std::vector<Ticker>& universe) {
  if (headlines.empty()) throw std::domain_error("cannot build a prompt with no headlines");
  if (universe.empty()) throw std::domain_error("cannot build a prompt with an empty target list");

  std::string out = kInstructionBlock;
  out += "Target List: ";
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (i > 0) out += ", ";
    out += universe[i].str();
  }
  out += "\nNews Headlines: ";
  for (std::size_t i = 0; i < headlines.size(); ++i) {
    if (i > 0) out += '\n';
    out += flatten(headlines[i]);
  }
  return out;
}

PromptRequest build_prompt(Date date, std::vector<std::string> headlines,
                           std::vector<Ticker> universe) {
  PromptRequest req;
  req.date = date;
  req.prompt_text = render_prompt_text(headlines, universe);
  req.headlines = std::move(headlines);
  req.universe = std::move(universe);
  return req;
}

}  // namespace newsgraph::infer
