#include "newsgraph/infer/affected.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <nlohmann/json.hpp>

#include "newsgraph/errors.hpp"
#include "newsgraph/log.hpp"

namespace newsgraph::infer {

namespace {

using json = nlohmann::ordered_json;

std::string normalize_name(const std::string& raw) {
  std::string out;
  out.reserve(raw.size() + 4);
  for (char c : raw) {
    unsigned char u = static_cast<unsigned char>(c);
    if (c == '.' || c == ',' || c == '\'') continue;
    if (c == '&') {
      out += " and ";
      continue;
    }
    if (c == '-' || std::isspace(u)) {
      out += ' ';
      continue;
    }
    out += static_cast<char>(std::tolower(u));
  }
  // collapse runs of spaces and trim
  std::string collapsed;
  bool prev_space = true;
  for (char c : out) {
    if (c == ' ') {
      if (!prev_space) collapsed += ' ';
      prev_space = true;
    } else {
      collapsed += c;
      prev_space = false;
    }
  }
  while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
  return collapsed;
}

const std::set<std::string>& legal_suffixes() {
  static const std::set<std::string> kSuffixes = {"inc",     "incorporated", "corp", "corporation",
                                                 "co",      "company",      "plc",  "ltd",
                                                 "group",   "companies"};
  return kSuffixes;
}

std::string strip_one_suffix(const std::string& norm) {
  auto pos = norm.rfind(' ');
  if (pos == std::string::npos) return norm;
  if (legal_suffixes().count(norm.substr(pos + 1)) == 0) return norm;
  std::string head = norm.substr(0, pos);
  // "the travelers companies" style: a leading article is as decorative as the suffix
  if (head.rfind("the ", 0) == 0) head.erase(0, 4);
  // "& Co." forms leave a dangling conjunction once the suffix goes
  if (head.size() > 4 && head.compare(head.size() - 4, 4, " and") == 0)
    head.erase(head.size() - 4);
  return head;
}

// Returns the [start, end) of the balanced object beginning at raw[start]
// (which must be '{'), honoring strings and escapes; npos if unbalanced.
std::size_t balanced_end(const std::string& raw, std::size_t start) {
  int depth = 0;
  bool in_string = false, escaped = false;
  for (std::size_t i = start; i < raw.size(); ++i) {
    char c = raw[i];
    if (in_string) {
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"')
      in_string = true;
    else if (c == '{')
      ++depth;
    else if (c == '}') {
      --depth;
      if (depth == 0) return i + 1;
    }
  }
  return std::string::npos;
}

// Quotes bare object keys (the paper-style {Company 1: "positive"} shape) so
// the strict parser can accept them. Returns std::nullopt when the text is too
// mangled to repair.
std::optional<std::string> quote_bare_keys(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 16);
  std::vector<char> stack;
  bool in_string = false, escaped = false;
  char prev_structural = '\0';
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      out += c;
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      prev_structural = '\0';
      continue;
    }
    if (c == '{' || c == '[') {
      stack.push_back(c);
      out += c;
      prev_structural = '{';
      continue;
    }
    if (c == '}' || c == ']') {
      if (stack.empty()) return std::nullopt;
      stack.pop_back();
      out += c;
      prev_structural = '\0';
      continue;
    }
    if (c == ',') {
      out += c;
      prev_structural = ',';
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      out += c;
      continue;
    }
    bool key_position = !stack.empty() && stack.back() == '{' &&
                        (prev_structural == '{' || prev_structural == ',');
    if (key_position) {
      std::size_t colon = i;
      while (colon < s.size() && s[colon] != ':' && s[colon] != '{' && s[colon] != '}' &&
             s[colon] != '"' && s[colon] != ',')
        ++colon;
      if (colon >= s.size() || s[colon] != ':') return std::nullopt;
      std::string key = s.substr(i, colon - i);
      while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
      out += '"';
      out += key;
      out += '"';
      i = colon - 1;
      prev_structural = '\0';
      continue;
    }
    out += c;
    prev_structural = '\0';
  }
  if (in_string || !stack.empty()) return std::nullopt;
  return out;
}

std::optional<json> first_object_with_key(const std::string& raw, const std::string& key) {
  for (std::size_t pos = raw.find('{'); pos != std::string::npos; pos = raw.find('{', pos + 1)) {
    std::size_t end = balanced_end(raw, pos);
    if (end == std::string::npos) continue;
    std::string candidate = raw.substr(pos, end - pos);
    json parsed;
    try {
      parsed = json::parse(candidate);
    } catch (const json::exception&) {
      auto repaired = quote_bare_keys(candidate);
      if (!repaired) continue;
      try {
        parsed = json::parse(*repaired);
      } catch (const json::exception&) {
        continue;
      }
    }
    if (parsed.is_object() && parsed.contains(key)) return parsed;
  }
  return std::nullopt;
}

std::optional<Sentiment> sentiment_ci(const std::string& raw) {
  std::string low;
  for (char c : raw) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low == "positive") return Sentiment::Positive;
  if (low == "negative") return Sentiment::Negative;
  if (low == "neutral") return Sentiment::Neutral;
  return std::nullopt;
}

}  // namespace

void NameTable::add(const std::string& name, const Ticker& ticker) {
  by_norm_.emplace_back(normalize_name(name), ticker);
}

std::optional<Ticker> NameTable::resolve(const std::string& raw) const {
  std::string norm = normalize_name(raw);
  if (norm.rfind("the ", 0) == 0) norm.erase(0, 4);
  for (const std::string& probe : {norm, strip_one_suffix(norm)})
    for (const auto& [name, ticker] : by_norm_)
      if (name == probe) return ticker;
  return std::nullopt;
}

const NameTable& NameTable::dow30() {
  static const NameTable table = [] {
    NameTable t;
    t.add("Apple", Ticker("AAPL"));
    t.add("Amgen", Ticker("AMGN"));
    t.add("American Express", Ticker("AXP"));
    t.add("Boeing", Ticker("BA"));
    t.add("Caterpillar", Ticker("CAT"));
    t.add("Salesforce", Ticker("CRM"));
    t.add("Salesforce.com", Ticker("CRM"));
    t.add("Cisco", Ticker("CSCO"));
    t.add("Cisco Systems", Ticker("CSCO"));
    t.add("Chevron", Ticker("CVX"));
    t.add("Disney", Ticker("DIS"));
    t.add("Walt Disney", Ticker("DIS"));
    t.add("Dow", Ticker("DOW"));
    t.add("Goldman Sachs", Ticker("GS"));
    t.add("Home Depot", Ticker("HD"));
    t.add("Honeywell", Ticker("HON"));
    t.add("IBM", Ticker("IBM"));
    t.add("International Business Machines", Ticker("IBM"));
    t.add("Intel", Ticker("INTC"));
    t.add("Johnson & Johnson", Ticker("JNJ"));
    t.add("JPMorgan Chase", Ticker("JPM"));
    t.add("JPMorgan", Ticker("JPM"));
    t.add("JP Morgan", Ticker("JPM"));
    t.add("Coca-Cola", Ticker("KO"));
    t.add("McDonald's", Ticker("MCD"));
    t.add("3M", Ticker("MMM"));
    t.add("Merck", Ticker("MRK"));
    t.add("Microsoft", Ticker("MSFT"));
    t.add("Nike", Ticker("NKE"));
    t.add("Procter & Gamble", Ticker("PG"));
    t.add("Travelers", Ticker("TRV"));
    t.add("UnitedHealth", Ticker("UNH"));
    t.add("United Health", Ticker("UNH"));
    t.add("Visa", Ticker("V"));
    t.add("Verizon", Ticker("VZ"));
    t.add("Walgreens", Ticker("WBA"));
    t.add("Walgreens Boots Alliance", Ticker("WBA"));
    t.add("Walmart", Ticker("WMT"));
    t.add("Wal-Mart", Ticker("WMT"));
    return t;
  }();
  return table;
}

std::vector<Ticker> dow30_universe() {
  static const char* const kSymbols[] = {"AAPL", "AMGN", "AXP", "BA",  "CAT", "CRM", "CSCO", "CVX",
                                         "DIS",  "DOW",  "GS",  "HD",  "HON", "IBM", "INTC", "JNJ",
                                         "JPM",  "KO",   "MCD", "MMM", "MRK", "MSFT", "NKE",  "PG",
                                         "TRV",  "UNH",  "V",   "VZ",  "WBA", "WMT"};
  std::vector<Ticker> out;
  for (const char* s : kSymbols) out.emplace_back(s);
  return out;
}

std::vector<std::pair<Ticker, Sentiment>> parse_affected(const std::string& raw,
                                                         const std::vector<Ticker>& universe,
                                                         const NameTable& names) {
  static const std::string kKey = "Affected Companies";
  auto obj = first_object_with_key(raw, kKey);
  if (!obj) throw ParseError("no JSON object with key \"" + kKey + "\" in response", raw);
  const json& companies = (*obj)[kKey];
  if (!companies.is_object())
    throw ParseError("\"" + kKey + "\" is not an object", raw);

  std::set<Ticker> universe_set(universe.begin(), universe.end());
  std::vector<std::pair<Ticker, Sentiment>> out;
  std::set<Ticker> seen;
  for (const auto& [company, value] : companies.items()) {
    std::optional<Ticker> ticker;
    std::string upper;
    for (char c : company) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (Ticker::valid_symbol(upper) && universe_set.count(Ticker(upper)))
      ticker = Ticker(upper);
    else
      ticker = names.resolve(company);
    if (!ticker || universe_set.count(*ticker) == 0) {
      log::warn("dropping unrecognized company \"" + company + "\"");
      continue;
    }
    if (!value.is_string()) {
      log::warn("dropping " + ticker->str() + ": sentiment is not a string");
      continue;
    }
    auto sent = sentiment_ci(value.get<std::string>());
    if (!sent) {
      log::warn("dropping " + ticker->str() + ": unknown sentiment \"" +
                value.get<std::string>() + "\"");
      continue;
    }
    if (!seen.insert(*ticker).second) continue;  // first occurrence wins
    out.emplace_back(*ticker, *sent);
  }
  return out;
}

}  // namespace newsgraph::infer
