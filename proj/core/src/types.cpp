#include "newsgraph/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace newsgraph {

bool Ticker::valid_symbol(std::string_view s) {
  if (s.empty() || s.size() > 6) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

Ticker::Ticker(std::string symbol) : symbol_(std::move(symbol)) {
  if (!valid_symbol(symbol_)) {
    throw std::invalid_argument("invalid ticker symbol '" + symbol_ +
                                "' (want 1-6 uppercase ASCII letters)");
  }
}

std::string_view to_string(MovementLabel label) {
  switch (label) {
    case MovementLabel::Down: return "down";
    case MovementLabel::Neutral: return "neutral";
    case MovementLabel::Up: return "up";
  }
  return "?";
}

MovementLabel movement_from_string(std::string_view s) {
  if (s == "down") return MovementLabel::Down;
  if (s == "neutral") return MovementLabel::Neutral;
  if (s == "up") return MovementLabel::Up;
  throw std::invalid_argument("unknown movement label '" + std::string(s) + "'");
}

std::string_view to_string(Sentiment s) {
  switch (s) {
    case Sentiment::Positive: return "positive";
    case Sentiment::Negative: return "negative";
    case Sentiment::Neutral: return "neutral";
  }
  return "?";
}

Sentiment sentiment_from_string(std::string_view s) {
  if (s == "positive") return Sentiment::Positive;
  if (s == "negative") return Sentiment::Negative;
  if (s == "neutral") return Sentiment::Neutral;
  throw std::invalid_argument("unknown sentiment '" + std::string(s) + "'");
}

void Thresholds::validate() const {
  if (!(down < 0.0) || !(up > 0.0) || std::isnan(up) || std::isnan(down)) {
    throw std::invalid_argument("thresholds must satisfy down < 0 < up");
  }
}

void Bar::validate() const {
  if (ticker.empty()) throw std::invalid_argument("bar has empty ticker");
  for (double p : {open, close, high, low}) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("prices must be positive finite (ticker " + ticker.str() +
                                  ", date " + date.to_string() + ")");
    }
  }
  if (ask < 0.0 || bid < 0.0 || !std::isfinite(ask) || !std::isfinite(bid)) {
    throw std::invalid_argument("ask/bid must be >= 0");
  }
  if (volume < 0.0 || !std::isfinite(volume)) throw std::invalid_argument("volume must be >= 0");
  if (dividend < 0.0 || !std::isfinite(dividend)) {
    throw std::invalid_argument("dividend must be >= 0");
  }
  if (low > std::min(open, close)) {
    throw std::invalid_argument("low > min(open, close) for " + ticker.str() + " on " +
                                date.to_string());
  }
  if (high < std::max(open, close)) {
    throw std::invalid_argument("high < max(open, close) for " + ticker.str() + " on " +
                                date.to_string());
  }
  if (ask > 0.0 && bid > 0.0 && bid > ask) {
    throw std::invalid_argument("bid > ask for " + ticker.str() + " on " + date.to_string());
  }
}

}  // namespace newsgraph
