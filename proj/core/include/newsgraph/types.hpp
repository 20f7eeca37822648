#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "newsgraph/date.hpp"

namespace newsgraph {

// Exchange symbol: 1-6 uppercase ASCII letters.
class Ticker {
 public:
  Ticker() = default;
  explicit Ticker(std::string symbol);

  const std::string& str() const { return symbol_; }
  bool empty() const { return symbol_.empty(); }

  static bool valid_symbol(std::string_view s);

  auto operator<=>(const Ticker&) const = default;

 private:
  std::string symbol_;
};

// Next-day movement class. The numeric order Down < Neutral < Up is part of
// the contract: it is the class-index order everywhere (confusion matrices,
// logit columns, argmax tie-breaking).
enum class MovementLabel : int { Down = 0, Neutral = 1, Up = 2 };

std::string_view to_string(MovementLabel label);
MovementLabel movement_from_string(std::string_view s);

enum class Sentiment : int { Positive = 0, Negative = 1, Neutral = 2 };

std::string_view to_string(Sentiment s);
Sentiment sentiment_from_string(std::string_view s);

// Return-fraction cutoffs for labeling. down < 0 < up.
struct Thresholds {
  double up = 0.01;
  double down = -0.01;

  void validate() const;
};

// One company's market data for one trading day.
struct Bar {
  Ticker ticker;
  Date date;
  double open = 0;
  double close = 0;
  double high = 0;
  double low = 0;
  double ask = 0;
  double bid = 0;
  double volume = 0;
  double dividend = 0;

  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

}  // namespace newsgraph
