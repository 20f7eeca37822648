#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "newsgraph/types.hpp"

namespace newsgraph::eval {

// counts[true][pred], class order Down, Neutral, Up.
struct ConfusionMatrix {
  std::array<std::array<long long, 3>, 3> counts{};

  long long total() const;
  long long row_sum(int true_class) const;  // support of the class
  long long col_sum(int pred_class) const;
  long long diag_sum() const;
};

ConfusionMatrix confusion(const std::vector<std::pair<MovementLabel, MovementLabel>>& pairs);

struct ClassScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  long long support = 0;
};

// Zero-support classes score 0 and still count in macro's denominator of 3.
// Micro F1 equals accuracy for single-label multiclass input.
struct F1Summary {
  std::array<ClassScores, 3> per_class;
  double weighted = 0;
  double micro = 0;
  double macro = 0;
  double accuracy = 0;
};

F1Summary f1_scores(const ConfusionMatrix& cm);  // empty matrix -> std::domain_error

// Pretty JSON with the matrix, per-class scores, and the three aggregates.
std::string metrics_report_json(const ConfusionMatrix& cm, const F1Summary& summary);

}  // namespace newsgraph::eval
