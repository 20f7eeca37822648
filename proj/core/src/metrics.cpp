#include "newsgraph/eval/metrics.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace newsgraph::eval {

long long ConfusionMatrix::total() const {
  long long t = 0;
  for (const auto& row : counts)
    for (long long c : row) t += c;
  return t;
}

long long ConfusionMatrix::row_sum(int true_class) const {
  long long t = 0;
  for (long long c : counts[true_class]) t += c;
  return t;
}

long long ConfusionMatrix::col_sum(int pred_class) const {
  long long t = 0;
  for (const auto& row : counts) t += row[pred_class];
  return t;
}

long long ConfusionMatrix::diag_sum() const {
  return counts[0][0] + counts[1][1] + counts[2][2];
}

ConfusionMatrix confusion(const std::vector<std::pair<MovementLabel, MovementLabel>>& pairs) {
  ConfusionMatrix cm;
  for (const auto& [truth, pred] : pairs)
    ++cm.counts[static_cast<int>(truth)][static_cast<int>(pred)];
  return cm;
}

F1Summary f1_scores(const ConfusionMatrix& cm) {
  const long long total = cm.total();
  if (total == 0) throw std::domain_error("cannot score an empty confusion matrix");

  F1Summary s;
  for (int k = 0; k < 3; ++k) {
    long long tp = cm.counts[k][k];
    long long support = cm.row_sum(k);
    long long predicted = cm.col_sum(k);
    ClassScores& cs = s.per_class[k];
    cs.support = support;
    cs.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    cs.recall = support > 0 ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
    cs.f1 = (cs.precision + cs.recall) > 0.0
                ? 2.0 * cs.precision * cs.recall / (cs.precision + cs.recall)
                : 0.0;
    s.macro += cs.f1 / 3.0;
    s.weighted += cs.f1 * static_cast<double>(support) / static_cast<double>(total);
  }
  s.accuracy = static_cast<double>(cm.diag_sum()) / static_cast<double>(total);
  // one prediction per sample: global FP == global FN, so micro P = R = accuracy
  s.micro = s.accuracy;
  return s;
}

std::string metrics_report_json(const ConfusionMatrix& cm, const F1Summary& summary) {
  nlohmann::ordered_json j;
  j["class_order"] = {"down", "neutral", "up"};
  j["confusion_matrix"] = {cm.counts[0], cm.counts[1], cm.counts[2]};
  j["total"] = cm.total();
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  const char* names[3] = {"down", "neutral", "up"};
  for (int k = 0; k < 3; ++k) {
    const ClassScores& cs = summary.per_class[k];
    per[names[k]] = {{"precision", cs.precision},
                     {"recall", cs.recall},
                     {"f1", cs.f1},
                     {"support", cs.support}};
  }
  j["per_class"] = std::move(per);
  j["weighted_f1"] = summary.weighted;
  j["micro_f1"] = summary.micro;
  j["macro_f1"] = summary.macro;
  j["accuracy"] = summary.accuracy;
  return j.dump(2) + "\n";
}

}  // namespace newsgraph::eval
