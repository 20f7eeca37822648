#include <doctest.h>

#include <nlohmann/json.hpp>
#include <vector>

#include "newsgraph/eval/metrics.hpp"
#include "newsgraph/rng.hpp"

using namespace newsgraph;
using namespace newsgraph::eval;

namespace {

// textbook formulas, written independently of the library implementation
struct HandScores {
  double prec[3], rec[3], f1[3];
  double weighted, macro, accuracy;
};

HandScores hand_compute(const ConfusionMatrix& cm) {
  HandScores h{};
  double total = 0, correct = 0, support_sum = 0;
  for (int c = 0; c < 3; ++c) {
    double tp = static_cast<double>(cm.counts[c][c]);
    double fp = 0, fn = 0;
    for (int r = 0; r < 3; ++r) {
      total += static_cast<double>(cm.counts[c][r]);
      if (r != c) {
        fp += static_cast<double>(cm.counts[r][c]);
        fn += static_cast<double>(cm.counts[c][r]);
      }
    }
    correct += tp;
    h.prec[c] = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    h.rec[c] = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    h.f1[c] = h.prec[c] + h.rec[c] > 0 ? 2 * h.prec[c] * h.rec[c] / (h.prec[c] + h.rec[c]) : 0.0;
  }
  for (int c = 0; c < 3; ++c) {
    double support = 0;
    for (int r = 0; r < 3; ++r) support += static_cast<double>(cm.counts[c][r]);
    h.weighted += h.f1[c] * support;
    h.macro += h.f1[c];
    support_sum += support;
  }
  h.weighted = support_sum > 0 ? h.weighted / support_sum : 0.0;
  h.macro /= 3.0;
  h.accuracy = total > 0 ? correct / total : 0.0;
  return h;
}

}  // namespace

TEST_CASE("confusion matrix counts pairs as [actual][predicted]") {
  using P = std::pair<MovementLabel, MovementLabel>;
  const std::vector<P> pairs{{MovementLabel::Up, MovementLabel::Up},
                             {MovementLabel::Up, MovementLabel::Down},
                             {MovementLabel::Down, MovementLabel::Down},
                             {MovementLabel::Neutral, MovementLabel::Up}};
  const auto cm = confusion(pairs);
  CHECK(cm.counts[2][2] == 1);
  CHECK(cm.counts[2][0] == 1);
  CHECK(cm.counts[0][0] == 1);
  CHECK(cm.counts[1][2] == 1);
  CHECK(cm.total() == 4);
  CHECK(cm.diag_sum() == 2);
  CHECK(cm.row_sum(2) == 2);
  CHECK(cm.col_sum(0) == 2);
}

TEST_CASE("f1 scores on a worked example") {
  // rows actual Down/Neutral/Up; 10 samples
  ConfusionMatrix cm;
  cm.counts = {{{3, 1, 0}, {1, 2, 1}, {0, 1, 1}}};
  const auto s = f1_scores(cm);
  // down: precision 3/4, recall 3/4
  CHECK(s.per_class[0].precision == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(s.per_class[0].recall == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(s.per_class[0].f1 == doctest::Approx(0.75).epsilon(1e-12));
  // neutral: precision 2/4, recall 2/4
  CHECK(s.per_class[1].f1 == doctest::Approx(0.5).epsilon(1e-12));
  // up: precision 1/2, recall 1/2
  CHECK(s.per_class[2].f1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.accuracy == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(s.micro == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(s.weighted ==
        doctest::Approx((0.75 * 4 + 0.5 * 4 + 0.5 * 2) / 10.0).epsilon(1e-12));
  CHECK(s.macro == doctest::Approx((0.75 + 0.5 + 0.5) / 3.0).epsilon(1e-12));
  CHECK(s.per_class[0].support == 4);
  CHECK(s.per_class[2].support == 2);
}

TEST_CASE("random confusion matrices match the hand formulas") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    ConfusionMatrix cm;
    long long total = 0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        cm.counts[r][c] = static_cast<long long>(rng.next_below(30));
        total += cm.counts[r][c];
      }
    if (total == 0) cm.counts[1][1] = 1;
    const auto s = f1_scores(cm);
    const auto h = hand_compute(cm);
    for (int c = 0; c < 3; ++c) {
      CHECK(s.per_class[c].precision == doctest::Approx(h.prec[c]).epsilon(1e-12));
      CHECK(s.per_class[c].recall == doctest::Approx(h.rec[c]).epsilon(1e-12));
      CHECK(s.per_class[c].f1 == doctest::Approx(h.f1[c]).epsilon(1e-12));
    }
    CHECK(s.weighted == doctest::Approx(h.weighted).epsilon(1e-12));
    CHECK(s.macro == doctest::Approx(h.macro).epsilon(1e-12));
    CHECK(s.accuracy == doctest::Approx(h.accuracy).epsilon(1e-12));
    CHECK(s.micro == s.accuracy);  // identity for single-label multiclass
  }
}

TEST_CASE("zero-support classes score zero but stay in the macro denominator") {
  ConfusionMatrix cm;
  cm.counts = {{{5, 0, 0}, {0, 0, 0}, {0, 0, 5}}};  // no neutral samples at all
  const auto s = f1_scores(cm);
  CHECK(s.per_class[1].f1 == 0.0);
  CHECK(s.per_class[1].support == 0);
  CHECK(s.macro == doctest::Approx((1.0 + 0.0 + 1.0) / 3.0).epsilon(1e-12));
  CHECK(s.weighted == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.accuracy == 1.0);
}

TEST_CASE("perfect predictions score one everywhere") {
  ConfusionMatrix cm;
  cm.counts = {{{4, 0, 0}, {0, 7, 0}, {0, 0, 2}}};
  const auto s = f1_scores(cm);
  for (int c = 0; c < 3; ++c) CHECK(s.per_class[c].f1 == 1.0);
  CHECK(s.weighted == 1.0);
  CHECK(s.micro == 1.0);
  CHECK(s.macro == 1.0);
}

TEST_CASE("empty matrix refuses to score") {
  ConfusionMatrix cm;
  CHECK_THROWS_AS(f1_scores(cm), std::domain_error);
  CHECK(confusion({}).total() == 0);  // building is fine; scoring is not
}

TEST_CASE("metrics json report carries the full structure") {
  ConfusionMatrix cm;
  cm.counts = {{{3, 1, 0}, {1, 2, 1}, {0, 1, 1}}};
  const auto s = f1_scores(cm);
  const auto text = metrics_report_json(cm, s);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("class_order") == nlohmann::json({"down", "neutral", "up"}));
  CHECK(j.at("confusion_matrix").at(0).at(0) == 3);
  CHECK(j.at("accuracy").get<double>() == doctest::Approx(0.6));
  CHECK(j.at("weighted_f1").is_number());
  CHECK(j.at("micro_f1").is_number());
  CHECK(j.at("macro_f1").is_number());
  CHECK(j.at("per_class").at("down").at("support") == 4);
}
