#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "newsgraph/model/network.hpp"

namespace newsgraph::model {

struct TrainResult {
  Parameters params;
  std::vector<double> epoch_losses;  // mean cross-entropy per epoch
};

// Deterministic given cfg.seed: init, epoch shuffles, and batch order all
// come from one seeded generator. The graph stream is skipped entirely when
// ablation is set. NaN loss aborts with TrainingError.
TrainResult train(const ingest::FeaturePanel& panel, const std::vector<infer::DailyGraph>& graphs,
                  const std::vector<Window>& train_windows, const ModelConfig& cfg, bool ablation);

struct Prediction {
  Ticker ticker;
  Date date;  // the predicted movement's date (window label date)
  MovementLabel predicted = MovementLabel::Neutral;
  MovementLabel actual = MovementLabel::Neutral;
  std::array<double, 3> probs{};  // softmax, class order Down/Neutral/Up
};

// Argmax with ties broken toward the lower class index. Window order is
// preserved; probabilities sum to 1 within 1e-12 per row.
std::vector<Prediction> predict(const ingest::FeaturePanel& panel,
                                const std::vector<infer::DailyGraph>& graphs,
                                const std::vector<Window>& windows, const Parameters& params,
                                std::size_t batch_size = 256);

// CSV round-trip: ticker,date,predicted,actual,p_down,p_neutral,p_up with
// shortest round-trip doubles, so reload-and-rewrite is byte-identical.
void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<Prediction>& preds);
std::vector<Prediction> read_predictions_csv(const std::filesystem::path& path);

}  // namespace newsgraph::model
