#include "newsgraph/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "newsgraph/autograd/optim.hpp"
#include "newsgraph/errors.hpp"
#include "newsgraph/log.hpp"
#include "newsgraph/num_format.hpp"

namespace newsgraph::model {

TrainResult train(const ingest::FeaturePanel& panel, const std::vector<infer::DailyGraph>& graphs,
                  const std::vector<Window>& train_windows, const ModelConfig& cfg,
                  bool ablation) {
  cfg.validate();
  if (train_windows.empty()) throw TrainingError("no training windows");

  Rng rng(cfg.seed);
  TrainResult result;
  result.params =
      init_parameters(cfg, static_cast<int>(panel.feature_count()), ablation, rng);

  std::vector<Tensor> neighbor_ops;
  if (!ablation) neighbor_ops = neighbor_ops_by_day(panel, graphs);

  autograd::AdamConfig adam;
  adam.lr = cfg.lr;
  autograd::AdamOptimizer opt(result.params.all(), adam);

  std::vector<std::size_t> order(train_windows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const std::size_t B = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t pos = 0; pos < order.size(); pos += B) {
      const std::size_t n = std::min(B, order.size() - pos);
      std::vector<Window> batch;
      std::vector<int> targets;
      batch.reserve(n);
      targets.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        batch.push_back(train_windows[order[pos + k]]);
        targets.push_back(static_cast<int>(batch.back().label));
      }

      Tape tape;
      Tensor logits = model_forward(tape, panel, neighbor_ops, result.params, batch);
      Tensor loss = tape.cross_entropy(logits, targets);
      const double lv = loss.item();
      if (!std::isfinite(lv))
        throw TrainingError("loss became non-finite at epoch " + std::to_string(epoch) +
                            ", batch offset " + std::to_string(pos));
      opt.zero_grad();
      tape.backward(loss);
      opt.step();
      loss_sum += lv * static_cast<double>(n);
    }
    const double epoch_loss = loss_sum / static_cast<double>(order.size());
    result.epoch_losses.push_back(epoch_loss);
    log::info("epoch " + std::to_string(epoch + 1) + "/" + std::to_string(cfg.epochs) +
              " loss " + format_double(epoch_loss));
  }
  return result;
}

std::vector<Prediction> predict(const ingest::FeaturePanel& panel,
                                const std::vector<infer::DailyGraph>& graphs,
                                const std::vector<Window>& windows, const Parameters& params,
                                std::size_t batch_size) {
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  std::vector<Tensor> neighbor_ops;
  if (!params.ablation) neighbor_ops = neighbor_ops_by_day(panel, graphs);

  std::vector<Prediction> out;
  out.reserve(windows.size());
  for (std::size_t pos = 0; pos < windows.size(); pos += batch_size) {
    const std::size_t n = std::min(batch_size, windows.size() - pos);
    std::vector<Window> batch(windows.begin() + static_cast<std::ptrdiff_t>(pos),
                              windows.begin() + static_cast<std::ptrdiff_t>(pos + n));
    Tape tape;
    Tensor logits = model_forward(tape, panel, neighbor_ops, params, batch);
    for (std::size_t i = 0; i < n; ++i) {
      Prediction p;
      p.ticker = batch[i].ticker;
      p.date = batch[i].label_date;
      p.actual = batch[i].label;

      double z[3] = {logits.at(i, 0), logits.at(i, 1), logits.at(i, 2)};
      double zmax = std::max({z[0], z[1], z[2]});
      double sum = 0.0;
      for (int k = 0; k < 3; ++k) {
        p.probs[static_cast<std::size_t>(k)] = std::exp(z[k] - zmax);
        sum += p.probs[static_cast<std::size_t>(k)];
      }
      int best = 0;
      for (int k = 0; k < 3; ++k) {
        p.probs[static_cast<std::size_t>(k)] /= sum;
        if (p.probs[static_cast<std::size_t>(k)] > p.probs[static_cast<std::size_t>(best)])
          best = k;
      }
      p.predicted = static_cast<MovementLabel>(best);
      out.push_back(p);
    }
  }
  return out;
}

void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<Prediction>& preds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for write: " + path.string());
  out << "ticker,date,predicted,actual,p_down,p_neutral,p_up\n";
  for (const auto& p : preds) {
    out << p.ticker.str() << ',' << p.date.to_string() << ',' << to_string(p.predicted) << ','
        << to_string(p.actual) << ',' << format_double(p.probs[0]) << ','
        << format_double(p.probs[1]) << ',' << format_double(p.probs[2]) << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<Prediction> read_predictions_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open predictions: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty predictions file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ticker,date,predicted,actual,p_down,p_neutral,p_up")
    throw SchemaError("unexpected predictions header: " + line);

  std::vector<Prediction> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      std::vector<std::string> fields;
      std::size_t start = 0;
      while (true) {
        auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                       : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (fields.size() != 7) throw DataError("expected 7 fields, got " +
                                              std::to_string(fields.size()));
      Prediction p;
      p.ticker = Ticker(fields[0]);
      p.date = Date::parse(fields[1]);
      p.predicted = movement_from_string(fields[2]);
      p.actual = movement_from_string(fields[3]);
      for (int k = 0; k < 3; ++k)
        p.probs[static_cast<std::size_t>(k)] = std::stod(fields[static_cast<std::size_t>(4 + k)]);
      out.push_back(p);
    } catch (const std::exception& e) {
      throw RowError(line_no, e.what());
    }
  }
  return out;
}

}  // namespace newsgraph::model
