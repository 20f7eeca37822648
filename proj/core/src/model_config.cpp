#include "newsgraph/model/model_config.hpp"

#include <nlohmann/json.hpp>

#include "newsgraph/errors.hpp"

namespace newsgraph::model {

void ModelConfig::validate() const {
  if (lookback < 2) throw ConfigError("lookback must be >= 2");
  if (gnn_dim < 1 || lstm_dim < 1 || mlp_hidden < 1 || gnn_layers < 1)
    throw ConfigError("model dimensions must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  try {
    thresholds.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad thresholds: ") + e.what());
  }
}

std::string ModelConfig::to_json() const {
  nlohmann::ordered_json j;
  j["lookback"] = lookback;
  j["gnn_dim"] = gnn_dim;
  j["lstm_dim"] = lstm_dim;
  j["mlp_hidden"] = mlp_hidden;
  j["gnn_layers"] = gnn_layers;
  j["epochs"] = epochs;
  j["batch_size"] = batch_size;
  j["lr"] = lr;
  j["seed"] = seed;
  j["threshold_up"] = thresholds.up;
  j["threshold_down"] = thresholds.down;
  return j.dump();
}

ModelConfig ModelConfig::from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    ModelConfig cfg;
    cfg.lookback = j.at("lookback").get<int>();
    cfg.gnn_dim = j.at("gnn_dim").get<int>();
    cfg.lstm_dim = j.at("lstm_dim").get<int>();
    cfg.mlp_hidden = j.at("mlp_hidden").get<int>();
    cfg.gnn_layers = j.at("gnn_layers").get<int>();
    cfg.epochs = j.at("epochs").get<int>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.lr = j.at("lr").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.thresholds.up = j.at("threshold_up").get<double>();
    cfg.thresholds.down = j.at("threshold_down").get<double>();
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad model config JSON: " + std::string(e.what()));
  }
}

}  // namespace newsgraph::model
