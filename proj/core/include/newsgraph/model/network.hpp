#pragma once

#include <string>
#include <utility>
#include <vector>

#include "newsgraph/autograd/tensor.hpp"
#include "newsgraph/infer/daily_graph.hpp"
#include "newsgraph/ingest/feature_panel.hpp"
#include "newsgraph/model/model_config.hpp"
#include "newsgraph/model/windows.hpp"
#include "newsgraph/rng.hpp"

namespace newsgraph::model {

using autograd::Tape;
using autograd::Tensor;

// One message-passing layer: h' = tanh(h W_self + m W_neigh + b), where m is
// the neighbor mean of h (zero vector for isolated nodes).
struct GnnLayerParams {
  Tensor w_self;   // [in x gnn_dim]
  Tensor w_neigh;  // [in x gnn_dim]
  Tensor bias;     // [1 x gnn_dim]
};

// Gate order along the 4H axis: input, forget, cell, output.
struct LstmParams {
  Tensor wx;    // [in x 4H]
  Tensor wh;    // [H x 4H]
  Tensor bias;  // [1 x 4H]
};

struct MlpParams {
  Tensor w1;  // [in x hidden]
  Tensor b1;  // [1 x hidden]
  Tensor w2;  // [hidden x 3]
  Tensor b2;  // [1 x 3]
};

// Full trainable state. The ablation variant drops the graph stream entirely:
// no GNN stack, no first LSTM, and the MLP reads lstm_dim instead of
// 2*lstm_dim inputs.
struct Parameters {
  ModelConfig config;
  int feature_dim = 0;
  bool ablation = false;
  std::vector<GnnLayerParams> gnn;
  LstmParams lstm1;
  LstmParams lstm2;
  MlpParams mlp;

  // Canonical order: gnn layers (self, neigh, bias), lstm1, lstm2, mlp.
  std::vector<std::pair<std::string, Tensor>> named() const;
  std::vector<Tensor> all() const;
  std::size_t parameter_count() const;  // total scalar count
};

// Xavier-uniform weights, zero biases, LSTM forget-gate bias 1.
Parameters init_parameters(const ModelConfig& cfg, int feature_dim, bool ablation, Rng& rng);

// Rebuilds a Parameters struct over the tensors of `flat`, which must match
// the order and shapes of all(). Lets a finite-difference checker substitute
// perturbed copies.
Parameters parameters_from_flat(const ModelConfig& cfg, int feature_dim, bool ablation,
                                const std::vector<Tensor>& flat);

// Row-normalized neighbor averaging operator [N x N]: row i holds 1/deg(i)
// at i's neighbors, zeros elsewhere. Constant (no gradient).
Tensor neighbor_mean_operator(const std::vector<std::vector<int>>& adj);

// Whole-universe embedding for one day: feats [N x F] -> [N x gnn_dim].
Tensor gnn_forward(Tape& tape, const Tensor& feats, const std::vector<std::vector<int>>& adj,
                   const Parameters& params);
Tensor gnn_forward(Tape& tape, const Tensor& feats, const Tensor& neighbor_op,
                   const Parameters& params);

// Runs the cell over the steps ([B x in] each) and returns the final hidden
// state [B x H].
Tensor lstm_forward(Tape& tape, const std::vector<Tensor>& steps, const LstmParams& p,
                    int hidden_dim);

// Neighbor operators per panel date index; dates without a graph get an
// all-zero operator. Throws DataError on a graph date outside the panel.
std::vector<Tensor> neighbor_ops_by_day(const ingest::FeaturePanel& panel,
                                        const std::vector<infer::DailyGraph>& graphs);

// Batched end-to-end forward to logits [B x 3]. All windows must share the
// panel; per-day GNN outputs are computed once and shared across the batch.
Tensor model_forward(Tape& tape, const ingest::FeaturePanel& panel,
                     const std::vector<Tensor>& neighbor_ops, const Parameters& params,
                     const std::vector<Window>& batch);

}  // namespace newsgraph::model
