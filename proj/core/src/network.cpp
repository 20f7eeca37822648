#include "newsgraph/model/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "newsgraph/errors.hpp"

namespace newsgraph::model {

using autograd::shape_string;

namespace {

// One trainable tensor slot in the canonical ordering shared by init,
// named(), and parameters_from_flat.
struct Slot {
  std::string name;
  std::size_t rows, cols;
  enum Kind { XavierWeight, ZeroBias, LstmBias } kind;
  Tensor* dest;
};

std::vector<Slot> collect_slots(Parameters& p) {
  const ModelConfig& c = p.config;
  const std::size_t F = static_cast<std::size_t>(p.feature_dim);
  const std::size_t G = static_cast<std::size_t>(c.gnn_dim);
  const std::size_t H = static_cast<std::size_t>(c.lstm_dim);
  const std::size_t M = static_cast<std::size_t>(c.mlp_hidden);

  std::vector<Slot> slots;
  if (!p.ablation) {
    p.gnn.resize(static_cast<std::size_t>(c.gnn_layers));
    for (int l = 0; l < c.gnn_layers; ++l) {
      const std::size_t in = l == 0 ? F : G;
      auto prefix = "gnn." + std::to_string(l) + ".";
      slots.push_back({prefix + "w_self", in, G, Slot::XavierWeight, &p.gnn[l].w_self});
      slots.push_back({prefix + "w_neigh", in, G, Slot::XavierWeight, &p.gnn[l].w_neigh});
      slots.push_back({prefix + "bias", 1, G, Slot::ZeroBias, &p.gnn[l].bias});
    }
    slots.push_back({"lstm1.wx", G + F, 4 * H, Slot::XavierWeight, &p.lstm1.wx});
    slots.push_back({"lstm1.wh", H, 4 * H, Slot::XavierWeight, &p.lstm1.wh});
    slots.push_back({"lstm1.bias", 1, 4 * H, Slot::LstmBias, &p.lstm1.bias});
  }
  slots.push_back({"lstm2.wx", F, 4 * H, Slot::XavierWeight, &p.lstm2.wx});
  slots.push_back({"lstm2.wh", H, 4 * H, Slot::XavierWeight, &p.lstm2.wh});
  slots.push_back({"lstm2.bias", 1, 4 * H, Slot::LstmBias, &p.lstm2.bias});

  const std::size_t head_in = p.ablation ? H : 2 * H;
  slots.push_back({"mlp.w1", head_in, M, Slot::XavierWeight, &p.mlp.w1});
  slots.push_back({"mlp.b1", 1, M, Slot::ZeroBias, &p.mlp.b1});
  slots.push_back({"mlp.w2", M, 3, Slot::XavierWeight, &p.mlp.w2});
  slots.push_back({"mlp.b2", 1, 3, Slot::ZeroBias, &p.mlp.b2});
  return slots;
}

Tensor make_slot_tensor(const Slot& slot, std::size_t lstm_hidden, Rng& rng) {
  std::vector<double> data(slot.rows * slot.cols, 0.0);
  switch (slot.kind) {
    case Slot::XavierWeight: {
      const double limit =
          std::sqrt(6.0 / static_cast<double>(slot.rows + slot.cols));
      for (double& v : data) v = rng.uniform(-limit, limit);
      break;
    }
    case Slot::ZeroBias:
      break;
    case Slot::LstmBias:
      // forget-gate slice starts life open so long-range signal survives
      for (std::size_t j = lstm_hidden; j < 2 * lstm_hidden; ++j) data[j] = 1.0;
      break;
  }
  return Tensor::from_data({slot.rows, slot.cols}, std::move(data), true);
}

}  // namespace

std::vector<std::pair<std::string, Tensor>> Parameters::named() const {
  Parameters copy = *this;  // tensors share storage; only the struct is copied
  std::vector<std::pair<std::string, Tensor>> out;
  for (const auto& slot : collect_slots(copy)) out.emplace_back(slot.name, *slot.dest);
  return out;
}

std::vector<Tensor> Parameters::all() const {
  std::vector<Tensor> out;
  for (auto& [name, tensor] : named()) {
    (void)name;
    out.push_back(tensor);
  }
  return out;
}

std::size_t Parameters::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : all()) n += t.size();
  return n;
}

Parameters init_parameters(const ModelConfig& cfg, int feature_dim, bool ablation, Rng& rng) {
  cfg.validate();
  if (feature_dim < 1) throw ConfigError("feature_dim must be >= 1");
  Parameters p;
  p.config = cfg;
  p.feature_dim = feature_dim;
  p.ablation = ablation;
  for (const auto& slot : collect_slots(p))
    *slot.dest = make_slot_tensor(slot, static_cast<std::size_t>(cfg.lstm_dim), rng);
  return p;
}

Parameters parameters_from_flat(const ModelConfig& cfg, int feature_dim, bool ablation,
                                const std::vector<Tensor>& flat) {
  cfg.validate();
  Parameters p;
  p.config = cfg;
  p.feature_dim = feature_dim;
  p.ablation = ablation;
  auto slots = collect_slots(p);
  if (slots.size() != flat.size())
    throw ShapeError("expected " + std::to_string(slots.size()) + " parameter tensors, got " +
                     std::to_string(flat.size()));
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& t = flat[i];
    if (t.rows() != slots[i].rows || t.cols() != slots[i].cols)
      throw ShapeError(slots[i].name + ": expected [" + std::to_string(slots[i].rows) + " x " +
                       std::to_string(slots[i].cols) + "], got " + shape_string(t.shape()));
    *slots[i].dest = t;
  }
  return p;
}

Tensor neighbor_mean_operator(const std::vector<std::vector<int>>& adj) {
  const std::size_t n = adj.size();
  std::vector<double> data(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (adj[i].empty()) continue;
    const double w = 1.0 / static_cast<double>(adj[i].size());
    for (int j : adj[i]) {
      if (j < 0 || static_cast<std::size_t>(j) >= n)
        throw std::out_of_range("neighbor index out of range");
      data[i * n + static_cast<std::size_t>(j)] = w;
    }
  }
  return Tensor::from_data({n, n}, std::move(data), false);
}

Tensor gnn_forward(Tape& tape, const Tensor& feats, const std::vector<std::vector<int>>& adj,
                   const Parameters& params) {
  return gnn_forward(tape, feats, neighbor_mean_operator(adj), params);
}

Tensor gnn_forward(Tape& tape, const Tensor& feats, const Tensor& neighbor_op,
                   const Parameters& params) {
  if (params.ablation) throw std::logic_error("ablation parameters carry no GNN stack");
  if (neighbor_op.rows() != feats.rows() || neighbor_op.cols() != feats.rows())
    throw ShapeError("neighbor operator " + shape_string(neighbor_op.shape()) +
                     " does not match " + std::to_string(feats.rows()) + " nodes");
  Tensor h = feats;
  for (const auto& layer : params.gnn) {
    Tensor m = tape.matmul(neighbor_op, h);
    Tensor pre = tape.add(tape.add(tape.matmul(h, layer.w_self), tape.matmul(m, layer.w_neigh)),
                          layer.bias);
    h = tape.tanh(pre);
  }
  return h;
}

Tensor lstm_forward(Tape& tape, const std::vector<Tensor>& steps, const LstmParams& p,
                    int hidden_dim) {
  if (steps.empty()) throw ShapeError("lstm needs at least one timestep");
  const std::size_t B = steps[0].rows();
  const std::size_t H = static_cast<std::size_t>(hidden_dim);
  Tensor h = Tensor::zeros({B, H});
  Tensor c = Tensor::zeros({B, H});
  for (const auto& x : steps) {
    if (x.rows() != B)
      throw ShapeError("inconsistent batch size across timesteps: " + shape_string(x.shape()));
    Tensor z = tape.add(tape.add(tape.matmul(x, p.wx), tape.matmul(h, p.wh)), p.bias);
    Tensor i = tape.sigmoid(tape.slice_cols(z, 0, H));
    Tensor f = tape.sigmoid(tape.slice_cols(z, H, 2 * H));
    Tensor g = tape.tanh(tape.slice_cols(z, 2 * H, 3 * H));
    Tensor o = tape.sigmoid(tape.slice_cols(z, 3 * H, 4 * H));
    c = tape.add(tape.mul(f, c), tape.mul(i, g));
    h = tape.mul(o, tape.tanh(c));
  }
  return h;
}

std::vector<Tensor> neighbor_ops_by_day(const ingest::FeaturePanel& panel,
                                        const std::vector<infer::DailyGraph>& graphs) {
  const std::size_t N = panel.ticker_count();
  Tensor empty_op = Tensor::zeros({N, N});  // shared by every graph-free day
  std::vector<Tensor> ops(panel.date_count(), empty_op);
  for (const auto& g : graphs) {
    std::size_t d;
    try {
      d = panel.date_index(g.date);
    } catch (const std::out_of_range&) {
      throw DataError("graph date " + g.date.to_string() + " is not a panel date");
    }
    ops[d] = neighbor_mean_operator(infer::adjacency(g, panel.tickers));
  }
  return ops;
}

Tensor model_forward(Tape& tape, const ingest::FeaturePanel& panel,
                     const std::vector<Tensor>& neighbor_ops, const Parameters& params,
                     const std::vector<Window>& batch) {
  if (batch.empty()) throw ShapeError("empty window batch");
  const std::size_t N = panel.ticker_count();
  const std::size_t D = panel.date_count();
  const std::size_t F = panel.feature_count();
  const std::size_t L = static_cast<std::size_t>(params.config.lookback);
  if (static_cast<std::size_t>(params.feature_dim) != F)
    throw ShapeError("parameters expect " + std::to_string(params.feature_dim) +
                     " features, panel has " + std::to_string(F));
  if (!params.ablation && neighbor_ops.size() != D)
    throw ShapeError("need one neighbor operator per panel date");

  std::size_t dmin = D, dmax = 0;
  for (const auto& w : batch) {
    if (w.ticker_idx >= N) throw std::out_of_range("window ticker index out of range");
    if (w.start + L + 1 >= D) throw ShapeError("window runs past the panel end");
    dmin = std::min(dmin, w.start);
    dmax = std::max(dmax, w.start + L);
  }
  const std::size_t B = batch.size();

  Tensor h_comb;  // graph-stream sequence embedding, full model only
  if (!params.ablation) {
    std::vector<Tensor> comb_day;
    comb_day.reserve(dmax - dmin + 1);
    for (std::size_t d = dmin; d <= dmax; ++d) {
      std::vector<double> day(N * F);
      for (std::size_t t = 0; t < N; ++t)
        for (std::size_t f = 0; f < F; ++f) day[t * F + f] = panel.at(t, d, f);
      Tensor feats = Tensor::from_data({N, F}, std::move(day));
      Tensor g = gnn_forward(tape, feats, neighbor_ops[d], params);
      comb_day.push_back(tape.concat_cols({g, feats}));
    }
    Tensor big = tape.concat_rows(comb_day);
    std::vector<Tensor> lstm1_in;
    lstm1_in.reserve(L + 1);
    for (std::size_t tau = 0; tau <= L; ++tau) {
      std::vector<std::size_t> idx(B);
      for (std::size_t i = 0; i < B; ++i)
        idx[i] = (batch[i].start + tau - dmin) * N + batch[i].ticker_idx;
      lstm1_in.push_back(tape.gather_rows(big, std::move(idx)));
    }
    h_comb = lstm_forward(tape, lstm1_in, params.lstm1, params.config.lstm_dim);
  }

  std::vector<Tensor> lstm2_in;
  lstm2_in.reserve(L + 1);
  for (std::size_t tau = 0; tau <= L; ++tau) {
    std::vector<double> step(B * F);
    for (std::size_t i = 0; i < B; ++i)
      for (std::size_t f = 0; f < F; ++f)
        step[i * F + f] = panel.at(batch[i].ticker_idx, batch[i].start + tau, f);
    lstm2_in.push_back(Tensor::from_data({B, F}, std::move(step)));
  }
  Tensor h_stock = lstm_forward(tape, lstm2_in, params.lstm2, params.config.lstm_dim);

  Tensor head = params.ablation ? h_stock : tape.concat_cols({h_comb, h_stock});
  Tensor hidden = tape.tanh(tape.add(tape.matmul(head, params.mlp.w1), params.mlp.b1));
  return tape.add(tape.matmul(hidden, params.mlp.w2), params.mlp.b2);
}

}  // namespace newsgraph::model
