#include "newsgraph/model/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "newsgraph/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace newsgraph::model {

namespace {

constexpr char kMagic[8] = {'N', 'G', 'C', 'K', 'P', 'T', '1', '\n'};

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw SchemaError("truncated checkpoint");
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw SchemaError("truncated checkpoint");
  return v;
}

std::string read_bytes(std::istream& in, std::size_t n) {
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw SchemaError("truncated checkpoint");
  return s;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Parameters& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for write: " + path.string());

  out.write(kMagic, sizeof(kMagic));
  nlohmann::ordered_json header;
  header["model_config"] = nlohmann::ordered_json::parse(params.config.to_json());
  header["feature_dim"] = params.feature_dim;
  header["ablation"] = params.ablation;
  const std::string header_text = header.dump();
  write_u32(out, static_cast<std::uint32_t>(header_text.size()));
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));

  auto named = params.named();
  write_u32(out, static_cast<std::uint32_t>(named.size()));
  for (const auto& [name, tensor] : named) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u32(out, static_cast<std::uint32_t>(tensor.shape().size()));
    for (std::size_t dim : tensor.shape()) write_u64(out, dim);
    out.write(reinterpret_cast<const char*>(tensor.data().data()),
              static_cast<std::streamsize>(tensor.size() * sizeof(double)));
  }
  if (!out) throw DataError("write failed: " + path.string());
}

Parameters load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());

  char magic[8] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw SchemaError("not a checkpoint file: " + path.string());

  const std::uint32_t header_len = read_u32(in);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(read_bytes(in, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("bad checkpoint header: " + std::string(e.what()));
  }
  ModelConfig cfg = ModelConfig::from_json(header.at("model_config").dump());
  const int feature_dim = header.at("feature_dim").get<int>();
  const bool ablation = header.at("ablation").get<bool>();

  const std::uint32_t count = read_u32(in);
  std::vector<std::string> names;
  std::vector<Tensor> tensors;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = read_u32(in);
    names.push_back(read_bytes(in, name_len));
    const std::uint32_t ndim = read_u32(in);
    std::vector<std::size_t> shape;
    std::size_t total = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      shape.push_back(static_cast<std::size_t>(read_u64(in)));
      total *= shape.back();
    }
    std::vector<double> data(total);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    if (!in) throw SchemaError("truncated checkpoint tensor " + names.back());
    tensors.push_back(Tensor::from_data(std::move(shape), std::move(data), true));
  }

  Parameters params = parameters_from_flat(cfg, feature_dim, ablation, tensors);
  auto named = params.named();
  for (std::size_t i = 0; i < named.size(); ++i)
    if (named[i].first != names[i])
      throw DataError("checkpoint tensor " + std::to_string(i) + " is named \"" + names[i] +
                      "\", expected \"" + named[i].first + "\"");
  return params;
}

}  // namespace newsgraph::model
