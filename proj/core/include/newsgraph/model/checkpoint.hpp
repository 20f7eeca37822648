#pragma once

#include <filesystem>

#include "newsgraph/model/network.hpp"

namespace newsgraph::model {

// Self-contained little-endian binary: magic, a JSON header (model config,
// feature_dim, ablation flag), then the named parameter tensors in canonical
// order. Byte-identical for identical parameters.
void save_checkpoint(const std::filesystem::path& path, const Parameters& params);

// Throws SchemaError for wrong magic/version, ShapeError or DataError when
// the tensor list does not match the header's architecture.
Parameters load_checkpoint(const std::filesystem::path& path);

}  // namespace newsgraph::model
