#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace newsgraph::pipeline {

// Every artifact X gets an X.meta.json sidecar recording X's own SHA-256 and
// the hashes of the inputs it was derived from. Downstream commands verify
// the chain and refuse to mix artifacts from different runs.
struct ArtifactMeta {
  std::string artifact;                        // file name
  std::string sha256;                          // hash of the artifact bytes
  std::map<std::string, std::string> inputs;   // input file name -> sha256
};

std::filesystem::path meta_path_for(const std::filesystem::path& artifact);

// Hashes `artifact` and each input file, then writes the sidecar.
void write_artifact_meta(const std::filesystem::path& artifact,
                         const std::map<std::string, std::filesystem::path>& inputs);

ArtifactMeta read_artifact_meta(const std::filesystem::path& artifact);

// Artifact bytes must match the recorded hash; DataError otherwise.
void verify_artifact(const std::filesystem::path& artifact);

// Each named input's current bytes must match the hash recorded when
// `artifact` was written; DataError explains any mismatch.
void verify_inputs(const std::filesystem::path& artifact,
                   const std::map<std::string, std::filesystem::path>& inputs);

}  // namespace newsgraph::pipeline
