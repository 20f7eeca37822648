#include "newsgraph/pipeline/artifacts.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "newsgraph/errors.hpp"
#include "newsgraph/sha256.hpp"

namespace newsgraph::pipeline {

namespace {
using json = nlohmann::ordered_json;
}

std::filesystem::path meta_path_for(const std::filesystem::path& artifact) {
  std::filesystem::path p = artifact;
  p += ".meta.json";
  return p;
}

void write_artifact_meta(const std::filesystem::path& artifact,
                         const std::map<std::string, std::filesystem::path>& inputs) {
  json j;
  j["artifact"] = artifact.filename().generic_string();
  j["sha256"] = sha256_file_hex(artifact);
  json in = json::object();
  for (const auto& [name, path] : inputs) in[name] = sha256_file_hex(path);
  j["inputs"] = std::move(in);

  std::ofstream out(meta_path_for(artifact), std::ios::binary);
  if (!out) throw DataError("cannot write sidecar for " + artifact.string());
  out << j.dump(2) << '\n';
  if (!out) throw DataError("write failed: " + meta_path_for(artifact).string());
}

ArtifactMeta read_artifact_meta(const std::filesystem::path& artifact) {
  const auto mp = meta_path_for(artifact);
  std::ifstream in(mp, std::ios::binary);
  if (!in)
    throw DataError("missing sidecar " + mp.string() +
                    "; the artifact was not produced by this pipeline");
  try {
    json j;
    in >> j;
    ArtifactMeta meta;
    meta.artifact = j.at("artifact").get<std::string>();
    meta.sha256 = j.at("sha256").get<std::string>();
    for (const auto& [name, hash] : j.at("inputs").items())
      meta.inputs[name] = hash.get<std::string>();
    return meta;
  } catch (const json::exception& e) {
    throw DataError("corrupt sidecar " + mp.string() + ": " + e.what());
  }
}

void verify_artifact(const std::filesystem::path& artifact) {
  if (!std::filesystem::exists(artifact))
    throw DataError("missing artifact: " + artifact.string());
  const ArtifactMeta meta = read_artifact_meta(artifact);
  const std::string current = sha256_file_hex(artifact);
  if (current != meta.sha256)
    throw DataError("artifact " + artifact.string() +
                    " does not match its sidecar hash; it was modified after being written");
}

void verify_inputs(const std::filesystem::path& artifact,
                   const std::map<std::string, std::filesystem::path>& inputs) {
  const ArtifactMeta meta = read_artifact_meta(artifact);
  for (const auto& [name, path] : inputs) {
    auto it = meta.inputs.find(name);
    if (it == meta.inputs.end())
      throw DataError("artifact " + artifact.string() + " records no input named \"" + name +
                      "\"");
    const std::string current = sha256_file_hex(path);
    if (current != it->second)
      throw DataError("stale artifact chain: " + artifact.string() + " was built from a " +
                      name + " with hash " + it->second.substr(0, 12) + "..., but " +
                      path.string() + " now hashes to " + current.substr(0, 12) +
                      "...; re-run the upstream command");
  }
}

}  // namespace newsgraph::pipeline
