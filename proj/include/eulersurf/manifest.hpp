#pragma once

// Run manifests: a JSON record written next to every artifact with enough
// information (argv, seeds, parameters, input checksums, format versions) to
// replay the run and reproduce the artifact byte for byte.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace eulersurf {

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

class RunManifest {
 public:
  explicit RunManifest(std::vector<std::string> argv);

  void set_command(const std::string& name) { doc_["command"] = name; }
  void add_seed(const std::string& name, std::uint64_t seed) { doc_["seeds"][name] = seed; }
  nlohmann::json& params() { return doc_["params"]; }
  nlohmann::json& extra() { return doc_["extra"]; }
  /// Records the file's FNV-1a 64 checksum.
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);

  const nlohmann::json& document() const noexcept { return doc_; }
  std::string dump() const;
  /// Writes `<artifact>.manifest.json`; returns that path.
  std::filesystem::path write_beside(const std::filesystem::path& artifact) const;

 private:
  nlohmann::json doc_;
};

inline std::filesystem::path manifest_path_for(const std::filesystem::path& artifact) {
  auto p = artifact;
  p += ".manifest.json";
  return p;
}

/// Argument vector stored in a manifest (program name first).
std::vector<std::string> manifest_argv(const std::string& json_text);

}  // namespace eulersurf
