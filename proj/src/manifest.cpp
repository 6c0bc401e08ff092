#include "eulersurf/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "eulersurf/error.hpp"
#include "eulersurf/io.hpp"

namespace eulersurf {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunManifest::RunManifest(std::vector<std::string> argv) {
  doc_["manifest_version"] = 1;
  doc_["argv"] = std::move(argv);
  doc_["formats"] = {{"csv", kCsvFormatVersion}, {"volume", kVolumeFormatVersion}, {"pgm", "P5"}};
  doc_["timestamp"] = utc_timestamp();
  doc_["seeds"] = nlohmann::json::object();
  doc_["params"] = nlohmann::json::object();
  doc_["inputs"] = nlohmann::json::array();
  doc_["outputs"] = nlohmann::json::array();
}

void RunManifest::add_input(const std::filesystem::path& path) {
  doc_["inputs"].push_back({{"path", path.string()}, {"fnv1a64", hex64(fnv1a64(read_file(path)))}});
}

void RunManifest::add_output(const std::filesystem::path& path) { doc_["outputs"].push_back(path.string()); }

std::string RunManifest::dump() const { return doc_.dump(2) + "\n"; }

std::filesystem::path RunManifest::write_beside(const std::filesystem::path& artifact) const {
  const auto path = manifest_path_for(artifact);
  write_file(path, dump());
  return path;
}

std::vector<std::string> manifest_argv(const std::string& json_text) {
  try {
    return nlohmann::json::parse(json_text).at("argv").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatError::Kind::kSyntax, std::string("manifest: ") + e.what());
  }
}

}  // namespace eulersurf
