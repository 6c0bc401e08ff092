#include "eulersurf/change_table.hpp"

#include <array>
#include <fstream>
#include <string>
#include <string_view>

#include "eulersurf/error.hpp"

namespace eulersurf {

namespace {

void require_dim(int dim) {
  if (dim != 2 && dim != 3)
    throw ParameterError("change tables exist only for dimension 2 or 3, got " + std::to_string(dim));
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ull) {
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

constexpr char kMagic[8] = {'E', 'U', 'L', 'E', 'R', 'C', 'T', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint64_t format_key(int dim) {
  const std::string descriptor = "eulersurf change table v" + std::to_string(kFormatVersion) +
                                 " dim=" + std::to_string(dim) + " order=row-major msb-first int8";
  return fnv1a(descriptor);
}

}  // namespace

std::uint32_t neighborhood_index(std::span<const bool> bits) {
  if (bits.size() != 8 && bits.size() != 26)
    throw ParameterError("neighbourhood must have 8 or 26 entries, got " + std::to_string(bits.size()));
  std::uint32_t index = 0;
  for (const bool b : bits) index = (index << 1) | (b ? 1u : 0u);
  return index;
}

LocalChange::LocalChange(int dim) : dim_(dim) {
  require_dim(dim);
  const int n_neighbors = neighbor_count(dim);
  const int center = dim == 2 ? 4 : 13;
  auto bit_of_block = [&](int block_index) -> std::uint32_t {
    const int k = block_index < center ? block_index : block_index - 1;
    return 1u << (n_neighbors - 1 - k);
  };

  // Faces of the centre cube in doubled coordinates: each axis is 2, 3 or 4
  // (odd means the face spans that axis).
  const int n_faces = dim == 2 ? 9 : 27;
  for (int f = 0; f < n_faces; ++f) {
    std::array<int, 3> c{3, 3, 3};
    int rem = f;
    for (int a = dim - 1; a >= 0; --a) {
      c[static_cast<std::size_t>(a)] = 2 + rem % 3;
      rem /= 3;
    }
    int odd = 0;
    for (int a = 0; a < dim; ++a) odd += c[static_cast<std::size_t>(a)] % 2;

    std::uint32_t mask = 0;
    for (int b = 0; b < n_faces; ++b) {
      std::array<int, 3> p{1, 1, 1};
      int r = b;
      for (int a = dim - 1; a >= 0; --a) {
        p[static_cast<std::size_t>(a)] = r % 3;
        r /= 3;
      }
      if (b == center) continue;
      bool contains = true;
      for (int a = 0; a < dim && contains; ++a) {
        const int ca = c[static_cast<std::size_t>(a)];
        const int pa = p[static_cast<std::size_t>(a)];
        // Block position pa covers doubled coordinates [2*pa, 2*pa + 2].
        contains = ca >= 2 * pa && ca <= 2 * pa + 2;
      }
      if (contains) mask |= bit_of_block(b);
    }
    face_masks_.push_back(mask);
    face_signs_.push_back(odd % 2 == 0 ? 1 : -1);
  }
}

ChangeTable precompute_change_table(int dim) {
  require_dim(dim);
  const LocalChange change(dim);
  const std::size_t n = std::size_t{1} << neighbor_count(dim);
  std::vector<std::int8_t> entries(n);
  for (std::size_t m = 0; m < n; ++m) entries[m] = static_cast<std::int8_t>(change(static_cast<std::uint32_t>(m)));
  return ChangeTable(dim, std::move(entries));
}

void ChangeTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(FormatError::Kind::kIo, "cannot write change table cache " + path.string());
  const std::uint32_t version = kFormatVersion;
  const std::uint32_t d = static_cast<std::uint32_t>(dim_);
  const std::uint64_t count = entries_.size();
  const std::uint64_t key = format_key(dim_);
  const std::uint64_t checksum =
      fnv1a(std::string_view(reinterpret_cast<const char*>(entries_.data()), entries_.size()), key);
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(&key), sizeof key);
  out.write(reinterpret_cast<const char*>(&checksum), sizeof checksum);
  out.write(reinterpret_cast<const char*>(entries_.data()), static_cast<std::streamsize>(entries_.size()));
  if (!out) throw FormatError(FormatError::Kind::kIo, "failed writing change table cache " + path.string());
}

ChangeTable ChangeTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(FormatError::Kind::kIo, "cannot open change table cache " + path.string());
  char magic[8];
  std::uint32_t version = 0, d = 0;
  std::uint64_t count = 0, key = 0, checksum = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  in.read(reinterpret_cast<char*>(&key), sizeof key);
  in.read(reinterpret_cast<char*>(&checksum), sizeof checksum);
  if (!in || std::string_view(magic, sizeof magic) != std::string_view(kMagic, sizeof kMagic))
    throw FormatError(FormatError::Kind::kMalformedHeader, "not a change table cache: " + path.string());
  if (version != kFormatVersion || (d != 2 && d != 3) || key != format_key(static_cast<int>(d)))
    throw FormatError(FormatError::Kind::kMalformedHeader, "stale change table cache: " + path.string());
  const int dim = static_cast<int>(d);
  if (count != (std::uint64_t{1} << neighbor_count(dim)))
    throw FormatError(FormatError::Kind::kMalformedHeader, "change table cache has wrong entry count");
  std::vector<std::int8_t> entries(count);
  in.read(reinterpret_cast<char*>(entries.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::uint64_t>(in.gcount()) != count)
    throw FormatError(FormatError::Kind::kTruncatedPayload, "change table cache is truncated");
  if (fnv1a(std::string_view(reinterpret_cast<const char*>(entries.data()), entries.size()), key) != checksum)
    throw FormatError(FormatError::Kind::kMalformedHeader, "change table cache checksum mismatch");
  return ChangeTable(dim, std::move(entries));
}

ChangeTable load_or_build_change_table(int dim, const std::filesystem::path& cache) {
  require_dim(dim);
  if (!cache.empty() && std::filesystem::exists(cache)) {
    try {
      auto table = ChangeTable::load(cache);
      if (table.dim() == dim) return table;
    } catch (const FormatError&) {
      // rebuilt below
    }
  }
  auto table = precompute_change_table(dim);
  if (!cache.empty()) table.save(cache);
  return table;
}

}  // namespace eulersurf
