#include "xenorisk/features/feature_matrix.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "xenorisk/common/error.hpp"

namespace xenorisk::features {
namespace {

constexpr char kMagic[4] = {'X', 'R', 'F', 'M'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "feature matrix IO assumes a little-endian host");

}  // namespace

bool FeatureMatrix::has_block(BlockKind kind) const { return layout(kind) != nullptr; }

const BlockLayout* FeatureMatrix::layout(BlockKind kind) const {
  for (const auto& b : blocks) {
    if (b.kind == kind) return &b;
  }
  return nullptr;
}

BlockDims FeatureMatrix::dims() const {
  BlockDims d;
  for (const auto& b : blocks) d[b.kind] = b.dim;
  return d;
}

std::vector<std::size_t> FeatureMatrix::columns_for(std::span<const BlockKind> kinds) const {
  std::vector<std::size_t> cols;
  for (const BlockKind k : canonical_blocks({kinds.begin(), kinds.end()})) {
    const BlockLayout* l = layout(k);
    if (!l) throw ValidationError("feature matrix has no '" + std::string(to_string(k)) + "' block");
    for (std::size_t c = 0; c < l->dim; ++c) cols.push_back(l->offset + c);
  }
  return cols;
}

void save_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m) {
  nlohmann::ordered_json header;
  header["user_ids"] = m.user_ids;
  std::vector<std::string> labels;
  for (const auto c : m.labels) labels.emplace_back(corpus::to_string(c));
  header["labels"] = labels;
  header["blocks"] = nlohmann::ordered_json::array();
  for (const auto& b : m.blocks) {
    header["blocks"].push_back({{"name", to_string(b.kind)}, {"offset", b.offset}, {"dim", b.dim}});
  }
  header["feature_names"] = m.feature_names;
  header["metadata"] = m.metadata;
  const std::string h = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write feature matrix: " + path.string());
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
  const std::uint64_t len = h.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  out.write(reinterpret_cast<const char*>(m.values.data()), static_cast<std::streamsize>(m.values.size() * sizeof(double)));
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open feature matrix: " + path.string());
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t len = 0;
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw DataError("not a feature matrix: " + path.string());
  if (!in.read(reinterpret_cast<char*>(&version), sizeof version) || version != kVersion) {
    throw DataError("unsupported feature matrix version in " + path.string());
  }
  if (!in.read(reinterpret_cast<char*>(&len), sizeof len) || len > (1ull << 32)) {
    throw DataError("corrupt feature matrix header: " + path.string());
  }
  std::string h(len, '\0');
  if (!in.read(h.data(), static_cast<std::streamsize>(len))) throw DataError("truncated feature matrix: " + path.string());

  FeatureMatrix m;
  try {
    const auto header = nlohmann::json::parse(h);
    m.user_ids = header.at("user_ids").get<std::vector<std::string>>();
    for (const auto& l : header.at("labels")) {
      const auto c = corpus::parse_cohort(l.get<std::string>());
      if (!c) throw DataError("unknown label in feature matrix");
      m.labels.push_back(*c);
    }
    for (const auto& b : header.at("blocks")) {
      const auto kind = parse_block(b.at("name").get<std::string>());
      if (!kind) throw DataError("unknown block in feature matrix");
      m.blocks.push_back({*kind, b.at("offset").get<std::size_t>(), b.at("dim").get<std::size_t>()});
    }
    m.feature_names = header.at("feature_names").get<std::vector<std::string>>();
    m.metadata = header.at("metadata").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt feature matrix header in " + path.string() + ": " + e.what());
  }
  if (m.labels.size() != m.user_ids.size()) throw DataError("feature matrix label count mismatch");
  m.values.resize(m.rows() * m.cols());
  if (!in.read(reinterpret_cast<char*>(m.values.data()), static_cast<std::streamsize>(m.values.size() * sizeof(double)))) {
    throw DataError("truncated feature matrix body: " + path.string());
  }
  return m;
}

}  // namespace xenorisk::features
