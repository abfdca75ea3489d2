#include "xenorisk/features/embeddings.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <optional>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/text.hpp"

namespace xenorisk::features {
namespace {

constexpr char kMagic[4] = {'X', 'E', 'M', 'B'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <typename T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in, const std::string& what) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw DataError("truncated embedding file (" + what + ")");
  return to_little(v);
}

std::string get_string(std::istream& in, const std::string& what) {
  const auto len = get<std::uint32_t>(in, what);
  if (len > (1u << 20)) throw DataError("embedding file: implausible string length in " + what);
  std::string s(len, '\0');
  if (len && !in.read(s.data(), len)) throw DataError("truncated embedding file (" + what + ")");
  return s;
}

EmbeddingTable read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding file: " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("not an embedding file (bad magic): " + path.string());
  }
  if (const auto v = get<std::uint32_t>(in, "version"); v != kVersion) {
    throw DataError("unsupported embedding file version " + std::to_string(v));
  }
  const auto dim = get<std::uint32_t>(in, "dim");
  const auto kind = get<std::uint32_t>(in, "key kind");
  if (kind > 1) throw DataError("embedding file: unknown key kind");
  const auto count = get<std::uint64_t>(in, "record count");
  EmbeddingTable table(dim, static_cast<EmbeddingKey>(kind), get_string(in, "model id"));
  std::vector<float> vec(dim);
  for (std::uint64_t r = 0; r < count; ++r) {
    std::string key = get_string(in, "record key");
    for (auto& x : vec) x = get<float>(in, "record vector");
    table.add(std::move(key), vec);
  }
  return table;
}

EmbeddingTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path.string());
  std::string line, model;
  std::optional<EmbeddingTable> table;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto t = text::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (t.starts_with("# model=")) model = std::string(t.substr(8));
      continue;
    }
    const auto fields = csv::split_record(t);
    if (!table) {
      if (fields.size() < 2 || (fields[0] != "user_id" && fields[0] != "tweet_id")) {
        throw DataError(path.string() + ": header must start with user_id or tweet_id");
      }
      table.emplace(fields.size() - 1, fields[0] == "user_id" ? EmbeddingKey::UserId : EmbeddingKey::TweetId, model);
      continue;
    }
    if (fields.size() != table->dim() + 1) {
      throw DataError(path.string() + " line " + std::to_string(n) + ": expected " +
                      std::to_string(table->dim() + 1) + " fields");
    }
    std::vector<float> vec(table->dim());
    for (std::size_t k = 0; k < vec.size(); ++k) {
      const auto& f = fields[k + 1];
      const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), vec[k]);
      // subnormals report out-of-range but still parse to the exact value
      if ((ec != std::errc() && ec != std::errc::result_out_of_range) || end != f.data() + f.size() || f.empty()) {
        throw DataError(path.string() + " line " + std::to_string(n) + ": bad float");
      }
    }
    table->add(fields[0], std::move(vec));
  }
  if (!table) throw DataError(path.string() + ": empty embedding CSV");
  return std::move(*table);
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim, EmbeddingKey key_kind, std::string model_id)
    : dim_(dim), key_kind_(key_kind), model_id_(std::move(model_id)) {}

void EmbeddingTable::add(std::string key, std::vector<float> vector) {
  if (vector.size() != dim_) {
    throw DataError("embedding for '" + key + "' has length " + std::to_string(vector.size()) + ", header says " +
                    std::to_string(dim_));
  }
  if (index_.contains(key)) throw DataError("duplicate embedding key: " + key);
  index_.emplace(key, keys_.size());
  keys_.push_back(std::move(key));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

const float* EmbeddingTable::find(const std::string& key) const {
  const auto it = index_.find(key);
  return it == index_.end() ? nullptr : data_.data() + it->second * dim_;
}

std::span<const float> EmbeddingTable::get(const std::string& key) const {
  const float* p = find(key);
  return p ? std::span<const float>(p, dim_) : std::span<const float>();
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
  if (path.extension() == ".csv") {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write embedding file: " + path.string());
    if (!table.model_id().empty()) out << "# model=" << table.model_id() << '\n';
    out << (table.key_kind() == EmbeddingKey::UserId ? "user_id" : "tweet_id");
    for (std::size_t k = 0; k < table.dim(); ++k) out << ",v" << k;
    out << '\n';
    out << std::setprecision(std::numeric_limits<float>::max_digits10);
    for (const auto& key : table.keys()) {
      out << csv::escape(key);
      for (const float x : table.get(key)) out << ',' << x;
      out << '\n';
    }
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write embedding file: " + path.string());
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(table.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(table.key_kind()));
  put<std::uint64_t>(out, table.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(table.model_id().size()));
  out.write(table.model_id().data(), static_cast<std::streamsize>(table.model_id().size()));
  for (const auto& key : table.keys()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(key.size()));
    out.write(key.data(), static_cast<std::streamsize>(key.size()));
    for (const float x : table.get(key)) put<float>(out, x);
  }
}

EmbeddingTable read_embeddings(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? read_csv(path) : read_binary(path);
}

}  // namespace xenorisk::features
