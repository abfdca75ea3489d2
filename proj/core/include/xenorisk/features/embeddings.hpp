#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace xenorisk::features {

enum class EmbeddingKey : std::uint32_t { UserId = 0, TweetId = 1 };

// Fixed-dimension float32 vectors keyed by user_id or tweet_id.
//
// Binary layout (all integers little-endian):
//   "XEMB"                 magic, 4 bytes
//   u32 version            = 1
//   u32 dim
//   u32 key_kind           0 = user_id, 1 = tweet_id
//   u64 record_count
//   u32 model_len, bytes   encoder identifier (UTF-8, may be empty)
//   record_count times:
//     u32 key_len, bytes   key (UTF-8)
//     dim x f32            IEEE-754 little-endian
//
// CSV fallback (".csv" extension): header `user_id|tweet_id,v0,...,v{dim-1}`,
// one record per line; an optional leading `# model=<id>` comment line.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dim, EmbeddingKey key_kind, std::string model_id = {});

  // Throws DataError when the vector length differs from dim or the key repeats.
  void add(std::string key, std::vector<float> vector);

  const float* find(const std::string& key) const;
  std::span<const float> get(const std::string& key) const;  // empty span when absent
  bool contains(const std::string& key) const { return index_.contains(key); }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return keys_.size(); }
  EmbeddingKey key_kind() const { return key_kind_; }
  const std::string& model_id() const { return model_id_; }
  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::size_t dim_ = 0;
  EmbeddingKey key_kind_ = EmbeddingKey::UserId;
  std::string model_id_;
  std::vector<std::string> keys_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table);
// Dispatches on the ".csv" extension; anything else is read as binary.
EmbeddingTable read_embeddings(const std::filesystem::path& path);

}  // namespace xenorisk::features
