#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "xenorisk/corpus/cohorts.hpp"
#include "xenorisk/features/blocks.hpp"

namespace xenorisk::features {

struct BlockLayout {
  BlockKind kind;
  std::size_t offset = 0;
  std::size_t dim = 0;
};

// Users x features, row-major, with the block layout and cohort labels.
struct FeatureMatrix {
  std::vector<std::string> user_ids;
  std::vector<corpus::Cohort> labels;
  std::vector<BlockLayout> blocks;  // canonical order, contiguous
  std::vector<std::string> feature_names;
  std::vector<double> values;
  std::map<std::string, std::string> metadata;

  std::size_t rows() const { return user_ids.size(); }
  std::size_t cols() const { return feature_names.size(); }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols(), cols()}; }
  bool has_block(BlockKind kind) const;
  const BlockLayout* layout(BlockKind kind) const;
  BlockDims dims() const;
  // Column indices of `kinds` in canonical order. Throws ValidationError for a
  // block the matrix does not contain.
  std::vector<std::size_t> columns_for(std::span<const BlockKind> kinds) const;
};

// Binary layout: "XRFM", u32 version (1), u64 header length, UTF-8 JSON header
// {user_ids, labels, blocks:[{name,offset,dim}], feature_names, metadata},
// then rows*cols float64 little-endian.
void save_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

}  // namespace xenorisk::features
