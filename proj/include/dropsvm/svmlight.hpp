#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dropsvm/dataset.hpp"

namespace dropsvm {

/// Reads `<label> <idx>:<val> ...` lines with 1-based indices. Binary labels
/// may be written as -1/+1 or 0/1; 0 maps to -1. Text after '#' is ignored.
/// The resulting dimension is max(largest index, dim_hint).
Dataset parse_svmlight(std::istream& in, std::optional<std::size_t> dim_hint = std::nullopt);

/// Same line format with non-negative integer class labels.
MulticlassDataset parse_svmlight_multiclass(std::istream& in,
                                            std::optional<std::size_t> dim_hint = std::nullopt);

/// File variants; paths ending in ".gz" are decompressed on the fly.
Dataset read_svmlight_file(const std::filesystem::path& path,
                           std::optional<std::size_t> dim_hint = std::nullopt);
MulticlassDataset read_svmlight_multiclass_file(const std::filesystem::path& path,
                                                std::optional<std::size_t> dim_hint = std::nullopt);

/// Writes 1-based indices and shortest round-trip decimal values; labels as
/// "+1" / "-1".
void write_svmlight(std::ostream& out, const Dataset& data);
void write_svmlight(std::ostream& out, const MulticlassDataset& data);

/// Largest |x_d| per feature (1 where the feature never occurs).
std::vector<double> max_abs_per_feature(std::span<const SparseVector> examples, std::size_t dim);

/// x_d / scale_d for every stored entry.
Dataset scale_features(const Dataset& data, std::span<const double> scale);

/// Shortest decimal form that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace dropsvm
