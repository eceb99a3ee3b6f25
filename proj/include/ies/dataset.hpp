#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ies/validation.hpp"

namespace ies {

/// n x m feature table with optional ground-truth labels, one row per observation.
struct Dataset {
  Matrix features;
  std::vector<std::string> feature_names;
  std::optional<std::vector<LabelId>> labels;
  /// Original spelling of each label id. Integer labels map to themselves.
  std::map<LabelId, std::string> label_names;

  Index size() const { return features.rows(); }
  Index dims() const { return features.cols(); }
};

struct CsvOptions {
  /// Header name, or a zero-based column index when no header name matches.
  std::optional<std::string> label_column;
  bool has_header = true;
  /// 0 picks ',' or '\t' from the first line.
  char delimiter = 0;
  /// Columns to skip entirely (header names or zero-based indices), e.g. gene ids.
  std::vector<std::string> ignore_columns;
};

/// Parses a rectangular numeric CSV. Ragged rows, non-numeric or non-finite
/// feature cells raise ParseError with the 1-based line and column.
Dataset parse_dataset(std::istream& in, const CsvOptions& options = {});
Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes features (and a trailing "label" column when labels exist).
void write_dataset(std::ostream& out, const Dataset& data);

}  // namespace ies
