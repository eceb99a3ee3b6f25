#include "ies/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace ies {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    cells.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::optional<double> parse_number(const std::string& cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) return std::nullopt;
  return value;
}

std::optional<LabelId> parse_integer(const std::string& cell) {
  LabelId value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
  return value;
}

/// Resolves a column given by header name or by zero-based index.
std::size_t resolve_column(const std::string& spec, const std::vector<std::string>& header,
                           std::size_t width) {
  const auto named = std::find(header.begin(), header.end(), spec);
  if (named != header.end()) return static_cast<std::size_t>(named - header.begin());
  if (const auto idx = parse_integer(spec); idx && *idx >= 0 && static_cast<std::size_t>(*idx) < width) {
    return static_cast<std::size_t>(*idx);
  }
  throw ConfigError("column '" + spec + "' not found");
}

}  // namespace

Dataset parse_dataset(std::istream& in, const CsvOptions& options) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    lines.emplace_back(number, line);
  }
  if (lines.empty()) throw InvalidDataError("dataset file is empty");

  char delim = options.delimiter;
  if (delim == 0) delim = lines.front().second.find('\t') != std::string::npos ? '\t' : ',';

  std::vector<std::string> header;
  std::size_t first_row = 0;
  const std::size_t width = split(lines.front().second, delim).size();
  if (options.has_header) {
    header = split(lines.front().second, delim);
    first_row = 1;
  }
  if (first_row >= lines.size()) throw InvalidDataError("dataset has a header but no rows");

  std::optional<std::size_t> label_col;
  if (options.label_column) label_col = resolve_column(*options.label_column, header, width);
  std::set<std::size_t> skipped;
  for (const auto& spec : options.ignore_columns) skipped.insert(resolve_column(spec, header, width));
  if (label_col) skipped.insert(*label_col);

  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < width; ++c) {
    if (!skipped.count(c)) feature_cols.push_back(c);
  }
  if (feature_cols.empty()) throw InvalidDataError("dataset has no feature columns");

  Dataset out;
  for (std::size_t c : feature_cols) {
    out.feature_names.push_back(options.has_header ? header[c] : "x" + std::to_string(c));
  }

  const auto n = static_cast<Index>(lines.size() - first_row);
  out.features.resize(n, static_cast<Index>(feature_cols.size()));
  std::vector<std::string> raw_labels;
  for (std::size_t r = first_row; r < lines.size(); ++r) {
    const auto& [number, text] = lines[r];
    const auto cells = split(text, delim);
    if (cells.size() != width) {
      throw ParseError("line " + std::to_string(number) + ": expected " + std::to_string(width) +
                           " fields, found " + std::to_string(cells.size()),
                       number, 0);
    }
    const auto row = static_cast<Index>(r - first_row);
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      const std::size_t c = feature_cols[f];
      const auto value = parse_number(cells[c]);
      if (!value || !std::isfinite(*value)) {
        throw ParseError("line " + std::to_string(number) + ", column " + std::to_string(c + 1) +
                             ": '" + cells[c] + "' is not a finite number",
                         number, c + 1);
      }
      out.features(row, static_cast<Index>(f)) = *value;
    }
    if (label_col) {
      if (cells[*label_col].empty()) {
        throw ParseError("line " + std::to_string(number) + ": missing label", number,
                         *label_col + 1);
      }
      raw_labels.push_back(cells[*label_col]);
    }
  }

  if (label_col) {
    const bool numeric = std::all_of(raw_labels.begin(), raw_labels.end(),
                                     [](const std::string& s) { return parse_integer(s).has_value(); });
    std::vector<LabelId> ids;
    ids.reserve(raw_labels.size());
    if (numeric) {
      for (const auto& s : raw_labels) {
        ids.push_back(*parse_integer(s));
        out.label_names[ids.back()] = s;
      }
    } else {
      std::vector<std::string> names = raw_labels;
      std::sort(names.begin(), names.end());
      names.erase(std::unique(names.begin(), names.end()), names.end());
      for (const auto& s : raw_labels) {
        ids.push_back(std::lower_bound(names.begin(), names.end(), s) - names.begin());
      }
      for (std::size_t i = 0; i < names.size(); ++i) out.label_names[static_cast<LabelId>(i)] = names[i];
    }
    out.labels = std::move(ids);
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw InvalidDataError("cannot open dataset '" + path.string() + "'");
  return parse_dataset(in, options);
}

void write_dataset(std::ostream& out, const Dataset& data) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index c = 0; c < data.dims(); ++c) {
    if (c > 0) out << ',';
    out << (static_cast<std::size_t>(c) < data.feature_names.size()
                ? data.feature_names[static_cast<std::size_t>(c)]
                : "x" + std::to_string(c));
  }
  if (data.labels) out << ",label";
  out << '\n';
  for (Index r = 0; r < data.size(); ++r) {
    for (Index c = 0; c < data.dims(); ++c) {
      if (c > 0) out << ',';
      out << data.features(r, c);
    }
    if (data.labels) out << ',' << (*data.labels)[static_cast<std::size_t>(r)];
    out << '\n';
  }
}

}  // namespace ies
