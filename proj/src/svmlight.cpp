#include "dropsvm/svmlight.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dropsvm/errors.hpp"

namespace dropsvm {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view strip_plus(std::string_view s) {
  return (!s.empty() && s.front() == '+') ? s.substr(1) : s;
}

double parse_real(std::string_view tok, std::size_t line, const char* what) {
  tok = strip_plus(tok);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("malformed ") + what + " '" + std::string(tok) + "'");
  if (!std::isfinite(v)) throw ParseError(line, std::string("non-finite ") + what);
  return v;
}

struct Row {
  std::string_view label;
  std::vector<Entry> entries;
};

// Returns false for blank / comment-only lines.
bool parse_row(std::string_view text, std::size_t line, Row& row) {
  if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t b = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > b) toks.push_back(text.substr(b, i - b));
  }
  if (toks.empty()) return false;

  row.label = toks[0];
  row.entries.clear();
  for (std::size_t t = 1; t < toks.size(); ++t) {
    const auto tok = toks[t];
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size())
      throw ParseError(line, "expected <index>:<value>, got '" + std::string(tok) + "'");
    unsigned long idx = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + colon, idx);
    if (ec != std::errc() || ptr != tok.data() + colon || idx == 0 ||
        idx > std::numeric_limits<FeatureIndex>::max())
      throw ParseError(line, "malformed feature index '" + std::string(tok.substr(0, colon)) + "'");
    const double v = parse_real(tok.substr(colon + 1), line, "feature value");
    row.entries.push_back({static_cast<FeatureIndex>(idx - 1), v});
  }
  std::sort(row.entries.begin(), row.entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (std::size_t k = 1; k < row.entries.size(); ++k)
    if (row.entries[k].index == row.entries[k - 1].index)
      throw ParseError(line, "duplicate feature index " + std::to_string(row.entries[k].index + 1));
  return true;
}

template <class Label, class LabelFn>
void parse_lines(std::istream& in, std::vector<SparseVector>& xs, std::vector<Label>& ys,
                 std::size_t& dim, LabelFn&& label_of) {
  std::string text;
  std::size_t line = 0;
  Row row;
  while (std::getline(in, text)) {
    ++line;
    if (!parse_row(text, line, row)) continue;
    ys.push_back(label_of(row.label, line));
    if (!row.entries.empty())
      dim = std::max(dim, static_cast<std::size_t>(row.entries.back().index) + 1);
    xs.emplace_back(std::move(row.entries));
  }
  if (in.bad()) throw std::runtime_error("read error after line " + std::to_string(line));
  if (xs.empty()) throw ParseError(line, "no examples");
}

double binary_label(std::string_view tok, std::size_t line) {
  const double y = parse_real(tok, line, "label");
  if (y == 1.0) return 1.0;
  if (y == -1.0 || y == 0.0) return -1.0;
  throw ParseError(line, "label must be one of -1, +1, 0, 1; got '" + std::string(tok) + "'");
}

int class_label(std::string_view tok, std::size_t line) {
  const double v = parse_real(tok, line, "label");
  if (v < 0 || v != std::floor(v) || v > 1e6)
    throw ParseError(line, "class label must be a non-negative integer; got '" + std::string(tok) +
                               "'");
  return static_cast<int>(v);
}

std::string slurp(const std::filesystem::path& path) {
  if (path.extension() == ".gz") {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::string out;
    char buf[1 << 16];
    int got = 0;
    while ((got = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(got));
    const bool failed = got < 0;
    gzclose(f);
    if (failed) throw std::runtime_error("corrupt gzip stream in " + path.string());
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_entries(std::ostream& out, const SparseVector& x) {
  for (const auto& e : x.entries()) out << ' ' << (e.index + 1) << ':' << format_double(e.value);
  out << '\n';
}

}  // namespace

Dataset parse_svmlight(std::istream& in, std::optional<std::size_t> dim_hint) {
  std::vector<SparseVector> xs;
  std::vector<double> ys;
  std::size_t dim = dim_hint.value_or(0);
  parse_lines(in, xs, ys, dim, binary_label);
  return Dataset(dim, std::move(xs), std::move(ys));
}

MulticlassDataset parse_svmlight_multiclass(std::istream& in, std::optional<std::size_t> dim_hint) {
  std::vector<SparseVector> xs;
  std::vector<int> ys;
  std::size_t dim = dim_hint.value_or(0);
  parse_lines(in, xs, ys, dim, class_label);
  return MulticlassDataset(dim, std::move(xs), std::move(ys));
}

Dataset read_svmlight_file(const std::filesystem::path& path, std::optional<std::size_t> dim_hint) {
  std::istringstream in(slurp(path));
  return parse_svmlight(in, dim_hint);
}

MulticlassDataset read_svmlight_multiclass_file(const std::filesystem::path& path,
                                                std::optional<std::size_t> dim_hint) {
  std::istringstream in(slurp(path));
  return parse_svmlight_multiclass(in, dim_hint);
}

void write_svmlight(std::ostream& out, const Dataset& data) {
  for (std::size_t n = 0; n < data.size(); ++n) {
    out << (data.label(n) > 0 ? "+1" : "-1");
    write_entries(out, data.example(n));
  }
}

void write_svmlight(std::ostream& out, const MulticlassDataset& data) {
  for (std::size_t n = 0; n < data.size(); ++n) {
    out << data.classes()[n];
    write_entries(out, data.examples()[n]);
  }
}

std::vector<double> max_abs_per_feature(std::span<const SparseVector> examples, std::size_t dim) {
  std::vector<double> scale(dim, 0.0);
  for (const auto& x : examples)
    for (const auto& e : x.entries()) scale[e.index] = std::max(scale[e.index], std::abs(e.value));
  for (double& s : scale)
    if (s == 0.0) s = 1.0;
  return scale;
}

Dataset scale_features(const Dataset& data, std::span<const double> scale) {
  if (scale.size() < data.dim()) throw DimensionMismatch("scale vector shorter than dimension");
  std::vector<SparseVector> xs;
  xs.reserve(data.size());
  for (const auto& x : data.examples()) {
    std::vector<Entry> e(x.entries().begin(), x.entries().end());
    for (auto& entry : e) entry.value /= scale[entry.index];
    xs.emplace_back(std::move(e));
  }
  return Dataset(data.dim(), std::move(xs), data.labels());
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace dropsvm
