#include "spdmix/dataio.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>

#include "spdmix/error.hpp"

namespace spdmix {
namespace {

using Kind = FormatError::Kind;

template <typename T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    std::reverse(bytes.begin(), bytes.end());
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
  }
}

template <typename T>
void put(std::string& buf, T value) {
  value = to_little(value);
  char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  buf.append(raw, sizeof(T));
}

template <typename T>
T get(const char* data) {
  T value;
  std::memcpy(&value, data, sizeof(T));
  return to_little(value);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(Kind::kIo, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw FormatError(Kind::kIo, "read failed: " + path.string());
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(Kind::kIo, "cannot open for writing " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw FormatError(Kind::kIo, "write failed: " + path.string());
}

SpdbHeader parse_header(const std::string& bytes, const std::filesystem::path& path) {
  if (bytes.size() < kSpdbHeaderSize) {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kSpdbMagic, 4) != 0) {
      throw FormatError(Kind::kBadMagic, "bad magic in " + path.string());
    }
    throw FormatError(Kind::kTruncatedPayload, "truncated header in " + path.string());
  }
  if (std::memcmp(bytes.data(), kSpdbMagic, 4) != 0) {
    throw FormatError(Kind::kBadMagic, "bad magic in " + path.string());
  }
  SpdbHeader h;
  h.version = get<std::uint16_t>(bytes.data() + 4);
  h.dim = get<std::uint32_t>(bytes.data() + 6);
  h.count = get<std::uint32_t>(bytes.data() + 10);
  h.flags = get<std::uint32_t>(bytes.data() + 14);
  if (h.version != kSpdbVersion) {
    std::ostringstream os;
    os << "unsupported version " << h.version << " in " << path.string() << " (expected "
       << kSpdbVersion << ")";
    throw FormatError(Kind::kVersionMismatch, os.str());
  }
  if ((h.flags & ~(kFlagCorrelation | kFlagClassification)) != 0) {
    std::ostringstream os;
    os << "unknown flag bits 0x" << std::hex << h.flags << " in " << path.string();
    throw FormatError(Kind::kUnsupportedFlags, os.str());
  }
  return h;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

std::vector<std::string_view> lines_of(const std::string& text) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

void read_labels(const std::filesystem::path& path, LabeledDataset& ds) {
  const std::string text = read_file(path);
  const std::vector<std::string_view> lines = lines_of(text);
  if (lines.empty() || trim(lines.front()) != "id,label") {
    throw FormatError(Kind::kParse, "labels file " + path.string() + " lacks header id,label");
  }
  if (lines.size() - 1 != ds.matrices.size()) {
    std::ostringstream os;
    os << "label count " << lines.size() - 1 << " does not match matrix count "
       << ds.matrices.size() << " (" << path.string() << ")";
    throw FormatError(Kind::kLabelCountMismatch, os.str());
  }
  ds.labels.reserve(ds.matrices.size());
  ds.ids.reserve(ds.matrices.size());
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const std::vector<std::string_view> fields = split(lines[k], ',');
    std::uint64_t id = 0;
    double label = 0.0;
    if (fields.size() != 2 || !parse_u64(fields[0], id) || !parse_double(fields[1], label)) {
      std::ostringstream os;
      os << path.string() << ":" << k + 1 << ": expected id,label";
      throw FormatError(Kind::kParse, os.str());
    }
    ds.ids.push_back(id);
    ds.labels.push_back(label);
  }
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::filesystem::path labels_path(const std::filesystem::path& matrix_path) {
  std::filesystem::path p = matrix_path;
  p.replace_filename(matrix_path.stem().string() + ".labels.csv");
  return p;
}

void write_matrices(const std::filesystem::path& path, const LabeledDataset& dataset) {
  dataset.validate();
  const std::size_t count = dataset.size();
  const Index n = dataset.dim();
  std::uint32_t flags = 0;
  if (dataset.is_correlation) flags |= kFlagCorrelation;
  if (dataset.task == Task::kClassification) flags |= kFlagClassification;

  std::string buf;
  buf.reserve(kSpdbHeaderSize + count * static_cast<std::size_t>(n * n) * sizeof(double));
  buf.append(kSpdbMagic, 4);
  put<std::uint16_t>(buf, kSpdbVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(n));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(count));
  put<std::uint32_t>(buf, flags);
  for (const SymmetricMatrix& s : dataset.matrices) {
    for (Index p = 0; p < n; ++p) {
      for (Index q = 0; q < n; ++q) put<double>(buf, s(p, q));
    }
  }
  write_file(path, buf);

  std::string labels = "id,label\n";
  for (std::size_t k = 0; k < count; ++k) {
    labels += std::to_string(dataset.ids[k]);
    labels += ',';
    labels += format_double(dataset.labels[k]);
    labels += '\n';
  }
  write_file(labels_path(path), labels);
}

SpdbHeader read_header(const std::filesystem::path& path) {
  return parse_header(read_file(path), path);
}

LabeledDataset read_matrices(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const SpdbHeader h = parse_header(bytes, path);
  const std::size_t per_matrix = static_cast<std::size_t>(h.dim) * h.dim * sizeof(double);
  const std::size_t expected = kSpdbHeaderSize + per_matrix * h.count;
  if (bytes.size() < expected) {
    std::ostringstream os;
    os << "truncated payload in " << path.string() << ": " << bytes.size() << " bytes, expected "
       << expected;
    throw FormatError(Kind::kTruncatedPayload, os.str());
  }
  if (bytes.size() > expected) {
    std::ostringstream os;
    os << bytes.size() - expected << " trailing bytes after payload in " << path.string();
    throw FormatError(Kind::kTrailingData, os.str());
  }

  LabeledDataset ds;
  ds.is_correlation = (h.flags & kFlagCorrelation) != 0;
  ds.task = (h.flags & kFlagClassification) != 0 ? Task::kClassification : Task::kRegression;
  ds.matrices.reserve(h.count);
  const char* cursor = bytes.data() + kSpdbHeaderSize;
  const auto n = static_cast<Index>(h.dim);
  for (std::uint32_t k = 0; k < h.count; ++k) {
    Matrix m(n, n);
    for (Index p = 0; p < n; ++p) {
      for (Index q = 0; q < n; ++q) {
        m(p, q) = get<double>(cursor);
        cursor += sizeof(double);
      }
    }
    try {
      ds.matrices.push_back(SymmetricMatrix::from(m));
    } catch (const Error& e) {
      std::ostringstream os;
      os << "matrix " << k << " in " << path.string() << ": " << e.what();
      throw FormatError(Kind::kParse, os.str());
    }
  }
  read_labels(labels_path(path), ds);
  try {
    ds.validate();
  } catch (const Error& e) {
    throw FormatError(Kind::kParse, path.string() + ": " + e.what());
  }
  return ds;
}

SeriesMatrix read_series_csv(const std::filesystem::path& path, SeriesLayout layout) {
  const std::string text = read_file(path);
  const std::vector<std::string_view> lines = lines_of(text);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::vector<std::string_view> fields = split(lines[k], ',');
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t f = 0; f < fields.size() && numeric; ++f) {
      numeric = parse_double(fields[f], values[f]);
    }
    if (!numeric) {
      if (k == 0) continue;
      std::ostringstream os;
      os << path.string() << ":" << k + 1 << ": non-numeric field";
      throw FormatError(Kind::kParse, os.str());
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      std::ostringstream os;
      os << path.string() << ":" << k + 1 << ": expected " << rows.front().size()
         << " fields, got " << values.size();
      throw FormatError(Kind::kParse, os.str());
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw FormatError(Kind::kParse, "no data rows in " + path.string());

  const auto r = static_cast<Index>(rows.size());
  const auto c = static_cast<Index>(rows.front().size());
  Matrix m(r, c);
  for (Index a = 0; a < r; ++a) {
    for (Index b = 0; b < c; ++b) m(a, b) = rows[a][b];
  }
  if (layout == SeriesLayout::kVarsAsCols) m.transposeInPlace();
  try {
    return SeriesMatrix(std::move(m));
  } catch (const Error& e) {
    throw FormatError(Kind::kParse, path.string() + ": " + e.what());
  }
}

void write_series_csv(const std::filesystem::path& path, const SeriesMatrix& series,
                      SeriesLayout layout, bool header) {
  const Matrix m = layout == SeriesLayout::kVarsAsRows ? series.values()
                                                       : Matrix(series.values().transpose());
  std::string out;
  if (header) {
    for (Index b = 0; b < m.cols(); ++b) {
      if (b > 0) out += ',';
      out += (layout == SeriesLayout::kVarsAsCols ? "v" : "t") + std::to_string(b);
    }
    out += '\n';
  }
  for (Index a = 0; a < m.rows(); ++a) {
    for (Index b = 0; b < m.cols(); ++b) {
      if (b > 0) out += ',';
      out += format_double(m(a, b));
    }
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace spdmix
