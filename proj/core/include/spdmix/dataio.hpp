#pragma once

// SPDB binary matrix files with a labels CSV sidecar, and CSV ingestion of
// multivariate time series.
//
// SPDB layout, all integers and doubles little-endian:
//   offset 0   char[4]  "SPDB"
//   offset 4   u16      version (1)
//   offset 6   u32      dim n
//   offset 10  u32      count
//   offset 14  u32      flags (bit 0 correlation, bit 1 classification)
//   offset 18  f64      count * n * n entries, row-major per matrix
// Labels live in <stem>.labels.csv next to the binary file, header "id,label".

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spdmix/dataset.hpp"
#include "spdmix/spdness.hpp"

namespace spdmix {

inline constexpr char kSpdbMagic[4] = {'S', 'P', 'D', 'B'};
inline constexpr std::uint16_t kSpdbVersion = 1;
inline constexpr std::size_t kSpdbHeaderSize = 18;
inline constexpr std::uint32_t kFlagCorrelation = 1u << 0;
inline constexpr std::uint32_t kFlagClassification = 1u << 1;

struct SpdbHeader {
  std::uint16_t version = kSpdbVersion;
  std::uint32_t dim = 0;
  std::uint32_t count = 0;
  std::uint32_t flags = 0;
};

/// "<dir>/<stem>.labels.csv" for "<dir>/<stem>.<ext>".
std::filesystem::path labels_path(const std::filesystem::path& matrix_path);

/// Writes the binary file and its labels sidecar. Throws FormatError(kIo).
void write_matrices(const std::filesystem::path& path, const LabeledDataset& dataset);

/// Reads and validates only the header.
SpdbHeader read_header(const std::filesystem::path& path);

/// Reads a dataset written by write_matrices. Matrices and labels round-trip
/// bit for bit. Each malformation raises FormatError with its own kind.
LabeledDataset read_matrices(const std::filesystem::path& path);

enum class SeriesLayout { kVarsAsRows, kVarsAsCols };

/// Comma-separated numbers. A first line containing a non-numeric field is
/// taken as a header of variable names and skipped.
SeriesMatrix read_series_csv(const std::filesystem::path& path, SeriesLayout layout);

/// Writes a line of column names first when `header` is set.
void write_series_csv(const std::filesystem::path& path, const SeriesMatrix& series,
                      SeriesLayout layout, bool header = false);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace spdmix
