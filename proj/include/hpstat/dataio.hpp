#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "hpstat/types.hpp"

namespace hpstat {

/// A labeled point cloud: one row per sample, with the class of each row.
template <typename Scalar>
struct BasicRepresentationSet {
  RowMatrix<Scalar> matrix;
  std::vector<Label> labels;
  Provenance provenance;

  Index rows() const { return matrix.rows(); }
  Index cols() const { return matrix.cols(); }
};

/// Activations are stored as 32-bit floats; statistics are computed in double.
using RepresentationSet = BasicRepresentationSet<float>;

/// Number of classes N, i.e. max label + 1 (labels are dense in [0, N)).
Label class_count(std::span<const Label> labels);

/// Per-class row counts, indexed by label.
std::vector<Index> class_histogram(std::span<const Label> labels);

/// Throws unless the label count equals the row count and the labels are dense.
void validate(const RepresentationSet& rep);

// HPRM layout, all little-endian:
//   "HPRM" | u32 version (=1) | u64 rows | u64 cols | u8 dtype (1 = f32)
//   | rows*cols f32 row-major payload | rows u32 labels
inline constexpr std::uint32_t kHprmVersion = 1;
inline constexpr std::uint8_t kHprmFloat32 = 1;
inline constexpr std::size_t kHprmHeaderBytes = 25;

void write_hprm(const RepresentationSet& rep, const std::filesystem::path& path);
RepresentationSet read_hprm(const std::filesystem::path& path);

struct CsvOptions {
  /// Last column holds the integer class label.
  bool label_column = false;
};

/// Numeric CSV; a first row that does not parse as numbers is taken as a header.
RepresentationSet read_csv(const std::filesystem::path& path, const CsvOptions& options = {});
void write_csv(const RepresentationSet& rep, const std::filesystem::path& path,
               bool label_column = true);

/// HPRM when the file starts with the magic bytes, CSV otherwise. A `.hprm`
/// file without the magic is a MagicMismatch. Labels from `labels_path`, when
/// given, replace the embedded ones.
RepresentationSet read_representation(const std::filesystem::path& path,
                                      const CsvOptions& options = {},
                                      const std::optional<std::filesystem::path>& labels_path = {});

void write_representation(const RepresentationSet& rep, const std::filesystem::path& path);

/// Label file: HPRM (labels taken) or text with one integer per line.
std::vector<Label> read_labels(const std::filesystem::path& path);

/// Whitespace- or comma-separated reals.
std::vector<double> read_values(const std::filesystem::path& path);

/// Seeded choice of `per_class` rows of every class, without replacement.
/// Returned indices are ascending. Depends only on the labels and the seed, so
/// layers sharing one label vector get the same subset.
std::vector<Index> subsample_indices(std::span<const Label> labels, Index per_class,
                                     std::uint64_t seed);

RepresentationSet take_rows(const RepresentationSet& rep, std::span<const Index> rows);

RepresentationSet subsample_per_class(const RepresentationSet& rep, Index per_class,
                                      std::uint64_t seed);

/// Uniform permutation of the label vector; matrix and class counts unchanged.
RepresentationSet permute_labels(RepresentationSet rep, std::uint64_t seed);

/// Class c is an isotropic unit Gaussian around a random center drawn from a
/// standard normal and multiplied by `center_scale`; 0 yields one shared
/// distribution for all classes. Rows are grouped by class.
RepresentationSet synth_gaussian_mixture(Index classes, Index per_class, Index dim,
                                         double center_scale, std::uint64_t seed);

}  // namespace hpstat
