#include "hpstat/dataio.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "hpstat/error.hpp"
#include "hpstat/rng.hpp"

namespace hpstat {

namespace fs = std::filesystem;

Label class_count(std::span<const Label> labels) {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

std::vector<Index> class_histogram(std::span<const Label> labels) {
  std::vector<Index> counts(class_count(labels), 0);
  for (Label l : labels) ++counts[l];
  return counts;
}

void validate(const RepresentationSet& rep) {
  if (static_cast<Index>(rep.labels.size()) != rep.rows()) {
    throw LabelCountMismatch(std::to_string(rep.labels.size()) + " labels for " +
                             std::to_string(rep.rows()) + " rows");
  }
  const auto counts = class_histogram(rep.labels);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw InvalidArgument("class ids must be dense in [0, N): class " + std::to_string(c) +
                            " has no rows");
    }
  }
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    bytes[k] = static_cast<unsigned char>(value >> (8 * k));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(const unsigned char* bytes) {
  T value = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) value |= static_cast<T>(bytes[k]) << (8 * k);
  return value;
}

std::uint32_t float_bits(float v) { return std::bit_cast<std::uint32_t>(v); }

void require_open(const std::ios& stream, const fs::path& path, const char* mode) {
  if (!stream) throw Error(std::string("cannot open ") + path.string() + " for " + mode);
}

bool has_hprm_magic(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require_open(in, path, "reading");
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::memcmp(magic, "HPRM", 4) == 0;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

Label parse_label(const std::string& text, const fs::path& path) {
  unsigned long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      value > std::numeric_limits<Label>::max()) {
    throw FormatError("invalid class label '" + text + "' in " + path.string());
  }
  return static_cast<Label>(value);
}

}  // namespace

void write_hprm(const RepresentationSet& rep, const fs::path& path) {
  if (static_cast<Index>(rep.labels.size()) != rep.rows()) {
    throw LabelCountMismatch("cannot write " + std::to_string(rep.labels.size()) +
                             " labels for " + std::to_string(rep.rows()) + " rows");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require_open(out, path, "writing");
  out.write("HPRM", 4);
  put_le<std::uint32_t>(out, kHprmVersion);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(rep.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(rep.cols()));
  put_le<std::uint8_t>(out, kHprmFloat32);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(rep.matrix.data()),
              static_cast<std::streamsize>(rep.matrix.size() * sizeof(float)));
  } else {
    for (Index k = 0; k < rep.matrix.size(); ++k) put_le(out, float_bits(rep.matrix.data()[k]));
  }
  for (Label l : rep.labels) put_le<std::uint32_t>(out, l);
  if (!out) throw Error("write failed for " + path.string());
}

RepresentationSet read_hprm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require_open(in, path, "reading");
  const auto file_size = fs::file_size(path);

  unsigned char header[kHprmHeaderBytes];
  in.read(reinterpret_cast<char*>(header), kHprmHeaderBytes);
  if (in.gcount() >= 4 && std::memcmp(header, "HPRM", 4) != 0) {
    throw MagicMismatch(path.string() + ": not an HPRM file (bad magic)");
  }
  if (static_cast<std::size_t>(in.gcount()) < kHprmHeaderBytes) {
    throw TruncatedPayload(path.string() + ": header truncated");
  }
  const auto version = get_le<std::uint32_t>(header + 4);
  const auto rows = get_le<std::uint64_t>(header + 8);
  const auto cols = get_le<std::uint64_t>(header + 16);
  const auto dtype = header[24];
  if (version != kHprmVersion) {
    throw FormatError(path.string() + ": unsupported HPRM version " + std::to_string(version));
  }
  if (dtype != kHprmFloat32) {
    throw FormatError(path.string() + ": unsupported dtype tag " + std::to_string(dtype));
  }

  constexpr std::uint64_t kLimit = std::numeric_limits<std::uint64_t>::max() / 8;
  if (rows > kLimit || cols > kLimit || (cols != 0 && rows > kLimit / cols)) {
    throw TruncatedPayload(path.string() + ": header sizes exceed the file");
  }
  const std::uint64_t payload_bytes = rows * cols * sizeof(float);
  const std::uint64_t label_bytes = rows * sizeof(std::uint32_t);
  const std::uint64_t expected = kHprmHeaderBytes + payload_bytes + label_bytes;
  if (file_size < expected) {
    throw TruncatedPayload(path.string() + ": expected " + std::to_string(expected) +
                           " bytes for " + std::to_string(rows) + "x" + std::to_string(cols) +
                           ", file has " + std::to_string(file_size));
  }
  if (file_size > expected) {
    const auto extra = file_size - expected;
    if (extra % sizeof(std::uint32_t) == 0) {
      throw LabelCountMismatch(path.string() + ": " +
                               std::to_string(rows + extra / sizeof(std::uint32_t)) +
                               " labels for " + std::to_string(rows) + " rows");
    }
    throw FormatError(path.string() + ": " + std::to_string(extra) + " trailing bytes");
  }

  RepresentationSet rep;
  rep.matrix.resize(static_cast<Index>(rows), static_cast<Index>(cols));
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(rep.matrix.data()), static_cast<std::streamsize>(payload_bytes));
  } else {
    std::vector<unsigned char> buffer(payload_bytes);
    in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(payload_bytes));
    for (Index k = 0; k < rep.matrix.size(); ++k) {
      rep.matrix.data()[k] = std::bit_cast<float>(get_le<std::uint32_t>(buffer.data() + 4 * k));
    }
  }
  std::vector<unsigned char> label_buffer(label_bytes);
  in.read(reinterpret_cast<char*>(label_buffer.data()), static_cast<std::streamsize>(label_bytes));
  if (static_cast<std::uint64_t>(in.gcount()) != label_bytes) {
    throw TruncatedPayload(path.string() + ": payload truncated");
  }
  rep.labels.resize(rows);
  for (std::uint64_t r = 0; r < rows; ++r) {
    rep.labels[r] = get_le<std::uint32_t>(label_buffer.data() + 4 * r);
  }
  return rep;
}

RepresentationSet read_csv(const fs::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  require_open(in, path, "reading");

  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  std::string line;
  std::size_t line_number = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) numeric &= parse_double(fields[k], values[k]);
    if (first) {
      first = false;
      width = fields.size();
      if (!numeric) continue;  // header
    }
    if (fields.size() != width) {
      throw FormatError(path.string() + ":" + std::to_string(line_number) + ": expected " +
                        std::to_string(width) + " fields, found " + std::to_string(fields.size()));
    }
    if (!numeric) {
      throw FormatError(path.string() + ":" + std::to_string(line_number) + ": non-numeric field");
    }
    if (options.label_column) {
      labels.push_back(parse_label(fields.back(), path));
      values.pop_back();
    }
    rows.push_back(std::move(values));
  }

  const std::size_t cols = options.label_column ? width - 1 : width;
  if (options.label_column && width < 2) {
    throw FormatError(path.string() + ": label column requested but rows have < 2 fields");
  }
  RepresentationSet rep;
  rep.matrix.resize(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      rep.matrix(static_cast<Index>(r), static_cast<Index>(c)) = static_cast<float>(rows[r][c]);
    }
  }
  rep.labels = options.label_column ? std::move(labels) : std::vector<Label>(rows.size(), 0);
  return rep;
}

void write_csv(const RepresentationSet& rep, const fs::path& path, bool label_column) {
  std::ofstream out(path, std::ios::trunc);
  require_open(out, path, "writing");
  out << std::setprecision(std::numeric_limits<float>::max_digits10);
  for (Index r = 0; r < rep.rows(); ++r) {
    for (Index c = 0; c < rep.cols(); ++c) {
      if (c > 0) out << ',';
      out << rep.matrix(r, c);
    }
    if (label_column) out << (rep.cols() > 0 ? "," : "") << rep.labels[static_cast<std::size_t>(r)];
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

RepresentationSet read_representation(const fs::path& path, const CsvOptions& options,
                                      const std::optional<fs::path>& labels_path) {
  RepresentationSet rep;
  if (has_hprm_magic(path)) {
    rep = read_hprm(path);
  } else if (path.extension() == ".hprm") {
    throw MagicMismatch(path.string() + ": not an HPRM file (bad magic)");
  } else {
    rep = read_csv(path, options);
  }
  if (labels_path) {
    auto labels = read_labels(*labels_path);
    if (static_cast<Index>(labels.size()) != rep.rows()) {
      throw LabelCountMismatch(labels_path->string() + ": " + std::to_string(labels.size()) +
                               " labels for " + std::to_string(rep.rows()) + " rows of " +
                               path.string());
    }
    rep.labels = std::move(labels);
  }
  validate(rep);
  return rep;
}

void write_representation(const RepresentationSet& rep, const fs::path& path) {
  write_hprm(rep, path);
}

std::vector<Label> read_labels(const fs::path& path) {
  if (has_hprm_magic(path)) return read_hprm(path).labels;
  std::ifstream in(path);
  require_open(in, path, "reading");
  std::vector<Label> labels;
  std::string line;
  while (std::getline(in, line)) {
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    labels.push_back(parse_label(text, path));
  }
  return labels;
}

std::vector<double> read_values(const fs::path& path) {
  std::ifstream in(path);
  require_open(in, path, "reading");
  std::vector<double> values;
  std::string token;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).rfind('#', 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream stream(line);
    while (stream >> token) {
      double v = 0.0;
      if (!parse_double(token, v)) {
        throw FormatError(path.string() + ": '" + token + "' is not a number");
      }
      values.push_back(v);
    }
  }
  return values;
}

std::vector<Index> subsample_indices(std::span<const Label> labels, Index per_class,
                                     std::uint64_t seed) {
  if (per_class < 1) throw InvalidArgument("per-class subsample size must be >= 1");
  const Label classes = class_count(labels);
  std::vector<std::vector<Index>> members(classes);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    members[labels[r]].push_back(static_cast<Index>(r));
  }
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(per_class) * classes);
  for (Label c = 0; c < classes; ++c) {
    auto& rows = members[c];
    if (static_cast<Index>(rows.size()) < per_class) {
      throw UndersizedClass(c, static_cast<Index>(rows.size()), per_class);
    }
    CounterRng rng(seed, c);
    partial_shuffle(std::span<Index>(rows), static_cast<std::size_t>(per_class), rng);
    chosen.insert(chosen.end(), rows.begin(), rows.begin() + per_class);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

RepresentationSet take_rows(const RepresentationSet& rep, std::span<const Index> rows) {
  RepresentationSet out;
  out.provenance = rep.provenance;
  out.matrix.resize(static_cast<Index>(rows.size()), rep.cols());
  out.labels.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= rep.rows()) throw InvalidArgument("row index out of range");
    out.matrix.row(static_cast<Index>(k)) = rep.matrix.row(rows[k]);
    out.labels.push_back(rep.labels[static_cast<std::size_t>(rows[k])]);
  }
  return out;
}

RepresentationSet subsample_per_class(const RepresentationSet& rep, Index per_class,
                                      std::uint64_t seed) {
  const auto rows = subsample_indices(rep.labels, per_class, seed);
  return take_rows(rep, rows);
}

RepresentationSet permute_labels(RepresentationSet rep, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  shuffle(std::span<Label>(rep.labels), rng);
  return rep;
}

RepresentationSet synth_gaussian_mixture(Index classes, Index per_class, Index dim,
                                         double center_scale, std::uint64_t seed) {
  if (classes < 1 || per_class < 1 || dim < 1) {
    throw InvalidArgument("synthetic mixture needs classes, per_class and dim >= 1");
  }
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  RepresentationSet rep;
  rep.matrix.resize(classes * per_class, dim);
  rep.labels.reserve(static_cast<std::size_t>(classes * per_class));
  Eigen::VectorXd center(dim);
  for (Index c = 0; c < classes; ++c) {
    for (Index k = 0; k < dim; ++k) center(k) = center_scale * normal(engine);
    for (Index r = 0; r < per_class; ++r) {
      const Index row = c * per_class + r;
      for (Index k = 0; k < dim; ++k) {
        rep.matrix(row, k) = static_cast<float>(center(k) + normal(engine));
      }
      rep.labels.push_back(static_cast<Label>(c));
    }
  }
  return rep;
}

}  // namespace hpstat
