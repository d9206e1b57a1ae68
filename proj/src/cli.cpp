#include "hpstat/cli.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hpstat/analysis.hpp"
#include "hpstat/dataio.hpp"
#include "hpstat/divergence.hpp"
#include "hpstat/error.hpp"
#include "hpstat/kde.hpp"
#include "hpstat/mst.hpp"
#include "hpstat/parallel.hpp"
#include "hpstat/permtest.hpp"
#include "hpstat/pipeline.hpp"
#include "hpstat/report.hpp"

namespace hpstat {

namespace {

using nlohmann::json;

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 0;
  bool json_output = false;
  bool quiet = false;
};

struct MetricOptions {
  std::string name = "euclidean";
  double zero_norm_epsilon = 0.0;

  Metric metric() const { return {parse_metric_kind(name), zero_norm_epsilon}; }
};

void add_metric_options(CLI::App* cmd, MetricOptions& options) {
  cmd->add_option("--metric", options.name, "Proximity measure")
      ->check(CLI::IsMember({"euclidean", "cosine"}))
      ->capture_default_str();
  cmd->add_option("--zero-norm-epsilon", options.zero_norm_epsilon,
                  "Cosine only: floor for vector norms (0 = zero-norm rows are an error)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

/// Plain-text output as `key: value` lines.
class KeyValueWriter {
 public:
  explicit KeyValueWriter(std::ostream& out) : out_(out) {}

  template <typename T>
  KeyValueWriter& put(const std::string& key, const T& value) {
    out_ << key << ": " << value << '\n';
    return *this;
  }

  KeyValueWriter& put_real(const std::string& key, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return put(key, buffer);
  }

 private:
  std::ostream& out_;
};

json optional_json(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

json divergence_json(const DivergenceResult& r) {
  return {{"n", r.n},
          {"m", r.m},
          {"S", r.cross_edges},
          {"R", r.runs},
          {"C", r.shared_node_pairs},
          {"univariate", r.univariate},
          {"expected_runs", r.expected_runs},
          {"variance_runs", optional_json(r.variance_runs)},
          {"w_score", optional_json(r.w_score)},
          {"delta_hat", r.delta_hat},
          {"H", r.hp},
          {"p", r.p_hat}};
}

void print_divergence(std::ostream& out, const DivergenceResult& r) {
  KeyValueWriter kv(out);
  kv.put("n", r.n).put("m", r.m).put("S", r.cross_edges).put("R", r.runs);
  kv.put("C", r.shared_node_pairs).put("univariate", r.univariate ? "true" : "false");
  kv.put_real("expected_runs", r.expected_runs);
  if (r.variance_runs) kv.put_real("variance_runs", *r.variance_runs);
  else kv.put("variance_runs", "undefined");
  if (r.w_score) kv.put_real("W", *r.w_score);
  else kv.put("W", "undefined");
  kv.put_real("delta_hat", r.delta_hat).put_real("H", r.hp).put_real("p", r.p_hat);
}

json test_json(const TestResult& r, const TestSpec& spec) {
  return {{"observed_delta", r.observed_delta}, {"p_value", r.p_value},
          {"reject", r.reject},                 {"trials", r.trials_used},
          {"seed", r.seed},                     {"alpha", spec.alpha},
          {"sided", std::string(to_string(spec.sidedness))}};
}

std::string fixed3(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.3f", value);
  return buffer;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hpstat: minimal-spanning-tree class separation statistics and layer tests"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--threads", global.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_flag("--json", global.json_output, "Machine-readable JSON on stdout");
  app.add_flag("--quiet", global.quiet, "Suppress diagnostics on stderr");

  // divergence
  auto* divergence = app.add_subcommand("divergence", "Two-sample MST statistics of two point sets");
  std::string x_path, y_path;
  MetricOptions divergence_metric;
  divergence->add_option("--x", x_path, "First sample (HPRM or CSV)")->required();
  divergence->add_option("--y", y_path, "Second sample (HPRM or CSV)")->required();
  add_metric_options(divergence, divergence_metric);

  // mst
  auto* mst = app.add_subcommand("mst", "Minimal spanning tree of a two-class labeled sample");
  std::string mst_input;
  std::optional<std::string> mst_labels;
  MetricOptions mst_metric;
  mst->add_option("--input", mst_input, "Points (HPRM or CSV)")->required();
  mst->add_option("--labels", mst_labels, "Label file overriding embedded labels");
  bool mst_label_column = false;
  mst->add_flag("--label-column", mst_label_column, "CSV carries the label in its last column");
  add_metric_options(mst, mst_metric);

  // permtest
  auto* permtest = app.add_subcommand("permtest", "Permutation test of a difference of means");
  std::string a_path, b_path, sided = "two";
  TestSpec perm_spec;
  permtest->add_option("--a", a_path, "First sample of reals")->required();
  permtest->add_option("--b", b_path, "Second sample of reals")->required();
  permtest->add_option("--sided", sided, "two: |delta|; greater: mean(a) - mean(b) > 0")
      ->check(CLI::IsMember({"two", "greater"}))
      ->capture_default_str();
  permtest->add_option("--trials", perm_spec.trials, "Monte-Carlo trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  permtest->add_option("--alpha", perm_spec.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  // pairwise
  auto* pairwise = app.add_subcommand("pairwise", "Class-pairwise H matrix of a labeled sample");
  std::string pairwise_input;
  std::optional<std::string> pairwise_labels;
  MetricOptions pairwise_metric;
  Index pairwise_per_class = 0;
  bool pairwise_permute = false;
  pairwise->add_option("--input", pairwise_input, "Points (HPRM or CSV)")->required();
  pairwise->add_option("--labels", pairwise_labels, "Label file overriding embedded labels");
  bool pairwise_label_column = false;
  pairwise->add_flag("--label-column", pairwise_label_column,
                     "CSV carries the label in its last column");
  pairwise->add_option("--per-class", pairwise_per_class, "Rows drawn per class (0 = all)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  pairwise->add_flag("--permute-labels", pairwise_permute, "Randomly permute labels first");
  add_metric_options(pairwise, pairwise_metric);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Layer battery driven by a config file");
  std::string config_path;
  analyze->add_option("--config", config_path, "Analysis config (see docs/config.md)")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Write a seeded Gaussian mixture");
  Index synth_classes = 10, synth_per_class = 1000, synth_dim = 8;
  double synth_scale = 0.0;
  std::string synth_out;
  synth->add_option("--classes", synth_classes)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--per-class", synth_per_class)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--dim", synth_dim)->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--center-scale", synth_scale, "0 gives one shared distribution")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth->add_option("--out", synth_out, "Output file (.csv writes CSV, otherwise HPRM)")->required();

  // convert
  auto* convert = app.add_subcommand("convert", "Convert between CSV and HPRM");
  bool csv_to_hprm = false, hprm_to_csv = false, label_column = false;
  std::string convert_input, convert_out;
  std::optional<std::string> convert_labels;
  auto* to_hprm_flag = convert->add_flag("--csv-to-hprm", csv_to_hprm, "CSV input, HPRM output");
  auto* to_csv_flag = convert->add_flag("--hprm-to-csv", hprm_to_csv, "HPRM input, CSV output");
  to_hprm_flag->excludes(to_csv_flag);
  convert->add_option("--input", convert_input)->required();
  convert->add_option("--out", convert_out)->required();
  convert->add_flag("--label-column", label_column, "CSV carries the label in its last column");
  convert->add_option("--labels", convert_labels, "Separate label file");

  // kde
  auto* kde = app.add_subcommand("kde", "Gaussian kernel density of a sample of reals");
  std::string kde_input;
  std::optional<double> kde_bandwidth, kde_lo, kde_hi;
  std::size_t kde_points = 200;
  kde->add_option("--input", kde_input, "Whitespace/comma separated reals")->required();
  kde->add_option("--bandwidth", kde_bandwidth, "Kernel bandwidth (default: Silverman)")
      ->check(CLI::PositiveNumber);
  kde->add_option("--lo", kde_lo, "Grid start (default: min - 3 bandwidths)");
  kde->add_option("--hi", kde_hi, "Grid end (default: max + 3 bandwidths)");
  kde->add_option("--points", kde_points, "Grid points")->check(CLI::Range(2, 1000000))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  set_thread_count(global.threads);
  const bool as_json = global.json_output;

  try {
    if (divergence->parsed()) {
      const auto x = read_representation(x_path);
      const auto y = read_representation(y_path);
      const auto result = two_sample_divergence(x.matrix, y.matrix, divergence_metric.metric());
      if (as_json) out << divergence_json(result).dump(2) << '\n';
      else print_divergence(out, result);
    } else if (mst->parsed()) {
      std::optional<std::filesystem::path> labels;
      if (mst_labels) labels = *mst_labels;
      const auto rep = read_representation(mst_input, CsvOptions{mst_label_column}, labels);
      if (class_count(rep.labels) != 2) {
        throw InvalidArgument("mst expects exactly two classes (labels 0 and 1)");
      }
      const auto tree = build_mst(rep.matrix, std::span<const Label>(rep.labels), mst_metric.metric());
      const auto counts = class_histogram(rep.labels);
      if (as_json) {
        json edges = json::array();
        for (const auto& e : tree.edges) edges.push_back({e.i, e.j, e.weight});
        out << json{{"n", counts[0]},
                    {"m", counts[1]},
                    {"S", tree.cross_edges},
                    {"R", tree.runs},
                    {"C", tree.shared_node_pairs},
                    {"total_weight", tree.total_weight()},
                    {"edges", edges}}
                   .dump(2)
            << '\n';
      } else {
        KeyValueWriter kv(out);
        kv.put("n", counts[0]).put("m", counts[1]).put("S", tree.cross_edges);
        kv.put("R", tree.runs).put("C", tree.shared_node_pairs);
        kv.put_real("total_weight", tree.total_weight());
        for (const auto& e : tree.edges) {
          char buffer[96];
          std::snprintf(buffer, sizeof buffer, "%lld %lld %.17g", static_cast<long long>(e.i),
                        static_cast<long long>(e.j), e.weight);
          kv.put("edge", buffer);
        }
      }
    } else if (permtest->parsed()) {
      perm_spec.sidedness = parse_sidedness(sided);
      perm_spec.seed = global.seed;
      const auto a = read_values(a_path);
      const auto b = read_values(b_path);
      const auto result = perm_test_mean_diff(a, b, perm_spec);
      if (as_json) {
        out << test_json(result, perm_spec).dump(2) << '\n';
      } else {
        KeyValueWriter kv(out);
        kv.put_real("delta", result.observed_delta);
        kv.put("p_value", fixed3(result.p_value));
        kv.put_real("p_value_exact", result.p_value);
        kv.put("reject", result.reject ? "true" : "false");
        kv.put("trials", result.trials_used).put("seed", result.seed);
      }
    } else if (pairwise->parsed()) {
      std::optional<std::filesystem::path> labels;
      if (pairwise_labels) labels = *pairwise_labels;
      auto rep = read_representation(pairwise_input, CsvOptions{pairwise_label_column}, labels);
      if (pairwise_per_class > 0) rep = subsample_per_class(rep, pairwise_per_class, global.seed);
      if (pairwise_permute) rep = permute_labels(std::move(rep), global.seed);
      const auto matrix = pairwise_hp_matrix(rep, pairwise_metric.metric());
      if (as_json) {
        out << hp_matrix_to_json(matrix) << '\n';
      } else {
        KeyValueWriter kv(out);
        kv.put("pairs", matrix.size()).put_real("mean_H", mean_hp(matrix));
        for (const auto& e : matrix.entries) {
          char buffer[128];
          std::snprintf(buffer, sizeof buffer, "%u %u S=%lld H=%.10g", e.first, e.second,
                        static_cast<long long>(e.cross_edges), e.hp);
          kv.put("pair", buffer);
        }
      }
    } else if (analyze->parsed()) {
      const auto config = parse_analysis_config(config_path);
      const auto result = run_analysis(config);
      if (as_json) out << report_to_json(result.reports);
      else out << report_to_csv(result.reports);
    } else if (synth->parsed()) {
      const auto rep =
          synth_gaussian_mixture(synth_classes, synth_per_class, synth_dim, synth_scale, global.seed);
      const std::filesystem::path path(synth_out);
      if (path.extension() == ".csv") write_csv(rep, path, true);
      else write_hprm(rep, path);
      if (as_json) {
        out << json{{"out", synth_out}, {"rows", rep.rows()}, {"cols", rep.cols()}}.dump(2) << '\n';
      } else {
        KeyValueWriter(out).put("out", synth_out).put("rows", rep.rows()).put("cols", rep.cols());
      }
    } else if (convert->parsed()) {
      if (!csv_to_hprm && !hprm_to_csv) {
        err << "error: convert needs --csv-to-hprm or --hprm-to-csv\n";
        return kExitUsage;
      }
      std::optional<std::filesystem::path> labels;
      if (convert_labels) labels = *convert_labels;
      RepresentationSet rep;
      if (csv_to_hprm) {
        rep = read_csv(convert_input, CsvOptions{label_column});
        if (labels) {
          rep.labels = read_labels(*labels);
        }
        validate(rep);
        write_hprm(rep, convert_out);
      } else {
        rep = read_representation(convert_input, {}, labels);
        write_csv(rep, convert_out, true);
      }
      if (as_json) {
        out << json{{"out", convert_out}, {"rows", rep.rows()}, {"cols", rep.cols()}}.dump(2)
            << '\n';
      } else {
        KeyValueWriter(out).put("out", convert_out).put("rows", rep.rows()).put("cols", rep.cols());
      }
    } else if (kde->parsed()) {
      const auto values = read_values(kde_input);
      const double h = kde_bandwidth ? *kde_bandwidth : silverman_bandwidth(values);
      const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
      const double lo = kde_lo ? *kde_lo : *min_it - 3.0 * h;
      const double hi = kde_hi ? *kde_hi : *max_it + 3.0 * h;
      const auto grid = linear_grid(lo, hi, kde_points);
      const auto density = kde_1d(values, grid, h);
      if (as_json) {
        out << json{{"bandwidth", h}, {"grid", grid}, {"density", density}}.dump(2) << '\n';
      } else {
        out << "# bandwidth " << h << '\n';
        for (std::size_t k = 0; k < grid.size(); ++k) {
          char buffer[96];
          std::snprintf(buffer, sizeof buffer, "%.10g %.10g\n", grid[k], density[k]);
          out << buffer;
        }
      }
    }
  } catch (const std::exception& e) {
    if (!global.quiet) err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace hpstat
