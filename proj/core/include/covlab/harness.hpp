#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "covlab/moments.hpp"
#include "covlab/samplers.hpp"
#include "covlab/stats.hpp"

namespace covlab {

/// Experiment description. The defaults are the reference profile
/// (reps = 5000, n in {10, 50, 100, 1000}); `scaled_profile()` is the
/// desk-scale variant the CLI runs unless asked for --full.
struct ExperimentConfig {
  int d = 50;
  std::vector<long> n_list = {10, 50, 100, 1000};
  int grid_count = 70;
  long reps = 5000;
  std::vector<DistKind> dists = {DistKind::TruncLaplace, DistKind::UniformSphere};
  std::uint64_t master_seed = 0;
  std::string out_dir = "covlab_out";
  double ci_level = 0.95;

  static ExperimentConfig full_profile();
  static ExperimentConfig scaled_profile();

  /// Overlays `key = value` lines from a flat config file. Keys must match
  /// the field names exactly; unknown keys are rejected (ConfigError).
  void apply_file(const std::string& path);
  void apply_line(const std::string& line);

  void validate() const;
};

/// One replicate's ratio statistic.
struct RunRecord {
  DistKind dist;
  long n;
  double t;
  double r_sigma;
  long j;
  double a;
};

/// One grid cell's CI width.
struct SummaryRecord {
  DistKind dist;
  long n;
  double t;
  double r_sigma;
  double w;
  double log2_w;
};

/// All replicates of one (dist, n, t) cell, in replicate order.
struct CellResult {
  DistKind dist;
  long n;
  int t_index;
  double t;
  double r_sigma;
  std::vector<double> a;
};

/// Checksum of the per-(dist, t) orthogonal factor, for run metadata.
struct FactorChecksum {
  DistKind dist;
  int t_index;
  double t;
  std::uint64_t checksum;
};

using CellSink = std::function<void(const CellResult&)>;

/// Replicate streams are keyed by (master_seed, dist, t_index, n, j), the
/// per-(dist, t) orthogonal factor by a reserved id, so results do not
/// depend on scheduling or worker count.
RandomStream replicate_stream(std::uint64_t seed, DistKind dist, int t_index, long n,
                              long j);
RandomStream factor_stream(std::uint64_t seed, DistKind dist, int t_index);

/// One replicate of ||Sigma_hat - Sigma||_F^2 / E||Sigma_hat - Sigma||_F^2,
/// computed in the eigenbasis (the statistic is conjugation invariant, so
/// the orthogonal factor never enters the hot path).
double replicate_ratio(DistKind dist, const Spectrum& lambda, long n,
                       double expected_frob_sq, RandomStream& rng);

/// Runs the full grid x distribution x sample-size Monte Carlo, invoking
/// the sink once per cell in (dist, n, t) order. Deterministic for a fixed
/// (config, master_seed) regardless of `workers` (0 = hardware threads).
/// Returns the orthogonal-factor checksums.
std::vector<FactorChecksum> run_experiment(const ExperimentConfig& config,
                                           const CellSink& sink, int workers = 0);

std::vector<RunRecord> run_experiment_collect(const ExperimentConfig& config,
                                              int workers = 0);

/// CI widths per cell, sorted by (dist, n, t). Cells with zero width are
/// flagged by name and not emitted (log2 is undefined there); an empty cell
/// raises DomainError naming the cell.
std::vector<SummaryRecord> summarize(const std::vector<CellResult>& cells, double level,
                                     std::vector<std::string>* flagged = nullptr);
std::vector<SummaryRecord> summarize(const std::vector<RunRecord>& records, double level,
                                     std::vector<std::string>* flagged = nullptr);

/// Runs the experiment and writes records.csv, summary.csv and
/// metadata.json into config.out_dir.
void run_and_persist(const ExperimentConfig& config, int workers = 0);

/// One SVG per distribution (curves indexed by n, x = effective rank,
/// y = log2 of the CI width; gaps stay gaps) plus the plotted data as a
/// CSV sidecar next to it. `grid_count` <= 0 means "infer gaps from the
/// data spacing".
std::vector<std::string> emit_plot(const std::vector<SummaryRecord>& summaries,
                                   const std::string& out_dir, int grid_count = 0);

std::vector<SummaryRecord> read_summary_csv(const std::string& path);

/// Shortest round-trip decimal formatting; the CSV writers use this so that
/// reruns are byte-identical.
std::string format_double(double value);

std::string records_csv_path(const std::string& out_dir);
std::string summary_csv_path(const std::string& out_dir);
std::string metadata_json_path(const std::string& out_dir);

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace covlab
