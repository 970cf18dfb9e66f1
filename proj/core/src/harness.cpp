#include "covlab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace covlab {
namespace {

constexpr std::uint32_t kFactorStreamWord = 0xFFFFFFFFu;

std::uint32_t cell_key(DistKind dist, int t_index) {
  return (static_cast<std::uint32_t>(dist) << 24) |
         (static_cast<std::uint32_t>(t_index) & 0x00FFFFFFu);
}

std::uint64_t fnv1a_bytes(const unsigned char* data, std::size_t size) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= 0x100000001B3ull;
  }
  return hash;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream is(s);
  while (std::getline(is, current, sep)) parts.push_back(current);
  return parts;
}

long parse_long(const std::string& s, const char* what) {
  long value = 0;
  const std::string t = trim(s);
  const auto result = std::from_chars(t.data(), t.data() + t.size(), value);
  if (result.ec != std::errc{} || result.ptr != t.data() + t.size()) {
    throw ConfigError(std::string("expected an integer for ") + what + ": '" + s + "'");
  }
  return value;
}

double parse_double(const std::string& s, const char* what) {
  double value = 0.0;
  const std::string t = trim(s);
  const auto result = std::from_chars(t.data(), t.data() + t.size(), value);
  if (result.ec != std::errc{} || result.ptr != t.data() + t.size()) {
    throw ConfigError(std::string("expected a number for ") + what + ": '" + s + "'");
  }
  return value;
}

std::string cell_name(DistKind dist, long n, double t) {
  std::ostringstream os;
  os << "(dist=" << dist_name(dist) << ", n=" << n << ", t=" << t << ")";
  return os.str();
}

}  // namespace

std::string format_double(double value) {
  char buffer[48];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general);
  return std::string(buffer, result.ptr);
}

ExperimentConfig ExperimentConfig::full_profile() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::scaled_profile() {
  ExperimentConfig config;
  config.reps = 1000;
  config.n_list = {10, 100, 1000};
  return config;
}

void ExperimentConfig::apply_line(const std::string& raw) {
  std::string line = raw;
  if (const auto hash = line.find('#'); hash != std::string::npos) {
    line = line.substr(0, hash);
  }
  line = trim(line);
  if (line.empty()) return;
  const auto eq = line.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("config line is not 'key = value': '" + raw + "'");
  }
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));

  if (key == "d") {
    d = static_cast<int>(parse_long(value, "d"));
  } else if (key == "n_list") {
    n_list.clear();
    for (const std::string& part : split(value, ',')) {
      n_list.push_back(parse_long(part, "n_list"));
    }
  } else if (key == "grid_count") {
    grid_count = static_cast<int>(parse_long(value, "grid_count"));
  } else if (key == "reps") {
    reps = parse_long(value, "reps");
  } else if (key == "dists") {
    dists.clear();
    for (const std::string& part : split(value, ',')) {
      const auto kind = dist_from_name(trim(part));
      if (!kind) throw ConfigError("unknown distribution '" + trim(part) + "'");
      dists.push_back(*kind);
    }
  } else if (key == "master_seed") {
    master_seed = static_cast<std::uint64_t>(parse_long(value, "master_seed"));
  } else if (key == "out_dir") {
    if (value.empty()) throw ConfigError("out_dir must not be empty");
    out_dir = value;
  } else if (key == "ci_level") {
    ci_level = parse_double(value, "ci_level");
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::apply_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) apply_line(line);
}

void ExperimentConfig::validate() const {
  if (d < 2) throw ConfigError("d must be >= 2");
  if (grid_count < 2) throw ConfigError("grid_count must be >= 2");
  if (reps < 2) throw ConfigError("reps must be >= 2");
  if (n_list.empty()) throw ConfigError("n_list must not be empty");
  for (long n : n_list) {
    if (n < 1 || n > 2000000000L) throw ConfigError("every n must lie in [1, 2e9]");
  }
  if (dists.empty()) throw ConfigError("dists must not be empty");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw ConfigError("ci_level must lie in (0, 1)");
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

RandomStream replicate_stream(std::uint64_t seed, DistKind dist, int t_index, long n,
                              long j) {
  return RandomStream(seed, cell_key(dist, t_index), static_cast<std::uint32_t>(n),
                      static_cast<std::uint32_t>(j));
}

RandomStream factor_stream(std::uint64_t seed, DistKind dist, int t_index) {
  return RandomStream(seed, cell_key(dist, t_index), kFactorStreamWord,
                      kFactorStreamWord);
}

namespace {

/// Scratch owned by one worker thread.
struct ReplicateScratch {
  Matrix observations;  // d x n, one observation per column
  Matrix gram;          // d x d
};

double replicate_ratio_impl(DistKind dist, const double* sqrt_lambda,
                            const double* lambda, int d, long n,
                            double expected_frob_sq, RandomStream& rng,
                            ReplicateScratch& scratch) {
  Matrix& obs = scratch.observations;
  Matrix& gram = scratch.gram;
  for (long i = 0; i < n; ++i) {
    double* column = obs.col(i).data();
    whitened_xi(dist, d, rng, column);
    for (int r = 0; r < d; ++r) column[r] *= sqrt_lambda[r];
  }
  gram.setZero();
  gram.selfadjointView<Eigen::Lower>().rankUpdate(obs);
  const double inv_n = 1.0 / static_cast<double>(n);
  double frob_sq = 0.0;
  for (int i = 0; i < d; ++i) {
    const double diag = gram(i, i) * inv_n - lambda[i];
    frob_sq += diag * diag;
    for (int j = i + 1; j < d; ++j) {
      const double off = gram(j, i) * inv_n;
      frob_sq += 2.0 * off * off;
    }
  }
  return frob_sq / expected_frob_sq;
}

}  // namespace

double replicate_ratio(DistKind dist, const Spectrum& lambda, long n,
                       double expected_frob_sq, RandomStream& rng) {
  const int d = lambda.dim();
  std::vector<double> sqrt_lambda(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) sqrt_lambda[static_cast<std::size_t>(i)] = std::sqrt(lambda[i]);
  ReplicateScratch scratch{Matrix(d, n), Matrix(d, d)};
  return replicate_ratio_impl(dist, sqrt_lambda.data(), lambda.values().data(), d, n,
                              expected_frob_sq, rng, scratch);
}

std::vector<FactorChecksum> run_experiment(const ExperimentConfig& config,
                                           const CellSink& sink, int workers) {
  config.validate();
  if (workers <= 0) {
    workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }

  std::vector<DistKind> dists(config.dists);
  std::sort(dists.begin(), dists.end());
  dists.erase(std::unique(dists.begin(), dists.end()), dists.end());
  std::vector<long> n_list(config.n_list);
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());

  const std::vector<double> grid = parameter_grid(config.grid_count);

  struct GridPoint {
    Spectrum lambda;
    std::vector<double> sqrt_lambda;
    double r_sigma;
  };
  std::vector<GridPoint> points;
  points.reserve(grid.size());
  for (double t : grid) {
    GridPoint point{lambda_profile(t, config.d), {}, 0.0};
    point.r_sigma = effective_rank(point.lambda);
    point.sqrt_lambda.resize(static_cast<std::size_t>(config.d));
    for (int i = 0; i < config.d; ++i) {
      point.sqrt_lambda[static_cast<std::size_t>(i)] = std::sqrt(point.lambda[i]);
    }
    points.push_back(std::move(point));
  }

  // One Haar factor per (dist, t), shared across n and replicates; the
  // statistic itself is conjugation invariant, so the factor only surfaces
  // through its metadata checksum.
  std::vector<FactorChecksum> checksums;
  for (DistKind dist : dists) {
    for (int t_index = 0; t_index < config.grid_count; ++t_index) {
      RandomStream stream = factor_stream(config.master_seed, dist, t_index);
      const OrthMatrix factor = haar_orthogonal(config.d, stream);
      const auto* bytes =
          reinterpret_cast<const unsigned char*>(factor.entries().data());
      checksums.push_back(
          {dist, t_index, grid[static_cast<std::size_t>(t_index)],
           fnv1a_bytes(bytes, sizeof(double) * static_cast<std::size_t>(
                                                   factor.entries().size()))});
    }
  }

  for (DistKind dist : dists) {
    for (long n : n_list) {
      for (int t_index = 0; t_index < config.grid_count; ++t_index) {
        const GridPoint& point = points[static_cast<std::size_t>(t_index)];
        const double expected =
            expected_frob_error(point.lambda, dist, n).expected_frob_sq;

        CellResult cell{dist, n, t_index, grid[static_cast<std::size_t>(t_index)],
                        point.r_sigma,
                        std::vector<double>(static_cast<std::size_t>(config.reps))};

        const int active = static_cast<int>(
            std::min<long>(workers, std::max<long>(1, config.reps)));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(active));
        std::vector<std::string> failures(static_cast<std::size_t>(active));
        for (int w = 0; w < active; ++w) {
          pool.emplace_back([&, w]() {
            try {
              ReplicateScratch scratch{Matrix(config.d, n), Matrix(config.d, config.d)};
              const long begin = config.reps * w / active;
              const long end = config.reps * (w + 1) / active;
              for (long j = begin; j < end; ++j) {
                RandomStream rng =
                    replicate_stream(config.master_seed, dist, t_index, n, j);
                const double ratio = replicate_ratio_impl(
                    dist, point.sqrt_lambda.data(), point.lambda.values().data(),
                    config.d, n, expected, rng, scratch);
                if (!std::isfinite(ratio)) {
                  std::ostringstream os;
                  os << "non-finite ratio statistic at " << cell_name(dist, n, cell.t)
                     << ", j=" << j;
                  failures[static_cast<std::size_t>(w)] = os.str();
                  return;
                }
                cell.a[static_cast<std::size_t>(j)] = ratio;
              }
            } catch (const std::exception& e) {
              failures[static_cast<std::size_t>(w)] =
                  std::string("worker failure at ") + cell_name(dist, n, cell.t) + ": " +
                  e.what();
            }
          });
        }
        for (std::thread& thread : pool) thread.join();
        for (const std::string& failure : failures) {
          if (!failure.empty()) throw NumericError(failure);
        }
        sink(cell);
      }
    }
  }
  return checksums;
}

std::vector<RunRecord> run_experiment_collect(const ExperimentConfig& config,
                                              int workers) {
  std::vector<RunRecord> records;
  run_experiment(
      config,
      [&](const CellResult& cell) {
        for (long j = 0; j < static_cast<long>(cell.a.size()); ++j) {
          records.push_back({cell.dist, cell.n, cell.t, cell.r_sigma, j,
                             cell.a[static_cast<std::size_t>(j)]});
        }
      },
      workers);
  return records;
}

std::vector<SummaryRecord> summarize(const std::vector<CellResult>& cells, double level,
                                     std::vector<std::string>* flagged) {
  std::vector<CellResult> sorted(cells);
  std::sort(sorted.begin(), sorted.end(), [](const CellResult& a, const CellResult& b) {
    return std::tie(a.dist, a.n, a.t) < std::tie(b.dist, b.n, b.t);
  });
  std::vector<SummaryRecord> summaries;
  for (const CellResult& cell : sorted) {
    if (cell.a.empty()) {
      throw DomainError("summarize: empty cell " + cell_name(cell.dist, cell.n, cell.t));
    }
    const double width = ci_width(cell.a, level);
    if (width <= 0.0) {
      if (flagged) {
        flagged->push_back("zero CI width at " + cell_name(cell.dist, cell.n, cell.t));
      }
      continue;
    }
    summaries.push_back(
        {cell.dist, cell.n, cell.t, cell.r_sigma, width, std::log2(width)});
  }
  return summaries;
}

std::vector<SummaryRecord> summarize(const std::vector<RunRecord>& records, double level,
                                     std::vector<std::string>* flagged) {
  std::map<std::tuple<DistKind, long, double>, CellResult> cells;
  for (const RunRecord& record : records) {
    auto [it, inserted] = cells.try_emplace(
        std::make_tuple(record.dist, record.n, record.t),
        CellResult{record.dist, record.n, 0, record.t, record.r_sigma, {}});
    it->second.a.push_back(record.a);
  }
  std::vector<CellResult> list;
  list.reserve(cells.size());
  for (auto& [key, cell] : cells) list.push_back(std::move(cell));
  return summarize(list, level, flagged);
}

std::string records_csv_path(const std::string& out_dir) {
  return (std::filesystem::path(out_dir) / "records.csv").string();
}
std::string summary_csv_path(const std::string& out_dir) {
  return (std::filesystem::path(out_dir) / "summary.csv").string();
}
std::string metadata_json_path(const std::string& out_dir) {
  return (std::filesystem::path(out_dir) / "metadata.json").string();
}

void run_and_persist(const ExperimentConfig& config, int workers) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + config.out_dir + "'");

  std::ofstream records(records_csv_path(config.out_dir), std::ios::trunc);
  if (!records) throw IoError("cannot open records.csv for writing");
  records << "dist,n,t,r_sigma,j,a\n";

  std::vector<CellResult> cells;
  const std::vector<FactorChecksum> checksums = run_experiment(
      config,
      [&](const CellResult& cell) {
        const std::string prefix = std::string(dist_name(cell.dist)) + "," +
                                   std::to_string(cell.n) + "," + format_double(cell.t) +
                                   "," + format_double(cell.r_sigma) + ",";
        for (std::size_t j = 0; j < cell.a.size(); ++j) {
          records << prefix << j << ',' << format_double(cell.a[j]) << '\n';
        }
        cells.push_back(cell);
      },
      workers);
  records.close();
  if (!records) throw IoError("failed writing records.csv");

  std::vector<std::string> flagged;
  const std::vector<SummaryRecord> summaries = summarize(cells, config.ci_level, &flagged);

  std::ofstream summary(summary_csv_path(config.out_dir), std::ios::trunc);
  if (!summary) throw IoError("cannot open summary.csv for writing");
  summary << "dist,n,t,r_sigma,w,log2_w\n";
  for (const SummaryRecord& row : summaries) {
    summary << dist_name(row.dist) << ',' << row.n << ',' << format_double(row.t) << ','
            << format_double(row.r_sigma) << ',' << format_double(row.w) << ','
            << format_double(row.log2_w) << '\n';
  }
  summary.close();
  if (!summary) throw IoError("failed writing summary.csv");

  nlohmann::ordered_json meta;
  meta["version"] = std::string(kVersion);
  meta["seed"] = config.master_seed;
  nlohmann::ordered_json cfg;
  cfg["d"] = config.d;
  cfg["n_list"] = config.n_list;
  cfg["grid_count"] = config.grid_count;
  cfg["reps"] = config.reps;
  std::vector<std::string> dist_names;
  for (DistKind dist : config.dists) dist_names.emplace_back(dist_name(dist));
  cfg["dists"] = dist_names;
  cfg["master_seed"] = config.master_seed;
  cfg["out_dir"] = config.out_dir;
  cfg["ci_level"] = config.ci_level;
  meta["config"] = cfg;
  meta["u_policy"] = "one haar factor per (dist, t), shared across n and replicates";
  nlohmann::ordered_json checksum_rows = nlohmann::ordered_json::array();
  for (const FactorChecksum& row : checksums) {
    nlohmann::ordered_json item;
    item["dist"] = std::string(dist_name(row.dist));
    item["t_index"] = row.t_index;
    item["t"] = row.t;
    std::ostringstream hex;
    hex << "0x" << std::hex << row.checksum;
    item["checksum"] = hex.str();
    checksum_rows.push_back(item);
  }
  meta["u_checksums"] = checksum_rows;
  if (!flagged.empty()) meta["flagged_cells"] = flagged;

  std::ofstream metadata(metadata_json_path(config.out_dir), std::ios::trunc);
  if (!metadata) throw IoError("cannot open metadata.json for writing");
  metadata << meta.dump(2) << '\n';
  metadata.close();
  if (!metadata) throw IoError("failed writing metadata.json");
}

std::vector<SummaryRecord> read_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "dist,n,t,r_sigma,w,log2_w") {
    throw IoError("'" + path + "' is not a summary.csv (bad header)");
  }
  std::vector<SummaryRecord> rows;
  long line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> parts = split(line, ',');
    if (parts.size() != 6) {
      throw IoError("malformed summary row at line " + std::to_string(line_number));
    }
    const auto kind = dist_from_name(trim(parts[0]));
    if (!kind) throw IoError("unknown distribution in summary at line " +
                             std::to_string(line_number));
    try {
      SummaryRecord row;
      row.dist = *kind;
      row.n = parse_long(parts[1], "n");
      row.t = parse_double(parts[2], "t");
      row.r_sigma = parse_double(parts[3], "r_sigma");
      row.w = parse_double(parts[4], "w");
      row.log2_w = parse_double(parts[5], "log2_w");
      rows.push_back(row);
    } catch (const ConfigError& e) {
      throw IoError("malformed summary row at line " + std::to_string(line_number) +
                    ": " + e.what());
    }
  }
  return rows;
}

}  // namespace covlab
