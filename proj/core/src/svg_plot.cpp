#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "covlab/harness.hpp"

namespace covlab {
namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 180.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string short_num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4g", v);
  return buffer;
}

struct Series {
  long n;
  // consecutive runs of points; a new run starts after a grid gap
  std::vector<std::vector<std::pair<double, double>>> runs;
};

}  // namespace

std::vector<std::string> emit_plot(const std::vector<SummaryRecord>& summaries,
                                   const std::string& out_dir, int grid_count) {
  if (summaries.empty()) throw DomainError("emit_plot: nothing to plot");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create plot directory '" + out_dir + "'");

  std::map<DistKind, std::vector<SummaryRecord>> by_dist;
  for (const SummaryRecord& row : summaries) by_dist[row.dist].push_back(row);

  std::vector<std::string> written;
  for (auto& [dist, rows] : by_dist) {
    std::sort(rows.begin(), rows.end(), [](const SummaryRecord& a, const SummaryRecord& b) {
      return std::tie(a.n, a.t) < std::tie(b.n, b.t);
    });

    // grid spacing used to tell a genuine gap (flagged cell) from the next point
    double gap_step = 0.0;
    if (grid_count >= 2) {
      gap_step = 1.0 / static_cast<double>(grid_count - 1);
    } else {
      std::vector<double> diffs;
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const double diff = rows[i].t - rows[i - 1].t;
        if (diff > 0.0) diffs.push_back(diff);
      }
      std::sort(diffs.begin(), diffs.end());
      gap_step = diffs.empty() ? 1.0 : diffs[diffs.size() / 2];
    }

    std::vector<Series> series;
    for (const SummaryRecord& row : rows) {
      if (series.empty() || series.back().n != row.n) {
        series.push_back({row.n, {{}}});
      }
      Series& current = series.back();
      auto& runs = current.runs;
      if (!runs.back().empty()) {
        const double previous_t = rows[&row - rows.data() - 1].t;
        if (row.t - previous_t > 1.5 * gap_step) runs.push_back({});
      }
      runs.back().emplace_back(row.r_sigma, row.log2_w);
    }

    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const SummaryRecord& row : rows) {
      x_min = std::min(x_min, row.r_sigma);
      x_max = std::max(x_max, row.r_sigma);
      y_min = std::min(y_min, row.log2_w);
      y_max = std::max(y_max, row.log2_w);
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;
    const double x_pad = 0.03 * (x_max - x_min);
    const double y_pad = 0.06 * (y_max - y_min);
    x_min -= x_pad;
    x_max += x_pad;
    y_min -= y_pad;
    y_max += y_pad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto to_x = [&](double v) { return kLeft + (v - x_min) / (x_max - x_min) * plot_w; };
    const auto to_y = [&](double v) {
      return kTop + plot_h - (v - y_min) / (y_max - y_min) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << dist_name(dist)
        << ": log2 CI width of the error ratio vs effective rank</text>\n";

    // frame and ticks
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double fx = x_min + (x_max - x_min) * i / 5.0;
      const double px = to_x(fx);
      svg << "<line x1=\"" << px << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << px
          << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"#444\"/>\n";
      svg << "<text x=\"" << px << "\" y=\"" << kTop + plot_h + 20
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
          << short_num(fx) << "</text>\n";
      const double fy = y_min + (y_max - y_min) * i / 5.0;
      const double py = to_y(fy);
      svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py << "\" x2=\"" << kLeft
          << "\" y2=\"" << py << "\" stroke=\"#444\"/>\n";
      svg << "<text x=\"" << kLeft - 9 << "\" y=\"" << py + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
          << short_num(fy) << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << "effective rank of the population covariance</text>\n";
    svg << "<text x=\"20\" y=\"" << kTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << kTop + plot_h / 2 << ")\">log2(w)</text>\n";

    int color_index = 0;
    double legend_y = kTop + 10;
    for (const Series& s : series) {
      const char* color = kPalette[color_index % 8];
      ++color_index;
      for (const auto& run : s.runs) {
        if (run.empty()) continue;
        svg << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" d=\"";
        for (std::size_t i = 0; i < run.size(); ++i) {
          svg << (i == 0 ? 'M' : 'L') << to_x(run[i].first) << ' ' << to_y(run[i].second);
          if (i + 1 < run.size()) svg << ' ';
        }
        svg << "\"/>\n";
      }
      svg << "<line x1=\"" << kLeft + plot_w + 14 << "\" y1=\"" << legend_y << "\" x2=\""
          << kLeft + plot_w + 44 << "\" y2=\"" << legend_y << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
      svg << "<text x=\"" << kLeft + plot_w + 50 << "\" y=\"" << legend_y + 4
          << "\" font-family=\"sans-serif\" font-size=\"12\">n = " << s.n << "</text>\n";
      legend_y += 20;
    }
    svg << "</svg>\n";

    const std::string base =
        (std::filesystem::path(out_dir) / (std::string("plot_") + std::string(dist_name(dist))))
            .string();
    {
      std::ofstream out(base + ".svg", std::ios::trunc);
      if (!out) throw IoError("cannot write '" + base + ".svg'");
      out << svg.str();
      if (!out) throw IoError("failed writing '" + base + ".svg'");
      written.push_back(base + ".svg");
    }
    {
      std::ofstream out(base + ".csv", std::ios::trunc);
      if (!out) throw IoError("cannot write '" + base + ".csv'");
      out << "dist,n,t,r_sigma,w,log2_w\n";
      for (const SummaryRecord& row : rows) {
        out << dist_name(row.dist) << ',' << row.n << ',' << format_double(row.t) << ','
            << format_double(row.r_sigma) << ',' << format_double(row.w) << ','
            << format_double(row.log2_w) << '\n';
      }
      if (!out) throw IoError("failed writing '" + base + ".csv'");
      written.push_back(base + ".csv");
    }
  }
  return written;
}

}  // namespace covlab
