#include "wigdet/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wigdet/errors.hpp"

namespace wigdet {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string trials_csv(const std::vector<TrialRecord>& trials, bool rank_mode) {
  std::string out = "trial_id,lambda,true_k,statistic,threshold,decision,aborted\n";
  for (const auto& t : trials) {
    out += std::to_string(t.trial_id);
    out += ',';
    out += fmt_double(t.lambda);
    out += ',';
    out += std::to_string(t.true_k);
    out += ',';
    out += fmt_double(t.statistic);  // "inf" marks an overflow trial
    out += ',';
    out += fmt_double(t.threshold);
    out += ',';
    if (rank_mode)
      out += std::to_string(t.decision);
    else
      out += t.decision == 1 ? "H1" : (t.decision == 2 ? "H2" : "NA");
    out += ',';
    out += t.aborted ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows, bool rank_mode) {
  std::string out;
  if (rank_mode) {
    out = "lambda,k_max,empirical_error,theoretical_error,trials,aborted_count\n";
  } else {
    out = "lambda,k1,k2,empirical_error,theoretical_error,trials,aborted_count,"
          "empirical_error_half,theoretical_error_half\n";
  }
  for (const auto& r : rows) {
    out += fmt_double(r.lambda);
    out += ',';
    if (!rank_mode) {
      out += std::to_string(r.k1);
      out += ',';
    }
    out += std::to_string(r.k2_or_kmax);
    out += ',';
    out += fmt_double(r.empirical_error);
    out += ',';
    out += fmt_double(r.theoretical_error);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += std::to_string(r.aborted);
    if (!rank_mode) {
      out += ',';
      out += fmt_double(0.5 * r.empirical_error);
      out += ',';
      out += fmt_double(0.5 * r.theoretical_error);
    }
    out += '\n';
  }
  return out;
}

std::string clt_csv(const std::vector<CltRow>& rows) {
  std::string out =
      "lambda,k,sample_mean,mean_limit,sample_variance,variance_limit,"
      "skewness,excess_kurtosis,trials,aborted_count,mean_ok,variance_ok\n";
  for (const auto& r : rows) {
    out += fmt_double(r.lambda);
    out += ',';
    out += std::to_string(r.k);
    out += ',';
    out += fmt_double(r.sample_mean);
    out += ',';
    out += fmt_double(r.mean_limit);
    out += ',';
    out += fmt_double(r.sample_variance);
    out += ',';
    out += fmt_double(r.variance_limit);
    out += ',';
    out += fmt_double(r.skewness);
    out += ',';
    out += fmt_double(r.excess_kurtosis);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += std::to_string(r.aborted);
    out += ',';
    out += r.mean_ok ? '1' : '0';
    out += ',';
    out += r.variance_ok ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw error("cannot create directory " + p.parent_path().string());
  }
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw error("write to " + path + " failed");
}

std::string render_svg_plot(const std::string& title,
                            const std::string& x_label,
                            const std::string& y_label,
                            const std::vector<PlotSeries>& series) {
  const double width = 800, height = 560;
  const double ml = 70, mr = 24, mt = 44, mb = 52;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double lo = s.y[i] - (i < s.se.size() ? 2.0 * s.se[i] : 0.0);
      const double hi = s.y[i] + (i < s.se.size() ? 2.0 * s.se[i] : 0.0);
      if (first) {
        x_min = x_max = s.x[i];
        y_min = lo;
        y_max = hi;
        first = false;
      } else {
        x_min = std::min(x_min, s.x[i]);
        x_max = std::max(x_max, s.x[i]);
        y_min = std::min(y_min, lo);
        y_max = std::max(y_max, hi);
      }
    }
  y_min = std::min(y_min, 0.0);
  y_max = y_max * 1.05 + 1e-12;
  if (x_max <= x_min) x_max = x_min + 1.0;

  auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"560\" "
         "viewBox=\"0 0 800 560\">\n";
  svg += "<rect width=\"800\" height=\"560\" fill=\"white\"/>\n";
  svg += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + title + "</text>\n";

  // axes and ticks
  svg += "<g stroke=\"#333\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<line x1=\"" + fmt_coord(ml) + "\" y1=\"" + fmt_coord(mt + ph) +
         "\" x2=\"" + fmt_coord(ml + pw) + "\" y2=\"" + fmt_coord(mt + ph) + "\"/>\n";
  svg += "<line x1=\"" + fmt_coord(ml) + "\" y1=\"" + fmt_coord(mt) + "\" x2=\"" +
         fmt_coord(ml) + "\" y2=\"" + fmt_coord(mt + ph) + "\"/>\n";
  const int ticks = 6;
  for (int i = 0; i <= ticks; ++i) {
    const double xv = x_min + (x_max - x_min) * i / ticks;
    const double yv = y_min + (y_max - y_min) * i / ticks;
    char lbl[32];
    svg += "<line x1=\"" + fmt_coord(sx(xv)) + "\" y1=\"" + fmt_coord(mt + ph) +
           "\" x2=\"" + fmt_coord(sx(xv)) + "\" y2=\"" + fmt_coord(mt + ph + 5) + "\"/>\n";
    std::snprintf(lbl, sizeof lbl, "%.3g", xv);
    svg += "<text x=\"" + fmt_coord(sx(xv)) + "\" y=\"" + fmt_coord(mt + ph + 18) +
           "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333\">" + lbl + "</text>\n";
    svg += "<line x1=\"" + fmt_coord(ml - 5) + "\" y1=\"" + fmt_coord(sy(yv)) +
           "\" x2=\"" + fmt_coord(ml) + "\" y2=\"" + fmt_coord(sy(yv)) + "\"/>\n";
    std::snprintf(lbl, sizeof lbl, "%.3g", yv);
    svg += "<text x=\"" + fmt_coord(ml - 8) + "\" y=\"" + fmt_coord(sy(yv) + 4) +
           "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333\">" + lbl + "</text>\n";
  }
  svg += "</g>\n";
  svg += "<text x=\"" + fmt_coord(ml + pw / 2) + "\" y=\"" + fmt_coord(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt_coord(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " + fmt_coord(mt + ph / 2) + ")\">" + y_label +
         "</text>\n";

  size_t color_idx = 0;
  double legend_y = mt + 8;
  for (const auto& s : series) {
    const char* color = kPalette[color_idx % (sizeof kPalette / sizeof *kPalette)];
    ++color_idx;
    if (s.se.empty()) {
      // theory: polyline
      std::string pts;
      for (size_t i = 0; i < s.x.size(); ++i) {
        pts += fmt_coord(sx(s.x[i]));
        pts += ',';
        pts += fmt_coord(sy(s.y[i]));
        pts += ' ';
      }
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.6\"" +
             (s.dashed ? " stroke-dasharray=\"7,4\"" : "") + " points=\"" + pts +
             "\"/>\n";
    } else {
      // empirical: markers with +-2 SE bars
      for (size_t i = 0; i < s.x.size(); ++i) {
        const double cx = sx(s.x[i]);
        svg += "<line x1=\"" + fmt_coord(cx) + "\" y1=\"" +
               fmt_coord(sy(s.y[i] - 2.0 * s.se[i])) + "\" x2=\"" + fmt_coord(cx) +
               "\" y2=\"" + fmt_coord(sy(s.y[i] + 2.0 * s.se[i])) + "\" stroke=\"" +
               color + "\" stroke-width=\"1\"/>\n";
        svg += "<circle cx=\"" + fmt_coord(cx) + "\" cy=\"" + fmt_coord(sy(s.y[i])) +
               "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
    }
    svg += "<rect x=\"" + fmt_coord(ml + pw - 190) + "\" y=\"" +
           fmt_coord(legend_y - 8) + "\" width=\"12\" height=\"4\" fill=\"" + color +
           "\"/>\n";
    svg += "<text x=\"" + fmt_coord(ml + pw - 172) + "\" y=\"" + fmt_coord(legend_y) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label + "</text>\n";
    legend_y += 16;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace wigdet
