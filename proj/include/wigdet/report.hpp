#pragma once

#include <string>
#include <vector>

#include "wigdet/experiment.hpp"

namespace wigdet {

// CSV schemas are fixed (see README); doubles are printed with %.17g so
// identical runs emit identical bytes.
std::string trials_csv(const std::vector<TrialRecord>& trials, bool rank_mode);
std::string summary_csv(const std::vector<SummaryRow>& rows, bool rank_mode);
std::string clt_csv(const std::vector<CltRow>& rows);

void write_file(const std::string& path, const std::string& content);

// One curve: theory as a polyline, empirical points with +-2 SE bars.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> se;  // empty for theory curves
  bool dashed = false;
};

std::string render_svg_plot(const std::string& title,
                            const std::string& x_label,
                            const std::string& y_label,
                            const std::vector<PlotSeries>& series);

}  // namespace wigdet
