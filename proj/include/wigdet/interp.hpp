#pragma once

#include <vector>

namespace wigdet {

// Monotone cubic interpolation (Fritsch-Carlson). Used for tabulated
// densities and numerically inverted CDFs; preserves monotone data,
// never overshoots.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::vector<double> x_, y_, m_;  // knots, values, endpoint slopes
};

}  // namespace wigdet
