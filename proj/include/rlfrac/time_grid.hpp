#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace rlfrac {

enum class Grading { uniform, geometric, custom };

// Strictly increasing sample times 0 = t_0 < t_1 < ... < t_M = T, M >= 8.
class TimeGrid {
 public:
  static constexpr int kMinCells = 8;
  static constexpr double kDefaultRatio = 0.85;

  static TimeGrid uniform(double T, int M);
  // M/4 cells fill [0, T/10] with widths shrinking by `ratio` toward t = 0;
  // the remaining cells are uniform on [T/10, T].
  static TimeGrid geometric(double T, int M, double ratio = kDefaultRatio);
  static TimeGrid from_points(std::vector<double> points);
  // "uniform" or "geometric" / "geometric:R".
  static TimeGrid parse(const std::string& spec, double T, int M);

  const std::vector<double>& points() const { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  int cells() const { return static_cast<int>(points_.size()) - 1; }
  double T() const { return points_.back(); }
  Grading grading() const { return grading_; }
  double ratio() const { return ratio_; }

  // s_k = T - t_{M-k}; used for right-sided operators.
  TimeGrid reversed() const;

 private:
  TimeGrid(std::vector<double> points, Grading g, double ratio);
  std::vector<double> points_;
  Grading grading_ = Grading::custom;
  double ratio_ = 0.0;
};

struct SampledFunction {
  TimeGrid grid;
  std::vector<double> values;

  SampledFunction(TimeGrid g, std::vector<double> v);

  // values[i] = f(t_i); with skip_origin the t_0 = 0 sample is set to 0
  // (for functions singular at the origin).
  static SampledFunction sample(const TimeGrid& g, const std::function<double(double)>& f,
                                bool skip_origin = false);

  // Same samples on the reversed grid, in reversed order.
  SampledFunction reversed() const;
};

}  // namespace rlfrac
