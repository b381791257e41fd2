#include "rlfrac/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rlfrac/errors.hpp"

namespace rlfrac {

TimeGrid::TimeGrid(std::vector<double> points, Grading g, double ratio)
    : points_(std::move(points)), grading_(g), ratio_(ratio) {
  if (points_.size() < static_cast<std::size_t>(kMinCells) + 1)
    throw InvalidArgument("TimeGrid: need at least " + std::to_string(kMinCells) + " cells");
  if (points_.front() != 0.0) throw InvalidArgument("TimeGrid: first point must be 0");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1]) || !std::isfinite(points_[i]))
      throw InvalidArgument("TimeGrid: points must be finite and strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(double T, int M) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("TimeGrid: T must be positive");
  if (M < kMinCells) throw InvalidArgument("TimeGrid: need M >= 8");
  std::vector<double> p(static_cast<std::size_t>(M) + 1);
  for (int i = 0; i <= M; ++i) p[static_cast<std::size_t>(i)] = T * i / M;
  p.back() = T;
  return TimeGrid(std::move(p), Grading::uniform, 0.0);
}

TimeGrid TimeGrid::geometric(double T, int M, double ratio) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("TimeGrid: T must be positive");
  if (M < kMinCells) throw InvalidArgument("TimeGrid: need M >= 8");
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("TimeGrid: grading ratio must lie in (0, 1)");
  const int graded = M / 4;
  const int rest = M - graded;
  const double knee = T / 10.0;
  // widths w_k = w_top * ratio^(graded-1-k), k = 0..graded-1, summing to knee
  const double w_top = knee * (1.0 - ratio) / (1.0 - std::pow(ratio, graded));
  std::vector<double> p(static_cast<std::size_t>(M) + 1, 0.0);
  double widths_sum = 0.0;
  for (int k = 0; k < graded; ++k) {
    widths_sum += w_top * std::pow(ratio, graded - 1 - k);
    p[static_cast<std::size_t>(k) + 1] = widths_sum;
  }
  p[static_cast<std::size_t>(graded)] = knee;
  for (int k = 1; k <= rest; ++k) p[static_cast<std::size_t>(graded + k)] = knee + (T - knee) * k / rest;
  p.back() = T;
  return TimeGrid(std::move(p), Grading::geometric, ratio);
}

TimeGrid TimeGrid::from_points(std::vector<double> points) {
  return TimeGrid(std::move(points), Grading::custom, 0.0);
}

TimeGrid TimeGrid::parse(const std::string& spec, double T, int M) {
  if (spec == "uniform") return uniform(T, M);
  if (spec == "geometric") return geometric(T, M);
  const std::string prefix = "geometric:";
  if (spec.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    double r = 0.0;
    try {
      r = std::stod(spec.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != spec.size() - prefix.size())
      throw InvalidArgument("grading: cannot parse ratio in '" + spec + "'");
    return geometric(T, M, r);
  }
  throw InvalidArgument("grading: expected 'uniform' or 'geometric:R', got '" + spec + "'");
}

TimeGrid TimeGrid::reversed() const {
  const std::size_t n = points_.size();
  std::vector<double> s(n);
  const double T = points_.back();
  for (std::size_t k = 0; k < n; ++k) s[k] = T - points_[n - 1 - k];
  s.front() = 0.0;
  s.back() = T;
  return TimeGrid(std::move(s), grading_ == Grading::uniform ? Grading::uniform : Grading::custom, ratio_);
}

SampledFunction::SampledFunction(TimeGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw InvalidArgument("SampledFunction: values/grid length mismatch");
}

SampledFunction SampledFunction::sample(const TimeGrid& g, const std::function<double(double)>& f,
                                        bool skip_origin) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = (skip_origin && i == 0) ? 0.0 : f(g[i]);
  return {g, std::move(v)};
}

SampledFunction SampledFunction::reversed() const {
  std::vector<double> v(values.rbegin(), values.rend());
  return {grid.reversed(), std::move(v)};
}

}  // namespace rlfrac
