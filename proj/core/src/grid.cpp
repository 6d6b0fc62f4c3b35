#include "qma/grid.hpp"

#include <algorithm>
#include <cmath>

#include "qma/errors.hpp"

namespace qma {

PeriodicGrid::PeriodicGrid(std::vector<int> shape) : shape_(std::move(shape)) {
  if (shape_.size() < 4 || shape_.size() > 7)
    throw ValidationError("PeriodicGrid: dimension must be in {4,5,6,7}");
  size_ = 1;
  for (int n : shape_) {
    if (n < 8 || n % 2 != 0)
      throw ValidationError("PeriodicGrid: point counts must be even and >= 8");
    size_ *= static_cast<std::size_t>(n);
  }
}

double PeriodicGrid::coordinate(int axis, int index) const {
  return -0.5 + static_cast<double>(index) / shape_[axis];
}

ScalarField::ScalarField(PeriodicGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw DimensionMismatch("ScalarField: value count does not match grid");
}

ScalarField::ScalarField(PeriodicGrid grid)
    : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

double ScalarField::max_abs() const {
  double m = 0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

void require_finite(const ScalarField& f, const char* what) {
  for (double v : f.values())
    if (!std::isfinite(v)) throw NonFiniteInput(std::string(what) + ": non-finite value");
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what) {
  if (!(a.grid() == b.grid()))
    throw DimensionMismatch(std::string(what) + ": grids differ");
}

namespace {

template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op, const char* what) {
  require_same_grid(a, b, what);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
  return {a.grid(), std::move(out)};
}

} // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; }, "operator+");
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; }, "operator-");
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x * y; }, "operator*");
}
ScalarField operator*(double s, const ScalarField& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a[i];
  return {a.grid(), std::move(out)};
}
ScalarField operator+(const ScalarField& a, double s) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + s;
  return {a.grid(), std::move(out)};
}
ScalarField exp(const ScalarField& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(a[i]);
  return {a.grid(), std::move(out)};
}

double mean(const ScalarField& f) {
  require_finite(f, "mean");
  // pairwise-ish accumulation in long double keeps 1e-14 level accuracy
  long double acc = 0;
  for (double v : f.values()) acc += v;
  return static_cast<double>(acc / f.size());
}

double integrate(const ScalarField& f) { return mean(f); }

ScalarField project_mean_zero(const ScalarField& f) {
  const double m = mean(f);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] - m;
  return {f.grid(), std::move(out)};
}

double dot(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b, "dot");
  long double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(acc / a.size());
}

double norm_l2(const ScalarField& f) { return std::sqrt(dot(f, f)); }

} // namespace qma
