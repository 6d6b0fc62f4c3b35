#ifndef QMA_GRID_HPP
#define QMA_GRID_HPP

#include <cstddef>
#include <vector>

namespace qma {

/// Uniform periodic grid on the unit torus [-1/2, 1/2]^d, d in {4,...,7}.
/// All point counts are even; the period is 1 in every axis.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::vector<int> shape);

  int dim() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t size() const { return size_; }

  /// Coordinate of index i along axis k, in [-1/2, 1/2).
  double coordinate(int axis, int index) const;

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::vector<int> shape_;
  std::size_t size_ = 0;
};

/// Immutable real scalar field sampled on a periodic grid, row-major.
class ScalarField {
 public:
  ScalarField(PeriodicGrid grid, std::vector<double> values);
  /// Zero field.
  explicit ScalarField(PeriodicGrid grid);

  const PeriodicGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double max_abs() const;
  double min_value() const;
  double max_value() const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

/// Throws NonFiniteInput if the field contains NaN or Inf.
void require_finite(const ScalarField& f, const char* what);

/// Throws DimensionMismatch unless both fields share one grid.
void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what);

// Pointwise algebra (pure, allocate a fresh field).
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField operator+(const ScalarField& a, double s);
ScalarField exp(const ScalarField& a);

/// Arithmetic average over grid points == trapezoidal quadrature on the torus.
double mean(const ScalarField& f);

/// Integral over the unit-volume torus; equals mean(f).
double integrate(const ScalarField& f);

/// f minus its mean; idempotent.
ScalarField project_mean_zero(const ScalarField& f);

/// L2 norm sqrt(mean(f^2)) and dot product mean(f*g).
double norm_l2(const ScalarField& f);
double dot(const ScalarField& a, const ScalarField& b);

} // namespace qma

#endif
