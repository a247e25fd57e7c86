#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cgvf {

// Dense real vector with a runtime dimension. Dimensions in this project
// are small (at most n + m, typically <= 10).
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  static Vector unit(std::size_t dim, std::size_t index);

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  std::span<const double> values() const { return data_; }
  const std::vector<double>& raw() const { return data_; }

  bool all_finite() const;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double scale);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator-(Vector v);
Vector operator*(double scale, Vector v);
Vector operator*(Vector v, double scale);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& v);
double max_abs(const Vector& v);
double distance(const Vector& a, const Vector& b);

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t dim);
  // Stacks the vectors as rows; all must share a dimension.
  static Matrix from_rows(std::span<const Vector> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector row(std::size_t r) const;
  Vector col(std::size_t c) const;
  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& v);

// Cofactor formulas up to 3x3, partial-pivot LU elimination above.
// Throws DimensionError for non-square or empty input.
double determinant(const Matrix& m);

// Removes column `j` (0-based). Throws IndexError when j >= cols.
Matrix delete_column(const Matrix& m, std::size_t j);

/// Generalized cross product of d-1 vectors in R^d:
///
///   x(g_1, ..., g_{d-1}) = sum_j (-1)^j det(G_j) e_j      (0-based j)
///
/// where G_j is the stacked (d-1) x d matrix with column j removed. The
/// result is orthogonal to every input and vanishes iff the inputs are
/// linearly dependent. Throws DimensionError unless exactly d-1 vectors of
/// dimension d >= 2 are supplied.
Vector generalized_cross(std::span<const Vector> vectors);

}  // namespace cgvf
