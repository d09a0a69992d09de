#ifndef QFA_MATRIX_HPP
#define QFA_MATRIX_HPP

#include <optional>
#include <vector>

#include "qfa/scalar.hpp"

namespace qfa {

/// Dense matrix; all entries share one backend.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0), tag_(Backend::Exact) {}
  Matrix(int rows, int cols, Backend b)
      : rows_(rows), cols_(cols), tag_(b), e_(static_cast<size_t>(rows) * cols, Scalar::zero(b)) {}

  static Matrix identity(int n, Backend b);
  static Matrix zero(int rows, int cols, Backend b) { return Matrix(rows, cols, b); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Backend backend() const { return tag_; }
  bool square() const { return rows_ == cols_; }

  Scalar& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
  const Scalar& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix scaled(const Scalar& s) const;
  Matrix transpose() const;
  Matrix hermitian() const;
  Matrix to_float() const;
  bool operator==(const Matrix& o) const;

  std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

  double max_abs() const;

 private:
  int rows_, cols_;
  Backend tag_;
  std::vector<Scalar> e_;
};

/// Basis of a subspace: orthonormal (Float) or row-reduced independent (Exact).
struct SubspaceBasis {
  int ambient = 0;
  Backend backend = Backend::Exact;
  std::vector<std::vector<Scalar>> vectors;
  int dim() const { return static_cast<int>(vectors.size()); }
};

Matrix kron(const Matrix& a, const Matrix& b);
Scalar determinant(const Matrix& a);
Scalar minor_determinant(const Matrix& a, int i, int j);
Matrix invert(const Matrix& a);
SubspaceBasis nullspace(const Matrix& a);
int rank_of(const Matrix& a);
double spectral_radius(const Matrix& a);

/// Solve a x = b; nullopt when singular (Exact) or pivot < 1e-12 (Float).
std::optional<std::vector<Scalar>> solve_linear(const Matrix& a, const std::vector<Scalar>& b);

/// All eigenvalues (Float backend only).
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

}  // namespace qfa

#endif
