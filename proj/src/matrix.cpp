#include "qfa/matrix.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace qfa {

namespace {

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const Matrix& m) {
  EMat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m.at(i, j).cf();
  return r;
}

Matrix from_eigen(const EMat& e) {
  Matrix m(static_cast<int>(e.rows()), static_cast<int>(e.cols()), Backend::Float);
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m.at(i, j) = Scalar::flt(e(i, j));
  return m;
}

void require_same_backend(const Matrix& a, const Matrix& b) {
  if (a.backend() != b.backend()) throw BackendMismatch();
}

// Exact Gauss-Jordan; returns rank, writes RREF into m, tracks column pivots.
int rref_exact(std::vector<std::vector<CRat>>& m, std::vector<int>& pivot_cols) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (!m[i][c].is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[p], m[r]);
    CRat inv = CRat(Rat(1)) / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      CRat f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  return r;
}

std::vector<std::vector<CRat>> to_crat(const Matrix& a) {
  std::vector<std::vector<CRat>> m(a.rows(), std::vector<CRat>(a.cols()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m[i][j] = a.at(i, j).cr();
  return m;
}

}  // namespace

Matrix Matrix::identity(int n, Backend b) {
  Matrix m(n, n, b);
  for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(b);
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  require_same_backend(*this, o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix add shape");
  Matrix r(rows_, cols_, tag_);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] + o.e_[k];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require_same_backend(*this, o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sub shape");
  Matrix r(rows_, cols_, tag_);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] - o.e_[k];
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  require_same_backend(*this, o);
  if (cols_ != o.rows_) throw DimensionError("matrix mul shape");
  Matrix r(rows_, o.cols_, tag_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Scalar& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (o.at(k, j).is_zero()) continue;
        r.at(i, j) += aik * o.at(k, j);
      }
    }
  return r;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Matrix r(rows_, cols_, tag_);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] * s;
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_, tag_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

Matrix Matrix::hermitian() const {
  Matrix r(cols_, rows_, tag_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j).conj();
  return r;
}

Matrix Matrix::to_float() const {
  Matrix r(rows_, cols_, Backend::Float);
  for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k].to_float();
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || tag_ != o.tag_) return false;
  for (size_t k = 0; k < e_.size(); ++k)
    if (!(e_[k] == o.e_[k])) return false;
  return true;
}

std::vector<Scalar> Matrix::apply(const std::vector<Scalar>& v) const {
  if (static_cast<int>(v.size()) != cols_) throw DimensionError("matrix apply shape");
  std::vector<Scalar> r(rows_, Scalar::zero(tag_));
  for (int j = 0; j < cols_; ++j) {
    if (v[j].is_zero()) continue;
    for (int i = 0; i < rows_; ++i) {
      if (at(i, j).is_zero()) continue;
      r[i] += at(i, j) * v[j];
    }
  }
  return r;
}

double Matrix::max_abs() const {
  double m = 0;
  for (const auto& s : e_) m = std::max(m, s.abs());
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  require_same_backend(a, b);
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols(), a.backend());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a.at(i, j).is_zero()) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) {
          if (b.at(k, l).is_zero()) continue;
          r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
        }
    }
  return r;
}

Scalar determinant(const Matrix& a) {
  if (!a.square()) throw DimensionError("determinant of non-square matrix");
  int n = a.rows();
  if (n == 0) return Scalar::one(a.backend());
  if (a.backend() == Backend::Float) {
    Eigen::FullPivLU<EMat> lu(to_eigen(a));
    return Scalar::flt(lu.determinant());
  }
  // Bareiss fraction-free elimination; exact over the rational field.
  auto m = to_crat(a);
  CRat prev(Rat(1));
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k].is_zero()) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (!m[i][k].is_zero()) {
          p = i;
          break;
        }
      if (p < 0) return Scalar::exact(Rat(0));
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  CRat det = m[n - 1][n - 1];
  if (sign < 0) det = -det;
  return Scalar::exact(det);
}

Scalar minor_determinant(const Matrix& a, int i, int j) {
  if (!a.square()) throw DimensionError("minor of non-square matrix");
  if (i < 0 || j < 0 || i >= a.rows() || j >= a.cols())
    throw DimensionError("minor index out of range");
  Matrix m(a.rows() - 1, a.cols() - 1, a.backend());
  for (int r = 0, rr = 0; r < a.rows(); ++r) {
    if (r == i) continue;
    for (int c = 0, cc = 0; c < a.cols(); ++c) {
      if (c == j) continue;
      m.at(rr, cc) = a.at(r, c);
      ++cc;
    }
    ++rr;
  }
  return determinant(m);
}

Matrix invert(const Matrix& a) {
  if (!a.square()) throw DimensionError("inverse of non-square matrix");
  int n = a.rows();
  if (a.backend() == Backend::Float) {
    Eigen::FullPivLU<EMat> lu(to_eigen(a));
    double pivot = n ? std::abs(lu.matrixLU()(n - 1, n - 1)) : 1.0;
    if (n && (pivot < 1e-12 || !lu.isInvertible()))
      throw SingularMatrix("float matrix numerically singular");
    return from_eigen(lu.inverse());
  }
  // Gauss-Jordan on [a | I].
  auto m = to_crat(a);
  for (int i = 0; i < n; ++i) {
    m[i].resize(2 * n, CRat());
    m[i][n + i] = CRat(Rat(1));
  }
  std::vector<int> piv;
  int r = rref_exact(m, piv);
  int lead = 0;
  for (int c : piv)
    if (c < n) ++lead;
  if (r < n || lead < n) throw SingularMatrix("exact matrix singular (det = 0)");
  Matrix out(n, n, Backend::Exact);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = Scalar::exact(m[i][n + j]);
  return out;
}

SubspaceBasis nullspace(const Matrix& a) {
  SubspaceBasis basis;
  basis.ambient = a.cols();
  basis.backend = a.backend();
  if (a.backend() == Backend::Float) {
    if (a.rows() == 0 || a.cols() == 0) {
      for (int j = 0; j < a.cols(); ++j) {
        std::vector<Scalar> v(a.cols(), Scalar::flt(0.0));
        v[j] = Scalar::flt(1.0);
        basis.vectors.push_back(std::move(v));
      }
      return basis;
    }
    Eigen::JacobiSVD<EMat> svd(to_eigen(a), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double tol = 1e-9 * (sv.size() ? std::max(1.0, sv(0)) : 1.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tol) ++rank;
    const EMat& V = svd.matrixV();
    for (int j = rank; j < a.cols(); ++j) {
      std::vector<Scalar> v(a.cols());
      for (int i = 0; i < a.cols(); ++i) v[i] = Scalar::flt(V(i, j));
      basis.vectors.push_back(std::move(v));
    }
    return basis;
  }
  auto m = to_crat(a);
  std::vector<int> piv;
  rref_exact(m, piv);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int c : piv) is_pivot[c] = true;
  for (int c = 0; c < a.cols(); ++c) {
    if (is_pivot[c]) continue;
    std::vector<Scalar> v(a.cols(), Scalar::zero(Backend::Exact));
    v[c] = Scalar::one(Backend::Exact);
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = Scalar::exact(-m[r][c]);
    basis.vectors.push_back(std::move(v));
  }
  return basis;
}

int rank_of(const Matrix& a) {
  if (a.backend() == Backend::Float) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<EMat> svd(to_eigen(a));
    const auto& sv = svd.singularValues();
    double tol = 1e-9 * (sv.size() ? std::max(1.0, sv(0)) : 1.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tol) ++rank;
    return rank;
  }
  auto m = to_crat(a);
  std::vector<int> piv;
  return rref_exact(m, piv);
}

double spectral_radius(const Matrix& a) {
  if (!a.square()) throw DimensionError("spectral radius of non-square matrix");
  if (a.backend() == Backend::Exact)
    throw UnsupportedBackend("spectral_radius requires the Float backend");
  double r = 0;
  for (const auto& ev : eigenvalues(a)) r = std::max(r, std::abs(ev));
  return r;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  if (!a.square()) throw DimensionError("eigenvalues of non-square matrix");
  if (a.backend() == Backend::Exact)
    throw UnsupportedBackend("eigenvalues require the Float backend");
  Eigen::ComplexEigenSolver<EMat> es(to_eigen(a), false);
  if (es.info() != Eigen::Success) throw Error("eigenvalue iteration did not converge");
  std::vector<std::complex<double>> out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

std::optional<std::vector<Scalar>> solve_linear(const Matrix& a, const std::vector<Scalar>& b) {
  if (a.rows() != static_cast<int>(b.size())) throw DimensionError("solve shape");
  if (!a.square()) throw DimensionError("solve requires a square matrix");
  int n = a.rows();
  if (a.backend() == Backend::Float) {
    EMat ea = to_eigen(a);
    Eigen::VectorXcd eb(n);
    for (int i = 0; i < n; ++i) eb(i) = b[i].cf();
    Eigen::FullPivLU<EMat> lu(ea);
    if (!lu.isInvertible()) return std::nullopt;
    Eigen::VectorXcd x = lu.solve(eb);
    std::vector<Scalar> out(n);
    for (int i = 0; i < n; ++i) out[i] = Scalar::flt(x(i));
    return out;
  }
  auto m = to_crat(a);
  for (int i = 0; i < n; ++i) m[i].push_back(b[i].cr());
  std::vector<int> piv;
  int r = rref_exact(m, piv);
  // singular iff some pivot landed in the augmented column or rank < n
  if (r < n || (!piv.empty() && piv.back() == n)) return std::nullopt;
  std::vector<Scalar> out(n, Scalar::zero(Backend::Exact));
  for (int i = 0; i < r; ++i) out[piv[i]] = Scalar::exact(m[i][n]);
  return out;
}

}  // namespace qfa
