#ifndef QFA_SCALAR_HPP
#define QFA_SCALAR_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <gmpxx.h>

namespace qfa {

using Rat = mpq_class;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
struct BackendMismatch : Error {
  BackendMismatch() : Error("backend mismatch") {}
};
struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};
struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& msg) : Error(msg) {}
};
struct UnsupportedBackend : Error {
  explicit UnsupportedBackend(const std::string& msg) : Error(msg) {}
};

enum class Backend { Exact, Float };

/// Complex number with exact rational real/imaginary parts.
struct CRat {
  Rat re, im;

  CRat() : re(0), im(0) {}
  CRat(Rat r) : re(std::move(r)), im(0) {}
  CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  CRat conj() const { return {re, -im}; }
  Rat norm2() const { return re * re + im * im; }

  CRat operator-() const { return {-re, -im}; }
  CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
  CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
  CRat operator*(const CRat& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  CRat operator/(const CRat& o) const {
    Rat n = o.norm2();
    if (n == 0) throw Error("division by zero");
    return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
  }
  CRat& operator+=(const CRat& o) { re += o.re; im += o.im; return *this; }
  CRat& operator-=(const CRat& o) { re -= o.re; im -= o.im; return *this; }
  CRat& operator*=(const CRat& o) { *this = *this * o; return *this; }
  bool operator==(const CRat& o) const { return re == o.re && im == o.im; }
  bool operator!=(const CRat& o) const { return !(*this == o); }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

std::string rat_str(const Rat& r);
std::string crat_str(const CRat& c);

/// Amplitude/probability value over one of the two arithmetic backends.
class Scalar {
 public:
  Scalar() : tag_(Backend::Exact), x_() {}

  static Scalar exact(Rat re, Rat im = Rat(0)) {
    Scalar s;
    s.tag_ = Backend::Exact;
    s.x_ = CRat(std::move(re), std::move(im));
    return s;
  }
  static Scalar exact(CRat v) {
    Scalar s;
    s.tag_ = Backend::Exact;
    s.x_ = std::move(v);
    return s;
  }
  static Scalar flt(std::complex<double> v);
  static Scalar zero(Backend b) {
    return b == Backend::Exact ? exact(Rat(0)) : flt({0.0, 0.0});
  }
  static Scalar one(Backend b) {
    return b == Backend::Exact ? exact(Rat(1)) : flt({1.0, 0.0});
  }

  Backend backend() const { return tag_; }
  bool is_exact() const { return tag_ == Backend::Exact; }

  const CRat& cr() const {
    if (tag_ != Backend::Exact) throw BackendMismatch();
    return x_;
  }
  std::complex<double> cf() const {
    return tag_ == Backend::Exact ? x_.to_complex() : f_;
  }

  Scalar to_float() const { return flt(cf()); }

  bool is_zero() const {
    return tag_ == Backend::Exact ? x_.is_zero() : (f_ == std::complex<double>(0.0, 0.0));
  }
  bool is_real() const {
    return tag_ == Backend::Exact ? x_.is_real() : f_.imag() == 0.0;
  }

  Scalar conj() const;
  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
  Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  /// |v|^2, same backend (real-valued).
  Scalar abs2() const;
  double abs() const { return std::abs(cf()); }

  std::string str() const;

 private:
  Backend tag_;
  CRat x_;
  std::complex<double> f_{0.0, 0.0};
};

/// True if q is the square of a rational; if so *root = positive square root.
bool rat_perfect_square(const Rat& q, Rat* root);

}  // namespace qfa

#endif
