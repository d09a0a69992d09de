#include "qfa/scalar.hpp"

#include <cmath>
#include <sstream>

namespace qfa {

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r.get_num() << "/" << r.get_den();
  return os.str();
}

std::string crat_str(const CRat& c) {
  if (c.im == 0) return rat_str(c.re);
  return rat_str(c.re) + "+" + rat_str(c.im) + "i";
}

Scalar Scalar::flt(std::complex<double> v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw Error("non-finite float scalar");
  Scalar s;
  s.tag_ = Backend::Float;
  s.f_ = v;
  return s;
}

static void require_same(Backend a, Backend b) {
  if (a != b) throw BackendMismatch();
}

Scalar Scalar::conj() const {
  return tag_ == Backend::Exact ? exact(x_.conj()) : flt(std::conj(f_));
}

Scalar Scalar::operator-() const {
  return tag_ == Backend::Exact ? exact(-x_) : flt(-f_);
}

Scalar Scalar::operator+(const Scalar& o) const {
  require_same(tag_, o.tag_);
  return tag_ == Backend::Exact ? exact(x_ + o.x_) : flt(f_ + o.f_);
}

Scalar Scalar::operator-(const Scalar& o) const {
  require_same(tag_, o.tag_);
  return tag_ == Backend::Exact ? exact(x_ - o.x_) : flt(f_ - o.f_);
}

Scalar Scalar::operator*(const Scalar& o) const {
  require_same(tag_, o.tag_);
  return tag_ == Backend::Exact ? exact(x_ * o.x_) : flt(f_ * o.f_);
}

Scalar Scalar::operator/(const Scalar& o) const {
  require_same(tag_, o.tag_);
  return tag_ == Backend::Exact ? exact(x_ / o.x_) : flt(f_ / o.f_);
}

bool Scalar::operator==(const Scalar& o) const {
  require_same(tag_, o.tag_);
  return tag_ == Backend::Exact ? x_ == o.x_ : f_ == o.f_;
}

Scalar Scalar::abs2() const {
  return tag_ == Backend::Exact ? exact(x_.norm2()) : flt({std::norm(f_), 0.0});
}

std::string Scalar::str() const {
  if (tag_ == Backend::Exact) return crat_str(x_);
  std::ostringstream os;
  os.precision(12);
  if (f_.imag() == 0.0) {
    os << f_.real();
  } else {
    os << f_.real() << (f_.imag() < 0 ? "-" : "+") << std::fabs(f_.imag()) << "i";
  }
  return os.str();
}

bool rat_perfect_square(const Rat& q, Rat* root) {
  if (q < 0) return false;
  Rat r = q;
  r.canonicalize();
  mpz_class num = r.get_num(), den = r.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return false;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  if (root) *root = Rat(sn) / Rat(sd);
  return true;
}

}  // namespace qfa
