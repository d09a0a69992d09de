#include "qfa/expr.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace qfa {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// "p/q" or "p" with optional sign; integers arbitrary precision.
Rat parse_rat(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw ExprParseError("empty rational");
  size_t slash = s.find('/');
  auto check_int = [](const std::string& t) {
    if (t.empty()) throw ExprParseError("empty integer");
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw ExprParseError("bare sign in integer");
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i])))
        throw ExprParseError("bad integer '" + t + "'");
  };
  Rat r;
  if (slash == std::string::npos) {
    check_int(s);
    r = Rat(mpz_class(s));
  } else {
    std::string num = trim(s.substr(0, slash)), den = trim(s.substr(slash + 1));
    check_int(num);
    check_int(den);
    mpz_class d(den);
    if (d == 0) throw ExprParseError("zero denominator in '" + s + "'");
    r = Rat(mpz_class(num), d);
  }
  r.canonicalize();
  return r;
}

// cos(p/q pi) at the exact rational points.
std::optional<Rat> exact_cos_pi(const Rat& mult) {
  Rat m = mult;
  // reduce mod 2
  mpz_class two_den = 2 * m.get_den();
  mpz_class num = m.get_num() % two_den;
  if (num < 0) num += two_den;
  m = Rat(num, m.get_den());
  m.canonicalize();
  if (m == 0) return Rat(1);
  if (m == Rat(1, 3)) return Rat(1, 2);
  if (m == Rat(1, 2)) return Rat(0);
  if (m == Rat(2, 3)) return Rat(-1, 2);
  if (m == 1) return Rat(-1);
  if (m == Rat(4, 3)) return Rat(-1, 2);
  if (m == Rat(3, 2)) return Rat(0);
  if (m == Rat(5, 3)) return Rat(1, 2);
  return std::nullopt;
}

std::optional<Rat> exact_sin_pi(const Rat& mult) {
  return exact_cos_pi(Rat(1, 2) - mult);
}

std::optional<CRat> atom_exact_value(const AmpAtom& a) {
  switch (a.type) {
    case AmpAtom::Type::Rational:
      return CRat(a.a);
    case AmpAtom::Type::ComplexRational:
      return CRat(a.a, a.b);
    case AmpAtom::Type::Sqrt: {
      Rat root;
      if (a.a < 0) return std::nullopt;
      if (rat_perfect_square(a.a, &root)) return CRat(root);
      return std::nullopt;
    }
    case AmpAtom::Type::Cos: {
      auto v = exact_cos_pi(a.a);
      if (v) return CRat(*v);
      return std::nullopt;
    }
    case AmpAtom::Type::Sin: {
      auto v = exact_sin_pi(a.a);
      if (v) return CRat(*v);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::complex<double> atom_float_value(const AmpAtom& a) {
  switch (a.type) {
    case AmpAtom::Type::Rational:
      return {a.a.get_d(), 0.0};
    case AmpAtom::Type::ComplexRational:
      return {a.a.get_d(), a.b.get_d()};
    case AmpAtom::Type::Sqrt:
      return {std::sqrt(a.a.get_d()), 0.0};
    case AmpAtom::Type::Cos:
      return {std::cos(a.a.get_d() * kPi), 0.0};
    case AmpAtom::Type::Sin:
      return {std::sin(a.a.get_d() * kPi), 0.0};
  }
  return {0.0, 0.0};
}

AmpAtom parse_atom(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) throw ExprParseError("empty factor");
  auto func_arg = [&](const std::string& name, bool pi_suffix) -> Rat {
    std::string inner = s.substr(name.size() + 1, s.size() - name.size() - 2);
    inner = trim(inner);
    if (pi_suffix) {
      if (inner.size() < 2 || inner.substr(inner.size() - 2) != "pi")
        throw ExprParseError("expected 'pi' in '" + s + "'");
      inner = trim(inner.substr(0, inner.size() - 2));
    }
    return parse_rat(inner);
  };
  if (s.rfind("sqrt(", 0) == 0 && s.back() == ')') {
    AmpAtom a{AmpAtom::Type::Sqrt, func_arg("sqrt", false), Rat(0)};
    if (a.a < 0) throw ExprParseError("sqrt of negative rational");
    return a;
  }
  if (s.rfind("cos(", 0) == 0 && s.back() == ')')
    return {AmpAtom::Type::Cos, func_arg("cos", true), Rat(0)};
  if (s.rfind("sin(", 0) == 0 && s.back() == ')')
    return {AmpAtom::Type::Sin, func_arg("sin", true), Rat(0)};
  // complex rational "p/q+r/si": split on '+' not at position 0
  if (!s.empty() && s.back() == 'i') {
    size_t plus = s.find('+', 1);
    if (plus == std::string::npos)
      throw ExprParseError("bad complex literal '" + s + "'");
    Rat re = parse_rat(s.substr(0, plus));
    Rat im = parse_rat(s.substr(plus + 1, s.size() - plus - 2));
    return {AmpAtom::Type::ComplexRational, re, im};
  }
  return {AmpAtom::Type::Rational, parse_rat(s), Rat(0)};
}

std::string atom_str(const AmpAtom& a) {
  switch (a.type) {
    case AmpAtom::Type::Rational:
      return rat_str(a.a);
    case AmpAtom::Type::ComplexRational:
      return rat_str(a.a) + "+" + rat_str(a.b) + "i";
    case AmpAtom::Type::Sqrt:
      return "sqrt(" + rat_str(a.a) + ")";
    case AmpAtom::Type::Cos:
      return "cos(" + rat_str(a.a) + " pi)";
    case AmpAtom::Type::Sin:
      return "sin(" + rat_str(a.a) + " pi)";
  }
  return "";
}

}  // namespace

AmpExpr AmpExpr::parse(const std::string& text) {
  std::string s = trim(text);
  AmpExpr e;
  if (!s.empty() && s[0] == '-') {
    e.neg = true;
    s = trim(s.substr(1));
  }
  if (s.empty()) throw ExprParseError("empty expression");
  size_t start = 0;
  int depth = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == '*' && depth == 0)) {
      e.atoms.push_back(parse_atom(s.substr(start, i - start)));
      start = i + 1;
    } else if (s[i] == '(') {
      ++depth;
    } else if (s[i] == ')') {
      --depth;
    }
  }
  if (depth != 0) throw ExprParseError("unbalanced parentheses");
  return e;
}

AmpExpr AmpExpr::rational(Rat v) {
  AmpExpr e;
  if (v < 0) {
    e.neg = true;
    v = -v;
  }
  e.atoms.push_back({AmpAtom::Type::Rational, std::move(v), Rat(0)});
  return e;
}

AmpExpr AmpExpr::complex_rational(Rat re, Rat im) {
  AmpExpr e;
  e.atoms.push_back({AmpAtom::Type::ComplexRational, std::move(re), std::move(im)});
  return e;
}

AmpExpr AmpExpr::sqrt_of(Rat v) {
  AmpExpr e;
  e.atoms.push_back({AmpAtom::Type::Sqrt, std::move(v), Rat(0)});
  return e;
}

AmpExpr AmpExpr::cos_pi(Rat multiple) {
  AmpExpr e;
  e.atoms.push_back({AmpAtom::Type::Cos, std::move(multiple), Rat(0)});
  return e;
}

AmpExpr AmpExpr::sin_pi(Rat multiple) {
  AmpExpr e;
  e.atoms.push_back({AmpAtom::Type::Sin, std::move(multiple), Rat(0)});
  return e;
}

AmpExpr AmpExpr::operator*(const AmpExpr& o) const {
  AmpExpr e;
  e.neg = neg != o.neg;
  e.atoms = atoms;
  e.atoms.insert(e.atoms.end(), o.atoms.begin(), o.atoms.end());
  return e;
}

AmpExpr AmpExpr::negated() const {
  AmpExpr e = *this;
  e.neg = !e.neg;
  return e;
}

std::string AmpExpr::str() const {
  std::ostringstream os;
  if (neg) os << "-";
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i) os << "*";
    os << atom_str(atoms[i]);
  }
  return os.str();
}

bool AmpExpr::exact_representable() const {
  for (const auto& a : atoms)
    if (!atom_exact_value(a)) return false;
  return true;
}

Scalar AmpExpr::eval() const {
  if (exact_representable()) {
    CRat v(Rat(1));
    for (const auto& a : atoms) v *= *atom_exact_value(a);
    if (neg) v = -v;
    return Scalar::exact(v);
  }
  std::complex<double> v{1.0, 0.0};
  for (const auto& a : atoms) v *= atom_float_value(a);
  if (neg) v = -v;
  return Scalar::flt(v);
}

std::pair<AmpExpr, AmpExpr> AmpExpr::split_re_im() const {
  // At most one complex-rational factor can be split symbolically.
  int complex_count = 0;
  for (const auto& a : atoms)
    if (a.type == AmpAtom::Type::ComplexRational && a.b != 0) ++complex_count;
  if (complex_count > 1)
    throw Error("cannot split product of several complex factors");
  AmpExpr re, im;
  re.neg = neg;
  im.neg = neg;
  bool have_im = false;
  for (const auto& a : atoms) {
    if (a.type == AmpAtom::Type::ComplexRational && a.b != 0) {
      re.atoms.push_back({AmpAtom::Type::Rational, a.a, Rat(0)});
      im.atoms.push_back({AmpAtom::Type::Rational, a.b, Rat(0)});
      have_im = true;
    } else {
      re.atoms.push_back(a);
      im.atoms.push_back(a);
    }
  }
  if (!have_im) im = AmpExpr::rational(Rat(0));
  if (re.atoms.empty()) re = AmpExpr::rational(neg ? Rat(-1) : Rat(1));
  return {re, im};
}

}  // namespace qfa
