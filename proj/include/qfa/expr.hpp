#ifndef QFA_EXPR_HPP
#define QFA_EXPR_HPP

#include <string>
#include <vector>

#include "qfa/scalar.hpp"

namespace qfa {

struct ExprParseError : Error {
  explicit ExprParseError(const std::string& msg) : Error("weight expression: " + msg) {}
};

/// One factor of a transition-weight expression.
struct AmpAtom {
  enum class Type { Rational, ComplexRational, Sqrt, Cos, Sin };
  Type type;
  Rat a;  // Rational value, sqrt argument, or pi multiple
  Rat b;  // imaginary part for ComplexRational
};

/// Transition weight: optional sign times a product of atoms.
/// Grammar: "p/q", "p/q+r/si", "sqrt(p/q)", "cos(p/q pi)", "sin(p/q pi)",
/// optional leading "-", products joined by "*".
struct AmpExpr {
  bool neg = false;
  std::vector<AmpAtom> atoms;

  static AmpExpr parse(const std::string& text);
  static AmpExpr rational(Rat v);
  static AmpExpr complex_rational(Rat re, Rat im);
  static AmpExpr sqrt_of(Rat v);
  static AmpExpr cos_pi(Rat multiple);
  static AmpExpr sin_pi(Rat multiple);
  AmpExpr operator*(const AmpExpr& o) const;
  AmpExpr negated() const;

  std::string str() const;

  /// True if every factor has an exact rational complex value.
  bool exact_representable() const;

  /// Exact value when representable, float value otherwise.
  Scalar eval() const;
  /// Real/imaginary parts as expressions (only when no Sqrt/Trig factor mixes
  /// with a complex one in a way that leaves the split inexpressible).
  std::pair<AmpExpr, AmpExpr> split_re_im() const;
};

}  // namespace qfa

#endif
