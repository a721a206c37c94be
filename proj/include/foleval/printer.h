#ifndef FOLEVAL_PRINTER_H_
#define FOLEVAL_PRINTER_H_

#include <string>

#include "foleval/formula.h"
#include "foleval/lexer.h"

namespace foleval {

struct PrintOptions {
  // kMixed prints like kUnicode.
  Notation notation = Notation::kUnicode;
  // Parenthesize every binary subformula instead of only where precedence
  // requires it.
  bool full_parens = false;
};

// Canonical text: one space around binary connectives, ", " between
// arguments, quantifier bodies in parentheses unless the body is itself a
// quantifier ("∀x ∃y (R(x, y))").
std::string Print(const Formula &f, const PrintOptions &options = {});

std::string Print(const Term &t);

}  // namespace foleval

#endif  // FOLEVAL_PRINTER_H_
