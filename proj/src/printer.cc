#include "foleval/printer.h"

namespace foleval {

namespace {

int Precedence(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::kImplies:
    case FormulaKind::kIff:
      return 1;
    case FormulaKind::kOr:
    case FormulaKind::kXor:
      return 2;
    case FormulaKind::kAnd:
      return 3;
    case FormulaKind::kNot:
    case FormulaKind::kForAll:
    case FormulaKind::kExists:
      return 4;
    case FormulaKind::kEquals:
    case FormulaKind::kAtom:
      return 5;
  }
  return 5;
}

bool RightAssociative(FormulaKind kind) {
  return kind == FormulaKind::kImplies || kind == FormulaKind::kIff;
}

std::string_view Symbol(FormulaKind kind, bool ascii) {
  switch (kind) {
    case FormulaKind::kForAll: return ascii ? "forall" : "∀";
    case FormulaKind::kExists: return ascii ? "exists" : "∃";
    case FormulaKind::kNot: return ascii ? "~" : "¬";
    case FormulaKind::kAnd: return ascii ? "&" : "∧";
    case FormulaKind::kOr: return ascii ? "|" : "∨";
    case FormulaKind::kImplies: return ascii ? "->" : "→";
    case FormulaKind::kIff: return ascii ? "<->" : "↔";
    case FormulaKind::kXor: return ascii ? "xor" : "⊕";
    case FormulaKind::kEquals: return "=";
    case FormulaKind::kAtom: return "";
  }
  return "";
}

class Printer {
 public:
  explicit Printer(const PrintOptions &options)
      : ascii_(options.notation == Notation::kAscii),
        full_(options.full_parens) {}

  void Emit(const Formula &f) {
    const FormulaKind kind = f.kind();
    switch (kind) {
      case FormulaKind::kAtom:
        out_ += f.name();
        EmitArgs(f.terms());
        return;
      case FormulaKind::kEquals:
        EmitTerm(f.terms()[0]);
        out_ += " = ";
        EmitTerm(f.terms()[1]);
        return;
      case FormulaKind::kNot: {
        const Formula &body = f.body();
        out_ += Symbol(kind, ascii_);
        bool parens = Precedence(body.kind()) < 4 ||
                      body.kind() == FormulaKind::kEquals;
        EmitMaybeParens(body, parens);
        return;
      }
      case FormulaKind::kForAll:
      case FormulaKind::kExists: {
        out_ += Symbol(kind, ascii_);
        if (ascii_) out_ += ' ';
        out_ += f.name();
        out_ += ' ';
        EmitMaybeParens(f.body(), !IsQuantifier(f.body().kind()));
        return;
      }
      default:
        break;
    }
    const int prec = Precedence(kind);
    const Formula &lhs = f.lhs();
    const Formula &rhs = f.rhs();
    bool lhs_parens, rhs_parens;
    if (RightAssociative(kind)) {
      lhs_parens = Precedence(lhs.kind()) <= prec;
      rhs_parens = Precedence(rhs.kind()) < prec;
    } else {
      lhs_parens = Precedence(lhs.kind()) < prec;
      rhs_parens = Precedence(rhs.kind()) <= prec;
    }
    if (full_) {
      lhs_parens = lhs_parens || IsBinaryConnective(lhs.kind());
      rhs_parens = rhs_parens || IsBinaryConnective(rhs.kind());
    }
    EmitMaybeParens(lhs, lhs_parens);
    out_ += ' ';
    out_ += Symbol(kind, ascii_);
    out_ += ' ';
    EmitMaybeParens(rhs, rhs_parens);
  }

  void EmitTerm(const Term &t) {
    out_ += t.name();
    if (t.kind() == TermKind::kFunction) EmitArgs(t.args());
  }

  std::string Take() { return std::move(out_); }

 private:
  void EmitMaybeParens(const Formula &f, bool parens) {
    if (parens) out_ += '(';
    Emit(f);
    if (parens) out_ += ')';
  }

  void EmitArgs(const std::vector<Term> &args) {
    if (args.empty()) return;
    out_ += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out_ += ", ";
      EmitTerm(args[i]);
    }
    out_ += ')';
  }

  bool ascii_;
  bool full_;
  std::string out_;
};

}  // namespace

std::string Print(const Formula &f, const PrintOptions &options) {
  Printer printer(options);
  printer.Emit(f);
  return printer.Take();
}

std::string Print(const Term &t) {
  Printer printer(PrintOptions{});
  printer.EmitTerm(t);
  return printer.Take();
}

}  // namespace foleval
