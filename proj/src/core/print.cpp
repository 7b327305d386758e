#include "core/syntax.hpp"

#include <sstream>

// Plain-text printers. The one contract that matters: parse(print(x)) must be
// alpha-equivalent to x, so precedence/parenthesization here and in parse.cpp
// are mirror images.
//
// Formula precedence, loosest to tightest:
//   quantifiers (extend right)  <  -> / -o  <  \/ / (+)  <  & / *  <  !  <  atoms
// Implication is right-associative; the other binaries are left-associative.

namespace fint {

namespace {

void print_type_rec(std::ostringstream& os, const TypePtr& t, bool arrowNeedsParens) {
  switch (t->kind) {
    case FiniteType::Kind::Nat: os << "N"; return;
    case FiniteType::Kind::Bool: os << "B"; return;
    case FiniteType::Kind::Arrow:
      if (arrowNeedsParens) os << "(";
      print_type_rec(os, t->dom, true); // domain arrows need parens (right assoc)
      os << " -> ";
      print_type_rec(os, t->cod, false);
      if (arrowNeedsParens) os << ")";
      return;
    case FiniteType::Kind::Star:
      // postfix * binds tighter than ->, so arrow elements get parens
      print_type_rec(os, t->elem, true);
      os << "*";
      return;
    case FiniteType::Kind::Meta:
      os << "?" << t->metaId; // shows up only in type-error messages
      return;
  }
}

// levels: 0 = anywhere, 1 = application argument / head (atoms only)
void print_term_rec(std::ostringstream& os, const TermPtr& t, int level) {
  switch (t->kind) {
    case Term::Kind::Var: os << t->name; return;
    case Term::Kind::Const: os << const_name(t->tag); return;
    case Term::Kind::Lambda:
      if (level > 0) os << "(";
      os << "\\" << t->var;
      if (t->varType) {
        os << ":";
        print_type_rec(os, t->varType, false);
      }
      os << ". ";
      print_term_rec(os, t->body, 0);
      if (level > 0) os << ")";
      return;
    case Term::Kind::App:
      if (level > 1) os << "(";
      print_term_rec(os, t->fun, 1); // head may be another application
      os << " ";
      print_term_rec(os, t->arg, 2); // argument must be atomic
      if (level > 1) os << ")";
      return;
  }
}

bool type_is_atomic_head(const TypePtr& t) {
  return t->kind == FiniteType::Kind::Nat || t->kind == FiniteType::Kind::Bool ||
         t->kind == FiniteType::Kind::Star;
}

std::string term_str(const TermPtr& t, int level) {
  std::ostringstream os;
  print_term_rec(os, t, level);
  return os.str();
}

// Formula precedence levels used for parenthesization decisions:
// 0 quantifier body / top, 1 implication operand, 2 or-level, 3 and-level, 4 bang body
int level_of(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Impl: return 1;
    case Formula::Kind::Or:
    case Formula::Kind::Oplus: return 2;
    case Formula::Kind::Conj:
    case Formula::Kind::With: return 3;
    case Formula::Kind::Bang: return 4;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::BQ: return 0; // quantifiers are loosest
    default: return 5; // atoms, bottom
  }
}

void print_formula_rec(std::ostringstream& os, const FormulaPtr& f, int minLevel) {
  bool parens = level_of(f) < minLevel;
  if (parens) os << "(";
  switch (f->kind) {
    case Formula::Kind::Atom: {
      const PredId& p = f->pred;
      switch (p.kind) {
        case PredId::Kind::Named:
          os << p.name << "(";
          for (std::size_t i = 0; i < f->args.size(); ++i) {
            if (i) os << ", ";
            os << term_str(f->args[i], 0);
          }
          os << ")";
          break;
        case PredId::Kind::Typing: {
          std::ostringstream ts;
          print_type_rec(ts, p.type, !type_is_atomic_head(p.type));
          os << ts.str() << "(" << term_str(f->args[0], 0) << ")";
          break;
        }
        case PredId::Kind::Eq:
          os << term_str(f->args[0], 1) << " = " << term_str(f->args[1], 1);
          break;
        case PredId::Kind::Le:
          os << term_str(f->args[0], 1) << " <= " << term_str(f->args[1], 1);
          break;
        case PredId::Kind::LeqStar:
          os << term_str(f->args[0], 1) << " <=* " << term_str(f->args[1], 1);
          break;
        case PredId::Kind::Elem:
          os << term_str(f->args[0], 1) << " in " << term_str(f->args[1], 1);
          break;
      }
      break;
    }
    case Formula::Kind::Bottom: os << "bot"; break;
    case Formula::Kind::Conj:
      print_formula_rec(os, f->left, 3);
      os << (f->dialect == Dialect::IL ? " & " : " * ");
      print_formula_rec(os, f->right, 4); // left assoc: right child needs higher level
      break;
    case Formula::Kind::With:
      print_formula_rec(os, f->left, 3);
      os << " & ";
      print_formula_rec(os, f->right, 4);
      break;
    case Formula::Kind::Or:
      print_formula_rec(os, f->left, 2);
      os << " \\/ ";
      print_formula_rec(os, f->right, 3);
      break;
    case Formula::Kind::Oplus:
      print_formula_rec(os, f->left, 2);
      os << " (+) ";
      print_formula_rec(os, f->right, 3);
      break;
    case Formula::Kind::Impl:
      print_formula_rec(os, f->left, 2); // right assoc: left child needs higher level
      os << (f->dialect == Dialect::IL ? " -> " : " -o ");
      print_formula_rec(os, f->right, 1);
      break;
    case Formula::Kind::Bang:
      os << "!";
      print_formula_rec(os, f->body, 5);
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      os << (f->kind == Formula::Kind::Forall ? "forall " : "exists ");
      os << f->var;
      if (f->varType) {
        os << ":";
        print_type_rec(os, f->varType, false);
      }
      os << ". ";
      print_formula_rec(os, f->body, 0);
      break;
    case Formula::Kind::BQ: {
      os << (f->bqMonotone ? "forall~ " : "forall ");
      for (std::size_t i = 0; i < f->bqVars.size(); ++i) {
        if (i) os << ", ";
        os << f->bqVars[i] << ":";
        print_type_rec(os, f->bqTypes[i], false);
      }
      if (f->bqGuard != BqGuard::None) {
        os << (f->bqGuard == BqGuard::Elem ? " in " : " <=* ");
        if (f->bqBounds.size() == 1) {
          os << term_str(f->bqBounds[0], 2);
        } else {
          os << "(";
          for (std::size_t i = 0; i < f->bqBounds.size(); ++i) {
            if (i) os << ", ";
            os << term_str(f->bqBounds[i], 0);
          }
          os << ")";
        }
      }
      os << ". ";
      print_formula_rec(os, f->body, 0);
      break;
    }
  }
  if (parens) os << ")";
}

} // namespace

std::string print_type(const TypePtr& t) {
  std::ostringstream os;
  print_type_rec(os, t, false);
  return os.str();
}

std::string print_term(const TermPtr& t) { return term_str(t, 0); }

std::string print_formula(const FormulaPtr& f) {
  std::ostringstream os;
  print_formula_rec(os, f, 0);
  return os.str();
}

std::string print_sequent(const Sequent& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.context.size(); ++i) {
    if (i) os << ", ";
    print_formula_rec(os, s.context[i], 1); // avoid top-level bare quantifier commas
  }
  if (!s.context.empty()) os << " ";
  os << "|- ";
  print_formula_rec(os, s.conclusion, 0);
  return os.str();
}

} // namespace fint
