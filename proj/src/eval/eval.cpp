#include "eval/eval.hpp"

#include <algorithm>
#include <climits>
#include <optional>

namespace fint {

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

namespace {

ValuePtr mk_scalar(TypePtr ty, long long n) {
  auto v = std::make_shared<Value>();
  v->type = std::move(ty);
  v->num = n;
  return v;
}

ValuePtr mk_items(TypePtr ty, std::vector<ValuePtr> items) {
  auto v = std::make_shared<Value>();
  v->type = std::move(ty);
  v->items = std::move(items);
  return v;
}

bool scalar_type(const TypePtr& t) {
  return t && (t->kind == FiniteType::Kind::Nat || t->kind == FiniteType::Kind::Bool);
}

} // namespace

bool value_equal(const ValuePtr& a, const ValuePtr& b) {
  if (!a || !b) return a == b; // undefined table entries only equal themselves
  if (a->type && b->type && a->type->kind != b->type->kind) return false;
  if (scalar_type(a->type) || scalar_type(b->type) ||
      (a->items.empty() && b->items.empty() && !a->type && !b->type))
    return a->num == b->num && a->items.size() == b->items.size();
  if (a->items.size() != b->items.size()) return false;
  for (std::size_t i = 0; i < a->items.size(); ++i)
    if (!value_equal(a->items[i], b->items[i])) return false;
  return a->num == b->num;
}

bool value_less(const ValuePtr& a, const ValuePtr& b) {
  if (!a || !b) return !a && b;
  if (a->num != b->num) return a->num < b->num;
  if (a->items.size() != b->items.size()) return a->items.size() < b->items.size();
  for (std::size_t i = 0; i < a->items.size(); ++i) {
    if (value_less(a->items[i], b->items[i])) return true;
    if (value_less(b->items[i], a->items[i])) return false;
  }
  return false;
}

std::string print_value(const ValuePtr& v) {
  if (!v) return "_";
  if (!v->type) { // untyped literal (only scalars and sequences occur)
    if (v->items.empty()) return std::to_string(v->num);
  }
  switch (v->type ? v->type->kind : FiniteType::Kind::Star) {
    case FiniteType::Kind::Nat: return std::to_string(v->num);
    case FiniteType::Kind::Bool: return v->num ? "T" : "F";
    case FiniteType::Kind::Arrow: {
      std::string out = "{";
      for (std::size_t i = 0; i < v->items.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(i) + ":" + print_value(v->items[i]);
      }
      return out + "}";
    }
    default: {
      std::string out = "[";
      for (std::size_t i = 0; i < v->items.size(); ++i) {
        if (i) out += ", ";
        out += print_value(v->items[i]);
      }
      return out + "]";
    }
  }
}

// ---------------------------------------------------------------------------
// Finite domain
// ---------------------------------------------------------------------------

namespace {

constexpr long long kCardCap = LLONG_MAX / 4;

long long mul_cap(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > kCardCap / b) return kCardCap;
  return a * b;
}

long long add_cap(long long a, long long b) {
  if (a > kCardCap - b) return kCardCap;
  return a + b;
}

long long pow_cap(long long base, long long exp) {
  long long r = 1;
  for (long long i = 0; i < exp; ++i) r = mul_cap(r, base);
  return r;
}

} // namespace

long long FiniteDomain::cardinality(const TypePtr& t) const {
  switch (t->kind) {
    case FiniteType::Kind::Nat: return bound + 1;
    case FiniteType::Kind::Bool: return 2;
    case FiniteType::Kind::Arrow:
      return pow_cap(cardinality(t->cod), cardinality(t->dom));
    case FiniteType::Kind::Star: {
      long long n = cardinality(t->elem);
      long long total = 0;
      for (int l = 0; l <= bound; ++l) total = add_cap(total, pow_cap(n, l));
      return total;
    }
    case FiniteType::Kind::Meta:
      throw FintError(ErrorKind::Type, "cannot enumerate an unresolved type");
  }
  return 0;
}

std::vector<ValuePtr> FiniteDomain::carrier(const TypePtr& t) const {
  long long card = cardinality(t);
  if (card > maxCarrier)
    throw FintError(ErrorKind::Domain, "carrier of " + print_type(t) + " has " +
                                           (card >= kCardCap ? std::string("too many")
                                                             : std::to_string(card)) +
                                           " elements (limit " + std::to_string(maxCarrier) +
                                           ")");
  std::vector<ValuePtr> out;
  out.reserve(static_cast<std::size_t>(card));
  switch (t->kind) {
    case FiniteType::Kind::Nat:
      for (int i = 0; i <= bound; ++i) out.push_back(mk_scalar(t, i));
      break;
    case FiniteType::Kind::Bool:
      out.push_back(mk_scalar(t, 0));
      out.push_back(mk_scalar(t, 1));
      break;
    case FiniteType::Kind::Arrow: {
      std::vector<ValuePtr> cods = carrier(t->cod);
      long long m = cardinality(t->dom);
      // odometer over the table digits; slot 0 is the most significant
      std::vector<std::size_t> digit(static_cast<std::size_t>(m), 0);
      for (;;) {
        std::vector<ValuePtr> tab;
        tab.reserve(digit.size());
        for (std::size_t d : digit) tab.push_back(cods[d]);
        out.push_back(mk_items(t, std::move(tab)));
        std::size_t i = digit.size();
        while (i > 0) {
          --i;
          if (++digit[i] < cods.size()) break;
          digit[i] = 0;
          if (i == 0) return out;
        }
        if (digit.empty()) return out; // constant function on an empty domain cannot occur
      }
    }
    case FiniteType::Kind::Star: {
      std::vector<ValuePtr> elems = carrier(t->elem);
      out.push_back(mk_items(t, {}));
      for (int len = 1; len <= bound; ++len) {
        std::vector<std::size_t> digit(static_cast<std::size_t>(len), 0);
        for (;;) {
          std::vector<ValuePtr> seq;
          seq.reserve(digit.size());
          for (std::size_t d : digit) seq.push_back(elems[d]);
          out.push_back(mk_items(t, std::move(seq)));
          std::size_t i = digit.size();
          bool done = false;
          while (i > 0) {
            --i;
            if (++digit[i] < elems.size()) break;
            digit[i] = 0;
            if (i == 0) done = true;
          }
          if (done) break;
        }
      }
      break;
    }
    case FiniteType::Kind::Meta:
      throw FintError(ErrorKind::Type, "cannot enumerate an unresolved type");
  }
  return out;
}

ValuePtr FiniteDomain::value_at(const TypePtr& t, long long index) const {
  switch (t->kind) {
    case FiniteType::Kind::Nat:
    case FiniteType::Kind::Bool: return mk_scalar(t, index);
    case FiniteType::Kind::Arrow: {
      long long m = cardinality(t->dom);
      long long n = cardinality(t->cod);
      std::vector<ValuePtr> tab(static_cast<std::size_t>(m));
      for (long long i = m - 1; i >= 0; --i) {
        tab[static_cast<std::size_t>(i)] = value_at(t->cod, index % n);
        index /= n;
      }
      return mk_items(t, std::move(tab));
    }
    case FiniteType::Kind::Star: {
      long long n = cardinality(t->elem);
      int len = 0;
      long long block = 1;
      while (index >= block) {
        index -= block;
        block = mul_cap(block, n);
        ++len;
      }
      std::vector<ValuePtr> seq(static_cast<std::size_t>(len));
      for (int i = len - 1; i >= 0; --i) {
        seq[static_cast<std::size_t>(i)] = value_at(t->elem, index % n);
        index /= n;
      }
      return mk_items(t, std::move(seq));
    }
    case FiniteType::Kind::Meta:
      throw FintError(ErrorKind::Type, "cannot index an unresolved type");
  }
  return nullptr;
}

long long FiniteDomain::index_of(const ValuePtr& v) const {
  if (!v || !v->type) throw OutOfDomain{"cannot rank an undefined or untyped value"};
  switch (v->type->kind) {
    case FiniteType::Kind::Nat:
      if (v->num > bound) throw OutOfDomain{"number beyond the domain bound"};
      return v->num;
    case FiniteType::Kind::Bool: return v->num;
    case FiniteType::Kind::Arrow: {
      long long n = cardinality(v->type->cod);
      long long r = 0;
      for (const auto& c : v->items) {
        if (!c) throw OutOfDomain{"partial function table"};
        r = add_cap(mul_cap(r, n), index_of(c));
      }
      return r;
    }
    case FiniteType::Kind::Star: {
      long long n = cardinality(v->type->elem);
      if (static_cast<int>(v->items.size()) > bound)
        throw OutOfDomain{"sequence longer than the domain bound"};
      long long offset = 0;
      long long block = 1;
      for (std::size_t l = 0; l < v->items.size(); ++l) {
        offset = add_cap(offset, block);
        block = mul_cap(block, n);
      }
      long long r = 0;
      for (const auto& e : v->items) r = add_cap(mul_cap(r, n), index_of(e));
      return add_cap(offset, r);
    }
    case FiniteType::Kind::Meta: break;
  }
  throw FintError(ErrorKind::Type, "cannot rank a value of unresolved type");
}

ValuePtr FiniteDomain::zero_value(const TypePtr& t) const {
  switch (t->kind) {
    case FiniteType::Kind::Nat:
    case FiniteType::Kind::Bool: return mk_scalar(t, 0);
    case FiniteType::Kind::Arrow: {
      long long m = cardinality(t->dom);
      if (m > maxCarrier)
        throw FintError(ErrorKind::Domain, "zero table of " + print_type(t) + " too large");
      std::vector<ValuePtr> tab(static_cast<std::size_t>(m), zero_value(t->cod));
      return mk_items(t, std::move(tab));
    }
    case FiniteType::Kind::Star: return mk_items(t, {});
    case FiniteType::Kind::Meta: break;
  }
  throw FintError(ErrorKind::Type, "no zero value for an unresolved type");
}

ValuePtr apply_value(const FiniteDomain& dom, const ValuePtr& f, const ValuePtr& a) {
  if (!f || !f->type || f->type->kind != FiniteType::Kind::Arrow)
    throw FintError(ErrorKind::Type, "application of a non-function value");
  long long ix = dom.index_of(a);
  if (ix < 0 || ix >= static_cast<long long>(f->items.size()))
    throw OutOfDomain{"argument outside the function table"};
  const ValuePtr& r = f->items[static_cast<std::size_t>(ix)];
  if (!r) throw OutOfDomain{"function table undefined at this argument"};
  return r;
}

bool value_leqstar(const FiniteDomain& dom, const ValuePtr& a, const ValuePtr& b) {
  if (!a || !b) return false;
  const TypePtr& t = a->type;
  if (!t) return a->num <= b->num && a->items.empty() && b->items.empty();
  switch (t->kind) {
    case FiniteType::Kind::Nat:
    case FiniteType::Kind::Bool: return a->num <= b->num;
    case FiniteType::Kind::Arrow: {
      // f <=* g iff for all y and all x <=* y: f x <=* g y and g x <=* g y
      std::vector<ValuePtr> dvals = dom.carrier(t->dom);
      for (const auto& y : dvals) {
        for (const auto& x : dvals) {
          if (!value_leqstar(dom, x, y)) continue;
          try {
            ValuePtr fx = apply_value(dom, a, x);
            ValuePtr gy = apply_value(dom, b, y);
            ValuePtr gx = apply_value(dom, b, x);
            if (!value_leqstar(dom, fx, gy) || !value_leqstar(dom, gx, gy)) return false;
          } catch (const OutOfDomain&) {
            return false;
          }
        }
      }
      return true;
    }
    case FiniteType::Kind::Star: {
      // |a| <= |b|, a_i <=* b_i for i < |a|, and b is self-majorizing entrywise
      if (a->items.size() > b->items.size()) return false;
      for (std::size_t i = 0; i < a->items.size(); ++i)
        if (!value_leqstar(dom, a->items[i], b->items[i])) return false;
      for (const auto& e : b->items)
        if (!value_leqstar(dom, e, e)) return false;
      return true;
    }
    case FiniteType::Kind::Meta: break;
  }
  return false;
}

bool value_elem(const ValuePtr& a, const ValuePtr& s) {
  if (!s) return false;
  for (const auto& e : s->items)
    if (value_equal(a, e)) return true;
  return false;
}

ValuePtr value_max(const FiniteDomain& dom, const ValuePtr& a, const ValuePtr& b) {
  if (!a || !b) throw OutOfDomain{"max of an undefined value"};
  const TypePtr& t = a->type ? a->type : b->type;
  if (!t || t->kind == FiniteType::Kind::Nat || t->kind == FiniteType::Kind::Bool)
    return mk_scalar(t ? t : a->type, std::max(a->num, b->num));
  if (t->kind == FiniteType::Kind::Arrow) {
    std::vector<ValuePtr> tab(a->items.size());
    for (std::size_t i = 0; i < tab.size(); ++i) {
      if (!a->items[i] || !b->items[i]) continue; // stays undefined
      tab[i] = value_max(dom, a->items[i], b->items[i]);
    }
    return mk_items(t, std::move(tab));
  }
  // sequences: pointwise max up to the longer length, padding with zeros
  std::size_t len = std::max(a->items.size(), b->items.size());
  TypePtr elemT = t->elem;
  std::vector<ValuePtr> seq;
  seq.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    ValuePtr x = i < a->items.size() ? a->items[i] : nullptr;
    ValuePtr y = i < b->items.size() ? b->items[i] : nullptr;
    if (!x) x = elemT ? dom.zero_value(elemT) : (y ? nullptr : nullptr);
    if (!y) y = elemT ? dom.zero_value(elemT) : nullptr;
    if (!x || !y) throw OutOfDomain{"max padding needs a concrete element type"};
    seq.push_back(value_max(dom, x, y));
  }
  return mk_items(t, std::move(seq));
}

ValuePtr value_as_set(const ValuePtr& s) {
  if (!s) return s;
  std::vector<ValuePtr> items = s->items;
  std::sort(items.begin(), items.end(), value_less);
  std::vector<ValuePtr> dedup;
  for (const auto& v : items)
    if (dedup.empty() || !value_equal(dedup.back(), v)) dedup.push_back(v);
  return mk_items(s->type, std::move(dedup));
}

TermPtr reify_value(const ValuePtr& v) {
  if (!v) throw FintError(ErrorKind::Domain, "cannot print an undefined value as a term");
  if (v->type && v->type->kind == FiniteType::Kind::Arrow)
    throw FintError(ErrorKind::Unsupported, "function values have no term form");
  if (v->type && v->type->kind == FiniteType::Kind::Bool)
    return t_const(v->num ? ConstTag::TT : ConstTag::FF);
  if (!v->type || v->type->kind == FiniteType::Kind::Nat) {
    if (!v->items.empty()) { /* untyped sequence literal */
    } else {
      return t_numeral(static_cast<int>(v->num));
    }
  }
  TermPtr out = t_const(ConstTag::Nil, v->type);
  for (const auto& e : v->items) out = t_apps(t_const(ConstTag::Append), {out, reify_value(e)});
  return out;
}

// ---------------------------------------------------------------------------
// Symbolic normalization
// ---------------------------------------------------------------------------

namespace {

struct Spine {
  TermPtr head;
  std::vector<TermPtr> args; // outermost application last
};

Spine decompose(const TermPtr& t) {
  Spine s;
  const Term* cur = t.get();
  std::vector<TermPtr> rev;
  TermPtr walk = t;
  while (walk->kind == Term::Kind::App) {
    rev.push_back(walk->arg);
    walk = walk->fun;
  }
  s.head = walk;
  s.args.assign(rev.rbegin(), rev.rend());
  (void)cur;
  return s;
}

TermPtr recompose(TermPtr head, const std::vector<TermPtr>& args, std::size_t from = 0) {
  for (std::size_t i = from; i < args.size(); ++i) head = t_app(head, args[i]);
  return head;
}

bool is_const(const TermPtr& t, ConstTag tag) {
  return t->kind == Term::Kind::Const && t->tag == tag;
}

// Closed first-order literals (numerals, booleans, append-chains of literals).
std::optional<ValuePtr> term_literal(const TermPtr& t) {
  Spine s = decompose(t);
  if (s.head->kind != Term::Kind::Const) return std::nullopt;
  switch (s.head->tag) {
    case ConstTag::Zero:
      if (!s.args.empty()) return std::nullopt;
      return mk_scalar(ty_nat(), 0);
    case ConstTag::TT:
      if (!s.args.empty()) return std::nullopt;
      return mk_scalar(ty_bool(), 1);
    case ConstTag::FF:
      if (!s.args.empty()) return std::nullopt;
      return mk_scalar(ty_bool(), 0);
    case ConstTag::Suc: {
      if (s.args.size() != 1) return std::nullopt;
      auto n = term_literal(s.args[0]);
      if (!n || !(*n)->type || (*n)->type->kind != FiniteType::Kind::Nat) return std::nullopt;
      return mk_scalar(ty_nat(), (*n)->num + 1);
    }
    case ConstTag::Nil:
      if (!s.args.empty()) return std::nullopt;
      return mk_items(s.head->constType, {});
    case ConstTag::Append: {
      if (s.args.size() != 2) return std::nullopt;
      auto seq = term_literal(s.args[0]);
      auto el = term_literal(s.args[1]);
      if (!seq || !el) return std::nullopt;
      TypePtr ty = (*seq)->type ? (*seq)->type : ty_star((*el)->type);
      std::vector<ValuePtr> items = (*seq)->items;
      items.push_back(*el);
      return mk_items(ty, std::move(items));
    }
    default: return std::nullopt;
  }
}

TermPtr literal_term(const ValuePtr& v) {
  if (v->type && v->type->kind == FiniteType::Kind::Bool)
    return t_const(v->num ? ConstTag::TT : ConstTag::FF);
  if (!v->type || v->type->kind == FiniteType::Kind::Nat)
    return t_numeral(static_cast<int>(v->num));
  TermPtr out = t_const(ConstTag::Nil, v->type);
  for (const auto& e : v->items) out = t_apps(t_const(ConstTag::Append), {out, literal_term(e)});
  return out;
}

// Pointwise max on literals, domain-independent (no arrow values arise).
ValuePtr literal_max(const ValuePtr& a, const ValuePtr& b) {
  const TypePtr& t = a->type ? a->type : b->type;
  if (!t || t->kind == FiniteType::Kind::Nat || t->kind == FiniteType::Kind::Bool)
    return mk_scalar(t, std::max(a->num, b->num));
  std::size_t len = std::max(a->items.size(), b->items.size());
  TypePtr elemT = t->elem;
  std::vector<ValuePtr> seq;
  for (std::size_t i = 0; i < len; ++i) {
    ValuePtr zero =
        elemT ? (elemT->kind == FiniteType::Kind::Star ? mk_items(elemT, {})
                                                       : mk_scalar(elemT, 0))
              : nullptr;
    ValuePtr x = i < a->items.size() ? a->items[i] : zero;
    ValuePtr y = i < b->items.size() ? b->items[i] : zero;
    if (!x || !y) return nullptr;
    ValuePtr m = literal_max(x, y);
    if (!m) return nullptr;
    seq.push_back(m);
  }
  return mk_items(t, std::move(seq));
}

struct Normalizer {
  long fuel;
  bool innermost;

  void step() {
    if (--fuel < 0) throw FintError(ErrorKind::Fuel, "normalization ran out of fuel");
  }

  TermPtr norm(TermPtr t) {
    for (;;) {
      if (t->kind == Term::Kind::Var || t->kind == Term::Kind::Const ||
          t->kind == Term::Kind::Lambda)
        return t; // weak: no reduction under binders
      Spine s = decompose(t);
      if (innermost)
        for (auto& a : s.args) a = norm(a);

      if (s.head->kind == Term::Kind::Lambda && !s.args.empty()) {
        step();
        TermPtr contracted = substitute(s.head->body, {{s.head->var, s.args[0]}});
        t = recompose(contracted, s.args, 1);
        continue;
      }

      if (s.head->kind == Term::Kind::Const) {
        if (auto r = delta(s)) {
          step();
          t = *r;
          continue;
        }
      }

      // stuck: normalize the arguments in place and stop
      if (!innermost)
        for (auto& a : s.args) a = norm(a);
      return recompose(s.head, s.args);
    }
  }

  // One delta contraction at the head, if any applies.
  std::optional<TermPtr> delta(Spine& s) {
    auto have = [&](std::size_t n) { return s.args.size() >= n; };
    switch (s.head->tag) {
      case ConstTag::K:
        if (have(2)) {
          std::vector<TermPtr> rest(s.args.begin() + 2, s.args.end());
          return recompose(s.args[0], rest);
        }
        return std::nullopt;
      case ConstTag::S:
        if (have(3))
          return recompose(
              t_app(t_app(s.args[0], s.args[2]), t_app(s.args[1], s.args[2])), s.args, 3);
        return std::nullopt;
      case ConstTag::Ap:
        if (have(2)) return recompose(t_app(s.args[0], s.args[1]), s.args, 2);
        return std::nullopt;
      case ConstTag::If: {
        if (!have(3)) return std::nullopt;
        s.args[0] = norm(s.args[0]);
        if (is_const(s.args[0], ConstTag::TT)) return recompose(s.args[1], s.args, 3);
        if (is_const(s.args[0], ConstTag::FF)) return recompose(s.args[2], s.args, 3);
        return std::nullopt;
      }
      case ConstTag::Rec: {
        if (!have(3)) return std::nullopt;
        s.args[0] = norm(s.args[0]);
        if (is_const(s.args[0], ConstTag::Zero)) return recompose(s.args[1], s.args, 3);
        Spine n = decompose(s.args[0]);
        if (is_const(n.head, ConstTag::Suc) && n.args.size() == 1) {
          TermPtr m = n.args[0];
          TermPtr recm = t_apps(t_const(ConstTag::Rec), {m, s.args[1], s.args[2]});
          return recompose(t_app(t_app(s.args[2], m), recm), s.args, 3);
        }
        return std::nullopt;
      }
      case ConstTag::L: {
        if (!have(3)) return std::nullopt;
        s.args[0] = norm(s.args[0]);
        if (is_const(s.args[0], ConstTag::Nil)) return recompose(s.args[2], s.args, 3);
        Spine n = decompose(s.args[0]);
        if (is_const(n.head, ConstTag::Append) && n.args.size() == 2) {
          TermPtr folded = t_apps(t_const(ConstTag::L), {n.args[0], s.args[1], s.args[2]});
          return recompose(t_app(t_app(s.args[1], folded), n.args[1]), s.args, 3);
        }
        return std::nullopt;
      }
      case ConstTag::Sing:
        if (have(1))
          return recompose(
              t_app(t_app(t_const(ConstTag::Append), t_const(ConstTag::Nil)), s.args[0]),
              s.args, 1);
        return std::nullopt;
      case ConstTag::Bigcup: {
        if (!have(2)) return std::nullopt;
        s.args[1] = norm(s.args[1]);
        if (is_const(s.args[1], ConstTag::Nil))
          return recompose(t_const(ConstTag::Nil), s.args, 2);
        Spine n = decompose(s.args[1]);
        if (is_const(n.head, ConstTag::Append) && n.args.size() == 2) {
          TermPtr restUnion = t_apps(t_const(ConstTag::Bigcup), {s.args[0], n.args[0]});
          TermPtr last = t_app(s.args[0], n.args[1]);
          return recompose(t_apps(t_const(ConstTag::Cup), {restUnion, last}), s.args, 2);
        }
        return std::nullopt;
      }
      case ConstTag::Cup: {
        if (!have(2)) return std::nullopt;
        s.args[0] = norm(s.args[0]);
        s.args[1] = norm(s.args[1]);
        auto a = term_literal(s.args[0]);
        auto b = term_literal(s.args[1]);
        if (!a || !b) return std::nullopt;
        std::vector<ValuePtr> both = (*a)->items;
        both.insert(both.end(), (*b)->items.begin(), (*b)->items.end());
        ValuePtr u = value_as_set(mk_items((*a)->type ? (*a)->type : (*b)->type, both));
        return recompose(literal_term(u), s.args, 2);
      }
      case ConstTag::Max: {
        if (!have(2)) return std::nullopt;
        s.args[0] = norm(s.args[0]);
        s.args[1] = norm(s.args[1]);
        auto a = term_literal(s.args[0]);
        auto b = term_literal(s.args[1]);
        if (!a || !b) return std::nullopt;
        ValuePtr m = literal_max(*a, *b);
        if (!m) return std::nullopt;
        return recompose(literal_term(m), s.args, 2);
      }
      default: return std::nullopt;
    }
  }
};

} // namespace

TermPtr normalize(const TermPtr& t, long fuel) {
  Normalizer n{fuel, false};
  return n.norm(t);
}

TermPtr normalize_alt(const TermPtr& t, long fuel) {
  Normalizer n{fuel, true};
  return n.norm(t);
}

bool definitionally_equal(const TermPtr& a, const TermPtr& b, long fuel) {
  return alpha_equal(normalize(a, fuel), normalize(b, fuel));
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

int const_arity(ConstTag tag) {
  switch (tag) {
    case ConstTag::Zero:
    case ConstTag::TT:
    case ConstTag::FF:
    case ConstTag::Nil: return 0;
    case ConstTag::Suc:
    case ConstTag::Sing:
    case ConstTag::Len: return 1;
    case ConstTag::K:
    case ConstTag::Ap:
    case ConstTag::Cup:
    case ConstTag::Bigcup:
    case ConstTag::Max:
    case ConstTag::Append:
    case ConstTag::Idx: return 2;
    case ConstTag::S:
    case ConstTag::Rec:
    case ConstTag::If:
    case ConstTag::L: return 3;
  }
  return 0;
}

struct Evaluator {
  const SemContext& cx;
  long fuel;

  void step() {
    if (--fuel < 0) throw FintError(ErrorKind::Fuel, "evaluation ran out of fuel");
  }

  [[noreturn]] void type_err(const std::string& m) { throw FintError(ErrorKind::Type, m); }

  ValuePtr eval(const TermPtr& t, const EvalEnv& env) {
    step();
    switch (t->kind) {
      case Term::Kind::Var: {
        auto it = env.find(t->name);
        if (it == env.end()) type_err("variable '" + t->name + "' has no value");
        return it->second;
      }
      case Term::Kind::Const: return const_value(t->tag, t->constType);
      case Term::Kind::Lambda: return tabulate_lambda(t, env);
      case Term::Kind::App: {
        Spine s = decompose(t);
        std::vector<ValuePtr> vals;
        vals.reserve(s.args.size());
        for (const auto& a : s.args) vals.push_back(eval(a, env));
        return apply_head(s.head, vals, env);
      }
    }
    type_err("malformed term");
  }

  ValuePtr tabulate_lambda(const TermPtr& lam, const EvalEnv& env) {
    if (!lam->varType)
      type_err("binder '" + lam->var + "' needs a type annotation for evaluation");
    std::vector<ValuePtr> dvals = cx.dom.carrier(lam->varType);
    std::vector<ValuePtr> tab;
    tab.reserve(dvals.size());
    TypePtr codT;
    EvalEnv inner = env;
    for (const auto& v : dvals) {
      inner[lam->var] = v;
      try {
        ValuePtr r = eval(lam->body, inner);
        if (!codT && r) codT = r->type;
        tab.push_back(r);
      } catch (const OutOfDomain&) {
        tab.push_back(nullptr);
      }
    }
    if (!codT) throw OutOfDomain{"function undefined on the whole domain"};
    return mk_items(ty_arrow(lam->varType, codT), std::move(tab));
  }

  ValuePtr apply_head(const TermPtr& head, std::vector<ValuePtr>& vals, const EvalEnv& env) {
    switch (head->kind) {
      case Term::Kind::Var:
      case Term::Kind::Const: {
        ValuePtr r;
        std::size_t used = 0;
        if (head->kind == Term::Kind::Var) {
          auto it = env.find(head->name);
          if (it == env.end()) type_err("variable '" + head->name + "' has no value");
          r = it->second;
        } else {
          int arity = const_arity(head->tag);
          if (static_cast<int>(vals.size()) >= arity && arity > 0) {
            r = const_apply(head->tag, vals);
            used = static_cast<std::size_t>(arity);
          } else {
            r = const_value(head->tag, head->constType);
          }
        }
        for (std::size_t i = used; i < vals.size(); ++i) r = apply_value(cx.dom, r, vals[i]);
        return r;
      }
      case Term::Kind::Lambda: {
        EvalEnv inner = env;
        TermPtr cur = head;
        std::size_t i = 0;
        while (cur->kind == Term::Kind::Lambda && i < vals.size()) {
          inner[cur->var] = vals[i++];
          cur = cur->body;
        }
        ValuePtr r = eval(cur, inner);
        for (; i < vals.size(); ++i) r = apply_value(cx.dom, r, vals[i]);
        return r;
      }
      default: type_err("malformed application head");
    }
  }

  ValuePtr nat(long long n) {
    if (n > cx.dom.bound) throw OutOfDomain{"number beyond the domain bound"};
    return mk_scalar(ty_nat(), n);
  }

  ValuePtr const_apply(ConstTag tag, const std::vector<ValuePtr>& v) {
    switch (tag) {
      case ConstTag::Suc: return nat(v[0]->num + 1);
      case ConstTag::K: return v[0];
      case ConstTag::S: {
        ValuePtr fx = apply_value(cx.dom, v[0], v[2]);
        ValuePtr gx = apply_value(cx.dom, v[1], v[2]);
        return apply_value(cx.dom, fx, gx);
      }
      case ConstTag::If: return v[0]->num ? v[1] : v[2];
      case ConstTag::Rec: {
        ValuePtr acc = v[1];
        for (long long k = 0; k < v[0]->num; ++k) {
          step();
          acc = apply_value(cx.dom, apply_value(cx.dom, v[2], mk_scalar(ty_nat(), k)), acc);
        }
        return acc;
      }
      case ConstTag::Ap: return apply_value(cx.dom, v[0], v[1]);
      case ConstTag::L: {
        ValuePtr acc = v[2];
        for (const auto& x : v[0]->items) {
          step();
          acc = apply_value(cx.dom, apply_value(cx.dom, v[1], acc), x);
        }
        return acc;
      }
      case ConstTag::Sing:
        return value_as_set(mk_items(ty_star(v[0]->type), {v[0]}));
      case ConstTag::Cup: {
        std::vector<ValuePtr> both = v[0]->items;
        both.insert(both.end(), v[1]->items.begin(), v[1]->items.end());
        ValuePtr u = value_as_set(mk_items(v[0]->type ? v[0]->type : v[1]->type, both));
        if (static_cast<int>(u->items.size()) > cx.dom.bound)
          throw OutOfDomain{"set union exceeds the length bound"};
        return u;
      }
      case ConstTag::Bigcup: {
        std::vector<ValuePtr> all;
        TypePtr outT;
        for (const auto& x : v[1]->items) {
          step();
          ValuePtr part = apply_value(cx.dom, v[0], x);
          if (!outT) outT = part->type;
          all.insert(all.end(), part->items.begin(), part->items.end());
        }
        if (!outT) {
          // empty union: result type is the codomain of the function value
          outT = v[0]->type && v[0]->type->kind == FiniteType::Kind::Arrow ? v[0]->type->cod
                                                                           : nullptr;
          if (!outT) throw OutOfDomain{"empty union with unknown element type"};
        }
        ValuePtr u = value_as_set(mk_items(outT, all));
        if (static_cast<int>(u->items.size()) > cx.dom.bound)
          throw OutOfDomain{"set union exceeds the length bound"};
        return u;
      }
      case ConstTag::Max: return value_max(cx.dom, v[0], v[1]);
      case ConstTag::Append: {
        if (static_cast<int>(v[0]->items.size()) >= cx.dom.bound + 0 &&
            static_cast<int>(v[0]->items.size()) + 1 > cx.dom.bound)
          throw OutOfDomain{"sequence exceeds the length bound"};
        std::vector<ValuePtr> items = v[0]->items;
        items.push_back(v[1]);
        TypePtr ty = v[0]->type ? v[0]->type : ty_star(v[1]->type);
        return mk_items(ty, std::move(items));
      }
      case ConstTag::Len: return mk_scalar(ty_nat(), static_cast<long long>(v[0]->items.size()));
      case ConstTag::Idx: {
        long long i = v[1]->num;
        if (i < 0 || i >= static_cast<long long>(v[0]->items.size()))
          throw OutOfDomain{"sequence index out of range"};
        return v[0]->items[static_cast<std::size_t>(i)];
      }
      default: type_err("constant applied incorrectly");
    }
  }

  // A constant as a standalone value: monomorphic ones directly, schematic
  // ones tabulated from their concrete annotation.
  ValuePtr const_value(ConstTag tag, const TypePtr& annot) {
    switch (tag) {
      case ConstTag::Zero: return mk_scalar(ty_nat(), 0);
      case ConstTag::TT: return mk_scalar(ty_bool(), 1);
      case ConstTag::FF: return mk_scalar(ty_bool(), 0);
      case ConstTag::Nil: {
        if (!annot || annot->kind != FiniteType::Kind::Star)
          type_err("nil needs a concrete sequence type for evaluation");
        return mk_items(annot, {});
      }
      case ConstTag::Suc: return tabulate_const(tag, ty_arrow(ty_nat(), ty_nat()), {});
      default: {
        if (!annot)
          type_err(std::string("constant '") + const_name(tag) +
                   "' needs a concrete type for evaluation");
        return tabulate_const(tag, annot, {});
      }
    }
  }

  ValuePtr tabulate_const(ConstTag tag, const TypePtr& ty, std::vector<ValuePtr> given) {
    if (static_cast<int>(given.size()) == const_arity(tag)) return const_apply(tag, given);
    if (ty->kind != FiniteType::Kind::Arrow)
      type_err(std::string("constant '") + const_name(tag) + "' has a non-arrow annotation");
    std::vector<ValuePtr> dvals = cx.dom.carrier(ty->dom);
    std::vector<ValuePtr> tab;
    tab.reserve(dvals.size());
    TypePtr codSeen;
    for (const auto& v : dvals) {
      std::vector<ValuePtr> next = given;
      next.push_back(v);
      try {
        ValuePtr r = tabulate_const(tag, ty->cod, std::move(next));
        if (!codSeen && r) codSeen = r->type;
        tab.push_back(r);
      } catch (const OutOfDomain&) {
        tab.push_back(nullptr);
      }
    }
    return mk_items(ty, std::move(tab));
  }
};

// FNV-1a over the predicate name and argument ranks; stable across runs.
std::uint64_t fnv(std::uint64_t h, const void* data, std::size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace

bool SemContext::named_truth(const std::string& name, const std::vector<ValuePtr>& args) const {
  std::uint64_t h = 14695981039346656037ULL ^ (seed * 1099511628211ULL);
  h = fnv(h, name.data(), name.size());
  for (const auto& a : args) {
    long long ix = dom.index_of(a);
    h = fnv(h, &ix, sizeof ix);
  }
  return (h >> 32) & 1;
}

ValuePtr eval_term(const SemContext& cx, const TermPtr& t, const EvalEnv& env) {
  Evaluator ev{cx, cx.fuel};
  return ev.eval(t, env);
}

// ---------------------------------------------------------------------------
// Formula evaluation
// ---------------------------------------------------------------------------

namespace {

struct FormulaEval {
  const SemContext& cx;
  EvalStats* stats;

  ValuePtr term(const TermPtr& t, const EvalEnv& env) {
    Evaluator ev{cx, cx.fuel};
    return ev.eval(t, env);
  }

  bool atom(const FormulaPtr& f, const EvalEnv& env) {
    switch (f->pred.kind) {
      case PredId::Kind::Named: {
        if (!cx.namedSemantics)
          throw FintError(ErrorKind::Unsupported,
                          "atom '" + f->pred.name + "' has no semantics");
        std::vector<ValuePtr> args;
        for (const auto& a : f->args) args.push_back(term(a, env));
        return cx.named_truth(f->pred.name, args);
      }
      case PredId::Kind::Typing: {
        ValuePtr v = term(f->args[0], env);
        return v->type && type_equal(v->type, f->pred.type);
      }
      case PredId::Kind::Eq:
        return value_equal(term(f->args[0], env), term(f->args[1], env));
      case PredId::Kind::Le: {
        ValuePtr l = term(f->args[0], env);
        ValuePtr r = term(f->args[1], env);
        return l->num <= r->num;
      }
      case PredId::Kind::LeqStar:
        return value_leqstar(cx.dom, term(f->args[0], env), term(f->args[1], env));
      case PredId::Kind::Elem:
        return value_elem(term(f->args[0], env), term(f->args[1], env));
    }
    return false;
  }

  // Domain of an unannotated quantifier read off a relativizing guard in its
  // body: forall z (G -> A) / exists z (G and A), G possibly banged.
  std::vector<ValuePtr> guarded_domain(const FormulaPtr& q, const EvalEnv& env) {
    const FormulaPtr& b = q->body;
    FormulaPtr g;
    if (q->kind == Formula::Kind::Forall && b->kind == Formula::Kind::Impl) g = b->left;
    if (q->kind == Formula::Kind::Exists && b->kind == Formula::Kind::Conj) g = b->left;
    while (g && g->kind == Formula::Kind::Bang) g = g->body;
    if (g && g->kind == Formula::Kind::Atom) {
      const std::string& z = q->var;
      auto is_z = [&](const TermPtr& t) {
        return t->kind == Term::Kind::Var && t->name == z;
      };
      switch (g->pred.kind) {
        case PredId::Kind::Typing:
          if (is_z(g->args[0])) return cx.dom.carrier(g->pred.type);
          break;
        case PredId::Kind::Eq: {
          TermPtr other;
          if (is_z(g->args[0]) && !occurs_free(g->args[1], z)) other = g->args[1];
          else if (is_z(g->args[1]) && !occurs_free(g->args[0], z)) other = g->args[0];
          if (other) return {term(other, env)};
          break;
        }
        case PredId::Kind::Le:
          if (is_z(g->args[0]) && !occurs_free(g->args[1], z)) {
            long long n = term(g->args[1], env)->num;
            std::vector<ValuePtr> out;
            for (long long i = 0; i <= n; ++i) out.push_back(mk_scalar(ty_nat(), i));
            return out;
          }
          break;
        case PredId::Kind::LeqStar:
          if (is_z(g->args[0]) && !occurs_free(g->args[1], z)) {
            ValuePtr bd = term(g->args[1], env);
            std::vector<ValuePtr> out;
            for (const auto& v : cx.dom.carrier(bd->type))
              if (value_leqstar(cx.dom, v, bd)) out.push_back(v);
            return out;
          }
          break;
        case PredId::Kind::Elem:
          if (is_z(g->args[0]) && !occurs_free(g->args[1], z))
            return term(g->args[1], env)->items;
          break;
        default: break;
      }
    }
    throw FintError(ErrorKind::Domain,
                    "cannot determine a finite domain for quantified variable '" + q->var +
                        "'; annotate it or relativize it with a typing guard");
  }

  bool quantifier(const FormulaPtr& f, const EvalEnv& env) {
    bool universal = f->kind == Formula::Kind::Forall;
    std::vector<ValuePtr> dvals =
        f->varType ? cx.dom.carrier(f->varType) : guarded_domain(f, env);
    EvalEnv inner = env;
    for (const auto& v : dvals) {
      inner[f->var] = v;
      try {
        bool r = go(f->body, inner);
        if (universal && !r) return false;
        if (!universal && r) return true;
      } catch (const OutOfDomain&) {
        if (stats) ++stats->skipped;
      }
    }
    return universal;
  }

  bool bounded_block(const FormulaPtr& f, const EvalEnv& env) {
    // collect per-variable candidate lists, then check the body for every
    // assignment (bounded blocks are universal)
    std::size_t n = f->bqVars.size();
    std::vector<std::vector<ValuePtr>> doms(n);
    for (std::size_t i = 0; i < n; ++i) {
      switch (f->bqGuard) {
        case BqGuard::Elem: doms[i] = term(f->bqBounds[i], env)->items; break;
        case BqGuard::LeqStar: {
          ValuePtr bd = term(f->bqBounds[i], env);
          for (const auto& v : cx.dom.carrier(f->bqTypes[i]))
            if (value_leqstar(cx.dom, v, bd)) doms[i].push_back(v);
          break;
        }
        case BqGuard::None: doms[i] = cx.dom.carrier(f->bqTypes[i]); break;
      }
      if (f->bqMonotone) {
        std::vector<ValuePtr> kept;
        for (const auto& v : doms[i])
          if (value_leqstar(cx.dom, v, v)) kept.push_back(v);
        doms[i] = std::move(kept);
      }
    }
    EvalEnv inner = env;
    std::vector<std::size_t> ix(n, 0);
    for (;;) {
      bool any = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (doms[i].empty()) { any = false; break; }
        inner[f->bqVars[i]] = doms[i][ix[i]];
      }
      if (any) {
        try {
          if (!go(f->body, inner)) return false;
        } catch (const OutOfDomain&) {
          if (stats) ++stats->skipped;
        }
      } else {
        return true; // some variable has an empty range: vacuously true
      }
      std::size_t i = n;
      for (;;) {
        if (i == 0) return true;
        --i;
        if (++ix[i] < doms[i].size()) break;
        ix[i] = 0;
      }
    }
  }

  bool go(const FormulaPtr& f, const EvalEnv& env) {
    switch (f->kind) {
      case Formula::Kind::Atom: return atom(f, env);
      case Formula::Kind::Bottom: return false;
      case Formula::Kind::Conj:
      case Formula::Kind::With: return go(f->left, env) && go(f->right, env);
      case Formula::Kind::Or:
      case Formula::Kind::Oplus: return go(f->left, env) || go(f->right, env);
      case Formula::Kind::Impl: return !go(f->left, env) || go(f->right, env);
      case Formula::Kind::Bang: return go(f->body, env);
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: return quantifier(f, env);
      case Formula::Kind::BQ: return bounded_block(f, env);
    }
    return false;
  }
};

} // namespace

bool eval_formula(const SemContext& cx, const FormulaPtr& f, const EvalEnv& env,
                  EvalStats* stats) {
  FormulaEval fe{cx, stats};
  try {
    return fe.go(f, env);
  } catch (const OutOfDomain& o) {
    throw FintError(ErrorKind::Domain, "formula evaluation left the finite domain: " + o.what);
  }
}

// ---------------------------------------------------------------------------
// Characteristic terms
// ---------------------------------------------------------------------------

namespace {

// Small library of closed boolean-valued combinator terms.
TermPtr chi_if(const TermPtr& c, const TermPtr& a, const TermPtr& b) {
  return t_apps(t_const(ConstTag::If), {c, a, b});
}

TermPtr chi_and(const TermPtr& a, const TermPtr& b) { return chi_if(a, b, t_const(ConstTag::FF)); }
TermPtr chi_or(const TermPtr& a, const TermPtr& b) { return chi_if(a, t_const(ConstTag::TT), b); }
TermPtr chi_impl(const TermPtr& a, const TermPtr& b) { return chi_if(a, b, t_const(ConstTag::TT)); }
TermPtr chi_not(const TermPtr& a) {
  return chi_if(a, t_const(ConstTag::FF), t_const(ConstTag::TT));
}

// predecessor: \n. Rec n 0 (\k v. k)
TermPtr chi_pred() {
  return t_lam("n", ty_nat(),
               t_apps(t_const(ConstTag::Rec),
                      {t_var("n"), t_const(ConstTag::Zero),
                       t_lam("k", ty_nat(), t_lam("v", ty_nat(), t_var("k")))}));
}

// truncated subtraction a - b: \a b. Rec b a (\k v. pred v)
TermPtr chi_sub(const TermPtr& a, const TermPtr& b) {
  return t_apps(t_const(ConstTag::Rec),
                {b, a, t_lam("k", ty_nat(), t_lam("v", ty_nat(), t_app(chi_pred(), t_var("v"))))});
}

// is-zero: Rec n T (\k v. F)
TermPtr chi_iszero(const TermPtr& n) {
  return t_apps(t_const(ConstTag::Rec),
                {n, t_const(ConstTag::TT),
                 t_lam("k", ty_nat(), t_lam("v", ty_bool(), t_const(ConstTag::FF)))});
}

TermPtr chi_len(const TermPtr& a, const TermPtr& b) { return chi_iszero(chi_sub(a, b)); }

TermPtr chi_eqn(const TermPtr& a, const TermPtr& b) {
  return chi_and(chi_len(a, b), chi_len(b, a));
}

TermPtr chi_eqb(const TermPtr& a, const TermPtr& b) { return chi_if(a, b, chi_not(b)); }

[[noreturn]] void chi_unsupported(const std::string& what) {
  throw FintError(ErrorKind::Unsupported,
                  "no characteristic term: " + what);
}

TermPtr chi(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      switch (f->pred.kind) {
        case PredId::Kind::Typing: return t_const(ConstTag::TT);
        case PredId::Kind::Eq: {
          if (!f->pred.type) chi_unsupported("equation with unresolved type");
          if (f->pred.type->kind == FiniteType::Kind::Nat)
            return chi_eqn(f->args[0], f->args[1]);
          if (f->pred.type->kind == FiniteType::Kind::Bool)
            return chi_eqb(f->args[0], f->args[1]);
          chi_unsupported("equation at type " + print_type(f->pred.type));
        }
        case PredId::Kind::Le: {
          if (f->pred.type && f->pred.type->kind == FiniteType::Kind::Bool)
            return chi_impl(f->args[0], f->args[1]);
          return chi_len(f->args[0], f->args[1]);
        }
        default: chi_unsupported("atom " + print_formula(f));
      }
    }
    case Formula::Kind::Bottom: return t_const(ConstTag::FF);
    case Formula::Kind::Conj:
    case Formula::Kind::With: return chi_and(chi(f->left), chi(f->right));
    case Formula::Kind::Or:
    case Formula::Kind::Oplus: return chi_or(chi(f->left), chi(f->right));
    case Formula::Kind::Impl: return chi_impl(chi(f->left), chi(f->right));
    case Formula::Kind::Bang: return chi(f->body);
    default: chi_unsupported("quantified formula");
  }
}

} // namespace

TermPtr characteristic_term(const FormulaPtr& f) { return chi(f); }

} // namespace fint
