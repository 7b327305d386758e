#include "core/syntax.hpp"

namespace fint {

// N and B are shared singletons; arrows and stars are small enough that
// interning buys nothing.
TypePtr ty_nat() {
  static TypePtr t = std::make_shared<FiniteType>(FiniteType{FiniteType::Kind::Nat, nullptr, nullptr, nullptr});
  return t;
}

TypePtr ty_bool() {
  static TypePtr t = std::make_shared<FiniteType>(FiniteType{FiniteType::Kind::Bool, nullptr, nullptr, nullptr});
  return t;
}

TypePtr ty_arrow(TypePtr dom, TypePtr cod) {
  return std::make_shared<FiniteType>(FiniteType{FiniteType::Kind::Arrow, std::move(dom), std::move(cod), nullptr});
}

TypePtr ty_arrows(const std::vector<TypePtr>& doms, TypePtr cod) {
  TypePtr out = std::move(cod);
  for (auto it = doms.rbegin(); it != doms.rend(); ++it) out = ty_arrow(*it, out);
  return out;
}

TypePtr ty_star(TypePtr elem) {
  return std::make_shared<FiniteType>(FiniteType{FiniteType::Kind::Star, nullptr, nullptr, std::move(elem)});
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FiniteType::Kind::Nat:
    case FiniteType::Kind::Bool: return true;
    case FiniteType::Kind::Arrow: return type_equal(a->dom, b->dom) && type_equal(a->cod, b->cod);
    case FiniteType::Kind::Star: return type_equal(a->elem, b->elem);
    case FiniteType::Kind::Meta: return a->metaId == b->metaId;
  }
  return false;
}

bool type_equal(const std::vector<TypePtr>& a, const std::vector<TypePtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!type_equal(a[i], b[i])) return false;
  return true;
}

} // namespace fint
