#include "ego/evaluator.hpp"

#include <algorithm>

namespace ego {

namespace {

const EFormula& singleton_atom() {
  static const EFormula f = normalize(Assembly::branch({Assembly::leaf()}));
  return f;
}

}  // namespace

EFormula container(const EFormula& x) {
  if (!x.is_leaf()) return x;
  return singleton_atom();
}

namespace {

// Emits every surjection from `from` onto `onto` as index maps.
void surjections(std::size_t from, std::size_t onto,
                 std::vector<std::vector<std::size_t>>& out,
                 std::vector<std::size_t>& acc, std::size_t limit, bool exact,
                 bool& truncated) {
  if (acc.size() == from) {
    std::vector<bool> hit(onto, false);
    for (std::size_t v : acc) hit[v] = true;
    if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) {
      if (out.size() >= limit) {
        if (exact) throw resource_error("pairing enumeration exceeds limit");
        truncated = true;
        return;
      }
      out.push_back(acc);
    }
    return;
  }
  for (std::size_t v = 0; v < onto && !truncated; ++v) {
    acc.push_back(v);
    surjections(from, onto, out, acc, limit, exact, truncated);
    acc.pop_back();
  }
}

}  // namespace

PairingEnumeration enumerate_pairings(const EFormula& x, const EFormula& y,
                                      std::size_t limit, bool exact) {
  if (limit == 0) throw domain_error("pairing limit must be positive");
  const std::vector<EFormula> cx = container(x).members();
  const std::vector<EFormula> cy = container(y).members();

  PairingEnumeration result;
  const bool forward = cx.size() >= cy.size();
  const auto& from = forward ? cx : cy;
  const auto& onto = forward ? cy : cx;

  std::vector<std::vector<std::size_t>> maps;
  std::vector<std::size_t> acc;
  bool truncated = false;
  surjections(from.size(), onto.size(), maps, acc, limit, exact, truncated);
  result.truncated = truncated;

  for (const auto& m : maps) {
    Pairing p;
    p.direction = forward ? Pairing::Direction::XtoY : Pairing::Direction::YtoX;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (forward)
        p.pairs.emplace_back(cx[i], cy[m[i]]);
      else
        p.pairs.emplace_back(cx[m[i]], cy[i]);  // Cont(x) member stays first
    }
    result.pairings.push_back(std::move(p));
  }
  return result;
}

namespace {

EFormula conjunction(const std::vector<EFormula>& terms) {
  return desugar(Connective::And, terms);
}

// F^(X=Y) over one pairing: a single recursive equality for a lone pair,
// otherwise the conjunction of the member equalities.
EFormula pairing_formula(const Pairing& p, std::size_t limit);

EFormula evaluator_impl(const EFormula& x, const EFormula& y, std::size_t limit) {
  const EFormula cx = container(x);
  const EFormula cy = container(y);
  const bool cx_trivial = cx == singleton_atom();
  const bool cy_trivial = cy == singleton_atom();

  if (cx_trivial && cy_trivial)
    return desugar(Connective::Equiv, {x, y});

  EFormula equiv = desugar(Connective::Equiv, {x, y});
  PairingEnumeration pairings = enumerate_pairings(x, y, limit, /*exact=*/true);

  if (cx_trivial || cy_trivial) {
    // Exactly one pairing exists: everything maps to the single member.
    return conjunction({equiv, pairing_formula(pairings.pairings.at(0), limit)});
  }

  std::vector<EFormula> alternatives;
  alternatives.reserve(pairings.pairings.size());
  for (const Pairing& p : pairings.pairings)
    alternatives.push_back(pairing_formula(p, limit));
  return conjunction({equiv, desugar(Connective::Or, alternatives)});
}

EFormula pairing_formula(const Pairing& p, std::size_t limit) {
  if (p.pairs.size() == 1)
    return evaluator_impl(p.pairs[0].first, p.pairs[0].second, limit);
  std::vector<EFormula> terms;
  terms.reserve(p.pairs.size());
  for (const auto& [w, z] : p.pairs) terms.push_back(evaluator_impl(w, z, limit));
  return conjunction(terms);
}

}  // namespace

EFormula equality_evaluator(const EFormula& x, const EFormula& y,
                            std::size_t pairing_limit) {
  return evaluator_impl(x, y, pairing_limit);
}

bool check_self_reference(const EFormula& x, const EFormula& y,
                          std::size_t pairing_limit) {
  SentenceClass cls = classify(equality_evaluator(x, y, pairing_limit));
  bool equal = x == y;  // canonical forms: structural equality is set equality
  if (equal) return cls == SentenceClass::Tautology;
  return cls == SentenceClass::Contradiction;
}

namespace {

// {X≡Y} desugars to {{{X,{Y}},{Y,{X}}}}; invert that shape.
std::optional<std::pair<EFormula, EFormula>> decode_equiv(const EFormula& f) {
  if (f.member_count() != 1) return std::nullopt;
  EFormula body = f.member(0);
  auto try_sides = [](const EFormula& lhs, const EFormula& rhs)
      -> std::optional<std::pair<EFormula, EFormula>> {
    // lhs = {X,{Y}}, rhs = {Y,{X}}
    if (lhs.member_count() > 2 || rhs.member_count() > 2) return std::nullopt;
    auto lm = lhs.members();
    for (const EFormula& x : lm) {
      for (const EFormula& wrapped_y : lm) {
        if (wrapped_y.member_count() != 1) continue;
        EFormula y = wrapped_y.member(0);
        if (!(lhs == desugar(Connective::Implies, {x, y}))) continue;
        if (rhs == desugar(Connective::Implies, {y, x}))
          return std::make_pair(x, y);
      }
    }
    return std::nullopt;
  };
  if (body.member_count() == 1) {
    // x = y collapsed both implications into one
    if (auto xy = try_sides(body.member(0), body.member(0))) return xy;
    return std::nullopt;
  }
  if (body.member_count() != 2) return std::nullopt;
  if (auto xy = try_sides(body.member(0), body.member(1))) return xy;
  return try_sides(body.member(1), body.member(0));
}

}  // namespace

std::pair<EFormula, EFormula> recover_arguments(const EFormula& evaluator) {
  // A candidate pair is accepted only if rebuilding the evaluator from it
  // reproduces the input; the recursive F-part can itself be
  // equivalence-shaped, so the raw decode alone is ambiguous.
  auto confirmed = [&](const std::pair<EFormula, EFormula>& xy) {
    return equality_evaluator(xy.first, xy.second) == evaluator;
  };
  // Case (a): the evaluator is the equivalence itself.
  if (auto xy = decode_equiv(evaluator); xy && confirmed(*xy)) return *xy;
  // Cases (b)/(c): {{ {X≡Y}, R }} — scan the conjunction for the equivalence.
  if (evaluator.member_count() == 1) {
    EFormula conj = evaluator.member(0);
    for (const EFormula& m : conj.members())
      if (auto xy = decode_equiv(m); xy && confirmed(*xy)) return *xy;
  }
  throw domain_error("no embedded equivalence conjunct found");
}

EFormula membership_evaluator(const EFormula& x, const EFormula& y,
                              std::size_t pairing_limit) {
  if (y.is_leaf()) throw domain_error("membership evaluator requires members in y");
  std::vector<EFormula> terms;
  for (const EFormula& yj : y.members())
    terms.push_back(equality_evaluator(x, yj, pairing_limit));
  if (terms.size() == 1) return terms[0];
  return desugar(Connective::Or, terms);
}

EFormula subset_evaluator(const EFormula& x, const EFormula& y,
                          std::size_t pairing_limit) {
  if (x.is_leaf() || y.is_leaf())
    throw domain_error("subset evaluator requires non-empty arguments");
  std::vector<EFormula> terms;
  for (const EFormula& xi : x.members())
    terms.push_back(membership_evaluator(xi, y, pairing_limit));
  return desugar(Connective::And, terms);
}

namespace {

EFormula members_to_formula(std::vector<EFormula> members) {
  if (members.empty()) return EFormula();  // 0: the unique empty set
  std::vector<Assembly> trees;
  trees.reserve(members.size());
  for (const EFormula& m : members) trees.push_back(m.tree());
  return normalize(Assembly::branch(std::move(trees)));
}

}  // namespace

SetOpResult intersection(const EFormula& x, const EFormula& y, bool verify) {
  if (x.is_leaf() || y.is_leaf())
    throw domain_error("intersection requires non-empty arguments");
  std::vector<EFormula> common;
  for (const EFormula& xi : x.members())
    if (is_member(xi.tree(), y.tree())) common.push_back(xi);
  SetOpResult result;
  result.disjoint = common.empty();
  result.value = members_to_formula(std::move(common));
  if (verify && !result.disjoint) {
    std::vector<EFormula> terms;
    for (const EFormula& xi : x.members())
      terms.push_back(desugar(Connective::Equiv,
                              {membership_evaluator(xi, result.value),
                               membership_evaluator(xi, y)}));
    result.verification = desugar(Connective::And, terms);
  }
  return result;
}

SetOpResult set_union(const EFormula& x, const EFormula& y, bool verify) {
  if (x.is_leaf() || y.is_leaf())
    throw domain_error("union requires non-empty arguments");
  std::vector<EFormula> all = x.members();
  for (const EFormula& yj : y.members()) all.push_back(yj);
  SetOpResult result;
  result.value = members_to_formula(std::move(all));
  if (verify) {
    std::vector<EFormula> terms;
    for (const EFormula& xi : x.members())
      terms.push_back(membership_evaluator(xi, result.value));
    for (const EFormula& yj : y.members())
      terms.push_back(membership_evaluator(yj, result.value));
    result.verification = desugar(Connective::And, terms);
  }
  return result;
}

}  // namespace ego
