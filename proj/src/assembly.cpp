#include "ego/assembly.hpp"

#include <algorithm>
#include <cctype>

namespace ego {

Assembly Assembly::leaf() { return Assembly(); }

const std::vector<Assembly>& Assembly::children() const {
  static const std::vector<Assembly> none;
  return node_ ? node_->children : none;
}

Assembly Assembly::branch(std::vector<Assembly> children) {
  if (children.empty()) throw domain_error("branch requires at least one member");
  auto node = std::make_shared<Node>();
  node->height = 0;
  node->count = 1;
  std::size_t text_size = 2;
  for (const Assembly& c : children) {
    node->count += c.node_count();
    node->height = std::max(node->height, c.height() + 1);
    text_size += c.text().size() + 1;
  }
  node->text.reserve(text_size);
  node->text += '{';
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) node->text += ',';
    node->text += children[i].text();
  }
  node->text += '}';
  node->children = std::move(children);
  return Assembly(std::move(node));
}

const std::string& Assembly::text() const {
  static const std::string atom = "0";
  return node_ ? node_->text : atom;
}

std::string to_string(TruthValue v) { return v == TruthValue::T ? "T" : "F"; }

std::string to_string(SentenceClass c) {
  switch (c) {
    case SentenceClass::Tautology: return "tautology";
    case SentenceClass::Contradiction: return "contradiction";
    case SentenceClass::Contingent: return "contingent";
  }
  return "?";
}

EFormula::EFormula() : tree_(Assembly::leaf()) {}

EFormula EFormula::member(std::size_t i) const {
  return EFormula(tree_.children().at(i));
}

std::vector<EFormula> EFormula::members() const {
  std::vector<EFormula> out;
  out.reserve(member_count());
  for (const Assembly& c : tree_.children()) out.push_back(EFormula(c));
  return out;
}

std::string EFormula::render() const { return ego::render(tree_); }

// Canonical forms are textually unique, so order and equality reduce to the
// cached (node count, text) key.
bool operator==(const EFormula& a, const EFormula& b) {
  return a.tree().node_count() == b.tree().node_count() &&
         a.tree().text() == b.tree().text();
}

bool operator<(const EFormula& a, const EFormula& b) {
  if (a.tree().node_count() != b.tree().node_count())
    return a.tree().node_count() < b.tree().node_count();
  return a.tree().text() < b.tree().text();
}

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  const Limits& limits;

  void skip_ws() {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r'))
      ++pos;
  }

  Assembly formula(std::size_t depth) {
    if (depth > limits.max_depth)
      throw resource_error("formula exceeds depth limit " + std::to_string(limits.max_depth));
    skip_ws();
    if (pos >= text.size()) throw parse_error("unexpected end of input", pos);
    char c = text[pos];
    if (c == '0') {
      ++pos;
      return Assembly::leaf();
    }
    if (c != '{') throw parse_error(std::string("unexpected character '") + c + "'", pos);
    ++pos;
    skip_ws();
    if (pos < text.size() && text[pos] == '}')
      throw parse_error("empty braces", pos);
    if (pos < text.size() && text[pos] == ',')
      throw parse_error("stray comma", pos);
    std::vector<Assembly> children;
    children.push_back(formula(depth + 1));
    skip_ws();
    while (pos < text.size() && text[pos] == ',') {
      ++pos;
      skip_ws();
      if (pos < text.size() && (text[pos] == ',' || text[pos] == '}'))
        throw parse_error("stray comma", pos);
      children.push_back(formula(depth + 1));
      if (children.size() > limits.max_width)
        throw resource_error("formula exceeds width limit " + std::to_string(limits.max_width));
      skip_ws();
    }
    if (pos >= text.size() || text[pos] != '}')
      throw parse_error("unbalanced braces", pos);
    ++pos;
    return Assembly::branch(std::move(children));
  }
};

}  // namespace

Assembly parse(std::string_view text, const Limits& limits) {
  Parser p{text, 0, limits};
  Assembly a = p.formula(0);
  p.skip_ws();
  if (p.pos != text.size())
    throw parse_error("trailing input after formula", p.pos);
  return a;
}

std::string render(const Assembly& a) { return a.text(); }

bool set_equal(const Assembly& x, const Assembly& y) {
  if (x.is_leaf() && y.is_leaf()) return true;
  if (x.is_leaf() || y.is_leaf()) return false;
  for (const Assembly& xi : x.children()) {
    bool found = false;
    for (const Assembly& yj : y.children())
      if (set_equal(xi, yj)) { found = true; break; }
    if (!found) return false;
  }
  for (const Assembly& yj : y.children()) {
    bool found = false;
    for (const Assembly& xi : x.children())
      if (set_equal(yj, xi)) { found = true; break; }
    if (!found) return false;
  }
  return true;
}

bool is_member(const Assembly& x, const Assembly& y) {
  for (const Assembly& yj : y.children())
    if (set_equal(x, yj)) return true;
  return false;
}

namespace {

// Bottom-up: canonicalize children, sort by (count, text), drop duplicates.
Assembly normalize_impl(const Assembly& a) {
  if (a.is_leaf()) return a;
  std::vector<Assembly> kids;
  kids.reserve(a.children().size());
  bool changed = false;
  for (const Assembly& c : a.children()) {
    kids.push_back(normalize_impl(c));
    changed |= kids.back().text() != c.text();
  }
  std::sort(kids.begin(), kids.end(), [](const Assembly& l, const Assembly& r) {
    if (l.node_count() != r.node_count()) return l.node_count() < r.node_count();
    return l.text() < r.text();
  });
  kids.erase(std::unique(kids.begin(), kids.end(),
                         [](const Assembly& l, const Assembly& r) {
                           return l.text() == r.text();
                         }),
             kids.end());
  if (!changed && kids.size() == a.children().size()) {
    bool same_order = true;
    for (std::size_t i = 0; i < kids.size(); ++i)
      if (kids[i].text() != a.children()[i].text()) { same_order = false; break; }
    if (same_order) return a;  // already canonical: share the node
  }
  return Assembly::branch(std::move(kids));
}

}  // namespace

EFormula normalize(const Assembly& a) { return EFormula(normalize_impl(a)); }

TruthValue eval_truth(const Assembly& x, TruthValue v) {
  if (x.is_leaf()) return v;
  for (const Assembly& c : x.children())
    if (eval_truth(c, v) == TruthValue::F) return TruthValue::T;
  return TruthValue::F;  // all members true -> NAND false
}

SentenceClass classify(const Assembly& x) {
  TruthValue under_t = eval_truth(x, TruthValue::T);
  TruthValue under_f = eval_truth(x, TruthValue::F);
  if (under_t == TruthValue::T && under_f == TruthValue::T) return SentenceClass::Tautology;
  if (under_t == TruthValue::F && under_f == TruthValue::F) return SentenceClass::Contradiction;
  return SentenceClass::Contingent;
}

EFormula desugar(Connective c, const std::vector<EFormula>& args) {
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw domain_error("connective arity mismatch");
  };
  auto t = [](const EFormula& f) { return f.tree(); };
  switch (c) {
    case Connective::Not: {
      arity(1, 1);
      return normalize(Assembly::branch({t(args[0])}));
    }
    case Connective::And: {
      arity(1, SIZE_MAX);
      std::vector<Assembly> inner;
      for (const EFormula& a : args) inner.push_back(t(a));
      return normalize(Assembly::branch({Assembly::branch(std::move(inner))}));
    }
    case Connective::Or: {
      arity(1, SIZE_MAX);
      std::vector<Assembly> outer;
      for (const EFormula& a : args) outer.push_back(Assembly::branch({t(a)}));
      return normalize(Assembly::branch(std::move(outer)));
    }
    case Connective::Implies: {
      arity(2, 2);
      return normalize(Assembly::branch({t(args[0]), Assembly::branch({t(args[1])})}));
    }
    case Connective::Equiv: {
      arity(2, 2);
      Assembly lhs = Assembly::branch({t(args[0]), Assembly::branch({t(args[1])})});
      Assembly rhs = Assembly::branch({t(args[1]), Assembly::branch({t(args[0])})});
      return normalize(Assembly::branch({Assembly::branch({std::move(lhs), std::move(rhs)})}));
    }
  }
  throw domain_error("unknown connective");
}

}  // namespace ego
