// Core term representation of the E-language: finite rooted trees over the
// single atom `0`, read simultaneously as listing-method sets and as NAND
// sentences over the one propositional variable.
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ego {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed surface text; carries the byte offset of the offending token.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t offset)
      : error(what + " (byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Argument outside an operation's domain (empty braces, member of 0, ...).
class domain_error : public error {
 public:
  using error::error;
};

// Configurable resource ceilings exceeded (depth, width, pairing count).
class resource_error : public error {
 public:
  using error::error;
};

struct Limits {
  std::size_t max_depth = 64;
  std::size_t max_width = 1024;
};

// Immutable ordered tree. A leaf is the atom; a branch has >= 1 children.
// Branch nodes are shared, leaves carry no allocation at all, so copies are
// cheap and values are thread-safe.
class Assembly {
 public:
  Assembly() = default;  // the atom

  static Assembly leaf();
  static Assembly branch(std::vector<Assembly> children);

  bool is_leaf() const { return node_ == nullptr; }
  const std::vector<Assembly>& children() const;

  // Total node count; identical to the descendant sum Desc of the lineage
  // module (Desc(leaf) = 1, Desc(branch) = sum of children + 1).
  std::uint64_t node_count() const { return node_ ? node_->count : 1; }
  std::uint32_t height() const { return node_ ? node_->height : 0; }  // leaf = 0

  // Surface text in stored child order, built once at construction.
  const std::string& text() const;

 private:
  struct Node {
    std::vector<Assembly> children;
    std::string text;
    std::uint64_t count = 1;
    std::uint32_t height = 0;
  };
  explicit Assembly(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;  // null for the atom
};

enum class TruthValue { F, T };
enum class SentenceClass { Tautology, Contradiction, Contingent };

std::string to_string(TruthValue v);
std::string to_string(SentenceClass c);

// Canonical duplicate-free form: no two set-equal siblings anywhere, children
// ordered by (node count, render string). Structurally equal values are
// bit-identical, so operator== decides set equality on this type.
class EFormula {
 public:
  EFormula();  // the atom

  const Assembly& tree() const { return tree_; }
  bool is_leaf() const { return tree_.is_leaf(); }
  std::uint64_t node_count() const { return tree_.node_count(); }

  std::size_t member_count() const { return tree_.children().size(); }
  EFormula member(std::size_t i) const;
  std::vector<EFormula> members() const;

  std::string render() const;

  friend bool operator==(const EFormula& a, const EFormula& b);
  friend bool operator!=(const EFormula& a, const EFormula& b) { return !(a == b); }
  friend bool operator<(const EFormula& a, const EFormula& b);  // canonical order

 private:
  explicit EFormula(Assembly canonical) : tree_(std::move(canonical)) {}
  friend EFormula normalize(const Assembly&);
  friend class canonical_access;

  Assembly tree_;
};

Assembly parse(std::string_view text, const Limits& limits = Limits{});
std::string render(const Assembly& a);

// Def 2 equality, implemented as the literal double quantification. This is
// the reference route; normalize-and-compare and the lineage fingerprint are
// the fast routes checked against it.
bool set_equal(const Assembly& x, const Assembly& y);

// Def 3: true iff y is a branch with a child set-equal to x.
bool is_member(const Assembly& x, const Assembly& y);

EFormula normalize(const Assembly& a);

TruthValue eval_truth(const Assembly& x, TruthValue v);
SentenceClass classify(const Assembly& x);
inline SentenceClass classify(const EFormula& x) { return classify(x.tree()); }

enum class Connective { Not, And, Or, Implies, Equiv };

// Def 6 sugar, returned in normalized brace form:
//   ~X -> {X};  and -> {{X1,...,Xn}};  or -> {{X1},...,{Xn}};
//   implies -> {X1,{X2}};  equiv -> {{{X1,{X2}},{X2,{X1}}}}
EFormula desugar(Connective c, const std::vector<EFormula>& args);

}  // namespace ego
