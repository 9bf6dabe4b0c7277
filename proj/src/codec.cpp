#include "ego/codec.hpp"

#include <algorithm>
#include <functional>

namespace ego {

EFormula ordered_pair(const EFormula& x, const EFormula& y) {
  Assembly first = Assembly::branch({x.tree()});
  Assembly second = Assembly::branch({x.tree(), y.tree()});
  return normalize(Assembly::branch({std::move(first), std::move(second)}));
}

std::pair<EFormula, EFormula> unpair(const EFormula& p) {
  const auto members = p.members();
  if (members.size() == 1) {
    // {{x}} is <x,x>
    const EFormula& inner = members[0];
    if (inner.member_count() != 1) throw domain_error("not an ordered pair");
    EFormula x = inner.member(0);
    return {x, x};
  }
  if (members.size() != 2) throw domain_error("not an ordered pair");
  const EFormula* singleton = nullptr;
  const EFormula* couple = nullptr;
  for (const EFormula& m : members) {
    if (m.member_count() == 1 && singleton == nullptr) singleton = &m;
    else couple = &m;
  }
  if (!singleton || !couple || couple->member_count() != 2)
    throw domain_error("not an ordered pair");
  EFormula x = singleton->member(0);
  EFormula a = couple->member(0);
  EFormula b = couple->member(1);
  if (a == x) return {x, b};
  if (b == x) return {x, a};
  throw domain_error("not an ordered pair");
}

EFormula ordered_tuple(const std::vector<EFormula>& xs) {
  if (xs.empty()) throw domain_error("tuple requires at least one component");
  EFormula acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = ordered_pair(acc, xs[i]);
  return acc;
}

EFormula ordinal(std::uint64_t k) {
  std::vector<Assembly> built;
  built.push_back(Assembly::leaf());
  for (std::uint64_t i = 1; i <= k; ++i) {
    std::vector<Assembly> members(built.begin(), built.end());
    built.push_back(Assembly::branch(std::move(members)));
  }
  return normalize(built[k]);
}

namespace {

struct AttractorFlags {
  bool of_left = false;   // attracts the i-1 frequency
  bool of_right = false;  // attracts the i+1 frequency
};

std::vector<AttractorFlags> attractor_flags(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<AttractorFlags> flags(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 1 && f[i] > f[i - 1] && (i < 2 || f[i] > f[i - 2]))
      flags[i].of_left = true;
    if (i + 1 < n && f[i] > f[i + 1] && (i + 2 >= n || f[i] > f[i + 2]))
      flags[i].of_right = true;
  }
  return flags;
}

}  // namespace

EFormula attractor_encode(const FrequencyDistribution& d) {
  const auto& f = d.frequencies;
  const std::size_t n = f.size();
  if (n < 2) throw domain_error("distribution requires at least two frequencies");
  auto flags = attractor_flags(f);
  bool any_attractor = false;
  for (const auto& fl : flags) any_attractor |= fl.of_left || fl.of_right;
  if (!any_attractor)
    throw domain_error("degenerate distribution: no attractor exists");

  const EFormula empty;  // 0
  std::vector<EFormula> assigned(n);
  std::vector<bool> done(n, false);
  std::function<EFormula(std::size_t)> assign = [&](std::size_t i) -> EFormula {
    if (done[i]) return assigned[i];
    done[i] = true;  // no cycles: mutual attraction of neighbours is impossible
    const auto& fl = flags[i];
    if (!fl.of_left && !fl.of_right) {
      assigned[i] = desugar(Connective::Not, {empty});  // {0}
    } else if (fl.of_left && !fl.of_right) {
      assigned[i] = ordered_pair(assign(i - 1), empty);
    } else if (!fl.of_left && fl.of_right) {
      assigned[i] = ordered_pair(empty, assign(i + 1));
    } else {
      EFormula left = ordered_pair(assign(i - 1), empty);
      EFormula right = ordered_pair(empty, assign(i + 1));
      assigned[i] = f[i - 1] >= f[i + 1] ? ordered_pair(left, right)
                                         : ordered_pair(right, left);
    }
    return assigned[i];
  };

  std::vector<EFormula> maxima;
  for (std::size_t i = 0; i < n; ++i) {
    bool attracted = (i >= 1 && flags[i - 1].of_right) || (i + 1 < n && flags[i + 1].of_left);
    if (!attracted) maxima.push_back(assign(i));
  }
  return ordered_tuple(maxima);
}

namespace {

Assembly digit_header() {
  // {{0},0}
  return Assembly::branch({Assembly::branch({Assembly::leaf()}), Assembly::leaf()});
}

Assembly zero_atom_tree() {
  return Assembly::branch({digit_header(), Assembly::leaf()});
}

Assembly one_atom_tree() {
  return Assembly::branch({digit_header(), Assembly::branch({Assembly::leaf()})});
}

}  // namespace

EFormula ebinary_zero_atom() { return normalize(zero_atom_tree()); }
EFormula ebinary_one_atom() { return normalize(one_atom_tree()); }
EFormula ebinary_radix() { return ebinary_zero_atom(); }

EFormula ebinary_encode(std::string_view bits) {
  if (bits.empty()) throw domain_error("empty bit string");
  if (bits.size() > 63) throw resource_error("bit string longer than 63 digits");
  std::vector<Assembly> members;
  members.push_back(zero_atom_tree());  // radix; a rightmost 0 merges into it
  for (std::size_t i = 0; i < bits.size(); ++i) {
    char c = bits[i];
    if (c != '0' && c != '1')
      throw domain_error(std::string("non-bit character '") + c + "' in bit string");
    Assembly digit = c == '0' ? zero_atom_tree() : one_atom_tree();
    std::size_t wraps = bits.size() - 1 - i;  // rightmost digit: no extra layer
    for (std::size_t w = 0; w < wraps; ++w) digit = Assembly::branch({std::move(digit)});
    members.push_back(std::move(digit));
  }
  return normalize(Assembly::branch(std::move(members)));
}

std::uint64_t ebinary_decode(const EFormula& e) {
  static const EFormula zero = ebinary_zero_atom();
  static const EFormula one = ebinary_one_atom();
  if (e.is_leaf()) throw domain_error("not an E-binary: atom");
  bool radix_seen = false;
  std::uint64_t value = 0;
  for (const EFormula& member : e.members()) {
    EFormula core = member;
    std::uint64_t wraps = 0;
    while (core.member_count() == 1) {
      core = core.member(0);
      ++wraps;
      if (wraps > 63) throw domain_error("not an E-binary: bracket depth overflow");
    }
    std::uint64_t digit;
    if (core == zero) digit = 0;
    else if (core == one) digit = 1;
    else throw domain_error("not an E-binary: malformed digit atom");
    if (digit == 0 && wraps == 0) radix_seen = true;
    value += digit << wraps;
  }
  if (!radix_seen) throw domain_error("not an E-binary: radix marker missing");
  return value;
}

std::string binary_digits(std::uint64_t value) {
  if (value == 0) return "0";
  std::string out;
  while (value > 0) {
    out += static_cast<char>('0' + (value & 1));
    value >>= 1;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

EFormula ebinary_from_value(std::uint64_t value) {
  return ebinary_encode(binary_digits(value));
}

std::string ebinary_shortcut(std::string_view bits) {
  std::string out = "[";
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i) out += ',';
    out += bits[i];
  }
  out += ']';
  return out;
}

}  // namespace ego
