#include "so3align/signed_permutation.hpp"

#include <algorithm>
#include <cctype>

#include "so3align/errors.hpp"

namespace so3align {

namespace {

Eigen::Matrix3i build_matrix(const std::array<int, 3>& pi, const std::array<int, 3>& sign) {
  Eigen::Matrix3i m = Eigen::Matrix3i::Zero();
  for (int i = 0; i < 3; ++i) m(i, pi[i]) = sign[i];
  return m;
}

int axis_index(char c) {
  switch (c) {
    case 'x': return 0;
    case 'y': return 1;
    case 'z': return 2;
    default: return -1;
  }
}

}  // namespace

int SignedPermutation::det() const {
  // Permutation parity times the sign product.
  const bool even = (pi[0] == 0 && pi[1] == 1 && pi[2] == 2) ||
                    (pi[0] == 1 && pi[1] == 2 && pi[2] == 0) ||
                    (pi[0] == 2 && pi[1] == 0 && pi[2] == 1);
  return (even ? 1 : -1) * sign[0] * sign[1] * sign[2];
}

std::string SignedPermutation::mapping_string() const {
  static const char axes[] = {'x', 'y', 'z'};
  std::string out;
  for (int i = 0; i < 3; ++i) {
    if (i) out += ", ";
    out += 'A';
    out += axes[i];
    out += "->";
    out += sign[i] > 0 ? '+' : '-';
    out += 'B';
    out += axes[pi[i]];
  }
  return out;
}

SignedPermutation SignedPermutation::from_matrix(const Eigen::Matrix3i& m) {
  SignedPermutation p;
  p.l = m;
  std::array<bool, 3> col_used = {false, false, false};
  for (int i = 0; i < 3; ++i) {
    int nonzero = -1;
    for (int j = 0; j < 3; ++j) {
      const int v = m(i, j);
      if (v == 0) continue;
      if (v != 1 && v != -1) throw InvalidMapping("entries must be in {-1, 0, 1}");
      if (nonzero >= 0) throw InvalidMapping("more than one nonzero in a row");
      nonzero = j;
    }
    if (nonzero < 0) throw InvalidMapping("row with no nonzero entry");
    if (col_used[nonzero]) throw InvalidMapping("column used twice");
    col_used[nonzero] = true;
    p.pi[i] = nonzero;
    p.sign[i] = m(i, nonzero);
  }
  return p;
}

SignedPermutation SignedPermutation::from_mapping(const std::string& text) {
  std::string compact;
  compact.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      compact += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }

  std::array<int, 3> pi{};
  std::array<int, 3> sign{};
  std::array<bool, 3> row_seen = {false, false, false};
  std::array<bool, 3> col_seen = {false, false, false};

  std::size_t pos = 0;
  for (int entry = 0; entry < 3; ++entry) {
    if (entry > 0) {
      if (pos >= compact.size() || compact[pos] != ',') {
        throw InvalidMapping("expected ',' between axis assignments: " + text);
      }
      ++pos;
    }
    // a<axis> -> [sign] b<axis>
    if (pos + 1 >= compact.size() || compact[pos] != 'a') {
      throw InvalidMapping("expected 'A<axis>': " + text);
    }
    const int row = axis_index(compact[pos + 1]);
    if (row < 0) throw InvalidMapping("bad A axis letter: " + text);
    pos += 2;
    if (compact.compare(pos, 2, "->") != 0) throw InvalidMapping("expected '->': " + text);
    pos += 2;
    int s = 1;
    if (pos < compact.size() && (compact[pos] == '+' || compact[pos] == '-')) {
      s = compact[pos] == '+' ? 1 : -1;
      ++pos;
    }
    if (pos + 1 >= compact.size() || compact[pos] != 'b') {
      throw InvalidMapping("expected 'B<axis>': " + text);
    }
    const int col = axis_index(compact[pos + 1]);
    if (col < 0) throw InvalidMapping("bad B axis letter: " + text);
    pos += 2;

    if (row_seen[row]) throw InvalidMapping("A axis assigned twice: " + text);
    if (col_seen[col]) throw InvalidMapping("B axis used twice: " + text);
    row_seen[row] = true;
    col_seen[col] = true;
    pi[row] = col;
    sign[row] = s;
  }
  if (pos != compact.size()) throw InvalidMapping("trailing characters: " + text);

  SignedPermutation p;
  p.pi = pi;
  p.sign = sign;
  p.l = build_matrix(pi, sign);
  return p;
}

std::vector<SignedPermutation> enumerate_signed_permutations(bool proper_only) {
  static const std::array<std::array<int, 3>, 6> perms = {{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  static const std::array<std::array<int, 3>, 8> signs = {{
      {1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1},
      {-1, 1, 1}, {-1, 1, -1}, {-1, -1, 1}, {-1, -1, -1}}};

  std::vector<SignedPermutation> out;
  out.reserve(proper_only ? 24 : 48);
  for (const auto& pi : perms) {
    for (const auto& sgn : signs) {
      SignedPermutation p;
      p.pi = pi;
      p.sign = sgn;
      p.l = build_matrix(pi, sgn);
      if (!proper_only || p.proper()) out.push_back(p);
    }
  }
  return out;
}

TbvTriple apply_to_triple(const SignedPermutation& l, const TbvTriple& t) {
  TbvTriple out;
  for (int i = 0; i < 3; ++i) {
    const S2PointSet& src = t[l.pi[i]];
    if (l.sign[i] > 0) {
      out[i] = src;
    } else {
      out[i] = negate(src);
    }
  }
  return out;
}

}  // namespace so3align
