#include "carnot/graded_algebra.hpp"

#include "carnot/linalg.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace carnot {

namespace {

Rational factorial(int k)
{
  Rational f(1);
  for (int i = 2; i <= k; ++i)
    f *= i;
  return f;
}

// Dynkin: log(e^X e^Y) = sum_k (-1)^{k-1}/k sum over (r_i, s_i) with
// r_i + s_i >= 1 of [X^{r1} Y^{s1} ... X^{rk} Y^{sk}] / (m * prod r_i! s_i!),
// m = sum (r_i + s_i), bracket right-nested.
void enumerate_blocks(int k, int blocks_left, int length_left, std::vector<std::uint8_t>& word, Rational denom,
                      int total_length, std::map<std::vector<std::uint8_t>, Rational>& acc, int max_length)
{
  if (blocks_left == 0) {
    Rational coeff = Rational(k % 2 == 1 ? 1 : -1) / (Rational(k) * Rational(total_length) * denom);
    acc[word] += coeff;
    return;
  }
  for (int r = 0; r <= length_left; ++r) {
    for (int s = 0; r + s <= length_left; ++s) {
      if (r + s == 0)
        continue;
      // Every remaining block needs at least one letter.
      if (length_left - r - s < blocks_left - 1)
        continue;
      const std::size_t mark = word.size();
      word.insert(word.end(), static_cast<std::size_t>(r), 0);
      word.insert(word.end(), static_cast<std::size_t>(s), 1);
      enumerate_blocks(k, blocks_left - 1, length_left - r - s, word, denom * factorial(r) * factorial(s),
                       total_length + r + s, acc, max_length);
      word.resize(mark);
    }
  }
}

std::vector<DynkinTerm> build_series(int max_length)
{
  std::map<std::vector<std::uint8_t>, Rational> acc;
  std::vector<std::uint8_t> word;
  for (int k = 1; k <= max_length; ++k)
    enumerate_blocks(k, k, max_length, word, Rational(1), 0, acc, max_length);
  std::vector<DynkinTerm> terms;
  for (auto& [w, c] : acc) {
    if (c.is_zero())
      continue;
    // Words ending in a repeated letter vanish identically.
    if (w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2])
      continue;
    terms.push_back({w, c});
  }
  return terms;
}

} // namespace

const std::vector<DynkinTerm>& dynkin_series(int max_length)
{
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const std::vector<DynkinTerm>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[max_length];
  if (!slot)
    slot = std::make_unique<const std::vector<DynkinTerm>>(build_series(max_length));
  return *slot;
}

CheckReport verify_algebra(const GradedLieAlgebra<Rational>& alg)
{
  CheckReport report;
  const int n = alg.dim();
  auto idx = [](std::initializer_list<int> ids) {
    std::string s = "(";
    bool first = true;
    for (int i : ids) {
      if (!first)
        s += ",";
      s += std::to_string(i + 1);
      first = false;
    }
    return s + ")";
  };

  {
    std::string witness;
    for (int a = 0; a < n && witness.empty(); ++a)
      for (int b = a; b < n && witness.empty(); ++b)
        for (int k = 0; k < n && witness.empty(); ++k)
          if (alg.constant(a, b, k) != -alg.constant(b, a, k))
            witness = "(a,b,k)=" + idx({a, b, k});
    report.add("antisymmetry", witness.empty(), witness);
  }

  {
    std::string witness;
    for (int a = 0; a < n && witness.empty(); ++a)
      for (int b = 0; b < n && witness.empty(); ++b)
        for (int k = 0; k < n && witness.empty(); ++k)
          if (!alg.constant(a, b, k).is_zero() && alg.weight(k) != alg.weight(a) + alg.weight(b))
            witness = "(a,b,k)=" + idx({a, b, k});
    report.add("gradedness", witness.empty(), witness);
  }

  {
    std::string witness;
    for (int a = 0; a < n && witness.empty(); ++a) {
      const VectorQ ea = basis_vector(alg, a);
      for (int b = 0; b < n && witness.empty(); ++b) {
        const VectorQ eb = basis_vector(alg, b);
        for (int c = 0; c < n && witness.empty(); ++c) {
          const VectorQ ec = basis_vector(alg, c);
          VectorQ sum = bracket(alg, ea, bracket(alg, eb, ec)) + bracket(alg, eb, bracket(alg, ec, ea)) +
                        bracket(alg, ec, bracket(alg, ea, eb));
          if (!is_zero_vector(sum))
            witness = "(a,b,c)=" + idx({a, b, c}) + " cyclic sum " + to_string(sum);
        }
      }
    }
    report.add("jacobi", witness.empty(), witness);
  }

  {
    // Right-nested brackets of length L span the L-th term of the lower
    // central series; keep an independent spanning set per level.
    struct Nested {
      VectorQ value;
      std::vector<int> word;
    };
    std::vector<Nested> level;
    for (int a = 0; a < n; ++a)
      level.push_back({basis_vector(alg, a), {a}});
    std::string witness;
    for (int length = 2; length <= alg.depth() + 1 && !level.empty(); ++length) {
      std::vector<Nested> next;
      MatrixQ rows(0, n);
      for (int a = 0; a < n; ++a) {
        const VectorQ ea = basis_vector(alg, a);
        for (const auto& w : level) {
          VectorQ value = bracket(alg, ea, w.value);
          if (is_zero_vector(value))
            continue;
          MatrixQ grown(rows.rows() + 1, n);
          grown.topRows(rows.rows()) = rows;
          grown.row(rows.rows()) = value.transpose();
          if (rank_exact(grown) == grown.rows()) {
            rows = grown;
            std::vector<int> word{a};
            word.insert(word.end(), w.word.begin(), w.word.end());
            next.push_back({value, word});
          }
        }
      }
      level = std::move(next);
      if (length == alg.depth() + 1 && !level.empty()) {
        witness = "nonzero bracket of length " + std::to_string(length) + " on basis word (";
        for (std::size_t i = 0; i < level.front().word.size(); ++i)
          witness += (i ? "," : "") + std::to_string(level.front().word[i] + 1);
        witness += ")";
      }
    }
    report.add("nilpotency", witness.empty(), witness);
  }

  return report;
}

std::string describe(const GradedLieAlgebra<Rational>& alg)
{
  std::string out = "weights [";
  for (int a = 0; a < alg.dim(); ++a)
    out += (a ? "," : "") + std::to_string(alg.weight(a));
  out += "]";
  for (int a = 0; a < alg.dim(); ++a)
    for (int b = a + 1; b < alg.dim(); ++b)
      for (int k = 0; k < alg.dim(); ++k)
        if (!alg.constant(a, b, k).is_zero())
          out += " c[" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "][" + std::to_string(k + 1) +
                 "]=" + to_string(alg.constant(a, b, k));
  return out;
}

} // namespace carnot
