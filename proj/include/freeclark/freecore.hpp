#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "freeclark/types.hpp"

namespace freeclark {

/// A word in the free monoid on letters 1..d, stored as a digit string.
/// The empty string is the empty word.
using Word = std::string;

/// Letter-count vector n = (n_1, ..., n_d).
using MultiIndex = std::vector<int>;

inline constexpr int kMaxAlphabet = 9;

inline char letter_char(int j) { return static_cast<char>('0' + j); }
inline int letter_of(char c) { return c - '0'; }

/// Throws ConfigError unless 1 <= d <= 9 and N >= 0.
void check_alphabet(int d, int N);

/// Throws ConfigError if some letter of w lies outside 1..d.
void check_word(const Word& w, int d);

/// All words of length <= N, graded by length then lexicographic.
std::vector<Word> enumerate_words(int d, int N);

Word transpose(const Word& w);

MultiIndex abelianize(const Word& w, int d);

inline int total_degree(const MultiIndex& n) {
  int s = 0;
  for (int k : n) s += k;
  return s;
}

/// Result of reducing (L^a)* L^b to a single monomial or zero.
struct Cancellation {
  enum class Kind { RightRemainder, LeftRemainder, Zero };
  Kind kind = Kind::Zero;
  Word rest;

  bool operator==(const Cancellation& o) const { return kind == o.kind && rest == o.rest; }
};

/// RightRemainder(g) when b = a g, LeftRemainder(g) when a = b g (g nonempty),
/// Zero otherwise.  cancel(a, a) is RightRemainder of the empty word.
Cancellation cancel(const Word& a, const Word& b);

/// |n|! / n! in exact integer arithmetic; requires |n| <= 20.
std::uint64_t multinomial(const MultiIndex& n);

/// Index tables for all words of length <= N over d letters.
class WordTable {
 public:
  WordTable(int d, int N);

  int d() const { return d_; }
  int N() const { return N_; }
  int size() const { return static_cast<int>(words_.size()); }
  const Word& word(int i) const { return words_[i]; }
  const std::vector<Word>& words() const { return words_; }
  int length(int i) const { return static_cast<int>(words_[i].size()); }
  /// Index of w, or -1 when w is longer than N.
  int index(const Word& w) const;
  /// First index of words of length k (k = N+1 gives size()).
  int degree_start(int k) const { return start_[k]; }
  /// Index of jw (left) or wj (right), -1 past the truncation.
  int extend(int i, int j, Side side) const {
    return side == Side::Left ? left_[i * d_ + j - 1] : right_[i * d_ + j - 1];
  }
  int transpose_index(int i) const { return transpose_[i]; }
  /// Index of the concatenation of words i and k, or -1 past the truncation.
  int concat(int i, int k) const;

 private:
  int d_, N_;
  std::vector<Word> words_;
  std::unordered_map<Word, int> index_;
  std::vector<int> start_;
  std::vector<int> left_, right_, transpose_;
};

/// Shared, cached word table.
std::shared_ptr<const WordTable> word_table(int d, int N);

/// All multi-indices with |n| <= N, graded, and within a degree ordered
/// as their first appearance among the words (descending lexicographic).
class MultiTable {
 public:
  MultiTable(int d, int N);

  int d() const { return d_; }
  int N() const { return N_; }
  int size() const { return static_cast<int>(items_.size()); }
  const MultiIndex& item(int i) const { return items_[i]; }
  int degree(int i) const { return total_degree(items_[i]); }
  int index(const MultiIndex& n) const;
  /// Index of n + e_j, -1 past the truncation.
  int plus(int i, int j) const { return plus_[i * d_ + j - 1]; }
  /// Index of n - e_j, -1 when n_j = 0.
  int minus(int i, int j) const { return minus_[i * d_ + j - 1]; }
  std::uint64_t multinomial_of(int i) const { return multinomial(items_[i]); }

 private:
  int d_, N_;
  std::vector<MultiIndex> items_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> plus_, minus_;
};

std::shared_ptr<const MultiTable> multi_table(int d, int N);

/// "n1,n2,...,nd"
std::string multi_key(const MultiIndex& n);
MultiIndex parse_multi_key(const std::string& s, int d);

/// For each word index, the index of its letter count in the multi table.
std::vector<int> fiber_map(const WordTable& words, const MultiTable& multis);

/// Truncated Fock space F^2_d (x) C^m.  Basis index = word index * m + i.
class TruncatedFock {
 public:
  TruncatedFock(int d, int m, int N);

  int d() const { return words_->d(); }
  int m() const { return m_; }
  int N() const { return words_->N(); }
  int dim() const { return words_->size() * m_; }
  const WordTable& words() const { return *words_; }
  std::shared_ptr<const WordTable> words_ptr() const { return words_; }
  int index(const Word& w, int i) const { return words_->index(w) * m_ + i; }
  /// Dimension of the span of words of length <= k.
  int dim_upto(int k) const { return words_->degree_start(k + 1) * m_; }

 private:
  std::shared_ptr<const WordTable> words_;
  int m_;
};

/// L_j (Left) or R_j (Right) compressed to degree <= N.
SpMat creation_matrix(const TruncatedFock& fock, Side side, int j);

struct Symmetrizer {
  std::shared_ptr<const MultiTable> multis;
  /// Orthogonal projection onto span{e_n} (x) C^m.
  Mat projection;
  /// Columns e_n (x) e_i, column index = multi index * m + i; ||e_n||^2 = |n|!/n!.
  Mat basis;
};

Symmetrizer symmetrizer(const TruncatedFock& fock);

/// Permutation U_T e_a = e_{a^T}.
SpMat transposition_unitary(const TruncatedFock& fock);

}  // namespace freeclark
