#include "freeclark/freecore.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

namespace freeclark {

void check_alphabet(int d, int N) {
  if (d < 1 || d > kMaxAlphabet)
    throw ConfigError("alphabet size must lie in 1..9, got " + std::to_string(d));
  if (N < 0) throw ConfigError("truncation degree must be non-negative");
}

void check_word(const Word& w, int d) {
  for (char c : w) {
    const int j = letter_of(c);
    if (j < 1 || j > d) throw ConfigError("word '" + w + "' has a letter outside 1.." + std::to_string(d));
  }
}

std::vector<Word> enumerate_words(int d, int N) {
  check_alphabet(d, N);
  std::vector<Word> out{Word()};
  std::size_t prev = 0;
  for (int k = 1; k <= N; ++k) {
    const std::size_t end = out.size();
    for (std::size_t i = prev; i < end; ++i)
      for (int j = 1; j <= d; ++j) out.push_back(out[i] + letter_char(j));
    prev = end;
  }
  return out;
}

Word transpose(const Word& w) { return Word(w.rbegin(), w.rend()); }

MultiIndex abelianize(const Word& w, int d) {
  MultiIndex n(d, 0);
  for (char c : w) {
    const int j = letter_of(c);
    if (j < 1 || j > d) throw ConfigError("abelianize: letter out of range");
    ++n[j - 1];
  }
  return n;
}

Cancellation cancel(const Word& a, const Word& b) {
  if (a.size() <= b.size() && b.compare(0, a.size(), a) == 0)
    return {Cancellation::Kind::RightRemainder, b.substr(a.size())};
  if (b.size() < a.size() && a.compare(0, b.size(), b) == 0)
    return {Cancellation::Kind::LeftRemainder, a.substr(b.size())};
  return {Cancellation::Kind::Zero, Word()};
}

std::uint64_t multinomial(const MultiIndex& n) {
  int total = 0;
  for (int k : n) {
    if (k < 0) throw ConfigError("multinomial: negative count");
    total += k;
  }
  if (total > 20) throw ConfigError("multinomial: |n| > 20 exceeds exact integer range");
  // Product of binomials C(n_1 + ... + n_k, n_k), each exact.
  std::uint64_t result = 1;
  int acc = 0;
  for (int k : n) {
    for (int i = 1; i <= k; ++i) {
      ++acc;
      const unsigned __int128 wide = static_cast<unsigned __int128>(result) * static_cast<unsigned>(acc);
      result = static_cast<std::uint64_t>(wide / static_cast<unsigned>(i));
    }
  }
  return result;
}

WordTable::WordTable(int d, int N) : d_(d), N_(N), words_(enumerate_words(d, N)) {
  const int n = size();
  index_.reserve(n);
  for (int i = 0; i < n; ++i) index_.emplace(words_[i], i);
  start_.assign(N + 2, n);
  for (int i = n - 1; i >= 0; --i) start_[words_[i].size()] = i;
  left_.assign(static_cast<std::size_t>(n) * d, -1);
  right_.assign(static_cast<std::size_t>(n) * d, -1);
  transpose_.resize(n);
  for (int i = 0; i < n; ++i) {
    transpose_[i] = index_.at(transpose(words_[i]));
    if (length(i) == N) continue;
    for (int j = 1; j <= d; ++j) {
      left_[i * d + j - 1] = index_.at(letter_char(j) + words_[i]);
      right_[i * d + j - 1] = index_.at(words_[i] + letter_char(j));
    }
  }
}

int WordTable::index(const Word& w) const {
  auto it = index_.find(w);
  return it == index_.end() ? -1 : it->second;
}

int WordTable::concat(int i, int k) const {
  int cur = i;
  for (char c : words_[k]) {
    if (cur < 0) return -1;
    cur = extend(cur, letter_of(c), Side::Right);
  }
  return cur;
}

namespace {

template <class T>
std::shared_ptr<const T> cached(int d, int N) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const T>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{d, N}];
  if (!slot) slot = std::make_shared<const T>(d, N);
  return slot;
}

}  // namespace

std::shared_ptr<const WordTable> word_table(int d, int N) {
  check_alphabet(d, N);
  return cached<WordTable>(d, N);
}

std::string multi_key(const MultiIndex& n) {
  std::string s;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(n[k]);
  }
  return s;
}

MultiIndex parse_multi_key(const std::string& s, int d) {
  MultiIndex n;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size() || v < 0) throw ConfigError("");
      n.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("malformed multi-index key '" + s + "'");
    }
  }
  if (static_cast<int>(n.size()) != d)
    throw ConfigError("multi-index key '" + s + "' does not have " + std::to_string(d) + " entries");
  return n;
}

MultiTable::MultiTable(int d, int N) : d_(d), N_(N) {
  // Degree by degree, in descending lexicographic order of the counts.
  for (int k = 0; k <= N; ++k) {
    std::vector<MultiIndex> level;
    MultiIndex n(d, 0);
    // Enumerate compositions of k into d parts recursively.
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == d - 1) {
        n[pos] = left;
        level.push_back(n);
        return;
      }
      for (int v = left; v >= 0; --v) {
        n[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, k);
    for (auto& x : level) items_.push_back(x);
  }
  for (int i = 0; i < size(); ++i) index_.emplace(multi_key(items_[i]), i);
  plus_.assign(static_cast<std::size_t>(size()) * d, -1);
  minus_.assign(static_cast<std::size_t>(size()) * d, -1);
  for (int i = 0; i < size(); ++i) {
    for (int j = 1; j <= d; ++j) {
      MultiIndex n = items_[i];
      ++n[j - 1];
      plus_[i * d + j - 1] = index(n);
      n[j - 1] -= 2;
      if (n[j - 1] >= 0) minus_[i * d + j - 1] = index(n);
    }
  }
}

int MultiTable::index(const MultiIndex& n) const {
  if (static_cast<int>(n.size()) != d_) return -1;
  for (int k : n)
    if (k < 0) return -1;
  auto it = index_.find(multi_key(n));
  return it == index_.end() ? -1 : it->second;
}

std::shared_ptr<const MultiTable> multi_table(int d, int N) {
  check_alphabet(d, N);
  return cached<MultiTable>(d, N);
}

std::vector<int> fiber_map(const WordTable& words, const MultiTable& multis) {
  if (words.d() != multis.d() || words.N() > multis.N())
    throw DimensionError("fiber_map: incompatible tables");
  std::vector<int> out(words.size());
  for (int i = 0; i < words.size(); ++i) out[i] = multis.index(abelianize(words.word(i), words.d()));
  return out;
}

TruncatedFock::TruncatedFock(int d, int m, int N) : words_(word_table(d, N)), m_(m) {
  if (m < 1) throw ConfigError("coefficient dimension must be positive");
}

SpMat creation_matrix(const TruncatedFock& fock, Side side, int j) {
  if (j < 1 || j > fock.d()) throw ConfigError("creation_matrix: letter out of range");
  const WordTable& w = fock.words();
  const int m = fock.m();
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int a = 0; a < w.size(); ++a) {
    const int b = w.extend(a, j, side);
    if (b < 0) continue;
    for (int i = 0; i < m; ++i) trip.emplace_back(b * m + i, a * m + i, 1.0);
  }
  SpMat L(fock.dim(), fock.dim());
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

Symmetrizer symmetrizer(const TruncatedFock& fock) {
  Symmetrizer s;
  s.multis = multi_table(fock.d(), fock.N());
  const int m = fock.m();
  const std::vector<int> fib = fiber_map(fock.words(), *s.multis);
  s.basis = Mat::Zero(fock.dim(), s.multis->size() * m);
  for (int a = 0; a < fock.words().size(); ++a)
    for (int i = 0; i < m; ++i) s.basis(a * m + i, fib[a] * m + i) = 1.0;
  s.projection = Mat::Zero(fock.dim(), fock.dim());
  for (int c = 0; c < s.basis.cols(); ++c) {
    const double w = 1.0 / static_cast<double>(s.multis->multinomial_of(c / m));
    s.projection += w * s.basis.col(c) * s.basis.col(c).adjoint();
  }
  return s;
}

SpMat transposition_unitary(const TruncatedFock& fock) {
  const WordTable& w = fock.words();
  const int m = fock.m();
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int a = 0; a < w.size(); ++a)
    for (int i = 0; i < m; ++i) trip.emplace_back(w.transpose_index(a) * m + i, a * m + i, 1.0);
  SpMat U(fock.dim(), fock.dim());
  U.setFromTriplets(trip.begin(), trip.end());
  return U;
}

}  // namespace freeclark
