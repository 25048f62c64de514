#pragma once
// Independent reference implementations used as test oracles. Nothing here
// calls into the library's word or group code.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Q = mpq_class;

// ---------------------------------------------------------------------------
// Free groups on lowercase letters, inverses uppercase, identity "".

inline char inv(char c) { return std::islower(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(c))
                                                                               : static_cast<char>(std::tolower(c)); }

inline std::string reduce(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (c == 'e' || c == ' ') continue;
    if (!out.empty() && out.back() == inv(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

inline std::string inverse(const std::string& w) {
  std::string out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inv(*it));
  return out;
}

inline std::string show(const std::string& w) { return w.empty() ? "e" : w; }

inline std::string cyclic_core(std::string w) {
  w = reduce(w);
  while (w.size() >= 2 && w.front() == inv(w.back())) w = w.substr(1, w.size() - 2);
  return w;
}

// a < A < b < B < ...
inline int rank_of(char c) {
  const int g = std::tolower(static_cast<unsigned char>(c)) - 'a';
  return 2 * g + (std::isupper(static_cast<unsigned char>(c)) ? 1 : 0);
}

inline bool shortlex_less(const std::string& x, const std::string& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) return rank_of(x[i]) < rank_of(y[i]);
  }
  return false;
}

inline std::string min_rotation(const std::string& w) {
  std::string best = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    std::string r = w.substr(k) + w.substr(0, k);
    if (shortlex_less(r, best)) best = r;
  }
  return best;
}

inline std::string conj_key(const std::string& w) { return min_rotation(cyclic_core(w)); }

inline std::string power(const std::string& w, int d) {
  std::string out;
  for (int i = 0; i < d; ++i) out += w;
  return reduce(out);
}

// Generators named a, b, c, d, f, ... as in the library's standard alphabet.
inline std::vector<char> free_letters(int rank) {
  std::vector<char> out;
  for (char c = 'a'; static_cast<int>(out.size()) < 2 * rank; ++c) {
    if (c == 'e') continue;
    out.push_back(c);
    out.push_back(static_cast<char>(std::toupper(c)));
  }
  return out;
}

// Reduced words of length <= radius, shortlex.
inline std::vector<std::string> free_ball(int rank, int radius) {
  const auto letters = free_letters(rank);
  std::vector<std::string> out{""};
  std::vector<std::string> layer{""};
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::string> next;
    for (const auto& w : layer) {
      for (char c : letters) {
        if (!w.empty() && w.back() == inv(c)) continue;
        next.push_back(w + c);
      }
    }
    std::sort(next.begin(), next.end(), shortlex_less);
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Brute-force proper-power test: x is conjugate to h^d for some h of length
// at most ceil(|x|/2) + 1 and 2 <= d <= max(2, |x|). The identity is e^2.
class PowerOracle {
 public:
  PowerOracle(int rank, int max_length) {
    const int hr = (max_length + 1) / 2 + 1;
    for (const auto& h : free_ball(rank, hr)) {
      for (int d = 2; d <= std::max(2, max_length); ++d) {
        const auto p = power(h, d);
        const auto core = cyclic_core(p);
        if (static_cast<int>(core.size()) > max_length) break;
        keys_.insert(min_rotation(core));
      }
    }
  }
  bool is_power(const std::string& x) const { return keys_.count(conj_key(x)) > 0; }

 private:
  std::set<std::string> keys_;
};

// ---------------------------------------------------------------------------
// Faithful matrix representations.

using M2 = std::array<__int128, 4>;

inline M2 mul(const M2& x, const M2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

// Sanov: a -> [[1,2],[0,1]], b -> [[1,0],[2,1]] generate a free group of rank 2.
inline M2 sanov(const std::string& w) {
  M2 m{1, 0, 0, 1};
  for (char c : w) {
    switch (c) {
      case 'a': m = mul(m, {1, 2, 0, 1}); break;
      case 'A': m = mul(m, {1, -2, 0, 1}); break;
      case 'b': m = mul(m, {1, 0, 2, 1}); break;
      case 'B': m = mul(m, {1, 0, -2, 1}); break;
      default: break;
    }
  }
  return m;
}

// PSL(2,Z) = Z/2 * Z/3 with s -> [[0,-1],[1,0]], t -> [[0,-1],[1,1]].
inline M2 psl(const std::string& w) {
  const M2 s{0, -1, 1, 0};
  const M2 t{0, -1, 1, 1};
  const M2 T{1, 1, -1, 0};
  M2 m{1, 0, 0, 1};
  for (char c : w) {
    if (c == 's' || c == 'S') m = mul(m, s);
    if (c == 't') m = mul(m, t);
    if (c == 'T') m = mul(m, T);
  }
  return m;
}

inline bool psl_equal(const M2& x, const M2& y) {
  return x == y || (x[0] == -y[0] && x[1] == -y[1] && x[2] == -y[2] && x[3] == -y[3]);
}

inline bool psl_identity(const M2& x) { return psl_equal(x, {1, 0, 0, 1}); }

// ---------------------------------------------------------------------------
// Exact laws of a walk on a free group by brute-force convolution over maps.

using Law = std::map<std::string, Q>;

inline std::vector<Law> free_laws(const std::map<std::string, Q>& mu, int n_max) {
  std::vector<Law> laws{{{"", Q(1)}}};
  for (int n = 1; n <= n_max; ++n) {
    Law next;
    for (const auto& [x, p] : laws.back()) {
      for (const auto& [s, w] : mu) next[reduce(x + s)] += p * w;
    }
    laws.push_back(std::move(next));
  }
  return laws;
}

inline std::map<std::string, Q> lazy_uniform(int rank, const Q& alpha) {
  std::map<std::string, Q> mu{{"", alpha}};
  for (char c : free_letters(rank)) mu[std::string(1, c)] = (1 - alpha) / (2 * rank);
  return mu;
}

// ---------------------------------------------------------------------------
// Seeded generators for property tests.

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  // Arbitrary (unreduced) word over the given letters.
  std::string word(const std::vector<char>& letters, int max_len) {
    std::string w;
    const int n = uniform(0, max_len);
    for (int i = 0; i < n; ++i) w.push_back(letters[static_cast<std::size_t>(uniform(0, static_cast<int>(letters.size()) - 1))]);
    return w;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
