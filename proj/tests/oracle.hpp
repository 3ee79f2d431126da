#pragma once

// Brute-force reference implementations used as test oracles. They work on
// plain coefficient vectors and never call into the library's arithmetic.

#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Poly = std::vector<int>;  // coefficients of 1, u, ..., u^(m-1)

inline Poly decode(std::uint32_t code, int p, int m) {
  Poly out(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    out[static_cast<std::size_t>(j)] = static_cast<int>(code % static_cast<std::uint32_t>(p));
    code /= static_cast<std::uint32_t>(p);
  }
  return out;
}

inline std::uint32_t encode(const Poly& a, int p) {
  std::uint32_t code = 0;
  for (std::size_t j = a.size(); j-- > 0;) code = code * static_cast<std::uint32_t>(p) + static_cast<std::uint32_t>(a[j]);
  return code;
}

inline Poly add(const Poly& a, const Poly& b, int p) {
  Poly out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = (a[j] + b[j]) % p;
  return out;
}

inline Poly sub(const Poly& a, const Poly& b, int p) {
  Poly out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = ((a[j] - b[j]) % p + p) % p;
  return out;
}

inline Poly mul(const Poly& a, const Poly& b, int p) {
  Poly out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; i + j < a.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  }
  return out;
}

/// Index of the lowest nonzero coefficient, m for zero.
inline int depth(const Poly& a) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] != 0) return static_cast<int>(j);
  }
  return static_cast<int>(a.size());
}

inline int character(const Poly& a, const std::vector<int>& weights, int p) {
  int s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s = (s + weights[j] * a[j]) % p;
  return s;
}

/// Smallest s with the character vanishing on every element of depth >= s,
/// found by scanning all ring elements.
inline int visibility_scan(const std::vector<int>& weights, int p) {
  const int m = static_cast<int>(weights.size());
  std::uint32_t size = 1;
  for (int j = 0; j < m; ++j) size *= static_cast<std::uint32_t>(p);
  int s = m;
  while (s > 0) {
    bool vanishes = true;
    for (std::uint32_t c = 0; c < size && vanishes; ++c) {
      const auto a = decode(c, p, m);
      if (depth(a) >= s - 1 && character(a, weights, p) != 0) vanishes = false;
    }
    if (!vanishes) break;
    --s;
  }
  return s;
}

/// Points of R^n as vectors of polynomials; point code packs component i at
/// digits [i*m, (i+1)*m).
struct Space {
  int p, m, n;
  std::uint32_t ring_size() const {
    std::uint32_t s = 1;
    for (int j = 0; j < m; ++j) s *= static_cast<std::uint32_t>(p);
    return s;
  }
  std::uint32_t size() const {
    std::uint32_t s = 1;
    for (int i = 0; i < n; ++i) s *= ring_size();
    return s;
  }
  std::vector<Poly> point(std::uint32_t code) const {
    std::vector<Poly> out;
    for (int i = 0; i < n; ++i) {
      out.push_back(decode(code % ring_size(), p, m));
      code /= ring_size();
    }
    return out;
  }
  std::uint32_t code(const std::vector<Poly>& x) const {
    std::uint32_t c = 0;
    for (std::size_t i = x.size(); i-- > 0;) c = c * ring_size() + encode(x[i], p);
    return c;
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    auto x = point(a), y = point(b);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = oracle::add(x[i], y[i], p);
    return code(x);
  }
};

/// x^T G x + l.x + c with all entries given as polynomials.
inline Poly eval_form(const Space& sp, const std::vector<Poly>& gram, const std::vector<Poly>& lin, const Poly& c,
                      const std::vector<Poly>& x) {
  Poly acc = c;
  for (int i = 0; i < sp.n; ++i) {
    for (int j = 0; j < sp.n; ++j) {
      acc = add(acc, mul(mul(gram[static_cast<std::size_t>(i * sp.n + j)], x[static_cast<std::size_t>(i)], sp.p),
                         x[static_cast<std::size_t>(j)], sp.p),
                sp.p);
    }
    acc = add(acc, mul(lin[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)], sp.p), sp.p);
  }
  return acc;
}

/// Degree by exhaustive derivatives in every direction tuple (|A| small).
inline int exhaustive_degree(const Space& sp, const std::vector<std::uint32_t>& table, int max_order = 4) {
  const auto n = sp.size();
  std::function<bool(const std::vector<std::uint32_t>&, int)> vanishes = [&](const std::vector<std::uint32_t>& t, int k) {
    if (k == 0) {
      for (auto v : t) {
        if (v != 0) return false;
      }
      return true;
    }
    for (std::uint32_t h = 0; h < n; ++h) {
      std::vector<std::uint32_t> d(n);
      for (std::uint32_t x = 0; x < n; ++x) {
        d[x] = encode(sub(decode(t[sp.add(x, h)], sp.p, sp.m), decode(t[x], sp.p, sp.m), sp.p), sp.p);
      }
      if (!vanishes(d, k - 1)) return false;
    }
    return true;
  };
  for (int k = 0; k <= max_order; ++k) {
    if (vanishes(table, k + 1)) return k;
  }
  return max_order + 1;
}

}  // namespace oracle
