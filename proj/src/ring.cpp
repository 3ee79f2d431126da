#include "phasebound/ring.hpp"

#include <algorithm>
#include <sstream>

#include "phasebound/errors.hpp"

namespace phasebound {

bool is_small_prime(int p) { return p == 2 || p == 3 || p == 5 || p == 7; }

int mod_inverse(int a, int p) {
  a %= p;
  if (a < 0) a += p;
  for (int b = 1; b < p; ++b) {
    if ((a * b) % p == 1) return b;
  }
  throw StructuralError("no inverse of " + std::to_string(a) + " mod " + std::to_string(p));
}

// ---------------------------------------------------------------------------
// DigitCodec

DigitCodec::DigitCodec(int p, int len) : p_(p), len_(len) {
  if (len < 0 || len > kMaxDigits) throw StructuralError("digit length out of range");
  std::uint64_t w = 1;
  for (int i = 0; i <= len; ++i) {
    if (w > (std::uint64_t{1} << 32) - 1) throw SizeCapError("code space exceeds 32 bits");
    pow_[i] = static_cast<std::uint32_t>(w);
    w *= static_cast<std::uint64_t>(p);
  }
}

std::uint32_t DigitCodec::add(std::uint32_t a, std::uint32_t b) const {
  if (p_ == 2) return a ^ b;
  std::uint32_t out = 0;
  const auto p = static_cast<std::uint32_t>(p_);
  for (int i = 0; i < len_; ++i) {
    out += ((a % p + b % p) % p) * pow_[i];
    a /= p;
    b /= p;
  }
  return out;
}

std::uint32_t DigitCodec::sub(std::uint32_t a, std::uint32_t b) const {
  if (p_ == 2) return a ^ b;
  std::uint32_t out = 0;
  const auto p = static_cast<std::uint32_t>(p_);
  for (int i = 0; i < len_; ++i) {
    out += ((a % p + p - b % p) % p) * pow_[i];
    a /= p;
    b /= p;
  }
  return out;
}

std::uint32_t DigitCodec::neg(std::uint32_t a) const { return sub(0, a); }

std::uint32_t DigitCodec::scale(int c, std::uint32_t a) const {
  c %= p_;
  if (c < 0) c += p_;
  std::uint32_t out = 0;
  const auto p = static_cast<std::uint32_t>(p_);
  for (int i = 0; i < len_; ++i) {
    out += ((a % p) * static_cast<std::uint32_t>(c) % p) * pow_[i];
    a /= p;
  }
  return out;
}

std::vector<int> DigitCodec::digits(std::uint32_t code) const {
  std::vector<int> out(static_cast<std::size_t>(len_));
  for (int i = 0; i < len_; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::uint32_t>(p_));
    code /= static_cast<std::uint32_t>(p_);
  }
  return out;
}

std::uint32_t DigitCodec::pack(std::span<const int> digits) const {
  if (static_cast<int>(digits.size()) != len_) throw StructuralError("digit vector has wrong length");
  std::uint32_t out = 0;
  for (int i = 0; i < len_; ++i) {
    int d = digits[static_cast<std::size_t>(i)] % p_;
    if (d < 0) d += p_;
    out += static_cast<std::uint32_t>(d) * pow_[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// TruncatedRing

TruncatedRing::TruncatedRing(int p, int m) {
  if (!is_small_prime(p)) throw StructuralError("ring.p must be a prime <= 7, got " + std::to_string(p));
  if (m < 1) throw StructuralError("ring.m must be >= 1, got " + std::to_string(m));
  std::uint64_t size = 1;
  for (int i = 0; i < m; ++i) {
    size *= static_cast<std::uint64_t>(p);
    if (size > kMaxModuleSize) throw SizeCapError("ring size p^m exceeds 65536");
  }
  codec_ = DigitCodec(p, m);
}

void TruncatedRing::check(const RingElement& x) const {
  if (!contains(x)) {
    throw StructuralError("element of F_" + std::to_string(x.p) + "[u]/(u^" + std::to_string(x.m) +
                          ") used in F_" + std::to_string(p()) + "[u]/(u^" + std::to_string(m()) + ")");
  }
}

RingElement TruncatedRing::element(std::uint32_t code) const {
  if (code >= size()) throw StructuralError("ring element code out of range");
  return {static_cast<std::uint8_t>(p()), static_cast<std::uint8_t>(m()), code};
}

RingElement TruncatedRing::from_coeffs(std::span<const int> coeffs) const {
  if (static_cast<int>(coeffs.size()) != m()) {
    throw StructuralError("expected " + std::to_string(m()) + " coefficients, got " +
                          std::to_string(coeffs.size()));
  }
  for (int c : coeffs) {
    if (c < 0 || c >= p()) throw StructuralError("coefficient " + std::to_string(c) + " not in [0, p)");
  }
  return element(codec_.pack(coeffs));
}

RingElement TruncatedRing::monomial(int j, int c) const {
  if (j < 0 || j >= m()) return zero();
  return element(codec_.scale(c, codec_.weight(j)));
}

std::vector<int> TruncatedRing::coeffs(const RingElement& x) const {
  check(x);
  return codec_.digits(x.code);
}

int TruncatedRing::coeff(const RingElement& x, int j) const {
  check(x);
  return codec_.digit(x.code, j);
}

RingElement TruncatedRing::add(const RingElement& x, const RingElement& y) const {
  check(x);
  check(y);
  return element(codec_.add(x.code, y.code));
}

RingElement TruncatedRing::sub(const RingElement& x, const RingElement& y) const {
  check(x);
  check(y);
  return element(codec_.sub(x.code, y.code));
}

RingElement TruncatedRing::neg(const RingElement& x) const {
  check(x);
  return element(codec_.neg(x.code));
}

RingElement TruncatedRing::mul(const RingElement& x, const RingElement& y) const {
  check(x);
  check(y);
  return element(mul_code(x.code, y.code));
}

std::uint32_t TruncatedRing::mul_code(std::uint32_t a, std::uint32_t b) const {
  const int m = this->m();
  const int p = this->p();
  std::array<int, kMaxDigits> da{}, db{}, out{};
  for (int i = 0; i < m; ++i) {
    da[i] = codec_.digit(a, i);
    db[i] = codec_.digit(b, i);
  }
  for (int i = 0; i < m; ++i) {
    if (da[i] == 0) continue;
    for (int j = 0; i + j < m; ++j) out[i + j] += da[i] * db[j];
  }
  std::uint32_t code = 0;
  for (int i = 0; i < m; ++i) code += static_cast<std::uint32_t>(out[i] % p) * codec_.weight(i);
  return code;
}

int TruncatedRing::radical_depth(const RingElement& x) const {
  check(x);
  return radical_depth_code(x.code);
}

int TruncatedRing::radical_depth_code(std::uint32_t a) const {
  for (int j = 0; j < m(); ++j) {
    if (codec_.digit(a, j) != 0) return j;
  }
  return m();
}

std::uint32_t TruncatedRing::truncate_code(std::uint32_t a, int s) const {
  if (s <= 0) return 0;
  if (s >= m()) return a;
  return a % codec_.weight(s);
}

std::string TruncatedRing::to_string(const RingElement& x) const {
  check(x);
  std::ostringstream os;
  bool first = true;
  for (int j = 0; j < m(); ++j) {
    const int c = codec_.digit(x.code, j);
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (j == 0) {
      os << c;
    } else {
      if (c != 1) os << c;
      os << "u";
      if (j > 1) os << "^" << j;
    }
  }
  if (first) os << "0";
  return os.str();
}

RingElement ring_mul(const RingElement& x, const RingElement& y) {
  if (x.p != y.p || x.m != y.m) throw StructuralError("ring_mul: operands live in different rings");
  return TruncatedRing(x.p, x.m).mul(x, y);
}

RingElement ring_add(const RingElement& x, const RingElement& y) {
  if (x.p != y.p || x.m != y.m) throw StructuralError("ring_add: operands live in different rings");
  return TruncatedRing(x.p, x.m).add(x, y);
}

int radical_depth(const RingElement& x) { return TruncatedRing(x.p, x.m).radical_depth(x); }

// ---------------------------------------------------------------------------
// AdditiveCharacter

AdditiveCharacter::AdditiveCharacter(const TruncatedRing& ring, std::vector<int> weights)
    : p_(ring.p()), weights_(std::move(weights)) {
  if (static_cast<int>(weights_.size()) != ring.m()) {
    throw StructuralError("character needs " + std::to_string(ring.m()) + " weights, got " +
                          std::to_string(weights_.size()));
  }
  for (int& w : weights_) {
    if (w < 0 || w >= p_) throw StructuralError("character weight " + std::to_string(w) + " not in [0, p)");
  }
  threshold_ = 0;
  for (int j = ring.m() - 1; j >= 0; --j) {
    if (weights_[static_cast<std::size_t>(j)] != 0) {
      threshold_ = j + 1;
      break;
    }
  }
  table_.resize(ring.size());
  for (std::uint32_t a = 0; a < ring.size(); ++a) {
    int e = 0;
    for (int j = 0; j < ring.m(); ++j) e += weights_[static_cast<std::size_t>(j)] * ring.codec().digit(a, j);
    table_[a] = static_cast<std::uint8_t>(e % p_);
  }
}

int AdditiveCharacter::eval(const RingElement& x) const {
  if (x.p != p_ || x.m != weights_.size()) throw StructuralError("character and element have different rings");
  return table_[x.code];
}

int char_eval(const AdditiveCharacter& chi, const RingElement& x) { return chi.eval(x); }
int invisible_threshold(const AdditiveCharacter& chi) { return chi.invisible_threshold(); }

// ---------------------------------------------------------------------------
// FiniteModule

FiniteModule::FiniteModule(TruncatedRing ring, int rank) : ring_(ring), rank_(rank) {
  if (rank < 1) throw StructuralError("module rank must be >= 1");
  std::uint64_t size = 1;
  for (int i = 0; i < rank; ++i) {
    size *= ring_.size();
    if (size > kMaxModuleSize) throw SizeCapError("module size p^(m n) exceeds 65536");
  }
  codec_ = DigitCodec(ring_.p(), ring_.m() * rank);
}

ModuleElement FiniteModule::make(std::span<const RingElement> components) const {
  if (static_cast<int>(components.size()) != rank_) throw StructuralError("module element has wrong rank");
  std::vector<std::uint32_t> codes;
  for (const auto& c : components) {
    if (!ring_.contains(c)) throw StructuralError("module component from a different ring");
    codes.push_back(c.code);
  }
  return make_codes(codes);
}

ModuleElement FiniteModule::make_codes(std::span<const std::uint32_t> components) const {
  if (static_cast<int>(components.size()) != rank_) throw StructuralError("module element has wrong rank");
  std::uint32_t code = 0;
  std::uint32_t w = 1;
  for (auto c : components) {
    if (c >= ring_.size()) throw StructuralError("module component code out of range");
    code += c * w;
    w *= ring_.size();
  }
  return {code};
}

RingElement FiniteModule::component(ModuleElement x, int i) const {
  return ring_.element(component_code(x.code, i));
}

std::uint32_t FiniteModule::component_code(std::uint32_t x, int i) const {
  for (int k = 0; k < i; ++k) x /= ring_.size();
  return x % ring_.size();
}

std::vector<std::uint32_t> FiniteModule::additive_generators() const {
  std::vector<std::uint32_t> gens;
  for (int d = 0; d < codec_.len(); ++d) gens.push_back(codec_.weight(d));
  return gens;
}

std::string FiniteModule::to_string(ModuleElement x) const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < rank_; ++i) {
    if (i) os << ", ";
    os << ring_.to_string(component(x, i));
  }
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// ModuleAutomorphism

bool ModuleAutomorphism::invertible(const FiniteModule& module, std::span<const std::uint32_t> matrix) {
  const int n = module.rank();
  const int p = module.ring().p();
  const auto rs = module.ring().size();
  // Reduction mod u is the constant coefficient.
  std::vector<int> a(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n * n; ++i) a[static_cast<std::size_t>(i)] = static_cast<int>((matrix[static_cast<std::size_t>(i)] % rs) % static_cast<std::uint32_t>(p));
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r) {
      if (a[static_cast<std::size_t>(r * n + col)] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return false;
    for (int c = 0; c < n; ++c) std::swap(a[static_cast<std::size_t>(col * n + c)], a[static_cast<std::size_t>(piv * n + c)]);
    const int inv = mod_inverse(a[static_cast<std::size_t>(col * n + col)], p);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const int f = (a[static_cast<std::size_t>(r * n + col)] * inv) % p;
      if (f == 0) continue;
      for (int c = 0; c < n; ++c) {
        auto& x = a[static_cast<std::size_t>(r * n + c)];
        x = ((x - f * a[static_cast<std::size_t>(col * n + c)]) % p + p) % p;
      }
    }
  }
  return true;
}

ModuleAutomorphism::ModuleAutomorphism(const FiniteModule& module, std::vector<std::uint32_t> matrix)
    : matrix_(std::move(matrix)) {
  const int n = module.rank();
  if (static_cast<int>(matrix_.size()) != n * n) throw StructuralError("automorphism matrix has wrong shape");
  for (auto c : matrix_) {
    if (c >= module.ring().size()) throw StructuralError("automorphism entry out of range");
  }
  if (!invertible(module, matrix_)) throw StructuralError("matrix is not invertible over R");
  const auto& ring = module.ring();
  forward_.resize(module.size());
  backward_.resize(module.size());
  std::vector<std::uint32_t> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
  for (std::uint32_t x = 0; x < module.size(); ++x) {
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = module.component_code(x, i);
    for (int i = 0; i < n; ++i) {
      std::uint32_t acc = 0;
      for (int j = 0; j < n; ++j) {
        acc = ring.add_code(acc, ring.mul_code(matrix_[static_cast<std::size_t>(i * n + j)], xs[static_cast<std::size_t>(j)]));
      }
      ys[static_cast<std::size_t>(i)] = acc;
    }
    const auto y = module.make_codes(ys).code;
    forward_[x] = y;
    backward_[y] = x;
  }
}

ModuleAutomorphism ModuleAutomorphism::identity(const FiniteModule& module) {
  const int n = module.rank();
  std::vector<std::uint32_t> m(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i * n + i)] = 1;
  return ModuleAutomorphism(module, std::move(m));
}

ModuleAutomorphism ModuleAutomorphism::random(const FiniteModule& module, std::mt19937_64& rng) {
  const int n = module.rank();
  std::uniform_int_distribution<std::uint32_t> pick(0, module.ring().size() - 1);
  std::vector<std::uint32_t> m(static_cast<std::size_t>(n * n));
  for (;;) {
    for (auto& c : m) c = pick(rng);
    if (invertible(module, m)) return ModuleAutomorphism(module, m);
  }
}

// ---------------------------------------------------------------------------
// LayeredSubspace

LayeredSubspace::LayeredSubspace(const TruncatedRing& ring)
    : p_(ring.p()), m_(ring.m()), codec_(ring.codec()) {}

std::vector<int> LayeredSubspace::reduce(std::vector<int> v) const {
  for (const auto& [piv, b] : basis_) {
    const int f = v[static_cast<std::size_t>(piv)];
    if (f == 0) continue;
    for (int j = 0; j < m_; ++j) {
      auto& x = v[static_cast<std::size_t>(j)];
      x = ((x - f * b[static_cast<std::size_t>(j)]) % p_ + p_) % p_;
    }
  }
  return v;
}

bool LayeredSubspace::insert(std::uint32_t code) {
  auto v = reduce(codec_.digits(code));
  int piv = -1;
  for (int j = 0; j < m_; ++j) {
    if (v[static_cast<std::size_t>(j)] != 0) {
      piv = j;
      break;
    }
  }
  if (piv < 0) return false;
  const int inv = mod_inverse(v[static_cast<std::size_t>(piv)], p_);
  for (auto& x : v) x = (x * inv) % p_;
  // Clear the new pivot column from existing rows to stay reduced.
  for (auto& [opiv, b] : basis_) {
    const int f = b[static_cast<std::size_t>(piv)];
    if (f == 0) continue;
    for (int j = 0; j < m_; ++j) {
      auto& x = b[static_cast<std::size_t>(j)];
      x = ((x - f * v[static_cast<std::size_t>(j)]) % p_ + p_) % p_;
    }
  }
  basis_.emplace_back(piv, std::move(v));
  std::sort(basis_.begin(), basis_.end());
  return true;
}

bool LayeredSubspace::contains(std::uint32_t code) const {
  const auto v = reduce(codec_.digits(code));
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

std::vector<int> LayeredSubspace::pivots() const {
  std::vector<int> out;
  for (const auto& [piv, b] : basis_) out.push_back(piv);
  return out;
}

bool LayeredSubspace::has_pivot(int j) const {
  return std::any_of(basis_.begin(), basis_.end(), [j](const auto& e) { return e.first == j; });
}

std::uint32_t LayeredSubspace::basis_vector(int j) const {
  for (const auto& [piv, b] : basis_) {
    if (piv == j) return codec_.pack(b);
  }
  throw StructuralError("no basis vector with pivot " + std::to_string(j));
}

int LayeredSubspace::coordinate(std::uint32_t v, int j) const {
  if (!has_pivot(j)) throw StructuralError("no basis vector with pivot " + std::to_string(j));
  // In reduced echelon form the coordinate on a basis vector is the entry at its pivot.
  return codec_.digit(v, j);
}

int LayeredSubspace::dimension_from(int j) const {
  return static_cast<int>(std::count_if(basis_.begin(), basis_.end(), [j](const auto& e) { return e.first >= j; }));
}

}  // namespace phasebound
