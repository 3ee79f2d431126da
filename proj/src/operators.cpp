#include "phasebound/operators.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace phasebound {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= kFnvPrime;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PointSpace

PointSpace::PointSpace(const PhaseData& data) {
  std::uint64_t size = 1;
  for (const auto& b : data.blocks()) {
    modules_.push_back(b.module());
    strides_.push_back(static_cast<std::uint32_t>(size));
    size *= b.module().size();
    if (size > kMaxModuleSize) throw SizeCapError("product of block modules exceeds 65536 points");
  }
  size_ = static_cast<std::uint32_t>(size);
}

std::uint32_t PointSpace::replace(std::uint32_t point, std::size_t block, std::uint32_t coord) const {
  const auto old = coordinate(point, block);
  return point - old * strides_[block] + coord * strides_[block];
}

// ---------------------------------------------------------------------------
// MonomialOperator

MonomialOperator MonomialOperator::identity(std::uint32_t size, int p) {
  MonomialOperator op;
  op.p = p;
  op.perm.resize(size);
  std::iota(op.perm.begin(), op.perm.end(), 0u);
  op.diag.assign(size, 0);
  return op;
}

bool MonomialOperator::is_identity() const {
  for (std::uint32_t x = 0; x < size(); ++x) {
    if (perm[x] != x || diag[x] != 0) return false;
  }
  return true;
}

bool MonomialOperator::is_diagonal() const {
  for (std::uint32_t x = 0; x < size(); ++x) {
    if (perm[x] != x) return false;
  }
  return true;
}

std::size_t MonomialOperatorHash::operator()(const MonomialOperator& op) const {
  std::uint64_t h = kFnvOffset;
  for (std::uint32_t x = 0; x < op.size(); ++x) {
    h ^= op.perm[x];
    h *= kFnvPrime;
    h ^= op.diag[x];
    h *= kFnvPrime;
  }
  return static_cast<std::size_t>(h);
}

MonomialOperator compose(const MonomialOperator& x, const MonomialOperator& y) {
  if (x.size() != y.size() || x.p != y.p) throw StructuralError("composing operators on different spaces");
  MonomialOperator out;
  out.p = x.p;
  out.perm.resize(x.size());
  out.diag.resize(x.size());
  for (std::uint32_t pt = 0; pt < x.size(); ++pt) {
    out.perm[pt] = x.perm[y.perm[pt]];
    out.diag[pt] = static_cast<std::uint8_t>((y.diag[pt] + x.diag[y.perm[pt]]) % x.p);
  }
  return out;
}

MonomialOperator inverse(const MonomialOperator& x) {
  MonomialOperator out;
  out.p = x.p;
  out.perm.resize(x.size());
  out.diag.resize(x.size());
  for (std::uint32_t pt = 0; pt < x.size(); ++pt) out.perm[x.perm[pt]] = pt;
  for (std::uint32_t pt = 0; pt < x.size(); ++pt) {
    out.diag[pt] = static_cast<std::uint8_t>((x.p - x.diag[out.perm[pt]]) % x.p);
  }
  return out;
}

MonomialOperator commutator(const MonomialOperator& x, const MonomialOperator& y) {
  return compose(compose(x, y), compose(inverse(x), inverse(y)));
}

MonomialOperator translation_operator(const PhaseData& data, std::size_t block, std::uint32_t a) {
  const PointSpace space(data);
  const auto& module = data.block(block).module();
  auto op = MonomialOperator::identity(space.size(), data.p());
  for (std::uint32_t pt = 0; pt < space.size(); ++pt) {
    op.perm[pt] = space.replace(pt, block, module.add(space.coordinate(pt, block), a));
  }
  return op;
}

MonomialOperator multiplication_operator(const PhaseData& data, std::size_t block, const QuadraticPhase& phi) {
  const PointSpace space(data);
  const auto& chi = data.block(block).character();
  auto op = MonomialOperator::identity(space.size(), data.p());
  for (std::uint32_t pt = 0; pt < space.size(); ++pt) {
    op.diag[pt] = static_cast<std::uint8_t>(chi.eval_code(phi.at_code(space.coordinate(pt, block))));
  }
  return op;
}

MonomialOperator realize(const PhaseData& data, GeneratorRef ref) {
  const auto& g = data.generator(ref);
  return realize_pair(data, ref.block, twisted_pair(g));
}

// ---------------------------------------------------------------------------
// Twisted pairs

TwistedPair twisted_pair(const PhaseGenerator& g) {
  return {g.translation.code, std::vector<std::uint32_t>(g.phase.table().begin(), g.phase.table().end())};
}

TwistedPair twisted_compose(const FiniteModule& module, const TwistedPair& x, const TwistedPair& y) {
  const auto& ring = module.ring();
  TwistedPair out;
  out.translation = module.add(x.translation, y.translation);
  out.values.resize(module.size());
  for (std::uint32_t pt = 0; pt < module.size(); ++pt) {
    out.values[pt] = ring.add_code(x.values[module.add(pt, y.translation)], y.values[pt]);
  }
  return out;
}

TwistedPair twisted_inverse(const FiniteModule& module, const TwistedPair& x) {
  const auto& ring = module.ring();
  TwistedPair out;
  out.translation = module.neg(x.translation);
  out.values.resize(module.size());
  for (std::uint32_t pt = 0; pt < module.size(); ++pt) {
    out.values[pt] = ring.codec().neg(x.values[module.add(pt, out.translation)]);
  }
  return out;
}

TwistedPair twisted_commutator(const FiniteModule& module, const TwistedPair& x, const TwistedPair& y) {
  return twisted_compose(module, twisted_compose(module, x, y),
                         twisted_compose(module, twisted_inverse(module, x), twisted_inverse(module, y)));
}

MonomialOperator realize_pair(const PhaseData& data, std::size_t block, const TwistedPair& x) {
  const PointSpace space(data);
  const auto& module = data.block(block).module();
  const auto& chi = data.block(block).character();
  auto op = MonomialOperator::identity(space.size(), data.p());
  for (std::uint32_t pt = 0; pt < space.size(); ++pt) {
    const auto c = space.coordinate(pt, block);
    op.perm[pt] = space.replace(pt, block, module.add(c, x.translation));
    op.diag[pt] = static_cast<std::uint8_t>(chi.eval_code(x.values[c]));
  }
  return op;
}

// ---------------------------------------------------------------------------
// Closure

ClosureResult generated_closure(const PhaseData& data, int depth_limit, std::size_t max_operators) {
  const PointSpace space(data);
  ClosureResult result;
  std::unordered_set<MonomialOperator, MonomialOperatorHash> seen;
  std::vector<MonomialOperator> gens;
  std::vector<MonomialOperator> layer;
  for (const auto& ref : data.generator_refs()) {
    auto op = realize(data, ref);
    if (seen.insert(op).second) {
      gens.push_back(op);
      layer.push_back(std::move(op));
    }
  }
  if (layer.empty()) {
    layer.push_back(MonomialOperator::identity(space.size(), data.p()));
    seen.insert(layer.front());
  }
  result.layers.push_back(layer);
  for (int t = 1; t <= depth_limit; ++t) {
    std::vector<MonomialOperator> next;
    for (const auto& x : result.layers.back()) {
      for (const auto& g : gens) {
        for (auto cand : {compose(x, g), commutator(x, g)}) {
          if (seen.insert(cand).second) {
            if (seen.size() > max_operators) throw SizeCapError("operator closure exceeds cap");
            next.push_back(std::move(cand));
          }
        }
      }
    }
    if (next.empty()) {
      result.stabilization_index = t - 1;
      break;
    }
    result.layers.push_back(std::move(next));
  }
  if (!result.stabilization_index && gens.empty()) result.stabilization_index = 0;
  result.total = seen.size();
  return result;
}

// ---------------------------------------------------------------------------
// Signature

std::string InteractionSignature::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fingerprint));
  return buf;
}

InteractionSignature interaction_signature(const PhaseData& data, const SignatureLimits& limits) {
  const PointSpace space(data);
  std::vector<MonomialOperator> gens;
  for (const auto& ref : data.generator_refs()) {
    auto op = realize(data, ref);
    if (op.is_identity()) continue;
    if (std::find(gens.begin(), gens.end(), op) == gens.end()) gens.push_back(std::move(op));
  }
  if (gens.size() > limits.max_generators) {
    throw SignatureTooLarge("more than " + std::to_string(limits.max_generators) + " distinct generators", {});
  }
  const std::size_t r = gens.size();

  // Elements by breadth-first discovery under right multiplication.
  std::vector<MonomialOperator> elems{MonomialOperator::identity(space.size(), data.p())};
  std::vector<int> length{0};
  std::unordered_map<MonomialOperator, std::uint32_t, MonomialOperatorHash> index{{elems.front(), 0}};
  std::vector<std::uint32_t> mult;  // mult[e * r + k] = index of e∘g_k

  auto profile_of = [&](std::size_t count) {
    std::map<std::pair<int, int>, int> prof;
    for (std::size_t e = 0; e < count; ++e) {
      int order = 1;
      auto pw = elems[e];
      while (!pw.is_identity() && order <= static_cast<int>(limits.max_group)) {
        pw = compose(pw, elems[e]);
        ++order;
      }
      ++prof[{order, length[e]}];
    }
    return prof;
  };

  for (std::size_t e = 0; e < elems.size(); ++e) {
    for (std::size_t k = 0; k < r; ++k) {
      auto prod = compose(elems[e], gens[k]);
      auto it = index.find(prod);
      if (it == index.end()) {
        if (elems.size() >= limits.max_group || (elems.size() + 1) * space.size() > limits.max_cells) {
          throw SignatureTooLarge("generated group exceeds signature cap", profile_of(std::min<std::size_t>(elems.size(), 256)));
        }
        it = index.emplace(prod, static_cast<std::uint32_t>(elems.size())).first;
        elems.push_back(std::move(prod));
        length.push_back(length[e] + 1);
      }
      mult.push_back(it->second);
    }
  }
  const std::size_t n = elems.size();

  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::uint32_t> best;
  std::vector<std::uint32_t> relabel(n), table;
  do {
    // Breadth-first renumbering with generators taken in `order`.
    std::fill(relabel.begin(), relabel.end(), UINT32_MAX);
    std::vector<std::uint32_t> queue{0};
    relabel[0] = 0;
    table.clear();
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const auto e = queue[q];
      for (std::size_t k = 0; k < r; ++k) {
        const auto f = mult[e * r + order[k]];
        if (relabel[f] == UINT32_MAX) {
          relabel[f] = static_cast<std::uint32_t>(queue.size());
          queue.push_back(f);
        }
        table.push_back(relabel[f]);
      }
    }
    if (best.empty() || table < best) best = table;
  } while (std::next_permutation(order.begin(), order.end()));

  InteractionSignature sig;
  sig.size = n;
  sig.order_profile = profile_of(n);
  std::uint64_t h = kFnvOffset;
  fnv(h, r);
  fnv(h, n);
  for (auto v : best) fnv(h, v);
  for (const auto& [key, count] : sig.order_profile) {
    fnv(h, static_cast<std::uint64_t>(key.first));
    fnv(h, static_cast<std::uint64_t>(key.second));
    fnv(h, static_cast<std::uint64_t>(count));
  }
  sig.fingerprint = h;
  return sig;
}

}  // namespace phasebound
