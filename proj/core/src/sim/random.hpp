#pragma once

// Deterministic per-purpose random streams. Each stream is seeded from the
// run seed, a purpose tag and an index, so adding a stream never perturbs
// the draws of any other.

#include <cmath>
#include <cstdint>
#include <random>

#include "spdsim/arch/model.hpp"

namespace spdsim::sim {

enum class StreamKind : std::uint64_t {
  UserThink = 1,
  UserScenario = 2,
  Demand = 3,
  Branch = 4,
};

inline std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t kind, std::uint64_t index) {
  std::uint64_t x = seed ^ (kind * 0x9E3779B97F4A7C15ull) ^ (index * 0xBF58476D1CE4E5B9ull);
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class RandomStream {
 public:
  RandomStream() : engine_(0) {}
  RandomStream(std::uint64_t seed, StreamKind kind, std::uint64_t index)
      : engine_(mixSeed(seed, static_cast<std::uint64_t>(kind), index)) {}

  // [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Constants consume no randomness, so constant workloads stay exact.
  double sample(const arch::StochasticExpression& e) {
    if (const auto* c = std::get_if<arch::ConstantExpr>(&e)) return c->value;
    if (const auto* x = std::get_if<arch::ExponentialExpr>(&e))
      return -x->mean * std::log1p(-uniform01());
    const auto& u = std::get<arch::UniformExpr>(e);
    return u.low + (u.high - u.low) * uniform01();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace spdsim::sim
