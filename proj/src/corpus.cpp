#include "hadams/corpus.hpp"

#include <cmath>

#include "hadams/norms.hpp"

namespace hadams {

uint64_t Rng::next_u64() {
  // splitmix64
  uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
}

std::vector<LogRadialFunction> make_corpus(const Dimension& dim,
                                           const CorpusSpec& spec) {
  Rng rng(spec.seed);
  std::vector<LogRadialFunction> out;
  out.reserve(spec.count);

  for (int i = 0; i < spec.count; ++i) {
    const int segments = rng.uniform_int(spec.min_segments, spec.max_segments);
    std::vector<double> s, v;
    s.push_back(rng.uniform(spec.s0_min, spec.s0_max));
    v.push_back(0.0);
    for (int j = 0; j < segments; ++j) {
      s.push_back(s.back() + rng.uniform(spec.min_step, spec.max_step));
      const double dv = spec.admissible ? rng.uniform(0.0, 1.0)
                                        : rng.uniform(-1.0, 1.0);
      v.push_back(v.back() + dv);
    }
    LogRadialFunction f(dim, std::move(s), std::move(v));
    const double hardy = hardy_gradient_norm(f);
    const double target = rng.uniform(spec.hardy_lo, spec.hardy_hi);
    out.push_back(hardy > 0 ? f.scaled(target / hardy) : f);
  }
  return out;
}

}  // namespace hadams
