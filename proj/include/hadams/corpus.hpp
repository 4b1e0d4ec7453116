#pragma once

#include <cstdint>
#include <vector>

#include "hadams/log_radial.hpp"

namespace hadams {

// Deterministic uniform doubles from a 64-bit generator state (splitmix64).
// Self-contained so corpora are reproducible across platforms and standard
// library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  int uniform_int(int lo, int hi);        // inclusive

 private:
  uint64_t state_;
};

// Seeded random piecewise-linear test functions.
//
// general mode:    v(s_0) = 0, values follow a signed random walk.
// admissible mode: projection to the class of Prop.-4.2-type functions:
//                  nonnegative increments (u radially nonincreasing,
//                  nonnegative, compactly supported) and a rescale so the
//                  Hardy-gradient norm lands in [hardy_lo, hardy_hi].
struct CorpusSpec {
  uint64_t seed = 1;
  int count = 50;
  int min_segments = 3;
  int max_segments = 12;
  double s0_min = 0.0;
  double s0_max = 0.5;
  double min_step = 0.05;
  double max_step = 1.5;
  double hardy_lo = 0.3;
  double hardy_hi = 1.0;
  bool admissible = true;
};

std::vector<LogRadialFunction> make_corpus(const Dimension& dim,
                                           const CorpusSpec& spec);

}  // namespace hadams
