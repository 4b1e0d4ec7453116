#pragma once

namespace hadams {

// Ambient space is R^{2N}.  All constants that depend only on N are computed
// once (in extended precision) and cached here.
//
//   gamma        sharp exponent  4 pi^N N / (N-1)!
//   sphere_area  |S^{2N-1}| = 2 pi^N / (N-1)!
//   ball_volume  |B_1(0)|   = pi^N / N!
//   beta_h2n     N! pi^N 2^{2N}, the H^N-space constant (comparison only)
//
// Identity used throughout: gamma == 2N * sphere_area.
struct Dimension {
  int n = 2;
  double gamma = 0;
  double sphere_area = 0;
  double ball_volume = 0;
  double beta_h2n = 0;

  explicit Dimension(int N);

  // log-coordinate volume weight exponent: dx -> sphere_area * e^{-2Ns} ds
  double volume_rate() const { return 2.0 * n; }
};

}  // namespace hadams
