#include "hadams/dimension.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hadams {

Dimension::Dimension(int N) : n(N) {
  if (N < 2) {
    throw std::invalid_argument("Dimension: N must be >= 2, got " +
                                std::to_string(N));
  }
  const long double pi = acosl(-1.0L);
  long double pi_n = 1.0L;
  for (int i = 0; i < N; ++i) pi_n *= pi;
  long double fact_nm1 = 1.0L;
  for (int i = 2; i < N; ++i) fact_nm1 *= static_cast<long double>(i);
  const long double fact_n = fact_nm1 * static_cast<long double>(N);
  long double two_pow = 1.0L;
  for (int i = 0; i < 2 * N; ++i) two_pow *= 2.0L;

  gamma = static_cast<double>(4.0L * pi_n * static_cast<long double>(N) / fact_nm1);
  sphere_area = static_cast<double>(2.0L * pi_n / fact_nm1);
  ball_volume = static_cast<double>(pi_n / fact_n);
  beta_h2n = static_cast<double>(fact_n * pi_n * two_pow);
}

}  // namespace hadams
