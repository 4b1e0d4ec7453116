#include "hadams/fixtures.hpp"

#include "hadams/probes.hpp"

namespace hadams {

Profile triangle_profile() { return Profile({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}); }

SequenceFamily make_moser_family(const Dimension& dim,
                                 const std::vector<long long>& indices,
                                 const QuadratureSpec& q) {
  std::vector<LogRadialFunction> members;
  members.reserve(indices.size());
  for (long long n : indices) {
    members.push_back(moser_function(dim, static_cast<double>(n)));
  }
  return SequenceFamily(dim, indices, std::move(members), q);
}

SequenceFamily make_two_level_fixture(const Dimension& dim,
                                      const std::vector<long long>& indices,
                                      const QuadratureSpec& q) {
  const ConcentrationFamily deep{moser_profile(),
                                 ScaleSequence::power_law(indices, 2.0), dim};
  const ConcentrationFamily shallow{triangle_profile(),
                                    ScaleSequence::power_law(indices, 1.0), dim};
  std::vector<LogRadialFunction> members;
  members.reserve(indices.size());
  for (long long n : indices) {
    members.push_back(combine(build_concentration(deep, n),
                              build_concentration(shallow, n), +1.0));
  }
  return SequenceFamily(dim, indices, std::move(members), q);
}

}  // namespace hadams
