#pragma once

#include <vector>

#include "hadams/concentration.hpp"
#include "hadams/decomposition.hpp"

namespace hadams {

// 0 -> 1 on [0,1], back to 0 on [1,2], 0 after; ||psi'||^2 = 2
Profile triangle_profile();

// {f_n : n in indices}
SequenceFamily make_moser_family(const Dimension& dim,
                                 const std::vector<long long>& indices,
                                 const QuadratureSpec& q);

// The planted two-level family: the Moser profile L at the deep scale n^2
// plus the triangle profile at the shallow scale n.  With this pairing the
// cross term of the Hardy energies vanishes identically (the triangle's
// derivative integrates to zero against the constant slope of L), so the
// energy ledger is exact at every finite index.
SequenceFamily make_two_level_fixture(const Dimension& dim,
                                      const std::vector<long long>& indices,
                                      const QuadratureSpec& q);

}  // namespace hadams
