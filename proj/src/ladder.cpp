// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cfloat>
#include <cmath>

#include <gg1/spectral.hpp>

namespace gg1 {
namespace {

constexpr double kPi = 3.14159265358979323846;

double newton_eps(double scale) {
  return std::max(1e-300, 200.0 * DBL_EPSILON * scale);
}

cplx pow_int_pos(cplx z, int p) {
  cplx acc{1.0, 0.0};
  for (int i = 0; i < p; ++i) acc *= z;
  return acc;
}

/// Appends `count` (u, w, z) triples. w_n is seeded from the core seed u_n
/// shifted by the previous rung's drift w_{n-1} - u_{n-1}, which keeps the
/// chain on its own branch even when several ladders interleave.
void append_pairs(RootLadder& lad, const HelperFunction& helper,
                  const CoreTerm& core, long count) {
  const long have = static_cast<long>(lad.size());
  const long nFrom = lad.n1 + have;
  std::vector<cplx> seeds = core_roots(core, nFrom, nFrom + count - 1);

  for (long i = 0; i < count; ++i) {
    const cplx u = seeds[static_cast<std::size_t>(i)];
    cplx wseed = u;
    if (!lad.w.empty()) wseed += lad.w.back() - lad.u.back();
    lad.u.push_back(u);

    int stepsW = 0;
    const cplx w =
        newton_refine([&helper](cplx t) { return helper.h_target(t); }, wseed,
                      newton_eps(helper.h_scale(wseed)), 50, &stepsW);
    lad.w.push_back(w);
    lad.newtonStepsW.push_back(stepsW);

    int stepsZ = 0;
    const cplx z =
        newton_refine([&helper](cplx t) { return helper.f_target(t); }, w,
                      newton_eps(helper.f_scale(w)), 50, &stepsZ);
    lad.z.push_back(z);
    lad.newtonStepsZ.push_back(stepsZ);
    lad.residualF.push_back(std::abs(helper.f_num.eval(z)) /
                            std::abs(pow_int_pos(z, helper.kF)));
  }
}

void drop_ladder_duplicates(std::vector<OriginRoot>& origin,
                            const std::vector<cplx>& ladder_z) {
  origin.erase(std::remove_if(origin.begin(), origin.end(),
                              [&ladder_z](const OriginRoot& r) {
                                for (const cplx& z : ladder_z)
                                  if (std::abs(r.z - z) <
                                      1e-6 * std::max(1.0, std::abs(z)))
                                    return true;
                                return false;
                              }),
               origin.end());
}

}  // namespace

RootLadder build_ladder(const QueueModel& model, const HelperFunction& helper,
                        long count, std::size_t branch) {
  if (branch >= helper.cores.size())
    fail(Errc::ParseError, "build_ladder: no such core branch");
  if (count < 1) fail(Errc::ParseError, "build_ladder: count must be >= 1");
  const CoreTerm& core = helper.cores[branch];

  RootLadder lad;
  lad.branch = branch;
  lad.n1 = core.odd_parity() ? 0 : 1;
  append_pairs(lad, helper, core, count);

  lad.originRoots = origin_roots(model);
  drop_ladder_duplicates(lad.originRoots, lad.z);
  return lad;
}

RootLadder extend_ladder(const RootLadder& ladder, const QueueModel&,
                         const HelperFunction& helper, long count) {
  if (count < 0) fail(Errc::ParseError, "extend_ladder: count must be >= 0");
  if (ladder.branch >= helper.cores.size())
    fail(Errc::ParseError, "extend_ladder: ladder branch not in helper");
  RootLadder lad = ladder;
  if (count > 0) append_pairs(lad, helper, helper.cores[lad.branch], count);
  return lad;
}

}  // namespace gg1
