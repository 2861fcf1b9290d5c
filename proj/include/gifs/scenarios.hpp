#pragma once

#include <vector>

#include "gifs/system.hpp"

namespace gifs {

// The countable ladder: vertices 1, 2, ...; edges 1u for every u and v(v-1)
// for v >= 2; each T_vu a similarity of ratio 2^-v on the real line, with
// J_v = B(3v, 2^-v) and O_v = B(3v, 1). Materialized on vertices 1..k.
GifsSystem ladder_system(Index k);
SystemFamily ladder_family(std::vector<Index> horizons = {2, 4, 8, 16, 32});
// The finite subsystem on {1, 2} with edges 11, 12, 21.
GifsSystem ladder_subsystem();

// One-vertex similarity system on [0, 1] with images laid out left to right.
// Requires sum of ratios <= 1 (touching images when equal).
GifsSystem moran_system(const std::vector<double>& ratios);
// Disjoint union of full shifts, one vertex per group.
GifsSystem disjoint_moran(const std::vector<std::vector<double>>& groups);

// {m + n i : m >= 1} ordered by shell max(m, |n|), then m, then n; the first
// letters form the box |m|, |n| <= N.
std::vector<Complex> gaussian_box(int N);
std::vector<Complex> real_alphabet(int max_m);

// Complex continued fractions on J = closed B(1/2, 1/2), O = B(1/2, 3/4).
// Letters of `sub` keep T_e(z) = 1/(e + z); the other letters of `full` use
// 1/(e + 1/2 + eps (z - 1/2)). Letter order: `sub`, then `full` minus `sub`.
GifsSystem perturbed_cf(const std::vector<Complex>& sub, const std::vector<Complex>& full, double eps);
GifsSystem cf_system(const std::vector<Complex>& alphabet);

// Countable family over the E_* boxes: letters of `sub` plus the box of
// size N at horizon N, with a p-series tail witness (threshold 1).
SystemFamily perturbed_cf_box_family(const std::vector<Complex>& sub, double eps,
                                     std::vector<Index> boxes = {2, 4, 8});
SystemFamily cf_box_family(std::vector<Index> boxes = {2, 4, 8});

// Sum over letters beyond the box of size N of sup_J |T_e'|^s, bounded by an
// integral comparison; +inf for s <= 1.
double cf_box_tail_mass(int N, double s);

}  // namespace gifs
