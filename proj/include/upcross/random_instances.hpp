#pragma once

#include "upcross/covering.hpp"
#include "upcross/interval.hpp"
#include "upcross/rng.hpp"

#include <cstddef>

namespace upcross {

/// Between 1 and max_count intervals with endpoints in [1; max_endpoint].
IntervalSet random_collection(TrialStream& rng, std::size_t max_count, Index max_endpoint);

/// Valid tower of the given height over 1..max_chains base indices.
/// Consecutive levels grow by ceil((2/eps^2) f) with f uniform in [1, 3],
/// bottom sizes are uniform in [1; 20], and base indices are spread
/// log-uniformly over the range of top sizes so that chains overlap at all
/// scales. Throws std::overflow_error if sizes could exceed 2^60.
Tower random_tower(TrialStream& rng, double eps, std::size_t height, std::size_t max_chains);

/// Paired tower with levels 0..top_level satisfying |V(k)| >= (2/eps^2)|U(k)|
/// and U(k+1) ⊇ V(k). Growth slack factors shrink from 3 towards 1 as needed
/// to keep sizes below 2^60; throws std::overflow_error if even factor 1
/// does not fit.
PairedTower random_paired_tower(TrialStream& rng, double eps, std::size_t top_level, std::size_t max_chains);

/// k nested pairs with |V|/|U| just above 1 + delta (up to 25% slack) and
/// |U(m+1)| one or two larger than |V(m)|.
PairSequence random_pair_sequence(TrialStream& rng, double delta, std::size_t k);

} // namespace upcross
