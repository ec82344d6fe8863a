#pragma once

#include <cstdint>
#include <span>

#include "nswm/inner_decoder.hpp"

namespace nswm {

// Context-aware barcode boundary estimation from the known flanking
// sequences. Reads start at the left flank, so the left pass is anchored
// with a point mass at drift zero; the right pass walks the consensus
// backwards from a uniform final-drift distribution.

// Returns F_1 anchored at the expected barcode start (= flank length).
// A zero-mass result means the boundary was lost.
DriftDistribution estimate_left(std::span<const uint8_t> read, std::span<const uint8_t> flank,
                                const IdsParams& params, const DriftWindow& window);

// Returns B_{n+1} anchored at the expected barcode end, which is
// `consensus_start` (= flank length + barcode length) in read coordinates.
DriftDistribution estimate_right(std::span<const uint8_t> read, int consensus_start,
                                 std::span<const uint8_t> consensus, const IdsParams& params,
                                 const DriftWindow& window);

}  // namespace nswm
