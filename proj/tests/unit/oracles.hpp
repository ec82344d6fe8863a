#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nswm/ids_channel.hpp"

namespace nswm::testing {

// Probability of receiving exactly `received` from `transmitted`, summed
// over every channel event sequence by depth-first enumeration of the
// per-base decisions (insert / delete / transmit-with-substitution). Pure
// channel semantics: no drift windows, no HMM machinery.
double event_enumeration_likelihood(std::span<const uint8_t> received, std::span<const uint8_t> transmitted,
                                    const IdsParams& params);

// Brute-force per-symbol likelihoods for an isolated barcode: averages
// event_enumeration_likelihood over all q^n symbol combinations. Rows are
// absolute probabilities P(r | d_i = a) under uniform priors elsewhere.
// blocks[(i*q + a)*u + y] gives the transmitted symbol.
std::vector<double> brute_force_symbol_likelihoods(std::span<const uint8_t> received, int n, int q, int u,
                                                   std::span<const uint8_t> blocks, const IdsParams& params);

// Quadratic-scan filter oracles.
int brute_force_hairpin(std::string_view seq);
int brute_force_heteroduplex(std::string_view a, std::string_view b);

}  // namespace nswm::testing
