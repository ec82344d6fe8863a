#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nswm/outer_code.hpp"

namespace nswm {

// Bijection between quaternary symbols and nucleotide characters.
class NucleotideMap {
public:
    NucleotideMap() : to_char_{'A', 'C', 'G', 'T'} { build_inverse(); }

    // Parses a 4-character permutation of ACGT, e.g. "ACGT" maps 0->A.
    static NucleotideMap from_string(std::string_view s);

    std::string to_string() const { return std::string(to_char_.begin(), to_char_.end()); }

    char symbol_to_char(uint8_t s) const { return to_char_[s]; }

    std::string encode(std::span<const uint8_t> symbols) const;

    // Strict decoding: throws std::invalid_argument on any non-ACGT character.
    std::vector<uint8_t> decode(std::string_view seq) const;

    // Lenient decoding: unknown characters (N and friends) become
    // kUnknownSymbol instead of an error.
    std::vector<uint8_t> decode_lenient(std::string_view seq) const;

private:
    void build_inverse();

    std::array<char, 4> to_char_;
    std::array<int8_t, 256> from_char_;
};

// The q fixed quaternary sequences of length u used to expand outer symbols.
struct InnerCodebook {
    int q = 0;
    int u = 0;
    std::vector<uint8_t> words;  // q * u
    int min_distance = 0;

    std::span<const uint8_t> word(int a) const {
        return {words.data() + static_cast<size_t>(a) * u, static_cast<size_t>(u)};
    }
};

struct CodebookSearchParams {
    int restarts = 64;
    int samples_per_slot = 4096;
};

// Randomized greedy search for q words of length u maximizing the minimum
// pairwise Hamming distance. Deterministic per seed.
InnerCodebook build_inner_codebook(int q, int u, uint64_t seed, const CodebookSearchParams& search = {});

// Brute-force recount over all pairs; oracle for InnerCodebook::min_distance.
int min_pairwise_distance(const InnerCodebook& codebook);

// Concatenates the inner-codebook expansions of the codeword symbols.
std::vector<uint8_t> expand(std::span<const uint8_t> codeword, const InnerCodebook& codebook);

// Symbol-wise addition over GF(4); its own inverse (characteristic 2).
std::vector<uint8_t> imprint(std::span<const uint8_t> carrier, std::span<const uint8_t> watermark);
std::vector<uint8_t> unimprint(std::span<const uint8_t> imprinted, std::span<const uint8_t> watermark);

struct CandidateBarcode {
    uint64_t message_index = 0;
    std::vector<uint8_t> carrier;    // expanded codeword, length l
    std::vector<uint8_t> imprinted;  // carrier + watermark over GF(4)
    std::string nucleotides;
};

// All q^k candidate barcodes in message-index order.
std::vector<CandidateBarcode> build_candidate_set(const OuterCode& code, const InnerCodebook& codebook,
                                                  std::span<const uint8_t> watermark,
                                                  const NucleotideMap& mapping);

}  // namespace nswm
