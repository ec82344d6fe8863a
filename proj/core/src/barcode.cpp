#include "nswm/barcode.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "nswm/ids_channel.hpp"
#include "nswm/rng.hpp"

namespace nswm {

NucleotideMap NucleotideMap::from_string(std::string_view s) {
    if (s.size() != 4) {
        throw std::invalid_argument("nucleotide mapping must have 4 characters");
    }
    NucleotideMap map;
    std::array<bool, 256> seen{};
    for (int i = 0; i < 4; ++i) {
        const char c = s[i];
        if ((c != 'A' && c != 'C' && c != 'G' && c != 'T') || seen[static_cast<unsigned char>(c)]) {
            throw std::invalid_argument("nucleotide mapping must be a permutation of ACGT");
        }
        seen[static_cast<unsigned char>(c)] = true;
        map.to_char_[i] = c;
    }
    map.build_inverse();
    return map;
}

void NucleotideMap::build_inverse() {
    from_char_.fill(-1);
    for (int i = 0; i < 4; ++i) {
        from_char_[static_cast<unsigned char>(to_char_[i])] = static_cast<int8_t>(i);
    }
}

std::string NucleotideMap::encode(std::span<const uint8_t> symbols) const {
    std::string out;
    out.reserve(symbols.size());
    for (uint8_t s : symbols) {
        if (s > 3) {
            throw std::invalid_argument("symbol out of GF(4) range");
        }
        out.push_back(to_char_[s]);
    }
    return out;
}

std::vector<uint8_t> NucleotideMap::decode(std::string_view seq) const {
    std::vector<uint8_t> out;
    out.reserve(seq.size());
    for (char c : seq) {
        const int8_t s = from_char_[static_cast<unsigned char>(c)];
        if (s < 0) {
            throw std::invalid_argument(std::string("non-ACGT character '") + c + "' in sequence");
        }
        out.push_back(static_cast<uint8_t>(s));
    }
    return out;
}

std::vector<uint8_t> NucleotideMap::decode_lenient(std::string_view seq) const {
    std::vector<uint8_t> out;
    out.reserve(seq.size());
    for (char c : seq) {
        const int8_t s = from_char_[static_cast<unsigned char>(c)];
        out.push_back(s < 0 ? kUnknownSymbol : static_cast<uint8_t>(s));
    }
    return out;
}

namespace {

int hamming(std::span<const uint8_t> a, std::span<const uint8_t> b) {
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        d += a[i] != b[i];
    }
    return d;
}

}  // namespace

InnerCodebook build_inner_codebook(int q, int u, uint64_t seed, const CodebookSearchParams& search) {
    if (q < 1 || u < 1) {
        throw std::invalid_argument("need q >= 1 and u >= 1");
    }
    double capacity = 1.0;
    for (int i = 0; i < u; ++i) {
        capacity *= 4.0;
    }
    if (capacity < q) {
        throw std::invalid_argument("4^u < q: not enough distinct words of length " + std::to_string(u));
    }

    std::vector<uint8_t> best_words;
    int best_min = -1;
    std::vector<uint8_t> cand(u);
    for (int restart = 0; restart < search.restarts; ++restart) {
        auto rng = make_stream(seed, static_cast<uint64_t>(restart));
        std::uniform_int_distribution<int> base(0, 3);
        std::vector<uint8_t> words;
        words.reserve(static_cast<size_t>(q) * u);
        int set_min = u + 1;
        for (int slot = 0; slot < q; ++slot) {
            std::vector<uint8_t> best_cand;
            int best_dist = -1;
            for (int s = 0; s < search.samples_per_slot; ++s) {
                for (int i = 0; i < u; ++i) {
                    cand[i] = static_cast<uint8_t>(base(rng));
                }
                int dist = u + 1;
                for (int other = 0; other < slot; ++other) {
                    dist = std::min(dist, hamming(cand, {words.data() + static_cast<size_t>(other) * u,
                                                         static_cast<size_t>(u)}));
                }
                if (dist > best_dist) {
                    best_dist = dist;
                    best_cand = cand;
                    if (slot == 0 || best_dist >= set_min) {
                        break;  // cannot raise the set minimum further
                    }
                }
            }
            words.insert(words.end(), best_cand.begin(), best_cand.end());
            if (slot > 0) {
                set_min = std::min(set_min, best_dist);
            }
        }
        if (set_min > best_min) {
            best_min = set_min;
            best_words = std::move(words);
        }
    }

    if (q > 1 && best_min < 1) {
        throw std::runtime_error("inner codebook search produced duplicate words; change seed or raise samples_per_slot");
    }
    InnerCodebook codebook;
    codebook.q = q;
    codebook.u = u;
    codebook.words = std::move(best_words);
    codebook.min_distance = q > 1 ? best_min : u;
    return codebook;
}

int min_pairwise_distance(const InnerCodebook& codebook) {
    int best = codebook.u + 1;
    for (int a = 0; a < codebook.q; ++a) {
        for (int b = a + 1; b < codebook.q; ++b) {
            best = std::min(best, hamming(codebook.word(a), codebook.word(b)));
        }
    }
    return best;
}

std::vector<uint8_t> expand(std::span<const uint8_t> codeword, const InnerCodebook& codebook) {
    std::vector<uint8_t> carrier;
    carrier.reserve(codeword.size() * codebook.u);
    for (uint8_t d : codeword) {
        if (d >= codebook.q) {
            throw std::invalid_argument("codeword symbol out of codebook range");
        }
        const auto w = codebook.word(d);
        carrier.insert(carrier.end(), w.begin(), w.end());
    }
    return carrier;
}

std::vector<uint8_t> imprint(std::span<const uint8_t> carrier, std::span<const uint8_t> watermark) {
    if (carrier.size() != watermark.size()) {
        throw std::invalid_argument("carrier and watermark lengths differ");
    }
    std::vector<uint8_t> out(carrier.size());
    for (size_t i = 0; i < carrier.size(); ++i) {
        out[i] = carrier[i] ^ watermark[i];
    }
    return out;
}

std::vector<uint8_t> unimprint(std::span<const uint8_t> imprinted, std::span<const uint8_t> watermark) {
    return imprint(imprinted, watermark);
}

std::vector<CandidateBarcode> build_candidate_set(const OuterCode& code, const InnerCodebook& codebook,
                                                  std::span<const uint8_t> watermark,
                                                  const NucleotideMap& mapping) {
    if (code.field().order() != codebook.q) {
        throw std::invalid_argument("codebook size does not match the field order");
    }
    const size_t l = static_cast<size_t>(code.n()) * codebook.u;
    if (watermark.size() != l) {
        throw std::invalid_argument("watermark length must be n * u");
    }
    const uint64_t count = code.message_count();
    std::vector<CandidateBarcode> out;
    out.reserve(count);
    std::unordered_set<std::string> distinct;
    distinct.reserve(count * 2);
    for (uint64_t idx = 0; idx < count; ++idx) {
        CandidateBarcode cb;
        cb.message_index = idx;
        cb.carrier = expand(code.encode(code.message_from_index(idx)), codebook);
        cb.imprinted = imprint(cb.carrier, watermark);
        cb.nucleotides = mapping.encode(cb.imprinted);
        if (!distinct.insert(cb.nucleotides).second) {
            throw std::logic_error("duplicate candidate barcode; inner codebook words must be distinct");
        }
        out.push_back(std::move(cb));
    }
    return out;
}

}  // namespace nswm
