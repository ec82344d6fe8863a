#include "oracles.hpp"

#include <algorithm>
#include <string>

namespace nswm::testing {

namespace {

struct EventEnumerator {
    std::span<const uint8_t> received;
    std::span<const uint8_t> transmitted;
    const IdsParams& params;

    // Sum of P(event path) over all paths that output exactly `received`.
    // `ti` symbols transmitted so far, `ri` received symbols produced.
    double walk(size_t ti, size_t ri) const {
        if (ti == transmitted.size()) {
            return ri == received.size() ? 1.0 : 0.0;
        }
        const uint8_t t = transmitted[ti];
        const double pt = params.p_trans();
        double total = 0.0;
        double prefix = 1.0;  // probability of the insertions taken so far for this base
        for (int ins = 0;; ++ins) {
            const bool capped = ins == params.max_insertions;
            const double p_delete = params.p_del;
            const double p_transmit = capped ? 1.0 - params.p_del : pt;
            total += prefix * p_delete * walk(ti + 1, ri + ins);
            const size_t pos = ri + ins;
            if (pos < received.size()) {
                const double p_observe =
                    received[pos] == t ? 1.0 - params.p_sub : params.p_sub / 3.0;
                total += prefix * p_transmit * p_observe * walk(ti + 1, pos + 1);
            }
            if (capped || pos >= received.size()) {
                break;  // further insertions would overrun the received string
            }
            // A specific inserted base has probability p_ins / 4 and must
            // match the received symbol exactly.
            prefix *= params.p_ins / 4.0;
        }
        return total;
    }
};

}  // namespace

double event_enumeration_likelihood(std::span<const uint8_t> received, std::span<const uint8_t> transmitted,
                                    const IdsParams& params) {
    return EventEnumerator{received, transmitted, params}.walk(0, 0);
}

std::vector<double> brute_force_symbol_likelihoods(std::span<const uint8_t> received, int n, int q, int u,
                                                   std::span<const uint8_t> blocks, const IdsParams& params) {
    std::vector<double> likelihoods(static_cast<size_t>(n) * q, 0.0);
    std::vector<uint8_t> symbols(n, 0);
    std::vector<uint8_t> sent(static_cast<size_t>(n) * u);
    double combos = 1.0;
    for (int i = 0; i < n; ++i) {
        combos *= q;
    }
    for (uint64_t index = 0; index < static_cast<uint64_t>(combos); ++index) {
        uint64_t rest = index;
        for (int i = n - 1; i >= 0; --i) {
            symbols[i] = static_cast<uint8_t>(rest % q);
            rest /= q;
        }
        for (int i = 0; i < n; ++i) {
            for (int y = 0; y < u; ++y) {
                sent[static_cast<size_t>(i) * u + y] =
                    blocks[(static_cast<size_t>(i) * q + symbols[i]) * u + y];
            }
        }
        const double p = event_enumeration_likelihood(received, sent, params);
        for (int i = 0; i < n; ++i) {
            likelihoods[static_cast<size_t>(i) * q + symbols[i]] += p;
        }
    }
    // Average over the q^(n-1) combinations of the other symbols.
    const double denom = combos / q;
    for (double& v : likelihoods) {
        v /= denom;
    }
    return likelihoods;
}

namespace {

char complement(char c) {
    switch (c) {
        case 'A': return 'T';
        case 'T': return 'A';
        case 'C': return 'G';
        case 'G': return 'C';
    }
    return 'N';
}

}  // namespace

int brute_force_hairpin(std::string_view seq) {
    const int len = static_cast<int>(seq.size());
    int best = 0;
    for (int i = 0; i < len; ++i) {
        for (int j = i; j < len; ++j) {
            // Stem of length L: seq[j .. j+L) == revcomp(seq[i .. i+L)), loop j - (i+L) >= 3.
            for (int L = 1; j + L <= len && j - (i + L) >= 3; ++L) {
                bool match = true;
                for (int t = 0; t < L && match; ++t) {
                    match = seq[j + t] == complement(seq[i + L - 1 - t]);
                }
                if (match) {
                    best = std::max(best, L);
                }
            }
        }
    }
    return best;
}

int brute_force_heteroduplex(std::string_view a, std::string_view b) {
    const std::string bs(b);
    int best = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t L = 1; i + L <= a.size(); ++L) {
            std::string rc;
            for (size_t t = 0; t < L; ++t) {
                rc.push_back(complement(a[i + L - 1 - t]));
            }
            if (bs.find(rc) != std::string::npos) {
                best = std::max<int>(best, static_cast<int>(L));
            }
        }
    }
    return best;
}

}  // namespace nswm::testing
