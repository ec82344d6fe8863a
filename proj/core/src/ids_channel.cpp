#include "nswm/ids_channel.hpp"

#include <cmath>
#include <stdexcept>

namespace nswm {

void IdsParams::validate() const {
    if (p_ins < 0.0 || p_ins >= 1.0 || p_del < 0.0 || p_del >= 1.0 || p_sub < 0.0 || p_sub >= 1.0) {
        throw std::invalid_argument("channel probabilities must lie in [0, 1)");
    }
    if (p_ins + p_del >= 1.0) {
        throw std::invalid_argument("p_ins + p_del must be < 1");
    }
    if (max_insertions < 0) {
        throw std::invalid_argument("max_insertions must be >= 0");
    }
}

std::vector<uint8_t> transmit(std::span<const uint8_t> seq, const IdsParams& params,
                              std::mt19937_64& rng, ChannelCounts* counts) {
    params.validate();
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> base(0, 3);
    std::uniform_int_distribution<int> shift(1, 3);

    std::vector<uint8_t> out;
    out.reserve(seq.size() + seq.size() / 8 + 4);
    for (uint8_t t : seq) {
        if (counts != nullptr) {
            counts->bases += 1;
        }
        int inserted = 0;
        bool deleted = false;
        while (true) {
            if (inserted < params.max_insertions) {
                const double roll = coin(rng);
                if (roll < params.p_ins) {
                    out.push_back(static_cast<uint8_t>(base(rng)));
                    ++inserted;
                    if (counts != nullptr) {
                        counts->insertions += 1;
                    }
                    continue;
                }
                deleted = roll < params.p_ins + params.p_del;
            } else {
                // Insertion run is capped; only delete-vs-transmit remains.
                deleted = coin(rng) < params.p_del;
            }
            break;
        }
        if (deleted) {
            if (counts != nullptr) {
                counts->deletions += 1;
            }
            continue;
        }
        if (coin(rng) < params.p_sub) {
            out.push_back(static_cast<uint8_t>((t + shift(rng)) & 3));
            if (counts != nullptr) {
                counts->substitutions += 1;
            }
        } else {
            out.push_back(t);
        }
    }
    return out;
}

EmissionTable::EmissionTable(const IdsParams& params) : cap_(params.max_insertions + 1) {
    params.validate();
    const double pt = params.p_trans();
    const double hit = 1.0 - params.p_sub;
    const double miss = params.p_sub / 3.0;

    del_ = params.p_del;
    match_.assign(cap_ + 1, 0.0);
    mismatch_.assign(cap_ + 1, 0.0);
    unknown_.assign(cap_ + 1, 0.0);

    // ins_pow[j] = (p_ins/4)^j, one factor per specific inserted base.
    std::vector<double> ins_pow(cap_ + 1, 1.0);
    for (int j = 1; j <= cap_; ++j) {
        ins_pow[j] = ins_pow[j - 1] * (params.p_ins / 4.0);
    }
    for (int mu = 1; mu < cap_; ++mu) {
        match_[mu] = ins_pow[mu] * params.p_del + ins_pow[mu - 1] * pt * hit;
        mismatch_[mu] = ins_pow[mu] * params.p_del + ins_pow[mu - 1] * pt * miss;
    }
    // A received run of I+1 symbols means the insertion cap was hit, after
    // which the base survives with probability 1 - p_del.
    match_[cap_] = ins_pow[cap_ - 1] * (1.0 - params.p_del) * hit;
    mismatch_[cap_] = ins_pow[cap_ - 1] * (1.0 - params.p_del) * miss;
    for (int mu = 1; mu <= cap_; ++mu) {
        unknown_[mu] = 0.25 * match_[mu] + 0.75 * mismatch_[mu];
    }
}

double emission_prob(std::span<const uint8_t> received, uint8_t t, const IdsParams& params) {
    const EmissionTable table(params);
    const int mu = static_cast<int>(received.size());
    if (mu == 0) {
        return table.del();
    }
    return table.value(mu, received.back(), t);
}

}  // namespace nswm
