#include "nswm/watermark_search.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "nswm/rng.hpp"

namespace nswm {

WatermarkObjective::WatermarkObjective(const OuterCode& code, const InnerCodebook& codebook,
                                       const NucleotideMap& mapping, const FilterThresholds& thresholds,
                                       const AdapterContext& adapter)
    : mapping_(mapping), filter_(thresholds, adapter) {
    if (code.field().order() != codebook.q) {
        throw std::invalid_argument("codebook size does not match the field order");
    }
    const uint64_t count = code.message_count();
    if (count > (1ull << 20)) {
        throw std::invalid_argument("candidate set too large for watermark search");
    }
    candidate_count_ = static_cast<int>(count);
    length_ = code.n() * codebook.u;
    carriers_.resize(static_cast<size_t>(candidate_count_) * length_);
    for (uint64_t idx = 0; idx < count; ++idx) {
        const auto carrier = expand(code.encode(code.message_from_index(idx)), codebook);
        std::copy(carrier.begin(), carrier.end(), carriers_.begin() + static_cast<size_t>(idx) * length_);
    }
    sequences_.assign(candidate_count_, std::string(length_, 'A'));
}

int WatermarkObjective::survivors(std::span<const uint8_t> watermark) const {
    if (static_cast<int>(watermark.size()) != length_) {
        throw std::invalid_argument("watermark length mismatch");
    }
    queries_ += 1;
    std::string key(watermark.begin(), watermark.end());
    if (auto it = memo_.find(key); it != memo_.end()) {
        return it->second;
    }
    evaluations_ += 1;
    for (int m = 0; m < candidate_count_; ++m) {
        const uint8_t* carrier = carriers_.data() + static_cast<size_t>(m) * length_;
        std::string& seq = sequences_[m];
        for (int i = 0; i < length_; ++i) {
            seq[i] = mapping_.symbol_to_char(static_cast<uint8_t>(carrier[i] ^ watermark[i]));
        }
    }
    const int count = filter_.count_survivors(sequences_);
    memo_.emplace(std::move(key), count);
    return count;
}

bool local_pass(const WatermarkObjective& objective, std::vector<uint8_t>& watermark, int& cost,
                std::vector<IlsHistoryEntry>* history, uint64_t* step) {
    bool improved = false;
    const int l = objective.watermark_length();
    for (int pos = 0; pos < l; ++pos) {
        const uint8_t incumbent = watermark[pos];
        uint8_t best_base = incumbent;
        int best_cost = cost;
        for (uint8_t b = 0; b < 4; ++b) {
            if (b == incumbent) {
                continue;
            }
            watermark[pos] = b;
            const int c = objective.cost(watermark);
            // Strict improvement only; ties keep the incumbent base.
            if (c < best_cost) {
                best_cost = c;
                best_base = b;
            }
        }
        watermark[pos] = best_base;
        if (best_base != incumbent) {
            cost = best_cost;
            improved = true;
            if (history != nullptr && step != nullptr) {
                history->push_back({++*step, cost, objective.candidate_count() - cost});
            }
        }
    }
    return improved;
}

IlsResult ils_optimize(const WatermarkObjective& objective, uint64_t seed, const IlsOptions& options) {
    if (options.restarts < 0) {
        throw std::invalid_argument("restarts must be >= 0");
    }
    const int l = objective.watermark_length();
    const int p = options.perturbation > 0 ? options.perturbation
                                           : std::max(2, static_cast<int>((l + 7) / 8));

    auto rng = make_stream(seed, 0);
    std::uniform_int_distribution<int> base(0, 3);
    std::uniform_int_distribution<int> position(0, l - 1);
    std::uniform_int_distribution<int> shift(1, 3);

    std::vector<uint8_t> current(l);
    for (auto& s : current) {
        s = static_cast<uint8_t>(base(rng));
    }
    int cost = objective.cost(current);

    IlsResult result;
    result.watermark = current;
    result.cost = cost;
    uint64_t step = 0;
    result.history.push_back({step, cost, objective.candidate_count() - cost});

    for (int round = 0;; ++round) {
        while (local_pass(objective, current, cost, &result.history, &step)) {
        }
        if (cost < result.cost) {
            result.cost = cost;
            result.watermark = current;
        }
        if (round == options.restarts || result.cost == 0) {
            break;
        }
        // Perturb a fixed number of distinct positions to different bases.
        std::vector<int> chosen;
        while (static_cast<int>(chosen.size()) < std::min(p, l)) {
            const int pos = position(rng);
            if (std::find(chosen.begin(), chosen.end(), pos) == chosen.end()) {
                chosen.push_back(pos);
            }
        }
        for (int pos : chosen) {
            current[pos] = static_cast<uint8_t>((current[pos] + shift(rng)) & 3);
        }
        cost = objective.cost(current);
        result.history.push_back({++step, cost, objective.candidate_count() - cost});
    }

    result.survivors = objective.candidate_count() - result.cost;
    result.feasible = result.survivors > 0;
    return result;
}

void write_ils_trace(std::ostream& os, std::span<const IlsHistoryEntry> history) {
    os << "iteration\tcost\tsurvivors\n";
    for (const auto& h : history) {
        os << h.step << '\t' << h.cost << '\t' << h.survivors << '\n';
    }
}

}  // namespace nswm
