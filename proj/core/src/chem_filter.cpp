#include "nswm/chem_filter.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <stdexcept>

namespace nswm {

namespace {

constexpr int kMaxScreenKmer = 10;  // table of 4^k entries; beyond this use exact scans

constexpr std::array<int8_t, 256> make_base_codes() {
    std::array<int8_t, 256> codes{};
    codes.fill(-1);
    codes['A'] = 0;
    codes['C'] = 1;
    codes['G'] = 2;
    codes['T'] = 3;
    return codes;
}

constexpr auto kBaseCode = make_base_codes();

int base_code(char c) {
    const int8_t v = kBaseCode[static_cast<unsigned char>(c)];
    if (v < 0) {
        throw std::invalid_argument(std::string("non-ACGT character '") + c + "'");
    }
    return v;
}

// Complement of a 2-bit base code: A<->T, C<->G.
inline int comp_code(int code) {
    return 3 - code;
}

uint32_t pack_kmer(std::string_view seq, size_t pos, int k) {
    uint32_t packed = 0;
    for (int i = 0; i < k; ++i) {
        packed = (packed << 2) | static_cast<uint32_t>(base_code(seq[pos + i]));
    }
    return packed;
}

uint32_t rc_kmer(uint32_t packed, int k) {
    uint32_t rc = 0;
    for (int i = 0; i < k; ++i) {
        rc = (rc << 2) | (3u - (packed & 3u));
        packed >>= 2;
    }
    return rc;
}

}  // namespace

void FilterThresholds::validate() const {
    if (gc_min < 0.0 || gc_max > 1.0 || gc_min > gc_max) {
        throw std::invalid_argument("need 0 <= gc_min <= gc_max <= 1");
    }
    if (max_homopolymer < 1 || max_heteroduplex < 1 || max_hairpin < 1) {
        throw std::invalid_argument("length thresholds must be positive");
    }
}

std::string reverse_complement(std::string_view seq) {
    static constexpr char kBases[4] = {'A', 'C', 'G', 'T'};
    std::string out(seq.size(), 'N');
    for (size_t i = 0; i < seq.size(); ++i) {
        out[seq.size() - 1 - i] = kBases[comp_code(base_code(seq[i]))];
    }
    return out;
}

double gc_content(std::string_view seq) {
    if (seq.empty()) {
        throw std::invalid_argument("empty sequence");
    }
    int gc = 0;
    for (char c : seq) {
        const int code = base_code(c);
        gc += code == 1 || code == 2;
    }
    return static_cast<double>(gc) / static_cast<double>(seq.size());
}

int max_homopolymer(std::string_view seq) {
    if (seq.empty()) {
        throw std::invalid_argument("empty sequence");
    }
    int best = 1;
    int run = 1;
    for (size_t i = 1; i < seq.size(); ++i) {
        base_code(seq[i]);
        run = seq[i] == seq[i - 1] ? run + 1 : 1;
        best = std::max(best, run);
    }
    base_code(seq[0]);
    return best;
}

int hairpin_len(std::string_view seq) {
    const int len = static_cast<int>(seq.size());
    std::vector<int> codes(len);
    for (int i = 0; i < len; ++i) {
        codes[i] = base_code(seq[i]);
    }
    // Walk anti-diagonals (x + y constant); a run of complementary pairs
    // ending at the innermost pair (x, y) is a stem of that length whose
    // loop is y - x - 1. Too-small loops sacrifice inner pairs.
    int best = 0;
    for (int d = 1; d <= 2 * len - 3; ++d) {
        int run = 0;
        for (int x = std::max(0, d - len + 1); 2 * x < d; ++x) {
            const int y = d - x;
            if (y >= len) {
                continue;
            }
            run = codes[x] == comp_code(codes[y]) ? run + 1 : 0;
            if (run == 0) {
                continue;
            }
            const int gap = y - x - 1;
            const int sacrificed = gap >= 3 ? 0 : (3 - gap + 1) / 2;
            best = std::max(best, run - sacrificed);
        }
    }
    return best;
}

int heteroduplex_len(std::string_view a, std::string_view b) {
    const std::string rb = reverse_complement(b);
    // Longest common substring of a and revcomp(b), rolling row.
    std::vector<int> prev(rb.size() + 1, 0);
    std::vector<int> cur(rb.size() + 1, 0);
    int best = 0;
    for (size_t i = 1; i <= a.size(); ++i) {
        base_code(a[i - 1]);
        for (size_t j = 1; j <= rb.size(); ++j) {
            cur[j] = a[i - 1] == rb[j - 1] ? prev[j - 1] + 1 : 0;
            best = std::max(best, cur[j]);
        }
        std::swap(prev, cur);
    }
    return best;
}

std::string_view filter_rule_name(FilterRule rule) {
    switch (rule) {
        case FilterRule::gc:
            return "gc_content";
        case FilterRule::homopolymer:
            return "homopolymer";
        case FilterRule::hairpin:
            return "hairpin";
        case FilterRule::heteroduplex_adapter:
            return "heteroduplex_adapter";
        case FilterRule::heteroduplex_cross:
            return "heteroduplex_cross";
    }
    return "unknown";
}

ChemFilter::ChemFilter(FilterThresholds thresholds, AdapterContext adapter)
    : thresholds_(thresholds), adapter_(std::move(adapter)) {
    thresholds_.validate();
    const int k = thresholds_.max_heteroduplex + 1;
    if (k <= kMaxScreenKmer) {
        kmer_len_ = k;
        for (const std::string& flank : {adapter_.left_flank, adapter_.right_flank}) {
            if (static_cast<int>(flank.size()) >= k) {
                for (size_t pos = 0; pos + k <= flank.size(); ++pos) {
                    adapter_kmers_.push_back(pack_kmer(flank, pos, k));
                }
            }
        }
        std::sort(adapter_kmers_.begin(), adapter_kmers_.end());
        adapter_kmers_.erase(std::unique(adapter_kmers_.begin(), adapter_kmers_.end()), adapter_kmers_.end());
    }
}

FilterOutcome ChemFilter::run(std::span<const std::string> candidates, bool want_report) const {
    FilterOutcome out;
    out.survivors.reserve(candidates.size());

    const int het_k = kmer_len_;
    const int hp_k = thresholds_.max_hairpin + 1;
    const bool hp_screen = hp_k <= kMaxScreenKmer;

    run_stamp_ += 1;
    const uint64_t kept_stamp = run_stamp_;
    if (het_k > 0 && kept_owner_.size() != (size_t{1} << (2 * het_k))) {
        kept_owner_.assign(size_t{1} << (2 * het_k), -1);
        kept_stamp_.assign(size_t{1} << (2 * het_k), 0);
    }
    if (hp_screen && hairpin_stamp_.size() != (size_t{1} << (2 * hp_k))) {
        hairpin_stamp_.assign(size_t{1} << (2 * hp_k), 0);
    }

    std::vector<uint32_t> scratch_kmers;
    std::vector<uint32_t> kept_list;  // used only by the exact fallback
    const bool het_exact = het_k == 0;

    for (uint32_t idx = 0; idx < candidates.size(); ++idx) {
        const std::string& seq = candidates[idx];
        const int len = static_cast<int>(seq.size());

        const double gc = gc_content(seq);
        if (gc < thresholds_.gc_min || gc > thresholds_.gc_max) {
            if (want_report) {
                out.rejections.push_back({idx, FilterRule::gc, gc,
                                          gc < thresholds_.gc_min ? thresholds_.gc_min : thresholds_.gc_max});
            }
            continue;
        }

        const int homopolymer = max_homopolymer(seq);
        if (homopolymer > thresholds_.max_homopolymer) {
            if (want_report) {
                out.rejections.push_back({idx, FilterRule::homopolymer, static_cast<double>(homopolymer),
                                          static_cast<double>(thresholds_.max_homopolymer)});
            }
            continue;
        }

        bool hairpin_bad = false;
        if (hp_k <= len) {
            if (hp_screen) {
                candidate_stamp_ += 1;
                uint32_t fwd = 0;
                const uint32_t mask = (1u << (2 * hp_k)) - 1;
                for (int j = 0; j < len; ++j) {
                    fwd = ((fwd << 2) | static_cast<uint32_t>(base_code(seq[j]))) & mask;
                    const int start = j - hp_k + 1;  // k-mer starting here just completed
                    if (start < 0) {
                        continue;
                    }
                    // Delay insertion so only stems with a loop >= 3 match.
                    const int avail = start - hp_k - 3;
                    if (avail >= 0) {
                        hairpin_stamp_[pack_kmer(seq, static_cast<size_t>(avail), hp_k)] = candidate_stamp_;
                    }
                    if (hairpin_stamp_[rc_kmer(fwd, hp_k)] == candidate_stamp_) {
                        hairpin_bad = true;
                        break;
                    }
                }
            } else {
                hairpin_bad = hairpin_len(seq) > thresholds_.max_hairpin;
            }
        }
        if (hairpin_bad) {
            if (want_report) {
                out.rejections.push_back({idx, FilterRule::hairpin, static_cast<double>(hairpin_len(seq)),
                                          static_cast<double>(thresholds_.max_hairpin)});
            }
            continue;
        }

        // Collect this candidate's packed k-mers once for the duplex checks.
        bool adapter_bad = false;
        bool cross_bad = false;
        int32_t cross_partner = -1;
        if (!het_exact) {
            scratch_kmers.clear();
            if (het_k <= len) {
                uint32_t fwd = 0;
                const uint32_t mask = (1u << (2 * het_k)) - 1;
                for (int j = 0; j < len; ++j) {
                    fwd = ((fwd << 2) | static_cast<uint32_t>(base_code(seq[j]))) & mask;
                    if (j >= het_k - 1) {
                        scratch_kmers.push_back(fwd);
                    }
                }
            }
            for (uint32_t kmer : scratch_kmers) {
                const uint32_t rc = rc_kmer(kmer, het_k);
                if (std::binary_search(adapter_kmers_.begin(), adapter_kmers_.end(), rc)) {
                    adapter_bad = true;
                    break;
                }
            }
            if (!adapter_bad) {
                for (uint32_t kmer : scratch_kmers) {
                    const uint32_t rc = rc_kmer(kmer, het_k);
                    if (kept_stamp_[rc] == kept_stamp) {
                        cross_bad = true;
                        cross_partner = kept_owner_[rc];
                        break;
                    }
                }
            }
        } else {
            const int left = heteroduplex_len(seq, adapter_.left_flank);
            const int right = heteroduplex_len(seq, adapter_.right_flank);
            adapter_bad = std::max(left, right) > thresholds_.max_heteroduplex;
            if (!adapter_bad) {
                for (uint32_t kept : kept_list) {
                    if (heteroduplex_len(seq, candidates[kept]) > thresholds_.max_heteroduplex) {
                        cross_bad = true;
                        cross_partner = static_cast<int32_t>(kept);
                        break;
                    }
                }
            }
        }
        if (adapter_bad) {
            if (want_report) {
                const double measured = std::max(heteroduplex_len(seq, adapter_.left_flank),
                                                 heteroduplex_len(seq, adapter_.right_flank));
                out.rejections.push_back({idx, FilterRule::heteroduplex_adapter, measured,
                                          static_cast<double>(thresholds_.max_heteroduplex)});
            }
            continue;
        }
        if (cross_bad) {
            if (want_report) {
                const double measured = heteroduplex_len(seq, candidates[cross_partner]);
                out.rejections.push_back({idx, FilterRule::heteroduplex_cross, measured,
                                          static_cast<double>(thresholds_.max_heteroduplex)});
            }
            continue;
        }

        out.survivors.push_back(idx);
        if (!het_exact) {
            for (uint32_t kmer : scratch_kmers) {
                if (kept_stamp_[kmer] != kept_stamp) {
                    kept_stamp_[kmer] = kept_stamp;
                    kept_owner_[kmer] = static_cast<int32_t>(idx);
                }
            }
        } else {
            kept_list.push_back(idx);
        }
    }
    return out;
}

int ChemFilter::count_survivors(std::span<const std::string> candidates) const {
    return static_cast<int>(run(candidates, false).survivors.size());
}

void write_rejection_report(std::ostream& os, std::span<const Rejection> rejections) {
    os << "candidate\trule\tmeasured\tthreshold\n";
    for (const auto& r : rejections) {
        os << r.candidate_index << '\t' << filter_rule_name(r.rule) << '\t' << r.measured << '\t' << r.threshold
           << '\n';
    }
}

}  // namespace nswm
