#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nswm/barcode.hpp"
#include "nswm/chem_filter.hpp"
#include "nswm/outer_code.hpp"
#include "nswm/watermark_search.hpp"

namespace nswm {

inline constexpr int kBarcodeSetVersion = 1;
inline constexpr std::string_view kDefaultFlank = "TCGTAGAGTGAT";
inline constexpr std::string_view kDefaultConsensus = "ATGGCAGAATGTGATAGTCGGTTGTGGAGC";

struct SampleRecord {
    uint64_t id;          // message index; the barcode regenerates from it
    std::string barcode;  // nucleotide string of length n * u
};

// Everything a demultiplexer needs: the code, inner codebook, watermark,
// nucleotide mapping, boundary context and the per-sample barcodes that
// survived chemical filtering.
class BarcodeSet {
public:
    BarcodeSet(OuterCode code, InnerCodebook codebook, std::vector<uint8_t> watermark, NucleotideMap mapping,
               std::string flank, std::string consensus, FilterThresholds thresholds,
               std::vector<SampleRecord> samples);

    const OuterCode& code() const { return code_; }
    const InnerCodebook& codebook() const { return codebook_; }
    const std::vector<uint8_t>& watermark() const { return watermark_; }
    const NucleotideMap& mapping() const { return mapping_; }
    const std::string& flank() const { return flank_; }
    const std::string& consensus() const { return consensus_; }
    const FilterThresholds& thresholds() const { return thresholds_; }
    const std::vector<SampleRecord>& samples() const { return samples_; }

    int barcode_length() const { return code_.n() * codebook_.u; }

    // Row in samples() for a message index, or -1.
    int64_t sample_row(uint64_t id) const;

    std::string regenerate_barcode(uint64_t id) const;

    // Re-derives every stored barcode from its sample id; throws
    // std::runtime_error on any mismatch.
    void validate() const;

private:
    OuterCode code_;
    InnerCodebook codebook_;
    std::vector<uint8_t> watermark_;
    NucleotideMap mapping_;
    std::string flank_;
    std::string consensus_;
    FilterThresholds thresholds_;
    std::vector<SampleRecord> samples_;
    std::unordered_map<uint64_t, int64_t> row_by_id_;
};

enum class WatermarkMode { ils, random };

struct BuildParams {
    int q = 16;
    int k = 2;
    int u = 4;
    int l = 24;
    uint64_t code_seed = 1;
    uint64_t codebook_seed = 1;
    uint64_t watermark_seed = 1;
    WatermarkMode watermark_mode = WatermarkMode::ils;
    IlsOptions ils;
    CodebookSearchParams codebook_search;
    FilterThresholds thresholds;
    std::string flank = std::string(kDefaultFlank);
    std::string consensus = std::string(kDefaultConsensus);
    std::string mapping = "ACGT";

    void validate() const;  // throws std::invalid_argument (l = n*u etc.)
};

struct BuildResult {
    BarcodeSet set;
    std::vector<IlsHistoryEntry> ils_history;
    std::vector<Rejection> rejections;
    int candidate_count = 0;
    int codebook_distance = 0;
    int code_distance = 0;  // 0 when not enumerable
};

// Full construction pipeline: code, inner codebook, watermark (optimized or
// random), candidate expansion and chemical filtering. Throws when nothing
// survives filtering (advice: re-optimize the watermark or relax thresholds).
BuildResult build_barcode_set(const BuildParams& params);

// Versioned line-oriented text format with a trailing checksum line.
void save_barcode_set(const BarcodeSet& set, std::ostream& os);
void save_barcode_set(const BarcodeSet& set, const std::filesystem::path& path);
BarcodeSet load_barcode_set(std::istream& is);
BarcodeSet load_barcode_set(const std::filesystem::path& path);

}  // namespace nswm
