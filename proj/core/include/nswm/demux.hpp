#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "nswm/barcode_set.hpp"
#include "nswm/boundary.hpp"
#include "nswm/inner_decoder.hpp"

namespace nswm {

enum class ReadStatus { assigned, discarded, unassignable };

std::string_view read_status_name(ReadStatus status);

struct DemuxOptions {
    int max_iters = 10;  // read-loss vs. misassignment knob
    bool try_reverse_complement = false;
    bool uniform_boundaries = false;  // baseline instead of context-aware estimation
    double max_n_fraction = 0.2;
};

struct DemuxResult {
    ReadStatus status = ReadStatus::unassignable;
    int64_t sample_id = -1;  // valid when assigned
    int iterations = 0;
    const char* detail = "";  // failure diagnostics
    double log_likelihood = 0.0;
};

// Stateless per-read decoding pipeline: boundary estimation, inner
// forward-backward likelihoods, outer BP decoding, sample lookup. Safe to
// share across threads. Holds a reference to the set, which must outlive it.
class Demultiplexer {
public:
    Demultiplexer(const BarcodeSet& set, const IdsParams& params, const DemuxOptions& options);

    const DriftWindow& window() const { return window_; }
    int decode_window_length() const { return window_len_; }

    DemuxResult demultiplex(std::string_view read) const;
    DemuxResult demultiplex_symbols(std::span<const uint8_t> read) const;

private:
    DemuxResult decode_one_orientation(std::span<const uint8_t> read) const;

    const BarcodeSet& set_;
    IdsParams params_;
    DemuxOptions options_;
    DriftWindow window_;
    ReadDecoder decoder_;
    std::vector<uint8_t> flank_symbols_;
    std::vector<uint8_t> consensus_symbols_;
    std::array<uint8_t, 5> complement_;  // in symbol space, per the set's mapping
    int window_len_;
};

struct DemuxFileSummary {
    uint64_t total = 0;
    uint64_t assigned = 0;
    uint64_t discarded = 0;
    uint64_t unassignable = 0;
    uint64_t malformed = 0;
};

// Streams FASTA/FASTQ records, decodes them on a worker pool and writes one
// TSV line per read in input order: read_id, status, sample_id, iterations.
// Malformed records are counted and skipped; strict mode throws instead.
DemuxFileSummary demultiplex_stream(const Demultiplexer& demux, std::istream& reads, std::ostream& tsv,
                                    bool strict, int threads);

void write_demux_summary(std::ostream& os, const DemuxFileSummary& summary);

}  // namespace nswm
