#include "nswm/demux.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "nswm/parallel.hpp"
#include "nswm/seq_io.hpp"

namespace nswm {

std::string_view read_status_name(ReadStatus status) {
    switch (status) {
        case ReadStatus::assigned:
            return "assigned";
        case ReadStatus::discarded:
            return "discarded";
        case ReadStatus::unassignable:
            return "unassignable";
    }
    return "unknown";
}

Demultiplexer::Demultiplexer(const BarcodeSet& set, const IdsParams& params, const DemuxOptions& options)
    : set_(set),
      params_(params),
      options_(options),
      window_(DriftWindow::for_span(static_cast<int>(set.flank().size() + set.consensus().size()) +
                                        set.barcode_length(),
                                    params, set.codebook().u)),
      decoder_(set.codebook(), set.watermark(), params, window_),
      flank_symbols_(set.mapping().decode(set.flank())),
      consensus_symbols_(set.mapping().decode(set.consensus())) {
    params_.validate();
    if (options_.max_iters < 0) {
        throw std::invalid_argument("max_iters must be >= 0");
    }
    window_len_ = static_cast<int>(set.flank().size() + set.consensus().size()) + set.barcode_length() +
                  window_.x_max + 4;
    // Complementation in symbol space, induced by the set's mapping.
    auto comp_char = [](char c) {
        switch (c) {
            case 'A': return 'T';
            case 'C': return 'G';
            case 'G': return 'C';
            case 'T': return 'A';
        }
        return 'N';
    };
    for (uint8_t s = 0; s < 4; ++s) {
        const char c = comp_char(set.mapping().symbol_to_char(s));
        complement_[s] = set.mapping().decode_lenient(std::string_view(&c, 1))[0];
    }
    complement_[kUnknownSymbol] = kUnknownSymbol;
}

DemuxResult Demultiplexer::decode_one_orientation(std::span<const uint8_t> read) const {
    DemuxResult result;
    const auto window_view = read.first(std::min<size_t>(read.size(), window_len_));

    size_t unknown = 0;
    for (uint8_t s : window_view) {
        unknown += s == kUnknownSymbol;
    }
    if (window_view.empty() ||
        static_cast<double>(unknown) > options_.max_n_fraction * static_cast<double>(window_view.size())) {
        result.detail = "n_overload";
        return result;
    }

    const int s0 = static_cast<int>(flank_symbols_.size());
    DriftDistribution f1 = options_.uniform_boundaries
                               ? DriftDistribution::uniform(window_)
                               : estimate_left(window_view, flank_symbols_, params_, window_);
    if (f1.is_zero()) {
        result.detail = "left_boundary_lost";
        return result;
    }
    DriftDistribution bn1 = options_.uniform_boundaries
                                ? DriftDistribution::uniform(window_)
                                : estimate_right(window_view, s0 + set_.barcode_length(),
                                                 consensus_symbols_, params_, window_);
    if (bn1.is_zero()) {
        result.detail = "right_boundary_lost";
        return result;
    }

    const auto decoded = decoder_.decode(window_view, s0, f1, bn1);
    if (!decoded.ok) {
        result.detail = "drift_window_exhausted";
        return result;
    }
    result.log_likelihood = decoded.total_log_forward;

    const DecodeOutcome outcome = bp_decode(set_.code(), decoded.likelihoods, options_.max_iters);
    result.iterations = outcome.iterations;
    if (outcome.status != DecodeStatus::decoded) {
        result.status = ReadStatus::discarded;
        result.detail = "bp_failure";
        return result;
    }
    const uint64_t message_index = set_.code().index_from_message(outcome.message);
    const int64_t row = set_.sample_row(message_index);
    if (row < 0) {
        // Valid codeword, but nobody uses it: a detected error.
        result.status = ReadStatus::discarded;
        result.detail = "unknown_sample";
        return result;
    }
    result.status = ReadStatus::assigned;
    result.sample_id = static_cast<int64_t>(message_index);
    result.detail = "";
    return result;
}

DemuxResult Demultiplexer::demultiplex_symbols(std::span<const uint8_t> read) const {
    DemuxResult forward = decode_one_orientation(read);
    if (!options_.try_reverse_complement) {
        return forward;
    }
    std::vector<uint8_t> rc(read.size());
    for (size_t i = 0; i < read.size(); ++i) {
        rc[read.size() - 1 - i] = complement_[read[i]];
    }
    DemuxResult reverse = decode_one_orientation(rc);
    const bool forward_usable = forward.status != ReadStatus::unassignable;
    const bool reverse_usable = reverse.status != ReadStatus::unassignable;
    if (forward_usable && reverse_usable) {
        return forward.log_likelihood >= reverse.log_likelihood ? forward : reverse;
    }
    return forward_usable ? forward : reverse;
}

DemuxResult Demultiplexer::demultiplex(std::string_view read) const {
    const auto symbols = set_.mapping().decode_lenient(read);
    return demultiplex_symbols(symbols);
}

DemuxFileSummary demultiplex_stream(const Demultiplexer& demux, std::istream& reads, std::ostream& tsv,
                                    bool strict, int threads) {
    DemuxFileSummary summary;
    SeqReader reader(reads);
    const int workers = effective_threads(threads);
    const size_t chunk_size = std::max<size_t>(256, static_cast<size_t>(workers) * 512);

    std::vector<SeqRecord> chunk;
    std::vector<DemuxResult> results;
    chunk.reserve(chunk_size);
    bool eof = false;
    while (!eof) {
        chunk.clear();
        while (chunk.size() < chunk_size) {
            SeqRecord record;
            const auto status = reader.next(record);
            if (status == SeqReader::Status::eof) {
                eof = true;
                break;
            }
            if (status == SeqReader::Status::malformed) {
                if (strict) {
                    throw std::runtime_error("malformed record in read input");
                }
                summary.malformed += 1;
                continue;
            }
            chunk.push_back(std::move(record));
        }
        if (chunk.empty()) {
            continue;
        }
        results.assign(chunk.size(), DemuxResult{});
        parallel_for(chunk.size(), workers, [&](uint64_t begin, uint64_t end, int) {
            for (uint64_t i = begin; i < end; ++i) {
                results[i] = demux.demultiplex(chunk[i].seq);
            }
        });
        for (size_t i = 0; i < chunk.size(); ++i) {
            const DemuxResult& r = results[i];
            summary.total += 1;
            switch (r.status) {
                case ReadStatus::assigned:
                    summary.assigned += 1;
                    break;
                case ReadStatus::discarded:
                    summary.discarded += 1;
                    break;
                case ReadStatus::unassignable:
                    summary.unassignable += 1;
                    break;
            }
            tsv << chunk[i].id << '\t' << read_status_name(r.status) << '\t';
            if (r.status == ReadStatus::assigned) {
                tsv << r.sample_id;
            } else {
                tsv << '-';
            }
            tsv << '\t' << r.iterations << '\n';
        }
    }
    return summary;
}

void write_demux_summary(std::ostream& os, const DemuxFileSummary& summary) {
    os << "reads " << summary.total << '\n'
       << "assigned " << summary.assigned << '\n'
       << "discarded " << summary.discarded << '\n'
       << "unassignable " << summary.unassignable << '\n'
       << "malformed " << summary.malformed << '\n';
}

}  // namespace nswm
