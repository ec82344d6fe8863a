#pragma once

#include <iosfwd>
#include <string>

namespace nswm {

struct SeqRecord {
    std::string id;
    std::string comment;
    std::string seq;
    std::string qual;  // empty for FASTA
};

// Streaming FASTA/FASTQ reader; the format is detected from the first
// record marker. Malformed records are reported one at a time so callers
// can choose between skipping (lenient) and aborting (strict).
class SeqReader {
public:
    explicit SeqReader(std::istream& in);

    enum class Status { ok, eof, malformed };

    Status next(SeqRecord& record);

    bool is_fastq() const { return fastq_; }

private:
    std::istream& in_;
    std::string pending_;
    bool have_pending_ = false;
    bool fastq_ = false;
    bool detected_ = false;

    bool get_line(std::string& line);
};

void write_fasta(std::ostream& os, const SeqRecord& record);
void write_fastq(std::ostream& os, const SeqRecord& record);

}  // namespace nswm
