#include "nswm/seq_io.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace nswm {

namespace {

void split_header(const std::string& line, SeqRecord& record) {
    const size_t space = line.find_first_of(" \t", 1);
    if (space == std::string::npos) {
        record.id = line.substr(1);
        record.comment.clear();
    } else {
        record.id = line.substr(1, space - 1);
        record.comment = line.substr(space + 1);
    }
}

}  // namespace

SeqReader::SeqReader(std::istream& in) : in_(in) {}

bool SeqReader::get_line(std::string& line) {
    if (have_pending_) {
        line = std::move(pending_);
        have_pending_ = false;
        return true;
    }
    while (std::getline(in_, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        return true;
    }
    return false;
}

SeqReader::Status SeqReader::next(SeqRecord& record) {
    std::string line;
    // Find the next header, skipping blank lines (and garbage when
    // resynchronizing after a malformed record).
    while (true) {
        if (!get_line(line)) {
            return Status::eof;
        }
        if (line.empty()) {
            continue;
        }
        if (!detected_) {
            if (line[0] != '>' && line[0] != '@') {
                throw std::runtime_error("input is neither FASTA nor FASTQ");
            }
            fastq_ = line[0] == '@';
            detected_ = true;
        }
        if (line[0] == (fastq_ ? '@' : '>')) {
            break;
        }
        return Status::malformed;
    }

    record.id.clear();
    record.comment.clear();
    record.seq.clear();
    record.qual.clear();
    split_header(line, record);
    if (record.id.empty()) {
        return Status::malformed;
    }

    if (!fastq_) {
        while (get_line(line)) {
            if (!line.empty() && line[0] == '>') {
                pending_ = std::move(line);
                have_pending_ = true;
                break;
            }
            record.seq += line;
        }
        return record.seq.empty() ? Status::malformed : Status::ok;
    }

    if (!get_line(record.seq) || record.seq.empty() || record.seq[0] == '@' || record.seq[0] == '+') {
        return Status::malformed;
    }
    if (!get_line(line) || line.empty() || line[0] != '+') {
        return Status::malformed;
    }
    if (!get_line(record.qual) || record.qual.size() != record.seq.size()) {
        return Status::malformed;
    }
    return Status::ok;
}

void write_fasta(std::ostream& os, const SeqRecord& record) {
    os << '>' << record.id;
    if (!record.comment.empty()) {
        os << ' ' << record.comment;
    }
    os << '\n' << record.seq << '\n';
}

void write_fastq(std::ostream& os, const SeqRecord& record) {
    os << '@' << record.id;
    if (!record.comment.empty()) {
        os << ' ' << record.comment;
    }
    os << '\n' << record.seq << "\n+\n";
    if (record.qual.size() == record.seq.size()) {
        os << record.qual;
    } else {
        os << std::string(record.seq.size(), 'I');
    }
    os << '\n';
}

}  // namespace nswm
